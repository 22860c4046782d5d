//! Finite undirected graphs: proper colorings, exact chromatic number,
//! girth, and seeded G(n, p) sampling.
//!
//! Graphs are small (desk scale, at most a few hundred nodes) and are stored
//! as sorted adjacency sets. The chromatic number is computed exactly by a
//! DSATUR branch and bound.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite simple undirected graph on nodes `0..node_count`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Graph {
    adjacency: Vec<BTreeSet<usize>>,
}

impl Graph {
    /// An edgeless graph.
    pub fn empty(node_count: usize) -> Self {
        Graph {
            adjacency: vec![BTreeSet::new(); node_count],
        }
    }

    pub fn from_edges<I>(node_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::empty(node_count);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// The complete graph K_n.
    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.insert(u, v);
            }
        }
        g
    }

    /// The cycle C_n (n >= 3).
    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidParameter(format!("cycle needs at least 3 nodes, got {n}")));
        }
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    /// The path on `n` nodes.
    pub fn path(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for i in 1..n {
            g.insert(i - 1, i);
        }
        g
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        let n = self.node_count();
        if u == v {
            return Err(Error::InvalidGraph(format!("self-loop at node {u}")));
        }
        if u >= n || v >= n {
            return Err(Error::InvalidGraph(format!(
                "edge ({u}, {v}) out of range for {n} nodes"
            )));
        }
        self.insert(u, v);
        Ok(())
    }

    fn insert(&mut self, u: usize, v: usize) {
        self.adjacency[u].insert(v);
        self.adjacency[v].insert(u);
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(BTreeSet::len).sum::<usize>() / 2
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency.get(u).is_some_and(|a| a.contains(&v))
    }

    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.adjacency[u].iter().copied()
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adjacency[u].len()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, adj)| adj.range(u + 1..).map(move |&v| (u, v)))
    }

    /// Disjoint union, relabelling `other`'s nodes after `self`'s.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let offset = self.node_count();
        let mut g = self.clone();
        g.adjacency
            .extend(other.adjacency.iter().map(|adj| adj.iter().map(|v| v + offset).collect()));
        g
    }

    /// True if some three pairwise adjacent nodes exist.
    pub fn has_triangle(&self) -> bool {
        self.edges().any(|(u, v)| {
            self.adjacency[u]
                .intersection(&self.adjacency[v])
                .next()
                .is_some()
        })
    }
}

/// `count` disjoint copies of K_`size`; copy `c` occupies nodes
/// `c*size .. (c+1)*size`.
pub fn make_disjoint_cliques(count: usize, size: usize) -> Graph {
    let mut g = Graph::empty(count * size);
    for c in 0..count {
        let base = c * size;
        for u in 0..size {
            for v in u + 1..size {
                g.insert(base + u, base + v);
            }
        }
    }
    g
}

/// A color per node.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Coloring {
    pub assignment: Vec<usize>,
}

impl Coloring {
    pub fn new(assignment: Vec<usize>) -> Self {
        Coloring { assignment }
    }

    pub fn color(&self, node: usize) -> usize {
        self.assignment[node]
    }

    /// One more than the largest color used (0 for the empty coloring).
    pub fn color_count(&self) -> usize {
        self.assignment.iter().max().map_or(0, |c| c + 1)
    }

    /// Returns the first monochromatic edge, if any, or an error if the
    /// coloring does not cover the graph.
    pub fn check_proper(&self, g: &Graph) -> Result<()> {
        if self.assignment.len() != g.node_count() {
            return Err(Error::ImproperColoring(format!(
                "coloring covers {} nodes, graph has {}",
                self.assignment.len(),
                g.node_count()
            )));
        }
        if let Some((u, v)) = g.edges().find(|&(u, v)| self.assignment[u] == self.assignment[v]) {
            return Err(Error::ImproperColoring(format!(
                "edge ({u}, {v}) has both endpoints colored {}",
                self.assignment[u]
            )));
        }
        Ok(())
    }

    pub fn is_proper(&self, g: &Graph) -> bool {
        self.check_proper(g).is_ok()
    }
}

/// Exact chromatic number together with an optimal coloring.
///
/// DSATUR branch and bound: vertices are picked by saturation degree (ties by
/// degree, then by index) and colors are tried in increasing order, so the
/// result is deterministic.
pub fn chromatic_number(g: &Graph) -> (usize, Coloring) {
    let n = g.node_count();
    if n == 0 {
        return (0, Coloring::new(Vec::new()));
    }
    let mut search = Dsatur::new(g);
    let greedy = search.greedy();
    let lower = greedy_clique_size(g);
    search.best = greedy.color_count();
    search.best_coloring = greedy.assignment;
    if search.best > lower {
        search.lower = lower;
        search.branch(0, 0);
    }
    (search.best, Coloring::new(search.best_coloring))
}

struct Dsatur<'a> {
    g: &'a Graph,
    colors: Vec<Option<usize>>,
    // neighbour_colors[v][c] = number of neighbours of v colored c
    neighbour_colors: Vec<Vec<usize>>,
    saturation: Vec<usize>,
    best: usize,
    best_coloring: Vec<usize>,
    lower: usize,
}

impl<'a> Dsatur<'a> {
    fn new(g: &'a Graph) -> Self {
        let n = g.node_count();
        Dsatur {
            g,
            colors: vec![None; n],
            neighbour_colors: vec![vec![0; n + 1]; n],
            saturation: vec![0; n],
            best: n,
            best_coloring: (0..n).collect(),
            lower: 1,
        }
    }

    fn pick(&self) -> Option<usize> {
        (0..self.g.node_count())
            .filter(|&v| self.colors[v].is_none())
            .max_by(|&a, &b| {
                (self.saturation[a], self.g.degree(a))
                    .cmp(&(self.saturation[b], self.g.degree(b)))
                    .then(b.cmp(&a))
            })
    }

    fn assign(&mut self, v: usize, c: usize) {
        self.colors[v] = Some(c);
        for u in self.g.neighbors(v) {
            if self.neighbour_colors[u][c] == 0 {
                self.saturation[u] += 1;
            }
            self.neighbour_colors[u][c] += 1;
        }
    }

    fn unassign(&mut self, v: usize, c: usize) {
        self.colors[v] = None;
        for u in self.g.neighbors(v) {
            self.neighbour_colors[u][c] -= 1;
            if self.neighbour_colors[u][c] == 0 {
                self.saturation[u] -= 1;
            }
        }
    }

    fn greedy(&mut self) -> Coloring {
        let mut order = Vec::new();
        while let Some(v) = self.pick() {
            let c = (0..).find(|&c| self.neighbour_colors[v][c] == 0).unwrap_or(0);
            self.assign(v, c);
            order.push((v, c));
        }
        let assignment = self.colors.iter().map(|c| c.unwrap_or(0)).collect();
        for (v, c) in order.into_iter().rev() {
            self.unassign(v, c);
        }
        Coloring::new(assignment)
    }

    fn branch(&mut self, colored: usize, used: usize) {
        if self.best == self.lower {
            return;
        }
        let Some(v) = self.pick() else {
            if used < self.best {
                self.best = used;
                self.best_coloring = self.colors.iter().map(|c| c.unwrap_or(0)).collect();
            }
            return;
        };
        let limit = (used + 1).min(self.best - 1);
        for c in 0..limit {
            if self.neighbour_colors[v][c] != 0 {
                continue;
            }
            self.assign(v, c);
            self.branch(colored + 1, used.max(c + 1));
            self.unassign(v, c);
            if self.best == self.lower {
                return;
            }
        }
    }
}

fn greedy_clique_size(g: &Graph) -> usize {
    let mut best = usize::from(g.node_count() > 0);
    for start in 0..g.node_count() {
        let mut clique = vec![start];
        let mut candidates: Vec<usize> = g.neighbors(start).collect();
        candidates.sort_by_key(|&v| std::cmp::Reverse(g.degree(v)));
        for v in candidates {
            if clique.iter().all(|&u| g.has_edge(u, v)) {
                clique.push(v);
            }
        }
        best = best.max(clique.len());
    }
    best
}

/// Length of a shortest cycle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Girth {
    Finite(usize),
    /// The graph is a forest.
    Infinite,
}

impl fmt::Display for Girth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Girth::Finite(k) => write!(f, "{k}"),
            Girth::Infinite => f.write_str("infinite"),
        }
    }
}

/// Shortest cycle length by a BFS from every node.
pub fn girth(g: &Graph) -> Girth {
    let n = g.node_count();
    let mut best = usize::MAX;
    let mut dist = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    for root in 0..n {
        dist.iter_mut().for_each(|d| *d = usize::MAX);
        dist[root] = 0;
        parent[root] = usize::MAX;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            if 2 * dist[u] + 1 >= best {
                break;
            }
            for w in g.neighbors(u) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    queue.push_back(w);
                } else if parent[u] != w {
                    best = best.min(dist[u] + dist[w] + 1);
                }
            }
        }
    }
    if best == usize::MAX {
        Girth::Infinite
    } else {
        Girth::Finite(best)
    }
}

/// The color classes of a proper coloring, one (possibly empty) set per color
/// `0..color_count`.
pub fn independent_partition(g: &Graph, c: &Coloring) -> Result<Vec<BTreeSet<usize>>> {
    c.check_proper(g)?;
    let mut classes = vec![BTreeSet::new(); c.color_count()];
    for (v, &color) in c.assignment.iter().enumerate() {
        classes[color].insert(v);
    }
    Ok(classes)
}

/// Erdős–Rényi G(n, p) with a reproducible generator.
///
/// The generator is ChaCha8 seeded with `ChaCha8Rng::seed_from_u64(seed)`.
/// Pairs `(u, v)`, `u < v`, are visited in lexicographic order; each draws one
/// `next_u64()` value `x` and the edge is kept iff `x < p * 2^64`.
pub fn sample_random_graph(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("edge probability {p} not in [0, 1]")));
    }
    let threshold = (p * 18_446_744_073_709_551_616.0) as u128;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Graph::empty(n);
    for u in 0..n {
        for v in u + 1..n {
            if u128::from(rng.next_u64()) < threshold {
                g.insert(u, v);
            }
        }
    }
    Ok(g)
}

impl fmt::Display for Graph {
    /// The text format: `nodes <N>` then one `edge <u> <v>` line per edge.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "nodes {}", self.node_count())?;
        for (u, v) in self.edges() {
            writeln!(f, "edge {u} {v}")?;
        }
        Ok(())
    }
}

impl FromStr for Graph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut graph: Option<Graph> = None;
        for (lineno, line) in s.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parse_err = |msg: &str| Error::Parse(format!("line {}: {msg}", lineno + 1));
            let mut words = line.split_whitespace();
            match words.next() {
                Some("nodes") => {
                    if graph.is_some() {
                        return Err(parse_err("duplicate `nodes` line"));
                    }
                    let n = words
                        .next()
                        .and_then(|w| w.parse().ok())
                        .ok_or_else(|| parse_err("expected `nodes <N>`"))?;
                    graph = Some(Graph::empty(n));
                }
                Some("edge") => {
                    let g = graph.as_mut().ok_or_else(|| parse_err("`edge` before `nodes`"))?;
                    let mut endpoint = || -> Result<usize> {
                        words
                            .next()
                            .and_then(|w| w.parse().ok())
                            .ok_or_else(|| parse_err("expected `edge <u> <v>`"))
                    };
                    let (u, v) = (endpoint()?, endpoint()?);
                    g.add_edge(u, v)?;
                }
                _ => return Err(parse_err("expected `nodes` or `edge`")),
            }
            if words.next().is_some() {
                return Err(parse_err("trailing tokens"));
            }
        }
        graph.ok_or_else(|| Error::Parse("missing `nodes` line".into()))
    }
}
