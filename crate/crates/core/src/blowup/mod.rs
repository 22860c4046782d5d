//! Infinite (ω-row) atom structures described intensionally.
//!
//! Three families are supported:
//!
//! * `α(G)`: atoms `{Id} ∪ (G × n)` over a graph scheme `G`, where a
//!   diversity triple is consistent unless all three colors agree and the
//!   three underlying nodes span no edge.
//! * the blur structure over a finite base algebra `M` with blurs `J`: atoms
//!   `a_i^{P,W}` for rows `i`, base atoms `P ∈ W`, blurs `W ∈ J`.
//! * `ℱ(l, μ)`: blurs are pairs `(X, t)` with `|X| = l`, `t < μ`.
//!
//! Rows are never materialized; [`AtomStructureSpec::consistent`] is a pure
//! function of symbolic atoms and finite windows are produced by
//! [`AtomStructureSpec::truncate`].

mod triangle;

pub use triangle::{valid_labelled_triangle, EdgeLabel, LabelNode};

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finite_ra::{check_axioms, AtomId, FiniteAtomStructure};
use crate::graphs::{make_disjoint_cliques, Graph};

/// True iff some arrangement `p, q, r` of the set `{i, j, k}` satisfies
/// `r - q = q - p`.
///
/// Because `{i, j, k}` is read as a set, three equal indices qualify while two
/// equal and one different do not.
pub fn evenly_distributed(i: u32, j: u32, k: u32) -> bool {
    let mut v = [i, j, k];
    v.sort_unstable();
    if v[0] == v[2] {
        return true;
    }
    v[0] != v[1] && v[1] != v[2] && v[1] - v[0] == v[2] - v[1]
}

/// Rows `k` with `evenly_distributed(i, j, k)`, ascending.
pub fn even_rows(i: u32, j: u32) -> Vec<u32> {
    if i == j {
        return vec![i];
    }
    let (i, j) = (i64::from(i), i64::from(j));
    let mut rows = vec![2 * j - i, 2 * i - j];
    if (i + j) % 2 == 0 {
        rows.push((i + j) / 2);
    }
    let mut rows: Vec<u32> = rows.into_iter().filter(|&k| k >= 0).map(|k| k as u32).collect();
    rows.sort_unstable();
    rows
}

/// An atom of one of the infinite structures.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SymbolicAtom {
    Identity,
    /// `(node, color)` in `α(G)`.
    Graph { node: usize, color: usize },
    /// `a_row^{base, blur}`; `base` indexes the base atoms `I`, `blur` indexes
    /// the blur family `J`.
    Blur { row: u32, blur: usize, base: usize },
}

impl SymbolicAtom {
    pub fn is_identity(&self) -> bool {
        matches!(self, SymbolicAtom::Identity)
    }

    pub fn row(&self) -> Option<u32> {
        match *self {
            SymbolicAtom::Blur { row, .. } => Some(row),
            _ => None,
        }
    }
}

impl fmt::Display for SymbolicAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            SymbolicAtom::Identity => f.write_str("Id"),
            SymbolicAtom::Graph { node, color } => write!(f, "({node},{color})"),
            SymbolicAtom::Blur { row, blur, base } => write!(f, "a{row}[{base},W{blur}]"),
        }
    }
}

/// The graph underlying `α(G)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphScheme {
    /// Countably many disjoint copies of `K_clique_size`; node `v` lies in
    /// copy `v / clique_size`.
    CliqueCopies { clique_size: usize },
    Finite(Graph),
}

impl GraphScheme {
    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        match self {
            GraphScheme::CliqueCopies { clique_size } => {
                u != v && u / clique_size == v / clique_size
            }
            GraphScheme::Finite(g) => g.has_edge(u, v),
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, GraphScheme::CliqueCopies { .. })
    }

    pub fn contains_node(&self, v: usize) -> bool {
        match self {
            GraphScheme::CliqueCopies { .. } => true,
            GraphScheme::Finite(g) => v < g.node_count(),
        }
    }

    /// The finite window retained by a truncation: the first `copies` cliques,
    /// or the whole finite graph.
    pub fn window(&self, copies: usize) -> Graph {
        match self {
            GraphScheme::CliqueCopies { clique_size } => make_disjoint_cliques(copies, *clique_size),
            GraphScheme::Finite(g) => g.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaSpec {
    pub scheme: GraphScheme,
    pub colors: usize,
}

impl AlphaSpec {
    fn consistent(&self, a: SymbolicAtom, b: SymbolicAtom, c: SymbolicAtom) -> bool {
        use SymbolicAtom::Graph as G;
        match (a, b, c) {
            (G { node: x, color: i }, G { node: y, color: j }, G { node: z, color: k }) => {
                if i != j || j != k {
                    return true;
                }
                self.scheme.adjacent(x, y) || self.scheme.adjacent(y, z) || self.scheme.adjacent(x, z)
            }
            _ => false,
        }
    }

    fn is_atom(&self, a: SymbolicAtom) -> bool {
        match a {
            SymbolicAtom::Identity => true,
            SymbolicAtom::Graph { node, color } => color < self.colors && self.scheme.contains_node(node),
            SymbolicAtom::Blur { .. } => false,
        }
    }
}

/// One blur: a set of base atoms (bitmask over `I`) and, for `ℱ(l, μ)`, a tag.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Blur {
    pub members: u64,
    pub tag: usize,
}

impl Blur {
    pub fn contains(&self, base: usize) -> bool {
        self.members >> base & 1 == 1
    }

    pub fn bases(&self) -> impl Iterator<Item = usize> + '_ {
        (0..64).filter(|&b| self.contains(b))
    }
}

/// How base atoms compose on evenly distributed rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BaseRule {
    /// `P <= Q ; R` in a finite base algebra (diversity atom `P` is atom
    /// `P + 1` of the structure).
    Algebra(FiniteAtomStructure),
    /// `|{P, Q, R}| != 1`.
    NotAllEqual,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BlurFamily {
    Pairs,
    FLMu { l: usize, mu: usize },
}

/// The blur structure over base atoms `I` and blur family `J`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlurSpec {
    base_names: Vec<String>,
    blurs: Vec<Blur>,
    rule: BaseRule,
    family: BlurFamily,
    disjoint_rule: bool,
}

impl BlurSpec {
    pub fn base_count(&self) -> usize {
        self.base_names.len()
    }

    pub fn base_names(&self) -> &[String] {
        &self.base_names
    }

    pub fn blurs(&self) -> &[Blur] {
        &self.blurs
    }

    pub fn blur(&self, w: usize) -> Blur {
        self.blurs[w]
    }

    pub fn blur_count(&self) -> usize {
        self.blurs.len()
    }

    pub fn family(&self) -> BlurFamily {
        self.family
    }

    pub fn rule(&self) -> &BaseRule {
        &self.rule
    }

    /// `P <= Q ; R` for base atoms.
    #[inline]
    pub fn base_cond(&self, p: usize, q: usize, r: usize) -> bool {
        match &self.rule {
            BaseRule::Algebra(m) => m.consistent(q + 1, r + 1, p + 1),
            BaseRule::NotAllEqual => !(p == q && q == r),
        }
    }

    /// `S ∩ Z ∩ W = ∅` on the base-atom components.
    #[inline]
    pub fn disjoint(&self, s: usize, z: usize, w: usize) -> bool {
        self.disjoint_rule && self.blurs[s].members & self.blurs[z].members & self.blurs[w].members == 0
    }

    /// Consistency of three diversity blur atoms given as `(row, blur, base)`.
    #[inline]
    pub fn cells_consistent(&self, a: (u32, usize, usize), b: (u32, usize, usize), c: (u32, usize, usize)) -> bool {
        self.disjoint(a.1, b.1, c.1) || (evenly_distributed(a.0, b.0, c.0) && self.base_cond(a.2, b.2, c.2))
    }

    /// The `(blur, base)` cells of one row, in atom order.
    pub fn cells(&self) -> Vec<(usize, usize)> {
        self.blurs
            .iter()
            .enumerate()
            .flat_map(|(w, blur)| blur.bases().map(move |p| (w, p)))
            .collect()
    }

    /// Diversity atoms of rows `< depth`, in truncation order.
    pub fn atoms_below(&self, depth: u32) -> Vec<SymbolicAtom> {
        let cells = self.cells();
        (0..depth)
            .flat_map(|row| cells.iter().map(move |&(blur, base)| SymbolicAtom::Blur { row, blur, base }))
            .collect()
    }

    pub fn is_atom(&self, a: SymbolicAtom) -> bool {
        match a {
            SymbolicAtom::Identity => true,
            SymbolicAtom::Blur { blur, base, .. } => blur < self.blurs.len() && self.blurs[blur].contains(base),
            SymbolicAtom::Graph { .. } => false,
        }
    }

    fn consistent(&self, a: SymbolicAtom, b: SymbolicAtom, c: SymbolicAtom) -> bool {
        use SymbolicAtom::Blur as B;
        match (a, b, c) {
            (B { row: i, blur: s, base: p }, B { row: j, blur: z, base: q }, B { row: k, blur: w, base: r }) => {
                self.cells_consistent((i, s, p), (j, z, q), (k, w, r))
            }
            _ => false,
        }
    }

    /// A copy whose oracle ignores the `S ∩ Z ∩ W = ∅` disjunct. Such a
    /// structure violates the blur conditions and exists to exercise the
    /// failure paths of the checkers.
    pub fn without_disjoint_rule(mut self) -> Self {
        self.disjoint_rule = false;
        self
    }

    pub fn has_disjoint_rule(&self) -> bool {
        self.disjoint_rule
    }
}

/// An intensional atom structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AtomStructureSpec {
    Alpha(AlphaSpec),
    Blur(BlurSpec),
}

impl From<BlurSpec> for AtomStructureSpec {
    fn from(spec: BlurSpec) -> Self {
        AtomStructureSpec::Blur(spec)
    }
}

impl From<AlphaSpec> for AtomStructureSpec {
    fn from(spec: AlphaSpec) -> Self {
        AtomStructureSpec::Alpha(spec)
    }
}

/// Serializable construction parameters of a spec.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpecParams {
    /// `α` over countably many disjoint cliques.
    AlphaOfCliques { clique_size: usize, colors: usize },
    AlphaOfGraph { graph: String, colors: usize },
    /// The blur structure over 𝐌 with all 2-element blurs.
    Blur { base_atoms: Vec<String> },
    FLMu { base_atoms: Vec<String>, l: usize, mu: usize },
}

impl AtomStructureSpec {
    pub fn consistent(&self, a: SymbolicAtom, b: SymbolicAtom, c: SymbolicAtom) -> bool {
        if a.is_identity() || b.is_identity() || c.is_identity() {
            return identity_law_symbolic(a, b, c);
        }
        match self {
            AtomStructureSpec::Alpha(s) => s.consistent(a, b, c),
            AtomStructureSpec::Blur(s) => s.consistent(a, b, c),
        }
    }

    pub fn is_atom(&self, a: SymbolicAtom) -> bool {
        match self {
            AtomStructureSpec::Alpha(s) => s.is_atom(a),
            AtomStructureSpec::Blur(s) => s.is_atom(a),
        }
    }

    pub fn as_blur(&self) -> Option<&BlurSpec> {
        match self {
            AtomStructureSpec::Blur(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_alpha(&self) -> Option<&AlphaSpec> {
        match self {
            AtomStructureSpec::Alpha(s) => Some(s),
            _ => None,
        }
    }

    pub fn params(&self) -> SpecParams {
        match self {
            AtomStructureSpec::Alpha(a) => match &a.scheme {
                GraphScheme::CliqueCopies { clique_size } => SpecParams::AlphaOfCliques {
                    clique_size: *clique_size,
                    colors: a.colors,
                },
                GraphScheme::Finite(g) => SpecParams::AlphaOfGraph {
                    graph: g.to_string(),
                    colors: a.colors,
                },
            },
            AtomStructureSpec::Blur(b) => match b.family {
                BlurFamily::Pairs => SpecParams::Blur {
                    base_atoms: b.base_names.clone(),
                },
                BlurFamily::FLMu { l, mu } => SpecParams::FLMu {
                    base_atoms: b.base_names.clone(),
                    l,
                    mu,
                },
            },
        }
    }

    /// Rebuilds a spec from its parameters.
    pub fn from_params(params: &SpecParams) -> Result<Self> {
        match params {
            SpecParams::AlphaOfCliques { clique_size, colors } => {
                alpha_of_graph(GraphScheme::CliqueCopies { clique_size: *clique_size }, *colors)
            }
            SpecParams::AlphaOfGraph { graph, colors } => {
                alpha_of_graph(GraphScheme::Finite(graph.parse()?), *colors)
            }
            SpecParams::Blur { base_atoms } => {
                let m = crate::finite_ra::make_m(base_atoms)?;
                blur_structure(&m, &all_subsets(base_atoms.len(), 2))
            }
            SpecParams::FLMu { base_atoms, l, mu } => f_l_mu(base_atoms, *l, *mu),
        }
    }

    /// Restricts to rows `< depth` (blur kinds) or to the first `copies`
    /// cliques (α over clique copies; a finite graph is kept whole).
    pub fn truncate(&self, t: &Truncation) -> Result<Truncated> {
        if t.depth == 0 {
            return Err(Error::InvalidParameter("truncation depth must be at least 1".into()));
        }
        let mut atoms = vec![SymbolicAtom::Identity];
        match self {
            AtomStructureSpec::Blur(b) => atoms.extend(b.atoms_below(t.depth)),
            AtomStructureSpec::Alpha(a) => {
                let window = a.scheme.window(t.copies);
                for node in 0..window.node_count() {
                    for color in 0..a.colors {
                        atoms.push(SymbolicAtom::Graph { node, color });
                    }
                }
            }
        }
        let names = atoms.iter().map(ToString::to_string).collect();
        let structure =
            FiniteAtomStructure::from_oracle(names, |x, y, z| self.consistent(atoms[x], atoms[y], atoms[z]))?;
        let index = atoms.iter().enumerate().map(|(i, &a)| (a, i)).collect();
        Ok(Truncated { structure, atoms, index })
    }
}

fn identity_law_symbolic(a: SymbolicAtom, b: SymbolicAtom, c: SymbolicAtom) -> bool {
    if a.is_identity() {
        b == c
    } else if b.is_identity() {
        a == c
    } else {
        a == b
    }
}

/// A finite window onto an ω-row structure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Truncation {
    /// Rows `< depth` are retained.
    pub depth: u32,
    /// For α over clique copies: cliques retained.
    pub copies: usize,
}

impl Truncation {
    pub fn rows(depth: u32) -> Self {
        Truncation { depth, copies: 1 }
    }

    pub fn cliques(copies: usize) -> Self {
        Truncation { depth: 1, copies }
    }
}

/// A truncation together with the symbolic meaning of each finite atom.
#[derive(Clone, Debug)]
pub struct Truncated {
    pub structure: FiniteAtomStructure,
    pub atoms: Vec<SymbolicAtom>,
    index: HashMap<SymbolicAtom, AtomId>,
}

impl Truncated {
    pub fn atom_id(&self, a: &SymbolicAtom) -> Option<AtomId> {
        self.index.get(a).copied()
    }
}

/// `α(G)` with `colors` colors (`colors >= 2`).
pub fn alpha_of_graph(scheme: GraphScheme, colors: usize) -> Result<AtomStructureSpec> {
    if colors < 2 {
        return Err(Error::InvalidParameter(format!("α(G) needs at least 2 colors, got {colors}")));
    }
    if let GraphScheme::CliqueCopies { clique_size: 0 } = scheme {
        return Err(Error::InvalidParameter("clique size must be positive".into()));
    }
    Ok(AtomStructureSpec::Alpha(AlphaSpec { scheme, colors }))
}

/// All `size`-element subsets of `0..count`, lexicographically.
pub fn all_subsets(count: usize, size: usize) -> Vec<BTreeSet<usize>> {
    fn go(start: usize, count: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<BTreeSet<usize>>) {
        if cur.len() == size {
            out.push(cur.iter().copied().collect());
            return;
        }
        for x in start..count {
            if count - x < size - cur.len() {
                break;
            }
            cur.push(x);
            go(x + 1, count, size, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, count, size, &mut Vec::new(), &mut out);
    out
}

fn mask_of(set: &BTreeSet<usize>) -> u64 {
    set.iter().fold(0, |m, &b| m | 1 << b)
}

fn validate_base(m: &FiniteAtomStructure) -> Result<Vec<String>> {
    if !m.all_self_converse() {
        return Err(Error::InvalidStructure("base algebra must be all self-converse".into()));
    }
    let report = check_axioms(m);
    if !report.is_clean() {
        return Err(Error::InvalidStructure(format!(
            "base algebra fails the atom-structure axioms ({} violations)",
            report.violations.len()
        )));
    }
    let k = m.atom_count() - 1;
    if k > 64 {
        return Err(Error::InvalidParameter(format!("at most 64 base atoms supported, got {k}")));
    }
    Ok(m.names()[1..].to_vec())
}

/// Every two bases `Q, R` and every blur `S` admit `P ∈ S` with `P <= Q;R`.
/// This keeps composition inside the finite/cofinite term algebra.
fn check_blurrable(spec: &BlurSpec) -> Result<()> {
    let k = spec.base_count();
    for (w, blur) in spec.blurs.iter().enumerate() {
        for q in 0..k {
            for r in 0..k {
                if !blur.bases().any(|p| spec.base_cond(p, q, r)) {
                    return Err(Error::InvalidStructure(format!(
                        "no base in blur {w} lies below {} ; {}",
                        spec.base_names[q], spec.base_names[r]
                    )));
                }
            }
        }
    }
    Ok(())
}

/// The blur structure over `M` with `J` = all 2-element subsets of the
/// diversity atoms `I` of `M` (`|I| >= 6`). Blurs are given as index sets into
/// `I` and are stored in lexicographic order.
pub fn blur_structure(m: &FiniteAtomStructure, blurs: &[BTreeSet<usize>]) -> Result<AtomStructureSpec> {
    let k = m.atom_count().saturating_sub(1);
    if k < 6 {
        return Err(Error::InvalidParameter(format!("the blur structure needs |I| >= 6, got {k}")));
    }
    let mut canonical: Vec<BTreeSet<usize>> = blurs.to_vec();
    canonical.sort();
    canonical.dedup();
    if canonical.len() != blurs.len() {
        return Err(Error::InvalidBlurFamily("repeated blur".into()));
    }
    if canonical != all_subsets(k, 2) {
        return Err(Error::InvalidBlurFamily(format!(
            "expected all {} pairs of {k} atoms, got {} sets",
            k * (k - 1) / 2,
            blurs.len()
        )));
    }
    blur_structure_unchecked(m, &canonical)
}

/// Like [`blur_structure`] but accepts any family of subsets of `I` and any
/// `|I| >= 2`. Structures built this way need not satisfy the blur
/// conditions; they exist to test the checkers.
pub fn blur_structure_unchecked(m: &FiniteAtomStructure, blurs: &[BTreeSet<usize>]) -> Result<AtomStructureSpec> {
    let base_names = validate_base(m)?;
    if base_names.len() < 2 {
        return Err(Error::InvalidParameter("need at least 2 base atoms".into()));
    }
    if blurs.is_empty() || blurs.iter().any(|b| b.is_empty() || b.iter().any(|&p| p >= base_names.len())) {
        return Err(Error::InvalidBlurFamily("blurs must be non-empty subsets of I".into()));
    }
    let spec = BlurSpec {
        base_names,
        blurs: blurs.iter().map(|b| Blur { members: mask_of(b), tag: 0 }).collect(),
        rule: BaseRule::Algebra(m.clone()),
        family: BlurFamily::Pairs,
        disjoint_rule: true,
    };
    check_blurrable(&spec)?;
    Ok(AtomStructureSpec::Blur(spec))
}

/// `ℱ(l, μ)` over base atoms `I` with `|I| >= 3l`, `l >= 2`, `1 <= μ`.
pub fn f_l_mu<S: AsRef<str>>(base_atoms: &[S], l: usize, mu: usize) -> Result<AtomStructureSpec> {
    let k = base_atoms.len();
    if l < 2 || mu < 1 || k < 3 * l {
        return Err(Error::InvalidParameter(format!(
            "ℱ(l, μ) needs l >= 2, μ >= 1 and |I| >= 3l; got l = {l}, μ = {mu}, |I| = {k}"
        )));
    }
    if k > 64 {
        return Err(Error::InvalidParameter(format!("at most 64 base atoms supported, got {k}")));
    }
    let base_names: Vec<String> = base_atoms.iter().map(|s| s.as_ref().to_string()).collect();
    let mut seen = std::collections::HashSet::new();
    if let Some(dup) = base_names.iter().find(|n| !seen.insert(n.as_str())) {
        return Err(Error::DuplicateAtom(dup.clone()));
    }
    let mut blurs = Vec::new();
    for x in all_subsets(k, l) {
        for tag in 0..mu {
            blurs.push(Blur { members: mask_of(&x), tag });
        }
    }
    Ok(AtomStructureSpec::Blur(BlurSpec {
        base_names,
        blurs,
        rule: BaseRule::NotAllEqual,
        family: BlurFamily::FLMu { l, mu },
        disjoint_rule: true,
    }))
}
