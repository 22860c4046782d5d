//! Step-by-step construction of a complete consistent coloured graph whose
//! labels are ultrafilters of the term algebra, and the induced
//! representation `rep(X) = {(u, v) : X ∈ l(u, v)}`.

mod msquare;
mod verify;

pub use msquare::{is_m_square, pentagon, AtomLabelledStructure};
pub use verify::{verify_representation, RepViolation, RepresentationReport};

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::io::Write;
use std::rc::Rc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::blowup::{BlurSpec, SymbolicAtom};
use crate::error::{Error, Result};
use crate::symbolic::{compose, in_ultrafilter, uf_triple_consistent, Slice, TermElement, UltrafilterLabel};

/// A demand for a node `z` with `l(z, x) = f` and `l(z, y) = k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Defect {
    pub x: usize,
    pub y: usize,
    pub f: UltrafilterLabel,
    pub k: UltrafilterLabel,
}

/// One extension step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepRecord {
    pub step: usize,
    pub defect: Defect,
    pub new_node: usize,
    /// `(p, W)`: the blur chosen for the edge from the new node to `p`.
    pub blurs: Vec<(usize, usize)>,
}

/// A pending block of demands for the pair `(x, y)`; `next` indexes the
/// demand list of the pair's label.
#[derive(Clone, Debug)]
struct QueueEntry {
    x: usize,
    y: usize,
    next: usize,
}

/// A consistent coloured graph with its FIFO of outstanding defects.
///
/// The queue holds, per node pair, a cursor into the (cached) demand list of
/// the pair's label. Dequeuing walks the cursor, so the order is exactly that
/// of a queue in which every pair's demands were appended contiguously.
#[derive(Clone, Debug)]
pub struct ColoredGraph {
    labels: Vec<Vec<UltrafilterLabel>>,
    queue: VecDeque<QueueEntry>,
    seeded: bool,
    step_log: Vec<StepRecord>,
    dequeued: Vec<Defect>,
}

impl ColoredGraph {
    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, u: usize, v: usize) -> UltrafilterLabel {
        self.labels[u][v]
    }

    pub fn step_log(&self) -> &[StepRecord] {
        &self.step_log
    }

    /// Every defect taken off the queue, in order, including those found
    /// already witnessed.
    pub fn dequeued(&self) -> &[Defect] {
        &self.dequeued
    }

    /// Overwrites a label on both orientations, bypassing every check. Used to
    /// exercise the verifier.
    pub fn set_label_unchecked(&mut self, u: usize, v: usize, label: UltrafilterLabel) {
        self.labels[u][v] = label;
        self.labels[v][u] = label;
    }

    /// Whether some node `z` has `l(z, x) = f` and `l(z, y) = k`.
    pub fn is_witnessed(&self, d: &Defect) -> bool {
        (0..self.node_count()).any(|z| self.labels[z][d.x] == d.f && self.labels[z][d.y] == d.k)
    }

    /// Writes the step log as one JSON object per line.
    pub fn write_step_log<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for record in &self.step_log {
            serde_json::to_writer(&mut out, record)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }
}

/// A single node `x₀` with `l(x₀, x₀) = U^{Id}` and an empty queue.
pub fn new_graph() -> ColoredGraph {
    ColoredGraph {
        labels: vec![vec![UltrafilterLabel::IDENTITY]],
        queue: VecDeque::new(),
        seeded: false,
        step_log: Vec::new(),
        dequeued: Vec::new(),
    }
}

/// Adds a node `z` realising `d`. Every other edge from `z` gets the least
/// blur `W` (in the order of `J`) keeping both new triangles consistent.
pub fn extend(g: &mut ColoredGraph, spec: &BlurSpec, d: &Defect) -> Result<usize> {
    let n = g.node_count();
    if d.x >= n || d.y >= n {
        return Err(Error::InvalidDefect(format!("nodes {} and {} in a graph of {n}", d.x, d.y)));
    }
    if d.f.is_identity() || d.k.is_identity() {
        return Err(Error::InvalidDefect("a fresh node cannot carry the identity label".into()));
    }
    if !uf_triple_consistent(spec, g.labels[d.x][d.y], d.f, d.k) {
        return Err(Error::InvalidDefect(format!(
            "({}, {}, {}) is not a consistent triple",
            g.labels[d.x][d.y], d.f, d.k
        )));
    }
    let mut row = Vec::with_capacity(n + 1);
    let mut blurs = Vec::new();
    for p in 0..n {
        let label = if p == d.x {
            d.f
        } else if p == d.y {
            d.k
        } else {
            let (to_x, to_y) = (g.labels[d.x][p], g.labels[d.y][p]);
            let w = (0..spec.blur_count())
                .find(|&w| {
                    let bw = UltrafilterLabel::Blur(w);
                    uf_triple_consistent(spec, bw, d.f, to_x) && uf_triple_consistent(spec, bw, d.k, to_y)
                })
                .ok_or(Error::NoBlurAvailable { node: p, to_x, to_y })?;
            blurs.push((p, w));
            UltrafilterLabel::Blur(w)
        };
        row.push(label);
    }
    for (p, label) in row.iter().enumerate() {
        g.labels[p].push(*label);
    }
    row.push(UltrafilterLabel::IDENTITY);
    g.labels.push(row);
    g.step_log.push(StepRecord {
        step: g.step_log.len(),
        defect: *d,
        new_node: n,
        blurs,
    });
    Ok(n)
}

/// The default generator sample: every atom of rows `< 2` and every `E^W`.
pub fn default_generators(spec: &BlurSpec) -> Vec<TermElement> {
    let mut out: Vec<TermElement> = spec
        .atoms_below(2)
        .into_iter()
        .map(|a| TermElement::atom(spec, a).expect("atom of the structure"))
        .collect();
    out.extend((0..spec.blur_count()).map(|w| TermElement::blur_full(spec, w)));
    out
}

/// Atoms of `x` below `bound`, identity first.
fn atoms_of(spec: &BlurSpec, x: &TermElement, bound: u32) -> Vec<SymbolicAtom> {
    x.atoms_below(spec, bound)
}

fn max_row(x: &TermElement) -> u32 {
    x.slices
        .iter()
        .filter_map(|s| match s {
            Slice::Finite(c) | Slice::Cofinite(c) => c.iter().map(|&(r, _)| r).max(),
        })
        .max()
        .unwrap_or(0)
}

/// Ultrafilters containing `x`: non-principal ones first, then principal ones
/// at atoms of rows `< bound`.
fn labels_containing(spec: &BlurSpec, x: &TermElement, bound: u32) -> Vec<UltrafilterLabel> {
    let mut out: Vec<UltrafilterLabel> = (0..spec.blur_count())
        .filter(|&w| x.slices[w].is_cofinite())
        .map(UltrafilterLabel::Blur)
        .collect();
    out.extend(atoms_of(spec, x, bound).into_iter().map(UltrafilterLabel::Principal));
    out
}

/// Ultrafilters `F ∋ X`, `K ∋ Y` with `(label, F, K)` consistent, given
/// `X;Y ∈ label`.
fn find_witness(
    spec: &BlurSpec,
    label: UltrafilterLabel,
    x: &TermElement,
    y: &TermElement,
) -> Option<(UltrafilterLabel, UltrafilterLabel)> {
    let ok = |f: UltrafilterLabel, k: UltrafilterLabel| uf_triple_consistent(spec, label, f, k);
    let t = max_row(x).max(max_row(y)) + 1;
    match label {
        UltrafilterLabel::Principal(a) => {
            // a <= b;c for atoms b ∈ X, c ∈ Y
            let bound = 2 * t + 2 * a.row().unwrap_or(0) + 2;
            let xs = atoms_of(spec, x, bound);
            let ys = atoms_of(spec, y, bound);
            xs.iter().find_map(|&b| {
                ys.iter()
                    .map(|&c| (UltrafilterLabel::Principal(b), UltrafilterLabel::Principal(c)))
                    .find(|&(f, k)| ok(f, k))
            })
        }
        UltrafilterLabel::Blur(_) if x.is_finite() && y.is_finite() => {
            let xs = atoms_of(spec, x, t);
            let ys = atoms_of(spec, y, t);
            xs.iter().find_map(|&b| {
                ys.iter()
                    .map(|&c| (UltrafilterLabel::Principal(b), UltrafilterLabel::Principal(c)))
                    .find(|&(f, k)| ok(f, k))
            })
        }
        UltrafilterLabel::Blur(_) => {
            let fs = labels_containing(spec, x, t + 1);
            let ks = labels_containing(spec, y, t + 1);
            fs.iter().find_map(|&f| ks.iter().map(|&k| (f, k)).find(|&(f, k)| ok(f, k)))
        }
    }
}

/// Demands attached to each label, computed from the generator products.
struct Demands<'a> {
    spec: &'a BlurSpec,
    generators: &'a [TermElement],
    products: Vec<TermElement>,
    cache: HashMap<UltrafilterLabel, Rc<Vec<(UltrafilterLabel, UltrafilterLabel)>>>,
}

impl<'a> Demands<'a> {
    fn new(spec: &'a BlurSpec, generators: &'a [TermElement]) -> Self {
        let products = generators
            .iter()
            .flat_map(|x| generators.iter().map(move |y| compose(spec, x, y)))
            .collect();
        Demands { spec, generators, products, cache: HashMap::new() }
    }

    fn of(&mut self, label: UltrafilterLabel) -> Rc<Vec<(UltrafilterLabel, UltrafilterLabel)>> {
        if let Some(d) = self.cache.get(&label) {
            return Rc::clone(d);
        }
        let n = self.generators.len();
        let mut seen = BTreeSet::new();
        let mut list = Vec::new();
        for (idx, xy) in self.products.iter().enumerate() {
            if !in_ultrafilter(xy, label) {
                continue;
            }
            let (x, y) = (&self.generators[idx / n], &self.generators[idx % n]);
            if let Some((f, k)) = find_witness(self.spec, label, x, y) {
                // demands through U^{Id} are met by x or y themselves
                if !f.is_identity() && !k.is_identity() && seen.insert((f, k)) {
                    list.push((f, k));
                }
            }
        }
        let list = Rc::new(list);
        self.cache.insert(label, Rc::clone(&list));
        list
    }
}

fn enqueue_node(g: &mut ColoredGraph, z: usize) {
    for p in 0..=z {
        g.queue.push_back(QueueEntry { x: p, y: z, next: 0 });
    }
}

/// Runs `steps` extensions, dequeuing defects in FIFO order and skipping
/// those already witnessed. After each extension the pairs through the new
/// node are enqueued.
pub fn saturate(g: &mut ColoredGraph, spec: &BlurSpec, generators: &[TermElement], steps: usize) -> Result<()> {
    if steps == 0 {
        return Ok(());
    }
    let mut demands = Demands::new(spec, generators);
    if !g.seeded {
        for z in 0..g.node_count() {
            enqueue_node(g, z);
        }
        g.seeded = true;
    }
    let mut done = 0;
    while done < steps {
        let Some(entry) = g.queue.front_mut() else { break };
        let (x, y) = (entry.x, entry.y);
        let list = demands.of(g.labels[x][y]);
        if entry.next >= list.len() {
            g.queue.pop_front();
            continue;
        }
        let (f, k) = list[entry.next];
        entry.next += 1;
        let defect = Defect { x, y, f, k };
        g.dequeued.push(defect);
        if g.is_witnessed(&defect) {
            continue;
        }
        let z = extend(g, spec, &defect)?;
        enqueue_node(g, z);
        done += 1;
    }
    Ok(())
}

/// Number of demands still queued.
pub fn pending_count(g: &ColoredGraph, spec: &BlurSpec, generators: &[TermElement]) -> usize {
    let mut demands = Demands::new(spec, generators);
    g.queue
        .iter()
        .map(|e| demands.of(g.labels[e.x][e.y]).len().saturating_sub(e.next))
        .sum()
}

pub fn rep(g: &ColoredGraph, x: &TermElement) -> BTreeSet<(usize, usize)> {
    let n = g.node_count();
    (0..n)
        .flat_map(|u| (0..n).map(move |v| (u, v)))
        .filter(|&(u, v)| in_ultrafilter(x, g.labels[u][v]))
        .collect()
}

/// A seeded sample of term-algebra elements: atoms, blur slices, finite
/// unions, cofinite slices and boolean combinations of them.
pub fn sample_elements(spec: &BlurSpec, count: usize, seed: u64) -> Vec<TermElement> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let atoms = spec.atoms_below(4);
    let blurs = spec.blur_count();
    let mut out: Vec<TermElement> = Vec::with_capacity(count);
    while out.len() < count {
        let x = match rng.random_range(0..6) {
            0 => TermElement::atom(spec, atoms[rng.random_range(0..atoms.len())]).expect("valid atom"),
            1 => TermElement::blur_full(spec, rng.random_range(0..blurs)),
            2 => {
                let picks = (0..rng.random_range(1..5)).map(|_| atoms[rng.random_range(0..atoms.len())]);
                TermElement::from_atoms(spec, picks).expect("valid atoms")
            }
            3 => {
                let w = rng.random_range(0..blurs);
                let mut x = TermElement::blur_full(spec, w);
                let excluded: Vec<_> = atoms
                    .iter()
                    .filter(|a| matches!(a, SymbolicAtom::Blur { blur, .. } if *blur == w))
                    .filter(|_| rng.random_bool(0.3))
                    .map(|a| match *a {
                        SymbolicAtom::Blur { row, base, .. } => (row, base),
                        _ => unreachable!(),
                    })
                    .collect();
                x.slices[w] = Slice::Cofinite(excluded.into_iter().collect());
                x
            }
            4 if !out.is_empty() => out[rng.random_range(0..out.len())].complement(),
            5 if out.len() >= 2 => {
                let a = &out[rng.random_range(0..out.len())];
                let b = &out[rng.random_range(0..out.len())];
                if rng.random_bool(0.5) {
                    a.join(b)
                } else {
                    a.meet(b)
                }
            }
            _ => TermElement::identity(spec),
        };
        out.push(x);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blowup::{all_subsets, blur_structure, AtomStructureSpec};
    use crate::finite_ra::{default_atom_names, make_m};

    fn blur6() -> AtomStructureSpec {
        let m = make_m(&default_atom_names(6)).unwrap();
        blur_structure(&m, &all_subsets(6, 2)).unwrap()
    }

    fn atom(row: u32, blur: usize, base: usize) -> UltrafilterLabel {
        UltrafilterLabel::Principal(SymbolicAtom::Blur { row, blur, base })
    }

    #[test]
    fn new_graph_is_one_identity_node() {
        let g = new_graph();
        assert_eq!(g.node_count(), 1);
        assert_eq!(g.label(0, 0), UltrafilterLabel::IDENTITY);
        let spec = blur6();
        let b = spec.as_blur().unwrap();
        assert_eq!(rep(&g, &TermElement::identity(b)), [(0, 0)].into_iter().collect());
    }

    #[test]
    fn extend_realises_the_defect() {
        let spec = blur6();
        let b = spec.as_blur().unwrap();
        let mut g = new_graph();
        let a = atom(0, 0, 0);
        extend(&mut g, b, &Defect { x: 0, y: 0, f: a, k: a }).unwrap();
        assert_eq!(g.node_count(), 2);
        assert_eq!(g.label(1, 0), a);
        // (a, b, c) on rows 0,1,2 with distinct bases
        let (bb, c) = (atom(1, 5, 1), atom(2, 9, 2));
        extend(&mut g, b, &Defect { x: 0, y: 1, f: bb, k: c }).unwrap();
        assert_eq!(g.node_count(), 3);
        extend(&mut g, b, &Defect { x: 0, y: 1, f: bb, k: c }).unwrap();
        let report = verify_representation(&g, b, &[], 0);
        assert!(report.violations.is_empty(), "{:?}", report.violations);
    }

    #[test]
    fn extend_rejects_bad_defects() {
        let spec = blur6();
        let b = spec.as_blur().unwrap();
        let mut g = new_graph();
        let err = extend(&mut g, b, &Defect { x: 0, y: 0, f: atom(0, 0, 0), k: atom(0, 0, 1) });
        assert!(matches!(err, Err(Error::InvalidDefect(_))));
        let err = extend(&mut g, b, &Defect { x: 0, y: 3, f: atom(0, 0, 0), k: atom(0, 0, 0) });
        assert!(matches!(err, Err(Error::InvalidDefect(_))));
    }

    #[test]
    fn doctored_structure_runs_out_of_blurs() {
        let spec = blur6();
        let doctored = spec.as_blur().unwrap().clone().without_disjoint_rule();
        let mut g = new_graph();
        let a = atom(0, 0, 0);
        let (bb, c) = (atom(1, 5, 1), atom(2, 9, 2));
        extend(&mut g, &doctored, &Defect { x: 0, y: 0, f: a, k: a }).unwrap();
        extend(&mut g, &doctored, &Defect { x: 0, y: 1, f: bb, k: c }).unwrap();
        let err = extend(&mut g, &doctored, &Defect { x: 0, y: 1, f: bb, k: c });
        assert!(matches!(err, Err(Error::NoBlurAvailable { node: 2, .. })));
    }

    #[test]
    fn zero_steps_is_identity() {
        let spec = blur6();
        let b = spec.as_blur().unwrap();
        let mut g = new_graph();
        saturate(&mut g, b, &default_generators(b), 0).unwrap();
        assert_eq!(g.node_count(), 1);
        assert!(g.step_log().is_empty());
    }

    #[test]
    fn short_saturation_is_consistent_and_deterministic() {
        let spec = blur6();
        let b = spec.as_blur().unwrap();
        let gens = default_generators(b);
        let run = || {
            let mut g = new_graph();
            saturate(&mut g, b, &gens, 40).unwrap();
            let mut log = Vec::new();
            g.write_step_log(&mut log).unwrap();
            (g, log)
        };
        let (g, log) = run();
        assert_eq!(g.node_count(), 41);
        assert_eq!(log, run().1);
        let sample = sample_elements(b, 20, 7);
        let report = verify_representation(&g, b, &sample, pending_count(&g, b, &gens));
        assert!(report.violations.is_empty(), "{:?}", &report.violations[..report.violations.len().min(3)]);
        for d in g.dequeued() {
            assert!(g.is_witnessed(d));
        }
    }

    #[test]
    fn sampling_is_seeded() {
        let spec = blur6();
        let b = spec.as_blur().unwrap();
        assert_eq!(sample_elements(b, 30, 3), sample_elements(b, 30, 3));
        assert_ne!(sample_elements(b, 30, 3), sample_elements(b, 30, 4));
    }
}
