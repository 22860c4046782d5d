use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{rep, ColoredGraph, Defect};
use crate::blowup::{BlurSpec, SymbolicAtom};
use crate::symbolic::{compose, in_ultrafilter, uf_triple_consistent, TermElement, UltrafilterLabel};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RepViolation {
    /// `l(x, x) ≠ U^{Id}`, `l(x, y) = U^{Id}` for `x ≠ y`, or an asymmetric pair.
    Labelling { u: usize, v: usize },
    Triangle { u: usize, v: usize, w: usize },
    /// `rep` fails to commute with a boolean operation on sample elements.
    BooleanHom { op: String, x: usize, y: usize },
    Converse { x: usize },
    IdentityNotDiagonal,
    /// `(u, v) ∈ rep(X)`, `(v, w) ∈ rep(Y)` but `(u, w) ∉ rep(X;Y)`.
    ForwardInclusion { u: usize, v: usize, w: usize, x: usize, y: usize },
    Unwitnessed { defect: Defect },
    EmptyAtom { atom: SymbolicAtom },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepresentationReport {
    pub nodes: usize,
    pub label_triangles: usize,
    pub sample_size: usize,
    pub dequeued: usize,
    /// Demands still queued; reverse inclusion for them is pending, not
    /// violated.
    pub pending: usize,
    pub resolved_atoms: usize,
    pub violations: Vec<RepViolation>,
}

impl RepresentationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the graph invariants and the representation properties of `rep` on
/// the sampled elements. `pending` is carried into the report as is.
pub fn verify_representation(
    g: &ColoredGraph,
    spec: &BlurSpec,
    sample: &[TermElement],
    pending: usize,
) -> RepresentationReport {
    let n = g.node_count();
    let mut violations = Vec::new();

    for u in 0..n {
        for v in 0..n {
            let l = g.label(u, v);
            if (u == v) != l.is_identity() || l != g.label(v, u) {
                violations.push(RepViolation::Labelling { u, v });
            }
        }
    }

    // label triples (l(u,v), l(v,w), l(u,w)) over all u, v, w, with a witness
    let triangles: HashMap<[UltrafilterLabel; 3], (usize, usize, usize)> = (0..n)
        .into_par_iter()
        .fold(HashMap::new, |mut acc, u| {
            for v in 0..n {
                for w in 0..n {
                    acc.entry([g.label(u, v), g.label(v, w), g.label(u, w)]).or_insert((u, v, w));
                }
            }
            acc
        })
        .reduce(HashMap::new, |mut a, b| {
            for (k, v) in b {
                let e = a.entry(k).or_insert(v);
                *e = (*e).min(v);
            }
            a
        });
    let mut tri: Vec<_> = triangles.into_iter().collect();
    tri.sort_by_key(|&(_, witness)| witness);
    for &(labels, (u, v, w)) in &tri {
        if u != v && v != w && u != w && !uf_triple_consistent(spec, labels[0], labels[2], labels[1]) {
            violations.push(RepViolation::Triangle { u, v, w });
        }
    }

    let labels: BTreeSet<UltrafilterLabel> = (0..n).flat_map(|u| (0..n).map(move |v| (u, v))).map(|(u, v)| g.label(u, v)).collect();
    let all: BTreeSet<(usize, usize)> = (0..n).flat_map(|u| (0..n).map(move |v| (u, v))).collect();
    let reps: Vec<BTreeSet<(usize, usize)>> = sample.par_iter().map(|x| rep(g, x)).collect();
    for (i, x) in sample.iter().enumerate() {
        if rep(g, &x.complement()) != &all - &reps[i] {
            violations.push(RepViolation::BooleanHom { op: "complement".into(), x: i, y: i });
        }
        let transposed: BTreeSet<_> = reps[i].iter().map(|&(u, v)| (v, u)).collect();
        if rep(g, &x.converse()) != transposed {
            violations.push(RepViolation::Converse { x: i });
        }
    }
    for i in 0..sample.len() {
        for j in i + 1..sample.len() {
            for (op, value) in [("join", sample[i].join(&sample[j])), ("meet", sample[i].meet(&sample[j]))] {
                let expected = labels.iter().all(|&l| {
                    let (a, b) = (in_ultrafilter(&sample[i], l), in_ultrafilter(&sample[j], l));
                    in_ultrafilter(&value, l) == if op == "join" { a || b } else { a && b }
                });
                if !expected {
                    violations.push(RepViolation::BooleanHom { op: op.into(), x: i, y: j });
                }
            }
        }
    }
    let diagonal: BTreeSet<_> = (0..n).map(|u| (u, u)).collect();
    if rep(g, &TermElement::identity(spec)) != diagonal {
        violations.push(RepViolation::IdentityNotDiagonal);
    }

    // rep(X);rep(Y) ⊆ rep(X;Y)
    let forward: Vec<RepViolation> = (0..sample.len())
        .into_par_iter()
        .flat_map_iter(|i| {
            let mut out = Vec::new();
            for j in 0..sample.len() {
                let xy = compose(spec, &sample[i], &sample[j]);
                for &(labels, (u, v, w)) in &tri {
                    if in_ultrafilter(&sample[i], labels[0])
                        && in_ultrafilter(&sample[j], labels[1])
                        && !in_ultrafilter(&xy, labels[2])
                    {
                        out.push(RepViolation::ForwardInclusion { u, v, w, x: i, y: j });
                    }
                }
            }
            out
        })
        .collect();
    violations.extend(forward);

    for d in g.dequeued() {
        if !g.is_witnessed(d) {
            violations.push(RepViolation::Unwitnessed { defect: *d });
        }
    }
    let resolved: BTreeSet<SymbolicAtom> = g
        .dequeued()
        .iter()
        .flat_map(|d| [d.f, d.k])
        .filter_map(|l| match l {
            UltrafilterLabel::Principal(a) => Some(a),
            UltrafilterLabel::Blur(_) => None,
        })
        .collect();
    for &a in &resolved {
        let x = TermElement::atom(spec, a).expect("labels are atoms of the structure");
        if rep(g, &x).is_empty() {
            violations.push(RepViolation::EmptyAtom { atom: a });
        }
    }

    RepresentationReport {
        nodes: n,
        label_triangles: tri.len(),
        sample_size: sample.len(),
        dequeued: g.dequeued().len(),
        pending,
        resolved_atoms: resolved.len(),
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::super::{default_generators, new_graph, sample_elements, saturate};
    use super::*;
    use crate::blowup::{all_subsets, blur_structure};
    use crate::finite_ra::{default_atom_names, make_m};

    #[test]
    fn corrupted_label_breaks_forward_inclusion() {
        let m = make_m(&default_atom_names(6)).unwrap();
        let spec = blur_structure(&m, &all_subsets(6, 2)).unwrap();
        let b = spec.as_blur().unwrap();
        let gens = default_generators(b);
        let mut g = new_graph();
        saturate(&mut g, b, &gens, 25).unwrap();
        let sample = gens.clone();
        assert!(verify_representation(&g, b, &sample, 0).is_clean());
        // an atom far from every e-witness row
        let far_atom = SymbolicAtom::Blur { row: 40, blur: 0, base: 0 };
        let far = UltrafilterLabel::Principal(far_atom);
        let mut sample = sample;
        sample.push(TermElement::atom(b, far_atom).unwrap());
        let (u, v) = (1, 2);
        let old = g.label(u, v);
        g.set_label_unchecked(u, v, far);
        let report = verify_representation(&g, b, &sample, 0);
        assert!(report.violations.iter().any(|x| matches!(x, RepViolation::ForwardInclusion { .. })));
        g.set_label_unchecked(u, v, old);
        assert!(verify_representation(&g, b, &sample_elements(b, 10, 1), 0).is_clean());
    }
}
