use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::term::atom_comp;
use super::ultrafilter::{uf_triple_consistent, UltrafilterLabel};
use crate::blowup::{BlurSpec, SymbolicAtom};
use crate::finite_ra::FiniteAtomStructure;

/// A counterexample to one of the three representation conditions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "condition", rename_all = "snake_case")]
pub enum BlurViolation {
    /// `a;b ∈ U^W` but `(U^a, U^b, U^W)` is inconsistent.
    I { a: SymbolicAtom, b: SymbolicAtom, blur: usize },
    /// A triple of non-identity labels, at least two non-principal, that is
    /// inconsistent.
    Ii { labels: [UltrafilterLabel; 3] },
    /// No blur `W` has `a;b ∩ c;d ∈ U^W`.
    Iii {
        a: SymbolicAtom,
        b: SymbolicAtom,
        c: SymbolicAtom,
        d: SymbolicAtom,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlurReport {
    pub violations: Vec<BlurViolation>,
    pub pairs_checked: usize,
    pub label_triples_checked: usize,
}

impl BlurReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Representatives of atom pairs up to row shifts: consistency depends on rows
/// only through `e`, and `e` restricted to two rows only sees whether they are
/// equal.
fn representative_pairs(spec: &BlurSpec) -> Vec<(SymbolicAtom, SymbolicAtom)> {
    let cells = spec.cells();
    let mut out = Vec::with_capacity(cells.len() * cells.len() * 2);
    for &(s, p) in &cells {
        for &(z, q) in &cells {
            for j in [0, 1] {
                out.push((
                    SymbolicAtom::Blur { row: 0, blur: s, base: p },
                    SymbolicAtom::Blur { row: j, blur: z, base: q },
                ));
            }
        }
    }
    out
}

/// Exhaustively checks conditions (i)–(iii) of the blur construction.
pub fn check_blur_conditions(spec: &BlurSpec) -> BlurReport {
    let pairs = representative_pairs(spec);
    let blurs = spec.blur_count();

    // (i), and the cofinite-slice masks needed for (iii)
    let per_pair: Vec<(Vec<BlurViolation>, Vec<bool>)> = pairs
        .par_iter()
        .map(|&(a, b)| {
            let ab = atom_comp(spec, a, b).expect("representative atoms are valid");
            let mask: Vec<bool> = ab.slices.iter().map(|s| s.is_cofinite()).collect();
            let bad = (0..blurs)
                .filter(|&w| {
                    mask[w]
                        && !uf_triple_consistent(
                            spec,
                            UltrafilterLabel::Principal(a),
                            UltrafilterLabel::Principal(b),
                            UltrafilterLabel::Blur(w),
                        )
                })
                .map(|w| BlurViolation::I { a, b, blur: w })
                .collect();
            (bad, mask)
        })
        .collect();
    let mut violations: Vec<BlurViolation> = per_pair.iter().flat_map(|(v, _)| v.iter().cloned()).collect();

    // (ii): every label triple without Id and with >= 2 blur labels
    let cells = spec.cells();
    let principal: Vec<UltrafilterLabel> = cells
        .iter()
        .map(|&(blur, base)| UltrafilterLabel::Principal(SymbolicAtom::Blur { row: 0, blur, base }))
        .collect();
    let third: Vec<UltrafilterLabel> = (0..blurs).map(UltrafilterLabel::Blur).chain(principal).collect();
    let ii: Vec<(Vec<BlurViolation>, usize)> = (0..blurs)
        .into_par_iter()
        .map(|s| {
            let mut bad = Vec::new();
            let mut n = 0;
            for z in 0..blurs {
                for &k in &third {
                    n += 1;
                    let labels = [UltrafilterLabel::Blur(s), UltrafilterLabel::Blur(z), k];
                    if !uf_triple_consistent(spec, labels[0], labels[1], labels[2]) {
                        bad.push(BlurViolation::Ii { labels });
                    }
                }
            }
            (bad, n)
        })
        .collect();
    let label_triples_checked = ii.iter().map(|(_, n)| n).sum();
    violations.extend(ii.into_iter().flat_map(|(v, _)| v));

    // (iii): some W is cofinite in both a;b and c;d
    let mut classes: BTreeMap<Vec<bool>, (SymbolicAtom, SymbolicAtom)> = BTreeMap::new();
    for (&(a, b), (_, mask)) in pairs.iter().zip(&per_pair) {
        classes.entry(mask.clone()).or_insert((a, b));
    }
    let classes: Vec<_> = classes.into_iter().collect();
    for (n, (m1, (a, b))) in classes.iter().enumerate() {
        for (m2, (c, d)) in &classes[n..] {
            if !m1.iter().zip(m2).any(|(x, y)| *x && *y) {
                violations.push(BlurViolation::Iii { a: *a, b: *b, c: *c, d: *d });
            }
        }
    }

    BlurReport {
        violations,
        pairs_checked: pairs.len(),
        label_triples_checked,
    }
}

fn masks_of(blurs: &[BTreeSet<usize>]) -> Vec<u64> {
    blurs.iter().map(|b| b.iter().fold(0, |m, &p| m | 1 << p)).collect()
}

/// The distinct values of `a;b ∩ I` for `a, b ∈ I`, as bitmasks over `I`.
fn base_products(m: &FiniteAtomStructure) -> Vec<u64> {
    let k = m.atom_count() - 1;
    let mut out = BTreeSet::new();
    for a in 1..=k {
        for b in 1..=k {
            let mask = (1..=k).filter(|&c| m.consistent(a, b, c)).fold(0u64, |acc, c| acc | 1 << (c - 1));
            out.insert(mask);
        }
    }
    out.into_iter().collect()
}

/// Meets of `n` products, over all choices (products may repeat).
fn meets(products: &[u64], n: usize) -> BTreeSet<u64> {
    let mut acc: BTreeSet<u64> = [u64::MAX].into_iter().collect();
    for _ in 0..n {
        acc = acc.iter().flat_map(|&x| products.iter().map(move |&p| x & p)).collect();
    }
    acc
}

/// `(∀a₁…aₙ, b₁…bₙ ∈ I)(∃W ∈ J) W ∩ (a₁;b₁) ∩ … ∩ (aₙ;bₙ) ≠ ∅`.
///
/// `blurs` are index sets into the diversity atoms of `m`.
pub fn n_complex_blur(m: &FiniteAtomStructure, blurs: &[BTreeSet<usize>], n: usize) -> bool {
    let js = masks_of(blurs);
    meets(&base_products(m), n).iter().all(|&x| js.iter().any(|&w| w & x != 0))
}

/// The strengthened form with `∀W ∈ J` in place of `∃W ∈ J`.
pub fn n_complex_blur_strong(m: &FiniteAtomStructure, blurs: &[BTreeSet<usize>], n: usize) -> bool {
    let js = masks_of(blurs);
    meets(&base_products(m), n).iter().all(|&x| js.iter().all(|&w| w & x != 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blowup::{all_subsets, blur_structure, blur_structure_unchecked, f_l_mu};
    use crate::finite_ra::{default_atom_names, make_m};

    /// Literal quantifier nest over all `2n`-tuples.
    fn brute_n_complex(m: &FiniteAtomStructure, blurs: &[BTreeSet<usize>], n: usize) -> bool {
        let k = m.atom_count() - 1;
        let total = (k * k).pow(n as u32);
        (0..total).all(|mut code| {
            let mut live: BTreeSet<usize> = (0..k).collect();
            for _ in 0..n {
                let (a, b) = (code % k, code / k % k);
                code /= k * k;
                live.retain(|&c| m.consistent(a + 1, b + 1, c + 1));
            }
            blurs.iter().any(|w| w.iter().any(|c| live.contains(c)))
        })
    }

    #[test]
    fn n_complex_blur_examples() {
        for (k, expected) in [(6, true), (8, true), (3, false)] {
            let m = make_m(&default_atom_names(k)).unwrap();
            let j = all_subsets(k, 2);
            assert_eq!(n_complex_blur(&m, &j, 3), expected, "|I| = {k}");
        }
    }

    #[test]
    fn n_complex_blur_matches_literal_definition() {
        for k in 2..=6 {
            let m = make_m(&default_atom_names(k)).unwrap();
            for size in 1..=2.min(k) {
                let j = all_subsets(k, size);
                for n in 1..=3 {
                    assert_eq!(n_complex_blur(&m, &j, n), brute_n_complex(&m, &j, n), "k={k} size={size} n={n}");
                }
            }
        }
    }

    #[test]
    fn strong_form_is_stronger() {
        let m = make_m(&default_atom_names(6)).unwrap();
        let j = all_subsets(6, 2);
        assert!(!n_complex_blur_strong(&m, &j, 3));
        assert!(n_complex_blur_strong(&m, &j, 1));
    }

    #[test]
    fn clean_for_blurrable_structures() {
        let m = make_m(&default_atom_names(6)).unwrap();
        let spec = blur_structure(&m, &all_subsets(6, 2)).unwrap();
        let report = check_blur_conditions(spec.as_blur().unwrap());
        assert!(report.is_clean(), "{:?}", &report.violations[..report.violations.len().min(5)]);
        let f = f_l_mu(&default_atom_names(6), 2, 1).unwrap();
        assert!(check_blur_conditions(f.as_blur().unwrap()).is_clean());
    }

    #[test]
    fn doctored_structures_fail() {
        let m = make_m(&default_atom_names(6)).unwrap();
        let spec = blur_structure(&m, &all_subsets(6, 2)).unwrap();
        let doctored = spec.as_blur().unwrap().clone().without_disjoint_rule();
        let report = check_blur_conditions(&doctored);
        assert!(report.violations.iter().any(|v| matches!(v, BlurViolation::Iii { .. })));

        // three pairwise-overlapping blurs with a common core
        let partial: Vec<BTreeSet<usize>> = [[0, 1], [0, 2], [0, 3]].iter().map(|p| p.iter().copied().collect()).collect();
        let spec = blur_structure_unchecked(&m, &partial).unwrap();
        let report = check_blur_conditions(spec.as_blur().unwrap());
        assert!(!report.is_clean());
    }
}
