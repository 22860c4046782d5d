use std::fmt;

use serde::{Deserialize, Serialize};

use super::term::TermElement;
use crate::blowup::{BlurSpec, SymbolicAtom};

/// An ultrafilter of the term algebra: principal at an atom, or the
/// non-principal `U^W` of cofinite `W`-slices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum UltrafilterLabel {
    Principal(SymbolicAtom),
    Blur(usize),
}

impl UltrafilterLabel {
    pub const IDENTITY: UltrafilterLabel = UltrafilterLabel::Principal(SymbolicAtom::Identity);

    pub fn is_principal(&self) -> bool {
        matches!(self, UltrafilterLabel::Principal(_))
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::IDENTITY
    }
}

impl fmt::Display for UltrafilterLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UltrafilterLabel::Principal(a) => write!(f, "U[{a}]"),
            UltrafilterLabel::Blur(w) => write!(f, "U[W{w}]"),
        }
    }
}

pub fn in_ultrafilter(x: &TermElement, f: UltrafilterLabel) -> bool {
    match f {
        UltrafilterLabel::Principal(a) => x.contains(a),
        UltrafilterLabel::Blur(w) => x.slices.get(w).is_some_and(|s| s.is_cofinite()),
    }
}

/// Blur and base of a diversity atom.
fn cell(a: SymbolicAtom) -> (usize, usize) {
    match a {
        SymbolicAtom::Blur { blur, base, .. } => (blur, base),
        _ => panic!("{a} is not a blur atom"),
    }
}

/// `F ; G ⊆ K`: every `X ; Y` with `X ∈ F`, `Y ∈ G` lies in `K`.
///
/// Because the filters are generated by `{a}` and by the tails
/// `{a_i^{P,W} : i >= m}`, the condition reduces to the closed forms below.
fn demands_met(spec: &BlurSpec, f: UltrafilterLabel, g: UltrafilterLabel, k: UltrafilterLabel) -> bool {
    use SymbolicAtom::Identity as Id;
    use UltrafilterLabel::{Blur, Principal};
    match (f, g, k) {
        (Principal(Id), other, k) | (other, Principal(Id), k) => other == k,
        (Principal(a), Principal(b), Principal(Id)) => a == b,
        (Principal(a), Principal(b), Principal(c)) => spec_consistent(spec, a, b, c),
        (Principal(a), Principal(b), Blur(w)) => spec.disjoint(cell(a).0, cell(b).0, w),
        (Principal(_), Blur(_), Principal(Id)) | (Blur(_), Principal(_), Principal(Id)) => false,
        (Principal(a), Blur(s), Principal(c)) | (Blur(s), Principal(a), Principal(c)) => {
            spec.disjoint(cell(a).0, s, cell(c).0)
        }
        (Principal(a), Blur(s), Blur(w)) | (Blur(s), Principal(a), Blur(w)) => {
            let (sa, p) = cell(a);
            spec.disjoint(sa, s, w)
                || spec.blur(w).bases().all(|r| spec.blur(s).bases().any(|q| spec.base_cond(p, q, r)))
        }
        (Blur(s), Blur(z), Principal(Id)) => s == z,
        (Blur(s), Blur(z), Principal(c)) => {
            let (w, r) = cell(c);
            spec.disjoint(s, z, w) || exists_pair(spec, s, z, r)
        }
        (Blur(s), Blur(z), Blur(w)) => {
            spec.disjoint(s, z, w) || spec.blur(w).bases().all(|r| exists_pair(spec, s, z, r))
        }
    }
}

fn exists_pair(spec: &BlurSpec, s: usize, z: usize, r: usize) -> bool {
    spec.blur(s)
        .bases()
        .any(|p| spec.blur(z).bases().any(|q| spec.base_cond(p, q, r)))
}

fn spec_consistent(spec: &BlurSpec, a: SymbolicAtom, b: SymbolicAtom, c: SymbolicAtom) -> bool {
    match (a, b, c) {
        (
            SymbolicAtom::Blur { row: i, blur: s, base: p },
            SymbolicAtom::Blur { row: j, blur: z, base: q },
            SymbolicAtom::Blur { row: k, blur: w, base: r },
        ) => spec.cells_consistent((i, s, p), (j, z, q), (k, w, r)),
        _ => panic!("non-blur atom in a blur structure"),
    }
}

/// `F;G ⊆ K`, `F;K ⊆ G` and `G;K ⊆ F`.
pub fn uf_triple_consistent(spec: &BlurSpec, f: UltrafilterLabel, g: UltrafilterLabel, k: UltrafilterLabel) -> bool {
    demands_met(spec, f, g, k) && demands_met(spec, f, k, g) && demands_met(spec, g, k, f)
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;
    use crate::blowup::{all_subsets, blur_structure, f_l_mu, AtomStructureSpec};
    use crate::finite_ra::{default_atom_names, make_m};
    use proptest::prelude::*;

    fn blur6() -> AtomStructureSpec {
        let m = make_m(&default_atom_names(6)).unwrap();
        blur_structure(&m, &all_subsets(6, 2)).unwrap()
    }

    /// Generators of a label's filter, as atom lists in a finite window:
    /// `{a}` for principal labels, rows `tail..window` of `E^W` for blurs.
    fn generator(spec: &BlurSpec, f: UltrafilterLabel, tail: u32, window: u32) -> Vec<SymbolicAtom> {
        match f {
            UltrafilterLabel::Principal(a) => vec![a],
            UltrafilterLabel::Blur(w) => spec
                .atoms_below(window)
                .into_iter()
                .filter(|a| matches!(a, SymbolicAtom::Blur { row, blur, .. } if *blur == w && *row >= tail))
                .collect(),
        }
    }

    /// `F;G ⊆ K` by enumeration. Principal labels sit on rows < 3, so blur
    /// generators start at row 5, beyond every e-witness of two such rows.
    /// Membership of the product in `U^W` is judged on rows `probe..2 * probe`,
    /// past any finite part, with witnesses drawn from rows `< 4 * probe`.
    fn brute_demands(
        spec: &AtomStructureSpec,
        f: UltrafilterLabel,
        g: UltrafilterLabel,
        k: UltrafilterLabel,
    ) -> bool {
        let b = spec.as_blur().unwrap();
        let tail = 5;
        let probe = 8;
        let xs = generator(b, f, tail, 4 * probe);
        let ys = generator(b, g, tail, 4 * probe);
        let hit = |c: SymbolicAtom| xs.iter().any(|&x| ys.iter().any(|&y| spec.consistent(x, y, c)));
        match k {
            UltrafilterLabel::Principal(c) => hit(c),
            UltrafilterLabel::Blur(w) => (probe..2 * probe).all(|row| {
                b.blur(w).bases().all(|base| hit(SymbolicAtom::Blur { row, blur: w, base }))
            }),
        }
    }

    fn labels(spec: &BlurSpec) -> Vec<UltrafilterLabel> {
        let mut out = vec![UltrafilterLabel::IDENTITY];
        let cells = spec.cells();
        for (n, &(blur, base)) in cells.iter().enumerate().step_by(4) {
            out.push(UltrafilterLabel::Principal(SymbolicAtom::Blur { row: n as u32 % 3, blur, base }));
        }
        for w in (0..spec.blur_count()).step_by(3) {
            out.push(UltrafilterLabel::Blur(w));
        }
        out
    }

    #[test]
    fn closed_form_matches_bounded_enumeration() {
        for spec in [blur6(), blur6().as_blur().unwrap().clone().without_disjoint_rule().into()] {
            let b = spec.as_blur().unwrap();
            let ls = labels(b);
            for &f in &ls {
                for &g in &ls {
                    for &k in &ls {
                        assert_eq!(
                            demands_met(b, f, g, k),
                            brute_demands(&spec, f, g, k),
                            "{f} ; {g} ⊆ {k}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn examples() {
        let spec = blur6();
        let b = spec.as_blur().unwrap();
        let a = SymbolicAtom::Blur { row: 0, blur: 0, base: 0 };
        let pa = UltrafilterLabel::Principal(a);
        assert!(uf_triple_consistent(b, UltrafilterLabel::IDENTITY, pa, pa));
        // blur 0 = {P0,P1}, 14 = {P4,P5}, 9 = {P2,P3}: no common core
        assert!(uf_triple_consistent(b, UltrafilterLabel::Blur(14), UltrafilterLabel::Blur(9), pa));
        let c = SymbolicAtom::Blur { row: 3, blur: 9, base: 2 };
        assert!(uf_triple_consistent(b, pa, UltrafilterLabel::Principal(c), UltrafilterLabel::Blur(14)));
        assert!(!uf_triple_consistent(b, UltrafilterLabel::IDENTITY, pa, UltrafilterLabel::Blur(0)));
    }

    #[test]
    fn in_ultrafilter_examples() {
        let spec = blur6();
        let b = spec.as_blur().unwrap();
        let a = SymbolicAtom::Blur { row: 2, blur: 4, base: 5 };
        let x = TermElement::atom(b, a).unwrap();
        assert!(in_ultrafilter(&TermElement::blur_full(b, 4), UltrafilterLabel::Blur(4)));
        assert!(in_ultrafilter(&x, UltrafilterLabel::Principal(a)));
        assert!(!in_ultrafilter(&x, UltrafilterLabel::Blur(4)));
    }

    #[test]
    fn identity_triples_with_every_atom() {
        for spec in [blur6(), f_l_mu(&default_atom_names(6), 2, 2).unwrap()] {
            let b = spec.as_blur().unwrap();
            for a in b.atoms_below(2) {
                let pa = UltrafilterLabel::Principal(a);
                assert!(uf_triple_consistent(b, UltrafilterLabel::IDENTITY, pa, pa));
            }
        }
    }

    proptest! {
        #[test]
        fn permutation_invariant(picks in proptest::array::uniform3(0usize..200)) {
            let spec = blur6();
            let b = spec.as_blur().unwrap();
            let mut ls = vec![UltrafilterLabel::IDENTITY];
            ls.extend(b.atoms_below(4).into_iter().map(UltrafilterLabel::Principal));
            ls.extend((0..b.blur_count()).map(UltrafilterLabel::Blur));
            let [x, y, z] = picks.map(|i| ls[i % ls.len()]);
            let v = uf_triple_consistent(b, x, y, z);
            let perms = [(x, z, y), (y, x, z), (y, z, x), (z, x, y), (z, y, x)];
            let distinct: BTreeSet<_> = perms.iter().map(|&(p, q, r)| uf_triple_consistent(b, p, q, r)).collect();
            prop_assert_eq!(distinct.into_iter().collect::<Vec<_>>(), vec![v]);
        }
    }
}
