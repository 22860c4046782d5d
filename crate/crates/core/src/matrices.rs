//! Basic matrices over a finite atom structure and the amalgamation property
//! of the matrix atom structure.
//!
//! An ω-row structure is handled through its truncations: a basic matrix of
//! the blown-up structure with rows below `D` is a basic matrix of the
//! truncation at depth `D`.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finite_ra::{AtomId, FiniteAtomStructure, IDENTITY};

/// Upper bound on `|atoms|^(n(n-1)/2)` accepted by [`enumerate_matrices`].
pub const ENUMERATION_LIMIT: u128 = 50_000_000;

/// An `n × n` atom-valued matrix with identity diagonal, symmetric entries
/// (all atoms self-converse) and consistent triangles.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BasicMatrix {
    n: usize,
    /// Strict upper triangle, row by row: `(0,1), (0,2), …, (n-2,n-1)`.
    upper: Vec<AtomId>,
}

fn pair_index(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

impl BasicMatrix {
    /// Builds and validates a matrix from its strict upper triangle.
    pub fn new(s: &FiniteAtomStructure, n: usize, upper: Vec<AtomId>) -> Result<Self> {
        if upper.len() != n * n.saturating_sub(1) / 2 {
            return Err(Error::InvalidParameter(format!("{} entries for dimension {n}", upper.len())));
        }
        let m = BasicMatrix { n, upper };
        if let Some(bad) = m.violation(s) {
            return Err(Error::InvalidStructure(bad));
        }
        Ok(m)
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> AtomId {
        if i == j {
            IDENTITY
        } else {
            self.upper[pair_index(self.n, i, j)]
        }
    }

    fn violation(&self, s: &FiniteAtomStructure) -> Option<String> {
        if !s.all_self_converse() {
            return Some("matrices need an all-self-converse structure".into());
        }
        for (k, &a) in self.upper.iter().enumerate() {
            if a >= s.atom_count() {
                return Some(format!("entry {k} is not an atom"));
            }
        }
        for i in 0..self.n {
            for j in 0..self.n {
                for k in 0..self.n {
                    if !s.consistent(self.get(i, j), self.get(j, k), self.get(i, k)) {
                        return Some(format!("triangle ({i}, {j}, {k}) is inconsistent"));
                    }
                }
            }
        }
        None
    }

    /// Whether `self` and `other` agree on every entry not involving an index
    /// in `skip`.
    pub fn agrees_off(&self, other: &BasicMatrix, skip: &[usize]) -> bool {
        (0..self.n).all(|i| {
            (i + 1..self.n).all(|j| skip.contains(&i) || skip.contains(&j) || self.get(i, j) == other.get(i, j))
        })
    }
}

/// All basic matrices of dimension `n`, in lexicographic order of their upper
/// triangles.
pub fn enumerate_matrices(s: &FiniteAtomStructure, n: usize) -> Result<Vec<BasicMatrix>> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("dimension must be at least 2, got {n}")));
    }
    if !s.all_self_converse() {
        return Err(Error::InvalidStructure("matrices need an all-self-converse structure".into()));
    }
    let entries = n * (n - 1) / 2;
    let bound = (s.atom_count() as u128).checked_pow(entries as u32).unwrap_or(u128::MAX);
    if bound > ENUMERATION_LIMIT {
        return Err(Error::EnumerationTooLarge(format!(
            "{} atoms in dimension {n} give up to {bound} candidate matrices (limit {ENUMERATION_LIMIT})",
            s.atom_count()
        )));
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();

    // Fill in order; once (i, j) is set with i < j, every triangle (h, i, j)
    // with h < i is complete and is checked.
    fn fill(
        s: &FiniteAtomStructure,
        n: usize,
        pairs: &[(usize, usize)],
        upper: &mut Vec<AtomId>,
        out: &mut Vec<BasicMatrix>,
    ) {
        let k = upper.len();
        if k == pairs.len() {
            out.push(BasicMatrix { n, upper: upper.clone() });
            return;
        }
        let (i, j) = pairs[k];
        for a in s.atoms() {
            upper.push(a);
            let ok = (0..i).all(|h| {
                let hi = upper[pair_index(n, h, i)];
                let hj = upper[pair_index(n, h, j)];
                s.consistent(hi, a, hj)
            });
            if ok {
                fill(s, n, pairs, upper, out);
            }
            upper.pop();
        }
    }

    let first: Vec<AtomId> = s.atoms().collect();
    let mut out: Vec<BasicMatrix> = first
        .par_iter()
        .flat_map_iter(|&a| {
            let mut local = Vec::new();
            let mut upper = vec![a];
            fill(s, n, &pairs, &mut upper, &mut local);
            local
        })
        .collect();
    out.sort();
    Ok(out)
}

/// A failure of amalgamation: `m` and `m2` agree off `{i, j}` but no matrix
/// agrees with `m` off `i` and with `m2` off `j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmalgamationFailure {
    pub i: usize,
    pub j: usize,
    pub m: BasicMatrix,
    pub m2: BasicMatrix,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisReport {
    pub pairs_checked: usize,
    pub failure_count: usize,
    /// The first few failures.
    pub failures: Vec<AmalgamationFailure>,
}

impl BasisReport {
    pub fn is_clean(&self) -> bool {
        self.failure_count == 0
    }
}

const REPORTED_FAILURES: usize = 16;

/// For all `m, m′` agreeing off distinct indices `i, j`, some matrix agrees
/// with `m` off `i` and with `m′` off `j`.
pub fn check_cylindric_basis(s: &FiniteAtomStructure, n: usize, matrices: &[BasicMatrix]) -> BasisReport {
    let set: HashSet<&BasicMatrix> = matrices.iter().collect();
    let mut report = BasisReport::default();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            // only the parts off i (from m) and off j (from m2) matter
            let mut groups: BTreeMap<Vec<AtomId>, (BTreeSet<&BasicMatrix>, BTreeSet<&BasicMatrix>)> = BTreeMap::new();
            let restrict = |m: &BasicMatrix, skip: &[usize]| -> Vec<AtomId> {
                (0..n)
                    .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
                    .map(|(a, b)| if skip.contains(&a) || skip.contains(&b) { usize::MAX } else { m.get(a, b) })
                    .collect()
            };
            let mut seen_i = HashSet::new();
            let mut seen_j = HashSet::new();
            for m in matrices {
                let key = restrict(m, &[i, j]);
                let entry = groups.entry(key).or_default();
                if seen_i.insert(restrict(m, &[i])) {
                    entry.0.insert(m);
                }
                if seen_j.insert(restrict(m, &[j])) {
                    entry.1.insert(m);
                }
            }
            for (left, right) in groups.values() {
                for &m in left {
                    for &m2 in right {
                        report.pairs_checked += 1;
                        if !amalgam_exists(s, n, i, j, m, m2, &set) {
                            report.failure_count += 1;
                            if report.failures.len() < REPORTED_FAILURES {
                                report.failures.push(AmalgamationFailure { i, j, m: m.clone(), m2: m2.clone() });
                            }
                        }
                    }
                }
            }
        }
    }
    report
}

fn amalgam_exists(
    s: &FiniteAtomStructure,
    n: usize,
    i: usize,
    j: usize,
    m: &BasicMatrix,
    m2: &BasicMatrix,
    set: &HashSet<&BasicMatrix>,
) -> bool {
    // entries off i come from m, entries off j from m2; only (i, j) is free
    let mut upper: Vec<AtomId> = Vec::with_capacity(m.upper.len());
    for a in 0..n {
        for b in a + 1..n {
            let touches_i = a == i || b == i;
            upper.push(if !touches_i { m.get(a, b) } else { m2.get(a, b) });
        }
    }
    let free = pair_index(n, i, j);
    s.atoms().any(|x| {
        let mut cand = upper.clone();
        cand[free] = x;
        set.contains(&BasicMatrix { n, upper: cand })
    })
}

/// The conjunction `⋀_{i<j} α_ij` describing a matrix: `x_i = x_j` for an
/// identity entry, else `R_a(x_i, x_j)` for the atom name `a`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AlphaDescriptor(String);

impl fmt::Display for AlphaDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for AlphaDescriptor {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(AlphaDescriptor(s.to_string()))
    }
}

pub fn alpha_m_descriptor(s: &FiniteAtomStructure, m: &BasicMatrix) -> AlphaDescriptor {
    let mut parts = Vec::new();
    for i in 0..m.n {
        for j in i + 1..m.n {
            let a = m.get(i, j);
            parts.push(if a == IDENTITY {
                format!("x{i} = x{j}")
            } else {
                format!("{}(x{i}, x{j})", s.name(a))
            });
        }
    }
    if parts.is_empty() {
        parts.push("true".into());
    }
    AlphaDescriptor(format!("n={}: {}", m.n, parts.join(" & ")))
}

/// Reads a descriptor back into its matrix.
pub fn parse_alpha_descriptor(s: &FiniteAtomStructure, d: &AlphaDescriptor) -> Result<BasicMatrix> {
    let bad = || Error::Parse(format!("malformed descriptor `{d}`"));
    let (head, body) = d.0.split_once(": ").ok_or_else(bad)?;
    let n: usize = head.strip_prefix("n=").and_then(|x| x.parse().ok()).ok_or_else(bad)?;
    let mut upper = Vec::new();
    if body != "true" {
        for part in body.split(" & ") {
            let atom = if part.contains(" = ") {
                IDENTITY
            } else {
                let name = part.split_once('(').ok_or_else(bad)?.0;
                s.index_of(name).ok_or_else(|| Error::Parse(format!("unknown atom `{name}`")))?
            };
            upper.push(atom);
        }
    }
    BasicMatrix::new(s, n, upper)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blowup::all_subsets;
    use crate::finite_ra::{default_atom_names, make_m};
    use crate::symbolic::n_complex_blur;

    fn brute(s: &FiniteAtomStructure, n: usize) -> Vec<BasicMatrix> {
        let entries = n * (n - 1) / 2;
        let k = s.atom_count();
        let mut out = Vec::new();
        for code in 0..k.pow(entries as u32) {
            let mut c = code;
            let mut upper = vec![0; entries];
            for slot in upper.iter_mut().rev() {
                *slot = c % k;
                c /= k;
            }
            if let Ok(m) = BasicMatrix::new(s, n, upper) {
                out.push(m);
            }
        }
        out
    }

    #[test]
    fn trivial_structure() {
        let s = FiniteAtomStructure::from_oracle(vec!["Id".into()], |_, _, _| true).unwrap();
        let ms = enumerate_matrices(&s, 3).unwrap();
        assert_eq!(ms.len(), 1);
        assert!(check_cylindric_basis(&s, 3, &ms).is_clean());
    }

    #[test]
    fn enumeration_matches_brute_force() {
        for k in 2..=4 {
            let m = make_m(&default_atom_names(k)).unwrap();
            for n in 2..=4 {
                assert_eq!(enumerate_matrices(&m, n).unwrap(), brute(&m, n), "k={k} n={n}");
            }
        }
    }

    #[test]
    fn identity_entries_allowed() {
        let m = make_m(&default_atom_names(3)).unwrap();
        assert!(BasicMatrix::new(&m, 3, vec![IDENTITY, 1, 1]).is_ok());
        assert!(BasicMatrix::new(&m, 3, vec![IDENTITY, 1, 2]).is_err());
    }

    #[test]
    fn monochromatic_triangles_rejected() {
        let m = make_m(&default_atom_names(6)).unwrap();
        let ms = enumerate_matrices(&m, 3).unwrap();
        assert!(ms
            .iter()
            .all(|x| x.get(0, 1) == IDENTITY || !(x.get(0, 1) == x.get(1, 2) && x.get(1, 2) == x.get(0, 2))));
        assert!(BasicMatrix::new(&m, 3, vec![1, 1, 1]).is_err());
        assert!(BasicMatrix::new(&m, 3, vec![1, 1, 2]).is_ok());
    }

    #[test]
    fn permutation_closed() {
        let m = make_m(&default_atom_names(4)).unwrap();
        let n = 4;
        let ms = enumerate_matrices(&m, n).unwrap();
        let set: HashSet<_> = ms.iter().cloned().collect();
        let perm = [2, 0, 3, 1];
        for x in &ms {
            let upper = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).map(|(i, j)| x.get(perm[i], perm[j])).collect();
            assert!(set.contains(&BasicMatrix { n, upper }));
        }
    }

    #[test]
    fn size_guard() {
        let m = make_m(&default_atom_names(8)).unwrap();
        assert!(matches!(enumerate_matrices(&m, 6), Err(Error::EnumerationTooLarge(_))));
        assert!(enumerate_matrices(&m, 1).is_err());
    }

    #[test]
    fn descriptors_injective_and_round_trip() {
        let m = make_m(&default_atom_names(3)).unwrap();
        let ms = enumerate_matrices(&m, 4).unwrap();
        let ds: HashSet<_> = ms.iter().map(|x| alpha_m_descriptor(&m, x)).collect();
        assert_eq!(ds.len(), ms.len());
        for x in &ms {
            assert_eq!(&parse_alpha_descriptor(&m, &alpha_m_descriptor(&m, x)).unwrap(), x);
        }
        let s = FiniteAtomStructure::from_oracle(vec!["Id".into()], |_, _, _| true).unwrap();
        let all_id = &enumerate_matrices(&s, 3).unwrap()[0];
        assert_eq!(alpha_m_descriptor(&s, all_id).to_string(), "n=3: x0 = x1 & x0 = x2 & x1 = x2");
    }

    #[test]
    fn amalgamation_for_large_bases() {
        let m = make_m(&default_atom_names(8)).unwrap();
        let ms = enumerate_matrices(&m, 3).unwrap();
        assert!(check_cylindric_basis(&m, 3, &ms).is_clean());
        assert!(n_complex_blur(&m, &all_subsets(8, 2), 3));
    }

    #[test]
    fn amalgamation_fails_when_a_composition_is_empty() {
        // P;P = {P} and P;Q = ∅: no matrix puts P and Q on two sides of a
        // triangle, but P-only and Q-with-identity matrices both exist
        let s = FiniteAtomStructure::from_oracle(vec!["Id".into(), "P".into(), "Q".into()], |a, b, c| {
            if [a, b, c].contains(&IDENTITY) {
                crate::finite_ra::identity_law(a, b, c)
            } else {
                a == 1 && b == 1 && c == 1
            }
        })
        .unwrap();
        let ms = enumerate_matrices(&s, 3).unwrap();
        let report = check_cylindric_basis(&s, 3, &ms);
        assert!(!report.is_clean());
        let f = &report.failures[0];
        assert!(f.m.agrees_off(&f.m2, &[f.i, f.j]));
    }
}
