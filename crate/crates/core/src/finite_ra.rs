//! Finite relation-algebra atom structures and their complex algebras.
//!
//! A triple `(a, b, c)` is *consistent* when `c <= a ; b`. Atom 0 is always the
//! identity atom.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type AtomId = usize;

/// Index of the identity atom in every [`FiniteAtomStructure`].
pub const IDENTITY: AtomId = 0;

pub type AtomSet = BTreeSet<AtomId>;

/// A finite atom structure: atom names, converse map and the consistent
/// triples, stored as an `n^3` bitset.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteAtomStructure {
    names: Vec<String>,
    converse: Vec<AtomId>,
    bits: Vec<u64>,
}

impl fmt::Debug for FiniteAtomStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteAtomStructure")
            .field("atoms", &self.names)
            .finish_non_exhaustive()
    }
}

impl FiniteAtomStructure {
    /// A structure with no consistent triples. `names[0]` is the identity.
    pub fn new(names: Vec<String>, converse: Vec<AtomId>) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(Error::InvalidStructure("no atoms (an identity atom is required)".into()));
        }
        if converse.len() != n {
            return Err(Error::InvalidStructure(format!(
                "converse map has {} entries for {n} atoms",
                converse.len()
            )));
        }
        if let Some(bad) = converse.iter().find(|&&c| c >= n) {
            return Err(Error::InvalidStructure(format!("converse target {bad} out of range")));
        }
        let mut seen = HashSet::new();
        for name in &names {
            if !seen.insert(name.as_str()) {
                return Err(Error::DuplicateAtom(name.clone()));
            }
        }
        Ok(FiniteAtomStructure {
            names,
            converse,
            bits: vec![0; (n * n * n).div_ceil(64)],
        })
    }

    /// An all-self-converse structure whose consistent triples are given by
    /// `oracle(a, b, c)`.
    pub fn from_oracle<F>(names: Vec<String>, oracle: F) -> Result<Self>
    where
        F: Fn(AtomId, AtomId, AtomId) -> bool,
    {
        let n = names.len();
        let mut s = FiniteAtomStructure::new(names, (0..n).collect())?;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if oracle(a, b, c) {
                        s.set_consistent(a, b, c, true);
                    }
                }
            }
        }
        Ok(s)
    }

    #[inline]
    fn index(&self, a: AtomId, b: AtomId, c: AtomId) -> usize {
        let n = self.names.len();
        (a * n + b) * n + c
    }

    pub fn set_consistent(&mut self, a: AtomId, b: AtomId, c: AtomId, value: bool) {
        let i = self.index(a, b, c);
        if value {
            self.bits[i / 64] |= 1 << (i % 64);
        } else {
            self.bits[i / 64] &= !(1 << (i % 64));
        }
    }

    #[inline]
    pub fn consistent(&self, a: AtomId, b: AtomId, c: AtomId) -> bool {
        let i = self.index(a, b, c);
        self.bits[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn atom_count(&self) -> usize {
        self.names.len()
    }

    pub fn atoms(&self) -> std::ops::Range<AtomId> {
        0..self.names.len()
    }

    /// Non-identity atoms.
    pub fn diversity_atoms(&self) -> std::ops::Range<AtomId> {
        1..self.names.len()
    }

    pub fn name(&self, a: AtomId) -> &str {
        &self.names[a]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<AtomId> {
        self.names.iter().position(|n| n == name)
    }

    pub fn converse(&self, a: AtomId) -> AtomId {
        self.converse[a]
    }

    pub fn all_self_converse(&self) -> bool {
        self.converse.iter().enumerate().all(|(a, &c)| a == c)
    }

    /// `a ; b` as an atom set.
    pub fn compose_atoms(&self, a: AtomId, b: AtomId) -> AtomSet {
        self.atoms().filter(|&c| self.consistent(a, b, c)).collect()
    }

    /// Number of consistent triples.
    pub fn consistent_count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }
}

/// The finite algebra 𝐌 over diversity atoms `I`: every atom is self-converse,
/// `P;P = (I \ {P}) ∪ {Id}` and `P;Q = I` for `P != Q`.
///
/// Equivalently a diversity triple is consistent iff its three atoms are not
/// all equal.
pub fn make_m<S: AsRef<str>>(diversity: &[S]) -> Result<FiniteAtomStructure> {
    if diversity.len() < 2 {
        return Err(Error::InvalidParameter(format!(
            "𝐌 needs at least 2 diversity atoms, got {}",
            diversity.len()
        )));
    }
    let mut names = vec!["Id".to_string()];
    names.extend(diversity.iter().map(|s| s.as_ref().to_string()));
    FiniteAtomStructure::from_oracle(names, |a, b, c| {
        if a == IDENTITY || b == IDENTITY || c == IDENTITY {
            identity_law(a, b, c)
        } else {
            !(a == b && b == c)
        }
    })
}

/// Identity law for triples touching the identity in a self-converse
/// structure: the two remaining entries must coincide.
pub(crate) fn identity_law(a: AtomId, b: AtomId, c: AtomId) -> bool {
    if a == IDENTITY {
        b == c
    } else if b == IDENTITY {
        a == c
    } else {
        a == b
    }
}

/// Default diversity atom names `P0, P1, ...`.
pub fn default_atom_names(count: usize) -> Vec<String> {
    (0..count).map(|i| format!("P{i}")).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AxiomViolation {
    IdentityNotSelfConverse,
    ConverseNotInvolution { atom: AtomId },
    /// `Id ; b` (or `b ; Id`) disagrees with `b` at `c`.
    IdentityLaw { triple: (AtomId, AtomId, AtomId) },
    /// `present` is consistent but its Peircean transform `missing` is not.
    Peircean {
        present: (AtomId, AtomId, AtomId),
        missing: (AtomId, AtomId, AtomId),
    },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub violations: Vec<AxiomViolation>,
    pub triples_scanned: usize,
}

impl AxiomReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Every violated instance of the identity law, the converse involution and
/// Peircean closure: `(a,b,c)` consistent implies `(ă,c,b)` and `(c,b̆,a)`
/// consistent. For all-self-converse structures the latter is closure under
/// all six permutations.
pub fn check_axioms(s: &FiniteAtomStructure) -> AxiomReport {
    let mut report = AxiomReport::default();
    if s.converse(IDENTITY) != IDENTITY {
        report.violations.push(AxiomViolation::IdentityNotSelfConverse);
    }
    for a in s.atoms() {
        if s.converse(s.converse(a)) != a {
            report.violations.push(AxiomViolation::ConverseNotInvolution { atom: a });
        }
    }
    for b in s.atoms() {
        for c in s.atoms() {
            let expected = b == c;
            if s.consistent(IDENTITY, b, c) != expected {
                report.violations.push(AxiomViolation::IdentityLaw { triple: (IDENTITY, b, c) });
            }
            if b != IDENTITY && s.consistent(b, IDENTITY, c) != expected {
                report.violations.push(AxiomViolation::IdentityLaw { triple: (b, IDENTITY, c) });
            }
        }
    }
    let n = s.atom_count();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if !s.consistent(a, b, c) {
                    continue;
                }
                for t in [(s.converse(a), c, b), (c, s.converse(b), a)] {
                    if !s.consistent(t.0, t.1, t.2) {
                        report.violations.push(AxiomViolation::Peircean {
                            present: (a, b, c),
                            missing: t,
                        });
                    }
                }
            }
        }
    }
    report.triples_scanned = n * n * n;
    report
}

/// Atom triples where `(a;b);c != a;(b;c)`. Associativity on atoms implies it
/// on all subsets since composition is completely additive.
pub fn check_associativity(s: &FiniteAtomStructure) -> Vec<(AtomId, AtomId, AtomId)> {
    let comp: Vec<Vec<AtomSet>> = s
        .atoms()
        .map(|a| s.atoms().map(|b| s.compose_atoms(a, b)).collect())
        .collect();
    let compose_set_atom = |x: &AtomSet, c: AtomId| -> AtomSet {
        x.iter().flat_map(|&a| comp[a][c].iter().copied()).collect()
    };
    let compose_atom_set = |a: AtomId, y: &AtomSet| -> AtomSet {
        y.iter().flat_map(|&b| comp[a][b].iter().copied()).collect()
    };
    let mut failures = Vec::new();
    for a in s.atoms() {
        for b in s.atoms() {
            for c in s.atoms() {
                if compose_set_atom(&comp[a][b], c) != compose_atom_set(a, &comp[b][c]) {
                    failures.push((a, b, c));
                }
            }
        }
    }
    failures
}

/// `{c : ∃ a∈X, b∈Y, (a,b,c) consistent}`.
pub fn cm_compose(s: &FiniteAtomStructure, x: &AtomSet, y: &AtomSet) -> AtomSet {
    s.atoms()
        .filter(|&c| x.iter().any(|&a| y.iter().any(|&b| s.consistent(a, b, c))))
        .collect()
}

/// The complex algebra of a finite atom structure: all subsets of atoms with
/// pointwise converse and composition [`cm_compose`].
#[derive(Clone, Copy, Debug)]
pub struct ComplexAlgebra<'a> {
    pub structure: &'a FiniteAtomStructure,
}

impl<'a> ComplexAlgebra<'a> {
    pub fn new(structure: &'a FiniteAtomStructure) -> Self {
        ComplexAlgebra { structure }
    }

    pub fn top(&self) -> AtomSet {
        self.structure.atoms().collect()
    }

    pub fn identity(&self) -> AtomSet {
        AtomSet::from([IDENTITY])
    }

    pub fn join(&self, x: &AtomSet, y: &AtomSet) -> AtomSet {
        x | y
    }

    pub fn meet(&self, x: &AtomSet, y: &AtomSet) -> AtomSet {
        x & y
    }

    pub fn complement(&self, x: &AtomSet) -> AtomSet {
        self.structure.atoms().filter(|a| !x.contains(a)).collect()
    }

    pub fn converse(&self, x: &AtomSet) -> AtomSet {
        x.iter().map(|&a| self.structure.converse(a)).collect()
    }

    pub fn compose(&self, x: &AtomSet, y: &AtomSet) -> AtomSet {
        cm_compose(self.structure, x, y)
    }
}
