//! The term algebra of a blur structure and its ultrafilters.

mod conditions;
mod term;
mod ultrafilter;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

pub use conditions::{check_blur_conditions, n_complex_blur, n_complex_blur_strong, BlurReport, BlurViolation};
pub use term::{atom_comp, compose, Slice, TermElement};
pub use ultrafilter::{in_ultrafilter, uf_triple_consistent, UltrafilterLabel};

/// A block of a coarse partition of the atoms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "block", rename_all = "snake_case")]
pub enum CoarseBlock {
    Id,
    /// `H^P`: every atom over base atom `P`.
    Base { base: usize },
    /// `(Y, k)`: graph atoms with node in the independent set `Y` and color `k`.
    Color { nodes: BTreeSet<usize>, color: usize },
    /// A union of base blocks. Never monochromatic when it has two or more
    /// members.
    BaseUnion { bases: BTreeSet<usize> },
}
