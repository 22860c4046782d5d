//! Blown-up and blurred relation-algebra atom structures.
//!
//! The crate builds the ω-row atom structures `α(G)`, the blur structure over
//! the finite algebra 𝐌 and the family `ℱ(l, μ)`, represents their term
//! algebras by step-by-step saturation of coloured graphs, and certifies that
//! their complex algebras are not representable.

pub mod blowup;
pub mod error;
pub mod finite_ra;
pub mod graphs;
pub mod matrices;
pub mod nonrep;
pub mod representation;
pub mod symbolic;

pub use error::{Error, Result};

/// Version string written into certificates.
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
