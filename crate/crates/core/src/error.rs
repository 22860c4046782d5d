use thiserror::Error;

use crate::symbolic::UltrafilterLabel;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("improper coloring: {0}")]
    ImproperColoring(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("duplicate atom name `{0}`")]
    DuplicateAtom(String),

    #[error("invalid atom structure: {0}")]
    InvalidStructure(String),

    #[error("blur family must be every 2-element subset of the base atoms: {0}")]
    InvalidBlurFamily(String),

    #[error("defect cannot be realised by a fresh node: {0}")]
    InvalidDefect(String),

    #[error("no blur is consistent for the edge from the new node to node {node} (labels {to_x:?}, {to_y:?})")]
    NoBlurAvailable {
        node: usize,
        to_x: UltrafilterLabel,
        to_y: UltrafilterLabel,
    },

    #[error("refusing to enumerate: {0}")]
    EnumerationTooLarge(String),

    #[error("structural check failed: {0}")]
    CheckFailed(String),

    #[error(transparent)]
    Certificate(#[from] crate::nonrep::CertificateError),
}
