//! Error type shared by all modules of the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("region has zero area")]
    ZeroAreaRegion,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("gain matrix row {user} is all zero; edge weights are undefined")]
    ZeroGainRow { user: usize },

    #[error("user {user} is co-located with AP {ap}; the beam angle is undefined")]
    UserAtAp { user: usize, ap: usize },

    #[error("requested {requested} clusters but only {available} vertices available")]
    TooManyClusters { requested: usize, available: usize },

    #[error("fewer distinct points than clusters; k-means seeding is degenerate")]
    DegenerateClustering,

    #[error("meganode assignment leaves label {label} empty")]
    EmptyLabel { label: usize },

    #[error("brute-force enumeration guard: {n} meganodes exceeds the limit of {limit}")]
    EnumerationGuard { n: usize, limit: usize },

    #[error("eigensolver failed to converge on row {row} after {iterations} iterations")]
    EigenConvergence { row: usize, iterations: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
