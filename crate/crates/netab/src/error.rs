//! Error type shared across the crate.

use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: expected two whitespace-separated vertex ids, got {content:?}")]
    ParseEdge {
        path: PathBuf,
        line: usize,
        content: String,
    },

    #[error("{path}:{line}: self-loop on vertex {vertex}")]
    SelfLoop {
        path: PathBuf,
        line: usize,
        vertex: u64,
    },

    #[error("self-loop on vertex {vertex}")]
    SelfLoopEdge { vertex: usize },

    #[error("vertex {vertex} out of range for n={n}")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("vertex {vertex} is isolated")]
    IsolatedVertex { vertex: usize },

    #[error("degenerate network: only {survivors} vertices survive, need at least 4")]
    DegenerateNetwork { survivors: usize },

    #[error("information matrix not positive: denominator {denominator:.6e} <= 0")]
    InformationNotPositive { denominator: f64 },

    #[error(
        "design lies in the span of the regressors (residual {residual:.3e} <= {threshold:.3e}); \
         variance is unbounded"
    )]
    RankDeficientDesign { residual: f64, threshold: f64 },

    #[error("reduced matrix has no off-diagonal mass; assumption ratios are undefined")]
    DegenerateReduction,

    #[error("threshold must be non-negative, got {value}")]
    NegativeThreshold { value: f64 },

    #[error("balanced designs require an even number of vertices, got {n}")]
    OddVertexCount { n: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
