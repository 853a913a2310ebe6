use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("inconsistent dimensions: {0}")]
    Shape(String),
    #[error("unknown label {0}")]
    UnknownLabel(String),
    #[error("invalid fusion ring: {0}")]
    InvalidRing(String),
    #[error("ill-conditioned ring: {0}")]
    IllConditioned(String),
    #[error("simple current group is not closed: {0}")]
    CurrentClosure(String),
    #[error("invalid spin assignment: {0}")]
    InvalidSpins(String),
    #[error("vanishing Gauss sum: central charge and S/T are undefined")]
    VanishingGaussSum,
    #[error("Verlinde formula requires non-degenerate modular data")]
    Degenerate,
    #[error("invalid parameters: {0}")]
    Parameters(String),
    #[error("search exceeded {cap} nodes: {context}")]
    SearchOverflow { cap: u64, context: String },
    #[error("consistency check failed: {0}")]
    Inconsistent(String),
    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },
    #[error("unsupported configuration: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
