use std::fmt;

/// Errors reported by constructions, checkers and parsers.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("{q} is not a prime power (factorization {factors})")]
    NotPrimePower { q: u64, factors: Factorization },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("size overflow: {0}")]
    Overflow(String),
    #[error("invalid hypergraph: {0}")]
    InvalidHypergraph(String),
    #[error("defective vertex {vertex} lies in no edge")]
    UncoverableVertex { vertex: usize },
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Prime factorization `[(p, e), ...]`, printed as `2^1 * 3^1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization(pub Vec<(u64, u32)>);

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, (p, e)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " * ")?;
            }
            write!(f, "{p}^{e}")?;
        }
        Ok(())
    }
}
