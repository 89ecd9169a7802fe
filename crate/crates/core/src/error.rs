use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{what}: size {size} exceeds cap {cap} (set LATCOV_CAP to override)")]
    Size {
        what: &'static str,
        size: usize,
        cap: usize,
    },

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("unknown {what} `{name}`")]
    Unknown { what: &'static str, name: String },

    #[error("chain is not nested at position {0}")]
    NonNested(usize),

    #[error("edge marginals violate parent monotonicity at vertex {0}")]
    ParentMonotonicity(usize),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("cutting-plane iteration cap {cap} reached; last violation {last_violation:e}")]
    IterationCap { cap: usize, last_violation: f64 },

    #[error("no progress: {0}")]
    Uncoverable(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInstance(msg.into())
    }
}

/// Brute-force size caps. `LATCOV_CAP` replaces every cap when set.
pub fn cap(default: usize) -> usize {
    std::env::var("LATCOV_CAP")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(default)
}

pub(crate) fn check_cap(what: &'static str, size: usize, default: usize) -> Result<()> {
    let cap = cap(default);
    if size > cap {
        return Err(Error::Size { what, size, cap });
    }
    Ok(())
}
