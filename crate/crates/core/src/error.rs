use thiserror::Error;

/// Errors raised by the domain, separation, star-product and series routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("operation not supported for this domain: {0}")]
    UnsupportedDomain(String),

    #[error("domain is unbounded: {0}")]
    UnboundedDomain(String),

    #[error("degenerate normal: w . nu = 0")]
    DegenerateNormal,

    #[error("a log-radius range is required for an unbounded domain")]
    RangeRequired,

    #[error("origin cell is not IN")]
    OriginExcluded,

    #[error("quadrature did not converge: last two estimates differ by {relative_change:e} (relative) at {nodes} nodes")]
    QuadratureFailure { nodes: usize, relative_change: f64 },

    #[error("contour passes through or too close to 0")]
    ContourThroughZero,

    #[error("series tail is identically zero; radius of convergence is infinite")]
    InfiniteRadius,

    #[error("internal error: {0}")]
    Internal(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
