use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("fractional order {0} outside (0, 1]")]
    InvalidOrder(f64),
    #[error("grid needs at least 8 nodes, got {0}")]
    GridTooSmall(usize),
    #[error("interval length must be positive, got {0}")]
    InvalidInterval(f64),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("Gamma function pole at {0}")]
    GammaPole(f64),
    #[error("singular linear system (zero pivot in column {0})")]
    Singular(usize),
    #[error("no convergence after {iterations} iterations (last change {last_change:e})")]
    NoConvergence { iterations: usize, last_change: f64 },
    #[error("majorant slope too small: infimum b = {b:e} is not positive")]
    MajorantSlopeTooSmall { b: f64 },
    #[error("h not sublinear at s_max = {s_max:e}")]
    NotSublinearAtScanEnd { s_max: f64 },
    #[error("h not sublinear numerically: threshold search exceeded {cap:e}")]
    NotSublinearNumerically { cap: f64 },
    #[error("exponent r = {r} outside the admissible window ({lower}, 1)")]
    ExponentOutsideWindow { r: f64, lower: f64 },
    #[error("singular term undefined: field is not positive at interior node {node}")]
    NonPositiveInterior { node: usize },
    #[error("field must vanish at boundary node {node}")]
    BoundaryNotZero { node: usize },
    #[error("sub-solution exceeds e at node {node} where e is not positive")]
    CannotOrderPair { node: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
