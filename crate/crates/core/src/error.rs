use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("truncation mismatch: expected N = {expected}, got N = {got}")]
    TruncationMismatch { expected: usize, got: usize },

    #[error("energy model fails rest-state/convexity validation: {0}")]
    ModelHypothesis(String),

    #[error("pointwise evaluation produced a non-finite value at grid index {index}")]
    PointwiseEvaluation { index: usize },

    #[error("degenerate membrane profile: min stretch {min_nu:.3e} below {threshold:.1e}")]
    DegenerateProfile { min_nu: f64, threshold: f64 },

    #[error("parity violation in {context}: off-parity amplitude {amplitude:.3e} exceeds {tolerance:.3e}")]
    ParityViolation {
        context: &'static str,
        amplitude: f64,
        tolerance: f64,
    },

    #[error("Newton corrector did not converge: residual {residual:.3e} after {iterations} iterations")]
    NewtonNonConvergence { residual: f64, iterations: usize },

    #[error("singular linear system in Newton step")]
    SingularSystem,

    #[error("surface profile self-intersects")]
    SelfIntersection,

    #[error("degenerate conformal map: jacobian {det:.3e} at node (ix={ix}, iy={iy})")]
    DegenerateMap { det: f64, ix: usize, iy: usize },

    #[error("finite-difference precision loss: {0}")]
    FdPrecision(String),

    #[error("kernel classification found {count} matching modes; at most two are possible")]
    KernelInconsistency { count: usize },

    #[error("malformed branch file: {0}")]
    BranchFormat(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
