use thiserror::Error;

/// Failure modes shared by every module of the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum TsfError {
    #[error("matrix is not in the Lie algebra (projection residual {residual:e})")]
    NotInAlgebra { residual: f64 },
    #[error("basis matrices are linearly dependent or not closed under the bracket")]
    InvalidBasis,
    #[error("rotation angle {angle} is too close to pi for a principal logarithm")]
    CutLocus { angle: f64 },
    #[error("matrix is numerically singular")]
    Singular,
    #[error("operator violates the derivation law (defect {defect:e})")]
    NotADerivation { defect: f64 },
    #[error("matrix does not commute with its pseudo-inverse (residual {residual:e})")]
    NotNormalCommuting { residual: f64 },
    #[error("group elements belong to different groups or laws")]
    TagMismatch,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("whitening did not converge after {iterations} iterations (mean norm {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("covariance is not positive definite after jitter")]
    CholeskyFail,
    #[error("sigma point left the principal branch (rotation norm {norm})")]
    StepReject { norm: f64 },
    #[error("innovation covariance is singular")]
    SingularInnovation,
    #[error("{escaped} Monte-Carlo paths reached the cut locus")]
    PathEscape { escaped: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
}

pub type Result<T> = core::result::Result<T, TsfError>;
