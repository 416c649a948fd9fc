use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("element is not invertible (smallest singular value of P(x) = {sigma_min:e})")]
    Singular { sigma_min: f64 },
    #[error("symmetric eigensolver did not converge")]
    EigSolverFailure,
    #[error("spectral function outside its domain: {0}")]
    DomainError(String),
    #[error("element is not an idempotent (residual {residual:e})")]
    NotIdempotent { residual: f64 },
    #[error("invalid representation: {0}")]
    InvalidRepresentation(String),
    #[error("point is not in the domain")]
    NotInDomain,
    #[error("element is not in the open cone")]
    NotInCone,
    #[error("restricted form is indefinite, isotropic vectors do not form a linear space (min eigenvalue {min_eig:e})")]
    NotALinearSpace { min_eig: f64 },
    #[error("x is not an admissible kernel parameter: {0}")]
    NotInLambda(String),
    #[error("character is not a covector on S: {0}")]
    InvalidCharacter(String),
    #[error("v = q + s split failed (residual {residual:e})")]
    DecompositionFailure { residual: f64 },
    #[error("invalid frame: {0}")]
    FrameInvalid(String),
    #[error("x_1/2 = 2 T_y x_0 has no solution (residual {residual:e})")]
    FactorizationResidualTooLarge { residual: f64 },
    #[error("Monte Carlo relative standard error {rel_se:e} exceeds 1%")]
    MCVarianceTooHigh { rel_se: f64 },
    #[error("quadrature failed: {0}")]
    QuadratureFailure(String),
    #[error("metric is not positive definite (min eigenvalue {min_eig:e})")]
    NotPositiveDefinite { min_eig: f64 },
    #[error("form is not positive semi-definite (min eigenvalue {min_eig:e})")]
    NotPSD { min_eig: f64 },
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("unknown catalog entry '{0}'")]
    UnknownEntry(String),
    #[error("invalid spec file: {0}")]
    Schema(String),
}

pub type Result<T> = std::result::Result<T, Error>;
