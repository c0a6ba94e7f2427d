use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not Hermitian (defect {0:.3e})")]
    NonHermitian(f64),
    #[error("eigensolver did not converge")]
    ConvergenceFailure,
    #[error("function evaluated outside its domain at eigenvalue {0:.3e}")]
    DomainError(f64),
    #[error("density matrix is not faithful (min eigenvalue {0:.3e})")]
    NotFaithful(f64),
    #[error("not a density matrix: {0}")]
    NotDensity(String),
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("vector is not normalized (norm {0:.15})")]
    NotNormalized(f64),
    #[error("logarithm needed on a near-kernel eigenvalue {eigenvalue:.3e} carrying weight {weight:.3e}")]
    NumericalKernel { eigenvalue: f64, weight: f64 },
    #[error("alpha = {0} out of range")]
    AlphaOutOfRange(f64),
    #[error("quasi-entropy function fails midpoint convexity at ({0:.3e}, {1:.3e})")]
    ConvexityViolated(f64, f64),
    #[error("closed form unavailable: {0}")]
    ClosedFormUnavailable(String),
    #[error("quadrature budget exceeded: estimated error {estimate:.3e} above {limit:.3e}")]
    QuadratureBudgetExceeded { estimate: f64, limit: f64 },
    #[error("cancellation guard: n (Im t)^2 = {0:.3} exceeds 40")]
    CancellationGuard(f64),
    #[error("expansion out of range: {0}")]
    ExpansionOutOfRange(String),
    #[error("tail bound {tail:.3e} too large for tolerance {tolerance:.3e}")]
    TailBoundTooLarge { tail: f64, tolerance: f64 },
    #[error("no light-cone convention reproduces the 2D quadrature (best mismatch {0:.3e})")]
    ConventionMismatch(f64),
    #[error("defining-equation construction disagrees with the closed form by {0:.3e}")]
    OracleMismatch(f64),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("configuration error: {0}")]
    ConfigError(String),
}

pub type Result<T> = std::result::Result<T, Error>;
