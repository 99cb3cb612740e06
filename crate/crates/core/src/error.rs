use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure mode surfaced by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point with modulus {modulus} is not inside the admissible disk")]
    OutsideDisk { modulus: f64 },

    #[error("Möbius denominator vanishes (|1 - conj(b) z| = {size:e})")]
    DegenerateDenominator { size: f64 },

    #[error("invalid arc: half length {half_length} must lie in (0, pi]")]
    InvalidArc { half_length: f64 },

    #[error("Taylor coefficients did not decay below 1e-12 before degree {degree}")]
    CoefficientRecoveryUnstable { degree: usize },

    #[error("map is not a self-map of the disk: boundary modulus bound {bound}")]
    NotSelfMap { bound: f64 },

    #[error("composition needs a self-map certificate for the inner map")]
    MissingCertificate,

    #[error("quadrature for {what} did not converge (relative change {change:e})")]
    QuadratureNonConvergent { what: &'static str, change: f64 },

    #[error("integrand is not finite at a quadrature node")]
    NonFiniteSample,

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("test function parameter |b| = {modulus} exceeds the truncation budget 0.97")]
    TruncationBudgetExceeded { modulus: f64 },

    #[error("simultaneous root iteration failed to converge for degree {degree}")]
    RootFindingDiverged { degree: usize },

    #[error("cleared polynomial degree {degree} exceeds the budget {budget}")]
    DegreeBudgetExceeded { degree: usize, budget: usize },

    #[error("map is not reducible to a rational equation")]
    NotRational,

    #[error("target coincides with phi(0); the counting function is singular there")]
    TargetAtPhiZero,

    #[error("arc union has {count} components, limit is 64")]
    TooManyArcs { count: usize },

    #[error("|phi(a)| = {modulus} is too close to the unit circle")]
    NearBoundaryImage { modulus: f64 },

    #[error("index {value} outside the supported range {range}")]
    IndexOutOfRange { value: f64, range: &'static str },
}
