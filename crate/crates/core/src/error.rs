use alloc::string::String;
use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("the Cayley transform has a pole at z = -1")]
    PoleAtMinusOne,
    #[error("point lies outside the annulus e^(-2 pi) < |z| < 1")]
    OutsideAnnulus,
    #[error("point lies on the branch slit of the logarithm (negative real axis)")]
    OnBranchSlit,
    #[error("domain mismatch: expected {expected}, found {found}")]
    DomainMismatch { expected: &'static str, found: &'static str },
    #[error("point {re} + {im}i does not belong to the {domain}")]
    InvalidPoint { re: f64, im: f64, domain: &'static str },
    #[error("invalid dyadic index (n = {n}, j = {j}, k = {k})")]
    InvalidIndex { n: u32, j: u64, k: u64 },
    #[error("weight parameter alpha = {0} must satisfy alpha > -1")]
    InvalidWeight(f64),
    #[error("density is singular at a point of the imaginary axis")]
    SingularPoint,
    #[error("no convergence: estimate {value} with error {error} exceeds the tolerance")]
    NonConvergence { value: f64, error: f64 },
    #[error("region is unbounded and the measure has infinite total mass")]
    UnboundedRegionWithInfiniteMass,
    #[error("density ratio is singular on the grid")]
    SingularRatio,
    #[error("numeric overflow while evaluating a map")]
    NumericOverflow,
    #[error("incompatible domain/codomain chain: {0}")]
    IncompatibleChain(String),
    #[error("right-hand side of the audited inequality is numerically zero")]
    DegenerateRhs,
    #[error("quadrature failed on a square: {0}")]
    QuadratureFailure(String),
    #[error("point lies on a dyadic boundary")]
    OnDyadicBoundary,
    #[error("mean of |f| over Omega is {0}, the decomposition needs at most 1")]
    RootAverageExceedsOne(f64),
    #[error("negative input {0}")]
    NegativeInput(f64),
    #[error("unknown or uncertified symbol: {0}")]
    UnknownSymbol(String),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
}
