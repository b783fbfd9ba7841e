use num_complex::Complex64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("non-finite iterate at step {step} (previous point {previous}); retry with a new seed")]
    NonFiniteIterate { step: usize, previous: f64 },

    #[error("non-finite value: {0}")]
    NonFinite(String),

    #[error("interval endpoints out of order: a = {a} > b = {b}")]
    ArgumentOrder { a: f64, b: f64 },

    #[error("empty sample")]
    EmptySample,

    #[error("{d} is not a fundamental discriminant")]
    NotFundamentalDiscriminant { d: i64 },

    #[error("modulus {q} outside the supported range 1..=1000")]
    UnsupportedModulus { q: u64 },

    #[error("evaluation at the pole s = 1")]
    PoleAt1,

    #[error("evaluation at the pole s0 = {0}")]
    PoleAt(Complex64),

    #[error("s = {0} is outside the supported region Re(s) > -10")]
    OutOfSupportedRegion(Complex64),

    #[error("s = {s} is outside the half-plane Re(s) > {c}")]
    DomainViolation { s: Complex64, c: f64 },

    #[error("s = {s} is too close to the pole s0 = {s0} for contour differentiation")]
    TooCloseToPole { s: Complex64, s0: Complex64 },

    #[error("{what} did not converge within {budget} evaluations")]
    NonConvergence { what: &'static str, budget: usize },

    #[error("s lies on the pole line Re(s) = {sigma0}; use the principal-value quadrature")]
    OnPoleLine { sigma0: f64 },

    #[error("principal value requires a simple pole, found order {m}")]
    PoleOrderTooHigh { m: u32 },

    #[error("the line Re(s) = {sigma0} is only supported for simple poles (order {m})")]
    LineCaseUnsupported { sigma0: f64, m: u32 },

    #[error("s is the special point s0 - alpha - i beta; use special_point_value")]
    SpecialPoint,

    #[error("Laurent coefficient a_{0} is missing")]
    MissingCoefficients(i32),

    #[error("cannot parse target spec {spec:?}: {reason}")]
    TargetSpec { spec: String, reason: String },
}

impl Error {
    /// Numeric failures (as opposed to bad input) map to exit code 2 in the CLI.
    pub fn is_numeric_failure(&self) -> bool {
        matches!(
            self,
            Error::NonFiniteIterate { .. }
                | Error::NonFinite(_)
                | Error::NonConvergence { .. }
                | Error::TooCloseToPole { .. }
                | Error::PoleAt1
                | Error::PoleAt(_)
        )
    }
}
