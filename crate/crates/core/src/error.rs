use num_complex::Complex64;
use thiserror::Error;

/// Errors produced by the polynomial, phase, splitting, Jacobi and
/// perturbation layers.
///
/// Variants fall into two families, see [`Error::is_numerical`]: invalid
/// input (a violated precondition or a configuration outside the theorems)
/// and numerical breakdown on otherwise valid input.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("polynomial has no coefficients")]
    EmptyCoefficients,

    #[error("polynomial is identically zero")]
    ZeroPolynomial,

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("{op}: degree {found} not allowed ({expected})")]
    Degree {
        op: &'static str,
        found: usize,
        expected: &'static str,
    },

    #[error("{what} must be monic (leading coefficient {lead})")]
    NotMonic { what: &'static str, lead: f64 },

    #[error("{what}: expected length {expected}, found {found}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("{0} must be sorted ascending")]
    NotSorted(&'static str),

    #[error("argument of zero is undefined")]
    ZeroArgument,

    #[error("zero {0} lies on the real axis")]
    RealZero(Complex64),

    #[error("zero {0} is not in the open upper half-plane")]
    NotUpperHalfPlane(Complex64),

    #[error("alpha = {0} must have positive imaginary part")]
    AlphaNotUpper(Complex64),

    #[error("alpha = {0} must be non-real")]
    AlphaReal(Complex64),

    #[error("p(xi) = 0 at xi = {0}; use the pencil form after deflating (z - xi)")]
    VanishesAtShift(f64),

    #[error("argument sum {arg_sum} exceeds Arg alpha = {arg_alpha}: outside both broken-interlacing theorems")]
    OutsideTheorems { arg_sum: f64, arg_alpha: f64 },

    #[error("argument sum {arg_sum} outside the admissible range ({lower}, {upper})")]
    AngleOutOfRange { arg_sum: f64, lower: f64, upper: f64 },

    #[error("zeros {lams:?} and {mus:?} do not strictly interlace")]
    NotInterlacing { lams: Vec<f64>, mus: Vec<f64> },

    #[error("expected exactly one zero at {at}, found {found}")]
    SingularZeroCount { at: f64, found: usize },

    #[error("{0}")]
    MissingParameter(&'static str),

    #[error("parameter {name} = {value} is invalid: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("invalid Jacobi matrix: {0}")]
    InvalidJacobi(String),

    #[error("matrix is not Hermitian (asymmetry {0:e})")]
    NotHermitian(f64),

    #[error("starting vector is zero")]
    ZeroVector,

    #[error("singular matrix: eigenvalue {0} at the excluded point")]
    SingularMatrix(f64),

    #[error("root iteration did not converge after {0} sweeps")]
    NoConvergence(usize),

    #[error("eigenvalue iteration did not converge")]
    EigenNoConvergence,

    #[error("phase trace exceeded {0} samples")]
    TraceLimit(usize),

    #[error("phase increment mismatch: symbolic {symbolic}, numeric {numeric}")]
    IncrementMismatch { symbolic: f64, numeric: f64 },

    #[error("r(xi) = {residual:e} exceeds tolerance {tol:e}")]
    ShiftResidual { residual: f64, tol: f64 },

    #[error("spectral weight {weight:e} at eigenvalue {at} is not positive")]
    NonPositiveWeight { at: f64, weight: f64 },

    #[error("numerical breakdown: {0}")]
    Breakdown(String),
}

impl Error {
    /// True when the input was valid but the computation broke down.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence(_)
                | Error::EigenNoConvergence
                | Error::TraceLimit(_)
                | Error::IncrementMismatch { .. }
                | Error::ShiftResidual { .. }
                | Error::NonPositiveWeight { .. }
                | Error::Breakdown(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
