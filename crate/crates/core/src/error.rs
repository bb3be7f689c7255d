use thiserror::Error;

/// Error type shared by every subsystem.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A gamma function argument lies within `pole_clearance` of a
    /// non-positive integer.
    #[error("gamma argument {0}+{1}i is within clearance of a non-positive integer")]
    Pole(f64, f64),

    /// A non-terminating series whose parameter excess has non-positive
    /// real part.
    #[error("series diverges: Re(sum of denominators - sum of numerators) = {0} <= 0")]
    DivergentSeries(f64),

    /// The tail fit at `series_max_terms` left a residual above the
    /// committed tolerance.
    #[error("series did not converge: error estimate {estimate:e} exceeds {tolerance:e}")]
    NonConverged { estimate: f64, tolerance: f64 },

    /// Subtractive cancellation inflated the error estimate past the point
    /// where the result is certifiable; raise `working_digits` and
    /// `series_max_terms`.
    #[error("cancellation loss: error estimate {estimate:e} for value of magnitude {magnitude:e}")]
    Cancellation {
        value: (f64, f64),
        estimate: f64,
        magnitude: f64,
    },

    /// The straight shifted contour cannot separate the left and right pole
    /// chains of a Barnes integrand.
    #[error("contour separation failed: {0}")]
    Contour(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Group closure exceeded the cap, signalling a wrong generator set.
    #[error("group closure exceeded cap of {0} elements")]
    CapExceeded(usize),

    #[error("matrix is not an element of the group")]
    NotInGroup,

    #[error("no transporter: source and target triples lie in different orbits")]
    NoTransporter,

    #[error("invalid coset triple: {0}")]
    InvalidTriple(String),

    /// Rejection sampling failed to find a generic point.
    #[error("sampling exhausted after {0} rejections")]
    SamplingExhausted(usize),

    /// A seven-tuple violates the hyperplane constraint e+f+g-a-b-c-d = 1.
    #[error("parameter point violates the hyperplane constraint by {0:e}")]
    ConstraintViolation(f64),

    #[error("{0}")]
    Invalid(String),
}
