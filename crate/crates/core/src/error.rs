use thiserror::Error;

/// Errors produced by the dynamics library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("coupling K{zeta} = {k} is outside the supported range [0, 1/2)")]
    CouplingOutOfRange { zeta: u8, k: f64 },

    #[error("equilibrium value requires a finite, nonzero temperature")]
    ZeroTemperature,

    #[error("operation requires a symmetric system (equal renormalized tunnelings and equal scaled temperatures)")]
    AsymmetricSystem,

    #[error("closed form evaluation failed at lambda = {re} + {im}i")]
    EvaluationFailure { re: f64, im: f64 },

    #[error("polynomial has a vanishing leading coefficient")]
    ZeroLeadingCoefficient,

    #[error("polynomial degree {0} is not supported (expected 1..=6)")]
    UnsupportedDegree(usize),

    #[error("companion eigenvalue iteration did not converge")]
    RootFindingFailed,

    #[error("rational function is not strictly proper (numerator degree {numerator}, denominator degree {denominator})")]
    ImproperRational { numerator: usize, denominator: usize },

    #[error("near-degenerate poles (relative gap {gap:e}); residue formula refused")]
    DegeneratePoles { gap: f64 },

    #[error("poles on or right of the imaginary axis (max real part {max_re:e})")]
    UnstablePoles { max_re: f64 },

    #[error("quadrature error estimate {estimate:e} exceeds {tolerance:e} at t = {time}")]
    QuadratureInaccurate {
        time: f64,
        estimate: f64,
        tolerance: f64,
    },

    #[error("grid must be non-empty and strictly increasing")]
    InvalidGrid,

    #[error("state bounds violated at t = {time}: {detail}")]
    InvariantViolation { time: f64, detail: String },
}

pub type Result<T> = std::result::Result<T, Error>;
