use core::fmt;

/// Errors raised by the estimators, samplers and distribution functions.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A distribution or sampler parameter is outside its admissible range.
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    /// A special-function argument is outside the function's domain.
    Domain {
        function: &'static str,
        value: f64,
    },
    /// Fixed batch sizes must exceed one.
    InvalidBatchSize(usize),
    /// The batch layout leaves too few batches or windows to estimate a variance.
    DegenerateLayout { n: usize, b: usize, a: usize },
    /// The operation needs at least one sample.
    EmptyInput,
    /// The input has no spread (zero variance or zero bandwidth).
    ZeroVariance,
    /// Two inputs that must be paired have different lengths.
    LengthMismatch { left: usize, right: usize },
    /// A lag, grid size or count argument is outside its valid range.
    InvalidArgument(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter {
                name,
                value,
                reason,
            } => write!(f, "invalid parameter {name}={value}: {reason}"),
            Error::Domain { function, value } => {
                write!(f, "argument {value} is outside the domain of {function}")
            }
            Error::InvalidBatchSize(b) => write!(f, "batch size invalid (bs={b})"),
            Error::DegenerateLayout { n, b, a } => write!(
                f,
                "batch layout b={b}, a={a} leaves too few batches for n={n} samples"
            ),
            Error::EmptyInput => f.write_str("input is empty"),
            Error::ZeroVariance => f.write_str("input has zero variance"),
            Error::LengthMismatch { left, right } => {
                write!(f, "paired inputs differ in length ({left} vs {right})")
            }
            Error::InvalidArgument(msg) => f.write_str(msg),
        }
    }
}

impl core::error::Error for Error {}
