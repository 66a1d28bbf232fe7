use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Two vectors (or a vector and a configuration) disagree on `d`.
    DimensionMismatch { expected: usize, found: usize },
    /// A vector has components outside its field (e.g. a `j` part in C^d).
    FieldViolation { vector: usize, entry: usize },
    /// A configuration or vector is structurally invalid.
    InvalidConfiguration(&'static str),
    /// A parameter is outside the operation's domain.
    Domain(&'static str),
    /// A polynomial computation would exceed the supported size envelope.
    Envelope { num_vars: usize, degree: u32 },
    /// Polynomials of different degree or variable count were combined.
    DegreeMismatch { left: u32, right: u32 },
    /// A configuration was expected to consist of unit vectors.
    NotUnit { vector: usize, norm: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::FieldViolation { vector, entry } => write!(
                f,
                "vector {vector}, entry {entry} has components outside its field"
            ),
            Error::InvalidConfiguration(msg) => write!(f, "invalid configuration: {msg}"),
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Envelope { num_vars, degree } => write!(
                f,
                "polynomial size outside supported envelope ({num_vars} variables, degree {degree}; \
                 limits are 12 variables and degree 10)"
            ),
            Error::DegreeMismatch { left, right } => {
                write!(f, "degree mismatch: {left} vs {right}")
            }
            Error::NotUnit { vector, norm } => {
                write!(f, "vector {vector} is not unit norm (norm {norm})")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}
