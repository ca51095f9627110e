use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A group element has a component outside `[0, order)`, or the wrong
    /// number of components.
    InvalidElement { detail: String },
    /// Two objects that must live over the same group or space do not.
    ShapeMismatch { expected: usize, found: usize },
    /// A configured size cap would be exceeded.
    ResourceLimit { what: &'static str, limit: usize, requested: usize },
    /// A subalgebra is not contained in the algebra it was paired with.
    Inclusion { residual: f64 },
    /// A trace (or Gram matrix) is not positive definite.
    NotFaithful { min_eigenvalue: f64 },
    /// A functional fails the trace property.
    NotTracial { deviation: f64 },
    /// A set of vectors does not generate the module.
    Span { rank: usize, dim: usize },
    /// Spectral grouping never separated cleanly within the retry budget.
    SpectralClusters { attempts: usize },
    /// A stated precondition does not hold.
    Precondition { detail: String },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidElement { detail } => write!(f, "invalid element: {detail}"),
            Error::ShapeMismatch { expected, found } => {
                write!(f, "shape mismatch: expected {expected}, found {found}")
            }
            Error::ResourceLimit { what, limit, requested } => {
                write!(f, "{what} of {requested} exceeds the cap of {limit}")
            }
            Error::Inclusion { residual } => {
                write!(f, "subalgebra is not contained in the algebra (residual {residual:.3e})")
            }
            Error::NotFaithful { min_eigenvalue } => {
                write!(f, "functional is not faithful (min Gram eigenvalue {min_eigenvalue:.3e})")
            }
            Error::NotTracial { deviation } => {
                write!(f, "functional is not tracial (deviation {deviation:.3e})")
            }
            Error::Span { rank, dim } => {
                write!(f, "generators span rank {rank} of a {dim}-dimensional module")
            }
            Error::SpectralClusters { attempts } => {
                write!(f, "spectral grouping failed after {attempts} attempts")
            }
            Error::Precondition { detail } => write!(f, "precondition failed: {detail}"),
        }
    }
}

impl core::error::Error for Error {}
