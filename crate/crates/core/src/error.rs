use alloc::boxed::Box;
use alloc::string::String;
use core::fmt;

use crate::optim::TraceRecord;

/// Errors raised by the estimators and solvers.
#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// Operand shapes do not conform.
    Shape {
        op: &'static str,
        expected: usize,
        found: usize,
    },
    /// A NaN or infinity was passed to a constructor.
    NonFinite { op: &'static str },
    /// A matrix handed to a symmetric solver is not symmetric.
    NotSymmetric,
    /// Cholesky factorization met a non-positive pivot.
    NotPositiveDefinite { pivot: usize },
    /// LU elimination met a pivot below the singularity threshold.
    Singular { pivot: usize },
    /// `XᵀX` cannot be inverted: collinear features or fewer rows than
    /// parameters. A ridge penalty restores a unique solution.
    MulticollinearOrUnderdetermined,
    /// An argument is outside its admissible range.
    Parameter(String),
    /// A class id is not below the class count.
    ClassRange { id: usize, classes: usize },
    /// The requested polynomial basis has too many terms.
    CombinatorialBlowup { count: u128 },
    /// A metric is not defined for the given input.
    UndefinedMetric(&'static str),
    /// Incompatible model settings (for example cross-entropy on a linear output).
    Configuration(String),
    /// The input has no rows.
    EmptyInput,
    /// An iterative method produced a non-finite or exploding loss.
    Diverged {
        iteration: usize,
        trace: Box<TraceRecord>,
    },
}

pub type Result<T> = core::result::Result<T, Error>;

impl Error {
    pub(crate) fn shape(op: &'static str, expected: usize, found: usize) -> Self {
        Error::Shape {
            op,
            expected,
            found,
        }
    }

    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    /// True for failures of the numerics rather than of the inputs' form.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NotPositiveDefinite { .. }
                | Error::Singular { .. }
                | Error::MulticollinearOrUnderdetermined
                | Error::Diverged { .. }
        )
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Shape {
                op,
                expected,
                found,
            } => write!(f, "{op}: shape mismatch (expected {expected}, found {found})"),
            Error::NonFinite { op } => write!(f, "{op}: non-finite value"),
            Error::NotSymmetric => write!(f, "matrix is not symmetric"),
            Error::NotPositiveDefinite { pivot } => {
                write!(f, "matrix is not positive definite (pivot {pivot})")
            }
            Error::Singular { pivot } => write!(f, "matrix is singular (pivot {pivot})"),
            Error::MulticollinearOrUnderdetermined => write!(
                f,
                "XᵀX is not invertible (collinear features or too few rows); use a ridge penalty"
            ),
            Error::Parameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::ClassRange { id, classes } => {
                write!(f, "class id {id} out of range for {classes} classes")
            }
            Error::CombinatorialBlowup { count } => {
                write!(f, "polynomial basis would have {count} terms")
            }
            Error::UndefinedMetric(what) => write!(f, "metric undefined: {what}"),
            Error::Configuration(msg) => write!(f, "configuration error: {msg}"),
            Error::EmptyInput => write!(f, "empty input"),
            Error::Diverged { iteration, .. } => {
                write!(f, "optimization diverged at iteration {iteration}")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}
