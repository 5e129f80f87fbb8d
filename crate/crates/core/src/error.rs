use thiserror::Error;

use crate::exactalg::Multidegree;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("ring mismatch: {0}")]
    RingMismatch(String),

    #[error("multidegree {sub} is not below {sup}")]
    Order { sup: Multidegree, sub: Multidegree },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("degree {got} is too small (need at least {need})")]
    DegreeTooSmall { got: usize, need: usize },

    #[error("inhomogeneous polynomial: monomials {first} and {second} have different multidegrees")]
    Inhomogeneous { first: String, second: String },

    #[error("catalecticant is singular")]
    SingularCatalecticant,

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("matrix is not symmetric")]
    NotSymmetric,

    #[error("catalecticant is not positive semi-definite (signature +{n_plus} -{n_minus} 0:{n_zero})")]
    NotPsd {
        n_plus: usize,
        n_minus: usize,
        n_zero: usize,
    },

    #[error("shape error: {0}")]
    Shape(String),

    #[error("cannot compute statistics over zero samples")]
    EmptySample,
}

impl Error {
    /// Stable machine-readable tag used in JSON error documents.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Dimension(_) => "dimension",
            Error::RingMismatch(_) => "ring_mismatch",
            Error::Order { .. } => "order",
            Error::Degenerate(_) => "degenerate_input",
            Error::DegreeTooSmall { .. } => "degree",
            Error::Inhomogeneous { .. } => "inhomogeneous",
            Error::SingularCatalecticant => "singular_catalecticant",
            Error::Unsupported(_) => "unsupported",
            Error::NotSymmetric => "symmetry",
            Error::NotPsd { .. } => "not_psd",
            Error::Shape(_) => "shape",
            Error::EmptySample => "empty_statistics",
        }
    }
}
