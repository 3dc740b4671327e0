use thiserror::Error;

/// Errors raised by the spectral and oracle routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain where the quantity is defined.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("no coupling: APBS undefined")]
    NoCoupling,

    #[error("pole: use residue_g11")]
    Pole,

    #[error("band-edge degeneracy: {0}")]
    BandEdgeDegeneracy(String),

    /// Two independent routes to the same answer disagreed.
    #[error("internal consistency: {0}")]
    Consistency(String),

    #[error("mismatched input: {0}")]
    Mismatch(String),

    #[error("matrix is not symmetric (max |M - M^T| = {0:e})")]
    NotSymmetric(f64),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
