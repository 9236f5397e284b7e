use thiserror::Error;

use crate::classify::Evidence;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("state is not normalized: squared norm {norm_sqr}")]
    NotNormalized { norm_sqr: f64 },

    #[error("matrix is not Hermitian: max deviation {deviation:e}")]
    NotHermitian { deviation: f64 },

    #[error("density matrix trace is {trace}, expected 1")]
    BadTrace { trace: f64 },

    #[error("density matrix is not positive semidefinite: eigenvalue {eigenvalue:e}")]
    NotPositive { eigenvalue: f64 },

    #[error("unsupported dimension {dim}: {context}")]
    UnsupportedDimension { dim: usize, context: &'static str },

    #[error("invalid subsystem selection: {0}")]
    InvalidSubsystems(String),

    #[error("parameter {name} = {value} violates {constraint}")]
    Domain {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },

    #[error("ensemble invalid: {0}")]
    InvalidEnsemble(String),

    #[error("average entropy is only defined for pure-state ensemble members")]
    MixedMember,

    #[error("3-tangle {value:e} is below the monogamy tolerance")]
    NegativeTangle { value: f64 },

    #[error("classification indeterminate: {0:?}")]
    Indeterminate(Box<Evidence>),

    #[error("classification evidence contradicts the W bound: {0:?}")]
    Contradiction(Box<Evidence>),

    #[error("optical element {element} cannot act on this state: {reason}")]
    ElementMismatch {
        element: &'static str,
        reason: &'static str,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
