use thiserror::Error;

use crate::{modulation::ModulationKind, schemes::Scheme};

/// Errors returned by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("number of reflectors must be at least 1")]
    NoReflectors,
    #[error("invalid parameter `{name}`: {value}")]
    InvalidParameter { name: &'static str, value: f64 },
    #[error("modulation order {order} is not valid for {kind:?}")]
    InvalidOrder { kind: ModulationKind, order: usize },
    #[error("scheme {scheme:?} cannot use {kind:?} constellations")]
    ConstellationMismatch {
        scheme: Scheme,
        kind: ModulationKind,
    },
    #[error("message index {index} out of range for order {order}")]
    MessageOutOfRange { index: usize, order: usize },
    #[error("message index required: {0}")]
    MessageIndex(&'static str),
    #[error("MGF argument s = {0} must be non-positive")]
    PositiveMgfArgument(f64),
    #[error("{0}")]
    Unsupported(&'static str),
    #[error("non-finite input")]
    NonFinite,
    #[error("invalid sweep specification: {0}")]
    InvalidSweep(&'static str),
    #[error("target error rate {0} is outside the reachable range")]
    TargetOutOfRange(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
