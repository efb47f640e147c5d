use thiserror::Error;

/// Errors raised by the exact pipelines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("angle denominator {den} does not divide conductor {conductor}")]
    ConductorMismatch { den: u64, conductor: u32 },

    #[error("division by zero")]
    DivisionByZero,

    #[error("pole at y = -1: factor (1+y)^-{0} survives canonicalization")]
    PoleAtMinusOne(u32),

    #[error("pole at y = 0: negative powers of y present")]
    PoleAtZero,

    #[error("angle-twisted template requires a nonzero angle")]
    ThetaZero,

    #[error("template argument has a nonzero constant term")]
    NonNilpotentArgument,

    #[error("operands live in different cohomology ring models")]
    RingMismatch,

    #[error("constant term {0} is not invertible")]
    NonUnitConstant(String),

    #[error("unknown group element `{0}`")]
    UnknownElement(String),

    #[error("invalid localization datum: {0}")]
    InvalidDatum(String),

    #[error("invalid ring model: {0}")]
    InvalidRing(String),

    #[error("group table has no multiplication table")]
    MissingTable,

    #[error("invalid group table: {0}")]
    InvalidGroup(String),

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("invalid angle `{0}`")]
    InvalidAngle(String),

    #[error("twist bundle has nonzero angle {angle} on component `{component}` of element `{element}`")]
    NonTrivialAngle {
        element: String,
        component: String,
        angle: String,
    },

    #[error("conductor {conductor} exceeds the configured maximum {max}")]
    ConductorTooLarge { conductor: u32, max: u32 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
