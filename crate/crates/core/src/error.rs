use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("input polynomial {0} must be nonzero")]
    ZeroInput(&'static str),

    #[error("leading coefficient of the zero polynomial is undefined")]
    ZeroLeadingCoefficient,

    #[error("linear system has no solution within the degree bound {bound}")]
    NoSolution { bound: usize },

    #[error("b is not symmetric about beta = {beta}")]
    SymmetryViolation { beta: String },

    #[error("a is not sign * b(k + alpha) for alpha = {alpha}")]
    ShiftViolation { alpha: String },

    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),

    #[error("coefficient {coeff} of tilde_p_{s} is not divisible by {divisor}")]
    DivisibilityViolation {
        s: usize,
        divisor: u32,
        coeff: String,
    },

    #[error("polynomial is not parity-pure in powers of (k + {gamma})")]
    NotParityPure { gamma: String },

    #[error("{value} is not {p}-integral")]
    NotPIntegral { value: String, p: u64 },

    #[error("integrality violated: {0}")]
    IntegralityViolation(String),

    #[error("parse error: {0}")]
    Parse(String),
}
