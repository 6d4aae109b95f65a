use thiserror::Error;

#[derive(Debug, Error)]
pub enum LabError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("matrix exponential overflow: operand norm {0:.3e} exceeds limit {1:.3e}")]
    ExpOverflow(f64, f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("operand is not normal-ordered; call normal_order first")]
    NotNormalOrdered,
    #[error("missing symbol in representation: {0}")]
    MissingSymbol(String),
    #[error("eigensolver backward error {0:.3e} above bound {1:.3e}")]
    EigenBackwardError(f64, f64),
    #[error("non-canonical transform: det = {0}")]
    NonCanonical(f64),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("spectrum validation failed: {0}")]
    SpectrumValidation(String),
    #[error("degenerate perturbation denominator at levels {0}, {1}")]
    DegenerateDenominator(usize, usize),
}

pub type Result<T> = std::result::Result<T, LabError>;
