use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("empty input")]
    EmptyInput,

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("non-finite value {value} at index {index}")]
    NonFinite { index: usize, value: f64 },

    #[error("epsilon must be positive and finite: {0}")]
    InvalidEpsilon(f64),

    #[error("{what} must be sorted in non-increasing order (violated at index {index})")]
    NotSorted { what: &'static str, index: usize },

    #[error("threshold undefined: w has ties at indices {0} and {1}")]
    TiedWeights(usize, usize),

    #[error("regime precondition violated: epsilon {epsilon} vs threshold {threshold}")]
    RegimeViolated { epsilon: f64, threshold: f64 },

    #[error("trim count k = {k} out of range for n = {n}")]
    TrimOutOfRange { k: usize, n: usize },

    #[error("target rank {value} at index {index} outside [1, {n}]")]
    TargetOutOfRange { index: usize, value: f64, n: usize },

    #[error("ragged batch: row {row} has length {len}, expected {expected}")]
    RaggedBatch { row: usize, len: usize, expected: usize },

    #[error("input too large for brute force: n = {n} > {max}")]
    TooLarge { n: usize, max: usize },

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_finite(x: &[f64]) -> Result<()> {
    match x.iter().position(|v| !v.is_finite()) {
        Some(index) => Err(Error::NonFinite {
            index,
            value: x[index],
        }),
        None => Ok(()),
    }
}

pub(crate) fn check_same_len(a: &[f64], b: &[f64]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    Ok(())
}

pub(crate) fn check_epsilon(eps: f64) -> Result<()> {
    if !(eps.is_finite() && eps > 0.0) {
        return Err(Error::InvalidEpsilon(eps));
    }
    Ok(())
}
