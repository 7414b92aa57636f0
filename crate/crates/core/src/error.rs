use std::io;

use crate::representation::RepresentationKind;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("series contains a non-finite value {value} at index {index}")]
    NonFinite { index: usize, value: f64 },

    #[error("series has length {len}, at least 2 observations are required")]
    TooShort { len: usize },

    #[error("recurrence threshold must be positive and finite, got {0}")]
    InvalidEpsilon(f64),

    #[error("value {value} at index {index} is not strictly positive; rescale before log-return encoding")]
    NonPositiveValue { index: usize, value: f64 },

    #[error("value {value} at index {index} lies outside [0, 1]; rescale before angular encoding")]
    OutOfUnitRange { index: usize, value: f64 },

    #[error("{0} matrices cannot be inverted without auxiliary information")]
    NotInvertible(RepresentationKind),

    #[error("column {index} out of range for a {side}x{side} matrix")]
    IndexOutOfRange { index: usize, side: usize },

    #[error("window length {window} exceeds series length {len}")]
    WindowTooLong { window: usize, len: usize },

    #[error("malformed scaling parameters: {0}")]
    DegenerateParams(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("malformed matrix: {0}")]
    MalformedMatrix(String),

    #[error("no records for {0}")]
    EmptyGroup(String),

    #[error("series {series_id:?} in dataset {dataset:?} has no {metric} score for contender {contender:?}")]
    MissingContender {
        dataset: String,
        series_id: String,
        contender: String,
        metric: String,
    },

    #[error("duplicate score record: {0}")]
    DuplicateRecord(String),

    #[error("division by zero in improvement: {0}")]
    DivisionByZero(String),

    #[error("line {line}: {message}")]
    Schema { line: u64, message: String },

    #[error("tensor file: {0}")]
    Tensor(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] io::Error),
}
