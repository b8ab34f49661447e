use std::path::PathBuf;

/// Errors raised by the library.
///
/// Variants fall into three classes (see [`ErrorClass`]) so that front ends
/// can map failures onto distinct exit codes.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("column `{0}` not found in header")]
    MissingColumn(String),
    #[error("non-numeric cell at data row {row}, column `{column}`: {value:?}")]
    NonNumericCell {
        row: usize,
        column: String,
        value: String,
    },
    #[error("invalid outcome value at data row {row}: {value:?} (expected 0/1 or clean/defective)")]
    InvalidOutcomeValue { row: usize, value: String },
    #[error("dataset has no data rows")]
    EmptyDataset,
    #[error("invalid dataset: {0}")]
    InvalidDataset(String),
    #[error("bootstrap draw covered every row; the test set is empty")]
    EmptyTestSet,
    #[error("invalid synthetic spec: {0}")]
    InvalidSpec(String),
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("too few values ({len}) for {bins} bins")]
    TooFewValues { len: usize, bins: usize },
    #[error("outcome has a single class")]
    DegenerateOutcome,
    #[error("row has {got} values, model expects {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("labels contain a single class")]
    SingleClass,
    #[error("unsupported selector `{0}` (valid: {valid})", valid = crate::selectors::SelectorId::valid_list())]
    UnsupportedSelector(String),
    #[error("unknown metric `{0}`")]
    UnknownMetric(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

/// Coarse failure class used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Usage,
    Data,
    Computation,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::UnsupportedSelector(_) | Error::InvalidParameter(_) | Error::Config(_) => {
                ErrorClass::Usage
            }
            Error::MissingColumn(_)
            | Error::NonNumericCell { .. }
            | Error::InvalidOutcomeValue { .. }
            | Error::EmptyDataset
            | Error::InvalidDataset(_)
            | Error::InvalidSpec(_)
            | Error::UnknownMetric(_)
            | Error::Io { .. }
            | Error::Csv(_)
            | Error::Json(_) => ErrorClass::Data,
            Error::EmptyTestSet
            | Error::LengthMismatch { .. }
            | Error::TooFewValues { .. }
            | Error::DegenerateOutcome
            | Error::DimensionMismatch { .. }
            | Error::SingleClass => ErrorClass::Computation,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
