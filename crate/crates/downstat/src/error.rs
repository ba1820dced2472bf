//! Crate-wide error type.
//!
//! Variants are grouped by the exit code the CLI maps them to: input and
//! validation problems (exit 1), numerical failures (exit 2), and internal
//! invariant violations (exit 3).

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("row {row}: {message}")]
    MalformedRow { row: u64, message: String },

    #[error("row {row}: duplicate record for paper '{paper_id}' in {month}")]
    DuplicateRecord {
        row: u64,
        paper_id: String,
        month: String,
    },

    #[error(
        "row {row}: paper '{paper_id}' has downloads in {month}, before its \
         publication month {pub_month}"
    )]
    DownloadBeforePublication {
        row: u64,
        paper_id: String,
        month: String,
        pub_month: String,
    },

    #[error("paper '{paper_id}' is published in {month}, outside the observation window {window}")]
    OutsideWindow {
        paper_id: String,
        month: String,
        window: String,
    },

    #[error("corpus is empty")]
    EmptyCorpus,

    #[error("window month {month} is outside the corpus calendar 1..={horizon}")]
    WindowBeyondHorizon { month: u32, horizon: u32 },

    #[error("no downloads in the requested window; age distribution undefined")]
    NoDownloadsInWindow,

    #[error("need at least {need} supported ages, got {got}")]
    TooFewAges { got: usize, need: usize },

    #[error("invalid model parameter: {0}")]
    InvalidModel(String),

    #[error("paper '{0}' has a single observed month; deviation statistic undefined")]
    SingleMonthHistory(String),

    #[error("no papers at risk at age {age}; medians unsupported over the first {span} months")]
    UnsupportedAge { age: u32, span: u32 },

    #[error("paper '{0}' has no downloads; half-life undefined")]
    ZeroDownloads(String),

    #[error("need at least {need} deviation values for a knee estimate, got {got}")]
    TooFewValues { got: usize, need: usize },

    #[error("all deviation values are equal; survival curve has no knee")]
    NoKnee,

    #[error("baseline supports {supported} ages but paper '{paper_id}' spans {required}")]
    BaselineTooShort {
        paper_id: String,
        supported: usize,
        required: usize,
    },

    #[error("invalid generator spec: {0}")]
    InvalidGenSpec(String),

    #[error("{0}")]
    InvalidInput(String),

    #[error("fit did not converge within the iteration cap")]
    NonConvergence,

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code the CLI uses for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NonConvergence => 2,
            Error::Internal(_) => 3,
            _ => 1,
        }
    }
}
