use thiserror::Error;

/// Errors raised by the analytics engine.
///
/// Every variant carries enough structure for the service layer to render a
/// `details` array without re-parsing the message.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{op}: shape mismatch, left is {}x{}, right is {}x{}", left.0, left.1, right.0, right.1)]
    Shape {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("negative entry {value} at row {row}, column {col}")]
    NegativeEntry { row: usize, col: usize, value: f64 },

    #[error("division by zero in {} cell(s)", cells.len())]
    ZeroDivision { cells: Vec<(usize, usize)> },

    #[error("undefined work-passion ratio for {} assessor/assessed pair(s)", pairs.len())]
    PassionZeroDivision { pairs: Vec<(String, String)> },

    #[error("roster mismatch: {0}")]
    RosterMismatch(String),

    #[error("category mismatch: {0}")]
    CategoryMismatch(String),

    #[error("invalid weights for {context}: {reason}")]
    InvalidWeights { context: String, reason: String },

    #[error("unknown staff id '{0}'")]
    UnknownStaff(String),

    #[error("{0} must be normalized")]
    NotNormalized(&'static str),

    #[error("{what} = {value} is out of range [{min}, {max}]")]
    OutOfRange {
        what: &'static str,
        value: i64,
        min: i64,
        max: i64,
    },

    #[error("swap count {swap_k} too large for league {league} of size {size}")]
    SwapTooLarge {
        league: usize,
        size: usize,
        swap_k: usize,
    },

    #[error("reward channel is not available in this scenario")]
    MissingRewardChannel,

    #[error("provenance mismatch: {0}")]
    Provenance(String),

    #[error("{0} must not be empty")]
    Empty(&'static str),

    #[error("evidence columns are linearly dependent: {}", columns.join(", "))]
    RankDeficient { columns: Vec<String> },

    #[error("{0}")]
    Invalid(String),

    #[error("invalid bundle: {} problem(s), first: {}", .0.len(), .0.first().map(ToString::to_string).unwrap_or_default())]
    Bundle(Vec<Violation>),
}

/// One problem found while validating input files.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub file: String,
    /// 1-based data row, when the problem is tied to one.
    pub row: Option<usize>,
    pub column: Option<String>,
    pub message: String,
}

impl Violation {
    pub fn file(file: &str, message: impl Into<String>) -> Self {
        Self {
            file: file.to_string(),
            row: None,
            column: None,
            message: message.into(),
        }
    }

    pub fn at(file: &str, row: usize, column: Option<&str>, message: impl Into<String>) -> Self {
        Self {
            file: file.to_string(),
            row: Some(row),
            column: column.map(str::to_string),
            message: message.into(),
        }
    }
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.file)?;
        if let Some(r) = self.row {
            write!(f, ", row {r}")?;
        }
        if let Some(c) = &self.column {
            write!(f, ", column '{c}'")?;
        }
        write!(f, ": {}", self.message)
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
