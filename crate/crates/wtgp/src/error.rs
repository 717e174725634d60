use std::path::PathBuf;

use serde_json::json;

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: malformed JSON: {message}")]
    Json { path: PathBuf, message: String },
    #[error("{path}: row {row:?} sums to {total}, not 1 within 1e-9")]
    RowSum { path: PathBuf, row: Vec<usize>, total: f64 },
    #[error("{path}: negative probability {value} at cell {cell:?}")]
    Negative { path: PathBuf, cell: Vec<usize>, value: f64 },
    #[error("{path}: alphabet mismatch: {message}")]
    Alphabet { path: PathBuf, message: String },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Core(#[from] wtgp_core::Error),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        use wtgp_core::Error as E;
        match self {
            CliError::Io { .. } => "io",
            CliError::Json { .. } => "malformed_json",
            CliError::RowSum { .. } => "row_sum",
            CliError::Negative { .. } => "negative_probability",
            CliError::Alphabet { .. } => "alphabet_mismatch",
            CliError::Config(_) => "config",
            CliError::Invariant(_) => "invariant",
            CliError::Core(e) => match e {
                E::NotNormalized { .. } => "not_normalized",
                E::InvalidMass { .. } => "invalid_mass",
                E::Shape(_) => "shape",
                E::UnknownAxis(_) => "unknown_axis",
                E::Argument(_) => "argument",
                E::Domain(_) => "domain",
                E::Classification(_) => "classification",
                E::Budget { .. } => "budget",
            },
        }
    }

    /// Process exit status; distinct per error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => 2,
            CliError::Json { .. } => 3,
            CliError::RowSum { .. } => 4,
            CliError::Negative { .. } => 5,
            CliError::Alphabet { .. } => 6,
            CliError::Config(_) => 7,
            CliError::Invariant(_) => 8,
            CliError::Core(_) => 9,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut detail = json!({ "code": self.code(), "message": self.to_string() });
        match self {
            CliError::Negative { cell, value, .. } => {
                detail["cell"] = json!(cell);
                detail["value"] = json!(value);
            }
            CliError::RowSum { row, total, .. } => {
                detail["row"] = json!(row);
                detail["total"] = json!(total);
            }
            CliError::Core(wtgp_core::Error::Budget { required, budget }) => {
                detail["required"] = json!(required.to_string());
                detail["budget"] = json!(budget.to_string());
            }
            _ => {}
        }
        json!({ "error": detail })
    }
}
