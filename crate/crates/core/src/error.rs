use alloc::string::String;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("mass sums to {total}, expected 1 within tolerance")]
    NotNormalized { total: f64 },
    #[error("invalid mass {value} at flat index {index}")]
    InvalidMass { index: usize, value: f64 },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("unknown axis `{0}`")]
    UnknownAxis(String),
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("outside the domain: {0}")]
    Domain(String),
    #[error("model does not belong to the requested family: {0}")]
    Classification(String),
    #[error("budget exceeded: {required} terms required, budget is {budget}")]
    Budget { required: u128, budget: u128 },
}

pub type Result<T> = core::result::Result<T, Error>;
