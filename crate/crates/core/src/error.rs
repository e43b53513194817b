use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit count mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("invalid Pauli: {0}")]
    InvalidPauli(String),

    #[error("matrix is not unitary (deviation {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("parameter `{name}` out of range: {value} ({expected})")]
    OutOfRange {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("chi matrix violates {property}: deviation {deviation:e} exceeds {tolerance:e}")]
    InvalidChi {
        property: &'static str,
        deviation: f64,
        tolerance: f64,
    },

    #[error("noise assignment needs {expected} channels, got {got}")]
    NoiseShape { expected: usize, got: usize },

    #[error("error {pauli} is not in the correctable set (logical class {class})")]
    NotCorrectable { pauli: String, class: u8 },

    #[error("decoder table is inconsistent: {0}")]
    Decoder(String),

    #[error("infeasible calibration: {0}")]
    Infeasible(String),

    #[error("invalid experiment spec: {0}")]
    Spec(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
