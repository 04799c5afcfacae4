use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit count mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("qubit index {index} out of range for {n} qubits")]
    QubitOutOfRange { index: usize, n: usize },

    #[error("majorana index {index} out of range for {n_modes} modes")]
    MajoranaOutOfRange { index: usize, n_modes: usize },

    #[error("excitation mode indices must be pairwise distinct")]
    RepeatedExcitationIndex,

    #[error("invalid pauli text {text:?}: {reason}")]
    InvalidPauliText { text: String, reason: String },

    #[error("operator has phase i^{phase}, expected a ±1 sign")]
    NonHermitian { phase: u8 },

    #[error("circuit contains a non-Clifford operation at position {0}")]
    NonCliffordGate(usize),

    #[error("graph is not connected over the requested nodes")]
    DisconnectedGraph,

    #[error("invalid heavy-hex parameter {0}: need an odd distance >= 3")]
    InvalidHeavyHex(usize),

    #[error("invalid graph text: {0}")]
    InvalidGraphText(String),

    #[error("no circuit found for database task within budget (K = {max_cnots}, attempts = {attempts})")]
    DbSearchExhausted { max_cnots: usize, attempts: usize },

    #[error("invalid database entry: {0}")]
    InvalidDbEntry(String),

    #[error("invalid synthesis input: {0}")]
    InvalidInput(String),

    #[error("dense oracle limited to {max} qubits, got {n}")]
    DenseTooLarge { n: usize, max: usize },

    #[error("qasm parse error at line {line}: {reason}")]
    QasmParse { line: usize, reason: String },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
