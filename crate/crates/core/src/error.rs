use alloc::string::String;

/// Errors raised by the numerical kernels.
///
/// Every variant names the violated precondition or invariant so callers can
/// surface it without further context.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("amplitude count {got} does not match 2^{n_qubits} = {expected}")]
    LengthMismatch {
        n_qubits: usize,
        expected: usize,
        got: usize,
    },
    #[error("state vector has zero norm")]
    ZeroVector,
    #[error("invalid qubit count {0}")]
    QubitCount(usize),
    #[error("qubit index {index} out of range for {n_qubits} qubits")]
    IndexOutOfRange { index: usize, n_qubits: usize },
    #[error("pair indices must differ (got {0} twice)")]
    SameIndex(usize),
    #[error("density operator invariant `{invariant}` violated: {detail}")]
    InvalidDensity {
        invariant: &'static str,
        detail: String,
    },
    #[error("correlation entry t[{row}][{col}] has imaginary part {imag:e}")]
    NonHermitian { row: usize, col: usize, imag: f64 },
    #[error("measurement direction `{name}` has norm {norm} (must be 1)")]
    NonUnitDirection { name: &'static str, norm: f64 },
    #[error("correlation value {0} outside [-1, 1]")]
    CorrelatorRange(f64),
    #[error("state has complex amplitudes (max |imag| = {0:e})")]
    ComplexAmplitudes(f64),
    #[error("negative radicand {0:e} beyond rounding tolerance")]
    NegativeRadicand(f64),
    #[error("invalid chain: {0}")]
    InvalidChain(String),
    #[error("vector dimension {got} does not match sector dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("closed-form Bell value {closed} disagrees with general value {general} (|diff| = {diff:e})")]
    ClosedFormMismatch {
        closed: f64,
        general: f64,
        diff: f64,
    },
    #[error("translation-invariance scan requires uniform couplings (J1 = {j1}, J2 = {j2})")]
    NotUniform { j1: f64, j2: f64 },
    #[error("monogamy bound violated: sum {sum} > bound {bound} (sample {sample})")]
    MonogamyViolation { sum: f64, bound: f64, sample: u64 },
    #[error("invalid parameter `{name}`: {detail}")]
    InvalidParameter { name: &'static str, detail: String },
}

pub type Result<T> = core::result::Result<T, Error>;
