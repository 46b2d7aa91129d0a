use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("wire dimension must be at least 2, got {0}")]
    Dimension(usize),
    #[error("digit {digit} out of range for dimension {dim}")]
    DigitOutOfRange { digit: usize, dim: usize },
    #[error("expected {expected} digits, got {got}")]
    DigitCount { expected: usize, got: usize },
    #[error("{dim}^{wires} amplitudes exceeds the cap of {cap}")]
    TooLarge {
        dim: usize,
        wires: usize,
        cap: usize,
    },
    #[error("wire {wire} out of range for a {wires}-wire register")]
    WireOutOfRange { wire: usize, wires: usize },
    #[error("wire {0} listed more than once")]
    DuplicateWire(usize),
    #[error("operator acts on {arity} wires but {wires} were given")]
    ArityMismatch { arity: usize, wires: usize },
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("shape mismatch: {0} vs {1} wires")]
    ShapeMismatch(usize, usize),
    #[error("expected {expected} entries, got {got}")]
    EntryCount { expected: usize, got: usize },
    #[error("operator is not unitary (max deviation {0:e})")]
    NotUnitary(f64),
    #[error("state is not normalized (norm² = {0})")]
    NotNormalized(f64),
    #[error("invalid Bell label: {0}")]
    InvalidLabel(String),
    #[error("invalid parity pair set: {0}")]
    InvalidPairs(String),
    #[error("parity outcomes inconsistent around a cycle through wires {0} and {1}")]
    InconsistentParity(usize, usize),
    #[error("invalid topology: {0}")]
    InvalidTopology(String),
    #[error("result is not a Bell state (best overlap {0})")]
    NotBell(f64),
    #[error("{0}")]
    Invalid(String),
}
