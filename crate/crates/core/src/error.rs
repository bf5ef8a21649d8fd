use thiserror::Error;

/// Errors raised by sequence, ball and reconstruction operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("alphabet size must be between 2 and 256, got {0}")]
    InvalidAlphabet(u32),

    #[error("symbol {symbol} is outside the alphabet of size {q}")]
    SymbolOutOfRange { symbol: u32, q: u16 },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("alphabet mismatch: q = {left} vs q = {right}")]
    AlphabetMismatch { left: u16, right: u16 },

    #[error("index {index} is outside 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("deletion and substitution positions coincide at {0}")]
    CoincidentPositions(usize),

    #[error("alternating word needs two distinct symbols, got {0} twice")]
    EqualSymbols(u8),

    #[error("malformed interval [{left}, {right}] for a word of length {len}")]
    BadInterval { left: usize, right: usize, len: usize },

    #[error("cannot parse sequence {text:?}: {reason}")]
    Parse { text: String, reason: String },

    #[error("ball parameters t = {t}, s = {s} require t + s < n = {n}")]
    InvalidBallSpec { t: usize, s: usize, n: usize },

    #[error("enumeration estimate {estimate} exceeds the budget of {budget} elements")]
    BudgetExceeded { estimate: u128, budget: u64 },

    #[error("Hamming distance {d} is below the required minimum {min}")]
    DistanceTooSmall { d: usize, min: usize },

    #[error("j = {j} must not exceed j' = {jp}")]
    UnorderedPositions { j: usize, jp: usize },

    #[error("n = {n} is below the validity threshold {threshold} for q = {q}")]
    BelowThreshold { n: usize, q: u16, threshold: usize },

    #[error("codebook needs at least two codewords, got {0}")]
    CodebookTooSmall(usize),

    #[error("probability must lie in [0, 1], got {0}")]
    InvalidProbability(String),

    #[error("duplicate codeword {0}")]
    DuplicateCodeword(String),

    #[error("cannot read {path}: {reason}")]
    Io { path: String, reason: String },

    #[error("read set is empty")]
    EmptyReadSet,

    #[error("inconsistent lambda provenance: {0}")]
    Provenance(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Stable snake_case name of the variant, for machine-readable output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidAlphabet(_) => "invalid_alphabet",
            Error::SymbolOutOfRange { .. } => "symbol_out_of_range",
            Error::LengthMismatch { .. } => "length_mismatch",
            Error::AlphabetMismatch { .. } => "alphabet_mismatch",
            Error::IndexOutOfRange { .. } => "index_out_of_range",
            Error::CoincidentPositions(_) => "coincident_positions",
            Error::EqualSymbols(_) => "equal_symbols",
            Error::BadInterval { .. } => "bad_interval",
            Error::Parse { .. } => "parse",
            Error::InvalidBallSpec { .. } => "invalid_ball_spec",
            Error::BudgetExceeded { .. } => "budget_exceeded",
            Error::DistanceTooSmall { .. } => "distance_too_small",
            Error::UnorderedPositions { .. } => "unordered_positions",
            Error::BelowThreshold { .. } => "below_threshold",
            Error::CodebookTooSmall(_) => "codebook_too_small",
            Error::InvalidProbability(_) => "invalid_probability",
            Error::DuplicateCodeword(_) => "duplicate_codeword",
            Error::Io { .. } => "io",
            Error::EmptyReadSet => "empty_read_set",
            Error::Provenance(_) => "provenance",
        }
    }
}
