use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Probability vector has a negative or non-finite entry.
    InvalidProbability { index: usize, value: f64 },
    /// Probability vector does not sum to one.
    NotNormalized { sum: f64 },
    /// Alphabet must have at least two letters.
    AlphabetTooSmall { size: usize },
    DimensionMismatch { left: usize, right: usize },
    /// `p(x) > 0` while `q(x) = 0`, so `D(p || q)` is infinite.
    NotAbsolutelyContinuous { index: usize },
    /// A hypothesis pair must put positive mass on every letter under both hypotheses.
    ZeroSupport { hypothesis: u8, index: usize },
    InvalidBinomialParameter(f64),
    InvalidPartition(&'static str),
    RateOutOfRange { rate: usize, min: usize, max: usize },
    GroupIndexOutOfRange { index: usize, groups: usize },
    SameGroup(usize),
    /// Exhaustive search would visit more partitions than allowed.
    BudgetExceeded { estimate: u128, budget: u128 },
    NoConvergence { iterations: usize },
    SymbolOutOfRange { symbol: usize, alphabet: usize },
    InvalidConfig(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidProbability { index, value } => {
                write!(f, "invalid probability {value} at letter {}", index + 1)
            }
            Error::NotNormalized { sum } => write!(f, "probabilities sum to {sum}, expected 1"),
            Error::AlphabetTooSmall { size } => {
                write!(f, "alphabet size {size} is too small, need at least 2")
            }
            Error::DimensionMismatch { left, right } => {
                write!(f, "dimension mismatch: {left} vs {right}")
            }
            Error::NotAbsolutelyContinuous { index } => write!(
                f,
                "divergence is infinite: letter {} has positive mass under p but zero under q",
                index + 1
            ),
            Error::ZeroSupport { hypothesis, index } => write!(
                f,
                "letter {} has zero probability under H{hypothesis}; both hypotheses must be strictly positive",
                index + 1
            ),
            Error::InvalidBinomialParameter(s) => {
                write!(f, "binomial parameter {s} must lie strictly between 0 and 1")
            }
            Error::InvalidPartition(why) => write!(f, "invalid partition: {why}"),
            Error::RateOutOfRange { rate, min, max } => {
                write!(f, "rate M = {rate} out of range [{min}, {max}]")
            }
            Error::GroupIndexOutOfRange { index, groups } => {
                write!(f, "group index {index} out of range for {groups} groups")
            }
            Error::SameGroup(i) => write!(f, "cannot merge group {i} with itself"),
            Error::BudgetExceeded { estimate, budget } => write!(
                f,
                "exhaustive search needs {estimate} partitions (Stirling number), budget is {budget}"
            ),
            Error::NoConvergence { iterations } => {
                write!(f, "solver did not converge within {iterations} iterations")
            }
            Error::SymbolOutOfRange { symbol, alphabet } => {
                write!(f, "symbol {symbol} outside compressed alphabet 1..={alphabet}")
            }
            Error::InvalidConfig(why) => write!(f, "invalid test configuration: {why}"),
        }
    }
}

impl core::error::Error for Error {}
