use core::fmt;

/// Errors raised by contract checks and guarded searches.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// A length sequence was empty.
    EmptyLengths,
    /// A square length of zero was supplied.
    ZeroLength,
    /// Lengths were not strictly increasing; carries the 1-based offending position.
    NotIncreasing { position: usize },
    /// Alphabets need at least one letter.
    EmptyAlphabet,
    /// A letter index did not fit the alphabet.
    LetterOutOfRange { letter: u8, size: usize },
    /// A 1-based square position `(i, j)` does not fit inside the word.
    SquareOutOfRange {
        length: usize,
        start: usize,
        word_len: usize,
    },
    /// `t` must lie in `1..=n` and `2i <= n` for the involution `tau_i`.
    TauOutOfRange { i: usize, t: usize, n: usize },
    /// Partitions compared over different ground sets.
    GroundMismatch { left: usize, right: usize },
    /// A block list did not form a partition of `[n]`.
    InvalidPartition,
    /// Block count out of range for a coarsening request.
    BlockCount { requested: usize, available: usize },
    /// An index into the length sequence was out of range.
    IndexOutOfRange { index: usize, len: usize },
    /// The operation is only defined under condition C.
    ConditionCRequired,
    /// The operation needs every length to be at least two.
    LengthOneUnsupported,
    /// A search or build would exceed its configured budget.
    BudgetExceeded { what: &'static str, limit: u64 },
    /// No candidate was found with at most `k_max` blocks.
    KMaxExceeded { k_max: usize },
    /// A word required to be squarefree contains the given square (1-based start).
    NotSquarefree { length: usize, start: usize },
    /// Alphabets are rendered as `a..z`.
    AlphabetTooLarge { size: usize, max: usize },
    /// Random walks need a nonempty core.
    EmptyCore,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptyLengths => write!(f, "length sequence is empty"),
            Error::ZeroLength => write!(f, "square lengths must be positive"),
            Error::NotIncreasing { position } => {
                write!(
                    f,
                    "lengths are not strictly increasing at position {position}"
                )
            }
            Error::EmptyAlphabet => write!(f, "alphabet must have at least one letter"),
            Error::LetterOutOfRange { letter, size } => {
                write!(f, "letter index {letter} outside alphabet of size {size}")
            }
            Error::SquareOutOfRange {
                length,
                start,
                word_len,
            } => write!(
                f,
                "a {length}-square starting at {start} does not fit in a word of length {word_len}"
            ),
            Error::TauOutOfRange { i, t, n } => {
                write!(f, "tau_{i} is not defined at {t} on [{n}]")
            }
            Error::GroundMismatch { left, right } => {
                write!(f, "ground sets differ: [{left}] vs [{right}]")
            }
            Error::InvalidPartition => write!(f, "blocks do not partition the ground set"),
            Error::BlockCount {
                requested,
                available,
            } => write!(
                f,
                "cannot form {requested} blocks from a partition with {available} blocks"
            ),
            Error::IndexOutOfRange { index, len } => {
                write!(
                    f,
                    "index {index} out of range for a sequence of {len} lengths"
                )
            }
            Error::ConditionCRequired => write!(f, "lengths must satisfy condition C"),
            Error::LengthOneUnsupported => write!(f, "every length must be at least 2"),
            Error::BudgetExceeded { what, limit } => {
                write!(f, "{what} exceeds the configured budget of {limit}")
            }
            Error::KMaxExceeded { k_max } => {
                write!(f, "no dead-end candidate with at most {k_max} blocks")
            }
            Error::AlphabetTooLarge { size, max } => {
                write!(f, "alphabet of size {size} exceeds the maximum of {max}")
            }
            Error::NotSquarefree { length, start } => {
                write!(f, "word contains a {length}-square starting at {start}")
            }
            Error::EmptyCore => write!(f, "empty core"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
