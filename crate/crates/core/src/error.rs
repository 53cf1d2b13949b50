use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at byte {pos}: {message}")]
    Syntax { pos: usize, message: String },

    #[error("empty S-letter at byte {pos}")]
    EmptySLetter { pos: usize },

    #[error("letter `{letter}` appears twice in one S-letter")]
    DuplicateLetter { letter: String },

    #[error("invalid letter name `{0}`")]
    InvalidLetter(String),

    #[error("letter `{0}` is not in the alphabet")]
    LetterOutsideAlphabet(String),

    #[error("alphabet has {0} letters; at most 64 are supported")]
    AlphabetTooLarge(usize),

    #[error("renaming is not a bijection: {0}")]
    NotBijective(String),

    #[error("operands share letters: {0}")]
    SharedLetters(String),

    #[error("bound mismatch: {0}")]
    BoundMismatch(String),

    #[error("explicit enumeration refused: {what} would produce {size} words (cap {cap})")]
    CapExceeded {
        what: String,
        size: String,
        cap: usize,
    },

    #[error("not a lattice: {0}")]
    NotALattice(String),

    #[error("expected a two-letter index, got {0} letters")]
    NonBinaryIndex(usize),

    #[error("`{name}` is not an atom of the {algebra} algebra")]
    InvalidAtom { algebra: String, name: String },

    #[error("profile mismatch: {0}")]
    ProfileMismatch(String),

    #[error("algebra mismatch: {0}")]
    AlgebraMismatch(String),

    #[error("unknown item `{0}`")]
    UnknownItem(String),

    #[error("duplicate item or letter `{0}`")]
    DuplicateItem(String),

    #[error("invalid item `{name}`: {message}")]
    InvalidItem { name: String, message: String },

    #[error("constraint {index}: {message}")]
    InvalidConstraint { index: usize, message: String },

    #[error("language is empty")]
    EmptyLanguage,

    #[error("language words do not share one Parikh vector")]
    MixedParikh,

    #[error("invalid allocation instance: {0}")]
    InvalidInstance(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    pub(crate) fn cap(what: impl Into<String>, size: impl ToString, cap: usize) -> Self {
        Error::CapExceeded {
            what: what.into(),
            size: size.to_string(),
            cap,
        }
    }
}
