use thiserror::Error;

/// Errors raised while reading theory files, formulas and certificates.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{line}:{column}: undeclared action symbol `{symbol}`")]
    UndeclaredSymbol {
        line: usize,
        column: usize,
        symbol: String,
    },
    #[error("line {line}: duplicate `actions` declaration")]
    DuplicateVocabulary { line: usize },
    #[error("line {line}: missing vocabulary declaration (`actions ...` must come first)")]
    MissingVocabulary { line: usize },
    #[error("line {line}: `{symbol}` is reserved and cannot name an action")]
    ReservedIdentifier { line: usize, symbol: String },
    #[error("line {line}: action `{symbol}` declared twice")]
    DuplicateSymbol { line: usize, symbol: String },
    #[error("line {line}: invalid action identifier `{symbol}`")]
    InvalidIdentifier { line: usize, symbol: String },
}

/// Errors raised by the reasoning engines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("vocabulary has {actual} actions, limit is {limit}")]
    VocabularyTooLarge { actual: usize, limit: usize },
    #[error("atom-set widths differ ({left} vs {right} actions)")]
    WidthMismatch { left: usize, right: usize },
    #[error("element lies outside the algebra's universe")]
    OutsideUniverse,
    #[error("ideals range over different universes")]
    UniverseMismatch,
    #[error("permitted and forbidden ideals share a non-zero element")]
    OverlappingIdeals,
    #[error("theory is inconsistent")]
    InconsistentTheory,
    #[error("default `{0}` is not a basic deontic default")]
    NotBasicDefault(String),
    #[error("too many defaults ({actual}, limit {limit})")]
    TooManyDefaults { actual: usize, limit: usize },
    #[error("algebra too large to enumerate ({alive} alive atoms, limit {limit})")]
    AlgebraTooLarge { alive: usize, limit: usize },
    #[error("formula is not a credulous default consequence")]
    NotAConsequence,
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
