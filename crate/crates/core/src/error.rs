use thiserror::Error;

/// Errors raised by the library. Absence of an inverse or an undecided
/// property is never an error; those are ordinary values.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("element {element} does not belong to universe {universe}")]
    UniverseMismatch { element: String, universe: String },
    #[error("universe {0} is not amenable")]
    NotAmenable(String),
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),
    #[error("rule table is not total: expected {expected} entries, found {found}")]
    TableNotTotal { expected: usize, found: usize },
    #[error("rule table entry {value} at position {position} is out of range")]
    TableEntryOutOfRange { position: usize, value: usize },
    #[error("local rule is not a group homomorphism")]
    NotHomomorphism,
    #[error("invalid memory set: {0}")]
    InvalidMemory(String),
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    #[error("patch domain is missing {0} needed for the requested region")]
    DomainTooSmall(String),
    #[error("operation requires a finite alphabet")]
    SymbolicEvaluation,
    #[error("operation requires universe {required}, found {found}")]
    UnsupportedUniverse { required: String, found: String },
    #[error("search space of {0} elements exceeds the enumeration limit")]
    TooLarge(String),
    #[error("gap {gap} is below the gluing threshold {threshold}")]
    GapBelowThreshold { gap: usize, threshold: String },
    #[error("word {0:?} is not admissible")]
    NotAdmissible(Vec<usize>),
    #[error("labeled graph is not deterministic at vertex {vertex}, label {label}")]
    NondeterministicGraph { vertex: usize, label: usize },
    #[error("memory set is not contained in the ball of radius {0}")]
    MemoryExceedsRadius(usize),
    #[error("empty tile shape")]
    EmptyShape,
    #[error("region too small: {0}")]
    RegionTooSmall(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
