use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("unknown letter `{0}`")]
    UnknownLetter(String),
    #[error("letter index {0} does not belong to this alphabet")]
    ForeignLetter(u32),
    #[error("letter `{0}` declared twice")]
    DuplicateLetter(String),
    #[error("letter name `{0}` is empty or contains whitespace")]
    BadLetterName(String),
    #[error("inverse pairing is not an involution at `{0}`")]
    NotInvolution(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("group must have at least one element")]
    Empty,
    #[error("cyclic group order must be at least 1")]
    ZeroOrder,
    #[error("table has {rows} rows but {elements} element names")]
    Shape { rows: usize, elements: usize },
    #[error("table entry ({row}, {col}) = {value} is out of range")]
    OutOfRange { row: usize, col: usize, value: usize },
    #[error("element name `{0}` used twice")]
    DuplicateName(String),
    #[error("element 0 is not an identity: {0}·{1} = {2}")]
    MissingIdentity(String, String, String),
    #[error("not a Latin square: `{0}` repeats in {1}")]
    NotLatin(String, String),
    #[error("associativity fails at ({0}, {1}, {2})")]
    NotAssociative(String, String, String),
    #[error("{0} is not a subgroup")]
    NotSubgroup(String),
}

/// Why a map between finite groups is not an injective homomorphism.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmbeddingViolation {
    #[error("map has {got} entries, source has {expected} elements")]
    Arity { got: usize, expected: usize },
    #[error("`{0}` maps outside the target")]
    OutOfRange(String),
    #[error("identity maps to `{0}`")]
    IdentityNotPreserved(String),
    #[error("not injective: `{0}` and `{1}` both map to `{2}`")]
    NotInjective(String, String, String),
    #[error("not a homomorphism at pair (`{0}`, `{1}`)")]
    NotHomomorphism(String, String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("malformed input: {0}")]
    Parse(String),
    #[error("{context}: {source}")]
    Group {
        context: String,
        #[source]
        source: GroupError,
    },
    #[error("{context}: {message}")]
    Spec { context: String, message: String },
    #[error("graph is invalid:\n{}", .0.join("\n"))]
    Invalid(Vec<String>),
    #[error("letter name `{0}` is introduced twice; rename an element")]
    LetterClash(String),
    #[error(transparent)]
    Word(#[from] WordError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NormalFormError {
    #[error("element belongs to a different layer")]
    LayerMismatch,
    #[error(transparent)]
    Word(#[from] WordError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("ball budget of {budget} elements exceeded while growing radius {radius}")]
    BudgetExceeded { budget: usize, radius: usize },
    #[error("k must be at least 1")]
    BadLocality,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DehnError {
    #[error("no local-exclusion guarantee: counterexample `{0}`")]
    Unverified(String),
    #[error("generating set does not match the construction plan")]
    PlanMismatch,
    #[error("k must be at least 2, got {0}")]
    BadLocality(usize),
    #[error("stack `{0}` contains a forbidden factor")]
    StackInvariant(String),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}
