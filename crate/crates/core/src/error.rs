use thiserror::Error;

/// Errors raised by the engines in this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("index undefined (norm is 0)")]
    ZeroIndex,

    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("class×class product not defined: classes form an L-module, only scalars in L may multiply a class")]
    ClassProduct,

    #[error("unsupported expression: {0}")]
    Unsupported(String),

    #[error("unknown variety record `{0}`")]
    UnknownRecord(String),

    #[error("duplicate name `{0}`")]
    Duplicate(String),

    #[error("malformed record `{name}`: {msg}")]
    MalformedRecord { name: String, msg: String },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("cannot rewrite `{0}`: not smooth projective and carries no compactification or stratification")]
    Unresolvable(String),

    #[error("cyclic geometry references: {}", .0.join(" -> "))]
    Cycle(Vec<String>),

    #[error("unknown invariant family `{0}`")]
    UnknownFamily(String),

    #[error("family `{family}` has no data for generator `{generator}`")]
    Unevaluable { family: String, generator: String },

    #[error("family `{0}`: {1}")]
    FamilyKind(String, String),

    #[error("family `{0}` of type (0,0) does not terminate on denominators")]
    Divergent(String),

    #[error("family `{family}` violates the blow-up relation on `{record}`")]
    BlowupViolation { family: String, record: String },

    #[error("incomplete strata: missing entry for J = {{{0}}}")]
    IncompleteStrata(String),

    #[error("log-terminality violated: component `{0}` has multiplicity <= -1")]
    NotLogTerminal(String),

    #[error("invalid resolution data: {0}")]
    InvalidResolution(String),

    #[error("component `{0}` has a non-integral multiplicity; use the stringy engine")]
    NonIntegral(String),

    #[error("setup error: {0}")]
    Setup(String),

    #[error("invalid fan: {0}")]
    InvalidFan(String),

    #[error("not Q-Gorenstein: no linear functional equal to 1 on the rays of cone {0}")]
    NotQGorenstein(String),

    #[error("invalid support function: {0}")]
    InvalidSupport(String),

    #[error("box enumeration limit exceeded: |det| = {det} > {limit}")]
    BoxLimit { det: u64, limit: u64 },

    #[error("fan is not complete: the symmetry theorem applies to projective toric varieties only")]
    IncompleteFan,

    #[error("invalid input: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;
