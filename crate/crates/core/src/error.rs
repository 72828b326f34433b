use alloc::string::String;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("codimension overflow: {p} + {q} exceeds dimension {dim}")]
    CodimensionOverflow { p: u32, q: u32, dim: u32 },
    #[error("codimension {p} out of range for dimension {dim}")]
    CodimensionOutOfRange { p: u32, dim: u32 },
    #[error("degree needs a top-codimension class, got codimension {p} on a space of dimension {dim}")]
    NotTopCodimension { p: u32, dim: u32 },
    #[error("space mismatch: {left} vs {right}")]
    SpaceMismatch { left: String, right: String },
    #[error("invalid declared ring: {0}")]
    InvalidDeclaredRing(String),
    #[error("invalid atom: {0}")]
    InvalidAtom(String),
    #[error("no composition rule for {left} after {right}: {reason}")]
    UndeclaredComposition { left: String, right: String, reason: String },
    #[error("{0} has no declared reverse")]
    NoReverse(String),
    #[error("iterate has {count} terms, over the cap of {cap}")]
    TermBlowup { count: usize, cap: usize },
    #[error("stability not declared: {0}")]
    StabilityNotDeclared(String),
    #[error("no commutation certificate for {left} and {right}")]
    NotCommuting { left: String, right: String },
    #[error("not semi-conjugate: {0}")]
    NotSemiConjugate(String),
    #[error("correspondence has no terms")]
    EmptyCorrespondence,
    #[error("relative codimension {p} out of range 0..={max}")]
    RelativeRange { p: u32, max: u32 },
    #[error("invalid component graph: {0}")]
    InvalidGraph(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = core::result::Result<T, Error>;
