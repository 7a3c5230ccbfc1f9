use alloc::string::String;
use alloc::vec::Vec;

/// Every failure the exact engine can report.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unbound variable {0}")]
    UnboundVariable(String),
    #[error("bad block tag '{0}'")]
    BadBlockTag(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid algebra: {}", .0.join("; "))]
    Violation(Vec<String>),
    #[error("quasi-norm kind unsupported: {0}")]
    KindUnsupported(String),
    #[error("singular linear system: {0}")]
    SingularSystem(String),
    #[error("operator is not left-invariant: {0}")]
    NotInvariant(String),
    #[error("weight {requested} exceeds basis maximum {max}")]
    WeightTooLarge { requested: u32, max: u32 },
    #[error("quantizing function does not satisfy (HP): {0}")]
    NotHp(String),
    #[error("structure violation: {0}")]
    StructureViolation(String),
    #[error("representation not faithful: {0}")]
    RepNotFaithful(String),
    #[error("basis deficient: {0}")]
    BasisDeficient(String),
    #[error("not an automorphism: {0}")]
    NotAutomorphism(String),
    #[error("group is not stratified: {0}")]
    NotStratified(String),
    #[error("mismatch: {}", .0.join("; "))]
    Mismatch(Vec<String>),
}

pub type Result<T> = core::result::Result<T, Error>;
