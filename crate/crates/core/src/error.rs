use thiserror::Error;

use crate::quad::Clause;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unsupported prime {0}: an odd prime is required")]
    UnsupportedPrime(u64),
    #[error("invalid precision: {0}")]
    InvalidPrecision(String),
    #[error("prime mismatch: {0} vs {1}")]
    PrimeMismatch(u64, u64),
    #[error("non-unit has no Teichmüller lift")]
    NoTeichmuellerLift,
    #[error("form is not p-ordinary")]
    NotOrdinary,
    #[error("not a 1-unit: {0}")]
    NotOneUnit(String),
    #[error("division by a non-unit")]
    DivisionByNonUnit,
    #[error("valuation of zero")]
    ValuationOfZero,
    #[error("{0} is not coprime to {1}")]
    NotCoprime(String, String),
    #[error("unsupported class number for discriminant {0}")]
    UnsupportedClassNumber(i64),
    #[error("prime {0} is not split in the field")]
    NotSplit(u64),
    #[error("ramified in the anticyclotomic tower; supply exponent explicitly")]
    RamifiedInTower,
    #[error("unit check failed at {0}")]
    UnitCheck(String),
    #[error("conductor mismatch")]
    ConductorMismatch,
    #[error("bad prime for recursion: {0}")]
    BadPrime(u64),
    #[error("precision exhausted: λ undetectable")]
    PrecisionExhausted,
    #[error("missing eigenvalue a_{0}")]
    MissingEigenvalue(u64),
    #[error("negative valuation coefficient: {0}")]
    NegativeValuation(String),
    #[error("ramified-character regime only")]
    RamifiedRegimeOnly,
    #[error("value out of range: {0}")]
    OutOfRange(String),
    #[error("odd weight {0}")]
    OddWeight(u32),
    #[error("insufficient distinct specialization points at precision")]
    InsufficientPoints,
    #[error("setup violates: {}", join_clauses(.0))]
    InvalidSetup(Vec<Clause>),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

fn join_clauses(c: &[Clause]) -> String {
    c.iter().map(|c| c.to_string()).collect::<Vec<_>>().join("; ")
}
