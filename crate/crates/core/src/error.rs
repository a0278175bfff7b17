use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero denominator in ratio test")]
    ZeroDenominator,
    #[error("mode violation: {0}")]
    ModeViolation(String),
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("derivation does not have constant divergence")]
    NotConstantDivergence,
    #[error("({0}, {1}) is not a bigrading weight")]
    NotInLattice(i32, i32),
    #[error("derivation is zero")]
    ZeroDerivation,
    #[error("certificate does not certify this derivation as locally nilpotent")]
    NotCertified,
    #[error("derivation is not certified locally finite")]
    NotLocallyFinite,
    #[error("computation requires an extension of Q(sqrt2)")]
    FieldExtensionRequired,
    #[error("delta must be nonzero")]
    ZeroDelta,
    #[error("alpha/beta is rational; eigenspaces need not be one-dimensional")]
    RationalRatio,
    #[error("({0}, {1}) is not a coprime pair")]
    NotCoprime(i64, i64),
    #[error("derivation centralizes delta")]
    CentralizesDelta,
    #[error("toral pair is linearly dependent or inconsistent: {0}")]
    DependentResult(String),
    #[error("budget must be positive")]
    BudgetZero,
    #[error("generator list is empty")]
    EmptyGenerators,
    #[error("invalid automorphism: {0}")]
    InvalidAutomorphism(String),
    #[error("certification budget exhausted")]
    Inconclusive,
    #[error("internal consistency check failed: {0}")]
    Inconsistency(String),
}
