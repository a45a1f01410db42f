use thiserror::Error;

/// Failure modes shared by every layer of the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid profile: {0}")]
    InvalidProfile(String),
    #[error("operands live in different rings")]
    RingMismatch,
    #[error("element is not a unit")]
    NonUnit,
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("no pivot with valuation within the margin")]
    SingularAtPrecision,
    #[error("domain violation: {0}")]
    DomainViolation(String),
    #[error("not divisible: {0}")]
    NotDivisible(String),
    #[error("toric level {level} exceeds cyclotomic level {k}")]
    LevelExceedsK { level: u32, k: u32 },
    #[error("input is not a cocycle: {0}")]
    NotACocycle(String),
    #[error("connection is not integrable")]
    NotIntegrable,
    #[error("twist tags differ")]
    TwistMismatch,
    #[error("residue field too small: irreducible factor of degree {degree} over F_p^{s}")]
    ResidueFieldTooSmall { degree: usize, s: usize },
    #[error("eigenvalue separation is below the precision margin")]
    AmbiguousAtPrecision,
    #[error("residual spectra are not disjoint")]
    SpectraNotDisjoint,
    #[error("matrices do not satisfy the twisted commutation relation")]
    NotCommuting,
    #[error("x^{m} = lambda has no solution in the residue field")]
    ResidueRootMissing { m: u64 },
    #[error("extended cocycle fails verification")]
    ExtensionCommutationFailure,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
