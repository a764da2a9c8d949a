use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("defining polynomial must have degree at least 1")]
    DegreeZero,
    #[error("defining polynomial of degree {0} exceeds the supported bound of {max}", max = crate::order::MAX_DEGREE)]
    DegreeTooLarge(usize),
    #[error("defining polynomial is not monic")]
    NotMonic,
    #[error("defining polynomial is reducible over the rationals: factor {factor}")]
    Reducible { factor: String },
    #[error("irreducibility search exceeded {0} candidates")]
    IrreducibilityUndecided(u64),
    #[error("element degree {got} does not match order degree {expected}")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("{0} is not a prime")]
    NotPrime(String),
    #[error("order is not maximal at p = {0} (Dedekind criterion fails)")]
    NonMaximalOrder(u64),
    #[error("zero element has no ideal factorization")]
    ZeroElement,
    #[error("norm {norm} exceeds the trial-division cap {cap}")]
    NormTooLarge { norm: String, cap: u64 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("no prime with index {index} above {prime} ({count} available)")]
    NoSuchPrimeIndex { prime: u64, index: usize, count: usize },
    #[error("residue ring of size {size} exceeds the enumeration cap {cap}")]
    RingTooLarge { size: String, cap: u64 },
    #[error("enumeration cap {0} is outside the supported range [2, {max}]", max = crate::residue::MAX_CAP)]
    BadCap(u64),
    #[error("number of solutions of x^2 = 1 is {0}, not a power of two")]
    NotAPowerOfTwo(usize),
    #[error("principal units require a prime-power modulus")]
    CompositeModulus,
    #[error("filtration level {j} outside 1..={n}")]
    JOutOfRange { j: u32, n: u32 },
    #[error("generator is not a unit")]
    NotAUnit,
    #[error("group does not have a unique element of order 2")]
    NotUniqueTorsion,
    #[error("no element of valuation one found")]
    UniformizerNotFound,
    #[error("cyclic factor order {0} must be at least 2")]
    InvalidGroup(u64),
    #[error("modulus {0} must be at least 2")]
    InvalidModulus(u64),
    #[error("lattice is not of full rank")]
    RankDeficient,
}

impl Error {
    /// Stable machine-readable name, used in JSON error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DegreeZero => "DegreeZero",
            Error::DegreeTooLarge(_) => "DegreeTooLarge",
            Error::NotMonic => "NotMonic",
            Error::Reducible { .. } => "Reducible",
            Error::IrreducibilityUndecided(_) => "IrreducibilityUndecided",
            Error::DegreeMismatch { .. } => "DegreeMismatch",
            Error::NotPrime(_) => "NotPrime",
            Error::NonMaximalOrder(_) => "NonMaximalOrder",
            Error::ZeroElement => "ZeroElement",
            Error::NormTooLarge { .. } => "NormTooLarge",
            Error::Parse(_) => "ParseError",
            Error::NoSuchPrimeIndex { .. } => "NoSuchPrimeIndex",
            Error::RingTooLarge { .. } => "RingTooLarge",
            Error::BadCap(_) => "BadCap",
            Error::NotAPowerOfTwo(_) => "NotAPowerOfTwo",
            Error::CompositeModulus => "CompositeModulus",
            Error::JOutOfRange { .. } => "JOutOfRange",
            Error::NotAUnit => "NotAUnit",
            Error::NotUniqueTorsion => "NotUniqueTorsion",
            Error::UniformizerNotFound => "UniformizerNotFound",
            Error::InvalidGroup(_) => "InvalidGroup",
            Error::InvalidModulus(_) => "InvalidModulus",
            Error::RankDeficient => "RankDeficient",
        }
    }
}
