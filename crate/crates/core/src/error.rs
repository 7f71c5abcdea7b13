use thiserror::Error;

/// Errors raised by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("characteristic 2 is not supported")]
    EvenCharacteristic,
    #[error("modulus must be monic of degree {expected}, got {got:?}")]
    BadModulus { expected: usize, got: Vec<u64> },
    #[error("modulus is reducible over F_{0}")]
    ReducibleModulus(u64),
    #[error("a modulus is required to build an extension of degree {0}")]
    MissingModulus(usize),
    #[error("p^N = {0}^{1} does not fit in 32 bits")]
    TooLarge(u64, u32),
    #[error("truncation level must be at least 1")]
    ZeroLevel,
    #[error("no pure power of variable {0} among the relations; ring has infinite length")]
    InfiniteLength(String),
    #[error("relations define the zero ring")]
    ZeroRing,
    #[error("duplicate or invalid variable name {0:?}")]
    BadVariable(String),
    #[error("element is not a unit")]
    NotUnit,
    #[error("{0} is not a square modulo p")]
    NonResidue(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("thresholds do not describe an ideal: {0}")]
    NotAnIdeal(String),
    #[error("ideal is not nearly small (m_R * J != 0)")]
    NotNearlySmall,
    #[error("element does not lie in the required ideal: {0}")]
    NotInIdeal(String),
    #[error("filtration index must be at least 1")]
    FiltrationIndex,
    #[error("{0} is not a trivial prime for p = {1}")]
    NotTrivialPrime(u64, u64),
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error("representation is not residually trivial")]
    NotResiduallyTrivial,
    #[error("tame relation sigma*tau*sigma^-1 = tau^v fails")]
    RelationViolated,
    #[error("rings or parameters do not match: {0}")]
    Mismatch(String),
    #[error("search space of {size} exceeds the configured bound {bound}")]
    SearchBound { size: u128, bound: u128 },
    #[error("substitution does not kill relation {0}")]
    IllDefinedHom(String),
    #[error("image of a variable must lie in the maximal ideal")]
    ImageNotInMaximalIdeal,
    #[error("module action violates the group relation")]
    ModuleRelation,
    #[error("cocycle condition fails")]
    NotCocycle,
    #[error("vectors are linearly dependent")]
    Dependent,
    #[error("Euler characteristic identity fails: h0={0}, h1={1}, h2={2}")]
    Euler(usize, usize, usize),
    #[error("cohomology of the local group at p is only available through the ledger")]
    AtP,
    #[error("ring is not in the category C (p lies in m^2)")]
    NotInCategory,
    #[error("{0}")]
    Precondition(String),
    #[error("representation is not in the requested deformation class")]
    NotInClass,
    #[error("ledger: {0}")]
    Ledger(String),
    #[error("unknown case label {0:?}")]
    UnknownCase(String),
}

pub type Result<T> = std::result::Result<T, Error>;
