use thiserror::Error;

/// Errors raised anywhere in the library.
///
/// Recognition failures carry a stable machine-readable name via [`Error::kind`],
/// which is what the CLI and the C ABI report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("bad field polynomial: {0}")]
    BadPolynomial(String),
    #[error("elements or objects belong to different fields")]
    FieldMismatch,
    #[error("inversion of zero")]
    ZeroInversion,
    #[error("group element has determinant {0}, expected 1")]
    DeterminantNotOne(String),
    #[error("t_lambda requires a nonzero scalar")]
    ZeroScalar,
    #[error("characteristic {p} is not supported here: {reason}")]
    BadCharacteristic { p: u32, reason: String },
    #[error("no nontrivial Frobenius twist exists for m = {m}, i = {i}")]
    NoNontrivialTwist { m: usize, i: usize },
    #[error("subspace is not invariant under the {0}")]
    NotInvariant(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("malformed input: {0}")]
    Parse(String),
    #[error("matrix is singular")]
    Singular,
    #[error("filtration stalls at dimensions {0:?}: the u-actions are not unipotent")]
    NotUnipotent(Vec<usize>),
    #[error("torus split failed: {0}")]
    SplitFailure(String),
    #[error("subspace is not T-minimal: {0}")]
    NotMinimal(String),
    #[error("the bi-additive map is zero")]
    ZeroMap,
    #[error("relation is not a field: {0}")]
    NotAField(String),
    #[error("relation is not functional: {0}")]
    NotFunctional(String),
    #[error("torus does not act by scalars on the {0}")]
    NotScalar(String),
    #[error("covariance fails: {0}")]
    NotCovariant(String),
    #[error("module relations fail: {0}")]
    RelationsFailed(String),
    #[error("module is reducible")]
    Reducible { witness: Vec<Vec<u32>> },
    #[error("irreducibility could not be decided")]
    Undecided,
    #[error("module is outside the recognized range: {0}")]
    OutOfScope(String),
    #[error("structural check failed: {0}")]
    Inconsistent(String),
    #[error("w^2 is not plus or minus the identity")]
    NotPlusMinusOne,
    #[error("identity {identity} fails at vector {vector:?}")]
    IdentityFailure { identity: String, vector: Vec<u32> },
    #[error("decomposition failed: {0}")]
    DecompositionFailure(String),
    #[error("map is not bijective: {0}")]
    NotBijective(String),
    #[error("ring law for psi fails: {0}")]
    RingCheckFailure(String),
    #[error("chi is not a field automorphism: {0}")]
    NotAutomorphism(String),
}

impl Error {
    /// Stable name used in JSON error objects and C status codes.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotPrime(_) => "NotPrime",
            Error::BadPolynomial(_) => "BadPolynomial",
            Error::FieldMismatch => "FieldMismatch",
            Error::ZeroInversion => "ZeroInversion",
            Error::DeterminantNotOne(_) => "DeterminantNotOne",
            Error::ZeroScalar => "ZeroScalar",
            Error::BadCharacteristic { .. } => "BadCharacteristic",
            Error::NoNontrivialTwist { .. } => "NoNontrivialTwist",
            Error::NotInvariant(_) => "NotInvariant",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::Parse(_) => "Parse",
            Error::Singular => "Singular",
            Error::NotUnipotent(_) => "NotUnipotent",
            Error::SplitFailure(_) => "SplitFailure",
            Error::NotMinimal(_) => "NotMinimal",
            Error::ZeroMap => "ZeroMap",
            Error::NotAField(_) => "NotAField",
            Error::NotFunctional(_) => "NotFunctional",
            Error::NotScalar(_) => "NotScalar",
            Error::NotCovariant(_) => "NotCovariant",
            Error::RelationsFailed(_) => "RelationsFailed",
            Error::Reducible { .. } => "Reducible",
            Error::Undecided => "Undecided",
            Error::OutOfScope(_) => "OutOfScope",
            Error::Inconsistent(_) => "Inconsistent",
            Error::NotPlusMinusOne => "NotPlusMinusOne",
            Error::IdentityFailure { .. } => "IdentityFailure",
            Error::DecompositionFailure(_) => "DecompositionFailure",
            Error::NotBijective(_) => "NotBijective",
            Error::RingCheckFailure(_) => "RingCheckFailure",
            Error::NotAutomorphism(_) => "NotAutomorphism",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
