use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("series has no leading term")]
    EmptySeries,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("non-integral charge: {0}")]
    NonIntegralCharge(String),

    #[error("surface is not a K3: {0}")]
    NotK3(String),

    #[error("invalid surface data: {0}")]
    InvalidSurface(String),

    #[error("unknown surface preset '{0}'")]
    UnknownPreset(String),

    #[error("missing invariant for divisor {0}")]
    MissingInvariant(u32),

    #[error("missing pair value for divisor {0}")]
    MissingPairValue(u32),

    #[error("degenerate n: chi((j/m) alpha(n)) vanishes for j = {0}")]
    DegenerateN(u32),

    #[error("Euler characteristic {0} is not an integer")]
    NonIntegralEuler(String),

    #[error("root-of-unity component survived averaging at exponent {0}")]
    RootOfUnityResidue(String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("identity failed: {0}")]
    IdentityFailed(String),

    #[error("parse error: {0}")]
    Parse(String),
}
