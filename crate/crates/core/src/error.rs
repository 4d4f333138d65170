use num_bigint::BigInt;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("galois index {0} is not in 1..=4")]
    InvalidGaloisIndex(u32),

    #[error("division by zero in Z[zeta_5]")]
    DivisionByZero,

    #[error("{divisor} does not divide {dividend} in Z[zeta_5]")]
    NotDivisible { divisor: String, dividend: String },

    #[error("{0} lies in the prime (1 - zeta) and has no normalizing unit")]
    ResidueZero(String),

    #[error("prime {0} is not congruent to 1 mod 5 and does not split in Z[zeta_5]")]
    UnsplittablePrime(BigInt),

    #[error("factorization budget exhausted; unfactored cofactor {cofactor} (supply --factor-hint)")]
    FactorizationIncomplete { cofactor: BigInt },

    #[error("5 divides n = {0}: K_n is wildly ramified at 5 and has no normal integral basis (Hilbert-Speiser)")]
    WildRamification(BigInt),

    #[error("5 divides {0}, Legendre symbol (n/5) is undefined")]
    LegendreUndefined(BigInt),

    #[error("Delta_n = {0} is not square-free")]
    NotSquareFree(BigInt),

    #[error("no Galois conjugate of the prime above {0} divides the target period factor")]
    NoDividingConjugate(BigInt),

    #[error("m is not integral: 5 does not divide {0}")]
    NonIntegralM(BigInt),

    #[error("certification failed: {0}")]
    CertificationFailed(String),

    #[error("internal arithmetic error: {0}")]
    Internal(String),
}
