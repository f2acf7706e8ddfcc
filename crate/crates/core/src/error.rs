use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parts must be positive integers")]
    ZeroPart,
    #[error("sum of parts overflows")]
    SizeOverflow,
    #[error("parts {0:?} are not weakly decreasing")]
    NotPartition(Vec<u64>),
    #[error("modulus {q} is below the minimum of {min}")]
    ModulusTooSmall { q: u64, min: u64 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{a} is not invertible modulo {q}")]
    NotInvertible { a: u64, q: u64 },
    #[error("part {part} is outside 1..{q}")]
    PartOutOfRange { part: u64, q: u64 },
    #[error("part value must be at least 1, got {0}")]
    InvalidPartValue(u64),
    #[error("residue vector has length {len}, expected {expected}")]
    ProfileLength { len: usize, expected: usize },
    #[error("profile has {0} parts divisible by the modulus, expected none")]
    NonzeroMultiples(usize),
    #[error("table is for modulus {table}, profile has modulus {profile}")]
    ModulusMismatch { table: u64, profile: u64 },
    #[error("r_1 = {r1} is not the maximum coordinate {max}")]
    FirstNotMaximal { r1: usize, max: usize },
}
