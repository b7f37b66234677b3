use thiserror::Error;

/// Errors reported by the exact-arithmetic engine.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: u64, right: u64 },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("modulus must be positive")]
    ZeroModulus,

    #[error("sigma is not a permutation of 0..{n}")]
    InvalidPermutation { n: usize },

    #[error("exponent {exp} is outside [0, {modulus})")]
    ExponentOutOfRange { exp: u64, modulus: u64 },

    #[error(
        "cycle factor x^{length} - z^{corner} has no eigenvalues among the {modulus}-th roots of unity; enlarge the modulus"
    )]
    UnsolvableSpectrum {
        length: usize,
        corner: u64,
        modulus: u64,
    },

    #[error("{n} does not divide {modulus}")]
    NotDivisor { n: u64, modulus: u64 },

    #[error("{r} is not a unit modulo {n}")]
    NonUnit { r: u64, n: u64 },

    #[error("no unit of order {q} modulo {p}^2 ({q} does not divide p(p-1))")]
    NoSuchOrder { p: u64, q: u64 },

    #[error("subset is not closed under multiplication by r: {residue} maps outside")]
    NotClosed { residue: u64 },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid group spec: {0}")]
    InvalidSpec(String),

    #[error("analyzer for case {expected} called on a case {actual} spec")]
    WrongCase { expected: u8, actual: u8 },

    #[error("q = 1 is abelian; use the abelian reduction check")]
    Abelian,

    #[error("condition (SC) fails at orbits with representatives {reps:?}")]
    ScViolated { reps: Vec<usize> },

    #[error("permutation-like group without a permutation basis (q = {q}); this contradicts the theorem")]
    TheoremViolation { q: u64 },

    #[error("cost guard: classify refuses p = {p} without an explicit override")]
    CostGuard { p: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
