use std::fmt;

use thiserror::Error;

/// Which resolvent argument hit a pole.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PoleSide {
    X,
    Y,
}

impl fmt::Display for PoleSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PoleSide::X => f.write_str("x"),
            PoleSide::Y => f.write_str("y"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("eigenvalues {i} and {j} coincide within tolerance")]
    CoincidentEigenvalues { i: usize, j: usize },
    #[error("eigenvalue {i} is zero, which family {family} does not admit")]
    ZeroEigenvalue { i: usize, family: String },
    #[error("eigenvalue {i} is not finite")]
    NonFiniteEigenvalue { i: usize },
    #[error("expected {expected} values, got {got}")]
    RankMismatch { expected: usize, got: usize },
    #[error("spectra belong to different families ({0} vs {1})")]
    FamilyMismatch(String, String),
    #[error("operation not supported for family {0}")]
    UnsupportedFamily(String),
    #[error("embedding {kind} is incompatible with family {family}")]
    IncompatibleEmbedding { kind: String, family: String },
    #[error("malformed tetrad: {0}")]
    MalformedTetrad(String),
    #[error("not a permutation: {0}")]
    MalformedPermutation(String),
    #[error("rank R={r} exceeds the configured maximum {max}")]
    RankTooLarge { r: usize, max: usize },
    #[error("pole at {side}[{index}] with sign {sign:+}: |denominator| = {modulus:e}")]
    Pole {
        side: PoleSide,
        index: usize,
        sign: i8,
        modulus: f64,
    },
    #[error("grid cells ({a}) and ({b}) do not commute: residual {residual:e}")]
    NonCommuting { a: usize, b: usize, residual: f64 },
    #[error("singular denominator determinant ({0:e})")]
    SingularDenominator(f64),
    #[error("singular resolvent at spectral point {0}")]
    SingularResolvent(String),
    #[error("matrix size {n} does not fit the {form} form here")]
    ParityMismatch { form: String, n: usize },
    #[error("spectral points are required for the odd initial condition")]
    MissingPoints,
    #[error("Wick word has odd length {0}")]
    OddWord(usize),
    #[error("Wick word of length {len} exceeds the limit {max}")]
    WordTooLong { len: usize, max: usize },
    #[error("coupling must be 1/2 for direct evaluation, got {0}; use the rescaled route")]
    CouplingNotHalf(f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
