use serde_json::{json, Value};
use thiserror::Error;

/// Which brace axiom a validation witness violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axiom {
    AdditiveGroup,
    LambdaBijective,
    LambdaAdditive,
    MultiplicativeGroup,
    LambdaHomomorphism,
    LeftBraceLaw,
}

impl Axiom {
    pub fn name(self) -> &'static str {
        match self {
            Axiom::AdditiveGroup => "additive_group",
            Axiom::LambdaBijective => "lambda_bijective",
            Axiom::LambdaAdditive => "lambda_additive",
            Axiom::MultiplicativeGroup => "multiplicative_group",
            Axiom::LambdaHomomorphism => "lambda_homomorphism",
            Axiom::LeftBraceLaw => "left_brace_law",
        }
    }
}

impl std::fmt::Display for Axiom {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    Malformed(String),

    /// `side` is "lambda" (row `index` of ^x y) or "rho" (column `index` of x^y);
    /// `hits` are two preimages with the same image.
    #[error("{side} map at {index} is not a bijection: {hits:?} collide")]
    NotABijection {
        side: &'static str,
        index: usize,
        hits: (usize, usize),
    },

    #[error("r is not involutive at ({0}, {1})")]
    NotInvolutive(usize, usize),

    #[error("braid relation fails at ({0}, {1}, {2})")]
    YbeViolation(usize, usize, usize),

    #[error("subset is not invariant: pair ({0}, {1}) leaves it")]
    NotInvariant(usize, usize),

    #[error("size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),

    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),

    #[error("index {index} out of range for size {size}")]
    IndexOutOfRange { index: usize, size: usize },

    #[error("cap of {cap} exceeded after {reached} elements")]
    CapExceeded { cap: usize, reached: usize },

    #[error("brace axiom {axiom} violated at {witness:?}")]
    AxiomViolation { axiom: Axiom, witness: Vec<usize> },

    #[error("subset is not an ideal")]
    NotAnIdeal,

    #[error("element {0} is not quasi-regular")]
    NotRadical(usize),

    #[error("right brace law fails at ({0}, {1}, {2})")]
    NotTwoSided(usize, usize, usize),

    #[error("brace has no uniform coordinate basis")]
    NoCoordinates,

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Stable machine-readable code for diagnostics.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Malformed(_) => "Malformed",
            Error::NotABijection { .. } => "NotABijection",
            Error::NotInvolutive(..) => "NotInvolutive",
            Error::YbeViolation(..) => "YBEViolation",
            Error::NotInvariant(..) => "NotInvariant",
            Error::SizeMismatch(..) => "SizeMismatch",
            Error::DegreeMismatch(..) => "DegreeMismatch",
            Error::IndexOutOfRange { .. } => "IndexOutOfRange",
            Error::CapExceeded { .. } => "CapExceeded",
            Error::AxiomViolation { .. } => "AxiomViolation",
            Error::NotAnIdeal => "NotAnIdeal",
            Error::NotRadical(_) => "NotRadical",
            Error::NotTwoSided(..) => "NotTwoSided",
            Error::NoCoordinates => "NoCoordinates",
            Error::InternalInconsistency(_) => "InternalInconsistency",
        }
    }

    pub fn witness(&self) -> Value {
        match self {
            Error::Malformed(msg) | Error::InternalInconsistency(msg) => json!(msg),
            Error::NotABijection { side, index, hits } => {
                json!({"side": side, "index": index, "collide": [hits.0, hits.1]})
            }
            Error::NotInvolutive(x, y) | Error::NotInvariant(x, y) => json!([x, y]),
            Error::YbeViolation(x, y, z) | Error::NotTwoSided(x, y, z) => json!([x, y, z]),
            Error::SizeMismatch(a, b) | Error::DegreeMismatch(a, b) => json!([a, b]),
            Error::IndexOutOfRange { index, size } => json!({"index": index, "size": size}),
            Error::CapExceeded { cap, reached } => json!({"cap": cap, "reached": reached}),
            Error::AxiomViolation { axiom, witness } => {
                json!({"axiom": axiom.name(), "elements": witness})
            }
            Error::NotRadical(a) => json!(a),
            Error::NotAnIdeal | Error::NoCoordinates => Value::Null,
        }
    }

    /// `{"error": code, "witness": ...}`
    pub fn diagnostic(&self) -> Value {
        json!({"error": self.code(), "witness": self.witness()})
    }
}
