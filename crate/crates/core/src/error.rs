use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("linear system has no solution")]
    NoSolution,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("{kind} fails on basis triple ({i}, {j}, {k})")]
    Violation { kind: &'static str, i: usize, j: usize, k: usize },
    #[error("unknown algebra {0:?}")]
    UnknownAlgebra(String),
    #[error("bilinear form is not invariant at ({i}, {j}, {k})")]
    NotInvariant { i: usize, j: usize, k: usize },
    #[error("bilinear form is not symmetric at ({i}, {j})")]
    NotSymmetric { i: usize, j: usize },
    #[error("Lie algebra is not semisimple")]
    NotSemisimple,
    #[error("no neutral element exists: {0}")]
    NotPseudoUnital(String),
    #[error("map is not a derivation at basis pair ({i}, {j})")]
    LeibnizViolation { i: usize, j: usize },
    #[error("not a Lie algebra automorphism: {0}")]
    InvalidAutomorphism(String),
    #[error("invalid bundle data: {0}")]
    InvalidBundle(String),
    #[error("images of kappa do not span the section space ({spanned} of {total})")]
    SpanFailure { spanned: usize, total: usize },
    #[error("cocycles disagree: {0}")]
    Mismatch(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
