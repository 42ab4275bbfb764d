use thiserror::Error;

/// Failures of truncated-series arithmetic.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum JetError {
    #[error("division by a jet whose constant term is zero")]
    DivisionByZeroJet,
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("jet order exhausted")]
    OrderExhausted,
    #[error("basepoint mismatch: inner series starts at {inner}, outer is centered at {outer}")]
    BasepointMismatch { inner: f64, outer: f64 },
    #[error("linear part is singular (|det| = {det:e})")]
    SingularLinearPart { det: f64 },
    #[error("value is not representable exactly: {0}")]
    Inexact(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
}

/// Failures of the group-action layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GroupError {
    #[error("hamiltonian has (weighted) degree {0}, at most 2 is allowed")]
    DegreeError(u32),
    #[error("transformed submanifold is not a graph over the same independent variables")]
    GraphDegeneracy,
    #[error("orbit rank unstable across resampled jets: {0:?}")]
    NonGenericSample(Vec<usize>),
    #[error("unsupported combination: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Jet(#[from] JetError),
}

/// Failures while evaluating differential invariants at a jet.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum InvariantError {
    #[error("degenerate jet: {0}")]
    DegenerateJet(&'static str),
    #[error("invariant derivations are dependent at this jet")]
    FrameDegeneracy,
    #[error("normalization singular at step {0}")]
    NormalizationSingular(usize),
    #[error("canonical frame step {0} is degenerate")]
    StepDegenerate(usize),
    #[error("tangent plane is Lagrangian (omega restricted to it vanishes)")]
    LagrangianTangent,
    #[error("quadratic form Q1 is degenerate")]
    DegenerateQ1,
    #[error("sigma_1 vanishes on the normal part of the position vector")]
    SigmaDegenerate,
    #[error("weight normalization divides by a vanishing invariant: {0}")]
    WeightNormalizationSingular(&'static str),
    #[error("basepoint lies on the zero level set of I0 = 2z - xy")]
    OnZeroLevelSet,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Failures of the expression front-end.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExprError {
    #[error("syntax error at byte {offset}: {message}")]
    SyntaxError { offset: usize, message: String },
    #[error("unknown function `{name}` at byte {offset}")]
    UnknownFunction { name: String, offset: usize },
    #[error("function `{name}` takes 1 argument, got {got} (byte {offset})")]
    ArityError { name: String, got: usize, offset: usize },
    #[error("unsupported exponent at byte {offset}: {message}")]
    ExponentError { offset: usize, message: String },
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error(transparent)]
    Jet(#[from] JetError),
}

/// Failures of signature construction and comparison.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SignatureError {
    #[error("all {0} samples were degenerate")]
    AllSamplesDegenerate(usize),
    #[error("clouds are not comparable: {0}")]
    IncomparableClouds(String),
    #[error("invalid submanifold: {0}")]
    Invalid(String),
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
}
