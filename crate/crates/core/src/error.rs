use thiserror::Error;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum Error {
    #[error("invalid homomorphism: {0}")]
    InvalidHomomorphism(String),
    #[error("label `{label}` used with two different types")]
    SignatureMismatch { label: String },
    #[error("generator `{0}` declared twice")]
    DuplicateGenerator(String),
    #[error("morphisms are not composable")]
    NotComposable,
    #[error("interface graph has edges")]
    NonDiscreteInterface,
    #[error("square does not commute")]
    NonCommuting,
    #[error("unsupported rule shape: {0}")]
    UnsupportedRuleShape(String),
    #[error("invalid rule `{0}`: {1}")]
    InvalidRule(String, String),
    #[error("invalid system: {0}")]
    InvalidSystem(String),
    #[error("type error in `{term}`: {msg}")]
    Type { term: String, msg: String },
    #[error("{line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("match is not convex")]
    NonConvexMatch,
    #[error("no boundary complement")]
    NoBoundaryComplement,
    #[error("path relation not realizable: {0}")]
    Unrealizable(String),
    #[error("system is not left-connected ({0}); use the path-extension check instead")]
    NotLeftConnected(String),
}
