use thiserror::Error;

use crate::tree::Violation;

/// Errors produced by tree construction, parsing and every distance routine.
///
/// Each variant has a stable short code (see [`TreeDistError::code`]) that the
/// command line tool prints alongside the message.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum TreeDistError {
    /// The operation needs a rooted tree.
    #[error("input tree is not rooted")]
    UnrootedInput,
    /// Both trees must agree on rootedness for this operation.
    #[error("rooted and unrooted trees cannot be compared with this metric")]
    RootednessMismatch,
    /// The two trees (or split and tree) are not built over the same labels.
    #[error("label sets differ")]
    LabelSetMismatch,
    /// The edge does not exist in the tree.
    #[error("edge above node {0} not found")]
    EdgeNotFound(usize),
    /// A label that is not a leaf of the tree was requested.
    #[error("unknown label '{0}'")]
    UnknownLabel(String),
    /// Argument outside of the accepted domain.
    #[error("domain error: {0}")]
    DomainError(String),
    /// Malformed Newick text.
    #[error("syntax error at line {line}, column {column}: {message}")]
    SyntaxError {
        line: usize,
        column: usize,
        message: String,
    },
    /// Edge weights must be non-negative.
    #[error("negative edge weight {weight} at line {line}, column {column}")]
    NegativeWeight {
        weight: f64,
        line: usize,
        column: usize,
    },
    /// Leaf labels must be unique.
    #[error("duplicate leaf label '{0}'")]
    DuplicateLabel(String),
    /// No tree in the input.
    #[error("empty input")]
    EmptyInput,
    /// The tree violates one or more structural invariants.
    #[error("invalid tree: {}", describe(.0))]
    InvalidTree(Vec<Violation>),
    /// More than one edge matching exists (raw Robinson-Foulds length).
    #[error(
        "ambiguous edge matching: {functions} matching functions, candidate values {candidates:?}"
    )]
    AmbiguousMatching {
        functions: u128,
        candidates: Vec<f64>,
    },
    /// A quartet needs four labels, a triplet three.
    #[error("expected a subset of size {expected}, got {got}")]
    SubsetSizeMismatch { expected: usize, got: usize },
    /// Weighted metric called on a tree with missing edge weights.
    #[error("input tree is not fully weighted")]
    UnweightedInput,
    /// The refinement loop did not terminate in the expected number of steps.
    #[error("geodesic refinement did not converge after {0} iterations")]
    NonConvergence(usize),
    /// Exact search refused because the instance exceeds the desk-scale limit.
    #[error("instance too large: {what} is {size}, limit {limit}")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },
    /// Correlation is undefined because one side has zero variance.
    #[error("degenerate variance: all cophenetic values are equal")]
    DegenerateVariance,
    /// A tree with zero total edge length.
    #[error("total edge length is zero")]
    ZeroTotalLength,
    /// The regraft target violates the move preconditions.
    #[error("invalid regraft target: {0}")]
    InvalidTarget(String),
    /// The root cannot be pruned.
    #[error("the root cannot be pruned")]
    RootPrune,
    /// The operation needs a binary tree.
    #[error("input tree is not binary")]
    NotBinary,
    /// Contraction would merge two labeled vertices.
    #[error("contracting edge above node {0} would merge two labels")]
    LabelConflict(usize),
    /// Malformed distance matrix input.
    #[error("matrix error: {0}")]
    Matrix(String),
    /// Wrapped I/O failure (stored as text so the error stays `Clone`).
    #[error("i/o error: {0}")]
    Io(String),
}

fn describe(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

impl TreeDistError {
    /// Short, stable diagnostic code.
    pub fn code(&self) -> &'static str {
        use TreeDistError::*;
        match self {
            UnrootedInput => "E_UNROOTED",
            RootednessMismatch => "E_ROOTEDNESS",
            LabelSetMismatch => "E_LABELS",
            EdgeNotFound(_) => "E_EDGE",
            UnknownLabel(_) => "E_UNKNOWN_LABEL",
            DomainError(_) => "E_DOMAIN",
            SyntaxError { .. } => "E_SYNTAX",
            NegativeWeight { .. } => "E_NEGATIVE_WEIGHT",
            DuplicateLabel(_) => "E_DUPLICATE_LABEL",
            EmptyInput => "E_EMPTY",
            InvalidTree(_) => "E_INVALID_TREE",
            AmbiguousMatching { .. } => "E_AMBIGUOUS",
            SubsetSizeMismatch { .. } => "E_SUBSET_SIZE",
            UnweightedInput => "E_UNWEIGHTED",
            NonConvergence(_) => "E_NONCONVERGENCE",
            TooLarge { .. } => "E_TOO_LARGE",
            DegenerateVariance => "E_DEGENERATE",
            ZeroTotalLength => "E_ZERO_LENGTH",
            InvalidTarget(_) => "E_INVALID_TARGET",
            RootPrune => "E_ROOT_PRUNE",
            NotBinary => "E_NOT_BINARY",
            LabelConflict(_) => "E_LABEL_CONFLICT",
            Matrix(_) => "E_MATRIX",
            Io(_) => "E_IO",
        }
    }
}

impl From<std::io::Error> for TreeDistError {
    fn from(e: std::io::Error) -> Self {
        TreeDistError::Io(e.to_string())
    }
}

pub type Result<T, E = TreeDistError> = std::result::Result<T, E>;
