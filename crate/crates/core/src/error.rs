use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the engine can report.
///
/// [`Error::is_internal`] separates internal-consistency defects from
/// validation failures; the CLI maps the two onto distinct exit codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid denominator: must be positive")]
    InvalidDenominator,
    #[error("invalid invariant literal `{0}`")]
    InvalidLiteral(String),
    #[error("invalid local field descriptor: {0}")]
    InvalidDescriptor(String),
    #[error("requested {requested} extensions but only {available} are guaranteed")]
    InsufficientExtensions { requested: u64, available: u64 },
    #[error("invariants sum to {0}, not 0 in Q/Z")]
    NotInBrauerGroup(String),
    #[error("invalid local invariant at place `{place}`: {reason}")]
    InvalidLocalInvariant { place: String, reason: String },
    #[error("invalid extension: {0}")]
    InvalidExtension(String),
    #[error("unrealizable request: {0}")]
    UnrealizableRequest(String),
    #[error("lemma preconditions failed: {0}")]
    LemmaPreconditionsFailed(String),
    #[error("construction failed: {0}")]
    ConstructionFailed(String),
    #[error("invalid target: {0}")]
    InvalidTarget(String),
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("operation unsupported for abstract base fields")]
    UnsupportedForAbstract,
    #[error("invalid flags: {0}")]
    InvalidFlags(String),
    #[error("invalid index: {0}")]
    InvalidIndex(String),
    #[error("invalid hypotheses: {0}")]
    InvalidHypotheses(String),
    #[error("no proper subextension: {0}")]
    NoProperSubextension(String),
    #[error("field `{0}` is not in A(Y)")]
    NotInAY(String),
    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),
}

impl Error {
    /// Stable kebab-case identifier used in machine-readable output.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidDenominator => "invalid-denominator",
            Error::InvalidLiteral(_) => "invalid-literal",
            Error::InvalidDescriptor(_) => "invalid-descriptor",
            Error::InsufficientExtensions { .. } => "insufficient-extensions",
            Error::NotInBrauerGroup(_) => "not-in-brauer-group",
            Error::InvalidLocalInvariant { .. } => "invalid-local-invariant",
            Error::InvalidExtension(_) => "invalid-extension",
            Error::UnrealizableRequest(_) => "unrealizable-request",
            Error::LemmaPreconditionsFailed(_) => "lemma-preconditions-failed",
            Error::ConstructionFailed(_) => "construction-failed",
            Error::InvalidTarget(_) => "invalid-target",
            Error::InvalidAlgebra(_) => "invalid-algebra",
            Error::UnsupportedForAbstract => "unsupported-for-abstract",
            Error::InvalidFlags(_) => "invalid-flags",
            Error::InvalidIndex(_) => "invalid-index",
            Error::InvalidHypotheses(_) => "invalid-hypotheses",
            Error::NoProperSubextension(_) => "no-proper-subextension",
            Error::NotInAY(_) => "not-in-AY",
            Error::BudgetExceeded(_) => "budget-exceeded",
        }
    }

    pub fn is_internal(&self) -> bool {
        matches!(self, Error::ConstructionFailed(_))
    }
}
