use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("singular curve: discriminant is zero")]
    SingularCurve,
    #[error("point is not on the curve")]
    PointNotOnCurve,
    #[error("model is not minimal at {0}")]
    NotMinimal(String),
    #[error("conductor is 1, Szpiro ratio undefined")]
    DegenerateSzpiro,
    #[error("invalid kernel: {0}")]
    InvalidKernel(String),
    #[error("kernel polynomial has non-rational coefficients")]
    NonRationalKernel,
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("degrees are not coprime")]
    NonCoprimeDegrees,
    #[error("point reduces to the identity at {0}")]
    ReducesToIdentity(String),
    #[error("point is the identity")]
    IdentityPoint,
    #[error("point is torsion")]
    TorsionPoint,
    #[error("point is in the kernel of the isogeny")]
    KernelPoint,
    #[error("precision too low: {0}")]
    DivergencePrecision(String),
    #[error("point lies on the bounded real component")]
    BoundedComponent,
    #[error("point lies on the unbounded real component")]
    UnboundedComponent,
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("every prime of the denominator lies in the base set (S-integral multiple)")]
    FirstAlternative,
    #[error("invalid A: {0}")]
    InvalidA(String),
    #[error("m must be odd")]
    EvenM,
    #[error("point is not on the bounded component")]
    NotOnBoundedComponent,
    #[error("factoring budget exhausted: {0}")]
    BudgetExhausted(String),
    #[error("a claimed composite tested prime: {0}")]
    CompositenessContradiction(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable name.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::SingularCurve => "SingularCurve",
            Error::PointNotOnCurve => "PointNotOnCurve",
            Error::NotMinimal(_) => "NotMinimal",
            Error::DegenerateSzpiro => "DegenerateSzpiro",
            Error::InvalidKernel(_) => "InvalidKernel",
            Error::NonRationalKernel => "NonRationalKernel",
            Error::DomainMismatch(_) => "DomainMismatch",
            Error::NonCoprimeDegrees => "NonCoprimeDegrees",
            Error::ReducesToIdentity(_) => "ReducesToIdentity",
            Error::IdentityPoint => "IdentityPoint",
            Error::TorsionPoint => "TorsionPoint",
            Error::KernelPoint => "KernelPoint",
            Error::DivergencePrecision(_) => "DivergencePrecision",
            Error::BoundedComponent => "BoundedComponent",
            Error::UnboundedComponent => "UnboundedComponent",
            Error::HypothesisViolated(_) => "HypothesisViolated",
            Error::PreconditionViolated(_) => "PreconditionViolated",
            Error::FirstAlternative => "FirstAlternative",
            Error::InvalidA(_) => "InvalidA",
            Error::EvenM => "EvenM",
            Error::NotOnBoundedComponent => "NotOnBoundedComponent",
            Error::BudgetExhausted(_) => "BudgetExhausted",
            Error::CompositenessContradiction(_) => "CompositenessContradiction",
            Error::Parse(_) => "Parse",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
