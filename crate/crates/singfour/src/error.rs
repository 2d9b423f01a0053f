use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("invalid specification: {0}")]
    InvalidSpec(String),
    #[error("indeterminate: {0} is too close to zero")]
    Indeterminate(&'static str),
    #[error("shift is tangent to singularity {0}")]
    TangentialShift(String),
    #[error("Newton iteration did not converge after {0} iterations")]
    NoConvergence(usize),
    #[error("singularities {0} and {1} do not cross transversally")]
    NonTransversal(String, String),
    #[error("phase gradient is not in the span of the singularity gradients (residual {0:.3e})")]
    DecompositionResidual(f64),
    #[error("gradient matrix of the triple crossing is singular")]
    SingularGradientMatrix,
    #[error("Hessian signature {0:?} is not conical")]
    WrongSignature((usize, usize)),
    #[error("special point has no local frame data")]
    MissingFrame,
    #[error("special point has no contribution verdict")]
    MissingVerdict,
    #[error("exponent {0} is not admissible")]
    UnsupportedExponent(f64),
    #[error("restricted Hessian is degenerate")]
    DegenerateRestrictedHessian,
    #[error("curvature along the crossing line is degenerate (beta = {0:.3e})")]
    DegenerateCurvature(f64),
    #[error("Hessian of the phase is degenerate")]
    DegenerateHessian,
    #[error("degenerate configuration at {0} special point(s)")]
    DegenerateConfiguration(usize),
    #[error("shifted domain passes within {0:.3e} of a singularity")]
    SingularityTooClose(f64),
    #[error("quadrature did not converge (estimate {error:.3e}, value {value:.3e})")]
    NonConvergent { value: f64, error: f64 },
    #[error("pole collision on a quadrature node")]
    PoleCollision,
    #[error("argument {0} is out of range")]
    OutOfRange(f64),
    #[error("wave family {0} is degenerate near the wedge boundary")]
    DegenerateFamily(usize),
    #[error("transient point merges with a crossing point")]
    MergeProximity,
}

impl Error {
    /// Stable identifier, printed by the command-line driver.
    pub fn name(&self) -> &'static str {
        match self {
            Error::NonFinite(_) => "NonFinite",
            Error::InvalidSpec(_) => "InvalidSpec",
            Error::Indeterminate(_) => "Indeterminate",
            Error::TangentialShift(_) => "TangentialShift",
            Error::NoConvergence(_) => "NoConvergence",
            Error::NonTransversal(..) => "NonTransversal",
            Error::DecompositionResidual(_) => "DecompositionResidual",
            Error::SingularGradientMatrix => "SingularGradientMatrix",
            Error::WrongSignature(_) => "WrongSignature",
            Error::MissingFrame => "MissingFrame",
            Error::MissingVerdict => "MissingVerdict",
            Error::UnsupportedExponent(_) => "UnsupportedExponent",
            Error::DegenerateRestrictedHessian => "DegenerateRestrictedHessian",
            Error::DegenerateCurvature(_) => "DegenerateCurvature",
            Error::DegenerateHessian => "DegenerateHessian",
            Error::DegenerateConfiguration(_) => "DegenerateConfiguration",
            Error::SingularityTooClose(_) => "SingularityTooClose",
            Error::NonConvergent { .. } => "NonConvergent",
            Error::PoleCollision => "PoleCollision",
            Error::OutOfRange(_) => "OutOfRange",
            Error::DegenerateFamily(_) => "DegenerateFamily",
            Error::MergeProximity => "MergeProximity",
        }
    }
}
