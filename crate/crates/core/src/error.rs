use thiserror::Error;

/// Failures raised by the quaternion polynomial algorithms.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by a quaternion that is zero under the current tolerance")]
    ZeroDivision,
    #[error("division by the zero polynomial")]
    ZeroDivisor,
    #[error("class ({trace}, {norm2}) has no rational representative re + m*i")]
    IrrationalRepresentative { trace: String, norm2: String },
    #[error("f*f# has an imaginary residue of {residue:e}")]
    NonRealResult { residue: f64 },
    #[error("root iteration did not converge in {iterations} steps")]
    NoConvergence { iterations: usize },
    #[error("left/right evaluations are degenerate for this class")]
    DegenerateEvaluations,
    #[error("f*f# does not split into rational linear and quadratic factors; use the float backend")]
    NeedsFloatBackend,
    #[error("chain extraction broke at step {step}: no zero of the intermediate quotient in the class")]
    ChainBroken { step: usize },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("factors are not coprime: they share the left zero {0}")]
    NotCoprime(String),
    #[error("factors lie in different conjugacy classes")]
    ClassMismatch,
    #[error("two factors share the conjugacy class ({0})")]
    ClassCollision(String),
    #[error("1 - 2Re(a)g + |a|^2 g^2 is singular")]
    SingularUpsilon,
    #[error("pivot of the completion recursion vanished at step {step}")]
    SingularPivot { step: usize },
    #[error("the two phase formulas disagree by {0:e}")]
    InconsistentPhase(f64),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
