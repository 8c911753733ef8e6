use thiserror::Error;

use crate::approx::ApproxResult;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The constant term vanishes, so no inverse exists in the algebra of power series.
    #[error("not invertible: constant term is zero")]
    NotInvertibleAtOrigin,

    #[error("denominator vanishes at the origin")]
    ZeroDenominatorAtOrigin,

    #[error("no certified tail bound for evaluation at |z| = {modulus}")]
    UncertifiedEvaluation { modulus: f64 },

    #[error("function is not continuous on the unit circle")]
    NotContinuousOnCircle,

    #[error("Padé denominator system is singular (condition number {condition:e})")]
    SingularPadeSystem { condition: f64 },

    #[error("polynomial has degree 0, no roots to report")]
    EmptyReport,

    #[error("evaluation hit a pole at z = {re} + {im}i")]
    PoleHit { re: f64, im: f64 },

    #[error("denominator has a root on the unit circle (modulus {modulus})")]
    PoleOnCircle { modulus: f64 },

    #[error("initial candidate is infeasible: {0}")]
    InfeasibleInit(String),

    #[error("evaluation budget exhausted before convergence")]
    BudgetExhausted { best: Box<ApproxResult> },

    #[error("model is not stationary")]
    NonStationaryModel,

    #[error("iteration did not converge within {iterations} iterations")]
    ConvergenceFailure { iterations: usize },
}
