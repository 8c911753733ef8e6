//! ARMA models as rational approximations of Hardy-space transfer functions.
//!
//! A purely nondeterministic stationary process `X_t = Σ x_j ε_{t−j}` is
//! identified with its transfer function `x(z) = Σ x_j zʲ`, and an ARMA
//! model with a rational `p(z)/q(z)`. The modules here provide the pieces
//! needed to measure how well one approximates the other:
//!
//! - [`series`]: truncated power series with certified tails
//! - [`rational`]: rational transfer functions, Padé approximants, root tests
//! - [`norms`]: supremum norm on the unit circle and `ℓ²` norms of processes
//! - [`approx`]: circle-optimal rational approximation and truncation baselines
//! - [`arma`]: the ARMA recurrence dictionary, prediction errors, simulation
//! - [`operator`]: finite Toeplitz sections of `f(L)`

pub mod approx;
pub mod arma;
pub mod error;
pub mod norms;
pub mod operator;
pub mod optim;
pub mod rational;
pub mod sampling;
pub mod series;

pub use approx::{optimize_supnorm, truncation_baseline, ApproxResult, OptimizeOptions};
pub use arma::ArmaModel;
pub use error::{Error, Result};
pub use norms::{error_supnorm, supnorm_circle, Evaluator, NormEstimate};
pub use rational::{pade, roots, Polynomial, RationalTransfer, RootClass, RootReport};
pub use series::{ClosedForm, PowerSeries, ProcessSpec, Transfer};

pub use num_complex::Complex64;
