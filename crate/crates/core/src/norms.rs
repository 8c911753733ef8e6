//! Supremum norm on the unit circle and the induced norm on processes.
//!
//! The supremum is estimated by sampling `|f(e^{iθ})|` on a uniform grid and
//! doubling the grid until the maximum stabilizes. Refinement only adds
//! points, so successive maxima never decrease and each one is a lower bound
//! for the true supremum (up to the evaluator's own truncation bound).

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{RationalTransfer, RootClass, ON_CIRCLE_TOL};
use crate::series::{ClosedForm, L2Norm, PowerSeries, ProcessSpec, Tail, Transfer};

pub const DEFAULT_GRID_TOL: f64 = 1e-4;
pub const GRID_START: usize = 4096;
pub const GRID_MAX: usize = 1 << 20;
pub const SAFETY_FACTOR: f64 = 2.0;
/// Relative allowance for floating-point error in the sampled values.
pub const ROUNDING_SLACK: f64 = 1e-12;

/// A function that can be sampled on the unit circle.
#[derive(Debug, Clone, PartialEq)]
pub enum Evaluator {
    Series(PowerSeries),
    Rational(RationalTransfer),
    ClosedForm(ClosedForm),
    /// `left − right`
    Difference(Box<Evaluator>, Box<Evaluator>),
}

impl From<PowerSeries> for Evaluator {
    fn from(s: PowerSeries) -> Self {
        Evaluator::Series(s)
    }
}

impl From<RationalTransfer> for Evaluator {
    fn from(r: RationalTransfer) -> Self {
        Evaluator::Rational(r)
    }
}

impl From<ClosedForm> for Evaluator {
    fn from(c: ClosedForm) -> Self {
        Evaluator::ClosedForm(c)
    }
}

impl From<&Transfer> for Evaluator {
    fn from(t: &Transfer) -> Self {
        match t {
            Transfer::Series(s) => Evaluator::Series(s.clone()),
            Transfer::Rational(r) => Evaluator::Rational(r.clone()),
        }
    }
}

impl Evaluator {
    pub fn difference(left: impl Into<Evaluator>, right: impl Into<Evaluator>) -> Self {
        Evaluator::Difference(Box::new(left.into()), Box::new(right.into()))
    }

    /// Checks that the function is continuous on the circle and returns a
    /// uniform bound on the evaluation error there.
    pub fn certify_circle(&self) -> Result<f64> {
        match self {
            Evaluator::Series(s) => match s.tail() {
                Tail::Zero => Ok(0.0),
                Tail::Decay(d) => d.eval_tail(s.order(), 1.0).ok_or(Error::UncertifiedEvaluation { modulus: 1.0 }),
                Tail::Unknown => Err(Error::UncertifiedEvaluation { modulus: 1.0 }),
            },
            Evaluator::Rational(r) => certify_rational(r),
            Evaluator::ClosedForm(cf) => match cf {
                ClosedForm::Geometric(a) => {
                    if RootClass::classify(a.norm(), ON_CIRCLE_TOL) == RootClass::OnCircle {
                        Err(Error::PoleOnCircle { modulus: a.norm().recip() })
                    } else {
                        Ok(0.0)
                    }
                }
                ClosedForm::Log1p(a) => {
                    if a.norm() < 1.0 {
                        Ok(0.0)
                    } else {
                        Err(Error::UncertifiedEvaluation { modulus: 1.0 })
                    }
                }
                ClosedForm::Rational(r) => certify_rational(r),
                ClosedForm::InnerExp => Err(Error::NotContinuousOnCircle),
            },
            Evaluator::Difference(a, b) => Ok(a.certify_circle()? + b.certify_circle()?),
        }
    }

    /// Value at `z`; for series this is the stored partial sum.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        match self {
            Evaluator::Series(s) => Ok(s.partial_sum(z)),
            Evaluator::Rational(r) => r.eval(z),
            Evaluator::ClosedForm(cf) => cf.eval(z),
            Evaluator::Difference(a, b) => Ok(a.eval(z)? - b.eval(z)?),
        }
    }
}

fn certify_rational(r: &RationalTransfer) -> Result<f64> {
    let poles = r.poles(ON_CIRCLE_TOL);
    match poles.roots.iter().find(|p| p.class == RootClass::OnCircle) {
        Some(p) => Err(Error::PoleOnCircle { modulus: p.modulus }),
        None => Ok(0.0),
    }
}

pub fn circle_point(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta)
}

/// Estimate of `sup_{|z|=1} |f(z)|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormEstimate {
    /// Largest sampled modulus.
    pub value: f64,
    pub grid_points: usize,
    /// Increase of the maximum over the last refinement step.
    pub refinement_gap: f64,
    pub argmax_angle: f64,
    /// Uniform bound on the evaluator's truncation error on the circle.
    pub eval_bound: f64,
}

impl NormEstimate {
    /// `value·(1 + ROUNDING_SLACK) + SAFETY_FACTOR·refinement_gap + eval_bound`.
    pub fn upper(&self) -> f64 {
        self.value * (1.0 + ROUNDING_SLACK) + SAFETY_FACTOR * self.refinement_gap + self.eval_bound
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupnormOptions {
    pub tol: f64,
    pub start_points: usize,
    pub max_points: usize,
}

impl Default for SupnormOptions {
    fn default() -> Self {
        Self { tol: DEFAULT_GRID_TOL, start_points: GRID_START, max_points: GRID_MAX }
    }
}

/// Maximum of `|f|` over the angles `2π(offset + stride·i)/size`.
fn grid_max(f: &Evaluator, size: usize, offset: usize, stride: usize) -> Result<(f64, usize)> {
    let count = (size - offset).div_ceil(stride);
    (0..count)
        .into_par_iter()
        .map(|i| {
            let j = offset + stride * i;
            let theta = std::f64::consts::TAU * j as f64 / size as f64;
            Ok((f.eval(circle_point(theta))?.norm(), j))
        })
        .try_reduce(|| (f64::NEG_INFINITY, usize::MAX), |a, b| Ok(pick_max(a, b)))
}

/// Larger value wins, ties go to the smaller index.
fn pick_max(a: (f64, usize), b: (f64, usize)) -> (f64, usize) {
    match a.0.total_cmp(&b.0) {
        std::cmp::Ordering::Greater => a,
        std::cmp::Ordering::Less => b,
        std::cmp::Ordering::Equal => {
            if a.1 <= b.1 {
                a
            } else {
                b
            }
        }
    }
}

pub fn supnorm_circle(f: &Evaluator, tol: f64) -> Result<NormEstimate> {
    supnorm_circle_with(f, &SupnormOptions { tol, ..SupnormOptions::default() })
}

pub fn supnorm_circle_with(f: &Evaluator, opts: &SupnormOptions) -> Result<NormEstimate> {
    let eval_bound = f.certify_circle()?;
    let mut size = opts.start_points.max(1);
    let (mut best, mut index) = grid_max(f, size, 0, 1)?;
    let mut gap = f64::INFINITY;
    while size < opts.max_points {
        let doubled = size * 2;
        // previous points sit at even indices of the doubled grid
        let (fresh, fresh_index) = grid_max(f, doubled, 1, 2)?;
        let (next, next_index) = pick_max((best, index * 2), (fresh, fresh_index));
        gap = next - best;
        best = next;
        index = next_index;
        size = doubled;
        if gap < opts.tol {
            break;
        }
    }
    Ok(NormEstimate {
        value: best,
        grid_points: size,
        refinement_gap: gap,
        argmax_angle: std::f64::consts::TAU * index as f64 / size as f64,
        eval_bound,
    })
}

/// Supnorm of `x − y` on the circle.
pub fn error_supnorm(x: &Evaluator, y: &Evaluator, tol: f64) -> Result<NormEstimate> {
    supnorm_circle(&Evaluator::difference(x.clone(), y.clone()), tol)
}

/// `ℓ²` norm of the Wold coefficients through `order`, with a tail bound.
pub fn process_l2(spec: &ProcessSpec, order: usize) -> Result<L2Norm> {
    Ok(spec.expand(order)?.l2_norm())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ControlReport {
    pub l2: L2Norm,
    pub linf: NormEstimate,
    pub holds: bool,
}

/// Checks `‖X‖₂ ≤ ‖X‖∞` with relative slack `tol` on the upper supnorm estimate.
pub fn check_l2_linf(spec: &ProcessSpec, order: usize, tol: f64) -> Result<ControlReport> {
    let l2 = process_l2(spec, order)?;
    let linf = supnorm_circle(&Evaluator::from(&spec.transfer), DEFAULT_GRID_TOL)?;
    let holds = l2.value <= linf.upper() * (1.0 + tol);
    Ok(ControlReport { l2, linf, holds })
}
