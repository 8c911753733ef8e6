//! ARMA recurrences and their rational transfer functions.
//!
//! A model `q(L)Y_t = p(L)ε_t` is stored as the denominator coefficients
//! `q_1..q_N` (with `q_0 = 1`) and numerator coefficients `p_0..p_M`, exactly
//! as they appear in the polynomials. The recurrence
//! `Y_t = Σ_{j≥1} −q_j Y_{t−j} + Σ_{j≥0} p_j ε_{t−j}` negates `q_j` when it
//! runs, never in storage.

use std::io::Write;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{Polynomial, RationalTransfer};
use crate::series::{L2Norm, PowerSeries, ProcessSpec};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArmaModel {
    /// `q_1..q_N`
    ar: Vec<Complex64>,
    /// `p_0..p_M`
    ma: Vec<Complex64>,
    innovation_variance: f64,
    stationary: bool,
}

impl ArmaModel {
    /// Reads the recurrence coefficients off `p/q` literally.
    pub fn from_rational(r: &RationalTransfer) -> Self {
        Self {
            ar: r.den().coeffs().iter().skip(1).copied().collect(),
            ma: r.num().coeffs().to_vec(),
            innovation_variance: 1.0,
            stationary: r.is_stationary().holds,
        }
    }

    /// Builds a model from `q_1..q_N` and `p_0..p_M`, cancelling common factors.
    pub fn new(ar: &[Complex64], ma: &[Complex64]) -> Result<Self> {
        let mut den = vec![Complex64::new(1.0, 0.0)];
        den.extend_from_slice(ar);
        let r = RationalTransfer::new(Polynomial::new(ma.to_vec()), Polynomial::new(den))?;
        Ok(Self::from_rational(&r))
    }

    pub fn from_real(ar: &[f64], ma: &[f64]) -> Result<Self> {
        let c = |v: &[f64]| v.iter().map(|&x| Complex64::new(x, 0.0)).collect::<Vec<_>>();
        Self::new(&c(ar), &c(ma))
    }

    pub fn with_innovation_variance(mut self, variance: f64) -> Self {
        self.innovation_variance = variance;
        self
    }

    pub fn to_rational(&self) -> RationalTransfer {
        let mut den = vec![Complex64::new(1.0, 0.0)];
        den.extend_from_slice(&self.ar);
        RationalTransfer::new(Polynomial::new(self.ma.clone()), Polynomial::new(den))
            .expect("denominator has unit constant term")
    }

    pub fn ar(&self) -> &[Complex64] {
        &self.ar
    }

    pub fn ma(&self) -> &[Complex64] {
        &self.ma
    }

    pub fn innovation_variance(&self) -> f64 {
        self.innovation_variance
    }

    pub fn is_stationary(&self) -> bool {
        self.stationary
    }

    pub fn is_real(&self) -> bool {
        self.ar.iter().chain(&self.ma).all(|c| c.im == 0.0)
    }

    /// `max(N, M)`
    pub fn order(&self) -> usize {
        self.ar.len().max(self.ma.len().saturating_sub(1))
    }

    pub fn default_burn_in(&self) -> usize {
        10 * self.order() + 100
    }

    /// Wold coefficients `ψ_0..ψ_K` of `Y_t = Σ ψ_j ε_{t−j}`.
    pub fn wold_coeffs(&self, order: usize) -> Result<PowerSeries> {
        if !self.stationary {
            return Err(Error::NonStationaryModel);
        }
        Ok(self.to_rational().taylor(order))
    }

    /// The recurrence in text form, e.g. `Y_t = -0.25 Y_{t-1} + 0.5 e_{t-1}`.
    pub fn recurrence(&self) -> String {
        let ar = self.ar.iter().enumerate().map(|(j, q)| (-q, format!("Y_{{t-{}}}", j + 1)));
        let ma = self.ma.iter().enumerate().map(|(j, p)| {
            let lag = if j == 0 { "e_t".to_string() } else { format!("e_{{t-{j}}}") };
            (*p, lag)
        });
        let mut out = String::from("Y_t =");
        let mut first = true;
        for (coeff, term) in ar.chain(ma).filter(|(c, _)| *c != Complex64::new(0.0, 0.0)) {
            let (sign, magnitude) = if coeff.im == 0.0 && coeff.re < 0.0 { ('-', -coeff) } else { ('+', coeff) };
            match (first, sign) {
                (true, '-') => out.push_str(&format!(" -{} {term}", fmt_coeff(magnitude))),
                (true, _) => out.push_str(&format!(" {} {term}", fmt_coeff(magnitude))),
                (false, s) => out.push_str(&format!(" {s} {} {term}", fmt_coeff(magnitude))),
            }
            first = false;
        }
        if first {
            out.push_str(" 0");
        }
        out
    }
}

fn fmt_coeff(c: Complex64) -> String {
    if c.im == 0.0 {
        format!("{}", c.re)
    } else {
        format!("({}{:+}i)", c.re, c.im)
    }
}

/// Coefficient-space `‖A − B‖₂` through order `K`, with the sum of the two
/// processes' tail bounds when both are available.
pub fn l2_distance(a: &ProcessSpec, b: &ProcessSpec, order: usize) -> Result<L2Norm> {
    let sa = a.expand(order)?;
    let sb = b.expand(order)?;
    let value = (0..=order).map(|n| (sa.coeff(n) - sb.coeff(n)).norm_sqr()).sum::<f64>().sqrt();
    let tail_bound = match (sa.l2_norm().tail_bound, sb.l2_norm().tail_bound) {
        (Some(x), Some(y)) => Some(x + y),
        _ => None,
    };
    Ok(L2Norm { value, tail_bound })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PredictionReport {
    /// `σ(Ŷ − Y) = |y_0|`
    pub model_prediction_error: f64,
    /// `‖Y − X‖₂`
    pub approximation_error: L2Norm,
    /// `σ(Ŷ − X) = sqrt(|x_0|² + Σ_{j≥1} |y_j − x_j|²)`
    pub total_prediction_error: f64,
    /// `σ(Ŷ − Y) + ‖Y − X‖₂ − σ(Ŷ − X)`
    pub slack: f64,
    pub holds: bool,
}

/// Splits the error of predicting `X` with the one-step predictor of the
/// model `Y`, assuming both are driven by the same innovations.
pub fn prediction_decomposition(x: &ProcessSpec, y: &ProcessSpec, order: usize) -> Result<PredictionReport> {
    let sx = x.expand(order)?;
    let sy = y.expand(order)?;
    let model_prediction_error = sy.coeff(0).norm();
    let approximation_error = l2_distance(x, y, order)?;
    let total_prediction_error =
        (sx.coeff(0).norm_sqr() + (1..=order).map(|j| (sy.coeff(j) - sx.coeff(j)).norm_sqr()).sum::<f64>()).sqrt();
    let slack = model_prediction_error + approximation_error.value - total_prediction_error;
    Ok(PredictionReport {
        model_prediction_error,
        approximation_error,
        total_prediction_error,
        slack,
        holds: slack >= -1e-12,
    })
}

/// Sample path of length `len` after discarding `burn_in` steps, driven by
/// seeded standard normal innovations scaled to the model's variance.
pub fn simulate(model: &ArmaModel, len: usize, burn_in: usize, seed: u64) -> Result<Vec<f64>> {
    if !model.stationary {
        return Err(Error::NonStationaryModel);
    }
    if !model.is_real() {
        return Err(Error::InvalidArgument("simulation requires real coefficients".into()));
    }
    let ar: Vec<f64> = model.ar.iter().map(|c| c.re).collect();
    let ma: Vec<f64> = model.ma.iter().map(|c| c.re).collect();
    let sd = model.innovation_variance.sqrt();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let total = burn_in + len;
    let mut eps = Vec::with_capacity(total);
    let mut y = Vec::with_capacity(total);
    for t in 0..total {
        let e: f64 = StandardNormal.sample(&mut rng);
        eps.push(sd * e);
        let mut value = 0.0;
        for (j, q) in ar.iter().enumerate() {
            if t > j {
                value -= q * y[t - j - 1];
            }
        }
        for (j, p) in ma.iter().enumerate() {
            if t >= j {
                value += p * eps[t - j];
            }
        }
        y.push(value);
    }
    Ok(y.split_off(burn_in))
}

/// Single-column CSV with header `y`.
pub fn write_path_csv<W: Write>(path: &[f64], mut out: W) -> std::io::Result<()> {
    writeln!(out, "y")?;
    for v in path {
        writeln!(out, "{v}")?;
    }
    Ok(())
}
