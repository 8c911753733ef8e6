//! Finite sections of `f(L)`.
//!
//! Acting on the span of the `N` most recent innovations, `f(L)` compresses
//! to the lower-triangular Toeplitz matrix with entries `c_{i−j}`. These
//! matrices form an algebra, their norms increase with `N`, and they are
//! bounded by the supremum of `|f|` on the circle.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::norms::{supnorm_circle, Evaluator, NormEstimate};
use crate::series::{inner_exp_series, ClosedForm, PowerSeries};

/// Largest dimension handled by a dense singular value decomposition.
pub const DENSE_LIMIT: usize = 1024;
pub const POWER_ITERATION_CAP: usize = 100_000;

#[derive(Debug, Clone, PartialEq)]
pub struct ToeplitzTruncation {
    generator: PowerSeries,
    matrix: DMatrix<Complex64>,
}

impl ToeplitzTruncation {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn generator(&self) -> &PowerSeries {
        &self.generator
    }
}

pub fn toeplitz(s: &PowerSeries, dim: usize) -> Result<ToeplitzTruncation> {
    if dim == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    if s.order() + 1 < dim && !s.is_polynomial() {
        return Err(Error::InvalidArgument(format!("series of order {} is too short for dimension {dim}", s.order())));
    }
    let matrix = DMatrix::from_fn(dim, dim, |i, j| if i >= j { s.coeff(i - j) } else { Complex64::new(0.0, 0.0) });
    Ok(ToeplitzTruncation { generator: s.clone(), matrix })
}

/// Largest singular value: dense SVD up to [`DENSE_LIMIT`], power iteration beyond.
pub fn op_norm(t: &ToeplitzTruncation, tol: f64) -> Result<f64> {
    if t.dim() <= DENSE_LIMIT {
        Ok(t.matrix.clone().singular_values().max())
    } else {
        op_norm_power_iteration(t, tol)
    }
}

/// Power iteration on `TᴴT` from the normalized all-ones vector, stopping when
/// the Rayleigh quotient changes by less than `tol` relatively.
pub fn op_norm_power_iteration(t: &ToeplitzTruncation, tol: f64) -> Result<f64> {
    let n = t.dim();
    let mut v = DVector::from_element(n, Complex64::new(1.0 / (n as f64).sqrt(), 0.0));
    let adjoint = t.matrix.adjoint();
    let mut previous = 0.0;
    for _ in 0..POWER_ITERATION_CAP {
        let w = &adjoint * (&t.matrix * &v);
        let rayleigh = v.dotc(&w).re;
        let norm = w.norm();
        if norm == 0.0 {
            return Ok(0.0);
        }
        v = w / Complex64::new(norm, 0.0);
        if (rayleigh - previous).abs() <= tol * rayleigh.abs() {
            return Ok(rayleigh.max(0.0).sqrt());
        }
        previous = rayleigh;
    }
    Err(Error::ConvergenceFailure { iterations: POWER_ITERATION_CAP })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SectionNorm {
    pub dim: usize,
    pub op_norm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralReport {
    pub rows: Vec<SectionNorm>,
    pub supnorm: NormEstimate,
    pub monotone: bool,
    pub bounded: bool,
    /// `supnorm − op_norm` at the largest dimension.
    pub terminal_gap: f64,
}

/// Section norms of `f(L)` for each dimension in `dims`, against the circle supnorm.
pub fn spectral_lemma_check(f: &PowerSeries, dims: &[usize], tol: f64) -> Result<SpectralReport> {
    let supnorm = supnorm_circle(&Evaluator::Series(f.clone()), tol)?;
    let rows = dims
        .iter()
        .map(|&dim| Ok(SectionNorm { dim, op_norm: op_norm(&toeplitz(f, dim)?, 1e-12)? }))
        .collect::<Result<Vec<_>>>()?;
    let slack = 1e-12 * supnorm.value.max(1.0);
    let monotone = rows.windows(2).all(|w| w[1].op_norm >= w[0].op_norm - slack);
    let bounded = rows.iter().all(|r| r.op_norm <= supnorm.upper() + slack);
    let terminal_gap = rows.last().map_or(supnorm.value, |r| supnorm.value - r.op_norm);
    Ok(SpectralReport { rows, supnorm, monotone, bounded, terminal_gap })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PartialSum {
    pub terms: usize,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HinfReport {
    pub order: usize,
    /// `h(0)`
    pub h0: f64,
    /// Minimum of `|h(z) + 2|` over the polar grid of radius 0.999.
    pub min_abs_h_plus_2: f64,
    pub min_location: Complex64,
    /// `Σ_{n≤k} |h_n|`, reported as growth only.
    pub l1_growth: Vec<PartialSum>,
    /// `sqrt(Σ_{n≤K} |h_n|²)`
    pub l2_partial: f64,
}

pub const HINF_GRID_RADIUS: f64 = 0.999;

/// Numerical profile of `h(z) = exp(−(1+z)/(1−z))` and `h + 2`: bounded and
/// bounded away from zero on the disk, yet discontinuous at `z = 1`.
pub fn hinf_counterexample_report(order: usize, grid: usize) -> Result<HinfReport> {
    if order < 64 {
        return Err(Error::InvalidArgument(format!("order must be at least 64, got {order}")));
    }
    if grid == 0 {
        return Err(Error::InvalidArgument("grid must be positive".into()));
    }
    let h = inner_exp_series(order);
    let abs: Vec<f64> = h.coeffs().iter().map(|c| c.norm()).collect();
    let l1_growth = [order / 4, order / 2, order]
        .into_iter()
        .map(|k| PartialSum { terms: k + 1, value: abs[..=k].iter().sum() })
        .collect();
    let l2_partial = abs.iter().map(|a| a * a).sum::<f64>().sqrt();

    let closed = ClosedForm::InnerExp;
    let mut min_abs = f64::INFINITY;
    let mut min_location = Complex64::new(0.0, 0.0);
    for i in 0..=grid {
        let radius = HINF_GRID_RADIUS * i as f64 / grid as f64;
        let angles = if i == 0 { 1 } else { grid };
        for j in 0..angles {
            let z = Complex64::from_polar(radius, std::f64::consts::TAU * j as f64 / grid as f64);
            let value = (closed.eval(z)? + 2.0).norm();
            if value < min_abs {
                min_abs = value;
                min_location = z;
            }
        }
    }

    Ok(HinfReport { order, h0: h.coeff(0).re, min_abs_h_plus_2: min_abs, min_location, l1_growth, l2_partial })
}
