//! Rational approximation of transfer functions.
//!
//! [`optimize_supnorm`] searches real `(m, n)` rationals for the smallest
//! error on the unit circle, starting from a feasible candidate (typically
//! the Padé approximant). [`truncation_baseline`] gives the moving-average
//! comparison point, and [`conjecture_explorer`] tabulates both against the
//! process `log(1 + L)ε_t`, whose transfer function has a branch point on
//! the circle.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::norms::{circle_point, error_supnorm, Evaluator, NormEstimate, DEFAULT_GRID_TOL};
use crate::optim::{nelder_mead, NelderMeadOptions, NelderMeadOutcome};
use crate::rational::{horner, pade, roots, Polynomial, RationalTransfer, ON_CIRCLE_TOL};
use crate::series::{inverse_square_tail, L2Norm, PowerSeries, Tail};

pub const DEFAULT_RESTARTS: usize = 8;
pub const DEFAULT_BUDGET: usize = 2000;
pub const DEFAULT_SIMPLEX_SCALE: f64 = 0.05;
pub const POLE_MARGIN: f64 = 1e-3;
pub const PENALTY_WEIGHT: f64 = 1e3;
pub const CONJECTURE_EXPANSION: usize = 4096;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApproxResult {
    pub candidate: RationalTransfer,
    /// `None` when the target cannot be evaluated on the circle.
    pub sup_error: Option<NormEstimate>,
    /// Coefficient-space distance to the target, when the target has known coefficients.
    pub l2_error: Option<L2Norm>,
    pub iterations: usize,
    /// Every pole has modulus at least `1 + POLE_MARGIN`.
    pub feasible: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizeOptions {
    /// Objective evaluations per restart.
    pub budget: usize,
    pub restarts: usize,
    pub seed: u64,
    pub simplex_scale: f64,
    pub pole_margin: f64,
    /// Points of the fixed grid the optimizer minimizes over.
    pub objective_grid: usize,
    /// Tolerance of the final adaptive supnorm estimate.
    pub grid_tol: f64,
    /// Order of the coefficient-space comparison.
    pub l2_order: usize,
}

impl Default for OptimizeOptions {
    fn default() -> Self {
        Self {
            budget: DEFAULT_BUDGET,
            restarts: DEFAULT_RESTARTS,
            seed: 42,
            simplex_scale: DEFAULT_SIMPLEX_SCALE,
            pole_margin: POLE_MARGIN,
            objective_grid: 2048,
            grid_tol: DEFAULT_GRID_TOL,
            l2_order: 256,
        }
    }
}

/// `min |pole| − 1`, infinite for polynomials.
fn pole_excess(den: &[f64]) -> f64 {
    let poly = Polynomial::from_real(den);
    match roots(&poly, ON_CIRCLE_TOL) {
        Ok(report) => report.min_modulus().map_or(f64::INFINITY, |m| m - 1.0),
        Err(_) => f64::INFINITY,
    }
}

pub fn is_feasible(candidate: &RationalTransfer, margin: f64) -> bool {
    candidate.min_pole_modulus().is_none_or(|m| m >= 1.0 + margin)
}

/// Real parameter vector `[p_0..p_m, q_1..q_n]`.
fn encode(r: &RationalTransfer, m: usize, n: usize) -> Vec<f64> {
    let mut x: Vec<f64> = (0..=m).map(|k| r.num().coeff(k).re).collect();
    x.extend((1..=n).map(|k| r.den().coeff(k).re));
    x
}

fn split(x: &[f64], m: usize) -> (Vec<f64>, Vec<f64>) {
    let num = x[..=m].to_vec();
    let mut den = vec![1.0];
    den.extend_from_slice(&x[m + 1..]);
    (num, den)
}

fn decode(x: &[f64], m: usize) -> Result<RationalTransfer> {
    let (num, den) = split(x, m);
    RationalTransfer::from_real(&num, &den)
}

/// Coefficients of the target through `order`, if they are known.
fn target_series(target: &Evaluator, order: usize) -> Option<PowerSeries> {
    match target {
        Evaluator::Series(s) => s.truncate(order.min(s.order())).ok(),
        Evaluator::Rational(r) => Some(r.taylor(order)),
        Evaluator::ClosedForm(cf) => cf.coeffs(order).ok(),
        Evaluator::Difference(..) => None,
    }
}

fn coefficient_distance(target: &Evaluator, candidate: &RationalTransfer, order: usize) -> Option<L2Norm> {
    let t = target_series(target, order)?;
    let c = candidate.taylor(t.order());
    Some(t.sub(&c).l2_norm())
}

fn restart_start(init: &[f64], restart: usize, seed: u64, scale: f64) -> Vec<f64> {
    if restart == 0 {
        return init.to_vec();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(restart as u64));
    init.iter().map(|v| v + rng.random_range(-scale..scale)).collect()
}

/// Best restart by objective value, earliest restart on ties.
fn merge_restarts(outcomes: Vec<NelderMeadOutcome>) -> (NelderMeadOutcome, bool) {
    let any_converged = outcomes.iter().any(|o| o.converged);
    let best = outcomes.into_iter().reduce(|a, b| if b.value < a.value { b } else { a }).expect("at least one restart");
    (best, any_converged)
}

/// Minimizes the circle error `sup |target − p/q|` over real `(m, n)` rationals.
pub fn optimize_supnorm(
    target: &Evaluator,
    m: usize,
    n: usize,
    init: &RationalTransfer,
    opts: &OptimizeOptions,
) -> Result<ApproxResult> {
    target.certify_circle()?;
    let (dm, dn) = init.degrees();
    if dm > m || dn > n {
        return Err(Error::InfeasibleInit(format!("init has degrees ({dm}, {dn}), exceeding ({m}, {n})")));
    }
    if !init.is_real() {
        return Err(Error::InfeasibleInit("init has complex coefficients".into()));
    }
    if !is_feasible(init, opts.pole_margin) {
        return Err(Error::InfeasibleInit("init has a pole inside the margin".into()));
    }

    let grid: Vec<Complex64> = (0..opts.objective_grid)
        .map(|j| circle_point(std::f64::consts::TAU * j as f64 / opts.objective_grid as f64))
        .collect();
    let values: Vec<Complex64> = grid.iter().map(|z| target.eval(*z)).collect::<Result<_>>()?;

    let circle_error = |x: &[f64]| -> f64 {
        let (num, den) = split(x, m);
        let num: Vec<Complex64> = num.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        let den: Vec<Complex64> = den.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        let mut worst: f64 = 0.0;
        for (z, t) in grid.iter().zip(&values) {
            let q = horner(&den, *z);
            if q.norm() < 1e-14 {
                return f64::INFINITY;
            }
            worst = worst.max((t - horner(&num, *z) / q).norm());
        }
        worst
    };

    let x0 = encode(init, m, n);
    let scale = circle_error(&x0).max(1e-3);
    let objective = |x: &[f64]| -> f64 {
        let excess = pole_excess(&split(x, m).1);
        let penalty = PENALTY_WEIGHT * scale * (opts.pole_margin - excess).max(0.0);
        circle_error(x) + penalty
    };

    let nm =
        NelderMeadOptions { max_evals: opts.budget, simplex_scale: opts.simplex_scale, ..NelderMeadOptions::default() };
    let outcomes: Vec<NelderMeadOutcome> = (0..opts.restarts.max(1))
        .into_par_iter()
        .map(|i| nelder_mead(objective, &restart_start(&x0, i, opts.seed, opts.simplex_scale), &nm))
        .collect();
    let (best, any_converged) = merge_restarts(outcomes);

    let init_error = error_supnorm(target, &init.clone().into(), opts.grid_tol)?;
    let mut chosen = init.clone();
    let mut sup_error = init_error;
    if let Ok(candidate) = decode(&best.x, m) {
        if is_feasible(&candidate, opts.pole_margin) {
            let err = error_supnorm(target, &candidate.clone().into(), opts.grid_tol)?;
            if err.value < init_error.value {
                chosen = candidate;
                sup_error = err;
            }
        }
    }
    let result = ApproxResult {
        l2_error: coefficient_distance(target, &chosen, opts.l2_order),
        feasible: is_feasible(&chosen, opts.pole_margin),
        candidate: chosen,
        sup_error: Some(sup_error),
        iterations: best.iterations,
    };
    if any_converged {
        Ok(result)
    } else {
        Err(Error::BudgetExhausted { best: Box::new(result) })
    }
}

/// The degree-`degree` Maclaurin polynomial of `s`, scored against `s`.
pub fn truncation_baseline(s: &PowerSeries, degree: usize) -> Result<ApproxResult> {
    if degree > s.order() {
        return Err(Error::InvalidArgument(format!("truncation degree {degree} exceeds series order {}", s.order())));
    }
    let candidate = RationalTransfer::polynomial(Polynomial::new(s.coeffs()[..=degree].to_vec()));

    let target: Option<Evaluator> = match s.closed_form() {
        Some(cf) if Evaluator::from(cf.clone()).certify_circle().is_ok() => Some(cf.clone().into()),
        _ => {
            let series: Evaluator = s.clone().into();
            series.certify_circle().is_ok().then_some(series)
        }
    };
    let sup_error = match target {
        Some(t) => Some(error_supnorm(&t, &candidate.clone().into(), DEFAULT_GRID_TOL)?),
        None => None,
    };

    let exact_tail = s.closed_form().and_then(|cf| cf.l2_tail_sq(degree));
    let l2_error = match exact_tail {
        Some(sq) => Some(L2Norm { value: sq.sqrt(), tail_bound: Some(0.0) }),
        None => {
            let stored: f64 = s.coeffs()[degree + 1..].iter().map(|c| c.norm_sqr()).sum();
            let tail_bound = match s.tail() {
                Tail::Zero => Some(0.0),
                Tail::Decay(d) => Some(d.l2_tail(s.order())),
                Tail::Unknown => None,
            };
            Some(L2Norm { value: stored.sqrt(), tail_bound })
        }
    };

    Ok(ApproxResult { candidate, sup_error, l2_error, iterations: 0, feasible: true })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConjectureConfig {
    /// Total number of free degrees `M + N` per row group.
    pub budgets: Vec<usize>,
    pub restarts: usize,
    /// Expansion order of the reported coefficient-space errors.
    pub k_expand: usize,
    /// Expansion order inside the optimizer objective.
    pub k_objective: usize,
    pub evals: usize,
    pub seed: u64,
    pub simplex_scale: f64,
    pub pole_margin: f64,
}

impl Default for ConjectureConfig {
    fn default() -> Self {
        Self {
            budgets: vec![2, 4, 8],
            restarts: DEFAULT_RESTARTS,
            k_expand: CONJECTURE_EXPANSION,
            k_objective: 1024,
            evals: DEFAULT_BUDGET,
            seed: 42,
            simplex_scale: DEFAULT_SIMPLEX_SCALE,
            pole_margin: POLE_MARGIN,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RowMethod {
    Truncation,
    Arma,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CellStatus {
    Ok,
    BudgetExhausted,
    Failed(String),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConjectureRow {
    pub budget: usize,
    pub method: RowMethod,
    /// Numerator degree.
    pub m: usize,
    /// Denominator degree.
    pub n: usize,
    /// `sqrt(head² + target_tail²)`: exact for polynomial candidates.
    pub l2_error: f64,
    /// Adds the candidate's certified tail to the target tail.
    pub l2_upper: f64,
    pub candidate_tail_bound: f64,
    pub iterations: usize,
    pub status: CellStatus,
    pub candidate: Option<RationalTransfer>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConjectureTable {
    pub k_expand: usize,
    /// `sqrt(Σ_{n > k_expand} 1/n²)`, the part of the target never compared.
    pub target_tail: f64,
    pub rows: Vec<ConjectureRow>,
}

/// Coefficients `(−1)^{n+1}/n` of `log(1 + z)` through `order`.
fn log1p_coeffs(order: usize) -> Vec<f64> {
    (0..=order)
        .map(|n| match n {
            0 => 0.0,
            _ if n % 2 == 1 => 1.0 / n as f64,
            _ => -1.0 / n as f64,
        })
        .collect()
}

/// `Σ_{k≤order} (y_k − x_k)²` where `y` expands `num/den` (with `den[0] = 1`).
fn head_distance_sq(num: &[f64], den: &[f64], target: &[f64]) -> f64 {
    let mut y = vec![0.0; target.len()];
    let mut total = 0.0;
    for k in 0..target.len() {
        let mut acc = num.get(k).copied().unwrap_or(0.0);
        for j in 1..den.len().min(k + 1) {
            acc -= den[j] * y[k - j];
        }
        y[k] = acc;
        let d = acc - target[k];
        total += d * d;
        if !total.is_finite() {
            return f64::INFINITY;
        }
    }
    total
}

fn arma_row(budget: usize, m: usize, n: usize, cfg: &ConjectureConfig, target_tail: f64) -> ConjectureRow {
    let objective_target = log1p_coeffs(cfg.k_objective.min(cfg.k_expand));
    let series = PowerSeries::log1p_scaled(Complex64::new(1.0, 0.0), m + n).expect("|a| = 1 is valid");
    let truncation = || RationalTransfer::polynomial(Polynomial::new(series.coeffs()[..=m].to_vec()));
    let init = match pade(&series, m, n) {
        Ok(r) if r.is_real() && is_feasible(&r, cfg.pole_margin) && r.degrees().0 <= m && r.degrees().1 <= n => r,
        _ => truncation(),
    };
    let x0 = encode(&init, m, n);
    let scale = head_distance_sq(&x0[..=m], &split(&x0, m).1, &objective_target).sqrt().max(1e-3);
    let objective = |x: &[f64]| -> f64 {
        let (num, den) = split(x, m);
        let penalty = PENALTY_WEIGHT * scale * (cfg.pole_margin - pole_excess(&den)).max(0.0);
        head_distance_sq(&num, &den, &objective_target).sqrt() + penalty
    };
    let nm =
        NelderMeadOptions { max_evals: cfg.evals, simplex_scale: cfg.simplex_scale, ..NelderMeadOptions::default() };
    let outcomes: Vec<NelderMeadOutcome> = (0..cfg.restarts.max(1))
        .map(|i| {
            let seed = cfg.seed.wrapping_add((budget * 1000 + m * 31 + n) as u64);
            nelder_mead(objective, &restart_start(&x0, i, seed, cfg.simplex_scale), &nm)
        })
        .collect();
    let (best, any_converged) = merge_restarts(outcomes);

    let init_value = objective(&x0);
    let (x, status) = if best.value <= init_value {
        (best.x.clone(), if any_converged { CellStatus::Ok } else { CellStatus::BudgetExhausted })
    } else {
        (x0.clone(), CellStatus::Ok)
    };

    let full_target = log1p_coeffs(cfg.k_expand);
    let (num, den) = split(&x, m);
    let head_sq = head_distance_sq(&num, &den, &full_target);
    let candidate = decode(&x, m);
    let candidate_tail_bound = match &candidate {
        Ok(r) => match r.taylor(cfg.k_expand).tail() {
            Tail::Zero => 0.0,
            Tail::Decay(d) => d.l2_tail(cfg.k_expand),
            Tail::Unknown => f64::INFINITY,
        },
        Err(_) => f64::INFINITY,
    };
    let status = match (&candidate, status) {
        (Err(e), _) => CellStatus::Failed(e.to_string()),
        (Ok(r), s) if !is_feasible(r, cfg.pole_margin) => CellStatus::Failed(format!("infeasible candidate ({s:?})")),
        (Ok(_), s) => s,
    };
    ConjectureRow {
        budget,
        method: RowMethod::Arma,
        m,
        n,
        l2_error: (head_sq + target_tail * target_tail).sqrt(),
        l2_upper: (head_sq + (target_tail + candidate_tail_bound).powi(2)).sqrt(),
        candidate_tail_bound,
        iterations: best.iterations,
        status,
        candidate: candidate.ok(),
    }
}

/// Truncation versus best-found ARMA rows for `log(1 + z)` at each budget.
/// Reports numbers only; no verdict.
pub fn conjecture_explorer(cfg: &ConjectureConfig) -> ConjectureTable {
    let target_tail = inverse_square_tail(cfg.k_expand).sqrt();
    let cells: Vec<(usize, usize, usize)> =
        cfg.budgets.iter().flat_map(|&b| (0..=b).map(move |m| (b, m, b - m))).collect();
    let arma_rows: Vec<ConjectureRow> =
        cells.par_iter().map(|&(b, m, n)| arma_row(b, m, n, cfg, target_tail)).collect();

    let mut rows = Vec::with_capacity(arma_rows.len() + cfg.budgets.len());
    for &budget in &cfg.budgets {
        let l2 = inverse_square_tail(budget).sqrt();
        let coeffs: Vec<Complex64> = log1p_coeffs(budget).into_iter().map(|c| Complex64::new(c, 0.0)).collect();
        rows.push(ConjectureRow {
            budget,
            method: RowMethod::Truncation,
            m: budget,
            n: 0,
            l2_error: l2,
            l2_upper: l2,
            candidate_tail_bound: 0.0,
            iterations: 0,
            status: CellStatus::Ok,
            candidate: Some(RationalTransfer::polynomial(Polynomial::new(coeffs))),
        });
        rows.extend(arma_rows.iter().filter(|r| r.budget == budget).cloned());
    }
    ConjectureTable { k_expand: cfg.k_expand, target_tail, rows }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::ClosedForm;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn beats_pade_on_log1p_half() {
        let target: Evaluator = ClosedForm::Log1p(c(0.5)).into();
        let s = PowerSeries::log1p_scaled(c(0.5), 8).unwrap();
        let init = pade(&s, 1, 1).unwrap();
        let out = optimize_supnorm(&target, 1, 1, &init, &OptimizeOptions::default()).unwrap();
        let err = out.sup_error.unwrap().value;
        assert!(err <= 0.021, "{out:?}");
        assert!(out.feasible);
        assert!(out.candidate.is_stationary().holds);
        assert!(out.l2_error.is_some());
    }

    #[test]
    fn exact_target_is_a_fixed_point() {
        let r = RationalTransfer::from_real(&[0.3, -0.2], &[1.0, 0.4]).unwrap();
        let opts = OptimizeOptions { restarts: 2, ..OptimizeOptions::default() };
        let out = optimize_supnorm(&r.clone().into(), 1, 1, &r, &opts).unwrap();
        assert_eq!(out.sup_error.unwrap().value, 0.0);
        assert_eq!(out.candidate, r);
    }

    #[test]
    fn recovers_exact_geometric() {
        let target: Evaluator = ClosedForm::Geometric(c(0.5)).into();
        let init = RationalTransfer::from_real(&[1.0], &[1.0, 0.25]).unwrap();
        let opts = OptimizeOptions { restarts: 4, ..OptimizeOptions::default() };
        let out = optimize_supnorm(&target, 0, 1, &init, &opts).unwrap();
        assert!(out.sup_error.unwrap().value < 1e-4, "{out:?}");
        assert!((out.candidate.den().coeff(1) - c(-0.5)).norm() < 1e-4);
    }

    #[test]
    fn rejects_bad_inits() {
        let target: Evaluator = ClosedForm::Log1p(c(0.5)).into();
        let unstable = RationalTransfer::from_real(&[1.0], &[1.0, -2.0]).unwrap();
        assert!(matches!(
            optimize_supnorm(&target, 1, 1, &unstable, &OptimizeOptions::default()),
            Err(Error::InfeasibleInit(_))
        ));
        let too_big = RationalTransfer::from_real(&[1.0, 1.0, 1.0], &[1.0]).unwrap();
        assert!(matches!(
            optimize_supnorm(&target, 1, 1, &too_big, &OptimizeOptions::default()),
            Err(Error::InfeasibleInit(_))
        ));
        let inner: Evaluator = ClosedForm::InnerExp.into();
        let ok = RationalTransfer::constant(c(1.0));
        assert!(optimize_supnorm(&inner, 0, 0, &ok, &OptimizeOptions::default()).is_err());
    }

    #[test]
    fn tiny_budget_reports_best_so_far() {
        let target: Evaluator = ClosedForm::Log1p(c(0.5)).into();
        let init = pade(&PowerSeries::log1p_scaled(c(0.5), 4).unwrap(), 1, 1).unwrap();
        let opts = OptimizeOptions { budget: 6, restarts: 1, ..OptimizeOptions::default() };
        match optimize_supnorm(&target, 1, 1, &init, &opts) {
            Err(Error::BudgetExhausted { best }) => {
                assert!(best.sup_error.unwrap().value <= 0.027, "{best:?}");
            }
            other => panic!("expected BudgetExhausted, got {other:?}"),
        }
    }

    #[test]
    fn geometric_truncation_errors() {
        let s = PowerSeries::geometric(c(0.5), 64).unwrap();
        for k in 1..=10usize {
            // k terms means degree k − 1, error (z/2)^k/(1 − z/2) peaks at z = 1
            let out = truncation_baseline(&s, k - 1).unwrap();
            let sup = out.sup_error.unwrap();
            assert!((sup.value - 2f64.powi(1 - k as i32)).abs() < 1e-12, "k={k}: {sup:?}");
            let l2 = out.l2_error.unwrap().value;
            let expected = (0.25f64.powi(k as i32) / 0.75).sqrt();
            assert!((l2 - expected).abs() < 1e-14);
        }
        let full = truncation_baseline(&s, 64).unwrap();
        assert!(full.sup_error.unwrap().value < 1e-15);
        assert!(truncation_baseline(&s, 65).is_err());
    }

    #[test]
    fn log_truncation_tail_matches_direct_sum() {
        let s = PowerSeries::log1p_scaled(c(1.0), 64).unwrap();
        for degree in [1usize, 2, 8, 30] {
            let out = truncation_baseline(&s, degree).unwrap();
            assert!(out.sup_error.is_none());
            let cutoff = 1_000_000usize;
            let direct: f64 = (degree + 1..=cutoff).rev().map(|n| 1.0 / (n as f64).powi(2)).sum::<f64>()
                + 1.0 / cutoff as f64
                - 0.5 / (cutoff as f64).powi(2);
            assert!((out.l2_error.unwrap().value - direct.sqrt()).abs() < 1e-9);
        }
    }

    #[test]
    fn small_conjecture_table_shape() {
        let cfg = ConjectureConfig {
            budgets: vec![1, 2],
            restarts: 2,
            k_expand: 512,
            k_objective: 256,
            evals: 400,
            ..ConjectureConfig::default()
        };
        let table = conjecture_explorer(&cfg);
        assert_eq!(table.rows.len(), 2 + 3 + 2);
        let trunc1 = &table.rows[0];
        assert_eq!(trunc1.method, RowMethod::Truncation);
        let arma_10 = table.rows.iter().find(|r| r.method == RowMethod::Arma && r.budget == 1 && r.m == 1).unwrap();
        // both are the polynomial z
        assert!((arma_10.l2_error - trunc1.l2_error).abs() < 1e-12, "{arma_10:?}");
    }
}
