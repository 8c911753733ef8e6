//! One function per subcommand. Each returns a [`Report`] whose JSON and CSV
//! renderings depend only on its arguments.

use arma_hardy::approx::{conjecture_explorer, is_feasible, ConjectureConfig, RowMethod, POLE_MARGIN};
use arma_hardy::arma::{l2_distance, simulate, write_path_csv, ArmaModel};
use arma_hardy::norms::{circle_point, process_l2};
use arma_hardy::operator::{hinf_counterexample_report, spectral_lemma_check};
use arma_hardy::{
    error_supnorm, optimize_supnorm, pade, supnorm_circle, truncation_baseline, ApproxResult, ClosedForm, Complex64,
    Error, Evaluator, Polynomial, PowerSeries, ProcessSpec, RationalTransfer,
};
use serde_json::{json, Value};

use crate::tolerances::{self as tol, Band};
use crate::{csv_row, fmt_num, Check, CliError, Report, Result, RunConfig};

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn half() -> Complex64 {
    c(0.5)
}

/// `log(1 + z/2)` evaluated in closed form.
fn log_target() -> Evaluator {
    ClosedForm::Log1p(half()).into()
}

pub fn pade_candidate() -> RationalTransfer {
    RationalTransfer::from_real(&[0.0, 0.5], &[1.0, 0.25]).expect("valid rational")
}

pub fn nonpade_candidate() -> RationalTransfer {
    RationalTransfer::from_real(&[0.0, 1.0 / 1.98], &[1.0, 1.0 / 3.96]).expect("valid rational")
}

fn config_json(cfg: &RunConfig, extra: Value) -> Value {
    let mut v = serde_json::to_value(cfg).expect("config serializes");
    if let (Value::Object(base), Value::Object(more)) = (&mut v, extra) {
        base.extend(more);
    }
    v
}

fn checks_csv(checks: &[Check]) -> String {
    let mut out = String::new();
    csv_row(&mut out, ["check", "observed", "criterion", "status"]);
    for ch in checks {
        csv_row(&mut out, [ch.name.as_str(), &ch.observed, &ch.criterion, if ch.pass { "PASS" } else { "FAIL" }]);
    }
    out
}

/// The norm comparison for `log(1 + z/2)`, the two invertibility verdicts and
/// the geometric truncation table.
pub fn cmd_examples(cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    let mut checks = Vec::new();

    let linf = supnorm_circle(&log_target(), cfg.grid_tol)?;
    let x = ProcessSpec::series("log(1+z/2)", PowerSeries::log1p_scaled(half(), tol::LOG_L2_ORDER)?);
    let l2 = process_l2(&x, tol::LOG_L2_ORDER)?;
    checks.push(Check::band("log_supnorm", linf.value, tol::LOG_SUPNORM));
    checks.push(Check::band("log_l2", l2.value, tol::LOG_L2));
    checks.push(Check::new("supnorm_exceeds_l2", fmt_num(linf.value - l2.value), "> 0", linf.value > l2.value));

    let not_invertible = RationalTransfer::from_real(&[1.0, -2.0], &[1.0])?;
    let invertible = RationalTransfer::from_real(&[1.0, -0.5], &[1.0])?;
    let verdict_bad = not_invertible.is_invertible();
    let verdict_good = invertible.is_invertible();
    checks.push(Check::new("1-2L_invertible", verdict_bad.holds, "false", !verdict_bad.holds));
    checks.push(Check::new("1-L/2_invertible", verdict_good.holds, "true", verdict_good.holds));
    let inverse = invertible.formal_inverse()?.taylor(3);
    let expansion_error =
        [1.0, 0.5, 0.25, 0.125].iter().enumerate().map(|(n, &e)| (inverse.coeff(n) - c(e)).norm()).fold(0.0, f64::max);
    checks.push(Check::band("1-L/2_inverse_expansion", expansion_error, Band::at_most(tol::INVERSE_EXPANSION_TOL)));

    let geometric = PowerSeries::geometric(half(), 64)?;
    let exact = RationalTransfer::from_real(&[1.0], &[1.0, -0.5])?;
    let exact_error = error_supnorm(&ClosedForm::Geometric(half()).into(), &exact.clone().into(), cfg.grid_tol)?;
    let mut table = Vec::new();
    for k in 1..=tol::GEOMETRIC_TRUNCATION_TERMS {
        let sup = truncation_baseline(&geometric, k - 1)?.sup_error.expect("geometric target is continuous");
        let expected = 2f64.powi(1 - k as i32);
        table.push(
            json!({"terms": k, "sup_error": sup.value, "expected": expected, "rational_error": exact_error.value}),
        );
        checks.push(Check::band(
            format!("geometric_truncation_{k}"),
            sup.value,
            Band::new(expected - tol::GEOMETRIC_TRUNCATION_TOL, expected + tol::GEOMETRIC_TRUNCATION_TOL),
        ));
    }
    checks.push(Check::band("geometric_rational_exact", exact_error.value, Band::at_most(tol::EXACT_RATIONAL_TOL)));

    let results = json!({
        "norms": {"target": "log(1+z/2)", "linf": linf, "l2": l2, "l2_order": tol::LOG_L2_ORDER},
        "invertibility": [
            {"polynomial": "1-2L", "invertible": verdict_bad.holds, "roots": verdict_bad.report},
            {"polynomial": "1-L/2", "invertible": verdict_good.holds, "roots": verdict_good.report,
             "inverse_expansion": inverse.coeffs()},
        ],
        "geometric_truncation": table,
        "geometric_rational": {"model": ArmaModel::from_rational(&exact).recurrence()},
    });
    let csv = checks_csv(&checks);
    Ok(Report { command: "examples", config: config_json(cfg, json!({})), results, checks, csv })
}

/// Pointwise circle errors of the Padé and hand-tuned (1,1) candidates.
pub fn cmd_figure1(grid: usize, cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    if grid < 64 {
        return Err(CliError::Config(format!("grid must be at least 64, got {grid}")));
    }
    let target = log_target();
    let pade_r = pade_candidate();
    let nonpade_r = nonpade_candidate();

    let mut csv = String::new();
    csv_row(&mut csv, ["theta", "pade_abs_err", "nonpade_abs_err"]);
    let (mut pade_max, mut nonpade_max) = (0.0f64, 0.0f64);
    for j in 0..grid {
        let theta = std::f64::consts::TAU * j as f64 / grid as f64;
        let z = circle_point(theta);
        let t = target.eval(z)?;
        let a = (t - pade_r.eval(z)?).norm();
        let b = (t - nonpade_r.eval(z)?).norm();
        pade_max = pade_max.max(a);
        nonpade_max = nonpade_max.max(b);
        csv_row(&mut csv, [fmt_num(theta), fmt_num(a), fmt_num(b)]);
    }
    csv_row(&mut csv, ["max".to_string(), fmt_num(pade_max), fmt_num(nonpade_max)]);

    let pade_sup = error_supnorm(&target, &pade_r.clone().into(), cfg.grid_tol)?;
    let nonpade_sup = error_supnorm(&target, &nonpade_r.clone().into(), cfg.grid_tol)?;
    let checks = vec![
        Check::band("pade_sup_error", pade_sup.value, tol::PADE_SUP_ERROR),
        Check::band("nonpade_sup_error", nonpade_sup.value, tol::NONPADE_SUP_ERROR),
        Check::new(
            "nonpade_beats_pade",
            fmt_num(pade_sup.value - nonpade_sup.value),
            "> 0",
            nonpade_sup.value < pade_sup.value,
        ),
    ];
    let results = json!({
        "grid": grid,
        "grid_max": {"pade": pade_max, "nonpade": nonpade_max},
        "pade": {"candidate": pade_r, "sup_error": pade_sup},
        "nonpade": {"candidate": nonpade_r, "sup_error": nonpade_sup},
    });
    Ok(Report { command: "figure1", config: config_json(cfg, json!({"grid": grid})), results, checks, csv })
}

fn candidate_json(r: &ApproxResult, status: &str) -> Value {
    json!({
        "candidate": r.candidate,
        "sup_error": r.sup_error,
        "l2_error": r.l2_error,
        "feasible": r.feasible,
        "iterations": r.iterations,
        "status": status,
        "recurrence": ArmaModel::from_rational(&r.candidate).recurrence(),
    })
}

fn opt_value(x: Option<f64>) -> String {
    x.map_or_else(String::new, fmt_num)
}

/// Best `(m, n)` rational approximation of `log(1 + z/2)` on the circle,
/// started from the Padé approximant when it is admissible.
pub fn cmd_optimize(m: usize, n: usize, cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    let target = log_target();
    let series = PowerSeries::log1p_scaled(half(), cfg.order.max(m + n))?;
    let target_spec = ProcessSpec::series("log(1+z/2)", series.clone());

    let pade_r = pade(&series, m, n).ok();
    let pade_result = match &pade_r {
        Some(r) if r.is_stationary().holds => Some(ApproxResult {
            sup_error: Some(error_supnorm(&target, &r.clone().into(), cfg.grid_tol)?),
            l2_error: Some(l2_distance(&target_spec, &ProcessSpec::rational("pade", r.clone()), cfg.order)?),
            feasible: is_feasible(r, POLE_MARGIN),
            candidate: r.clone(),
            iterations: 0,
        }),
        _ => None,
    };
    let init = match &pade_result {
        Some(p) if p.feasible => p.candidate.clone(),
        _ => RationalTransfer::polynomial(Polynomial::new(series.coeffs()[..=m].to_vec())),
    };

    let (best, status) = match optimize_supnorm(&target, m, n, &init, &cfg.optimize_options()) {
        Ok(r) => (r, "converged"),
        Err(Error::BudgetExhausted { best }) => (*best, "budget_exhausted"),
        Err(e) => return Err(e.into()),
    };
    let best_sup = best.sup_error.map(|e| e.value).unwrap_or(f64::INFINITY);

    let mut checks = Vec::new();
    checks.push(Check::new("optimized_feasible", best.feasible, "true", best.feasible));
    if let Some(p) = &pade_result {
        let pade_sup = p.sup_error.map_or(f64::INFINITY, |e| e.value);
        checks.push(Check::new(
            "optimized_not_worse_than_pade",
            fmt_num(best_sup - pade_sup),
            "<= 0",
            best_sup <= pade_sup,
        ));
    }
    if (m, n) == (1, 1) {
        checks.push(Check::band("optimized_sup_error", best_sup, tol::OPTIMIZED_SUP_ERROR));
    }

    let mut csv = String::new();
    csv_row(&mut csv, ["method", "m", "n", "sup_error", "sup_upper", "l2_error", "feasible", "recurrence"]);
    let mut push = |label: &str, r: &ApproxResult| {
        csv_row(
            &mut csv,
            [
                label.to_string(),
                m.to_string(),
                n.to_string(),
                opt_value(r.sup_error.map(|e| e.value)),
                opt_value(r.sup_error.map(|e| e.upper())),
                opt_value(r.l2_error.map(|e| e.value)),
                r.feasible.to_string(),
                ArmaModel::from_rational(&r.candidate).recurrence(),
            ],
        );
    };
    if let Some(p) = &pade_result {
        push("pade", p);
    }
    push("optimized", &best);

    let results = json!({
        "target": "log(1+z/2)",
        "m": m,
        "n": n,
        "pade": pade_result.as_ref().map(|p| candidate_json(p, "closed_form")),
        "optimized": candidate_json(&best, status),
    });
    Ok(Report { command: "optimize", config: config_json(cfg, json!({"m": m, "n": n})), results, checks, csv })
}

/// `sqrt(Σ_{n > degree} 1/n²)` by direct summation to `10⁶` plus the
/// integral remainder `1/(N + 1/2)`.
pub fn log_truncation_oracle(degree: usize) -> f64 {
    const N: usize = 1_000_000;
    let head: f64 = (degree + 1..=N).rev().map(|n| 1.0 / (n as f64 * n as f64)).sum();
    (head + 1.0 / (N as f64 + 0.5)).sqrt()
}

/// Truncation against `(M, N)` rational fits of `log(1 + z)` at fixed `M + N`.
pub fn cmd_conjecture(budgets: &[usize], k_expand: usize, cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    if budgets.is_empty() || budgets.contains(&0) {
        return Err(CliError::Config("budgets must be a non-empty list of positive integers".into()));
    }
    if k_expand <= *budgets.iter().max().expect("non-empty") {
        return Err(CliError::Config(format!("k-expand {k_expand} must exceed every budget")));
    }
    let conj = ConjectureConfig {
        budgets: budgets.to_vec(),
        restarts: cfg.restarts,
        k_expand,
        k_objective: k_expand.min(1024),
        evals: cfg.budget,
        seed: cfg.seed,
        ..Default::default()
    };
    let table = conjecture_explorer(&conj);

    let mut checks = Vec::new();
    let expected_rows: usize = budgets.iter().map(|b| b + 2).sum();
    checks.push(Check::new(
        "table_complete",
        table.rows.len(),
        format!("== {expected_rows}"),
        table.rows.len() == expected_rows,
    ));
    for row in table.rows.iter().filter(|r| r.method == RowMethod::Truncation) {
        let oracle = log_truncation_oracle(row.budget);
        let diff = (row.l2_error - oracle).abs();
        checks.push(Check::band(
            format!("truncation_oracle_{}", row.budget),
            diff,
            Band::at_most(tol::TRUNCATION_ORACLE_TOL),
        ));
    }

    let mut csv = String::new();
    csv.push_str("# target log(1+z); coefficient-space l2 errors through order K, K = ");
    csv.push_str(&k_expand.to_string());
    csv.push('\n');
    csv.push_str("# target tail sqrt(sum_{n>K} 1/n^2) = ");
    csv.push_str(&fmt_num(table.target_tail));
    csv.push_str("; l2_error adds it in quadrature, l2_upper also adds candidate_tail_bound\n");
    csv_row(
        &mut csv,
        ["budget", "method", "m", "n", "l2_error", "l2_upper", "candidate_tail_bound", "iterations", "status"],
    );
    for row in &table.rows {
        let method = match row.method {
            RowMethod::Truncation => "truncation",
            RowMethod::Arma => "arma",
        };
        let status = match &row.status {
            arma_hardy::approx::CellStatus::Ok => "ok".to_string(),
            arma_hardy::approx::CellStatus::BudgetExhausted => "budget_exhausted".to_string(),
            arma_hardy::approx::CellStatus::Failed(msg) => format!("failed: {msg}"),
        };
        csv_row(
            &mut csv,
            [
                row.budget.to_string(),
                method.to_string(),
                row.m.to_string(),
                row.n.to_string(),
                fmt_num(row.l2_error),
                fmt_num(row.l2_upper),
                fmt_num(row.candidate_tail_bound),
                row.iterations.to_string(),
                status,
            ],
        );
    }
    let results = serde_json::to_value(&table)?;
    Ok(Report {
        command: "conjecture",
        config: config_json(cfg, json!({"budgets": budgets, "k_expand": k_expand})),
        results,
        checks,
        csv,
    })
}

/// Section norms of `f(L)` for three generators, plus the profile of
/// `exp(−(1+z)/(1−z))`.
pub fn cmd_spectral_check(dims: &[usize], hinf_grid: usize, cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    if dims.is_empty() || dims.contains(&0) {
        return Err(CliError::Config("dimensions must be a non-empty list of positive integers".into()));
    }
    let max_dim = *dims.iter().max().expect("non-empty");
    let functions: Vec<(&str, PowerSeries)> = vec![
        ("1+z/2", PowerSeries::polynomial_real(&[1.0, 0.5])),
        ("pade_1_1", pade_candidate().taylor(max_dim)),
        ("unimodular", PowerSeries::polynomial(vec![Complex64::new(0.6, 0.8)])),
    ];

    let mut checks = Vec::new();
    let mut reports = Vec::new();
    let mut csv = String::new();
    csv_row(&mut csv, ["function", "dim", "op_norm", "supnorm"]);
    for (name, f) in &functions {
        let report = spectral_lemma_check(f, dims, cfg.grid_tol)?;
        checks.push(Check::new(format!("{name}_monotone"), report.monotone, "true", report.monotone));
        checks.push(Check::new(format!("{name}_bounded"), report.bounded, "true", report.bounded));
        for row in &report.rows {
            csv_row(
                &mut csv,
                [name.to_string(), row.dim.to_string(), fmt_num(row.op_norm), fmt_num(report.supnorm.value)],
            );
        }
        if *name == "1+z/2" {
            if let Some(row) = report.rows.iter().find(|r| r.dim == 512) {
                let gap = (tol::SECTION_NORM_LIMIT - row.op_norm) / tol::SECTION_NORM_LIMIT;
                checks.push(Check::band("1+z/2_gap_at_512", gap, Band::new(0.0, tol::SECTION_NORM_REL_GAP)));
            }
        }
        reports.push(json!({"function": name, "report": report}));
    }

    let hinf = hinf_counterexample_report(cfg.order.max(64), hinf_grid)?;
    checks.push(Check::band("h0", (hinf.h0 - (-1f64).exp()).abs(), Band::at_most(tol::H0_TOL)));
    checks.push(Check::band("min_abs_h_plus_2", hinf.min_abs_h_plus_2, tol::HINF_SHIFTED_MIN));
    checks.push(Check::band("h_l2_partial", hinf.l2_partial, tol::HINF_L2));

    let results = json!({"sections": reports, "hinf": hinf});
    Ok(Report {
        command: "spectral-check",
        config: config_json(cfg, json!({"dims": dims, "hinf_grid": hinf_grid})),
        results,
        checks,
        csv,
    })
}

/// Sample path of the ARMA model with `q_1..q_N = ar` and `p_0..p_M = ma`.
pub fn cmd_simulate(ar: &[f64], ma: &[f64], len: usize, burn_in: Option<usize>, cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    let model = ArmaModel::from_real(ar, ma)?;
    let burn_in = burn_in.unwrap_or_else(|| model.default_burn_in());
    let path = simulate(&model, len, burn_in, cfg.seed)?;
    let mut buf = Vec::new();
    write_path_csv(&path, &mut buf)?;
    let csv = String::from_utf8(buf).expect("numbers are ASCII");
    let results = json!({"recurrence": model.recurrence(), "burn_in": burn_in, "path": path});
    Ok(Report {
        command: "simulate",
        config: config_json(cfg, json!({"ar": ar, "ma": ma, "len": len, "burn_in": burn_in})),
        results,
        checks: Vec::new(),
        csv,
    })
}
