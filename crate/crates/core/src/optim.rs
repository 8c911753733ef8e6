//! Nelder–Mead simplex minimization for small, non-smooth objectives.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMeadOptions {
    /// Maximum number of objective evaluations.
    pub max_evals: usize,
    /// Offset of the initial simplex vertices along each coordinate.
    pub simplex_scale: f64,
    /// Convergence once the spread of simplex values drops below this.
    pub ftol: f64,
    /// ... and the largest vertex distance from the best drops below this.
    pub xtol: f64,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self { max_evals: 2000, simplex_scale: 0.05, ftol: 1e-12, xtol: 1e-10 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NelderMeadOutcome {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    pub iterations: usize,
    pub converged: bool,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

pub fn nelder_mead<F>(mut f: F, x0: &[f64], opts: &NelderMeadOptions) -> NelderMeadOutcome
where
    F: FnMut(&[f64]) -> f64,
{
    let dim = x0.len();
    let mut evaluations = 0;
    let mut eval = |x: &[f64], evaluations: &mut usize| {
        *evaluations += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    if dim == 0 {
        let value = eval(x0, &mut evaluations);
        return NelderMeadOutcome { x: Vec::new(), value, evaluations, iterations: 0, converged: true };
    }

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
    simplex.push((x0.to_vec(), eval(x0, &mut evaluations)));
    for i in 0..dim {
        let mut x = x0.to_vec();
        x[i] += opts.simplex_scale;
        let v = eval(&x, &mut evaluations);
        simplex.push((x, v));
    }

    let mut iterations = 0;
    let mut converged = false;
    loop {
        // stable sort keeps the older vertex first on ties
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best = simplex[0].1;
        let worst = simplex[dim].1;
        let spread = simplex
            .iter()
            .skip(1)
            .map(|(x, _)| x.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        // a collapsed simplex cannot move any further
        if (worst - best).abs() <= opts.ftol && spread <= opts.xtol || spread <= 1e-15 {
            converged = true;
            break;
        }
        if evaluations >= opts.max_evals {
            break;
        }
        iterations += 1;

        let centroid: Vec<f64> =
            (0..dim).map(|k| simplex[..dim].iter().map(|(x, _)| x[k]).sum::<f64>() / dim as f64).collect();
        let along =
            |coef: f64| -> Vec<f64> { centroid.iter().zip(&simplex[dim].0).map(|(c, w)| c + coef * (c - w)).collect() };

        let reflected = along(REFLECT);
        let fr = eval(&reflected, &mut evaluations);
        if fr < simplex[0].1 {
            let expanded = along(EXPAND);
            let fe = eval(&expanded, &mut evaluations);
            simplex[dim] = if fe < fr { (expanded, fe) } else { (reflected, fr) };
            continue;
        }
        if fr < simplex[dim - 1].1 {
            simplex[dim] = (reflected, fr);
            continue;
        }
        let (contracted, fc) = if fr < simplex[dim].1 {
            let x = along(CONTRACT * REFLECT);
            let v = eval(&x, &mut evaluations);
            (x, v)
        } else {
            let x = along(-CONTRACT);
            let v = eval(&x, &mut evaluations);
            (x, v)
        };
        if fc < simplex[dim].1.min(fr) {
            simplex[dim] = (contracted, fc);
            continue;
        }
        let anchor = simplex[0].0.clone();
        for vertex in simplex.iter_mut().skip(1) {
            let x: Vec<f64> = anchor.iter().zip(&vertex.0).map(|(a, v)| a + SHRINK * (v - a)).collect();
            let v = eval(&x, &mut evaluations);
            *vertex = (x, v);
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, value) = simplex.swap_remove(0);
    NelderMeadOutcome { x, value, evaluations, iterations, converged }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimizes_rosenbrock() {
        let rosen = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let opts = NelderMeadOptions { max_evals: 5000, simplex_scale: 0.5, ..Default::default() };
        let out = nelder_mead(rosen, &[-1.2, 1.0], &opts);
        assert!(out.converged);
        assert!((out.x[0] - 1.0).abs() < 1e-4 && (out.x[1] - 1.0).abs() < 1e-4, "{out:?}");
    }

    #[test]
    fn minimizes_nonsmooth_max() {
        let f = |x: &[f64]| (x[0] - 0.3).abs().max((x[1] + 0.2).abs());
        let out = nelder_mead(f, &[0.0, 0.0], &NelderMeadOptions::default());
        assert!(out.value < 1e-6, "{out:?}");
    }

    #[test]
    fn one_dimensional_and_budget() {
        let out = nelder_mead(|x| (x[0] - 2.0).powi(2), &[0.0], &NelderMeadOptions::default());
        assert!((out.x[0] - 2.0).abs() < 1e-5);
        let tight = NelderMeadOptions { max_evals: 5, ..Default::default() };
        let out = nelder_mead(|x| (x[0] - 2.0).powi(2), &[0.0], &tight);
        assert!(!out.converged);
        assert!(out.evaluations <= 7);
    }

    #[test]
    fn deterministic() {
        let f = |x: &[f64]| (x[0] - 0.1).powi(2) + (x[1] * x[0] - 0.4).abs();
        let a = nelder_mead(f, &[1.0, 1.0], &NelderMeadOptions::default());
        let b = nelder_mead(f, &[1.0, 1.0], &NelderMeadOptions::default());
        assert_eq!(a, b);
    }
}
