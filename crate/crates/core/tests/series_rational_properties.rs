//! Randomized properties of series arithmetic, Padé approximants and roots.

use arma_hardy::rational::roots;
use arma_hardy::sampling::{rational_with_mixed_roots, stationary_rational};
use arma_hardy::{pade, Complex64, Polynomial, PowerSeries};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const ORDER: usize = 64;

/// A series with `|c_0| ∈ [0.5, 2]` whose other coefficients have total
/// modulus at most `|c_0|/2`, so it has no zeros in the closed disk and its
/// reciprocal stays bounded.
fn dominant_series() -> impl Strategy<Value = PowerSeries> {
    (0.5f64..2.0, 0.0..std::f64::consts::TAU, prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), ORDER)).prop_map(
        |(r, phase, rest)| {
            let c0 = Complex64::from_polar(r, phase);
            let raw: Vec<Complex64> = rest.into_iter().map(|(a, b)| Complex64::new(a, b)).collect();
            let total: f64 = raw.iter().map(|c| c.norm()).sum::<f64>().max(1e-300);
            let mut coeffs = vec![c0];
            coeffs.extend(raw.into_iter().map(|c| c * (r / (2.0 * total))));
            PowerSeries::from_coeffs(coeffs)
        },
    )
}

fn unit_box_series(len: usize) -> impl Strategy<Value = PowerSeries> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), len)
        .prop_map(|v| PowerSeries::from_coeffs(v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reciprocal_is_a_multiplicative_inverse(s in dominant_series()) {
        let unit = s.mul(&s.reciprocal().unwrap());
        prop_assert_eq!(unit.order(), ORDER);
        for n in 0..=ORDER {
            let expected = if n == 0 { 1.0 } else { 0.0 };
            prop_assert!((unit.coeff(n) - expected).norm() < 1e-12, "n={} {:?}", n, unit.coeff(n));
        }
    }

    #[test]
    fn exp_inverts_log(s in dominant_series()) {
        let back = s.log_series().unwrap().exp_series();
        for n in 0..=ORDER {
            prop_assert!((back.coeff(n) - s.coeff(n)).norm() < 1e-10);
        }
    }

    #[test]
    fn l2_triangle_inequality(s in unit_box_series(40), t in unit_box_series(40)) {
        let sum = s.add(&t).l2_norm().value;
        prop_assert!(sum <= s.l2_norm().value + t.l2_norm().value + 1e-12);
    }

    #[test]
    fn geometric_eval_bound_is_sound(
        a in (0.0f64..0.999, 0.0..std::f64::consts::TAU),
        order in 0usize..64,
        z in prop::collection::vec((0.0f64..=1.0, 0.0..std::f64::consts::TAU), 16),
    ) {
        let a = Complex64::from_polar(a.0, a.1);
        let mut s = PowerSeries::geometric(a, order).unwrap();
        // drop the closed form so the decay certificate is what gets tested
        s = PowerSeries::with_decay(s.coeffs().to_vec(), s.decay().unwrap()).unwrap();
        for (r, theta) in z {
            let z = Complex64::from_polar(r, theta);
            let exact = (Complex64::new(1.0, 0.0) - a * z).inv();
            let e = s.eval(z).unwrap();
            prop_assert!((e.value - exact).norm() <= e.error_bound * (1.0 + 1e-12) + 1e-13);
        }
    }

    #[test]
    fn pade_matches_taylor_coefficients(seed in any::<u64>(), m in 0usize..=4, n in 0usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = stationary_rational(&mut rng, 4, 4, 1.1).taylor(16);
        if let Ok(r) = pade(&s, m, n) {
            let t = r.taylor_coeffs(m + n);
            for (k, tk) in t.iter().enumerate() {
                prop_assert!((tk - s.coeff(k)).norm() < 1e-8, "({}, {}) k={}", m, n, k);
            }
        }
    }

    #[test]
    fn roots_reconstruct_polynomial(coeffs in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 2..=13)) {
        let p = Polynomial::new(coeffs.into_iter().map(|(a, b)| Complex64::new(a, b)).collect());
        prop_assume!(p.degree() >= 1 && p.leading().norm() > 1e-3);
        let report = roots(&p, 1e-8).unwrap();
        let q = report.reconstruct(p.leading());
        let scale = p.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max);
        for (a, b) in p.coeffs().iter().zip(q.coeffs()) {
            prop_assert!((a - b).norm() <= 1e-8 * scale);
        }
    }

    #[test]
    fn invertibility_matches_inverse_stationarity(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = rational_with_mixed_roots(&mut rng, 4, 4);
        let inverse = r.formal_inverse().unwrap();
        prop_assert_eq!(r.is_invertible().holds, inverse.is_stationary().holds);

        let order = 24;
        let a = inverse.taylor(order);
        let b = r.taylor(order).reciprocal().unwrap();
        for k in 0..=order {
            let tol = 1e-10 * a.coeff(k).norm().max(1.0);
            prop_assert!((a.coeff(k) - b.coeff(k)).norm() <= tol, "k={}", k);
        }
    }
}
