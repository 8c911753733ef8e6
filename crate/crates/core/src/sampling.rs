//! Seeded generators of random transfer functions for property campaigns.

use num_complex::Complex64;
use rand::Rng;

use crate::rational::{Polynomial, RationalTransfer};

fn unit_box<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

fn annulus<R: Rng + ?Sized>(rng: &mut R, inner: f64, outer: f64) -> Complex64 {
    let modulus = rng.random_range(inner..outer);
    let angle = rng.random_range(0.0..std::f64::consts::TAU);
    Complex64::from_polar(modulus, angle)
}

/// Random stationary rational: numerator coefficients in the unit box,
/// denominator roots with modulus in `[min_pole_modulus, min_pole_modulus + 2)`.
pub fn stationary_rational<R: Rng + ?Sized>(
    rng: &mut R,
    max_num_degree: usize,
    max_den_degree: usize,
    min_pole_modulus: f64,
) -> RationalTransfer {
    loop {
        let num_degree = rng.random_range(0..=max_num_degree);
        let den_degree = rng.random_range(0..=max_den_degree);
        let num: Vec<Complex64> = (0..=num_degree).map(|_| unit_box(rng)).collect();
        let poles: Vec<Complex64> =
            (0..den_degree).map(|_| annulus(rng, min_pole_modulus, min_pole_modulus + 2.0)).collect();
        let den = Polynomial::from_roots_unit_constant(&poles);
        if let Ok(r) = RationalTransfer::new(Polynomial::new(num), den) {
            if !r.num().is_zero() {
                return r;
            }
        }
    }
}

/// Random stationary rational with real coefficients (poles in conjugate
/// pairs or on the real axis).
pub fn stationary_real_rational<R: Rng + ?Sized>(
    rng: &mut R,
    max_num_degree: usize,
    max_den_degree: usize,
    min_pole_modulus: f64,
) -> RationalTransfer {
    loop {
        let num_degree = rng.random_range(0..=max_num_degree);
        let den_degree = rng.random_range(0..=max_den_degree);
        let num: Vec<f64> = (0..=num_degree).map(|_| rng.random_range(-1.0..1.0)).collect();
        let mut poles = Vec::with_capacity(den_degree);
        while poles.len() < den_degree {
            if den_degree - poles.len() >= 2 && rng.random_bool(0.5) {
                let p = annulus(rng, min_pole_modulus, min_pole_modulus + 2.0);
                poles.push(p);
                poles.push(p.conj());
            } else {
                let modulus = rng.random_range(min_pole_modulus..min_pole_modulus + 2.0);
                let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
                poles.push(Complex64::new(sign * modulus, 0.0));
            }
        }
        let den = Polynomial::from_roots_unit_constant(&poles);
        let den = Polynomial::from_real(&den.coeffs().iter().map(|c| c.re).collect::<Vec<_>>());
        if let Ok(r) = RationalTransfer::new(Polynomial::from_real(&num), den) {
            if !r.num().is_zero() && r.is_real() {
                return r;
            }
        }
    }
}

/// Random rational whose zeros and poles fall on both sides of the unit
/// circle (moduli in `[0.3, 3)`), with `p(0) ≠ 0`.
pub fn rational_with_mixed_roots<R: Rng + ?Sized>(
    rng: &mut R,
    max_num_degree: usize,
    max_den_degree: usize,
) -> RationalTransfer {
    loop {
        let num_degree = rng.random_range(0..=max_num_degree);
        let den_degree = rng.random_range(0..=max_den_degree);
        let zeros: Vec<Complex64> = (0..num_degree).map(|_| annulus(rng, 0.3, 3.0)).collect();
        let poles: Vec<Complex64> = (0..den_degree).map(|_| annulus(rng, 0.3, 3.0)).collect();
        let gain = unit_box(rng);
        let num = Polynomial::from_roots_unit_constant(&zeros).scale(gain);
        let den = Polynomial::from_roots_unit_constant(&poles);
        if let Ok(r) = RationalTransfer::new(num, den) {
            if r.num().coeff(0).norm() > 1e-3 {
                return r;
            }
        }
    }
}
