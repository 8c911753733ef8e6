//! Rational transfer functions `p(z)/q(z)`.
//!
//! Stationarity and invertibility of the associated ARMA model are read off
//! the root locations of `q` and `p` respectively. Roots are classified
//! against the unit circle with an explicit tolerance; a root within that
//! tolerance of the circle is reported as [`RootClass::OnCircle`] and makes
//! both predicates fail.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::series::{ClosedForm, Decay, PowerSeries, Tail};

/// Default distance from the unit circle below which a root counts as on it.
pub const ON_CIRCLE_TOL: f64 = 1e-8;

/// Numerator and denominator roots closer than this are cancelled.
pub const COMMON_ROOT_TOL: f64 = 1e-9;

/// Padé systems with a larger condition number are rejected.
pub const PADE_MAX_CONDITION: f64 = 1e12;

const POLE_EPS: f64 = 1e-14;
const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Polynomial with ascending coefficients and no trailing zeros.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last() == Some(&ZERO) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    /// `Π (1 − z/ρ_k)`, the monic-at-origin polynomial with the given nonzero roots.
    pub fn from_roots_unit_constant(roots: &[Complex64]) -> Self {
        let mut poly = Self::constant(ONE);
        for r in roots {
            poly = poly.mul(&Self::new(vec![ONE, -r.inv()]));
        }
        poly
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> Complex64 {
        self.coeffs.get(n).copied().unwrap_or(ZERO)
    }

    pub fn leading(&self) -> Complex64 {
        self.coeffs.last().copied().unwrap_or(ZERO)
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(|c| c.im == 0.0)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        horner(&self.coeffs, z)
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c * k as f64).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..len).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..len).map(|k| self.coeff(k) - other.coeff(k)).collect())
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * factor).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::new(Vec::new());
        }
        let mut out = vec![ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// Quotient of division by `(z − root)`; the remainder is discarded.
    pub fn deflate(&self, root: Complex64) -> Self {
        let d = self.degree();
        if d == 0 {
            return self.clone();
        }
        let mut quotient = vec![ZERO; d];
        let mut carry = ZERO;
        for k in (1..=d).rev() {
            carry = self.coeffs[k] + carry * root;
            quotient[k - 1] = carry;
        }
        Self::new(quotient)
    }

    fn trailing_zero_count(&self) -> usize {
        self.coeffs.iter().take_while(|c| **c == ZERO).count()
    }

    fn shift_down(&self, k: usize) -> Self {
        Self::new(self.coeffs[k.min(self.coeffs.len())..].to_vec())
    }
}

pub(crate) fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(ZERO, |acc, c| acc * z + c)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RootClass {
    Inside,
    OnCircle,
    Outside,
}

impl RootClass {
    pub fn classify(modulus: f64, tol: f64) -> Self {
        if (modulus - 1.0).abs() <= tol {
            RootClass::OnCircle
        } else if modulus < 1.0 {
            RootClass::Inside
        } else {
            RootClass::Outside
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Root {
    pub location: Complex64,
    pub modulus: f64,
    pub class: RootClass,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RootReport {
    pub roots: Vec<Root>,
    pub tolerance: f64,
}

impl RootReport {
    fn from_locations(locations: Vec<Complex64>, tolerance: f64) -> Self {
        let roots = locations
            .into_iter()
            .map(|location| {
                let modulus = location.norm();
                Root { location, modulus, class: RootClass::classify(modulus, tolerance) }
            })
            .collect();
        Self { roots, tolerance }
    }

    pub fn all_outside(&self) -> bool {
        self.roots.iter().all(|r| r.class == RootClass::Outside)
    }

    pub fn min_modulus(&self) -> Option<f64> {
        self.roots.iter().map(|r| r.modulus).reduce(f64::min)
    }

    /// `leading · Π (z − r_k)`.
    pub fn reconstruct(&self, leading: Complex64) -> Polynomial {
        self.roots
            .iter()
            .fold(Polynomial::constant(leading), |acc, r| acc.mul(&Polynomial::new(vec![-r.location, ONE])))
    }
}

/// All roots of `p` with multiplicity, classified against the unit circle.
pub fn roots(p: &Polynomial, tol: f64) -> Result<RootReport> {
    if p.degree() == 0 {
        return Err(Error::EmptyReport);
    }
    Ok(RootReport::from_locations(root_locations(p), tol))
}

fn root_locations(p: &Polynomial) -> Vec<Complex64> {
    let zeros_at_origin = p.trailing_zero_count();
    let reduced = p.shift_down(zeros_at_origin);
    let mut out = vec![ZERO; zeros_at_origin];
    out.extend(aberth(reduced.coeffs()));
    out
}

/// Aberth–Ehrlich simultaneous iteration followed by Newton polishing.
/// `coeffs[0]` must be nonzero.
fn aberth(coeffs: &[Complex64]) -> Vec<Complex64> {
    let degree = coeffs.len().saturating_sub(1);
    match degree {
        0 => return Vec::new(),
        1 => return vec![-coeffs[0] / coeffs[1]],
        _ => {}
    }
    let lead = coeffs[degree];
    let monic: Vec<Complex64> = coeffs.iter().map(|c| c / lead).collect();
    let deriv: Vec<Complex64> = monic.iter().enumerate().skip(1).map(|(k, c)| c * k as f64).collect();

    let radius = monic[0].norm().powf(1.0 / degree as f64).max(1e-3);
    let mut z: Vec<Complex64> = (0..degree)
        .map(|k| {
            let angle = std::f64::consts::TAU * k as f64 / degree as f64 + 0.4;
            Complex64::from_polar(radius, angle)
        })
        .collect();

    for _ in 0..800 {
        let mut max_step: f64 = 0.0;
        for k in 0..degree {
            let value = horner(&monic, z[k]);
            if value == ZERO {
                continue;
            }
            let ratio = value / horner(&deriv, z[k]);
            let repulsion: Complex64 = (0..degree).filter(|&j| j != k).map(|j| (z[k] - z[j]).inv()).sum();
            let step = ratio / (ONE - ratio * repulsion);
            if step.is_finite() {
                z[k] -= step;
                max_step = max_step.max(step.norm() / z[k].norm().max(1e-300));
            }
        }
        if max_step < 1e-15 {
            break;
        }
    }

    for root in &mut z {
        for _ in 0..3 {
            let value = horner(&monic, *root);
            let slope = horner(&deriv, *root);
            if slope == ZERO {
                break;
            }
            let candidate = *root - value / slope;
            if horner(&monic, candidate).norm() <= value.norm() {
                *root = candidate;
            } else {
                break;
            }
        }
    }
    z
}

/// `p(z)/q(z)` with `q(0) = 1` and no common roots.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RationalTransfer {
    num: Polynomial,
    den: Polynomial,
}

/// Outcome of a root-location predicate together with its evidence.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub holds: bool,
    pub report: RootReport,
}

impl RationalTransfer {
    /// Normalizes `q(0) = 1` and cancels common factors.
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominatorAtOrigin);
        }
        if num.is_zero() {
            return Ok(Self::polynomial(num));
        }
        // cancel common powers of z first
        let shift = num.trailing_zero_count().min(den.trailing_zero_count());
        let (mut num, mut den) = (num.shift_down(shift), den.shift_down(shift));
        if den.coeff(0) == ZERO {
            return Err(Error::ZeroDenominatorAtOrigin);
        }

        if num.degree() > 0 && den.degree() > 0 {
            let num_roots = root_locations(&num);
            let mut den_roots = root_locations(&den);
            for r in num_roots {
                let matched = den_roots
                    .iter()
                    .enumerate()
                    .filter(|(_, d)| (*d - r).norm() <= COMMON_ROOT_TOL)
                    .min_by(|a, b| (a.1 - r).norm().total_cmp(&(b.1 - r).norm()))
                    .map(|(i, d)| (i, *d));
                if let Some((i, d)) = matched {
                    let shared = (r + d) * 0.5;
                    num = num.deflate(shared);
                    den = den.deflate(shared);
                    den_roots.swap_remove(i);
                }
            }
        }
        let q0 = den.coeff(0);
        Ok(Self { num: num.scale(q0.inv()), den: den.scale(q0.inv()) })
    }

    pub fn from_real(num: &[f64], den: &[f64]) -> Result<Self> {
        Self::new(Polynomial::from_real(num), Polynomial::from_real(den))
    }

    pub fn polynomial(num: Polynomial) -> Self {
        Self { num, den: Polynomial::constant(ONE) }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::polynomial(Polynomial::constant(c))
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    /// (numerator degree, denominator degree)
    pub fn degrees(&self) -> (usize, usize) {
        (self.num.degree(), self.den.degree())
    }

    pub fn is_real(&self) -> bool {
        self.num.is_real() && self.den.is_real()
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        let q = self.den.eval(z);
        if q.norm() < POLE_EPS {
            return Err(Error::PoleHit { re: z.re, im: z.im });
        }
        Ok(self.num.eval(z) / q)
    }

    pub fn poles(&self, tol: f64) -> RootReport {
        match roots(&self.den, tol) {
            Ok(report) => report,
            Err(_) => RootReport { roots: Vec::new(), tolerance: tol },
        }
    }

    pub fn zeros(&self, tol: f64) -> RootReport {
        match roots(&self.num, tol) {
            Ok(report) => report,
            Err(_) => RootReport { roots: Vec::new(), tolerance: tol },
        }
    }

    /// Smallest pole modulus, `None` for polynomials.
    pub fn min_pole_modulus(&self) -> Option<f64> {
        self.poles(ON_CIRCLE_TOL).min_modulus()
    }

    /// Every root of `q` strictly outside the closed unit disk.
    pub fn is_stationary(&self) -> Verdict {
        self.is_stationary_with(ON_CIRCLE_TOL)
    }

    pub fn is_stationary_with(&self, tol: f64) -> Verdict {
        let report = self.poles(tol);
        Verdict { holds: report.all_outside(), report }
    }

    /// Every root of `p` strictly outside the closed unit disk. The zero
    /// transfer function is not invertible.
    pub fn is_invertible(&self) -> Verdict {
        self.is_invertible_with(ON_CIRCLE_TOL)
    }

    pub fn is_invertible_with(&self, tol: f64) -> Verdict {
        let report = self.zeros(tol);
        Verdict { holds: !self.num.is_zero() && report.all_outside(), report }
    }

    /// `q(z)/p(z)`, renormalized to a unit constant term in the denominator.
    pub fn formal_inverse(&self) -> Result<Self> {
        if self.num.coeff(0) == ZERO {
            return Err(Error::NotInvertibleAtOrigin);
        }
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Self::new(self.num.mul(&other.den).add(&other.num.mul(&self.den)), self.den.mul(&other.den))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        Self::new(self.num.mul(&other.den).sub(&other.num.mul(&self.den)), self.den.mul(&other.den))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        Self::new(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self { num: self.num.scale(factor), den: self.den.clone() }
    }

    /// Long-division coefficients of `p/q` through `order`.
    pub fn taylor_coeffs(&self, order: usize) -> Vec<Complex64> {
        let q = self.den.coeffs();
        let mut out: Vec<Complex64> = Vec::with_capacity(order + 1);
        for n in 0..=order {
            let mut acc = self.num.coeff(n);
            for j in 1..q.len().min(n + 1) {
                acc -= q[j] * out[n - j];
            }
            out.push(acc / q[0]);
        }
        out
    }

    /// Wold expansion through `order`, with a decay certificate when every
    /// pole lies strictly outside the closed unit disk.
    pub fn taylor(&self, order: usize) -> PowerSeries {
        let coeffs = self.taylor_coeffs(order);
        let tail = self.certify_decay(order);
        PowerSeries::with_tail(coeffs, tail).attach_closed_form(ClosedForm::Rational(Box::new(self.clone())))
    }

    fn certify_decay(&self, order: usize) -> Tail {
        if self.den.degree() == 0 {
            if self.num.degree() <= order {
                return Tail::Zero;
            }
            let coeffs = self.taylor_coeffs(self.num.degree());
            return envelope(&coeffs, 0.5);
        }
        let Some(min_modulus) = self.min_pole_modulus() else {
            return Tail::Unknown;
        };
        if min_modulus <= 1.0 + 1e-12 {
            return Tail::Unknown;
        }
        let base = min_modulus.recip();
        let rate = base + 0.25 * (1.0 - base);
        // Past this index n^{deg q}·(base/rate)^n is decreasing, so the
        // envelope constant taken over the extended expansion covers all n.
        let settle = 8.0 * (self.den.degree() as f64 + 1.0) / (rate / base).ln();
        let extended = (order.max(self.num.degree()) as f64 + settle.ceil() + 16.0).min((1 << 20) as f64);
        let coeffs = self.taylor_coeffs(extended as usize);
        envelope(&coeffs, rate)
    }
}

fn envelope(coeffs: &[Complex64], rate: f64) -> Tail {
    let log_rate = rate.ln();
    let constant = coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| **c != ZERO)
        .map(|(n, c)| (c.norm().ln() - n as f64 * log_rate).exp())
        .fold(0.0, f64::max);
    Tail::Decay(Decay { rate, constant: constant * (1.0 + 1e-12) })
}

/// The `(m, n)` Padé approximant: numerator degree `m`, denominator degree
/// `n`, matching `s` through order `m + n`.
pub fn pade(s: &PowerSeries, m: usize, n: usize) -> Result<RationalTransfer> {
    if s.order() < m + n {
        return Err(Error::InvalidArgument(format!(
            "Padé ({m}, {n}) needs order {} but the series has order {}",
            m + n,
            s.order()
        )));
    }
    let c = |k: isize| if k < 0 { ZERO } else { s.coeff(k as usize) };

    let mut q = vec![ONE];
    if n > 0 {
        // Σ_{j=1..n} q_j c_{k−j} = −c_k for k = m+1..m+n
        let a = DMatrix::from_fn(n, n, |i, j| c(m as isize + i as isize - j as isize));
        let b = DVector::from_fn(n, |i, _| -c(m as isize + 1 + i as isize));
        let singular = a.clone().singular_values();
        let smax = singular.max();
        let smin = singular.min();
        let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
        if condition.is_nan() || condition > PADE_MAX_CONDITION {
            return Err(Error::SingularPadeSystem { condition });
        }
        let solution = a.lu().solve(&b).ok_or(Error::SingularPadeSystem { condition: f64::INFINITY })?;
        q.extend(solution.iter().copied());
    }
    let p: Vec<Complex64> = (0..=m).map(|k| (0..=k.min(n)).map(|j| q[j] * c(k as isize - j as isize)).sum()).collect();
    RationalTransfer::new(Polynomial::new(p), Polynomial::new(q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn assert_poly(p: &Polynomial, expected: &[f64], tol: f64) {
        assert_eq!(p.coeffs().len(), expected.len(), "{:?}", p.coeffs());
        for (a, b) in p.coeffs().iter().zip(expected) {
            assert!((a - c(*b)).norm() <= tol, "{:?} vs {expected:?}", p.coeffs());
        }
    }

    #[test]
    fn pade_of_log1p_half() {
        let s = PowerSeries::log1p_scaled(c(0.5), 8).unwrap();
        let r = pade(&s, 1, 1).unwrap();
        assert_poly(r.num(), &[0.0, 0.5], 1e-15);
        assert_poly(r.den(), &[1.0, 0.25], 1e-15);
    }

    #[test]
    fn pade_of_geometric_is_exact() {
        let s = PowerSeries::geometric(c(0.5), 8).unwrap();
        let r = pade(&s, 1, 1).unwrap();
        assert_poly(r.num(), &[1.0], 1e-15);
        assert_poly(r.den(), &[1.0, -0.5], 1e-15);
    }

    #[test]
    fn pade_without_denominator_is_truncation() {
        let s = PowerSeries::log1p_scaled(c(0.5), 8).unwrap();
        let r = pade(&s, 3, 0).unwrap();
        assert_poly(r.num(), &[0.0, 0.5, -0.125, 1.0 / 24.0], 1e-15);
        assert_poly(r.den(), &[1.0], 0.0);
    }

    #[test]
    fn pade_rejects_degenerate_table() {
        // exact (0, 1) function asked for a (1, 2) approximant
        let s = PowerSeries::geometric(c(0.5), 8).unwrap();
        assert!(matches!(pade(&s, 1, 2), Err(Error::SingularPadeSystem { .. })));
        assert!(matches!(pade(&s, 5, 5), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn taylor_examples() {
        let r = RationalTransfer::from_real(&[1.0], &[1.0, -0.5]).unwrap();
        let t = r.taylor(4);
        let expected = [1.0, 0.5, 0.25, 0.125, 0.0625];
        for (a, b) in t.coeffs().iter().zip(expected) {
            assert_eq!(*a, c(b));
        }
        let d = t.decay().unwrap();
        assert!(d.rate > 0.5 && d.rate < 1.0);

        let r = RationalTransfer::from_real(&[0.0, 0.5], &[1.0, 0.25]).unwrap();
        let t = r.taylor(3);
        for (a, b) in t.coeffs().iter().zip([0.0, 0.5, -0.125, 1.0 / 32.0]) {
            assert!((a - c(b)).norm() < 1e-16);
        }

        let t = RationalTransfer::constant(ONE).taylor(3);
        assert_eq!(t.coeffs(), &[ONE, ZERO, ZERO, ZERO]);
        assert!(t.is_polynomial());
    }

    #[test]
    fn taylor_certificate_holds_far_past_the_stored_order() {
        let r = RationalTransfer::new(
            Polynomial::from_real(&[0.3, -0.2, 0.7]),
            Polynomial::from_roots_unit_constant(&[c(1.05), c(1.05), Complex64::new(-0.3, 1.2)]),
        )
        .unwrap();
        let t = r.taylor(16);
        let d = t.decay().unwrap();
        for (n, coeff) in r.taylor_coeffs(4000).iter().enumerate() {
            assert!(coeff.norm() <= d.constant * d.rate.powi(n as i32) * (1.0 + 1e-9));
        }
    }

    #[test]
    fn root_examples() {
        let r = roots(&Polynomial::from_real(&[1.0, -2.0]), ON_CIRCLE_TOL).unwrap();
        assert!((r.roots[0].location - c(0.5)).norm() < 1e-15);
        assert_eq!(r.roots[0].class, RootClass::Inside);

        let r = roots(&Polynomial::from_real(&[1.0, -0.5]), ON_CIRCLE_TOL).unwrap();
        assert!((r.roots[0].location - c(2.0)).norm() < 1e-15);
        assert_eq!(r.roots[0].class, RootClass::Outside);

        let r = roots(&Polynomial::from_real(&[1.0, -1.0]), ON_CIRCLE_TOL).unwrap();
        assert_eq!(r.roots[0].class, RootClass::OnCircle);

        assert!(matches!(roots(&Polynomial::from_real(&[3.0]), 1e-8), Err(Error::EmptyReport)));
    }

    #[test]
    fn roots_with_multiplicity_and_origin() {
        // z²(z − 2)² = z⁴ − 4z³ + 4z²
        let p = Polynomial::from_real(&[0.0, 0.0, 4.0, -4.0, 1.0]);
        let r = roots(&p, 1e-8).unwrap();
        assert_eq!(r.roots.len(), 4);
        let at_origin = r.roots.iter().filter(|x| x.location == ZERO).count();
        assert_eq!(at_origin, 2);
        for x in r.roots.iter().filter(|x| x.location != ZERO) {
            assert!((x.location - c(2.0)).norm() < 1e-6);
        }
    }

    #[test]
    fn predicate_examples() {
        let ar_half = RationalTransfer::from_real(&[1.0], &[1.0, -0.5]).unwrap();
        assert!(ar_half.is_stationary().holds);
        let ar_two = RationalTransfer::from_real(&[1.0], &[1.0, -2.0]).unwrap();
        assert!(!ar_two.is_stationary().holds);
        assert!(RationalTransfer::constant(ONE).is_stationary().holds);

        assert!(RationalTransfer::from_real(&[1.0, -0.5], &[1.0]).unwrap().is_invertible().holds);
        assert!(!RationalTransfer::from_real(&[1.0, -2.0], &[1.0]).unwrap().is_invertible().holds);
        let pade11 = RationalTransfer::from_real(&[0.0, 0.5], &[1.0, 0.25]).unwrap();
        assert!(!pade11.is_invertible().holds);

        let unit_root = RationalTransfer::from_real(&[1.0], &[1.0, -1.0]).unwrap();
        let v = unit_root.is_stationary();
        assert!(!v.holds);
        assert_eq!(v.report.roots[0].class, RootClass::OnCircle);
    }

    #[test]
    fn formal_inverse_examples() {
        let ma = RationalTransfer::from_real(&[1.0, -0.5], &[1.0]).unwrap();
        let inv = ma.formal_inverse().unwrap();
        assert_poly(inv.num(), &[1.0], 0.0);
        assert_poly(inv.den(), &[1.0, -0.5], 0.0);
        assert_eq!(inv.formal_inverse().unwrap(), ma);

        let pade11 = RationalTransfer::from_real(&[0.0, 0.5], &[1.0, 0.25]).unwrap();
        assert!(matches!(pade11.formal_inverse(), Err(Error::NotInvertibleAtOrigin)));

        // renormalization to q(0) = 1
        let r = RationalTransfer::from_real(&[2.0, 1.0], &[1.0, 0.1]).unwrap();
        let inv = r.formal_inverse().unwrap();
        assert_poly(inv.num(), &[0.5, 0.05], 1e-15);
        assert_poly(inv.den(), &[1.0, 0.5], 1e-15);
    }

    #[test]
    fn eval_examples() {
        let r = RationalTransfer::from_real(&[1.0], &[1.0, -0.5]).unwrap();
        assert_eq!(r.eval(ONE).unwrap(), c(2.0));
        let r = RationalTransfer::from_real(&[0.0, 0.5], &[1.0, 0.25]).unwrap();
        assert!((r.eval(c(-1.0)).unwrap() - c(-2.0 / 3.0)).norm() < 1e-15);
        let r = RationalTransfer::from_real(&[1.0], &[1.0, -1.0]).unwrap();
        assert!(matches!(r.eval(ONE), Err(Error::PoleHit { .. })));
    }

    #[test]
    fn common_factors_cancel() {
        // (1 − z/2)(1 + z) / ((1 − z/2)(1 − z/3))
        let shared = Polynomial::from_real(&[1.0, -0.5]);
        let num = shared.mul(&Polynomial::from_real(&[1.0, 1.0]));
        let den = shared.mul(&Polynomial::from_real(&[1.0, -1.0 / 3.0]));
        let r = RationalTransfer::new(num, den).unwrap();
        assert_eq!(r.degrees(), (1, 1));
        assert_poly(r.num(), &[1.0, 1.0], 1e-12);
        assert_poly(r.den(), &[1.0, -1.0 / 3.0], 1e-12);

        let r = RationalTransfer::from_real(&[0.0, 0.0, 1.0], &[0.0, 2.0]).unwrap();
        assert_poly(r.num(), &[0.0, 0.5], 0.0);
        assert!(RationalTransfer::from_real(&[1.0], &[0.0, 1.0]).is_err());
    }

    #[test]
    fn root_reconstruction_on_random_polynomials() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let degree = rng.random_range(1..=12);
            let coeffs: Vec<Complex64> = (0..=degree)
                .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect();
            let p = Polynomial::new(coeffs);
            let report = roots(&p, ON_CIRCLE_TOL).unwrap();
            assert_eq!(report.roots.len(), p.degree());
            let rebuilt = report.reconstruct(p.leading());
            let scale = p.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max);
            for (a, b) in rebuilt.coeffs().iter().zip(p.coeffs()) {
                assert!((a - b).norm() <= 1e-8 * scale, "{p:?}");
            }
        }
    }

    #[test]
    fn pade_matches_taylor_on_random_series() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut checked = 0;
        for _ in 0..300 {
            let r = sampling::stationary_rational(&mut rng, 4, 4, 1.1);
            let s = r.taylor(16);
            let m = rng.random_range(0..=4);
            let n = rng.random_range(0..=(8 - m).min(4));
            let Ok(approx) = pade(&s, m, n) else { continue };
            let t = approx.taylor(m + n);
            for k in 0..=m + n {
                assert!((t.coeff(k) - s.coeff(k)).norm() < 1e-8, "({m},{n}) at {k}");
            }
            checked += 1;
        }
        assert!(checked > 200);
    }

    #[test]
    fn invertibility_agrees_with_inverse_stationarity() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..300 {
            let r = sampling::rational_with_mixed_roots(&mut rng, 4, 4);
            if r.num().coeff(0) == ZERO {
                continue;
            }
            let inv = r.formal_inverse().unwrap();
            assert_eq!(r.is_invertible().holds, inv.is_stationary().holds);
            let order = 24;
            let lhs = inv.taylor(order);
            let rhs = r.taylor(order).reciprocal().unwrap();
            let scale = lhs.coeffs().iter().map(|c| c.norm()).fold(1.0, f64::max);
            for k in 0..=order {
                assert!((lhs.coeff(k) - rhs.coeff(k)).norm() <= 1e-10 * scale);
            }
        }
    }

    proptest! {
        #[test]
        fn deflation_removes_exact_root(re in -2.0f64..2.0, im in -2.0f64..2.0, a in -1.0f64..1.0, b in -1.0f64..1.0) {
            let root = Complex64::new(re, im);
            let other = Polynomial::new(vec![Complex64::new(a, b), ONE, c(0.5)]);
            let p = other.mul(&Polynomial::new(vec![-root, ONE]));
            let q = p.deflate(root);
            for (x, y) in q.coeffs().iter().zip(other.coeffs()) {
                prop_assert!((x - y).norm() < 1e-12);
            }
        }
    }
}
