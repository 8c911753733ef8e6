//! Truncated formal power series over the complex numbers.
//!
//! A [`PowerSeries`] stores the coefficients `c_0..=c_K` of `x(z) = Σ c_n zⁿ`
//! together with what is known about the coefficients it does not store:
//! nothing ([`Tail::Unknown`]), that they vanish ([`Tail::Zero`]), or a
//! certified geometric envelope `|c_n| ≤ C·rⁿ` ([`Tail::Decay`]). The tail
//! information is what lets evaluation on the unit circle and `ℓ²` norms come
//! with error bounds.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{Polynomial, RationalTransfer};

/// Default truncation order for expansions.
pub const DEFAULT_ORDER: usize = 256;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Certified envelope `|c_n| ≤ constant · rateⁿ` for every coefficient of the
/// underlying (untruncated) series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Decay {
    pub rate: f64,
    pub constant: f64,
}

impl Decay {
    /// `ℓ²` bound on the coefficients with index greater than `order`.
    pub fn l2_tail(&self, order: usize) -> f64 {
        self.constant * self.rate.powi(order as i32 + 1) / (1.0 - self.rate * self.rate).sqrt()
    }

    /// Bound on `|Σ_{n>order} c_n zⁿ|` for `|z| = modulus`; `None` when the
    /// geometric envelope does not converge there.
    pub fn eval_tail(&self, order: usize, modulus: f64) -> Option<f64> {
        let ratio = self.rate * modulus;
        (ratio < 1.0).then(|| self.constant * ratio.powi(order as i32 + 1) / (1.0 - ratio))
    }
}

/// What is known about the coefficients beyond the stored order.
#[derive(Debug, Clone, PartialEq)]
pub enum Tail {
    /// The series is a polynomial; every unstored coefficient is zero.
    Zero,
    Decay(Decay),
    Unknown,
}

/// Analytic functions the crate knows how to evaluate exactly.
#[derive(Debug, Clone, PartialEq)]
pub enum ClosedForm {
    /// `1 / (1 − a z)`
    Geometric(Complex64),
    /// `log(1 + a z)`, principal branch
    Log1p(Complex64),
    Rational(Box<RationalTransfer>),
    /// `exp(−(1 + z)/(1 − z))`: bounded on the disk, discontinuous at `z = 1`.
    InnerExp,
}

impl ClosedForm {
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        match self {
            ClosedForm::Geometric(a) => {
                let den = ONE - a * z;
                if den.norm() < 1e-14 {
                    return Err(Error::PoleHit { re: z.re, im: z.im });
                }
                Ok(den.inv())
            }
            ClosedForm::Log1p(a) => {
                let az = a * z;
                if az.norm() > 1.0 + 1e-12 {
                    return Err(Error::UncertifiedEvaluation { modulus: z.norm() });
                }
                let w = ONE + az;
                if w.norm() < 1e-300 {
                    return Err(Error::PoleHit { re: z.re, im: z.im });
                }
                Ok(w.ln())
            }
            ClosedForm::Rational(r) => r.eval(z),
            ClosedForm::InnerExp => {
                let den = ONE - z;
                if den.norm() < 1e-14 {
                    return Err(Error::PoleHit { re: z.re, im: z.im });
                }
                Ok((-(ONE + z) / den).exp())
            }
        }
    }

    /// Taylor coefficients `c_0..=c_order`.
    pub fn coeffs(&self, order: usize) -> Result<PowerSeries> {
        match self {
            ClosedForm::Geometric(a) => PowerSeries::geometric(*a, order),
            ClosedForm::Log1p(a) => PowerSeries::log1p_scaled(*a, order),
            ClosedForm::Rational(r) => Ok(r.taylor(order)),
            ClosedForm::InnerExp => Ok(inner_exp_series(order)),
        }
    }

    /// Exact `Σ_{n>order} |c_n|²` where a closed expression is available.
    pub fn l2_tail_sq(&self, order: usize) -> Option<f64> {
        match self {
            ClosedForm::Geometric(a) => {
                let t = a.norm_sqr();
                (t < 1.0).then(|| t.powi(order as i32 + 1) / (1.0 - t))
            }
            ClosedForm::Log1p(a) => {
                let t = a.norm_sqr();
                if t > 1.0 {
                    None
                } else if t == 1.0 {
                    Some(inverse_square_tail(order))
                } else {
                    Some(weighted_inverse_square_tail(t, order))
                }
            }
            ClosedForm::Rational(r) if r.den().degree() == 0 => {
                let tail = r.num().coeffs().iter().skip(order + 1);
                Some(tail.map(|c| c.norm_sqr()).sum::<f64>() / r.den().coeff(0).norm_sqr())
            }
            ClosedForm::Rational(_) | ClosedForm::InnerExp => None,
        }
    }
}

/// `Σ_{n>order} 1/n²`, i.e. the trigamma function at `order + 1`.
pub fn inverse_square_tail(order: usize) -> f64 {
    let mut x = order as f64 + 1.0;
    let mut head = 0.0;
    while x < 20.0 {
        head += 1.0 / (x * x);
        x += 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    // asymptotic expansion of ψ'(x)
    let series = inv
        + inv2 / 2.0
        + inv
            * inv2
            * (1.0 / 6.0 - inv2 * (1.0 / 30.0 - inv2 * (1.0 / 42.0 - inv2 * (1.0 / 30.0 - inv2 * 5.0 / 66.0))));
    head + series
}

fn weighted_inverse_square_tail(t: f64, order: usize) -> f64 {
    let mut sum = 0.0;
    let mut power = t.powi(order as i32 + 1);
    let mut n = order as f64 + 1.0;
    while power > 0.0 {
        let term = power / (n * n);
        sum += term;
        if term <= sum * 1e-18 {
            break;
        }
        power *= t;
        n += 1.0;
    }
    sum
}

/// Coefficients of `exp(−(1+z)/(1−z))`, whose exponent is `−1 − 2 Σ_{n≥1} zⁿ`.
pub fn inner_exp_series(order: usize) -> PowerSeries {
    let mut exponent = vec![Complex64::new(-2.0, 0.0); order + 1];
    exponent[0] = Complex64::new(-1.0, 0.0);
    let mut h = PowerSeries::from_coeffs(exponent).exp_series();
    h.closed_form = Some(ClosedForm::InnerExp);
    h
}

/// Value of a series at a point together with a bound on the truncation error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Evaluation {
    pub value: Complex64,
    pub error_bound: f64,
}

/// An `ℓ²` norm over stored coefficients plus a bound on the unstored part.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct L2Norm {
    pub value: f64,
    pub tail_bound: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PowerSeries {
    coeffs: Vec<Complex64>,
    tail: Tail,
    closed_form: Option<ClosedForm>,
}

impl PowerSeries {
    /// A truncation of some unknown series. No tail information.
    pub fn from_coeffs(coeffs: Vec<Complex64>) -> Self {
        Self::with_tail(coeffs, Tail::Unknown)
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    /// A polynomial: every coefficient past the last stored one is zero.
    pub fn polynomial(coeffs: Vec<Complex64>) -> Self {
        Self::with_tail(coeffs, Tail::Zero)
    }

    pub fn polynomial_real(coeffs: &[f64]) -> Self {
        Self::polynomial(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    /// Attaches a decay certificate after checking it against the stored coefficients.
    pub fn with_decay(coeffs: Vec<Complex64>, decay: Decay) -> Result<Self> {
        if !(0.0..1.0).contains(&decay.rate) || decay.constant.is_nan() || decay.constant < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "decay rate must lie in [0, 1) and constant be nonnegative, got {decay:?}"
            )));
        }
        for (n, c) in coeffs.iter().enumerate() {
            let bound = decay.constant * decay.rate.powi(n as i32);
            if c.norm() > bound * (1.0 + 1e-12) + 1e-300 {
                return Err(Error::InvalidArgument(format!(
                    "coefficient {n} violates the decay certificate ({} > {bound})",
                    c.norm()
                )));
            }
        }
        Ok(Self::with_tail(coeffs, Tail::Decay(decay)))
    }

    pub(crate) fn with_tail(mut coeffs: Vec<Complex64>, tail: Tail) -> Self {
        if coeffs.is_empty() {
            coeffs.push(ZERO);
        }
        Self { coeffs, tail, closed_form: None }
    }

    pub(crate) fn attach_closed_form(mut self, closed_form: ClosedForm) -> Self {
        self.closed_form = Some(closed_form);
        self
    }

    pub fn zero(order: usize) -> Self {
        Self::polynomial(vec![ZERO; order + 1])
    }

    /// The multiplicative unit `1 + 0·z + ...` through `order`.
    pub fn one(order: usize) -> Self {
        let mut coeffs = vec![ZERO; order + 1];
        coeffs[0] = ONE;
        Self::polynomial(coeffs)
    }

    /// `Σ aⁿ zⁿ = 1/(1 − a z)` truncated at `order`.
    pub fn geometric(a: Complex64, order: usize) -> Result<Self> {
        let modulus = a.norm();
        if modulus.is_nan() || modulus >= 1.0 {
            return Err(Error::InvalidArgument(format!("geometric ratio must satisfy |a| < 1, got |a| = {modulus}")));
        }
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut power = ONE;
        for _ in 0..=order {
            coeffs.push(power);
            power *= a;
        }
        let tail = if modulus == 0.0 { Tail::Zero } else { Tail::Decay(Decay { rate: modulus, constant: 1.0 }) };
        Ok(Self::with_tail(coeffs, tail).attach_closed_form(ClosedForm::Geometric(a)))
    }

    /// `log(1 + a z) = Σ_{n≥1} (−1)^{n+1} aⁿ zⁿ / n` truncated at `order`.
    pub fn log1p_scaled(a: Complex64, order: usize) -> Result<Self> {
        let modulus = a.norm();
        if modulus == 0.0 || modulus > 1.0 {
            return Err(Error::InvalidArgument(format!("log1p_scaled requires 0 < |a| <= 1, got |a| = {modulus}")));
        }
        let mut coeffs = vec![ZERO; order + 1];
        let mut power = ONE;
        for (n, c) in coeffs.iter_mut().enumerate().skip(1) {
            power *= a;
            let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
            *c = power * (sign / n as f64);
        }
        let tail = if modulus < 1.0 { Tail::Decay(Decay { rate: modulus, constant: 1.0 }) } else { Tail::Unknown };
        Ok(Self::with_tail(coeffs, tail).attach_closed_form(ClosedForm::Log1p(a)))
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Stored coefficient `n`, or zero beyond the stored order.
    pub fn coeff(&self, n: usize) -> Complex64 {
        self.coeffs.get(n).copied().unwrap_or(ZERO)
    }

    pub fn tail(&self) -> &Tail {
        &self.tail
    }

    pub fn decay(&self) -> Option<Decay> {
        match self.tail {
            Tail::Decay(d) => Some(d),
            _ => None,
        }
    }

    pub fn closed_form(&self) -> Option<&ClosedForm> {
        self.closed_form.as_ref()
    }

    pub fn is_polynomial(&self) -> bool {
        self.tail == Tail::Zero
    }

    /// Keeps coefficients through `order` (padding with zeros only when the
    /// padding is exact).
    pub fn truncate(&self, order: usize) -> Result<Self> {
        if order > self.order() && !self.is_polynomial() {
            return Err(Error::InvalidArgument(format!(
                "cannot extend a truncated series from order {} to {order}",
                self.order()
            )));
        }
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order + 1, ZERO);
        let tail = match &self.tail {
            Tail::Zero if self.coeffs.iter().skip(order + 1).any(|c| *c != ZERO) => {
                // dropped coefficients become the tail
                envelope_of(&self.coeffs, 0.5)
            }
            other => other.clone(),
        };
        Ok(Self { coeffs, tail, closed_form: self.closed_form.clone() })
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a - b)
    }

    fn combine(&self, other: &Self, op: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        // Zero-padding the shorter operand is only exact for polynomials.
        let order = match (self.is_polynomial(), other.is_polynomial()) {
            (true, true) => self.order().max(other.order()),
            (true, false) if self.order() <= other.order() => other.order(),
            (false, true) if other.order() <= self.order() => self.order(),
            _ => self.order().min(other.order()),
        };
        let coeffs: Vec<Complex64> = (0..=order).map(|n| op(self.coeff(n), other.coeff(n))).collect();
        let tail = match (&self.tail, &other.tail) {
            (Tail::Zero, Tail::Zero) => Tail::Zero,
            (Tail::Decay(a), Tail::Decay(b)) => {
                Tail::Decay(Decay { rate: a.rate.max(b.rate), constant: a.constant + b.constant })
            }
            (Tail::Zero, Tail::Decay(d)) | (Tail::Decay(d), Tail::Zero) => {
                let stored =
                    coeffs.iter().enumerate().map(|(n, c)| c.norm() / d.rate.powi(n as i32)).fold(d.constant, f64::max);
                Tail::Decay(Decay { rate: d.rate, constant: stored })
            }
            _ => Tail::Unknown,
        };
        Self { coeffs, tail, closed_form: None }
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        let coeffs = self.coeffs.iter().map(|c| c * factor).collect();
        let tail = match &self.tail {
            _ if factor == ZERO => Tail::Zero,
            Tail::Decay(d) => Tail::Decay(Decay { rate: d.rate, constant: d.constant * factor.norm() }),
            other => other.clone(),
        };
        Self { coeffs, tail, closed_form: None }
    }

    /// Cauchy product, truncated at the smaller order (the full product when
    /// both factors are polynomials).
    pub fn mul(&self, other: &Self) -> Self {
        // A polynomial factor is known at every index, so only the other
        // operand's truncation limits the product.
        let order = match (self.is_polynomial(), other.is_polynomial()) {
            (true, true) => self.order() + other.order(),
            (true, false) => other.order(),
            (false, true) => self.order(),
            (false, false) => self.order().min(other.order()),
        };
        let mut coeffs = vec![ZERO; order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if *a == ZERO {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(order + 1 - i) {
                coeffs[i + j] += a * b;
            }
        }
        let tail = product_tail(self, other);
        Self { coeffs, tail, closed_form: None }
    }

    /// Multiplicative inverse `1/s` through the same order.
    pub fn reciprocal(&self) -> Result<Self> {
        let c0 = self.coeffs[0];
        if c0 == ZERO {
            return Err(Error::NotInvertibleAtOrigin);
        }
        let inv0 = c0.inv();
        let order = self.order();
        let mut out = Vec::with_capacity(order + 1);
        out.push(inv0);
        for n in 1..=order {
            let acc: Complex64 = (1..=n).map(|k| self.coeffs[k] * out[n - k]).sum();
            out.push(-acc * inv0);
        }

        // Rational inverses inherit a certificate from the pole locations.
        let inverse = match (&self.tail, &self.closed_form) {
            (Tail::Zero, _) => {
                RationalTransfer::new(Polynomial::new(vec![ONE]), Polynomial::new(self.coeffs.clone())).ok()
            }
            (_, Some(ClosedForm::Rational(r))) => r.formal_inverse().ok(),
            (_, Some(ClosedForm::Geometric(a))) => {
                return Ok(Self::polynomial(out).attach_closed_form(ClosedForm::Rational(Box::new(
                    RationalTransfer::polynomial(Polynomial::new(vec![ONE, -a])),
                ))));
            }
            _ => None,
        };
        Ok(match inverse {
            Some(r) => r.taylor(order),
            None => Self::from_coeffs(out),
        })
    }

    /// `exp(s)` via the recursion `n·u_n = Σ_{k=1}^{n} k·g_k·u_{n−k}` on
    /// `g = s − c_0`, scaled by `e^{c_0}`.
    pub fn exp_series(&self) -> Self {
        let order = self.order();
        let mut u = Vec::with_capacity(order + 1);
        u.push(ONE);
        for n in 1..=order {
            let acc: Complex64 = (1..=n).map(|k| self.coeffs[k] * (k as f64) * u[n - k]).sum();
            u.push(acc / n as f64);
        }
        let scale = self.coeffs[0].exp();
        Self::from_coeffs(u.into_iter().map(|c| c * scale).collect())
    }

    /// Principal `log(s)`, inverse of [`exp_series`](Self::exp_series).
    pub fn log_series(&self) -> Result<Self> {
        let c0 = self.coeffs[0];
        if c0 == ZERO {
            return Err(Error::NotInvertibleAtOrigin);
        }
        let order = self.order();
        let u: Vec<Complex64> = self.coeffs.iter().map(|c| c / c0).collect();
        let mut l = Vec::with_capacity(order + 1);
        l.push(c0.ln());
        for n in 1..=order {
            let acc: Complex64 = (1..n).map(|k| l[k] * (k as f64) * u[n - k]).sum();
            l.push(u[n] - acc / n as f64);
        }
        Ok(Self::from_coeffs(l))
    }

    /// Exact or bounded `ℓ²` norm of the coefficients past `order`.
    pub fn tail_l2_beyond(&self, order: usize) -> Option<f64> {
        if let Some(sq) = self.closed_form.as_ref().and_then(|cf| cf.l2_tail_sq(order)) {
            return Some(sq.sqrt());
        }
        let stored: f64 = self.coeffs.iter().skip(order + 1).map(|c| c.norm_sqr()).sum();
        match &self.tail {
            Tail::Zero => Some(stored.sqrt()),
            Tail::Decay(d) => Some(stored.sqrt() + d.l2_tail(self.order())),
            Tail::Unknown => None,
        }
    }

    /// `sqrt(Σ_{n≤K} |c_n|²)` with a bound on the omitted tail.
    pub fn l2_norm(&self) -> L2Norm {
        let value = self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        let tail_bound = match &self.tail {
            Tail::Zero => Some(0.0),
            Tail::Decay(d) => Some(d.l2_tail(self.order())),
            Tail::Unknown => self.closed_form.as_ref().and_then(|cf| cf.l2_tail_sq(self.order())).map(f64::sqrt),
        };
        L2Norm { value, tail_bound }
    }

    /// Root-test estimate `max |c_n|^{1/n}` over the last `window` stored
    /// indices. Heuristic: it only inspects finitely many coefficients.
    pub fn root_test(&self, window: usize) -> f64 {
        let order = self.order();
        let start = order.saturating_sub(window.saturating_sub(1)).max(1);
        (start..=order)
            .filter(|&n| self.coeffs[n] != ZERO)
            .map(|n| self.coeffs[n].norm().powf(1.0 / n as f64))
            .fold(0.0, f64::max)
    }

    /// Horner sum of the stored coefficients.
    pub fn partial_sum(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, c| acc * z + c)
    }

    /// Value at `z` with a certified truncation bound, falling back to the
    /// attached closed form when the tail is not controlled at `|z|`.
    pub fn eval(&self, z: Complex64) -> Result<Evaluation> {
        let modulus = z.norm();
        match &self.tail {
            Tail::Zero => {
                return Ok(Evaluation { value: self.partial_sum(z), error_bound: 0.0 });
            }
            Tail::Decay(d) => {
                if let Some(bound) = d.eval_tail(self.order(), modulus) {
                    return Ok(Evaluation { value: self.partial_sum(z), error_bound: bound });
                }
            }
            Tail::Unknown => {}
        }
        if modulus == 0.0 {
            return Ok(Evaluation { value: self.coeffs[0], error_bound: 0.0 });
        }
        match &self.closed_form {
            Some(cf) => Ok(Evaluation { value: cf.eval(z)?, error_bound: 0.0 }),
            None => Err(Error::UncertifiedEvaluation { modulus }),
        }
    }
}

/// Envelope `C·rateⁿ` covering a finite coefficient list.
fn envelope_of(coeffs: &[Complex64], rate: f64) -> Tail {
    let constant = coeffs.iter().enumerate().map(|(n, c)| c.norm() / rate.powi(n as i32)).fold(0.0, f64::max);
    Tail::Decay(Decay { rate, constant })
}

fn product_tail(a: &PowerSeries, b: &PowerSeries) -> Tail {
    match (&a.tail, &b.tail) {
        (Tail::Zero, Tail::Zero) => Tail::Zero,
        (Tail::Zero, Tail::Decay(d)) => polynomial_times_decay(&a.coeffs, d),
        (Tail::Decay(d), Tail::Zero) => polynomial_times_decay(&b.coeffs, d),
        (Tail::Decay(x), Tail::Decay(y)) => {
            let (hi, lo) = if x.rate >= y.rate { (x.rate, y.rate) } else { (y.rate, x.rate) };
            let constant = x.constant * y.constant;
            if hi == 0.0 {
                return Tail::Zero;
            }
            let ratio = lo / hi;
            if ratio < 0.999 {
                // Σ_k hi^k lo^{n-k} ≤ hiⁿ / (1 − lo/hi)
                Tail::Decay(Decay { rate: hi, constant: constant / (1.0 - ratio) })
            } else {
                // (n+1)·hiⁿ ≤ K·rⁿ with r halfway to 1
                let rate = 0.5 * (1.0 + hi);
                let t = hi / rate;
                let mut best: f64 = 1.0;
                let mut term = 1.0;
                let mut n = 0.0;
                loop {
                    n += 1.0;
                    term *= t;
                    let value = (n + 1.0) * term;
                    if value < best {
                        break;
                    }
                    best = value;
                }
                Tail::Decay(Decay { rate, constant: constant * best })
            }
        }
        _ => Tail::Unknown,
    }
}

fn polynomial_times_decay(poly: &[Complex64], d: &Decay) -> Tail {
    if d.rate == 0.0 {
        // the decaying factor is a constant
        return Tail::Zero;
    }
    let weight: f64 = poly.iter().enumerate().map(|(k, c)| c.norm() / d.rate.powi(k as i32)).sum();
    Tail::Decay(Decay { rate: d.rate, constant: d.constant * weight })
}

/// Transfer function of a purely nondeterministic process `X_t = x(L)ε_t`.
#[derive(Debug, Clone, PartialEq)]
pub enum Transfer {
    Series(PowerSeries),
    Rational(RationalTransfer),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProcessSpec {
    pub transfer: Transfer,
    pub label: String,
}

impl ProcessSpec {
    pub fn series(label: impl Into<String>, series: PowerSeries) -> Self {
        Self { transfer: Transfer::Series(series), label: label.into() }
    }

    pub fn rational(label: impl Into<String>, rational: RationalTransfer) -> Self {
        Self { transfer: Transfer::Rational(rational), label: label.into() }
    }

    /// Wold coefficients through `order`.
    pub fn expand(&self, order: usize) -> Result<PowerSeries> {
        match &self.transfer {
            Transfer::Rational(r) => Ok(r.taylor(order)),
            Transfer::Series(s) if order <= s.order() || s.is_polynomial() => s.truncate(order),
            Transfer::Series(s) => match s.closed_form() {
                Some(cf) => cf.coeffs(order),
                None => Err(Error::InvalidArgument(format!(
                    "series of order {} cannot be expanded to order {order}",
                    s.order()
                ))),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn assert_coeffs(s: &PowerSeries, expected: &[f64], tol: f64) {
        assert_eq!(s.coeffs().len(), expected.len(), "length of {:?}", s.coeffs());
        for (a, b) in s.coeffs().iter().zip(expected) {
            assert!((a - c(*b)).norm() <= tol, "{:?} vs {expected:?}", s.coeffs());
        }
    }

    /// Independent Cauchy product used as an oracle.
    fn convolve(a: &[Complex64], b: &[Complex64], order: usize) -> Vec<Complex64> {
        (0..=order)
            .map(|n| (0..=n).filter(|&k| k < a.len() && n - k < b.len()).map(|k| a[k] * b[n - k]).sum())
            .collect()
    }

    #[test]
    fn geometric_examples() {
        let s = PowerSeries::geometric(c(0.5), 3).unwrap();
        assert_coeffs(&s, &[1.0, 0.5, 0.25, 0.125], 0.0);
        assert_eq!(s.decay(), Some(Decay { rate: 0.5, constant: 1.0 }));
        assert_coeffs(&PowerSeries::geometric(c(0.0), 2).unwrap(), &[1.0, 0.0, 0.0], 0.0);
        assert_coeffs(&PowerSeries::geometric(c(-0.25), 2).unwrap(), &[1.0, -0.25, 0.0625], 0.0);
        assert!(PowerSeries::geometric(c(1.0), 4).is_err());
        assert!(PowerSeries::geometric(Complex64::new(0.8, 0.8), 4).is_err());
    }

    #[test]
    fn log1p_examples() {
        let s = PowerSeries::log1p_scaled(c(0.5), 3).unwrap();
        assert_coeffs(&s, &[0.0, 0.5, -0.125, 1.0 / 24.0], 1e-15);
        let s = PowerSeries::log1p_scaled(c(1.0), 3).unwrap();
        assert_coeffs(&s, &[0.0, 1.0, -0.5, 1.0 / 3.0], 1e-15);
        assert!(s.decay().is_none());
        assert_coeffs(&PowerSeries::log1p_scaled(c(0.5), 1).unwrap(), &[0.0, 0.5], 0.0);
        assert!(PowerSeries::log1p_scaled(c(0.0), 3).is_err());
    }

    #[test]
    fn arithmetic_examples() {
        let g = PowerSeries::geometric(c(0.5), 4).unwrap();
        let p = PowerSeries::from_real(&[1.0, -0.5]);
        let prod = g.mul(&p);
        assert_eq!(prod.order(), 1);
        let p = PowerSeries::polynomial_real(&[1.0, -0.5]);
        assert_coeffs(&g.mul(&p), &[1.0, 0.0, 0.0, 0.0, 0.0], 1e-15);

        let l = PowerSeries::log1p_scaled(c(0.5), 2).unwrap();
        assert_coeffs(&l.add(&l), &[0.0, 1.0, -0.25], 1e-15);

        let z = PowerSeries::from_real(&[0.0, 1.0]);
        let zz = PowerSeries::polynomial_real(&[0.0, 1.0]);
        assert_coeffs(&zz.mul(&zz), &[0.0, 0.0, 1.0], 0.0);
        assert_coeffs(&z.mul(&z), &[0.0, 0.0], 0.0);
    }

    #[test]
    fn reciprocal_examples() {
        let s = PowerSeries::polynomial_real(&[1.0, -0.5, 0.0, 0.0, 0.0]);
        let r = s.reciprocal().unwrap();
        assert_coeffs(&r, &[1.0, 0.5, 0.25, 0.125, 0.0625], 1e-15);
        assert!(r.decay().is_some());

        assert_coeffs(&PowerSeries::one(3).reciprocal().unwrap(), &[1.0, 0.0, 0.0, 0.0], 0.0);

        let s = PowerSeries::from_real(&[1.0, -2.0, 0.0, 0.0, 0.0, 0.0]);
        let r = s.reciprocal().unwrap();
        assert_coeffs(&r, &[1.0, 2.0, 4.0, 8.0, 16.0, 32.0], 1e-12);
        let unit = convolve(s.coeffs(), r.coeffs(), 5);
        assert_coeffs(&PowerSeries::from_coeffs(unit), &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0], 1e-12);

        let err = PowerSeries::from_real(&[0.0, 1.0]).reciprocal().unwrap_err();
        assert!(matches!(err, Error::NotInvertibleAtOrigin));
    }

    #[test]
    fn reciprocal_of_geometric_is_exact_polynomial() {
        let g = PowerSeries::geometric(c(0.5), 8).unwrap();
        let r = g.reciprocal().unwrap();
        assert!(r.is_polynomial());
        assert_coeffs(&r, &[1.0, -0.5, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0], 1e-15);
    }

    #[test]
    fn exp_examples() {
        assert_coeffs(&PowerSeries::zero(3).exp_series(), &[1.0, 0.0, 0.0, 0.0], 0.0);

        // exp(log(1 + z/2)) = 1 + z/2
        let e = PowerSeries::log1p_scaled(c(0.5), 12).unwrap().exp_series();
        let mut expected = vec![0.0; 13];
        expected[0] = 1.0;
        expected[1] = 0.5;
        assert_coeffs(&e, &expected, 1e-14);

        let h = inner_exp_series(64);
        assert_abs_diff_eq!(h.coeffs()[0].re, (-1.0f64).exp(), epsilon = 1e-15);
        // h_1 = h(0)·g_1 = −2/e
        assert_abs_diff_eq!(h.coeffs()[1].re, -2.0 * (-1.0f64).exp(), epsilon = 1e-15);
    }

    #[test]
    fn exp_matches_cauchy_product_oracle() {
        // exp(a)·exp(b) = exp(a + b)
        let a = PowerSeries::from_real(&[0.1, 0.3, -0.2, 0.05, 0.0, 0.1]);
        let b = PowerSeries::from_real(&[-0.4, 0.0, 0.25, 0.1, -0.3, 0.0]);
        let lhs = convolve(a.exp_series().coeffs(), b.exp_series().coeffs(), 5);
        let rhs = a.add(&b).exp_series();
        for (x, y) in lhs.iter().zip(rhs.coeffs()) {
            assert!((x - y).norm() < 1e-14);
        }
    }

    #[test]
    fn l2_norm_examples() {
        let l = PowerSeries::log1p_scaled(c(0.5), 64).unwrap().l2_norm();
        let direct: f64 = (1..=64).map(|k| 0.25f64.powi(k) / (k * k) as f64).sum::<f64>().sqrt();
        assert_abs_diff_eq!(l.value, direct, epsilon = 1e-15);
        assert_abs_diff_eq!(l.value, 0.5173, epsilon = 1e-4);
        assert!(l.value <= (1.0f64 / 3.0).sqrt());
        assert!(l.tail_bound.unwrap() < 1e-19);

        assert_eq!(PowerSeries::polynomial_real(&[1.0]).l2_norm().value, 1.0);
        let g = PowerSeries::geometric(c(0.5), 64).unwrap().l2_norm();
        assert_abs_diff_eq!(g.value, (4.0f64 / 3.0).sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn root_test_examples() {
        let g = PowerSeries::geometric(c(0.5), 128).unwrap();
        assert_abs_diff_eq!(g.root_test(32), 0.5, epsilon = 1e-12);
        let l = PowerSeries::log1p_scaled(c(1.0), 128).unwrap();
        assert!(l.root_test(32) >= 0.95);
        let l_long = PowerSeries::log1p_scaled(c(1.0), 4096).unwrap();
        assert!(l_long.root_test(32) > l.root_test(32));
        assert_eq!(PowerSeries::zero(8).root_test(8), 0.0);
    }

    #[test]
    fn eval_examples() {
        let g = PowerSeries::geometric(c(0.5), 64).unwrap();
        let e = g.eval(c(1.0)).unwrap();
        assert!((e.value - c(2.0)).norm() <= e.error_bound + 1e-15);
        assert!(e.error_bound <= 2f64.powi(-63));

        let s = PowerSeries::from_real(&[3.0, 1.0, 2.0]);
        assert_eq!(s.eval(c(0.0)).unwrap().value, c(3.0));
        assert!(matches!(s.eval(c(0.5)), Err(Error::UncertifiedEvaluation { .. })));

        let l = PowerSeries::log1p_scaled(c(0.5), 64).unwrap();
        let e = l.eval(c(-1.0)).unwrap();
        assert_abs_diff_eq!(e.value.re, 0.5f64.ln(), epsilon = 1e-15);
        assert!(e.value.re.abs() > 0.69);
    }

    #[test]
    fn inverse_square_tail_matches_direct_sum() {
        for order in [0usize, 1, 5, 8, 19, 20, 100] {
            let direct: f64 =
                (order + 1..2_000_000).map(|n| 1.0 / (n as f64 * n as f64)).sum::<f64>() + 1.0 / 2_000_000.0;
            assert_abs_diff_eq!(inverse_square_tail(order), direct, epsilon = 1e-12);
        }
        let zeta2 = std::f64::consts::PI.powi(2) / 6.0;
        assert_abs_diff_eq!(inverse_square_tail(0), zeta2, epsilon = 1e-15);
    }

    #[test]
    fn truncation_keeps_certificates() {
        let p = PowerSeries::polynomial_real(&[1.0, 2.0, 3.0]);
        let t = p.truncate(1).unwrap();
        let d = t.decay().unwrap();
        assert!(d.constant * d.rate.powi(2) >= 3.0 - 1e-12);
        assert!(PowerSeries::from_real(&[1.0]).truncate(3).is_err());
        assert_eq!(p.truncate(5).unwrap().order(), 5);
    }

    #[test]
    fn process_expansion() {
        let spec = ProcessSpec::series("log", PowerSeries::log1p_scaled(c(0.5), 8).unwrap());
        assert_eq!(spec.expand(4).unwrap().order(), 4);
        assert_eq!(spec.expand(32).unwrap().order(), 32);
        let spec = ProcessSpec::series("raw", PowerSeries::from_real(&[1.0, 2.0]));
        assert!(spec.expand(4).is_err());
    }
}
