//! Polynomial sandwich for the oriented-model series and the explicit
//! root bounds derived from it.
//!
//! The series `S(r) = sum_k d^k r^k prod_{i<k} (1 - r^i)` is squeezed between
//! two rational functions, [`f_inf`] and [`f_sup`]. Clearing denominators turns
//! `f_inf(r) <= 1` into `U(r) >= 0` and `f_sup(r) >= 1` into `L(r) <= 0`, where
//! `L` and `U` are the integer polynomials built by [`lower_polynomial`] and
//! [`upper_polynomial`]. Their roots in `(0, 1/d)` enclose the critical return
//! probability; [`r_lower`] and [`r_upper`] are closed forms lying outside that
//! enclosure.

use crate::error::{Error, Result};

/// Dense real polynomial, coefficients in ascending order of degree.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    /// Builds a polynomial, dropping trailing zero coefficients. The zero
    /// polynomial is represented by a single `0.0`.
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.len() > 1 && coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        Polynomial { coeffs }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> f64 {
        *self.coeffs.last().unwrap()
    }

    /// Horner evaluation.
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Polynomial {
        if self.coeffs.len() == 1 {
            return Polynomial::new(vec![0.0]);
        }
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| c * i as f64)
                .collect(),
        )
    }
}

/// Polynomial with exact integer coefficients, ascending order.
///
/// Used where a sign decision is part of a proof step and must not depend on
/// rounding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPolynomial {
    coeffs: Vec<i128>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<i128>) -> Self {
        while coeffs.len() > 1 && coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0);
        }
        IntPolynomial { coeffs }
    }

    pub fn coeffs(&self) -> &[i128] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Exact evaluation; `None` on `i128` overflow.
    pub fn eval_exact(&self, x: i128) -> Option<i128> {
        self.coeffs
            .iter()
            .rev()
            .try_fold(0i128, |acc, &c| acc.checked_mul(x)?.checked_add(c))
    }

    pub fn to_f64(&self) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|&c| c as f64).collect())
    }

    /// Cauchy root bound `1 + max_i |a_i / a_n|` as the exact fraction
    /// `(numerator, denominator)` of the max term.
    pub fn cauchy_ratio(&self) -> (u128, u128) {
        let n = self.degree();
        let lead = self.coeffs[n].unsigned_abs();
        let max = self.coeffs[..n]
            .iter()
            .map(|c| c.unsigned_abs())
            .max()
            .unwrap_or(0);
        (max, lead)
    }
}

/// `L(r) = -d^3 r^6 + d^3 r^5 + d^2 r^3 - 2 d r + 1`.
pub fn lower_polynomial(d: u32) -> IntPolynomial {
    let d = d as i128;
    IntPolynomial::new(vec![1, -2 * d, 0, d * d, 0, d * d * d, -d * d * d])
}

/// `U(r) = d^3 r^5 + d^2 r^3 - 2 d r + 1`.
pub fn upper_polynomial(d: u32) -> IntPolynomial {
    let d = d as i128;
    IntPolynomial::new(vec![1, -2 * d, 0, d * d, 0, d * d * d])
}

/// `d r^4 - d(d+1) r^3 + 2 d r - 1`, whose root in `(0, 1/d)` gives the 2019
/// upper bound on the return probability.
pub fn l2019_polynomial(d: u32) -> IntPolynomial {
    let d = d as i128;
    IntPolynomial::new(vec![-1, 2 * d, 0, -d * (d + 1), d])
}

/// The degree-14 polynomial in `d` whose positivity for every `d >= 2` is
/// equivalent to `U(r_upper(d)) < 0`.
pub fn certificate_polynomial() -> IntPolynomial {
    IntPolynomial::new(vec![
        -1, 0, 140, -280, -7840, 26460, 203840, -918064, -2579360, 14993216, 72342816,
        -496642048, 988904672, -801511424, 211441664,
    ])
}

fn check_series_domain(r: f64, d: u32) -> Result<f64> {
    let dr = d as f64 * r;
    if dr >= 1.0 {
        return Err(Error::Divergent(dr));
    }
    Ok(dr)
}

/// Closed-form lower envelope of the series: first two terms exact, tail
/// `sum_{k>=3} (dr)^k` weighted by `1 - r - r^2`.
pub fn f_inf(r: f64, d: u32) -> Result<f64> {
    let dr = check_series_domain(r, d)?;
    let tail = -(dr * dr * dr) / (dr - 1.0);
    Ok(dr + dr * dr * (1.0 - r) + (1.0 - r - r * r) * tail)
}

/// Closed-form upper envelope of the series, tail weighted by `(1-r)(1-r^2)`.
pub fn f_sup(r: f64, d: u32) -> Result<f64> {
    let dr = check_series_domain(r, d)?;
    let tail = -(dr * dr * dr) / (dr - 1.0);
    Ok(dr + dr * dr * (1.0 - r) + (1.0 - r) * (1.0 - r * r) * tail)
}

/// Interval known to contain a sign change of a continuous function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootBracket {
    pub lo: f64,
    pub hi: f64,
}

impl RootBracket {
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Bisection on `[lo, hi]` down to width `tol`. Requires a strict sign change
/// between the endpoints (or an exact zero at one of them).
pub fn find_root(poly: &Polynomial, lo: f64, hi: f64, tol: f64) -> Result<RootBracket> {
    let (mut lo, mut hi) = (lo.min(hi), lo.max(hi));
    let f_lo = poly.eval(lo);
    let f_hi = poly.eval(hi);
    if f_lo == 0.0 {
        return Ok(RootBracket { lo, hi: lo });
    }
    if f_hi == 0.0 {
        return Ok(RootBracket { lo: hi, hi });
    }
    if f_lo.signum() == f_hi.signum() || f_lo.is_nan() || f_hi.is_nan() {
        return Err(Error::NoSignChange { lo, hi, f_lo, f_hi });
    }
    let lo_negative = f_lo < 0.0;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = poly.eval(mid);
        if f_mid == 0.0 {
            return Ok(RootBracket { lo: mid, hi: mid });
        }
        if (f_mid < 0.0) == lo_negative {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(RootBracket { lo, hi })
}

/// Newton-Raphson iterates `t_0, t_1, ..., t_steps`.
pub fn newton_steps(poly: &Polynomial, t0: f64, steps: usize) -> Result<Vec<f64>> {
    let deriv = poly.derivative();
    let mut out = Vec::with_capacity(steps + 1);
    let mut t = t0;
    out.push(t);
    for _ in 0..steps {
        let slope = deriv.eval(t);
        if slope == 0.0 {
            return Err(Error::ZeroDerivative(t));
        }
        t -= poly.eval(t) / slope;
        out.push(t);
    }
    Ok(out)
}

/// Explicit lower bound on the root of `L`: the second Newton iterate from 0,
/// in closed form.
pub fn r_lower(d: u32) -> f64 {
    r_lower_real(d as f64)
}

pub fn r_lower_real(d: f64) -> f64 {
    let d2 = d * d;
    let d3 = d2 * d;
    (5.0 - 8.0 * d - 16.0 * d2 + 64.0 * d3) / (12.0 * d - 20.0 * d2 - 48.0 * d3 + 128.0 * d2 * d2)
}

/// Explicit upper bound on the root of `U`.
pub fn r_upper(d: u32) -> f64 {
    r_upper_real(d as f64)
}

pub fn r_upper_real(d: f64) -> f64 {
    (2.0 - 1.0 / (14.0 * d * d) - 4.0 * d) / (5.0 * d - 8.0 * d * d)
}

/// `1 + max_i |a_i / a_n|`.
pub fn cauchy_bound(poly: &Polynomial) -> f64 {
    let n = poly.degree();
    let lead = poly.leading().abs();
    let max = poly.coeffs()[..n]
        .iter()
        .fold(0.0f64, |m, c| m.max(c.abs() / lead));
    1.0 + max
}

/// Exact sign check of [`certificate_polynomial`] at `d = 2..=6`.
pub fn appendix_positivity_check() -> bool {
    let cert = certificate_polynomial();
    (2..=6).all(|d| cert.eval_exact(d).is_some_and(|v| v > 0))
}

/// Outcome of the exact argument that `U(r_upper(d)) < 0` for all `d >= 2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    /// `(d, value)` for `d = 2..=6`.
    pub values: Vec<(i128, i128)>,
    /// Max coefficient ratio of the Cauchy bound, as `(num, den)`.
    pub cauchy_ratio: (u128, u128),
    /// All values positive and `1 + num/den < 6`.
    pub holds: bool,
}

/// Positivity at `d = 2..=6` plus a Cauchy bound below 6 covers every
/// integer `d >= 2`.
pub fn certify_upper_root_bound() -> Certificate {
    let cert = certificate_polynomial();
    let values: Vec<(i128, i128)> = (2..=6)
        .map(|d| (d, cert.eval_exact(d).expect("fits in i128")))
        .collect();
    let (num, den) = cert.cauchy_ratio();
    // 1 + num/den < 6  <=>  num < 5 den
    let bound_ok = num < 5 * den;
    let holds = bound_ok && values.iter().all(|&(_, v)| v > 0);
    Certificate {
        values,
        cauchy_ratio: (num, den),
        holds,
    }
}

/// Right end of the window `(0, sqrt(1/(5d)))` on which `U` is decreasing,
/// after checking that both `r_upper(d)` and `1 - sqrt((d-1)/d)` fall inside.
pub fn u_monotone_window(d: u32) -> Result<f64> {
    if d < 2 {
        return Err(Error::InvalidDegree(d));
    }
    let df = d as f64;
    let window = (1.0 / (5.0 * df)).sqrt();
    let ru = r_upper(d);
    let lmp = 1.0 - ((df - 1.0) / df).sqrt();
    if !(ru < window) {
        return Err(Error::Invalid(format!(
            "r_upper({d}) = {ru} not below sqrt(1/(5d)) = {window}"
        )));
    }
    if !(lmp < window) {
        return Err(Error::Invalid(format!(
            "1 - sqrt((d-1)/d) = {lmp} not below sqrt(1/(5d)) = {window} at d = {d}"
        )));
    }
    Ok(window)
}
