//! Renewal sequence of the oriented frog model and the power series whose
//! unit level set gives the oriented critical return probability.
//!
//! With `P_k = prod_{i=1}^{k-1} (1 - r^i)`, the inter-renewal law is
//! `f_k = r^k P_k` and the critical `r_c` solves
//! `S(r) = sum_{k>=1} (d r)^k P_k = 1`. Every term of `S` is increasing in
//! `r`, so `S` is strictly increasing and a sign-based bisection is valid.

use crate::error::{Error, Result};
use crate::model::ReturnProb;
use crate::poly::{r_lower, r_upper};

/// Inter-renewal law and renewal probabilities at a fixed `r`.
#[derive(Debug, Clone, PartialEq)]
pub struct RenewalSequence {
    pub r: ReturnProb,
    /// `u_1, ..., u_n` (index 0 holds `u_1`). Underflows to 0 for large `n`;
    /// use [`RenewalSequence::log_u`] there.
    pub u: Vec<f64>,
    /// Natural logarithms of `u_1, ..., u_n`.
    pub log_u: Vec<f64>,
    /// `f_1, ..., f_n`.
    pub f: Vec<f64>,
}

impl RenewalSequence {
    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    pub fn log_u(&self, k: usize) -> f64 {
        self.log_u[k - 1]
    }

    /// `d^k u_k`, computed from the logarithm so it stays finite at
    /// criticality.
    pub fn scaled(&self, k: usize) -> f64 {
        (self.log_u[k - 1] + k as f64 * (self.r.d() as f64).ln()).exp()
    }
}

/// `f_1, ..., f_kmax` with a running product.
pub fn inter_renewal(r: ReturnProb, kmax: usize) -> Vec<f64> {
    let r = r.r();
    let mut out = Vec::with_capacity(kmax);
    let mut power = 1.0;
    let mut product = 1.0;
    for _ in 0..kmax {
        // entering step k: power = r^(k-1), product = P_k
        power *= r;
        out.push(power * product);
        product *= 1.0 - power;
    }
    out
}

/// `P_k = prod_{i=1}^{k-1} (1 - r^i)`, with `P_1 = 1`.
pub fn partial_product(r: f64, k: usize) -> f64 {
    let mut power = 1.0;
    let mut product = 1.0;
    for _ in 1..k {
        power *= r;
        product *= 1.0 - power;
    }
    product
}

/// `ln P_m` for `m = 1..=n`, index `m - 1`.
fn log_products(r: f64, n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(n);
    let mut acc = 0.0;
    let mut power = 1.0;
    for _ in 0..n {
        out.push(acc);
        power *= r;
        acc += (-power).ln_1p();
    }
    out
}

fn log_sum_exp(terms: &[f64]) -> f64 {
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + terms.iter().map(|t| (t - max).exp()).sum::<f64>().ln()
}

/// `u_1, ..., u_n` from
/// `u_k = r^k P_k + sum_{j=1}^{k-1} r^{k-j} u_j P_{k-j}`.
///
/// Each term is formed as a logarithm and the sum is a log-sum-exp, so the
/// sequence keeps full relative precision long after `u_k` leaves the
/// normal `f64` range.
pub fn u_sequence(r: ReturnProb, n: usize) -> RenewalSequence {
    let f = inter_renewal(r, n);
    let rv = r.r();
    if rv == 0.0 {
        return RenewalSequence {
            r,
            u: vec![0.0; n],
            log_u: vec![f64::NEG_INFINITY; n],
            f,
        };
    }
    let ln_r = rv.ln();
    let ln_p = log_products(rv, n);
    let mut log_u: Vec<f64> = Vec::with_capacity(n);
    let mut terms = Vec::with_capacity(n);
    for k in 1..=n {
        terms.clear();
        terms.push(k as f64 * ln_r + ln_p[k - 1]);
        for j in 1..k {
            let m = k - j;
            terms.push(m as f64 * ln_r + ln_p[m - 1] + log_u[j - 1]);
        }
        log_u.push(log_sum_exp(&terms).min(0.0));
    }
    let u = log_u.iter().map(|l| l.exp()).collect();
    RenewalSequence { r, u, log_u, f }
}

/// `u_n^{1/n}`, a slowly converging estimate of the growth rate of `u`.
pub fn u_infty_estimate(r: ReturnProb, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::Invalid("n must be at least 1".into()));
    }
    let seq = u_sequence(r, n);
    Ok((seq.log_u(n) / n as f64).exp())
}

/// Rigorous enclosure of `S(r)` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesBracket {
    pub lower: f64,
    pub upper: f64,
    pub terms_used: usize,
}

impl SeriesBracket {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }
}

const MAX_SERIES_TERMS: usize = 50_000_000;

/// Encloses `S(r)` to width `tol`.
///
/// Terms `k <= K` are summed exactly (up to a floating-point error bound
/// that is added to both sides). For `k > K >= 2` the product `P_k` lies in
/// `[1 - r - r^2, (1 - r)(1 - r^2)]`, so the tail lies between those factors
/// times `G = (dr)^{K+1} / (1 - dr)`. Increasing `K` shrinks the bracket
/// until its width is at most `tol`; if rounding error alone exceeds `tol`
/// the best bracket is returned inside [`Error::ToleranceUnreachable`].
pub fn series_bracket(r: ReturnProb, tol: f64) -> Result<SeriesBracket> {
    let rv = r.r();
    let dr = r.d() as f64 * rv;
    if dr >= 1.0 {
        return Err(Error::Divergent(dr));
    }
    if rv == 0.0 {
        return Ok(SeriesBracket {
            lower: 0.0,
            upper: 0.0,
            terms_used: 0,
        });
    }
    let eps = f64::EPSILON;
    let tail_lo_factor = 1.0 - rv - rv * rv;
    let tail_hi_factor = (1.0 - rv) * (1.0 - rv * rv);

    let mut sum = 0.0;
    let mut err = 0.0;
    let mut x = 1.0; // (dr)^k
    let mut power = 1.0; // r^k
    let mut product = 1.0; // P_k
    let mut k = 0usize;
    loop {
        k += 1;
        x *= dr;
        power *= rv;
        let term = x * product;
        sum += term;
        err += (4 * k + 8) as f64 * eps * term;
        product *= 1.0 - power;
        if k < 2 {
            continue;
        }
        let g = x * dr / (1.0 - dr);
        let g_pad = (k + 6) as f64 * eps;
        let pad = err + k as f64 * eps * sum;
        let lower = sum - pad + tail_lo_factor * g * (1.0 - g_pad);
        let upper = sum + pad + tail_hi_factor * g * (1.0 + g_pad);
        let bracket = SeriesBracket {
            lower: lower.max(0.0),
            upper,
            terms_used: k,
        };
        if bracket.width() <= tol {
            return Ok(bracket);
        }
        // once truncation is negligible against rounding, more terms cannot help
        if rv.powi(3) * g < 1e-3 * pad || k >= MAX_SERIES_TERMS {
            return Err(Error::ToleranceUnreachable {
                tol,
                lo: bracket.lower,
                hi: bracket.upper,
            });
        }
    }
}

/// Enclosure `[lo, hi]` of the oriented critical return probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RcBracket {
    pub lo: f64,
    pub hi: f64,
    /// Largest number of series terms used at any bisection point.
    pub terms_used: usize,
}

impl RcBracket {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

/// Series enclosure at `r`, falling back to the best available bracket when
/// the requested width is out of reach.
fn bracket_at(r: f64, d: u32, tol: f64) -> Result<SeriesBracket> {
    let rp = ReturnProb::new(r, d)?;
    match series_bracket(rp, tol) {
        Ok(b) => Ok(b),
        Err(Error::ToleranceUnreachable { lo, hi, .. }) => Ok(SeriesBracket {
            lower: lo,
            upper: hi,
            terms_used: 0,
        }),
        Err(e) => Err(e),
    }
}

/// Bisection on `S(r) = 1` keeping `S(lo) < 1 < S(hi)` certified by series
/// brackets, until `hi - lo <= tol`.
pub fn solve_rc(d: u32, tol: f64) -> Result<RcBracket> {
    if d < 2 {
        return Err(Error::InvalidDegree(d));
    }
    let df = d as f64;
    let mut lo = 0.5 * r_lower(d);
    let mut hi = (1.5 * r_upper(d)).min(0.999 / df);
    let mut terms_used = 0;

    let start_lo = bracket_at(lo, d, 1e-12)?;
    let start_hi = bracket_at(hi, d, 1e-12)?;
    if !(start_lo.upper < 1.0 && start_hi.lower > 1.0) {
        return Err(Error::Invalid(format!(
            "initial bracket [{lo}, {hi}] does not straddle S = 1"
        )));
    }

    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return Err(Error::ToleranceUnreachable { tol, lo, hi });
        }
        let mut series_tol = 1e-10;
        loop {
            let b = bracket_at(mid, d, series_tol)?;
            terms_used = terms_used.max(b.terms_used);
            if b.upper < 1.0 {
                lo = mid;
                break;
            }
            if b.lower > 1.0 {
                hi = mid;
                break;
            }
            if series_tol < 1e-17 {
                return Err(Error::ToleranceUnreachable { tol, lo, hi });
            }
            series_tol *= 1e-2;
        }
    }
    Ok(RcBracket { lo, hi, terms_used })
}
