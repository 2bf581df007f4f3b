//! Model parameters, the `p <-> r` bijection and the closed-form bounds on
//! the critical lifetime parameter.

use crate::error::{Error, Result};
use crate::poly::{find_root, l2019_polynomial, r_upper};

/// Tree degree `d` (every vertex has `d + 1` neighbours) and lifetime
/// parameter `p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    d: u32,
    p: f64,
}

impl ModelParams {
    pub fn new(d: u32, p: f64) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidDegree(d));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidLifetime(p));
        }
        Ok(ModelParams { d, p })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// `d + 1` as a float, the neighbour count.
    pub(crate) fn neighbours(&self) -> f64 {
        self.d as f64 + 1.0
    }
}

/// Probability `r` that a frog ever visits a fixed neighbour; a vertex at
/// distance `n` is visited with probability `r^n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReturnProb {
    r: f64,
    d: u32,
}

impl ReturnProb {
    /// Accepts `0 <= r <= 1/d`.
    pub fn new(r: f64, d: u32) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidDegree(d));
        }
        if !(r >= 0.0 && r <= 1.0 / d as f64) {
            return Err(Error::InvalidReturnProb { r, d });
        }
        Ok(ReturnProb { r, d })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn d(&self) -> u32 {
        self.d
    }
}

/// `r(p, d) = (d + 1 - sqrt((d+1)^2 - 4 d p^2)) / (2 d p)`, and 0 at `p = 0`.
///
/// Evaluated in the conjugate form `2p / (d + 1 + sqrt(...))`, which has no
/// cancellation for small `p` and is continuous at 0.
pub fn r_of_p(params: ModelParams) -> ReturnProb {
    let d = params.d as f64;
    let p = params.p;
    let disc = ((d + 1.0) * (d + 1.0) - 4.0 * d * p * p).max(0.0);
    let r = 2.0 * p / (d + 1.0 + disc.sqrt());
    ReturnProb {
        r: r.min(1.0 / d),
        d: params.d,
    }
}

/// Inverse of [`r_of_p`]: `p = (d + 1) r / (1 + d r^2)`.
pub fn p_of_r(r: ReturnProb) -> f64 {
    p_of_r_real(r.r, r.d as f64)
}

pub(crate) fn p_of_r_real(r: f64, d: f64) -> f64 {
    (d + 1.0) * r / (1.0 + d * r * r)
}

/// Lower bound on `p_c`: the value of `p` at which the dominating two-type
/// branching process has spectral radius exactly 1.
pub fn theorem1_lower(d: u32) -> f64 {
    theorem1_lower_real(d as f64)
}

pub fn theorem1_lower_real(d: f64) -> f64 {
    2.0 * (d + 1.0) / ((4.0 * d * d + 4.0 * d - 3.0).sqrt() + 2.0 * d + 1.0)
}

/// Upper bound on `p_c` (and on the oriented critical point), written out
/// directly rather than composed from `p_of_r` and `r_upper`.
pub fn theorem1_upper(d: u32) -> f64 {
    theorem1_upper_real(d as f64)
}

pub fn theorem1_upper_real(d: f64) -> f64 {
    let num = 2.0 - 1.0 / (14.0 * d * d) - 4.0 * d;
    let den = 5.0 * d - 8.0 * d * d;
    (d + 1.0) * num * den / (den * den + d * num * num)
}

/// Which upper bounds in a report exceeded 1 and were clamped.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct VacuousFlags {
    pub amp2002_ub: bool,
    pub lmp2005_ub: bool,
    pub gms2018_ub: bool,
    pub l2019_ub: bool,
}

impl VacuousFlags {
    pub fn any(&self) -> bool {
        self.amp2002_ub || self.lmp2005_ub || self.gms2018_ub || self.l2019_ub
    }

    /// Names of the clamped fields joined by `|`, empty if none.
    pub fn names(&self) -> String {
        let mut out = Vec::new();
        if self.amp2002_ub {
            out.push("amp2002_ub");
        }
        if self.lmp2005_ub {
            out.push("lmp2005_ub");
        }
        if self.gms2018_ub {
            out.push("gms2018_ub");
        }
        if self.l2019_ub {
            out.push("l2019_ub");
        }
        out.join("|")
    }
}

/// Every bound on `p_c` and `p̂_c` for one degree.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundsReport {
    pub d: u32,
    pub lb_pc: f64,
    pub ub_pc: f64,
    /// Lower bound on the oriented critical point, from `r_lower`.
    pub lb_pc_hat: f64,
    pub amp2002_lb: f64,
    pub amp2002_ub: f64,
    pub lmp2005_ub: f64,
    pub gms2018_ub: f64,
    pub l2019_ub: f64,
    pub vacuous: VacuousFlags,
}

fn clamp_upper(x: f64) -> (f64, bool) {
    if x > 1.0 {
        (1.0, true)
    } else {
        (x, false)
    }
}

/// `p` corresponding to the root in `(0, 1/d)` of the 2019 quartic.
pub fn l2019_upper(d: u32) -> Result<f64> {
    let poly = l2019_polynomial(d).to_f64();
    let df = d as f64;
    let root = find_root(&poly, 0.0, 1.0 / df, 1e-16)?;
    Ok(p_of_r_real(root.hi, df))
}

pub fn gms2018_upper(d: u32) -> f64 {
    let d = d as f64;
    let a = 7.0 * d - 1.0;
    let s = (a * a - 14.0).sqrt();
    (d + 1.0) * (a - s) / (d * a * a - 7.0 * d + 2.0 - d * a * s)
}

/// Bounds from this crate's closed forms plus the four literature bounds.
pub fn literature_bounds(d: u32) -> Result<BoundsReport> {
    if d < 2 {
        return Err(Error::InvalidDegree(d));
    }
    let df = d as f64;
    let (amp2002_ub, amp_v) = clamp_upper((df + 1.0) / (2.0 * df - 2.0));
    let (lmp2005_ub, lmp_v) = clamp_upper((df + 1.0) / (2.0 * df));
    let (gms2018_ub, gms_v) = clamp_upper(gms2018_upper(d));
    let (l2019_ub, l19_v) = clamp_upper(l2019_upper(d)?);
    let lb_pc_hat = p_of_r(ReturnProb::new(crate::poly::r_lower(d), d)?);
    Ok(BoundsReport {
        d,
        lb_pc: theorem1_lower(d),
        ub_pc: theorem1_upper(d),
        lb_pc_hat,
        amp2002_lb: (df + 1.0) / (2.0 * df + 1.0),
        amp2002_ub,
        lmp2005_ub,
        gms2018_ub,
        l2019_ub,
        vacuous: VacuousFlags {
            amp2002_ub: amp_v,
            lmp2005_ub: lmp_v,
            gms2018_ub: gms_v,
            l2019_ub: l19_v,
        },
    })
}

/// True iff the lower bound at `d` exceeds the upper bound at the real
/// degree `a * d`, which separates `p_c(d)` from `p_c(a d)`.
pub fn monotonicity_gap(d: u32, a: f64) -> bool {
    let ad = a * d as f64;
    theorem1_lower(d) > theorem1_upper_real(ad)
}

/// Upper bound `p_of_r(r_upper(d))`, composed through the bijection.
pub fn upper_via_return_prob(d: u32) -> Result<f64> {
    Ok(p_of_r(ReturnProb::new(r_upper(d), d)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::r_lower;

    fn params(d: u32, p: f64) -> ModelParams {
        ModelParams::new(d, p).unwrap()
    }

    #[test]
    fn invalid_parameters() {
        assert_eq!(ModelParams::new(1, 0.5), Err(Error::InvalidDegree(1)));
        assert!(ModelParams::new(2, 1.5).is_err());
        assert!(ModelParams::new(2, f64::NAN).is_err());
        assert!(ReturnProb::new(0.6, 2).is_err());
        assert!(ReturnProb::new(-0.1, 2).is_err());
    }

    #[test]
    fn r_of_p_edges() {
        assert_eq!(r_of_p(params(2, 1.0)).r(), 0.5);
        assert_eq!(r_of_p(params(5, 0.0)).r(), 0.0);
        for d in 2..50 {
            assert!((r_of_p(params(d, 1.0)).r() - 1.0 / d as f64).abs() < 1e-16);
        }
    }

    #[test]
    fn r_of_p_inverts_upper_bound() {
        let r = r_of_p(params(2, 0.713_798_9)).r();
        assert!((r - r_upper(2)).abs() < 1e-6, "{r}");
        let r_exact = r_of_p(params(2, theorem1_upper(2))).r();
        assert!((r_exact - r_upper(2)).abs() < 1e-14);
    }

    #[test]
    fn p_of_r_values() {
        assert_eq!(p_of_r(ReturnProb::new(0.5, 2).unwrap()), 1.0);
        assert_eq!(p_of_r(ReturnProb::new(0.0, 7).unwrap()), 0.0);
        let p = p_of_r(ReturnProb::new(437.0 / 1608.0, 2).unwrap());
        // table cells are truncated to 7 decimals
        assert!(p >= 0.710_367_4 && p < 0.710_367_5, "{p}");
        assert!((r_lower(2) - 437.0 / 1608.0).abs() < 1e-16);
    }

    #[test]
    fn theorem_bounds_against_table() {
        for (d, lo, hi) in [(2, 0.626_136_4, 0.713_798_9), (6, 0.541_685_9, 0.571_994_0),
            (10, 0.525_002_7, 0.543_393_7), (50, 0.505_000_0, 0.508_734_6),
            (100, 0.502_500_0, 0.504_371_1)]
        {
            let l = theorem1_lower(d);
            let u = theorem1_upper(d);
            assert!(l >= lo && l < lo + 1e-7, "d={d} l={l}");
            assert!(u >= hi && u < hi + 1e-7, "d={d} u={u}");
        }
    }

    #[test]
    fn literature_at_two() {
        let b = literature_bounds(2).unwrap();
        assert_eq!(b.amp2002_lb, 0.6);
        assert_eq!(b.amp2002_ub, 1.0);
        assert!(b.vacuous.amp2002_ub);
        assert_eq!(b.vacuous.names(), "amp2002_ub");
        assert_eq!(b.lmp2005_ub, 0.75);
        assert!(!b.vacuous.lmp2005_ub);
        assert!(b.lb_pc <= b.ub_pc && b.lb_pc_hat <= b.ub_pc);
        assert!(literature_bounds(3).unwrap().amp2002_ub == 1.0);
        assert!(!literature_bounds(3).unwrap().vacuous.any());
    }

    #[test]
    fn lmp2005_is_the_bijection_image_of_its_root() {
        // dr(2-r) = 1 has root 1 - sqrt((d-1)/d) in (0, 1/d); mapping gives (d+1)/(2d).
        for d in 2..40u32 {
            let df = d as f64;
            let r = 1.0 - ((df - 1.0) / df).sqrt();
            let p = p_of_r(ReturnProb::new(r, d).unwrap());
            assert!((p - (df + 1.0) / (2.0 * df)).abs() < 1e-14);
        }
    }

    #[test]
    fn monotonicity_gap_cases() {
        assert!(monotonicity_gap(2, 2.0));
        assert!(monotonicity_gap(2, 1.75));
        assert!(!monotonicity_gap(2, 1.0));
        assert!((theorem1_lower(2) - theorem1_upper(4)) > 0.018);
    }

    #[test]
    fn bounds_tend_to_one_half() {
        assert!(theorem1_lower(100) < 0.51 && theorem1_upper(100) < 0.51);
        assert!(theorem1_lower(100_000) - 0.5 < 1e-5);
    }
}
