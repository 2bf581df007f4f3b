//! Seeded Monte Carlo simulation of the frog model on `T_d`.
//!
//! Every frog owns a random stream keyed by `(seed, replica, home vertex)`.
//! It first draws its lifetime by inverse transform and then its steps, so
//! runs at different `p` (or of different variants) share their randomness:
//! a frog's walk at larger `p` extends its walk at smaller `p`. Under this
//! coupling `reached_cap` is non-decreasing in `p`, and an oriented run that
//! reaches the cap implies that the full run does too.

pub mod tree;

use std::collections::VecDeque;
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{r_of_p, ModelParams};
pub use tree::{LazyTree, Vertex, VertexId};

/// Two-sided 95% normal quantile.
const Z95: f64 = 1.959963984540054;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// A frog wakes every sleeping frog it meets.
    Full,
    /// A frog wakes only frogs at strict descendants of its home vertex. Its
    /// walk is not restricted.
    Oriented,
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(Variant::Full),
            "oriented" => Ok(Variant::Oriented),
            other => Err(Error::Invalid(format!("unknown variant '{other}'"))),
        }
    }
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Variant::Full => "full",
            Variant::Oriented => "oriented",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub d: u32,
    pub p: f64,
    pub variant: Variant,
    pub max_activations: u64,
    pub max_steps: u64,
    pub replicas: u64,
    pub seed: u64,
    pub max_vertices: usize,
}

impl SimConfig {
    pub const DEFAULT_MAX_ACTIVATIONS: u64 = 10_000;
    pub const DEFAULT_MAX_STEPS: u64 = 100_000_000;
    pub const DEFAULT_MAX_VERTICES: usize = 20_000_000;

    pub fn new(d: u32, p: f64, variant: Variant) -> Self {
        SimConfig {
            d,
            p,
            variant,
            max_activations: Self::DEFAULT_MAX_ACTIVATIONS,
            max_steps: Self::DEFAULT_MAX_STEPS,
            replicas: 1000,
            seed: 0,
            max_vertices: Self::DEFAULT_MAX_VERTICES,
        }
    }

    pub fn validate(&self) -> Result<ModelParams> {
        let params = ModelParams::new(self.d, self.p)?;
        if self.max_activations < 1 {
            return Err(Error::Invalid("max_activations must be at least 1".into()));
        }
        if self.replicas < 1 {
            return Err(Error::Invalid("replicas must be at least 1".into()));
        }
        Ok(params)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimOutcome {
    pub replica: u64,
    pub reached_cap: bool,
    pub activations: u64,
    pub steps: u64,
    /// Largest depth of an activated vertex.
    pub frontier_depth: u32,
    /// The step budget ran out before extinction or the cap.
    pub truncated: bool,
}

/// Number of steps of a frog with survival probability `p` per step, from a
/// uniform `u` in `(0, 1]`. Non-decreasing in `p` for fixed `u`.
pub fn geometric_lifetime(u: f64, p: f64) -> u64 {
    if p <= 0.0 {
        return 0;
    }
    if p >= 1.0 {
        return u64::MAX;
    }
    (u.ln() / p.ln()).floor() as u64
}

fn frog_rng(seed: u64, replica: u64, key: u64) -> ChaCha8Rng {
    let mut bytes = [0u8; 32];
    bytes[..8].copy_from_slice(&seed.to_le_bytes());
    bytes[8..16].copy_from_slice(&replica.to_le_bytes());
    bytes[16..24].copy_from_slice(&key.to_le_bytes());
    bytes[24..].copy_from_slice(b"frogwalk");
    ChaCha8Rng::from_seed(bytes)
}

#[derive(Debug, Clone, Copy, Default)]
struct SimSite {
    awake: bool,
}

#[derive(Clone, Copy)]
enum Relative {
    /// `k` levels below the home vertex.
    Inside(u32),
    Outside,
}

/// Simulates one replica until extinction, the activation cap, or the step
/// budget, whichever comes first.
pub fn run_once(config: &SimConfig, replica: u64) -> Result<SimOutcome> {
    let params = config.validate()?;
    let d = params.d();
    let p = params.p();
    let mut tree: LazyTree<SimSite> = LazyTree::new(d, config.max_vertices);
    let mut queue = VecDeque::new();
    tree.get_mut(VertexId::ROOT).awake = true;
    queue.push_back(VertexId::ROOT);

    let mut out = SimOutcome {
        replica,
        reached_cap: config.max_activations <= 1,
        activations: 1,
        steps: 0,
        frontier_depth: 0,
        truncated: false,
    };

    'frogs: while let Some(home) = queue.pop_front() {
        if out.reached_cap {
            break;
        }
        let mut rng = frog_rng(config.seed, replica, tree.key(home));
        let u = 1.0 - rng.random::<f64>();
        let lifetime = geometric_lifetime(u, p);
        let mut pos = home;
        let mut rel = Relative::Inside(0);
        let mut taken = 0u64;
        while taken < lifetime {
            if out.steps >= config.max_steps {
                out.truncated = true;
                break 'frogs;
            }
            let j = rng.random_range(0..=d);
            let up = tree.is_parent_step(pos, j);
            let (next, _) = tree.neighbour_or_insert(pos, j)?;
            rel = match rel {
                Relative::Inside(0) if up => Relative::Outside,
                Relative::Inside(k) if up => Relative::Inside(k - 1),
                Relative::Inside(k) => Relative::Inside(k + 1),
                Relative::Outside if next == home => Relative::Inside(0),
                Relative::Outside => Relative::Outside,
            };
            pos = next;
            taken += 1;
            out.steps += 1;

            let may_wake = match config.variant {
                Variant::Full => true,
                Variant::Oriented => matches!(rel, Relative::Inside(k) if k > 0),
            };
            if may_wake && !tree.get(pos).awake {
                tree.get_mut(pos).awake = true;
                queue.push_back(pos);
                out.activations += 1;
                out.frontier_depth = out.frontier_depth.max(tree.depth(pos));
                if out.activations >= config.max_activations {
                    out.reached_cap = true;
                    break 'frogs;
                }
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SurvivalEstimate {
    pub freq: f64,
    pub wilson_ci: (f64, f64),
    pub outcomes: Vec<SimOutcome>,
}

/// 95% Wilson score interval for `successes` out of `n`.
pub fn wilson_interval(successes: u64, n: u64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let n = n as f64;
    let f = successes as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let centre = (f + z2 / (2.0 * n)) / denom;
    let half = Z95 * (f * (1.0 - f) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lo = if successes == 0 { 0.0 } else { (centre - half).max(0.0) };
    let hi = if successes as f64 == n { 1.0 } else { (centre + half).min(1.0) };
    (lo, hi)
}

/// Runs all replicas (in parallel, results in replica order) and reports
/// the fraction that reached the activation cap.
pub fn survival_frequency(config: &SimConfig) -> Result<SurvivalEstimate> {
    config.validate()?;
    let outcomes = (0..config.replicas)
        .into_par_iter()
        .map(|i| run_once(config, i))
        .collect::<Result<Vec<_>>>()?;
    let hits = outcomes.iter().filter(|o| o.reached_cap).count() as u64;
    Ok(SurvivalEstimate {
        freq: hits as f64 / config.replicas as f64,
        wilson_ci: wilson_interval(hits, config.replicas),
        outcomes,
    })
}

/// Empirical bracket for the critical parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PcEstimate {
    pub p_lo: f64,
    pub p_hi: f64,
    pub evaluations: u32,
}

impl PcEstimate {
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.p_lo + self.p_hi)
    }
}

/// Survival frequency above which `p` counts as supercritical.
pub const PC_THRESHOLD: f64 = 0.01;

/// Bisects on `p` in `[0.5, 1]` for the point where the survival frequency
/// first exceeds [`PC_THRESHOLD`]. This is a heuristic: the finite cap biases
/// the answer near criticality in either direction.
pub fn estimate_pc(d: u32, variant: Variant, max_activations: u64, replicas: u64, tol: f64, seed: u64) -> Result<PcEstimate> {
    if !(tol >= 0.005) {
        return Err(Error::Invalid(format!("tolerance {tol} below 0.005")));
    }
    let mut evaluations = 0;
    let mut above = |p: f64| -> Result<bool> {
        let mut cfg = SimConfig::new(d, p, variant);
        cfg.max_activations = max_activations;
        cfg.replicas = replicas;
        cfg.seed = seed;
        evaluations += 1;
        Ok(survival_frequency(&cfg)?.freq > PC_THRESHOLD)
    };
    let (mut lo, mut hi) = (0.5, 1.0);
    if above(lo)? || !above(hi)? {
        return Err(Error::NonMonotone { lo, hi });
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if above(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(PcEstimate {
        p_lo: lo,
        p_hi: hi,
        evaluations,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectHit {
    pub frequency: f64,
    pub expected: f64,
    pub samples: u64,
}

impl DirectHit {
    /// Binomial standard error at the expected value.
    pub fn sigma(&self) -> f64 {
        (self.expected * (1.0 - self.expected) / self.samples as f64).sqrt()
    }
}

/// Frequency with which a single frog started at the root ever visits a
/// fixed vertex at distance `n`, next to `r^n`. Only the distance to the
/// target matters: each step moves closer with probability `1/(d+1)`.
pub fn direct_hit_probability_check(d: u32, p: f64, n: u32, samples: u64, seed: u64) -> Result<DirectHit> {
    let params = ModelParams::new(d, p)?;
    let expected = r_of_p(params).r().powi(n as i32);
    let cutoff = n as u64 + 64;
    let closer = 1.0 / (d as f64 + 1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = 0u64;
    for _ in 0..samples {
        let mut dist = n as u64;
        while dist > 0 && dist <= cutoff {
            if rng.random::<f64>() >= p {
                break;
            }
            if rng.random::<f64>() < closer {
                dist -= 1;
            } else {
                dist += 1;
            }
        }
        if dist == 0 {
            hits += 1;
        }
    }
    Ok(DirectHit {
        frequency: if samples == 0 { 0.0 } else { hits as f64 / samples as f64 },
        expected,
        samples,
    })
}

/// Writes one CSV row per replica:
/// `replica, reached_cap, activations, steps, frontier_depth`.
pub fn write_replicas_csv<W: Write>(outcomes: &[SimOutcome], out: W) -> Result<()> {
    let err = |e: csv::Error| Error::Invalid(format!("replica export failed: {e}"));
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["replica", "reached_cap", "activations", "steps", "frontier_depth"])
        .map_err(err)?;
    for o in outcomes {
        w.write_record([
            o.replica.to_string(),
            o.reached_cap.to_string(),
            o.activations.to_string(),
            o.steps.to_string(),
            o.frontier_depth.to_string(),
        ])
        .map_err(err)?;
    }
    w.flush().map_err(|e| Error::Invalid(format!("replica export failed: {e}")))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(d: u32, p: f64, variant: Variant, a: u64, r: u64) -> SimConfig {
        let mut c = SimConfig::new(d, p, variant);
        c.max_activations = a;
        c.replicas = r;
        c.seed = 7;
        c
    }

    #[test]
    fn lifetime_edges() {
        assert_eq!(geometric_lifetime(0.3, 0.0), 0);
        assert_eq!(geometric_lifetime(0.3, 1.0), u64::MAX);
        assert_eq!(geometric_lifetime(1.0, 0.9), 0);
        assert_eq!(geometric_lifetime(0.5, 0.5), 1);
        let mut last = 0;
        for p in [0.1, 0.3, 0.5, 0.7, 0.9, 0.99] {
            let n = geometric_lifetime(0.01, p);
            assert!(n >= last);
            last = n;
        }
    }

    #[test]
    fn dead_root() {
        let o = run_once(&cfg(3, 0.0, Variant::Full, 100, 1), 0).unwrap();
        assert_eq!((o.activations, o.reached_cap, o.steps), (1, false, 0));
    }

    #[test]
    fn immortal_frogs_reach_cap() {
        for variant in [Variant::Full, Variant::Oriented] {
            let est = survival_frequency(&cfg(2, 1.0, variant, 100, 10)).unwrap();
            assert_eq!(est.freq, 1.0);
            assert!(est.outcomes.iter().all(|o| o.activations == 100));
        }
    }

    #[test]
    fn step_budget_truncates() {
        let mut c = cfg(2, 1.0, Variant::Full, 1_000_000, 1);
        c.max_steps = 50;
        let o = run_once(&c, 0).unwrap();
        assert!(o.truncated && !o.reached_cap);
        assert_eq!(o.steps, 50);
    }

    #[test]
    fn deterministic_replicas() {
        let c = cfg(2, 0.75, Variant::Oriented, 500, 40);
        let a = survival_frequency(&c).unwrap();
        let b = survival_frequency(&c).unwrap();
        assert_eq!(a, b);
        assert_eq!(run_once(&c, 17).unwrap(), a.outcomes[17]);
    }

    #[test]
    fn oriented_dominated_by_full() {
        for r in 0..60 {
            let o = run_once(&cfg(2, 0.72, Variant::Oriented, 300, 1), r).unwrap();
            let f = run_once(&cfg(2, 0.72, Variant::Full, 300, 1), r).unwrap();
            assert!(!o.reached_cap || f.reached_cap);
        }
    }

    #[test]
    fn wilson_bounds() {
        assert_eq!(wilson_interval(0, 100).0, 0.0);
        assert_eq!(wilson_interval(100, 100).1, 1.0);
        let (lo, hi) = wilson_interval(50, 100);
        assert!((lo - 0.4038).abs() < 1e-4 && (hi - 0.5962).abs() < 1e-4);
    }

    #[test]
    fn estimate_pc_rejects_small_tol() {
        assert!(estimate_pc(2, Variant::Full, 100, 10, 0.001, 0).is_err());
    }

    #[test]
    fn direct_hit_trivial() {
        let h = direct_hit_probability_check(2, 0.4, 0, 10, 1).unwrap();
        assert_eq!((h.frequency, h.expected), (1.0, 1.0));
        let h = direct_hit_probability_check(2, 1.0, 1, 200_000, 5).unwrap();
        assert!((h.expected - 0.5).abs() < 1e-15);
        assert!((h.frequency - 0.5).abs() < 4.0 * h.sigma());
    }

    #[test]
    fn replica_csv() {
        let est = survival_frequency(&cfg(2, 0.5, Variant::Full, 50, 3)).unwrap();
        let mut buf = Vec::new();
        write_replicas_csv(&est.outcomes, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("replica,reached_cap,activations,steps,frontier_depth\n0,"));
        assert_eq!(text.lines().count(), 4);
    }

    #[test]
    fn parse_variant() {
        assert_eq!("oriented".parse::<Variant>().unwrap(), Variant::Oriented);
        assert!("sideways".parse::<Variant>().is_err());
    }
}
