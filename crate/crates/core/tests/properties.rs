use frogbound::branching::{
    fmbp_law, moment_matrix, run_coupled, sample_offspring, spectral_radius, ttbp_law, IntervalPartition,
    OffspringLaw, Outcome,
};
use frogbound::model::{p_of_r, r_of_p, theorem1_lower};
use frogbound::renewal::{series_bracket, solve_rc, u_infty_estimate, u_sequence};
use frogbound::sim::{geometric_lifetime, run_once, SimConfig, Variant};
use frogbound::{ModelParams, ReturnProb};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn params(d: u32, p: f64) -> ModelParams {
    ModelParams::new(d, p).unwrap()
}

/// Maps raw draws onto `a >= 1`, `a + b >= 2`, `a + b <= d + 1`.
fn site_counts(d: u32, a_raw: u32, b_raw: u32) -> (u32, u32) {
    let a = 1 + a_raw % (d + 1);
    let b = b_raw % (d + 2 - a);
    if a + b < 2 { (a, 1) } else { (a, b) }
}

proptest! {
    #[test]
    fn r_and_p_round_trip(d in 2u32..200, p in 0.0f64..=1.0) {
        let r = r_of_p(params(d, p));
        prop_assert!(r.r() >= 0.0 && r.r() <= 1.0 / d as f64);
        prop_assert!((p_of_r(r) - p).abs() < 1e-12);
    }

    #[test]
    fn p_of_r_is_increasing(d in 2u32..200, a in 0.0f64..1.0, b in 0.0f64..1.0) {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let scale = 1.0 / d as f64;
        let plo = p_of_r(ReturnProb::new(lo * scale, d).unwrap());
        let phi = p_of_r(ReturnProb::new(hi * scale, d).unwrap());
        prop_assert!(plo <= phi);
    }

    #[test]
    fn series_is_increasing(d in 2u32..30, a in 0.01f64..0.95, b in 0.01f64..0.95) {
        prop_assume!((a - b).abs() > 1e-3);
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let scale = 1.0 / d as f64;
        let s_lo = series_bracket(ReturnProb::new(lo * scale, d).unwrap(), 1e-9).unwrap();
        let s_hi = series_bracket(ReturnProb::new(hi * scale, d).unwrap(), 1e-9).unwrap();
        prop_assert!(s_lo.upper < s_hi.lower);
    }

    #[test]
    fn lifetime_monotone_in_p(u in 1e-12f64..=1.0, a in 0.0f64..=1.0, b in 0.0f64..=1.0) {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assert!(geometric_lifetime(u, lo) <= geometric_lifetime(u, hi));
    }

    #[test]
    fn laws_sum_to_one(d in 2u32..40, p in 0.0f64..=1.0, a_raw in any::<u32>(), b_raw in any::<u32>()) {
        let (a, b) = site_counts(d, a_raw, b_raw);
        for law in [ttbp_law(1, params(d, p)).unwrap(), ttbp_law(2, params(d, p)).unwrap(), fmbp_law(a, b, params(d, p)).unwrap()] {
            let total: f64 = Outcome::CANONICAL.iter().map(|&o| law.prob(o)).sum();
            prop_assert!((total - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn partition_cells_are_ordered(d in 2u32..40, p in 0.0f64..=1.0, a_raw in any::<u32>(), b_raw in any::<u32>(), u in 0.0f64..=1.0) {
        let (a, b) = site_counts(d, a_raw, b_raw);
        let part = IntervalPartition::frog(a, b, params(d, p)).unwrap();
        let cells = part.cells();
        prop_assert_eq!(cells[0].lower, 0.0);
        prop_assert_eq!(cells.last().unwrap().upper, 1.0);
        for w in cells.windows(2) {
            prop_assert_eq!(w[0].upper, w[1].lower);
            prop_assert!(w[0].lower <= w[0].upper);
        }
        let hit = part.locate(u);
        prop_assert!(hit.lower <= u && u <= hit.upper);
    }

    #[test]
    fn moment_rows_are_law_means(d in 2u32..50, p in 0.0f64..=1.0) {
        let m = moment_matrix(params(d, p));
        for (row, ty) in [(0usize, 1u8), (1, 2)] {
            let law = ttbp_law(ty, params(d, p)).unwrap();
            let type1: f64 = Outcome::CANONICAL.iter().map(|&o| law.prob(o) * o.counts().0 as f64).sum();
            let type2: f64 = Outcome::CANONICAL.iter().map(|&o| law.prob(o) * o.counts().1 as f64).sum();
            prop_assert_eq!(m.m[row][0], type1);
            prop_assert_eq!(m.m[row][1], type2);
        }
    }
}

#[test]
fn spectral_radius_crosses_one_at_lower_bound() {
    for d in 2..=100 {
        let pc = theorem1_lower(d);
        let below = spectral_radius(&moment_matrix(params(d, pc * (1.0 - 1e-6))));
        let above = spectral_radius(&moment_matrix(params(d, (pc * (1.0 + 1e-6)).min(1.0))));
        assert!(below < 1.0 && above > 1.0, "d={d}");
    }
}

fn marginals_match(part: &IntervalPartition, law: &OffspringLaw, seed: u64) {
    let n = 1_000_000u64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = [0u64; 4];
    for _ in 0..n {
        let o = sample_offspring(part, rng.random::<f64>());
        counts[Outcome::CANONICAL.iter().position(|&c| c == o).unwrap()] += 1;
    }
    for (i, &o) in Outcome::CANONICAL.iter().enumerate() {
        let q = law.prob(o);
        let sigma = (q * (1.0 - q) / n as f64).sqrt();
        let freq = counts[i] as f64 / n as f64;
        assert!((freq - q).abs() <= 4.0 * sigma + 1e-12, "{o}: {freq} vs {q}");
    }
}

#[test]
fn coupling_marginals() {
    let pr = params(4, 0.7);
    marginals_match(&IntervalPartition::tip(pr), &ttbp_law(1, pr).unwrap(), 1);
    marginals_match(&IntervalPartition::interior(pr), &ttbp_law(2, pr).unwrap(), 2);
    marginals_match(&IntervalPartition::frog(2, 1, pr).unwrap(), &fmbp_law(2, 1, pr).unwrap(), 3);
}

#[test]
fn coupled_runs_at_high_p_keep_dominance() {
    for seed in 1..=100 {
        let run = run_coupled(params(2, 0.9), 10_000, seed).unwrap();
        assert_eq!(run.violations, 0, "seed {seed}");
        assert_eq!(run.constraint_flags, 0, "seed {seed}");
    }
}

#[test]
fn observed_site_counts_are_admissible() {
    let run = run_coupled(params(3, 0.8), 20_000, 5).unwrap();
    assert!(!run.ab_counts.is_empty());
    for &(a, b) in run.ab_counts.keys() {
        assert!(a >= 1 && a + b >= 2 && a + b <= 4, "({a},{b})");
    }
}

#[test]
fn lifetime_mean() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for p in [0.2f64, 0.5, 0.8] {
        let n = 200_000;
        let mean_target = p / (1.0 - p);
        let sd = p.sqrt() / (1.0 - p);
        let total: u64 = (0..n).map(|_| geometric_lifetime(1.0 - rng.random::<f64>(), p)).sum();
        let mean = total as f64 / n as f64;
        assert!((mean - mean_target).abs() < 4.0 * sd / (n as f64).sqrt(), "p={p}: {mean}");
    }
}

fn config(p: f64, variant: Variant) -> SimConfig {
    let mut c = SimConfig::new(2, p, variant);
    c.max_activations = 2_000;
    c.seed = 1234;
    c
}

#[test]
fn reached_cap_is_monotone_in_p() {
    let grid = [0.6, 0.66, 0.7, 0.72, 0.75, 0.8, 0.9];
    for replica in 0..80 {
        for variant in [Variant::Full, Variant::Oriented] {
            let caps: Vec<bool> = grid
                .iter()
                .map(|&p| run_once(&config(p, variant), replica).unwrap().reached_cap)
                .collect();
            assert!(caps.windows(2).all(|w| !w[0] || w[1]), "replica {replica}: {caps:?}");
        }
    }
}

#[test]
fn oriented_survival_implies_full_survival() {
    for replica in 0..100 {
        for p in [0.68, 0.72, 0.76] {
            let o = run_once(&config(p, Variant::Oriented), replica).unwrap();
            let f = run_once(&config(p, Variant::Full), replica).unwrap();
            assert!(!o.reached_cap || f.reached_cap);
            assert!(o.activations <= f.activations || f.reached_cap);
        }
    }
}

#[test]
fn growth_rate_at_the_critical_point() {
    let rc = solve_rc(2, 1e-12).unwrap();
    let r = ReturnProb::new(rc.midpoint(), 2).unwrap();
    let est = u_infty_estimate(r, 2000).unwrap();
    assert!((est - 0.5).abs() < 5e-3, "{est}");
    let seq = u_sequence(r, 2000);
    let scaled: Vec<f64> = (100..=2000).map(|k| seq.scaled(k)).collect();
    let (lo, hi) = scaled
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    assert!(lo > 0.0 && hi / lo < 1.01, "d^n u_n ranges over [{lo}, {hi}]");
}
