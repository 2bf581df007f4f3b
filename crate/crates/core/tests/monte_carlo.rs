use frogbound::model::r_of_p;
use frogbound::sim::{direct_hit_probability_check, estimate_pc, survival_frequency, SimConfig, Variant};
use frogbound::ModelParams;

#[test]
fn subcritical_full_model_dies_out() {
    let mut c = SimConfig::new(2, 0.55, Variant::Full);
    c.max_activations = 10_000;
    c.replicas = 1_000;
    c.seed = 5;
    assert_eq!(survival_frequency(&c).unwrap().freq, 0.0);
}

#[test]
fn oriented_estimate_for_binary_tree() {
    let est = estimate_pc(2, Variant::Oriented, 10_000, 1_000, 0.01, 17).unwrap();
    assert!(est.p_hi - est.p_lo <= 0.01);
    assert!(est.p_lo <= 0.72 && est.p_hi >= 0.70, "{est:?}");
    let full = estimate_pc(2, Variant::Full, 10_000, 1_000, 0.01, 17).unwrap();
    assert!(full.midpoint() <= est.midpoint() + 0.02, "{full:?} vs {est:?}");
}

#[test]
fn oriented_estimate_for_degree_ten() {
    let est = estimate_pc(10, Variant::Oriented, 10_000, 1_000, 0.01, 17).unwrap();
    assert!(est.p_lo <= 0.55 && est.p_hi >= 0.54, "{est:?}");
}

#[test]
fn direct_hit_frequencies() {
    let hit = direct_hit_probability_check(2, 0.9, 1, 1_000_000, 3).unwrap();
    let r = r_of_p(ModelParams::new(2, 0.9).unwrap()).r();
    assert_eq!(hit.expected, r);
    assert!((hit.frequency - r).abs() <= 4.0 * hit.sigma(), "{hit:?}");
    for n in 2..=4 {
        let hit = direct_hit_probability_check(3, 0.8, n, 400_000, n as u64).unwrap();
        assert!((hit.frequency - hit.expected).abs() <= 4.0 * hit.sigma(), "n={n}: {hit:?}");
    }
}
