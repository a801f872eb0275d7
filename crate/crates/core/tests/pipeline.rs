use exceedance::bootstrap::cluster_size_distribution_bootstrap;
use exceedance::limit::{mar_limit_cluster_size, TailProcessSampler};
use exceedance::simulate::{simulate_brown_resnick_path, simulate_mar};
use exceedance::{
    cluster_size_distribution, detect_clusters, pattern_distribution, resolve_threshold, Atom, BlockSpec,
    BootstrapConfig, ModelSpec, OrdinalPattern, PowerVariogram, Series, Series32, ThresholdSpec,
};

#[test]
fn mar_half_is_geometric_at_high_threshold() {
    let s = Series::single(simulate_mar(0.5, 1_000_000, 21).unwrap()).unwrap();
    let u = resolve_threshold(&s, ThresholdSpec::Quantile(0.99)).unwrap();
    let d = cluster_size_distribution(&s, u, 4).unwrap();
    for l in 1..=4 {
        let exact = mar_limit_cluster_size(0.5, l).unwrap();
        let se = (exact * (1.0 - exact) / d.denominator_count as f64).sqrt();
        assert!((d.probs[l - 1] - exact).abs() < 4.0 * se + 0.01, "l={l}: {}", d.probs[l - 1]);
    }
}

#[test]
fn single_precision_pipeline() {
    let x: Vec<f32> = simulate_mar(0.6f32, 200_000, 5).unwrap();
    let s = Series32::single(x).unwrap();
    let u = resolve_threshold(&s, ThresholdSpec::Quantile(0.98)).unwrap();
    let d = cluster_size_distribution(&s, u, 3).unwrap();
    assert_eq!(d.denominator_count, detect_clusters(&s, u).len() as u64);
    assert!((d.total() - 1.0).abs() < 1e-5);
    let cfg = BootstrapConfig { n_replicates: 200, block: BlockSpec::Fixed(5000), seed: 1, ci_level: 0.9 };
    let b = cluster_size_distribution_bootstrap(&s, u, 3, &cfg).unwrap();
    assert!(b.ci_lo[0] <= b.probs[0] && b.probs[0] <= b.ci_hi[0]);
    let p = pattern_distribution(&s, u, 2).unwrap();
    // MAR clusters decay geometrically, so the first value is the largest
    // unless the noise restarts the run.
    assert!(p.prob_of(&Atom::Pattern(OrdinalPattern::identity(2))).unwrap() > 0.5);
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let model = ModelSpec::BrownResnick { variogram: PowerVariogram::new(0.5, 1.0).unwrap() };
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            let s = simulate_brown_resnick_path(&model, 4000, 100, 3).unwrap();
            let u = resolve_threshold(&s, ThresholdSpec::Quantile(0.9)).unwrap();
            let cfg = BootstrapConfig { n_replicates: 300, block: BlockSpec::Segments, seed: 2, ci_level: 0.95 };
            let d = cluster_size_distribution_bootstrap(&s, u, 3, &cfg).unwrap();
            let sampler = TailProcessSampler::new(model, 3).unwrap();
            let l = exceedance::limit::limit_cluster_size_mc(&sampler, 3, 10_000, 4).unwrap();
            (s, d, l)
        })
    };
    assert_eq!(run(1), run(3));
}

#[test]
fn quantile_threshold_is_an_order_statistic() {
    let s = Series::new(vec![vec![5.0, 1.0, 3.0], vec![4.0, 2.0]]).unwrap();
    assert_eq!(resolve_threshold(&s, ThresholdSpec::Quantile(0.6)).unwrap(), 3.0);
    assert_eq!(resolve_threshold(&s, ThresholdSpec::Quantile(0.99)).unwrap(), 5.0);
    assert_eq!(resolve_threshold(&s, ThresholdSpec::Absolute(2.5)).unwrap(), 2.5);
}
