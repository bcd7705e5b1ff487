use kaon_decay::numerics::{
    finite_diff_mixed, quad_semiinf_1d, quad_semiinf_2d, quad_semiinf_2d_with, QuadOptions, RejectionEnvelope,
};
use kaon_decay::single::{density_single_unnormalized, normalization_single};
use kaon_decay::{
    joint_densities, joint_density, joint_survival, sample_events, ApproachKind, DensityOptions,
    EntangledStateSpec, KaonParams, SuperpositionSpec,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn kaon_spec() -> SuperpositionSpec {
    SuperpositionSpec::balanced(0.5, 1.0, 1.7253e-3).unwrap()
}

#[test]
fn half_line_closed_forms() {
    let r = quad_semiinf_1d(|t| (-t).exp(), 1.0).unwrap();
    assert!((r.value - 1.0).abs() < 1e-10);
    let r = quad_semiinf_1d(|t| (-t).exp() * (0.5 * t).cos(), 1.0).unwrap();
    assert!((r.value - 0.8).abs() < 1e-10);
}

#[test]
fn single_density_quadrature_matches_normalization() {
    let spec = kaon_spec();
    for approach in [ApproachKind::StandardNew, ApproachKind::Hybrid, ApproachKind::TimeOperator] {
        let n = normalization_single(approach, &spec).unwrap();
        let r = quad_semiinf_1d(|t| n * density_single_unnormalized(approach, &spec, t), spec.gamma2).unwrap();
        assert!((r.value - 1.0).abs() < 1e-8, "{approach}: {}", r.value);
    }
}

#[test]
fn quadrant_closed_forms() {
    let r = quad_semiinf_2d(|a, b| (-a - b).exp(), (1.0, 1.0)).unwrap();
    assert!((r.value - 1.0).abs() < 1e-10);

    let p = KaonParams::default();
    let all = joint_densities(ApproachKind::StandardNew, &EntangledStateSpec::singlet(), &p, &DensityOptions::default())
        .unwrap();
    let total: f64 = all
        .iter()
        .filter(|d| !d.is_zero())
        .map(|d| quad_semiinf_2d(|a, b| d.eval(a, b), d.carrier.slowest_rates()).unwrap().value)
        .sum();
    assert!((total - 1.0).abs() < 1e-8, "{total}");
}

#[test]
fn hybrid_cp_same_channel_integral() {
    let p = KaonParams::default();
    let d = joint_density(ApproachKind::Hybrid, &EntangledStateSpec::singlet(), &p, "11".parse().unwrap()).unwrap();
    let scale = 1.0 / p.epsilon.norm_sqr();
    let closed = d.carrier.integral().unwrap().re * scale;
    let quad = quad_semiinf_2d(|a, b| scale * d.eval_unnormalized(a, b), d.carrier.slowest_rates()).unwrap();
    assert!((quad.value - closed).abs() < 1e-8, "{} vs {closed}", quad.value);
}

#[test]
fn survival_mixed_derivative_at_one_two() {
    let p = KaonParams::default();
    let s = EntangledStateSpec::singlet();
    let c = "11".parse().unwrap();
    let norm = s.norm_sq(&p).unwrap();
    let fd = finite_diff_mixed(|a, b| joint_survival(&s, &p, c, a, b).unwrap() * norm, 1.0, 2.0, 1e-4);
    let exact = joint_density(ApproachKind::StandardNew, &s, &p, c).unwrap().eval_unnormalized(1.0, 2.0);
    assert!((fd - exact).abs() / exact.abs() < 1e-6, "{fd} vs {exact}");
}

#[test]
fn finite_difference_error_is_second_order() {
    let p = KaonParams::default();
    let s = EntangledStateSpec::Alpha(0.0);
    let c = "12".parse().unwrap();
    let f = |a: f64, b: f64| joint_survival(&s, &p, c, a, b).unwrap();
    let exact = joint_density(ApproachKind::StandardNew, &s, &p, c).unwrap().eval_unnormalized(0.7, 1.3)
        / s.norm_sq(&p).unwrap();
    let e1 = (finite_diff_mixed(f, 0.7, 1.3, 4e-2) - exact).abs();
    let e2 = (finite_diff_mixed(f, 0.7, 1.3, 2e-2) - exact).abs();
    let order = (e1 / e2).log2();
    assert!((1.8..2.2).contains(&order), "observed order {order}");
}

#[test]
fn sampled_mean_of_product_density() {
    let p = KaonParams::default().with_epsilon(Complex64::new(0.0, 0.0));
    let d = joint_density(ApproachKind::Hybrid, &EntangledStateSpec::singlet(), &p, "12".parse().unwrap()).unwrap();
    assert_eq!(d.carrier.len(), 1);
    let n = 100_000;
    let batch = sample_events(&d, n, 11).unwrap();
    let mean = batch.events.iter().map(|e| e.t_l).sum::<f64>() / n as f64;
    assert!((mean - 1.0 / p.gamma_s).abs() < 3.0 / ((n as f64).sqrt() * p.gamma_s), "{mean}");
}

#[test]
fn empirical_cdf_matches_quadrature() {
    let p = KaonParams::default();
    let d = joint_density(ApproachKind::Hybrid, &EntangledStateSpec::singlet(), &p, "12".parse().unwrap())
        .unwrap()
        .shape_normalized()
        .unwrap();
    let n = 50_000;
    let batch = sample_events(&d, n, 5).unwrap();
    assert!(batch.events.iter().all(|e| e.t_l >= 0.0 && e.t_r >= 0.0));
    let inside = batch.events.iter().filter(|e| e.t_l <= 1.0 && e.t_r <= 1.0).count() as f64 / n as f64;
    let cdf = quad_semiinf_2d_with(|a, b| Ok(d.eval(a, b)), (1.0, 1.0), Some(1.0), &QuadOptions::default())
        .unwrap()
        .value;
    assert!((cdf - d.rect_probability(0.0, 1.0, 0.0, 1.0).unwrap()).abs() < 1e-10);
    let sigma = (cdf * (1.0 - cdf) / n as f64).sqrt();
    assert!((inside - cdf).abs() < 3.0 * sigma, "{inside} vs {cdf} +- {sigma}");
}

#[test]
fn envelope_dominates_density() {
    let p = KaonParams::default();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for (approach, state, channel) in [
        (ApproachKind::Hybrid, EntangledStateSpec::singlet(), "12"),
        (ApproachKind::TimeOperator, EntangledStateSpec::Beta(0.0), "12"),
        (ApproachKind::StandardOld, EntangledStateSpec::Alpha(1.0), "11"),
    ] {
        let d = joint_density(approach, &state, &p, channel.parse().unwrap()).unwrap();
        let env = RejectionEnvelope::new(&d.carrier).unwrap();
        for _ in 0..1000 {
            let (a, b) = (rng.random_range(0.0..20.0), rng.random_range(0.0..20.0));
            assert!(env.eval(a, b) >= d.eval_unnormalized(a, b));
        }
    }
}

#[test]
fn sampling_is_reproducible_and_seed_sensitive() {
    let p = KaonParams::default();
    let d = joint_density(ApproachKind::TimeOperator, &EntangledStateSpec::Beta(0.0), &p, "12".parse().unwrap()).unwrap();
    let a = sample_events(&d, 9000, 1).unwrap();
    let b = sample_events(&d, 9000, 1).unwrap();
    let c = sample_events(&d, 9000, 2).unwrap();
    assert_eq!(a, b);
    assert_ne!(a.events, c.events);
    // a longer run extends the shorter one chunk by chunk
    let longer = sample_events(&d, 12_000, 1).unwrap();
    assert_eq!(&longer.events[..8192], &a.events[..8192]);
}
