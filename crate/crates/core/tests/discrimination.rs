use std::f64::consts::FRAC_PI_2;

use kaon_decay::discrimination::{kl_divergence, ChiSquareResult};
use kaon_decay::{
    chi_square_binned, discriminate, joint_density, required_sample_size, sample_events, ApproachKind,
    DecayError, EntangledStateSpec, EventBatch, GridSpec, JointDensity, KaonParams,
};
use statrs::distribution::{ContinuousCDF, Uniform};

/// KL(hybrid || time-operator), β = 0, channel 12; reverse direction below.
const KL_BETA0: f64 = 0.6923395093273869;
const KL_BETA0_REVERSE: f64 = 5.077568562620558;
const KL_BETA_HALF_PI: f64 = 0.6953524590748809;

fn density(approach: ApproachKind, state: EntangledStateSpec, channel: &str) -> JointDensity {
    joint_density(approach, &state, &KaonParams::default(), channel.parse().unwrap()).unwrap()
}

fn bins() -> GridSpec {
    GridSpec::uniform(10.0, 21).unwrap()
}

/// Midpoint rule in ln t on a geometric grid, plus the first cell `[0, t0]`.
fn riemann_kl(p: &JointDensity, q: &JointDensity, cells: usize) -> f64 {
    let (t0, t1) = (1e-5f64, 3e4f64);
    let step = (t1 / t0).ln() / cells as f64;
    let mut nodes = vec![(0.5 * t0, t0)];
    for k in 0..cells {
        let t = t0 * (step * (k as f64 + 0.5)).exp();
        nodes.push((t, t * step));
    }
    let (p, q) = (p.shape_normalized().unwrap(), q.shape_normalized().unwrap());
    let mut sum = 0.0;
    for &(a, wa) in &nodes {
        for &(b, wb) in &nodes {
            let pv = p.eval(a, b);
            if pv > 0.0 {
                sum += wa * wb * pv * (pv / q.eval(a, b)).ln();
            }
        }
    }
    sum
}

#[test]
fn kl_of_identical_models_is_zero() {
    let d = density(ApproachKind::Hybrid, EntangledStateSpec::Beta(0.0), "12");
    assert!(kl_divergence(&d, &d).unwrap().abs() <= 1e-12);
}

#[test]
fn alpha_class_kl_vanishes() {
    for channel in ["11", "12", "21"] {
        let h = density(ApproachKind::Hybrid, EntangledStateSpec::singlet(), channel);
        let t = density(ApproachKind::TimeOperator, EntangledStateSpec::singlet(), channel);
        assert!(kl_divergence(&h, &t).unwrap().abs() <= 1e-10, "channel {channel}");
    }
}

#[test]
fn beta_kl_regression_values() {
    let h = density(ApproachKind::Hybrid, EntangledStateSpec::Beta(0.0), "12");
    let t = density(ApproachKind::TimeOperator, EntangledStateSpec::Beta(0.0), "12");
    let forward = kl_divergence(&h, &t).unwrap();
    let reverse = kl_divergence(&t, &h).unwrap();
    assert!((forward - KL_BETA0).abs() < 1e-9 * KL_BETA0, "{forward}");
    assert!((reverse - KL_BETA0_REVERSE).abs() < 1e-9 * KL_BETA0_REVERSE, "{reverse}");

    let h = density(ApproachKind::Hybrid, EntangledStateSpec::Beta(FRAC_PI_2), "12");
    let t = density(ApproachKind::TimeOperator, EntangledStateSpec::Beta(FRAC_PI_2), "12");
    let forward = kl_divergence(&h, &t).unwrap();
    assert!((forward - KL_BETA_HALF_PI).abs() < 1e-9 * KL_BETA_HALF_PI, "{forward}");
}

#[test]
fn beta_kl_agrees_with_riemann_sum() {
    let h = density(ApproachKind::Hybrid, EntangledStateSpec::Beta(0.0), "12");
    let t = density(ApproachKind::TimeOperator, EntangledStateSpec::Beta(0.0), "12");
    let coarse = riemann_kl(&h, &t, 1500);
    assert!((coarse - KL_BETA0).abs() < 1e-4 * KL_BETA0, "riemann {coarse}");
}

#[test]
fn sample_sizes() {
    assert!(required_sample_size(0.0, 5.0).unwrap().is_infinite());
    assert_eq!(required_sample_size(0.5, 5.0).unwrap().to_string(), "25");
    assert_eq!(required_sample_size(KL_BETA0, 5.0).unwrap().to_string(), "19");
    assert_eq!(required_sample_size(KL_BETA_HALF_PI, 5.0).unwrap().to_string(), "18");
    assert!(required_sample_size(0.1, 0.0).is_err());
    assert!(required_sample_size(-0.1, 5.0).is_err());
}

#[test]
fn negative_densities_are_refused() {
    let sn = density(ApproachKind::StandardNew, EntangledStateSpec::singlet(), "11");
    let h = density(ApproachKind::Hybrid, EntangledStateSpec::singlet(), "11");
    assert!(matches!(kl_divergence(&sn, &h), Err(DecayError::NegativeDensity { .. })));
}

#[test]
fn mismatched_models_are_rejected() {
    let a = density(ApproachKind::Hybrid, EntangledStateSpec::Beta(0.0), "12");
    let b = density(ApproachKind::Hybrid, EntangledStateSpec::Beta(1.0), "12");
    assert!(matches!(kl_divergence(&a, &b), Err(DecayError::IncompatibleModels(_))));
}

#[test]
fn empty_batch_has_too_few_events() {
    let d = density(ApproachKind::Hybrid, EntangledStateSpec::singlet(), "12");
    let mut batch = sample_events(&d, 10, 1).unwrap();
    batch.events.clear();
    assert!(matches!(chi_square_binned(&batch, &d, &bins()), Err(DecayError::TooFewEvents { .. })));
}

fn test_against(events: &EventBatch, model: &JointDensity) -> ChiSquareResult {
    chi_square_binned(events, model, &bins()).unwrap()
}

#[test]
fn null_p_values_are_uniform() {
    let d = density(ApproachKind::Hybrid, EntangledStateSpec::singlet(), "12");
    let mut p_values: Vec<f64> = (0..50u64)
        .map(|seed| test_against(&sample_events(&d, 10_000, 1000 + seed).unwrap(), &d).p_value)
        .collect();
    p_values.sort_by(f64::total_cmp);
    let u = Uniform::new(0.0, 1.0).unwrap();
    let n = p_values.len() as f64;
    let ks = p_values
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            let c = u.cdf(p);
            (c - i as f64 / n).abs().max(((i + 1) as f64 / n - c).abs())
        })
        .fold(0.0, f64::max);
    // 1% critical value of the one-sample KS statistic
    assert!(ks < 1.63 / n.sqrt(), "KS statistic {ks}");
}

#[test]
fn power_at_required_sample_size() {
    let h = density(ApproachKind::Hybrid, EntangledStateSpec::Beta(0.0), "12");
    let t = density(ApproachKind::TimeOperator, EntangledStateSpec::Beta(0.0), "12");
    let report = discriminate(&h, &t, 5.0, None, &bins()).unwrap();
    let n = match report.n_required {
        kaon_decay::SampleSize::Finite(n) => n as usize,
        kaon_decay::SampleSize::Infinite => panic!("beta class must be distinguishable"),
    };
    let rejected = (0..20u64)
        .filter(|&seed| test_against(&sample_events(&h, n, seed).unwrap(), &t).p_value < 0.05)
        .count();
    assert!(rejected > 10, "{rejected}/20 rejections at n = {n}");
}

#[test]
fn report_carries_both_models() {
    let h = density(ApproachKind::Hybrid, EntangledStateSpec::Beta(0.0), "12");
    let t = density(ApproachKind::TimeOperator, EntangledStateSpec::Beta(0.0), "12");
    let events = sample_events(&h, 500, 8).unwrap();
    let r = discriminate(&h, &t, 5.0, Some(&events), &bins()).unwrap();
    assert_eq!(r.models[0].approach, "hybrid");
    assert_eq!(r.models[1].approach, "time-operator");
    assert!(r.p_value.unwrap() < 1e-6);
    let json = serde_json::to_string(&r).unwrap();
    assert!(json.contains("\"n_required\":19"));
}
