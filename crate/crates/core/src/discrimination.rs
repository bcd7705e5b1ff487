//! How many events it takes to tell two prescriptions apart.

use std::fmt;

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{invalid, DecayError, Result};
use crate::joint::{GridSpec, JointDensity, Negativity};
use crate::numerics::{quad_semiinf_2d_with, EventBatch, ModelDescriptor, QuadOptions};

/// KL values at or below this are indistinguishable from quadrature noise
/// and reported as exactly zero.
pub const KL_RESOLUTION: f64 = 1e-12;

const ROUNDING_ULPS: f64 = 64.0;

/// Quadrature settings used by [`kl_divergence`].
pub fn kl_quad_options() -> QuadOptions {
    QuadOptions {
        abs_tol: 1e-13,
        rel_tol: 1e-10,
        max_intervals: 20_000,
    }
}

/// Minimum expected count per merged bin.
pub const MIN_EXPECTED: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KlEstimate {
    /// Nats; snapped to 0 below [`KL_RESOLUTION`].
    pub value: f64,
    pub error_estimate: f64,
    /// Mass of `p` outside the integration square (0 for the full quadrant).
    pub tail_mass: f64,
    pub evaluations: usize,
}

fn check_compatible(p: &JointDensity, q: &JointDensity) -> Result<()> {
    if p.channel != q.channel {
        return Err(DecayError::IncompatibleModels(format!(
            "channels differ: {} vs {}",
            p.channel, q.channel
        )));
    }
    if p.state != q.state {
        return Err(DecayError::IncompatibleModels(format!(
            "states differ: {} vs {}",
            p.state, q.state
        )));
    }
    if p.params != q.params {
        return Err(DecayError::IncompatibleModels("parameter sets differ".into()));
    }
    Ok(())
}

fn refuse_negative(d: &JointDensity) -> Result<()> {
    match d.negativity {
        Negativity::Present { min_value, t_l, t_r } => Err(DecayError::NegativeDensity {
            approach: d.approach.name().to_string(),
            min_value,
            t_l,
            t_r,
        }),
        Negativity::None => Ok(()),
    }
}

/// `∫∫ p ln(p/q)` over the quadrant, both densities rescaled to unit mass first.
pub fn kl_divergence(p: &JointDensity, q: &JointDensity) -> Result<f64> {
    Ok(kl_divergence_with(p, q, None, &kl_quad_options())?.value)
}

/// [`kl_divergence`] over `[0, t_max]²` with explicit quadrature options.
pub fn kl_divergence_with(
    p: &JointDensity,
    q: &JointDensity,
    t_max: Option<f64>,
    opts: &QuadOptions,
) -> Result<KlEstimate> {
    check_compatible(p, q)?;
    refuse_negative(p)?;
    refuse_negative(q)?;
    let p = p.shape_normalized()?;
    let q = q.shape_normalized()?;
    if q.is_zero() && !p.is_zero() {
        return Err(DecayError::SupportMismatch {
            t_l: 0.0,
            t_r: 0.0,
            p: p.eval(0.0, 0.0),
            q: 0.0,
        });
    }
    let (sl, sr) = p.carrier.slowest_rates();
    // detuned so that no node pair sits exactly on the diagonal
    let sr = sr * (1.0 + std::f64::consts::FRAC_1_SQRT_2 * 1e-3);
    let integrand = |t_l: f64, t_r: f64| -> Result<f64> {
        let pv = p.eval(t_l, t_r);
        // p that is zero to rounding contributes nothing, whatever q is there
        if pv <= ROUNDING_ULPS * f64::EPSILON * p.norm_constant * p.carrier.abs_bound(t_l, t_r) {
            return Ok(0.0);
        }
        let qv = q.eval(t_l, t_r);
        // isolated zeros of q are lost to cancellation; clamp to the rounding scale
        let noise = ROUNDING_ULPS * f64::EPSILON * q.norm_constant * q.carrier.abs_bound(t_l, t_r);
        if qv < -noise || (qv <= 0.0 && noise == 0.0) {
            return Err(DecayError::SupportMismatch { t_l, t_r, p: pv, q: qv });
        }
        Ok(pv * (pv / qv.max(noise)).ln())
    };
    let r = quad_semiinf_2d_with(integrand, (sl, sr), t_max, opts)?;
    let tail_mass = match t_max {
        Some(t) => (1.0 - p.rect_probability(0.0, t, 0.0, t)?).max(0.0),
        None => 0.0,
    };
    let value = if r.value <= KL_RESOLUTION { 0.0 } else { r.value };
    Ok(KlEstimate {
        value,
        error_estimate: r.error_estimate,
        tail_mass,
        evaluations: r.evaluations,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSquareResult {
    pub chi2: f64,
    pub dof: usize,
    pub p_value: f64,
    /// Bins left after merging sparse neighbours.
    pub bins: usize,
}

/// Cell edges along one axis: grid points, with 0 prepended and ∞ appended.
fn axis_edges(bins: &GridSpec) -> Vec<f64> {
    let mut edges = Vec::with_capacity(bins.n + 2);
    let pts = bins.points();
    if pts.first().is_some_and(|&t| t > 0.0) {
        edges.push(0.0);
    }
    edges.extend(pts);
    edges.push(f64::INFINITY);
    edges
}

/// Pearson test of `events` against `model`.
///
/// The grid points of `bins` are bin edges on both axes; overflow cells out
/// to infinity are added so every event lands somewhere. Cells are merged in
/// row-major order until each expected count reaches [`MIN_EXPECTED`].
pub fn chi_square_binned(events: &EventBatch, model: &JointDensity, bins: &GridSpec) -> Result<ChiSquareResult> {
    bins.validate()?;
    let n = events.events.len();
    if (n as f64) < 2.0 * MIN_EXPECTED {
        return Err(DecayError::TooFewEvents {
            events: n,
            min_expected: MIN_EXPECTED,
        });
    }
    if let Some(e) = events.events.iter().find(|e| e.channel != model.channel) {
        return Err(DecayError::IncompatibleModels(format!(
            "event in channel {} tested against channel {}",
            e.channel, model.channel
        )));
    }
    let model = model.shape_normalized()?;
    let edges = axis_edges(bins);
    let cells = edges.len() - 1;
    let locate = |t: f64| edges.partition_point(|&e| e <= t).saturating_sub(1).min(cells - 1);
    let mut observed = vec![0u64; cells * cells];
    for e in &events.events {
        observed[locate(e.t_l) * cells + locate(e.t_r)] += 1;
    }
    let mut expected = Vec::with_capacity(cells * cells);
    for a in 0..cells {
        for b in 0..cells {
            let prob = model.rect_probability(edges[a], edges[a + 1], edges[b], edges[b + 1])?;
            expected.push(n as f64 * prob.max(0.0));
        }
    }

    let mut merged: Vec<(f64, u64)> = Vec::new();
    let (mut acc_e, mut acc_o) = (0.0, 0u64);
    for (e, o) in expected.iter().zip(&observed) {
        acc_e += e;
        acc_o += o;
        if acc_e >= MIN_EXPECTED {
            merged.push((acc_e, acc_o));
            acc_e = 0.0;
            acc_o = 0;
        }
    }
    if acc_e > 0.0 || acc_o > 0 {
        match merged.last_mut() {
            Some(last) => {
                last.0 += acc_e;
                last.1 += acc_o;
            }
            None => merged.push((acc_e, acc_o)),
        }
    }
    if merged.len() < 2 || merged.iter().any(|(e, _)| *e < MIN_EXPECTED) {
        return Err(DecayError::TooFewEvents {
            events: n,
            min_expected: MIN_EXPECTED,
        });
    }
    let chi2: f64 = merged
        .iter()
        .map(|&(e, o)| {
            let d = o as f64 - e;
            d * d / e
        })
        .sum();
    let dof = merged.len() - 1;
    let dist = ChiSquared::new(dof as f64).map_err(|e| invalid("dof", e.to_string()))?;
    Ok(ChiSquareResult {
        chi2,
        dof,
        p_value: dist.sf(chi2),
        bins: merged.len(),
    })
}

/// Event count, possibly unbounded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleSize {
    Finite(u64),
    Infinite,
}

impl SampleSize {
    pub fn is_infinite(&self) -> bool {
        matches!(self, SampleSize::Infinite)
    }
}

impl fmt::Display for SampleSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SampleSize::Finite(n) => write!(f, "{n}"),
            SampleSize::Infinite => f.write_str("Infinite"),
        }
    }
}

impl Serialize for SampleSize {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            SampleSize::Finite(n) => s.serialize_u64(*n),
            SampleSize::Infinite => s.serialize_str("Infinite"),
        }
    }
}

impl<'de> Deserialize<'de> for SampleSize {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match serde_json::Value::deserialize(d)? {
            serde_json::Value::String(s) if s == "Infinite" => Ok(SampleSize::Infinite),
            serde_json::Value::Number(n) => n
                .as_u64()
                .map(SampleSize::Finite)
                .ok_or_else(|| serde::de::Error::custom("expected a nonnegative integer")),
            other => Err(serde::de::Error::custom(format!("bad sample size {other}"))),
        }
    }
}

/// Events needed for the log-likelihood ratio to reach `z` sigmas:
/// `ceil(z² / 2kl)`.
pub fn required_sample_size(kl: f64, z: f64) -> Result<SampleSize> {
    if !(z > 0.0 && z.is_finite()) {
        return Err(invalid("z", format!("significance must be > 0, got {z}")));
    }
    if !(kl >= 0.0) {
        return Err(invalid("kl", format!("divergence must be >= 0, got {kl}")));
    }
    if kl == 0.0 {
        return Ok(SampleSize::Infinite);
    }
    let n = (z * z / (2.0 * kl)).ceil();
    if n >= u64::MAX as f64 {
        Ok(SampleSize::Infinite)
    } else {
        Ok(SampleSize::Finite(n as u64))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscriminationReport {
    pub kl_pq: f64,
    pub kl_qp: f64,
    pub chi2: Option<f64>,
    pub dof: Option<usize>,
    pub p_value: Option<f64>,
    pub n_required: SampleSize,
    pub models: [ModelDescriptor; 2],
}

/// KL in both directions, the sample size for `z` sigmas and, when `events`
/// are supplied, a binned test of those events against `q`.
pub fn discriminate(
    p: &JointDensity,
    q: &JointDensity,
    z: f64,
    events: Option<&EventBatch>,
    bins: &GridSpec,
) -> Result<DiscriminationReport> {
    let kl_pq = kl_divergence(p, q)?;
    let kl_qp = kl_divergence(q, p)?;
    let n_required = required_sample_size(kl_pq, z)?;
    let (chi2, dof, p_value) = match events {
        Some(batch) => {
            let r = chi_square_binned(batch, q, bins)?;
            (Some(r.chi2), Some(r.dof), Some(r.p_value))
        }
        None => (None, None, None),
    };
    Ok(DiscriminationReport {
        kl_pq,
        kl_qp,
        chi2,
        dof,
        p_value,
        n_required,
        models: [ModelDescriptor::of(p), ModelDescriptor::of(q)],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::joint::joint_density;
    use crate::model::{ApproachKind, EntangledStateSpec};
    use crate::params::KaonParams;

    #[test]
    fn sample_size_arithmetic() {
        assert_eq!(required_sample_size(0.0, 5.0).unwrap(), SampleSize::Infinite);
        assert_eq!(required_sample_size(0.5, 5.0).unwrap(), SampleSize::Finite(25));
        assert!(required_sample_size(0.5, 0.0).is_err());
        assert!(required_sample_size(0.5, -1.0).is_err());
        assert!(required_sample_size(-0.1, 5.0).is_err());
    }

    #[test]
    fn sample_size_json() {
        assert_eq!(serde_json::to_string(&SampleSize::Infinite).unwrap(), "\"Infinite\"");
        assert_eq!(serde_json::to_string(&SampleSize::Finite(18)).unwrap(), "18");
        let back: SampleSize = serde_json::from_str("\"Infinite\"").unwrap();
        assert!(back.is_infinite());
    }

    #[test]
    fn self_divergence_is_zero() {
        let d = joint_density(
            ApproachKind::Hybrid,
            &EntangledStateSpec::singlet(),
            &KaonParams::default(),
            "12".parse().unwrap(),
        )
        .unwrap();
        assert_eq!(kl_divergence(&d, &d).unwrap(), 0.0);
    }

    #[test]
    fn mismatched_channels_rejected() {
        let s = EntangledStateSpec::singlet();
        let p = KaonParams::default();
        let a = joint_density(ApproachKind::Hybrid, &s, &p, "12".parse().unwrap()).unwrap();
        let b = joint_density(ApproachKind::Hybrid, &s, &p, "21".parse().unwrap()).unwrap();
        assert!(matches!(kl_divergence(&a, &b), Err(DecayError::IncompatibleModels(_))));
    }
}
