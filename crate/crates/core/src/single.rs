//! Decay-time densities of one unstable particle prepared in a coherent
//! superposition of two decaying levels (quantum beats).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, DecayError, Result};
use crate::model::ApproachKind;

/// Tolerance on `|α_1|² + |α_2|² = 1`.
const NORMALIZATION_TOL: f64 = 1e-9;

/// Two coherently superposed decay processes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuperpositionSpec {
    pub alpha1: Complex64,
    pub alpha2: Complex64,
    /// E_2 − E_1 as an angular frequency.
    pub delta_e: f64,
    pub gamma1: f64,
    pub gamma2: f64,
}

impl SuperpositionSpec {
    pub fn new(
        alpha1: Complex64,
        alpha2: Complex64,
        delta_e: f64,
        gamma1: f64,
        gamma2: f64,
    ) -> Result<Self> {
        let spec = Self {
            alpha1,
            alpha2,
            delta_e,
            gamma1,
            gamma2,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Equal-weight, in-phase superposition.
    pub fn balanced(delta_e: f64, gamma1: f64, gamma2: f64) -> Result<Self> {
        let a = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Self::new(a, a, delta_e, gamma1, gamma2)
    }

    pub fn validate(&self) -> Result<()> {
        let norm = self.alpha1.norm_sqr() + self.alpha2.norm_sqr();
        if !((norm - 1.0).abs() <= NORMALIZATION_TOL) {
            return Err(invalid("alpha", format!("|alpha1|^2 + |alpha2|^2 must be 1, got {norm}")));
        }
        if !(self.gamma1.is_finite() && self.gamma1 > 0.0) {
            return Err(invalid("gamma1", format!("must be > 0, got {}", self.gamma1)));
        }
        if !(self.gamma2.is_finite() && self.gamma2 > 0.0) {
            return Err(invalid("gamma2", format!("must be > 0, got {}", self.gamma2)));
        }
        if !self.delta_e.is_finite() {
            return Err(invalid("delta_e", "must be finite"));
        }
        Ok(())
    }

    pub fn gamma_bar(&self) -> f64 {
        0.5 * (self.gamma1 + self.gamma2)
    }

    /// Phase of α_2/α_1 (zero if either amplitude vanishes).
    pub fn delta_phi(&self) -> f64 {
        if self.alpha1.norm() == 0.0 || self.alpha2.norm() == 0.0 {
            0.0
        } else {
            (self.alpha2 / self.alpha1).arg()
        }
    }
}

/// `R e^{iθ} = Γ̄ − iΔE`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeatPolar {
    pub r: f64,
    pub theta: f64,
}

pub fn beat_polar(spec: &SuperpositionSpec) -> BeatPolar {
    let g = spec.gamma_bar();
    BeatPolar {
        r: g.hypot(spec.delta_e),
        theta: (-spec.delta_e).atan2(g),
    }
}

/// A density value together with whether it came out negative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityValue {
    pub value: f64,
    pub negative: bool,
}

impl DensityValue {
    fn new(value: f64) -> Self {
        Self {
            value,
            negative: value < 0.0,
        }
    }
}

/// `∫₀^∞ e^{−Γt} cos(ωt + φ) dt`.
fn damped_cos_integral(gamma: f64, omega: f64, phi: f64) -> f64 {
    (gamma * phi.cos() - omega * phi.sin()) / (gamma * gamma + omega * omega)
}

/// Weights `(w_1, w_2, w_beat, phase_shift)` for `w_1 e^{−Γ_1 t} + w_2 e^{−Γ_2 t}
/// + w_beat e^{−Γ̄ t} cos(ΔE t + Δφ + phase_shift)`.
fn shape(approach: ApproachKind, spec: &SuperpositionSpec) -> (f64, f64, f64, f64) {
    let a1 = spec.alpha1.norm_sqr();
    let a2 = spec.alpha2.norm_sqr();
    let cross = 2.0 * spec.alpha1.norm() * spec.alpha2.norm();
    match approach {
        ApproachKind::StandardNew | ApproachKind::StandardOld => {
            let polar = beat_polar(spec);
            (a1 * spec.gamma1, a2 * spec.gamma2, cross * polar.r, polar.theta)
        }
        ApproachKind::Hybrid => (a1, a2, cross, 0.0),
        ApproachKind::TimeOperator => (
            a1 * spec.gamma1,
            a2 * spec.gamma2,
            cross * (spec.gamma1 * spec.gamma2).sqrt(),
            0.0,
        ),
    }
}

/// Unnormalized density of a prescription (the bracket without N, N′, N″).
pub fn density_single_unnormalized(approach: ApproachKind, spec: &SuperpositionSpec, t: f64) -> f64 {
    let (w1, w2, wb, shift) = shape(approach, spec);
    w1 * (-spec.gamma1 * t).exp()
        + w2 * (-spec.gamma2 * t).exp()
        + wb * (-spec.gamma_bar() * t).exp() * (spec.delta_e * t + spec.delta_phi() + shift).cos()
}

/// Normalization constant making the density integrate to one over `[0, ∞)`.
pub fn normalization_single(approach: ApproachKind, spec: &SuperpositionSpec) -> Result<f64> {
    spec.validate()?;
    let (w1, w2, wb, shift) = shape(approach, spec);
    let mass = w1 / spec.gamma1
        + w2 / spec.gamma2
        + wb * damped_cos_integral(spec.gamma_bar(), spec.delta_e, spec.delta_phi() + shift);
    if mass > 0.0 && mass.is_finite() {
        Ok(1.0 / mass)
    } else {
        Err(DecayError::NotNormalizable { mass })
    }
}

/// Normalized decay-time density of one particle under `approach`.
///
/// The old and new standard prescriptions coincide for a single particle.
/// Negative values are returned as-is with `negative` set.
pub fn density_single(approach: ApproachKind, spec: &SuperpositionSpec, t: f64) -> Result<DensityValue> {
    if !(t >= 0.0) {
        return Err(DecayError::NegativeTime(t));
    }
    let n = normalization_single(approach, spec)?;
    Ok(DensityValue::new(n * density_single_unnormalized(approach, spec, t)))
}

/// Survival probability `|α_1 e^{−(iE_1+Γ_1/2)t} + α_2 e^{−(iE_2+Γ_2/2)t}|²`,
/// divided by its value at `t = 0`.
///
/// Its negative time derivative is the normalized standard density.
pub fn survival_single(spec: &SuperpositionSpec, t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(DecayError::NegativeTime(t));
    }
    spec.validate()?;
    let amp = |t: f64| {
        spec.alpha1 * (-0.5 * spec.gamma1 * t).exp()
            + spec.alpha2 * Complex64::new(-0.5 * spec.gamma2 * t, spec.delta_e * t).exp()
    };
    let p0 = amp(0.0).norm_sqr();
    if p0 <= 0.0 {
        return Err(DecayError::NotNormalizable { mass: p0 });
    }
    Ok(amp(t).norm_sqr() / p0)
}
