//! Physical constants of the neutral-kaon system.
//!
//! Internally every time is measured in units of the K_S lifetime and every
//! rate in units of Γ_S, so the default Γ_S is exactly 1.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// K_S lifetime in seconds.
pub const TAU_S_SECONDS: f64 = 8.92e-11;
/// K_L lifetime in seconds.
pub const TAU_L_SECONDS: f64 = 5.17e-8;
/// Modulus of the CP-violation parameter.
pub const EPSILON_ABS: f64 = 2.27e-3;
/// Argument of the CP-violation parameter, degrees.
pub const EPSILON_ARG_DEG: f64 = 43.37;

/// CP sector of a single kaon decay: `One` is CP = +1, `Two` is CP = −1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CpSector {
    One,
    Two,
}

impl CpSector {
    pub const ALL: [CpSector; 2] = [CpSector::One, CpSector::Two];

    pub fn index(self) -> usize {
        match self {
            CpSector::One => 0,
            CpSector::Two => 1,
        }
    }

    pub fn label(self) -> char {
        match self {
            CpSector::One => '1',
            CpSector::Two => '2',
        }
    }
}

/// Decay constants of the K_S/K_L system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KaonParams {
    pub gamma_s: f64,
    pub gamma_l: f64,
    /// m_L − m_S as an angular frequency.
    pub delta_m: f64,
    pub epsilon: Complex64,
    /// Rates used by the hybrid rule for CP sectors 1 and 2. `None` means
    /// (Γ_S, Γ_L).
    pub cp_rates: Option<[f64; 2]>,
}

impl Default for KaonParams {
    fn default() -> Self {
        Self {
            gamma_s: 1.0,
            gamma_l: TAU_S_SECONDS / TAU_L_SECONDS,
            delta_m: 0.5,
            epsilon: Complex64::from_polar(EPSILON_ABS, EPSILON_ARG_DEG.to_radians()),
            cp_rates: None,
        }
    }
}

impl KaonParams {
    pub fn new(gamma_s: f64, gamma_l: f64, delta_m: f64, epsilon: Complex64) -> Result<Self> {
        let params = Self {
            gamma_s,
            gamma_l,
            delta_m,
            epsilon,
            cp_rates: None,
        };
        params.validate()?;
        Ok(params)
    }

    /// Default constants with a different CP-violation parameter.
    pub fn with_epsilon(self, epsilon: Complex64) -> Self {
        Self { epsilon, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma_s.is_finite() && self.gamma_s > 0.0) {
            return Err(invalid("gamma_s", format!("must be > 0, got {}", self.gamma_s)));
        }
        if !(self.gamma_l.is_finite() && self.gamma_l > 0.0) {
            return Err(invalid("gamma_l", format!("must be > 0, got {}", self.gamma_l)));
        }
        if self.gamma_s < self.gamma_l {
            return Err(invalid(
                "gamma_l",
                format!("gamma_s ({}) must be >= gamma_l ({})", self.gamma_s, self.gamma_l),
            ));
        }
        if !(self.delta_m.is_finite() && self.delta_m >= 0.0) {
            return Err(invalid("delta_m", format!("must be >= 0, got {}", self.delta_m)));
        }
        let eps = self.epsilon.norm();
        if !eps.is_finite() || eps >= 1.0 {
            return Err(invalid("epsilon", format!("|epsilon| must be < 1, got {eps}")));
        }
        if let Some(rates) = self.cp_rates {
            if rates.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
                return Err(invalid("cp_rates", format!("must be > 0, got {rates:?}")));
            }
        }
        Ok(())
    }

    /// Mean decay rate (Γ_S + Γ_L)/2.
    pub fn gamma_bar(&self) -> f64 {
        0.5 * (self.gamma_s + self.gamma_l)
    }

    /// Decay rate the hybrid prescription assigns to a CP sector.
    pub fn cp_rate(&self, sector: CpSector) -> f64 {
        match self.cp_rates {
            Some(rates) => rates[sector.index()],
            None => match sector {
                CpSector::One => self.gamma_s,
                CpSector::Two => self.gamma_l,
            },
        }
    }

    /// Exponent z with amplitude ∝ exp(−z·t) for the short-lived mode.
    ///
    /// The common mass phase is dropped (m_S := 0), so only Δm survives.
    pub fn z_short(&self) -> Complex64 {
        Complex64::new(0.5 * self.gamma_s, 0.0)
    }

    /// Exponent z with amplitude ∝ exp(−z·t) for the long-lived mode.
    pub fn z_long(&self) -> Complex64 {
        Complex64::new(0.5 * self.gamma_l, self.delta_m)
    }

    /// Rescale every rate by `factor` (times scale by `1/factor`).
    pub fn scaled_rates(&self, factor: f64) -> Self {
        Self {
            gamma_s: self.gamma_s * factor,
            gamma_l: self.gamma_l * factor,
            delta_m: self.delta_m * factor,
            epsilon: self.epsilon,
            cp_rates: self.cp_rates.map(|[a, b]| [a * factor, b * factor]),
        }
    }
}
