//! Closed-form leading-order expansions in ε of the joint densities.
//!
//! These are the textbook expansions as usually written, prefactors
//! included, kept as cross-checks of the exact engine in [`crate::joint`].
//! They are unnormalized. Two known quirks of the written forms are kept
//! verbatim rather than corrected:
//!
//! * the `|ε|²(…)` prefactor is twice the `|ε|²/2` that the survival
//!   amplitude actually carries, so shapes agree with the exact engine but
//!   scales differ by a constant;
//! * the hybrid singlet form carries `Γ_S Γ_L` where the hybrid rule gives
//!   `Γ_1 Γ_1`, and the old-standard β form has the opposite sign on its
//!   interference term.

use serde::{Deserialize, Serialize};

use crate::error::{DecayError, Result};
use crate::model::{ApproachKind, Channel};
use crate::params::{CpSector, KaonParams};

/// State family for which expansions exist.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum StateClass {
    AlphaClass(f64),
    BetaClass(f64),
}

fn unsupported(approach: ApproachKind, class: StateClass, channel: Channel) -> DecayError {
    DecayError::UnsupportedCombination(format!("{approach} / {class:?} / channel {channel}"))
}

/// Evaluate the leading-order expansion of `approach` for `class` in `channel`.
pub fn leading_order_density(
    approach: ApproachKind,
    class: StateClass,
    channel: Channel,
    params: &KaonParams,
    t_l: f64,
    t_r: f64,
) -> Result<f64> {
    if !(t_l >= 0.0) {
        return Err(DecayError::NegativeTime(t_l));
    }
    if !(t_r >= 0.0) {
        return Err(DecayError::NegativeTime(t_r));
    }
    let (gs, gl, dm) = (params.gamma_s, params.gamma_l, params.delta_m);
    let gbar = params.gamma_bar();
    let eps2 = params.epsilon.norm_sqr();
    let same_sector = channel.left == channel.right;
    use ApproachKind::*;
    use CpSector::*;

    match class {
        StateClass::AlphaClass(alpha) => {
            let is_singlet = alpha == 0.0;
            let d = t_l - t_r;
            let bracket = (-gl * t_l - gs * t_r).exp() + (-gs * t_l - gl * t_r).exp()
                - 2.0 * (-gbar * (t_l + t_r)).exp() * (dm * d + alpha).cos();
            match (approach, channel.left, channel.right) {
                (StandardNew, One, One) if is_singlet => Ok(eps2
                    * (gs * gl * ((-gl * t_l - gs * t_r).exp() + (-gs * t_l - gl * t_r).exp())
                        - 2.0 * (-gbar * (t_l + t_r)).exp() * (gbar * gbar + dm * dm) * (dm * d).cos())),
                (Hybrid | TimeOperator, One, One) => Ok(gs * gl * eps2 * bracket),
                (StandardOld, One, One) if is_singlet => Ok((gs + gl) * eps2 * bracket),
                (StandardNew | Hybrid | TimeOperator, One, Two) => Ok(gs * gl * (-gs * t_l - gl * t_r).exp()),
                (StandardNew | Hybrid | TimeOperator, Two, One) => Ok(gs * gl * (-gl * t_l - gs * t_r).exp()),
                _ => Err(unsupported(approach, class, channel)),
            }
        }
        StateClass::BetaClass(beta) => {
            let s = t_l + t_r;
            let (el, es, eb) = ((-gl * s).exp(), (-gs * s).exp(), (-gbar * s).exp());
            let phase = dm * s + beta;
            match (approach, same_sector, channel.left) {
                (StandardNew | Hybrid | TimeOperator, true, One) => Ok(gs * gs * es),
                (StandardNew | Hybrid | TimeOperator, true, Two) => Ok(gl * gl * el),
                (Hybrid, false, _) => Ok(gs * gl * eps2 * (el + es - 2.0 * eb * phase.cos())),
                (TimeOperator, false, _) => {
                    Ok(eps2 * (gl * gl * el + gs * gs * es - 2.0 * gs * gl * eb * phase.cos()))
                }
                (StandardOld, false, _) => Ok(0.5
                    * eps2
                    * (2.0 * gl * el + 2.0 * gs * es
                        + 2.0 * eb * ((gs + gl) * phase.cos() - dm * phase.sin()))),
                _ => Err(unsupported(approach, class, channel)),
            }
        }
    }
}
