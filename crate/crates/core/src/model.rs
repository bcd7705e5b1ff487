//! CP mixing, two-kaon states and their survival amplitudes.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::biexp::{BiExpSum, BiExpTerm};
use crate::error::{invalid, DecayError, Result};
use crate::params::{CpSector, KaonParams};

/// Physical propagation mode of one kaon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DecayMode {
    Short,
    Long,
}

impl DecayMode {
    pub const ALL: [DecayMode; 2] = [DecayMode::Short, DecayMode::Long];

    pub fn index(self) -> usize {
        match self {
            DecayMode::Short => 0,
            DecayMode::Long => 1,
        }
    }

    fn z(self, params: &KaonParams) -> Complex64 {
        match self {
            DecayMode::Short => params.z_short(),
            DecayMode::Long => params.z_long(),
        }
    }

    fn rate(self, params: &KaonParams) -> f64 {
        match self {
            DecayMode::Short => params.gamma_s,
            DecayMode::Long => params.gamma_l,
        }
    }
}

/// `⟨K_i | K_a⟩` for CP sector `i` and decay mode `a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixingMatrix {
    entries: [[Complex64; 2]; 2],
}

impl MixingMatrix {
    pub fn get(&self, sector: CpSector, mode: DecayMode) -> Complex64 {
        self.entries[sector.index()][mode.index()]
    }

    pub fn column_norm(&self, mode: DecayMode) -> f64 {
        let a = mode.index();
        (self.entries[0][a].norm_sqr() + self.entries[1][a].norm_sqr()).sqrt()
    }
}

/// CP-basis components of K_S and K_L:
/// `K_S = (K_1 + ε K_2)/√(1+|ε|²)`, `K_L = (K_2 + ε K_1)/√(1+|ε|²)`.
pub fn mixing_matrix(params: &KaonParams) -> Result<MixingMatrix> {
    let eps = params.epsilon;
    if !(eps.norm() < 1.0) {
        return Err(invalid("epsilon", format!("|epsilon| must be < 1, got {}", eps.norm())));
    }
    let n = 1.0 / (1.0 + eps.norm_sqr()).sqrt();
    let one = Complex64::new(n, 0.0);
    let mixed = eps * n;
    Ok(MixingMatrix {
        entries: [[one, mixed], [mixed, one]],
    })
}

/// Two-kaon state in the {S, L} ⊗ {S, L} basis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum EntangledStateSpec {
    /// `(1+|ε|²)/√2 · (|K_L K_S⟩ − e^{iα} |K_S K_L⟩)`; α = 0 is the singlet.
    Alpha(f64),
    /// `(1+|ε|²)/(√2 (1−ε²)) · (|K_L K_L⟩ − e^{iβ} |K_S K_S⟩)`.
    Beta(f64),
    /// Coefficients `[[C_SS, C_SL], [C_LS, C_LL]]` on `|K_a⟩_l |K_b⟩_r`.
    General([[Complex64; 2]; 2]),
}

impl EntangledStateSpec {
    pub fn singlet() -> Self {
        Self::Alpha(0.0)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Alpha(a) | Self::Beta(a) if !a.is_finite() => {
                Err(invalid("state", format!("phase must be finite, got {a}")))
            }
            Self::General(c) => {
                let norm: f64 = c.iter().flatten().map(|z| z.norm_sqr()).sum();
                if norm > 0.0 && norm.is_finite() {
                    Ok(())
                } else {
                    Err(invalid("state", "general coefficient matrix has zero norm"))
                }
            }
            _ => Ok(()),
        }
    }

    /// Coefficients `C[a][b]` including the conventional ε-dependent prefactors.
    pub fn coefficients(&self, params: &KaonParams) -> [[Complex64; 2]; 2] {
        let eps = params.epsilon;
        let zero = Complex64::new(0.0, 0.0);
        match *self {
            Self::Alpha(alpha) => {
                let k = Complex64::new((1.0 + eps.norm_sqr()) / 2f64.sqrt(), 0.0);
                [[zero, -k * Complex64::from_polar(1.0, alpha)], [k, zero]]
            }
            Self::Beta(beta) => {
                let k = (1.0 + eps.norm_sqr()) / (2f64.sqrt() * (1.0 - eps * eps));
                [[-k * Complex64::from_polar(1.0, beta), zero], [zero, k]]
            }
            Self::General(c) => c,
        }
    }

    /// CP-basis components `A[i][j] = Σ_ab C_ab M_ia M_jb` at `t = 0`.
    pub fn cp_components(&self, params: &KaonParams) -> Result<[[Complex64; 2]; 2]> {
        let m = mixing_matrix(params)?;
        let c = self.coefficients(params);
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for i in CpSector::ALL {
            for j in CpSector::ALL {
                for a in DecayMode::ALL {
                    for b in DecayMode::ALL {
                        out[i.index()][j.index()] +=
                            c[a.index()][b.index()] * m.get(i, a) * m.get(j, b);
                    }
                }
            }
        }
        Ok(out)
    }

    /// `‖ψ(0,0)‖²`; dividing by it normalizes survival probabilities.
    pub fn norm_sq(&self, params: &KaonParams) -> Result<f64> {
        Ok(self.cp_components(params)?.iter().flatten().map(|z| z.norm_sqr()).sum())
    }

    /// State class label used in reports.
    pub fn label(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for EntangledStateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Alpha(a) => write!(f, "alpha:{}", ryu::Buffer::new().format(*a)),
            Self::Beta(b) => write!(f, "beta:{}", ryu::Buffer::new().format(*b)),
            Self::General(c) => {
                let mut buf = ryu::Buffer::new();
                let parts: Vec<String> = [c[0][0], c[0][1], c[1][0], c[1][1]]
                    .iter()
                    .flat_map(|z| [buf.format(z.re).to_owned(), buf.format(z.im).to_owned()])
                    .collect();
                write!(f, "general:{}", parts.join(","))
            }
        }
    }
}

impl FromStr for EntangledStateSpec {
    type Err = DecayError;

    /// `alpha:<radians>`, `beta:<radians>`, `singlet`, or
    /// `general:<8 reals>` (re/im pairs of C_SS, C_SL, C_LS, C_LL).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "singlet" {
            return Ok(Self::singlet());
        }
        let (kind, rest) = s
            .split_once(':')
            .ok_or_else(|| invalid("state", format!("expected <kind>:<value>, got `{s}`")))?;
        let parse = |v: &str| {
            v.trim()
                .parse::<f64>()
                .map_err(|_| invalid("state", format!("not a number: `{v}`")))
        };
        let spec = match kind.trim() {
            "alpha" => Self::Alpha(parse(rest)?),
            "beta" => Self::Beta(parse(rest)?),
            "general" => {
                let vals = rest.split(',').map(parse).collect::<Result<Vec<_>>>()?;
                if vals.len() != 8 {
                    return Err(invalid("state", format!("general needs 8 reals, got {}", vals.len())));
                }
                let z = |k: usize| Complex64::new(vals[2 * k], vals[2 * k + 1]);
                Self::General([[z(0), z(1)], [z(2), z(3)]])
            }
            other => return Err(invalid("state", format!("unknown state kind `{other}`"))),
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// Joint detection channel: CP sector on the left and on the right.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Channel {
    pub left: CpSector,
    pub right: CpSector,
}

impl Channel {
    pub const ALL: [Channel; 4] = [
        Channel::new(CpSector::One, CpSector::One),
        Channel::new(CpSector::One, CpSector::Two),
        Channel::new(CpSector::Two, CpSector::One),
        Channel::new(CpSector::Two, CpSector::Two),
    ];

    pub const fn new(left: CpSector, right: CpSector) -> Self {
        Self { left, right }
    }

    /// Left-right mirror image.
    pub fn swapped(self) -> Self {
        Self::new(self.right, self.left)
    }
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.left.label(), self.right.label())
    }
}

impl FromStr for Channel {
    type Err = DecayError;

    fn from_str(s: &str) -> Result<Self> {
        let sector = |c: char| match c {
            '1' => Ok(CpSector::One),
            '2' => Ok(CpSector::Two),
            _ => Err(invalid("channel", format!("expected 11, 12, 21 or 22, got `{s}`"))),
        };
        let mut chars = s.trim().chars();
        match (chars.next(), chars.next(), chars.next()) {
            (Some(l), Some(r), None) => Ok(Channel::new(sector(l)?, sector(r)?)),
            _ => Err(invalid("channel", format!("expected 11, 12, 21 or 22, got `{s}`"))),
        }
    }
}

/// Decay-time prescription.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ApproachKind {
    /// Mixed second derivative of the survival probability.
    StandardNew,
    /// Survival probability times the CP-sector decay rates.
    Hybrid,
    /// Modulus squared of the √Γ-weighted temporal wave function.
    TimeOperator,
    /// Negative gradient sum of the survival probability.
    StandardOld,
}

impl ApproachKind {
    pub const ALL: [ApproachKind; 4] = [
        ApproachKind::StandardNew,
        ApproachKind::Hybrid,
        ApproachKind::TimeOperator,
        ApproachKind::StandardOld,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ApproachKind::StandardNew => "standard-new",
            ApproachKind::Hybrid => "hybrid",
            ApproachKind::TimeOperator => "time-operator",
            ApproachKind::StandardOld => "standard-old",
        }
    }
}

impl fmt::Display for ApproachKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ApproachKind {
    type Err = DecayError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('_', "-").as_str() {
            "standard-new" | "standard" | "new" => Ok(ApproachKind::StandardNew),
            "hybrid" => Ok(ApproachKind::Hybrid),
            "time-operator" | "to" => Ok(ApproachKind::TimeOperator),
            "standard-old" | "old" => Ok(ApproachKind::StandardOld),
            other => Err(invalid("approach", format!("unknown approach `{other}`"))),
        }
    }
}

/// `ψ_ij(t_l, t_r)` for the four CP channels.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeMatrix {
    entries: [[BiExpSum; 2]; 2],
}

impl AmplitudeMatrix {
    pub fn get(&self, channel: Channel) -> &BiExpSum {
        &self.entries[channel.left.index()][channel.right.index()]
    }
}

fn amplitude_matrix(
    state: &EntangledStateSpec,
    params: &KaonParams,
    weight: impl Fn(DecayMode) -> f64,
) -> Result<AmplitudeMatrix> {
    params.validate()?;
    state.validate()?;
    let m = mixing_matrix(params)?;
    let c = state.coefficients(params);
    let build = |i: CpSector, j: CpSector| {
        let mut f = BiExpSum::zero();
        for a in DecayMode::ALL {
            for b in DecayMode::ALL {
                let coeff = c[a.index()][b.index()] * m.get(i, a) * m.get(j, b) * weight(a) * weight(b);
                if coeff.norm() > 0.0 {
                    f.push(BiExpTerm::new(coeff, a.z(params), b.z(params)));
                }
            }
        }
        f.merged()
    };
    Ok(AmplitudeMatrix {
        entries: [
            [build(CpSector::One, CpSector::One), build(CpSector::One, CpSector::Two)],
            [build(CpSector::Two, CpSector::One), build(CpSector::Two, CpSector::Two)],
        ],
    })
}

/// Survival amplitudes `ψ_ij = Σ_ab C_ab M_ia M_jb e^{−z_a t_l} e^{−z_b t_r}`.
pub fn survival_amplitude_matrix(
    state: &EntangledStateSpec,
    params: &KaonParams,
) -> Result<AmplitudeMatrix> {
    amplitude_matrix(state, params, |_| 1.0)
}

/// Temporal wave-function amplitudes: each K_S (K_L) factor carries √Γ_S (√Γ_L).
pub fn time_operator_amplitude_matrix(
    state: &EntangledStateSpec,
    params: &KaonParams,
) -> Result<AmplitudeMatrix> {
    amplitude_matrix(state, params, |mode| mode.rate(params).sqrt())
}
