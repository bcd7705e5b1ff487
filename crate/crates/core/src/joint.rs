//! Joint decay-time densities `p^ij(t_l, t_r)` of entangled kaon pairs.
//!
//! Every density is built exactly (all orders in ε) from the survival
//! amplitudes as a [`BiExpSum`]:
//!
//! | approach        | carrier                                |
//! |-----------------|----------------------------------------|
//! | `StandardNew`   | `∂²P^ij / ∂t_l ∂t_r`                   |
//! | `Hybrid`        | `Γ_i Γ_j P^ij`                         |
//! | `TimeOperator`  | `|ψ^TO_ij|²`                           |
//! | `StandardOld`   | `−(∂/∂t_l + ∂/∂t_r) P^ij`              |
//!
//! with `P^ij = |ψ_ij|²` before division by `‖ψ(0,0)‖²`.

use serde::{Deserialize, Serialize};

use crate::biexp::BiExpSum;
use crate::error::{invalid, DecayError, Result};
use crate::model::{
    survival_amplitude_matrix, time_operator_amplitude_matrix, ApproachKind, Channel,
    EntangledStateSpec,
};
use crate::params::KaonParams;

/// Extent of the default negativity scan, in units of τ_S.
pub const NEGATIVITY_SCAN_T_MAX: f64 = 10.0;
/// Points per axis of the default negativity scan.
pub const NEGATIVITY_SCAN_POINTS: usize = 200;
/// A scanned minimum below `−NEGATIVITY_RELATIVE · max|p|` flags negativity.
pub const NEGATIVITY_RELATIVE: f64 = 1e-9;

/// How densities are scaled to unit probability.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum NormalizationPolicy {
    /// One calibration constant shared by the four channels.
    #[default]
    Global,
    /// Each channel integrates to one on its own.
    PerChannel,
}

impl std::str::FromStr for NormalizationPolicy {
    type Err = DecayError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().replace('-', "_").as_str() {
            "global" => Ok(Self::Global),
            "per_channel" => Ok(Self::PerChannel),
            other => Err(invalid("normalization", format!("expected global or per_channel, got `{other}`"))),
        }
    }
}

impl std::fmt::Display for NormalizationPolicy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Global => "global",
            Self::PerChannel => "per_channel",
        })
    }
}

/// Options for building a [`JointDensity`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityOptions {
    pub policy: NormalizationPolicy,
    /// Detection-efficiency multiplier per channel, indexed `[left][right]`.
    pub efficiency: [[f64; 2]; 2],
}

impl Default for DensityOptions {
    fn default() -> Self {
        Self {
            policy: NormalizationPolicy::Global,
            efficiency: [[1.0; 2]; 2],
        }
    }
}

impl DensityOptions {
    pub fn per_channel() -> Self {
        Self {
            policy: NormalizationPolicy::PerChannel,
            ..Self::default()
        }
    }

    fn efficiency_of(&self, channel: Channel) -> f64 {
        self.efficiency[channel.left.index()][channel.right.index()]
    }
}

/// Result of the negativity scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Negativity {
    None,
    Present { min_value: f64, t_l: f64, t_r: f64 },
}

impl Negativity {
    pub fn is_present(&self) -> bool {
        matches!(self, Negativity::Present { .. })
    }
}

/// Evaluation grid along each time axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub t_min: f64,
    pub t_max: f64,
    pub n: usize,
    pub spacing: Spacing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Spacing {
    Uniform,
    /// Geometric spacing; a zero lower bound starts at `t_max · 1e-3`.
    Log,
}

impl GridSpec {
    pub fn uniform(t_max: f64, n: usize) -> Result<Self> {
        let g = Self {
            t_min: 0.0,
            t_max,
            n,
            spacing: Spacing::Uniform,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_max.is_finite() && self.t_max > 0.0) {
            return Err(invalid("grid", format!("t_max must be > 0, got {}", self.t_max)));
        }
        if !(self.t_min >= 0.0 && self.t_min < self.t_max) {
            return Err(invalid("grid", format!("need 0 <= t_min < t_max, got {}", self.t_min)));
        }
        if self.n < 2 {
            return Err(invalid("grid", format!("need at least 2 points, got {}", self.n)));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        let last = (self.n - 1) as f64;
        match self.spacing {
            Spacing::Uniform => (0..self.n)
                .map(|k| {
                    if k + 1 == self.n {
                        self.t_max
                    } else {
                        self.t_min + (self.t_max - self.t_min) * k as f64 / last
                    }
                })
                .collect(),
            Spacing::Log => {
                let lo = if self.t_min > 0.0 { self.t_min } else { self.t_max * 1e-3 };
                let ratio = (self.t_max / lo).ln();
                (0..self.n).map(|k| lo * (ratio * k as f64 / last).exp()).collect()
            }
        }
    }
}

impl std::str::FromStr for GridSpec {
    type Err = DecayError;

    /// `<t_min>:<t_max>:<n>[:log]`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let bad = || invalid("grid", format!("expected <t_min>:<t_max>:<n>[:log], got `{s}`"));
        if !(3..=4).contains(&parts.len()) {
            return Err(bad());
        }
        let t_min: f64 = parts[0].trim().parse().map_err(|_| bad())?;
        let t_max: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let n: usize = parts[2].trim().parse().map_err(|_| bad())?;
        let spacing = match parts.get(3).map(|p| p.trim()) {
            None | Some("uniform") => Spacing::Uniform,
            Some("log") => Spacing::Log,
            Some(_) => return Err(bad()),
        };
        let g = Self {
            t_min,
            t_max,
            n,
            spacing,
        };
        g.validate()?;
        Ok(g)
    }
}

impl std::fmt::Display for GridSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut a = ryu::Buffer::new();
        let mut b = ryu::Buffer::new();
        write!(f, "{}:{}:{}", a.format(self.t_min), b.format(self.t_max), self.n)?;
        if self.spacing == Spacing::Log {
            f.write_str(":log")?;
        }
        Ok(())
    }
}

/// Exact joint decay-time density of one channel under one prescription.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDensity {
    pub approach: ApproachKind,
    pub channel: Channel,
    pub state: EntangledStateSpec,
    pub params: KaonParams,
    pub options: DensityOptions,
    /// Unnormalized density (efficiency applied).
    pub carrier: BiExpSum,
    pub norm_constant: f64,
    pub negativity: Negativity,
}

impl JointDensity {
    /// Normalized density.
    pub fn eval(&self, t_l: f64, t_r: f64) -> f64 {
        self.norm_constant * self.carrier.eval_re(t_l, t_r)
    }

    pub fn eval_unnormalized(&self, t_l: f64, t_r: f64) -> f64 {
        self.carrier.eval_re(t_l, t_r)
    }

    /// Normalized probability mass of this channel over the whole quadrant.
    pub fn channel_mass(&self) -> Result<f64> {
        Ok(self.norm_constant * self.carrier.integral()?.re)
    }

    /// Normalized probability of the rectangle `[l0,l1] × [r0,r1]`.
    pub fn rect_probability(&self, l0: f64, l1: f64, r0: f64, r1: f64) -> Result<f64> {
        Ok(self.norm_constant * self.carrier.rect_integral(l0, l1, r0, r1)?.re)
    }

    /// Same carrier rescaled so this channel alone integrates to one.
    pub fn shape_normalized(&self) -> Result<JointDensity> {
        let mass = self.carrier.integral()?.re;
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(DecayError::NotNormalizable { mass });
        }
        Ok(JointDensity {
            norm_constant: 1.0 / mass,
            options: DensityOptions {
                policy: NormalizationPolicy::PerChannel,
                ..self.options
            },
            ..self.clone()
        })
    }

    /// Whether the carrier is identically zero.
    pub fn is_zero(&self) -> bool {
        self.carrier.is_empty()
    }
}

/// Survival probability of the pair projected on `channel`,
/// `|ψ_ij(t_l,t_r)|² / ‖ψ(0,0)‖²`.
pub fn joint_survival(
    state: &EntangledStateSpec,
    params: &KaonParams,
    channel: Channel,
    t_l: f64,
    t_r: f64,
) -> Result<f64> {
    check_times(t_l, t_r)?;
    let psi = survival_amplitude_matrix(state, params)?;
    Ok(psi.get(channel).eval(t_l, t_r).norm_sqr() / state.norm_sq(params)?)
}

/// Survival probability summed over the four channels.
pub fn total_survival(state: &EntangledStateSpec, params: &KaonParams, t_l: f64, t_r: f64) -> Result<f64> {
    check_times(t_l, t_r)?;
    let psi = survival_amplitude_matrix(state, params)?;
    let total: f64 = Channel::ALL.iter().map(|c| psi.get(*c).eval(t_l, t_r).norm_sqr()).sum();
    Ok(total / state.norm_sq(params)?)
}

fn check_times(t_l: f64, t_r: f64) -> Result<()> {
    if !(t_l >= 0.0) {
        return Err(DecayError::NegativeTime(t_l));
    }
    if !(t_r >= 0.0) {
        return Err(DecayError::NegativeTime(t_r));
    }
    Ok(())
}

/// Unnormalized carriers for all four channels, efficiencies applied.
fn carriers(
    approach: ApproachKind,
    state: &EntangledStateSpec,
    params: &KaonParams,
    options: &DensityOptions,
) -> Result<[BiExpSum; 4]> {
    let psi = match approach {
        ApproachKind::TimeOperator => time_operator_amplitude_matrix(state, params)?,
        _ => survival_amplitude_matrix(state, params)?,
    };
    let build = |channel: Channel| {
        let p = psi.get(channel).modsq();
        let carrier = match approach {
            ApproachKind::StandardNew => p.mixed_derivative(),
            ApproachKind::Hybrid => {
                p.scale_re(params.cp_rate(channel.left) * params.cp_rate(channel.right))
            }
            ApproachKind::TimeOperator => p,
            ApproachKind::StandardOld => p.sum_derivative(),
        };
        carrier.scale_re(options.efficiency_of(channel)).merged()
    };
    Ok(Channel::ALL.map(build))
}

fn global_constant(
    approach: ApproachKind,
    state: &EntangledStateSpec,
    params: &KaonParams,
    options: &DensityOptions,
    all: &[BiExpSum; 4],
) -> Result<f64> {
    let mass = match approach {
        // ∫∫ ∂²P = P(0,0): the calibration constant is the initial survival.
        ApproachKind::StandardNew => {
            let comps = state.cp_components(params)?;
            Channel::ALL
                .iter()
                .map(|c| {
                    options.efficiency_of(*c) * comps[c.left.index()][c.right.index()].norm_sqr()
                })
                .sum::<f64>()
        }
        _ => {
            let mut total = 0.0;
            for c in all {
                total += c.integral()?.re;
            }
            total
        }
    };
    if mass > 0.0 && mass.is_finite() {
        Ok(1.0 / mass)
    } else {
        Err(DecayError::NotNormalizable { mass })
    }
}

/// Scan `carrier` on a square grid and report its most negative value.
pub fn scan_negativity(carrier: &BiExpSum, t_max: f64, n: usize) -> Negativity {
    let step = t_max / (n - 1) as f64;
    let mut min = (f64::INFINITY, 0.0, 0.0);
    let mut peak = 0.0f64;
    for a in 0..n {
        let t_l = a as f64 * step;
        for b in 0..n {
            let t_r = b as f64 * step;
            let v = carrier.eval_re(t_l, t_r);
            peak = peak.max(v.abs());
            if v < min.0 {
                min = (v, t_l, t_r);
            }
        }
    }
    if min.0 < -NEGATIVITY_RELATIVE * peak {
        Negativity::Present {
            min_value: min.0,
            t_l: min.1,
            t_r: min.2,
        }
    } else {
        Negativity::None
    }
}

/// Exact joint density for one channel with the default options.
pub fn joint_density(
    approach: ApproachKind,
    state: &EntangledStateSpec,
    params: &KaonParams,
    channel: Channel,
) -> Result<JointDensity> {
    joint_density_with(approach, state, params, channel, &DensityOptions::default())
}

pub fn joint_density_with(
    approach: ApproachKind,
    state: &EntangledStateSpec,
    params: &KaonParams,
    channel: Channel,
    options: &DensityOptions,
) -> Result<JointDensity> {
    if options.efficiency.iter().flatten().any(|e| !(e.is_finite() && *e >= 0.0)) {
        return Err(invalid("efficiency", "multipliers must be finite and >= 0"));
    }
    let all = carriers(approach, state, params, options)?;
    let index = Channel::ALL.iter().position(|c| *c == channel).expect("channel is one of four");
    let carrier = all[index].clone();
    let norm_constant = match options.policy {
        NormalizationPolicy::Global => global_constant(approach, state, params, options, &all)?,
        NormalizationPolicy::PerChannel => {
            let mass = carrier.integral()?.re;
            if mass > 0.0 && mass.is_finite() {
                1.0 / mass
            } else {
                return Err(DecayError::NotNormalizable { mass });
            }
        }
    };
    let negativity = scan_negativity(&carrier, NEGATIVITY_SCAN_T_MAX, NEGATIVITY_SCAN_POINTS);
    Ok(JointDensity {
        approach,
        channel,
        state: *state,
        params: *params,
        options: *options,
        carrier,
        norm_constant,
        negativity,
    })
}

/// All four channel densities of one prescription.
pub fn joint_densities(
    approach: ApproachKind,
    state: &EntangledStateSpec,
    params: &KaonParams,
    options: &DensityOptions,
) -> Result<Vec<JointDensity>> {
    Channel::ALL
        .iter()
        .map(|c| joint_density_with(approach, state, params, *c, options))
        .collect()
}

/// Values below this fraction of the grid peak are treated as zero when
/// comparing shapes.
pub const COMPARISON_FLOOR: f64 = 1e-12;
/// Ratio spread below which two densities are called proportional.
pub const PROPORTIONALITY_TOL: f64 = 1e-10;

/// Shape comparison of two prescriptions on a grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairVerdict {
    pub first: ApproachKind,
    pub second: ApproachKind,
    /// `max |p − q| / max(|p|, |q|)` after scaling each to unit grid L1 norm.
    pub max_relative_deviation: f64,
    /// `(max ratio − min ratio)/|mean ratio|` over points above the floor.
    pub ratio_spread: f64,
    pub proportional: bool,
}

impl PairVerdict {
    pub fn label(&self) -> &'static str {
        if self.proportional {
            "proportional"
        } else {
            "not proportional"
        }
    }
}

/// Normalized densities of all four prescriptions on a grid with pairwise
/// proportionality verdicts.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApproachComparison {
    pub channel: Channel,
    pub points: Vec<f64>,
    /// `values[approach][a * n + b]` at `(points[a], points[b])`.
    pub values: Vec<(ApproachKind, Vec<f64>)>,
    pub pairs: Vec<PairVerdict>,
}

impl ApproachComparison {
    pub fn verdict(&self, a: ApproachKind, b: ApproachKind) -> Option<&PairVerdict> {
        self.pairs
            .iter()
            .find(|p| (p.first == a && p.second == b) || (p.first == b && p.second == a))
    }
}

/// Compare two sampled shapes; both are rescaled to unit L1 norm on the grid.
pub fn compare_shapes(first: ApproachKind, p: &[f64], second: ApproachKind, q: &[f64]) -> PairVerdict {
    let l1 = |v: &[f64]| v.iter().map(|x| x.abs()).sum::<f64>();
    let (lp, lq) = (l1(p), l1(q));
    if lp == 0.0 || lq == 0.0 {
        let both = lp == 0.0 && lq == 0.0;
        return PairVerdict {
            first,
            second,
            max_relative_deviation: if both { 0.0 } else { 1.0 },
            ratio_spread: if both { 0.0 } else { f64::INFINITY },
            proportional: both,
        };
    }
    let peak = p
        .iter()
        .map(|x| x.abs() / lp)
        .chain(q.iter().map(|x| x.abs() / lq))
        .fold(0.0, f64::max);
    let floor = COMPARISON_FLOOR * peak;
    let mut max_dev = 0.0f64;
    let (mut rmin, mut rmax, mut rsum, mut count) = (f64::INFINITY, f64::NEG_INFINITY, 0.0, 0usize);
    let mut one_sided = false;
    for (x, y) in p.iter().zip(q) {
        let (x, y) = (x / lp, y / lq);
        let big = x.abs().max(y.abs());
        if big <= floor {
            continue;
        }
        max_dev = max_dev.max((x - y).abs() / big);
        if x.abs() <= floor || y.abs() <= floor {
            one_sided = true;
            continue;
        }
        let r = x / y;
        rmin = rmin.min(r);
        rmax = rmax.max(r);
        rsum += r;
        count += 1;
    }
    let spread = if one_sided {
        f64::INFINITY
    } else if count == 0 {
        0.0
    } else {
        (rmax - rmin) / (rsum / count as f64).abs()
    };
    PairVerdict {
        first,
        second,
        max_relative_deviation: max_dev,
        ratio_spread: spread,
        proportional: spread <= PROPORTIONALITY_TOL,
    }
}

/// Evaluate every prescription on `grid × grid` and compare them pairwise.
pub fn approach_comparison(
    state: &EntangledStateSpec,
    params: &KaonParams,
    channel: Channel,
    grid: &GridSpec,
    options: &DensityOptions,
) -> Result<ApproachComparison> {
    grid.validate()?;
    let points = grid.points();
    let mut values = Vec::with_capacity(4);
    for approach in ApproachKind::ALL {
        let d = joint_density_with(approach, state, params, channel, options)?;
        let v: Vec<f64> = points
            .iter()
            .flat_map(|&tl| points.iter().map(move |&tr| (tl, tr)))
            .map(|(tl, tr)| d.eval(tl, tr))
            .collect();
        values.push((approach, v));
    }
    let mut pairs = Vec::new();
    for a in 0..values.len() {
        for b in a + 1..values.len() {
            pairs.push(compare_shapes(values[a].0, &values[a].1, values[b].0, &values[b].1));
        }
    }
    Ok(ApproachComparison {
        channel,
        points,
        values,
        pairs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::CpSector;
    use num_complex::Complex64;

    const C11: Channel = Channel::new(CpSector::One, CpSector::One);
    const C12: Channel = Channel::new(CpSector::One, CpSector::Two);

    #[test]
    fn singlet_survival_values() {
        let p = KaonParams::default().with_epsilon(Complex64::new(0.0, 0.0));
        let s = EntangledStateSpec::singlet();
        assert!((joint_survival(&s, &p, C12, 0.0, 0.0).unwrap() - 0.5).abs() < 1e-15);
        let d = KaonParams::default();
        assert!((joint_survival(&s, &d, C12, 0.0, 0.0).unwrap() - 0.5).abs() < 1e-5);
        for t in [0.0, 0.3, 2.0, 7.0] {
            assert!(joint_survival(&s, &d, C11, t, t).unwrap() < 1e-30);
        }
        assert!((total_survival(&s, &d, 0.0, 0.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(joint_survival(&s, &d, C11, -1.0, 0.0).is_err());
    }

    #[test]
    fn total_survival_monotone() {
        let d = KaonParams::default();
        for state in [EntangledStateSpec::singlet(), EntangledStateSpec::Beta(0.7)] {
            let mut prev = f64::INFINITY;
            for k in 0..40 {
                let t = k as f64 * 0.25;
                let v = total_survival(&state, &d, t, 0.5).unwrap();
                assert!(v <= prev + 1e-15);
                prev = v;
                let w = total_survival(&state, &d, 0.5, t).unwrap();
                assert!(w <= total_survival(&state, &d, 0.5, 0.0).unwrap() + 1e-15);
            }
        }
    }

    #[test]
    fn hybrid_singlet_diagonal_vanishes() {
        let d = joint_density(ApproachKind::Hybrid, &EntangledStateSpec::singlet(), &KaonParams::default(), C11)
            .unwrap();
        for t in [0.5, 1.0, 5.0] {
            assert!(d.eval(t, t).abs() < 1e-12);
        }
        assert!(!d.negativity.is_present());
    }

    #[test]
    fn standard_new_singlet_origin_value() {
        let p = KaonParams::default();
        let d = joint_density(ApproachKind::StandardNew, &EntangledStateSpec::singlet(), &p, C11).unwrap();
        let eps2 = p.epsilon.norm_sqr();
        let g = p.gamma_bar();
        let exact = eps2 * (p.gamma_s * p.gamma_l - g * g - p.delta_m * p.delta_m);
        let v = d.eval_unnormalized(0.0, 0.0);
        assert!((v - exact).abs() / exact.abs() < 1e-10);
        assert!((v + 2.572_008_586_423_146e-6).abs() < 1e-15);
        assert!(d.negativity.is_present());
    }

    #[test]
    fn alpha_states_vanish_in_same_sector_without_cp_violation() {
        let p = KaonParams::default().with_epsilon(Complex64::new(0.0, 0.0));
        for alpha in [0.0, 0.9, 2.0] {
            for approach in ApproachKind::ALL {
                let d = joint_density_helper(approach, alpha, &p);
                assert!(d.is_zero());
                assert_eq!(d.eval(0.3, 1.1), 0.0);
            }
        }
    }

    fn joint_density_helper(approach: ApproachKind, alpha: f64, p: &KaonParams) -> JointDensity {
        joint_density(approach, &EntangledStateSpec::Alpha(alpha), p, C11).unwrap()
    }

    #[test]
    fn per_channel_policy_rejects_empty_channel() {
        let p = KaonParams::default().with_epsilon(Complex64::new(0.0, 0.0));
        let r = joint_density_with(
            ApproachKind::Hybrid,
            &EntangledStateSpec::singlet(),
            &p,
            C11,
            &DensityOptions::per_channel(),
        );
        assert!(matches!(r, Err(DecayError::NotNormalizable { .. })));
    }

    #[test]
    fn global_policy_sums_to_one() {
        let p = KaonParams::default();
        for approach in ApproachKind::ALL {
            let total: f64 = joint_densities(approach, &EntangledStateSpec::Beta(0.4), &p, &DensityOptions::default())
                .unwrap()
                .iter()
                .map(|d| d.channel_mass().unwrap())
                .sum();
            assert!((total - 1.0).abs() < 1e-12, "{approach}: {total}");
        }
    }

    #[test]
    fn efficiency_scales_channel() {
        let p = KaonParams::default();
        let s = EntangledStateSpec::singlet();
        let mut opts = DensityOptions::default();
        opts.efficiency[0][1] = 0.5;
        let base = joint_density(ApproachKind::Hybrid, &s, &p, C12).unwrap();
        let eff = joint_density_with(ApproachKind::Hybrid, &s, &p, C12, &opts).unwrap();
        let ratio = eff.eval_unnormalized(0.4, 0.9) / base.eval_unnormalized(0.4, 0.9);
        assert!((ratio - 0.5).abs() < 1e-15);
        opts.efficiency[1][1] = -1.0;
        assert!(joint_density_with(ApproachKind::Hybrid, &s, &p, C12, &opts).is_err());
    }

    #[test]
    fn grid_parsing_and_points() {
        let g: GridSpec = "0:10:5".parse().unwrap();
        assert_eq!(g.points(), vec![0.0, 2.5, 5.0, 7.5, 10.0]);
        let l: GridSpec = "0:10:3:log".parse().unwrap();
        let pts = l.points();
        assert!((pts[0] - 0.01).abs() < 1e-15 && (pts[2] - 10.0).abs() < 1e-12);
        assert!("0:10:1".parse::<GridSpec>().is_err());
        assert!("5:1:4".parse::<GridSpec>().is_err());
        assert!("0:10".parse::<GridSpec>().is_err());
        assert_eq!(g.to_string().parse::<GridSpec>().unwrap(), g);
    }

    #[test]
    fn shape_comparison_edge_cases() {
        let zero = vec![0.0; 4];
        let v = compare_shapes(ApproachKind::Hybrid, &zero, ApproachKind::TimeOperator, &zero);
        assert!(v.proportional);
        let w = compare_shapes(ApproachKind::Hybrid, &zero, ApproachKind::TimeOperator, &[1.0, 2.0, 3.0, 4.0]);
        assert!(!w.proportional);
        let x = compare_shapes(ApproachKind::Hybrid, &[1.0, 2.0], ApproachKind::TimeOperator, &[3.0, 6.0]);
        assert!(x.proportional && x.max_relative_deviation < 1e-15);
        let y = compare_shapes(ApproachKind::Hybrid, &[1.0, 2.0], ApproachKind::TimeOperator, &[2.0, 2.0]);
        assert!(!y.proportional);
    }
}
