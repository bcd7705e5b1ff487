//! Adaptive Gauss–Kronrod quadrature on `[0, ∞)` and `[0, ∞)²`.
//!
//! The half line is mapped onto `(0, 1]` with `u = exp(−s·t)`, so an integrand
//! decaying like `exp(−s·t)` becomes bounded near `u = 0`. `s` should be the
//! slowest decay rate present; faster components are resolved by bisection.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{DecayError, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Maximum number of subintervals before giving up.
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-14,
            rel_tol: 1e-12,
            max_intervals: 4000,
        }
    }
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    aux: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// One 15-point Kronrod panel; `f` returns `(value, aux)` and `aux` is
/// integrated alongside with the Kronrod weights.
fn kronrod<F>(f: &mut F, a: f64, b: f64) -> Result<Panel>
where
    F: FnMut(f64) -> Result<(f64, f64)>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let (fc, ac) = f(center)?;
    let mut res_k = fc * WGK[7];
    let mut res_g = fc * WG[3];
    let mut aux = ac * WGK[7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let (f1, a1) = f(center - dx)?;
        let (f2, a2) = f(center + dx)?;
        res_k += WGK[j] * (f1 + f2);
        aux += WGK[j] * (a1 + a2);
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let value = res_k * half;
    let error = ((res_k - res_g) * half).abs();
    Ok(Panel {
        a,
        b,
        value,
        aux: aux * half,
        error,
    })
}

/// Globally adaptive bisection over `[a, b]`.
pub(crate) fn integrate_adaptive<F>(mut f: F, a: f64, b: f64, opts: &QuadOptions) -> Result<(QuadratureResult, f64)>
where
    F: FnMut(f64) -> Result<(f64, f64)>,
{
    let mut heap = BinaryHeap::new();
    let first = kronrod(&mut f, a, b)?;
    let mut evaluations = 15;
    let mut total = first.value;
    let mut total_err = first.error;
    heap.push(first);
    loop {
        let target = opts.abs_tol.max(opts.rel_tol * total.abs());
        if total_err <= target {
            break;
        }
        if heap.len() >= opts.max_intervals {
            return Err(DecayError::QuadratureNonConvergence {
                value: total,
                error_estimate: total_err,
                evaluations,
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            // interval collapsed to machine precision; accept what we have
            heap.push(worst);
            break;
        }
        let left = kronrod(&mut f, worst.a, mid)?;
        let right = kronrod(&mut f, mid, worst.b)?;
        evaluations += 30;
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    // re-sum to shed the running-update drift
    let value = heap.iter().map(|p| p.value).sum();
    let error_estimate = heap.iter().map(|p| p.error).sum::<f64>();
    let aux = heap.iter().map(|p| p.aux).sum::<f64>();
    Ok((
        QuadratureResult {
            value,
            error_estimate,
            evaluations,
        },
        aux,
    ))
}

fn check_scale(scale: f64) -> Result<()> {
    if scale.is_finite() && scale > 0.0 {
        Ok(())
    } else {
        Err(DecayError::InvalidParameter {
            field: "scale",
            reason: format!("transform rate must be > 0, got {scale}"),
        })
    }
}

/// Lower end of the `u` interval for an upper time limit.
fn u_floor(scale: f64, t_max: Option<f64>) -> f64 {
    match t_max {
        Some(t) => (-scale * t).exp(),
        None => 0.0,
    }
}

/// `∫₀^{t_max} f(t) dt` (`t_max = None` for ∞) through `u = exp(−scale·t)`.
pub fn quad_semiinf_1d_with<F>(
    mut f: F,
    scale: f64,
    t_max: Option<f64>,
    opts: &QuadOptions,
) -> Result<QuadratureResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    check_scale(scale)?;
    let (res, _) = integrate_adaptive(
        |u| {
            let t = -u.ln() / scale;
            Ok((f(t)? / (scale * u), 0.0))
        },
        u_floor(scale, t_max),
        1.0,
        opts,
    )?;
    Ok(res)
}

/// `∫₀^∞ f(t) dt` for `f` decaying at least like `exp(−scale·t)`.
pub fn quad_semiinf_1d<F>(f: F, scale: f64) -> Result<QuadratureResult>
where
    F: Fn(f64) -> f64,
{
    quad_semiinf_1d_with(|t| Ok(f(t)), scale, None, &QuadOptions::default())
}

/// Nested tensor-product analogue over `[0, t_max]²` (`None` for the quadrant).
///
/// The reported error adds the outer estimate to the integrated inner
/// estimates.
pub fn quad_semiinf_2d_with<F>(
    mut f: F,
    scales: (f64, f64),
    t_max: Option<f64>,
    opts: &QuadOptions,
) -> Result<QuadratureResult>
where
    F: FnMut(f64, f64) -> Result<f64>,
{
    let (s_l, s_r) = scales;
    check_scale(s_l)?;
    check_scale(s_r)?;
    let mut inner_evals = 0usize;
    let inner_opts = QuadOptions {
        abs_tol: opts.abs_tol * 0.1,
        rel_tol: (opts.rel_tol * 0.1).max(1e-13),
        ..*opts
    };
    let (outer, aux) = integrate_adaptive(
        |u| {
            let t_l = -u.ln() / s_l;
            let jac_l = 1.0 / (s_l * u);
            let (inner, _) = integrate_adaptive(
                |v| {
                    let t_r = -v.ln() / s_r;
                    Ok((f(t_l, t_r)? / (s_r * v), 0.0))
                },
                u_floor(s_r, t_max),
                1.0,
                &inner_opts,
            )?;
            inner_evals += inner.evaluations;
            Ok((inner.value * jac_l, inner.error_estimate * jac_l))
        },
        u_floor(s_l, t_max),
        1.0,
        opts,
    )?;
    Ok(QuadratureResult {
        value: outer.value,
        error_estimate: outer.error_estimate + aux.abs(),
        evaluations: inner_evals,
    })
}

/// `∫₀^∞∫₀^∞ f dt_l dt_r` with per-axis transform rates.
pub fn quad_semiinf_2d<F>(f: F, scales: (f64, f64)) -> Result<QuadratureResult>
where
    F: Fn(f64, f64) -> f64,
{
    quad_semiinf_2d_with(|a, b| Ok(f(a, b)), scales, None, &QuadOptions::default())
}
