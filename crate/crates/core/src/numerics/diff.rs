//! Finite-difference derivatives of two-argument functions on `[0, ∞)²`.

/// Default step in units of the short lifetime.
pub const DEFAULT_STEP: f64 = 1e-4;

/// Offsets and weights of an O(h²) first-derivative stencil at `t`.
///
/// Central when `t ≥ h`; otherwise the forward three-point rule, so no
/// evaluation point falls below zero.
fn stencil(t: f64, h: f64) -> [(f64, f64); 3] {
    if t >= h {
        [(t - h, -0.5 / h), (t + h, 0.5 / h), (t, 0.0)]
    } else {
        [(t, -1.5 / h), (t + h, 2.0 / h), (t + 2.0 * h, -0.5 / h)]
    }
}

/// `∂²P/∂t_l∂t_r` by the tensor product of first-derivative stencils.
///
/// Away from the axes this is the four-point rule
/// `[P(+,+) − P(+,−) − P(−,+) + P(−,−)] / 4h²`.
pub fn finite_diff_mixed<P>(p: P, t_l: f64, t_r: f64, h: f64) -> f64
where
    P: Fn(f64, f64) -> f64,
{
    assert!(h > 0.0, "step must be positive");
    let sl = stencil(t_l, h);
    let sr = stencil(t_r, h);
    let mut acc = 0.0;
    for (xl, wl) in sl {
        if wl == 0.0 {
            continue;
        }
        for (xr, wr) in sr {
            if wr == 0.0 {
                continue;
            }
            acc += wl * wr * p(xl, xr);
        }
    }
    acc
}

/// `∂P/∂t_l + ∂P/∂t_r`.
pub fn finite_diff_gradient_sum<P>(p: P, t_l: f64, t_r: f64, h: f64) -> f64
where
    P: Fn(f64, f64) -> f64,
{
    assert!(h > 0.0, "step must be positive");
    let dl: f64 = stencil(t_l, h).iter().map(|(x, w)| if *w == 0.0 { 0.0 } else { w * p(*x, t_r) }).sum();
    let dr: f64 = stencil(t_r, h).iter().map(|(x, w)| if *w == 0.0 { 0.0 } else { w * p(t_l, *x) }).sum();
    dl + dr
}

/// One Richardson step on [`finite_diff_mixed`]: `D(h/2) + (D(h/2) − D(h))/3`.
pub fn richardson_mixed<P>(p: P, t_l: f64, t_r: f64, h: f64) -> f64
where
    P: Fn(f64, f64) -> f64,
{
    let coarse = finite_diff_mixed(&p, t_l, t_r, h);
    let fine = finite_diff_mixed(&p, t_l, t_r, 0.5 * h);
    fine + (fine - coarse) / 3.0
}

/// Estimate of a derivative together with its extrapolation error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extrapolated {
    pub value: f64,
    pub error: f64,
}

/// Ridders' polynomial extrapolation of a difference quotient `d(h)` to
/// `h → 0`, starting at `h0` and shrinking by 1.4 per level.
fn ridders<D: Fn(f64) -> f64>(d: D, h0: f64) -> Extrapolated {
    const SHRINK: f64 = 1.4;
    const LEVELS: usize = 10;
    const SAFE: f64 = 2.0;
    let c2 = SHRINK * SHRINK;
    let mut table = [[0.0f64; LEVELS]; LEVELS];
    let mut h = h0;
    table[0][0] = d(h);
    let mut best = Extrapolated {
        value: table[0][0],
        error: f64::INFINITY,
    };
    for i in 1..LEVELS {
        h /= SHRINK;
        table[0][i] = d(h);
        let mut fac = c2;
        for j in 1..=i {
            table[j][i] = (table[j - 1][i] * fac - table[j - 1][i - 1]) / (fac - 1.0);
            fac *= c2;
            let err = (table[j][i] - table[j - 1][i]).abs().max((table[j][i] - table[j - 1][i - 1]).abs());
            if err <= best.error {
                best = Extrapolated {
                    value: table[j][i],
                    error: err,
                };
            }
        }
        if (table[i][i] - table[i - 1][i - 1]).abs() >= SAFE * best.error {
            break;
        }
    }
    best
}

/// [`finite_diff_mixed`] extrapolated to zero step.
pub fn ridders_mixed<P>(p: P, t_l: f64, t_r: f64, h0: f64) -> Extrapolated
where
    P: Fn(f64, f64) -> f64,
{
    ridders(|h| finite_diff_mixed(&p, t_l, t_r, h), h0)
}

/// [`finite_diff_gradient_sum`] extrapolated to zero step.
pub fn ridders_gradient_sum<P>(p: P, t_l: f64, t_r: f64, h0: f64) -> Extrapolated
where
    P: Fn(f64, f64) -> f64,
{
    ridders(|h| finite_diff_gradient_sum(&p, t_l, t_r, h), h0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_exponential() {
        let v = finite_diff_mixed(|a, b| (-a - b).exp(), 0.5, 0.5, 1e-4);
        assert!((v - (-1.0f64).exp()).abs() < 1e-8);
    }

    #[test]
    fn bilinear_is_exact() {
        let v = finite_diff_mixed(|a, b| a * b, 1.0, 1.0, 1e-3);
        assert!((v - 1.0).abs() < 1e-9);
    }

    #[test]
    fn near_axis_stays_inside() {
        let v = finite_diff_mixed(
            |a, b| {
                assert!(a >= 0.0 && b >= 0.0);
                (-2.0 * a - b).exp()
            },
            0.0,
            0.0,
            1e-4,
        );
        assert!((v - 2.0).abs() < 1e-6);
    }

    #[test]
    fn second_order_convergence() {
        let f = |a: f64, b: f64| (-0.7 * a).exp() * (1.3 * b).cos();
        let exact = 0.7 * 1.3 * (-0.7f64 * 0.4).exp() * (1.3f64 * 0.9).sin();
        let e1 = (finite_diff_mixed(f, 0.4, 0.9, 1e-2) - exact).abs();
        let e2 = (finite_diff_mixed(f, 0.4, 0.9, 5e-3) - exact).abs();
        let ratio = e1 / e2;
        assert!((3.5..4.5).contains(&ratio), "ratio {ratio}");
        let r = richardson_mixed(f, 0.4, 0.9, 1e-2);
        assert!((r - exact).abs() < e2 / 10.0);
    }

    #[test]
    fn ridders_resolves_small_derivative_of_large_function() {
        let g = 1.7e-3;
        let f = |a: f64, b: f64| 0.5 * (-g * (a + b)).exp() + 1e-6 * (-a - b).exp();
        let exact = 0.5 * g * g * (-g * 5.0f64).exp() + 1e-6 * (-5.0f64).exp();
        let plain = finite_diff_mixed(f, 2.0, 3.0, 1e-4);
        let r = ridders_mixed(f, 2.0, 3.0, 0.2);
        assert!((plain - exact).abs() / exact > 1e-5);
        assert!((r.value - exact).abs() / exact < 1e-8, "{r:?}");
        assert!(r.error < 1e-12);
        let gsum = ridders_gradient_sum(f, 2.0, 3.0, 0.2);
        let exact_sum = -2.0 * (0.5 * g * (-g * 5.0f64).exp() + 1e-6 * (-5.0f64).exp());
        assert!((gsum.value - exact_sum).abs() / exact_sum.abs() < 1e-10);
    }

    #[test]
    fn gradient_sum() {
        let v = finite_diff_gradient_sum(|a, b| (-a - 3.0 * b).exp(), 1.0, 0.0, 1e-4);
        assert!((v + 4.0 * (-1.0f64).exp()).abs() < 1e-7);
    }
}
