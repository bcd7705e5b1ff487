//! Exact algebra on finite sums of products of complex exponentials.
//!
//! Every survival probability and decay-time density in this crate is a
//! [`BiExpSum`]
//!
//! ```text
//! f(t_l, t_r) = Σ_k c_k · exp(−z_l,k · t_l) · exp(−z_r,k · t_r)
//! ```
//!
//! so derivatives and integrals reduce to term-wise coefficient updates.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{DecayError, Result};

/// Exponent pairs closer than this are merged into one term.
pub const MERGE_TOLERANCE: f64 = 1e-12;
/// Merged coefficients below this fraction of their largest part are dropped.
pub const DROP_RELATIVE: f64 = 1e-16;

/// One term `c · exp(−z_l·t_l − z_r·t_r)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BiExpTerm {
    pub coeff: Complex64,
    pub z_l: Complex64,
    pub z_r: Complex64,
}

impl BiExpTerm {
    pub fn new(coeff: Complex64, z_l: Complex64, z_r: Complex64) -> Self {
        Self { coeff, z_l, z_r }
    }

    pub fn real(coeff: f64, z_l: f64, z_r: f64) -> Self {
        Self::new(coeff.into(), z_l.into(), z_r.into())
    }

    #[inline]
    pub fn eval(&self, t_l: f64, t_r: f64) -> Complex64 {
        self.coeff * (-(self.z_l * t_l + self.z_r * t_r)).exp()
    }

    fn is_decaying(&self) -> bool {
        self.z_l.re > 0.0 && self.z_r.re > 0.0
    }
}

/// A finite sum of bi-exponential terms.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BiExpSum {
    terms: Vec<BiExpTerm>,
}

impl BiExpSum {
    pub fn new(terms: Vec<BiExpTerm>) -> Self {
        Self { terms }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(coeff: Complex64, z_l: Complex64, z_r: Complex64) -> Self {
        Self::new(vec![BiExpTerm::new(coeff, z_l, z_r)])
    }

    pub fn terms(&self) -> &[BiExpTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn push(&mut self, term: BiExpTerm) {
        self.terms.push(term);
    }

    /// Term-sum value at `(t_l, t_r)`.
    pub fn eval(&self, t_l: f64, t_r: f64) -> Complex64 {
        self.terms.iter().map(|t| t.eval(t_l, t_r)).sum()
    }

    /// Real part of [`eval`](Self::eval), for carriers known to be real.
    pub fn eval_re(&self, t_l: f64, t_r: f64) -> f64 {
        self.eval(t_l, t_r).re
    }

    /// `Σ |c| exp(−Re z_l t_l − Re z_r t_r)`: bounds `|f|` and sets the
    /// rounding scale of [`eval`](Self::eval).
    pub fn abs_bound(&self, t_l: f64, t_r: f64) -> f64 {
        self.terms
            .iter()
            .map(|t| t.coeff.norm() * (-t.z_l.re * t_l - t.z_r.re * t_r).exp())
            .sum()
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self::new(
            self.terms
                .iter()
                .map(|t| BiExpTerm { coeff: t.coeff * factor, ..*t })
                .collect(),
        )
    }

    pub fn scale_re(&self, factor: f64) -> Self {
        self.scale(Complex64::new(factor, 0.0))
    }

    pub fn add(&self, other: &BiExpSum) -> Self {
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&other.terms);
        Self::new(terms).merged()
    }

    /// Complex conjugate function: c → c̄, z → z̄.
    pub fn conj(&self) -> Self {
        Self::new(
            self.terms
                .iter()
                .map(|t| BiExpTerm::new(t.coeff.conj(), t.z_l.conj(), t.z_r.conj()))
                .collect(),
        )
    }

    /// Pointwise product.
    pub fn mul(&self, other: &BiExpSum) -> Self {
        let mut terms = Vec::with_capacity(self.len() * other.len());
        for a in &self.terms {
            for b in &other.terms {
                terms.push(BiExpTerm::new(a.coeff * b.coeff, a.z_l + b.z_l, a.z_r + b.z_r));
            }
        }
        Self::new(terms)
    }

    /// `|f|²` as a bi-exponential sum, exponents `z + conj(z')` pairwise.
    pub fn modsq(&self) -> Self {
        self.mul(&self.conj()).merged()
    }

    /// `∂²f / ∂t_l ∂t_r`: each coefficient picks up `z_l·z_r`.
    pub fn mixed_derivative(&self) -> Self {
        Self::new(
            self.terms
                .iter()
                .map(|t| BiExpTerm { coeff: t.coeff * t.z_l * t.z_r, ..*t })
                .collect(),
        )
    }

    /// `−(∂/∂t_l + ∂/∂t_r) f`: each coefficient picks up `z_l + z_r`.
    pub fn sum_derivative(&self) -> Self {
        Self::new(
            self.terms
                .iter()
                .map(|t| BiExpTerm { coeff: t.coeff * (t.z_l + t.z_r), ..*t })
                .collect(),
        )
    }

    /// `∂f/∂t_l`.
    pub fn partial_l(&self) -> Self {
        Self::new(
            self.terms
                .iter()
                .map(|t| BiExpTerm { coeff: -t.coeff * t.z_l, ..*t })
                .collect(),
        )
    }

    /// `∂f/∂t_r`.
    pub fn partial_r(&self) -> Self {
        Self::new(
            self.terms
                .iter()
                .map(|t| BiExpTerm { coeff: -t.coeff * t.z_r, ..*t })
                .collect(),
        )
    }

    fn check_integrable(&self) -> Result<()> {
        for (index, t) in self.terms.iter().enumerate() {
            if !t.is_decaying() {
                return Err(DecayError::NotIntegrable {
                    index,
                    re_l: t.z_l.re,
                    re_r: t.z_r.re,
                });
            }
        }
        Ok(())
    }

    /// `∫₀^∞∫₀^∞ f dt_l dt_r = Σ c / (z_l·z_r)`.
    pub fn integral(&self) -> Result<Complex64> {
        self.check_integrable()?;
        Ok(self.terms.iter().map(|t| t.coeff / (t.z_l * t.z_r)).sum())
    }

    /// Integral over the rectangle `[l0, l1] × [r0, r1]`; upper bounds may be
    /// `f64::INFINITY`.
    pub fn rect_integral(&self, l0: f64, l1: f64, r0: f64, r1: f64) -> Result<Complex64> {
        if l1.is_infinite() || r1.is_infinite() {
            self.check_integrable()?;
        }
        Ok(self
            .terms
            .iter()
            .map(|t| t.coeff * exp_segment(t.z_l, l0, l1) * exp_segment(t.z_r, r0, r1))
            .sum())
    }

    /// Merge terms whose exponent pairs coincide within [`MERGE_TOLERANCE`].
    ///
    /// A merged coefficient smaller than [`DROP_RELATIVE`] times the largest
    /// contribution that went into it is cancellation residue and is dropped.
    pub fn merged(&self) -> Self {
        let mut out: Vec<(BiExpTerm, f64)> = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            match out.iter_mut().find(|(o, _)| {
                (o.z_l - t.z_l).norm() <= MERGE_TOLERANCE && (o.z_r - t.z_r).norm() <= MERGE_TOLERANCE
            }) {
                Some((o, big)) => {
                    o.coeff += t.coeff;
                    *big = big.max(t.coeff.norm());
                }
                None => out.push((*t, t.coeff.norm())),
            }
        }
        Self::new(
            out.into_iter()
                .filter(|(t, big)| t.coeff.norm() > DROP_RELATIVE * big)
                .map(|(t, _)| t)
                .collect(),
        )
    }

    /// Slowest decay rate along each axis, `(min Re z_l, min Re z_r)`.
    pub fn slowest_rates(&self) -> (f64, f64) {
        self.terms.iter().fold((f64::INFINITY, f64::INFINITY), |(l, r), t| {
            (l.min(t.z_l.re), r.min(t.z_r.re))
        })
    }
}

/// `∫_a^b exp(−z t) dt`, with `b = ∞` allowed when `Re z > 0`.
pub(crate) fn exp_segment(z: Complex64, a: f64, b: f64) -> Complex64 {
    let head = (-z * a).exp();
    if b.is_infinite() {
        return head / z;
    }
    let w = b - a;
    let zw = z * w;
    if zw.norm() < 1e-5 {
        // (1 − e^{−zw})/z via series
        head * w * (1.0 - zw / 2.0 + zw * zw / 6.0 - zw * zw * zw / 24.0)
    } else {
        head * (1.0 - (-zw).exp()) / z
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn beat() -> BiExpSum {
        // 2 e^{−t_l−t_r} cos(0.5 (t_l − t_r))
        BiExpSum::new(vec![
            BiExpTerm::new(c(1.0, 0.0), c(1.0, 0.5), c(1.0, -0.5)),
            BiExpTerm::new(c(1.0, 0.0), c(1.0, -0.5), c(1.0, 0.5)),
        ])
    }

    #[test]
    fn eval_single_term() {
        let f = BiExpSum::new(vec![BiExpTerm::real(1.0, 1.0, 1.0)]);
        assert_eq!(f.eval(0.0, 0.0), c(1.0, 0.0));
        assert!((f.eval_re(1.0, 1.0) - (-2.0f64).exp()).abs() < 1e-15);
        assert!((f.eval_re(1.0, 1.0) - 0.135335).abs() < 1e-6);
    }

    #[test]
    fn eval_conjugate_pair() {
        let v = beat().eval(2.0, 0.0);
        assert!((v.re - 2.0 * (-2.0f64).exp() * 1.0f64.cos()).abs() < 1e-15);
        assert!(v.im.abs() < 1e-16);
    }

    #[test]
    fn modsq_kills_phase() {
        let f = BiExpSum::single(c(1.0, 0.0), c(0.5, 0.25), c(0.5, 0.0));
        let m = f.modsq();
        assert_eq!(m.len(), 1);
        assert!((m.terms()[0].z_l - c(1.0, 0.0)).norm() < 1e-15);
        assert!((m.terms()[0].z_r - c(1.0, 0.0)).norm() < 1e-15);
        assert!((m.terms()[0].coeff - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn modsq_two_terms_at_most_four() {
        let f = BiExpSum::new(vec![
            BiExpTerm::new(c(1.0, 0.3), c(0.5, 1.0), c(0.2, 0.0)),
            BiExpTerm::new(c(-0.4, 0.1), c(0.7, 0.0), c(0.3, -2.0)),
        ]);
        assert!(f.mul(&f.conj()).len() <= 4);
        assert!(f.modsq().len() <= 4);
    }

    #[test]
    fn mixed_derivative_coefficients() {
        let f = BiExpSum::single(c(1.0, 0.0), c(1.0, 2.0), c(3.0, 0.0));
        let d = f.mixed_derivative();
        assert_eq!(d.terms()[0].coeff, c(3.0, 6.0));
        assert_eq!(d.terms()[0].z_l, c(1.0, 2.0));

        let g = BiExpSum::new(vec![BiExpTerm::real(1.0, 1.0, 1.0)]);
        assert!((g.mixed_derivative().eval_re(0.5, 0.5) - (-1.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn sum_derivative_coefficients() {
        let g = BiExpSum::new(vec![BiExpTerm::real(1.0, 1.0, 1.0)]);
        assert_eq!(g.sum_derivative().terms()[0].coeff, c(2.0, 0.0));

        let gamma_l = 1.7253e-3;
        let h = BiExpSum::new(vec![BiExpTerm::real(1.0, gamma_l, 1.0)]);
        assert!((h.sum_derivative().terms()[0].coeff.re - 1.0017253).abs() < 1e-15);
    }

    #[test]
    fn closed_form_integrals() {
        let g = BiExpSum::new(vec![BiExpTerm::real(1.0, 1.0, 1.0)]);
        assert!((g.integral().unwrap() - c(1.0, 0.0)).norm() < 1e-15);
        let b = beat().integral().unwrap();
        assert!((b.re - 1.6).abs() < 1e-15);
        assert!(b.im.abs() < 1e-15);
    }

    #[test]
    fn integral_rejects_non_decaying() {
        let f = BiExpSum::single(c(1.0, 0.0), c(0.0, 1.0), c(1.0, 0.0));
        assert!(matches!(f.integral(), Err(DecayError::NotIntegrable { index: 0, .. })));
    }

    #[test]
    fn rect_integral_matches_full_and_tails() {
        let f = beat();
        let full = f.integral().unwrap();
        let inf = f64::INFINITY;
        let pieces = f.rect_integral(0.0, 2.0, 0.0, 3.0).unwrap()
            + f.rect_integral(2.0, inf, 0.0, 3.0).unwrap()
            + f.rect_integral(0.0, inf, 3.0, inf).unwrap();
        assert!((pieces - full).norm() < 1e-14);
        // tiny widths use the series branch
        let thin = f.rect_integral(1.0, 1.0 + 1e-7, 0.0, 1e-7).unwrap();
        let expected = f.eval(1.0, 0.0) * 1e-14;
        assert!((thin - expected).norm() < 1e-20);
    }

    #[test]
    fn merge_combines_and_drops() {
        let f = BiExpSum::new(vec![
            BiExpTerm::real(1.0, 1.0, 2.0),
            BiExpTerm::real(2.0, 1.0 + 1e-14, 2.0),
            BiExpTerm::real(1e-20, 3.0, 3.0),
            BiExpTerm::real(0.5, 4.0, 4.0),
            BiExpTerm::real(-0.5 * (1.0 + 1e-17), 4.0, 4.0),
        ]);
        let m = f.merged();
        // small but genuine terms survive, cancellation residue does not
        assert_eq!(m.len(), 2);
        assert!((m.terms()[0].coeff.re - 3.0).abs() < 1e-15);
    }

    fn arb_terms() -> impl Strategy<Value = BiExpSum> {
        prop::collection::vec(
            (-2.0..2.0f64, -2.0..2.0f64, 0.05..3.0f64, -3.0..3.0f64, 0.05..3.0f64, -3.0..3.0f64),
            1..6,
        )
        .prop_map(|v| {
            BiExpSum::new(
                v.into_iter()
                    .map(|(a, b, zl, wl, zr, wr)| BiExpTerm::new(c(a, b), c(zl, wl), c(zr, wr)))
                    .collect(),
            )
        })
    }

    proptest! {
        #[test]
        fn telescoping_integral_of_mixed_derivative(f in arb_terms()) {
            let lhs = f.mixed_derivative().integral().unwrap();
            let rhs = f.eval(0.0, 0.0);
            let scale = f.terms().iter().map(|t| t.coeff.norm()).sum::<f64>();
            prop_assert!((lhs - rhs).norm() <= 1e-10 * scale.max(1e-300));
        }

        #[test]
        fn modsq_is_real(f in arb_terms(), pts in prop::collection::vec((0.0..10.0f64, 0.0..10.0f64), 100)) {
            let m = f.modsq();
            for (tl, tr) in pts {
                let v = m.eval(tl, tr);
                let direct = f.eval(tl, tr).norm_sqr();
                prop_assert!(v.im.abs() < 1e-12);
                prop_assert!((v.re - direct).abs() <= 1e-12 * (1.0 + direct));
            }
        }

        #[test]
        fn derivatives_match_analytic(f in arb_terms(), tl in 0.0..5.0f64, tr in 0.0..5.0f64) {
            // analytic: ∂²/∂t_l∂t_r of c e^{−z_l t_l − z_r t_r} = c z_l z_r e^{…}
            let analytic_mixed: Complex64 = f.terms().iter()
                .map(|t| t.coeff * t.z_l * t.z_r * (-(t.z_l * tl + t.z_r * tr)).exp())
                .sum();
            let analytic_sum: Complex64 = f.terms().iter()
                .map(|t| t.coeff * (t.z_l + t.z_r) * (-(t.z_l * tl + t.z_r * tr)).exp())
                .sum();
            let a = f.mixed_derivative().eval(tl, tr);
            let b = f.sum_derivative().eval(tl, tr);
            prop_assert!((a - analytic_mixed).norm() <= 1e-12 * (1.0 + analytic_mixed.norm()));
            prop_assert!((b - analytic_sum).norm() <= 1e-12 * (1.0 + analytic_sum.norm()));
            let grad = f.partial_l().add(&f.partial_r()).scale_re(-1.0);
            prop_assert!((grad.eval(tl, tr) - b).norm() <= 1e-12 * (1.0 + b.norm()));
        }
    }
}
