//! Entropy–flux pairs.
//!
//! A Lax pair `(f, q)` has convex `f` and `q' = f' J'`. The Kruzhkov family
//! `f = |u - k|`, `q = sgn(u - k)(J(u) - J(k))` is the non-smooth workhorse;
//! boundary pairs additionally vanish to second order on the diagonal
//! `u = k` and express admissible boundary traces. The regularized family
//! interpolates between the two: it is a genuine Lax pair for every
//! smoothing width and converges uniformly to the Kruzhkov pair.

use crate::model::flux::Flux;
use crate::numerics::adaptive_simpson;

/// `sgn(u - k) [J(u) - J(k)]`, the Kruzhkov entropy flux. Zero when `u = k`.
pub fn kruzhkov_flux(flux: &Flux, u: f64, k: f64) -> f64 {
    if u == k {
        return 0.0;
    }
    (u - k).signum() * (flux.j(u) - flux.j(k))
}

/// Smoothing ramp for the regularized Kruzhkov entropy: the even quartic
/// Hermite interpolant on `[0, 2]` with `g(0) = g'(0) = 0`, `g(2) = g'(2) = 1`
/// and `g''(v) = 3v(2 - v)/4 ≥ 0`, so the glued profile is C² and convex.
pub fn kruzhkov_ramp(v: f64) -> f64 {
    let a = v.abs();
    if a >= 2.0 {
        return a - 1.0;
    }
    a * a * a * (4.0 - a) / 16.0
}

/// Derivative of [`kruzhkov_ramp`].
pub fn kruzhkov_ramp_deriv(v: f64) -> f64 {
    let a = v.abs();
    if a >= 2.0 {
        return v.signum();
    }
    v.signum() * a * a * (3.0 - a) / 4.0
}

#[derive(Debug, Clone, PartialEq)]
pub enum PairKind {
    /// `f = |u - k|`.
    Kruzhkov { k: f64 },
    /// `f = u`, `q = J` (degenerate convex member closing the hull).
    Linear,
    /// `f = (u - k)²`, the simplest smooth boundary pair.
    Quadratic { k: f64 },
    /// Smoothed Kruzhkov pair `F_ε(·, k)`; a boundary pair for every `ε > 0`.
    RegularizedBoundary { k: f64, eps: f64 },
    /// `f = 1_{u ≤ δ} |u - δ|`, one-sided discriminating pair.
    OneSidedMinus { delta: f64 },
    /// `f = 1_{u ≥ δ} |u - δ|`.
    OneSidedPlus { delta: f64 },
}

/// An entropy–flux pair bound to a flux.
#[derive(Debug, Clone)]
pub struct EntropyPair {
    pub kind: PairKind,
    flux: Flux,
}

impl EntropyPair {
    pub fn kruzhkov(flux: &Flux, k: f64) -> Self {
        Self { kind: PairKind::Kruzhkov { k }, flux: flux.clone() }
    }

    pub fn linear(flux: &Flux) -> Self {
        Self { kind: PairKind::Linear, flux: flux.clone() }
    }

    pub fn quadratic(flux: &Flux, k: f64) -> Self {
        Self { kind: PairKind::Quadratic { k }, flux: flux.clone() }
    }

    /// Regularized boundary pair `(F_ε, Q_ε)(·, k)`.
    pub fn regularized_boundary(flux: &Flux, k: f64, eps: f64) -> Result<Self, String> {
        if !(eps > 0.0) {
            return Err(format!("smoothing width must be positive, got {eps}"));
        }
        Ok(Self { kind: PairKind::RegularizedBoundary { k, eps }, flux: flux.clone() })
    }

    pub fn one_sided_minus(flux: &Flux, delta: f64) -> Self {
        Self { kind: PairKind::OneSidedMinus { delta }, flux: flux.clone() }
    }

    pub fn one_sided_plus(flux: &Flux, delta: f64) -> Self {
        Self { kind: PairKind::OneSidedPlus { delta }, flux: flux.clone() }
    }

    pub fn flux(&self) -> &Flux {
        &self.flux
    }

    /// Entropy `f(u)`.
    pub fn f(&self, u: f64) -> f64 {
        match &self.kind {
            PairKind::Kruzhkov { k } => (u - k).abs(),
            PairKind::Linear => u,
            PairKind::Quadratic { k } => (u - k) * (u - k),
            PairKind::RegularizedBoundary { k, eps } => {
                let d = (u - k).abs();
                if d > 2.0 * eps {
                    d - eps
                } else {
                    eps * kruzhkov_ramp(d / eps)
                }
            }
            PairKind::OneSidedMinus { delta } => (delta - u).max(0.0),
            PairKind::OneSidedPlus { delta } => (u - delta).max(0.0),
        }
    }

    /// Entropy derivative `f'(u)` (a.e. for the non-smooth members).
    pub fn df(&self, u: f64) -> f64 {
        match &self.kind {
            PairKind::Kruzhkov { k } => {
                if u == *k {
                    0.0
                } else {
                    (u - k).signum()
                }
            }
            PairKind::Linear => 1.0,
            PairKind::Quadratic { k } => 2.0 * (u - k),
            PairKind::RegularizedBoundary { k, eps } => {
                let v = (u - k) / eps;
                if v.abs() > 2.0 {
                    v.signum()
                } else {
                    kruzhkov_ramp_deriv(v)
                }
            }
            PairKind::OneSidedMinus { delta } => {
                if u < *delta {
                    -1.0
                } else {
                    0.0
                }
            }
            PairKind::OneSidedPlus { delta } => {
                if u > *delta {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    /// Entropy flux `q(u)` with `q' = f' J'` and the normalization `q(k) = 0`
    /// for the pairs anchored at `k` (`q(0) = 0` for the linear member is
    /// replaced by `q = J` itself).
    pub fn q(&self, u: f64) -> f64 {
        match &self.kind {
            PairKind::Kruzhkov { k } => kruzhkov_flux(&self.flux, u, *k),
            PairKind::Linear => self.flux.j(u),
            PairKind::Quadratic { k } => {
                let (k, flux) = (*k, &self.flux);
                adaptive_simpson(&|w| 2.0 * (w - k) * flux.dj(w), k, u, 1e-11)
            }
            PairKind::RegularizedBoundary { k, eps } => {
                regularized_entropy_flux(&self.flux, *k, *eps, u)
            }
            PairKind::OneSidedMinus { delta } => {
                if u <= *delta {
                    self.flux.j(*delta) - self.flux.j(u)
                } else {
                    0.0
                }
            }
            PairKind::OneSidedPlus { delta } => {
                if u >= *delta {
                    self.flux.j(u) - self.flux.j(*delta)
                } else {
                    0.0
                }
            }
        }
    }

    /// True for the C² members (usable where the theory asks for Lax pairs).
    pub fn is_smooth(&self) -> bool {
        matches!(
            self.kind,
            PairKind::Linear | PairKind::Quadratic { .. } | PairKind::RegularizedBoundary { .. }
        )
    }

    pub fn label(&self) -> String {
        match &self.kind {
            PairKind::Kruzhkov { k } => format!("kruzhkov(k={k:.4})"),
            PairKind::Linear => "linear".to_string(),
            PairKind::Quadratic { k } => format!("quadratic(k={k:.4})"),
            PairKind::RegularizedBoundary { k, eps } => {
                format!("regularized(k={k:.4},eps={eps:.4})")
            }
            PairKind::OneSidedMinus { delta } => format!("one-sided-(d={delta:.4})"),
            PairKind::OneSidedPlus { delta } => format!("one-sided+(d={delta:.4})"),
        }
    }
}

/// `Q_ε(u, k) = ∫_k^u ∂_u F_ε(w, k) J'(w) dw`.
///
/// The integrand equals `sgn(w - k) J'(w)` outside the smoothing window, so
/// only the window itself is integrated by adaptive quadrature; the rest is a
/// flux difference in closed form.
fn regularized_entropy_flux(flux: &Flux, k: f64, eps: f64, u: f64) -> f64 {
    if u == k {
        return 0.0;
    }
    let s = (u - k).signum();
    let window_edge = k + s * (2.0 * eps).min((u - k).abs());
    let inner = adaptive_simpson(
        &|w| kruzhkov_ramp_deriv((w - k) / eps) * flux.dj(w),
        k,
        window_edge,
        1e-11,
    );
    let outer = if (u - k).abs() > 2.0 * eps {
        s * (flux.j(u) - flux.j(window_edge))
    } else {
        0.0
    };
    inner + outer
}

/// 21 evenly spaced Kruzhkov anchors across `[lo, hi]`, plus the boundary data
/// values and the flux critical points; sorted and deduplicated.
pub fn kruzhkov_anchor_grid(flux: &Flux, lo: f64, hi: f64, extra: &[f64]) -> Vec<f64> {
    let mut ks: Vec<f64> = (0..21).map(|i| lo + (hi - lo) * i as f64 / 20.0).collect();
    ks.extend_from_slice(extra);
    for c in flux.critical_points() {
        if c >= lo && c <= hi {
            ks.push(c);
        }
    }
    ks.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ks.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    ks
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn traffic() -> Flux {
        Flux::QuadraticTraffic
    }

    #[test]
    fn kruzhkov_flux_examples() {
        let f = traffic();
        // symmetric points of the parabola: J(0.8) = J(0.2) up to rounding
        assert!(kruzhkov_flux(&f, 0.8, 0.2).abs() < 1e-15);
        assert_eq!(kruzhkov_flux(&f, 0.5, 0.5), 0.0);
        // sgn(0.5)(0.24 - 0.09) = 0.15
        assert_relative_eq!(kruzhkov_flux(&f, 0.6, 0.1), 0.15, epsilon = 1e-14);
    }

    #[test]
    fn ramp_satisfies_the_four_constraints_and_is_convex() {
        assert_eq!(kruzhkov_ramp(0.0), 0.0);
        assert_eq!(kruzhkov_ramp_deriv(0.0), 0.0);
        assert_relative_eq!(kruzhkov_ramp(2.0), 1.0);
        assert_relative_eq!(kruzhkov_ramp_deriv(2.0), 1.0);
        assert_relative_eq!(kruzhkov_ramp(-2.0), 1.0);
        // numerical convexity on the glued profile, crossing both junctions
        let h = 1e-4;
        let mut prev = kruzhkov_ramp_deriv(-3.0);
        let mut v = -3.0 + h;
        while v <= 3.0 {
            let d = kruzhkov_ramp_deriv(v);
            assert!(d >= prev - 1e-12, "ramp derivative must be nondecreasing");
            prev = d;
            v += h;
        }
    }

    #[test]
    fn regularized_pair_vanishes_on_the_diagonal() {
        let flux = traffic();
        for k in [-0.5, 0.0, 0.2, 0.9] {
            for eps in [0.01, 0.05, 0.3] {
                let p = EntropyPair::regularized_boundary(&flux, k, eps).unwrap();
                assert_eq!(p.f(k), 0.0);
                assert_eq!(p.df(k), 0.0);
                assert_eq!(p.q(k), 0.0);
            }
        }
    }

    #[test]
    fn regularized_pair_matches_shifted_absolute_value_outside_window() {
        let flux = traffic();
        let eps = 0.05;
        let k = 0.2;
        let p = EntropyPair::regularized_boundary(&flux, k, eps).unwrap();
        // |u - k| = 3 eps lies outside the window: F = 3 eps - eps = 2 eps
        assert_relative_eq!(p.f(k + 3.0 * eps), 2.0 * eps, epsilon = 1e-15);
        assert_relative_eq!(p.f(k - 3.0 * eps), 2.0 * eps, epsilon = 1e-15);
    }

    #[test]
    fn regularized_pair_approximates_kruzhkov_uniformly() {
        let flux = traffic();
        let k = 0.3;
        for eps in [0.1, 0.05, 0.025] {
            let p = EntropyPair::regularized_boundary(&flux, k, eps).unwrap();
            for i in 0..=400 {
                let u = -2.0 + 4.0 * i as f64 / 400.0;
                let gap = (p.f(u) - (u - k).abs()).abs();
                assert!(gap <= 2.0 * eps + 1e-14, "gap {gap} at u={u}, eps={eps}");
            }
        }
    }

    #[test]
    fn regularized_flux_matches_independent_trapezoid_oracle() {
        // fixed-step trapezoid, deliberately a different code path from the
        // adaptive quadrature inside the pair
        let flux = traffic();
        let (k, eps, u) = (0.2, 0.05, 0.9);
        let p = EntropyPair::regularized_boundary(&flux, k, eps).unwrap();
        let n = 1 << 17;
        let h = (u - k) / n as f64;
        let mut acc = 0.0;
        for i in 0..n {
            let w0 = k + i as f64 * h;
            let w1 = w0 + h;
            acc += 0.5 * h * (p.df(w0) * flux.dj(w0) + p.df(w1) * flux.dj(w1));
        }
        assert!((p.q(u) - acc).abs() < 1e-6, "{} vs {}", p.q(u), acc);
    }

    #[test]
    fn flux_compatibility_quadrature_identity() {
        // q(b) - q(a) = ∫_a^b f' J' within 1e-8 on [-2, 2], for every kind
        let flux = traffic();
        let pairs = vec![
            EntropyPair::kruzhkov(&flux, 0.3),
            EntropyPair::linear(&flux),
            EntropyPair::quadratic(&flux, 0.4),
            EntropyPair::regularized_boundary(&flux, 0.3, 0.05).unwrap(),
            EntropyPair::one_sided_minus(&flux, 0.25),
            EntropyPair::one_sided_plus(&flux, 0.25),
        ];
        for p in &pairs {
            for (a, b) in [(-2.0, 2.0), (-1.3, 0.7), (0.1, 0.6)] {
                let lhs = p.q(b) - p.q(a);
                let rhs = adaptive_simpson(&|w| p.df(w) * flux.dj(w), a, b, 1e-12);
                assert!(
                    (lhs - rhs).abs() < 1e-8,
                    "{}: {lhs} vs {rhs} on [{a},{b}]",
                    p.label()
                );
            }
        }
    }

    #[test]
    fn entropy_derivative_is_nondecreasing() {
        let flux = traffic();
        let pairs = vec![
            EntropyPair::kruzhkov(&flux, 0.0),
            EntropyPair::quadratic(&flux, -0.5),
            EntropyPair::regularized_boundary(&flux, 0.0, 0.1).unwrap(),
            EntropyPair::one_sided_minus(&flux, 0.5),
            EntropyPair::one_sided_plus(&flux, 0.5),
        ];
        for p in &pairs {
            let mut prev = f64::NEG_INFINITY;
            for i in 0..=400 {
                let u = -2.0 + i as f64 / 100.0;
                let d = p.df(u);
                assert!(d >= prev - 1e-12, "{} not convex at u={u}", p.label());
                prev = d;
            }
        }
    }

    #[test]
    fn smooth_pairs_sit_above_their_tangent_envelope() {
        // any convex entropy dominates the lower envelope of its tangents,
        // which is exactly an affine function plus Kruzhkov kinks
        let flux = traffic();
        let pairs = vec![
            EntropyPair::quadratic(&flux, 0.3),
            EntropyPair::regularized_boundary(&flux, 0.1, 0.2).unwrap(),
        ];
        let nodes = [-1.5, -0.5, 0.1, 0.8, 1.7];
        for p in &pairs {
            let envelope = |u: f64| -> f64 {
                nodes
                    .iter()
                    .map(|&n| p.f(n) + p.df(n) * (u - n))
                    .fold(f64::NEG_INFINITY, f64::max)
            };
            // slope jumps of the envelope (the Kruzhkov weights) are >= 0
            let mut slopes: Vec<f64> = nodes.iter().map(|&n| p.df(n)).collect();
            slopes.sort_by(|a, b| a.partial_cmp(b).unwrap());
            assert!(slopes.windows(2).all(|w| w[1] >= w[0]));
            for i in 0..=300 {
                let u = -2.0 + 4.0 * i as f64 / 300.0;
                assert!(p.f(u) >= envelope(u) - 1e-12, "{} below envelope", p.label());
            }
        }
    }

    #[test]
    fn anchor_grid_contains_data_and_critical_points() {
        let flux = traffic();
        let ks = kruzhkov_anchor_grid(&flux, 0.2, 0.8, &[0.8, 0.2]);
        assert!(ks.iter().any(|&k| (k - 0.5).abs() < 1e-12));
        assert!(ks.iter().any(|&k| (k - 0.2).abs() < 1e-12));
        assert!(ks.iter().any(|&k| (k - 0.8).abs() < 1e-12));
        assert!(ks.len() >= 21);
        assert!(ks.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn rejects_nonpositive_smoothing() {
        assert!(EntropyPair::regularized_boundary(&traffic(), 0.2, 0.0).is_err());
        assert!(EntropyPair::regularized_boundary(&traffic(), 0.2, -1.0).is_err());
    }
}
