//! Boundary data `α(t)`, `β(t)` and the relaxation target `ρ(t, x)`.

use std::fmt;
use std::sync::Arc;

use crate::numerics::PiecewiseLinear;

/// Scalar function of time, essentially bounded.
#[derive(Debug, Clone, PartialEq)]
pub enum TimeFn {
    Constant(f64),
    Table(PiecewiseLinear),
}

impl TimeFn {
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            TimeFn::Constant(c) => *c,
            TimeFn::Table(tab) => tab.eval(t),
        }
    }

    pub fn bounds(&self) -> (f64, f64) {
        match self {
            TimeFn::Constant(c) => (*c, *c),
            TimeFn::Table(tab) => (tab.min_value(), tab.max_value()),
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, TimeFn::Constant(_))
    }
}

/// Relaxation target `ρ(t, x)`.
#[derive(Clone)]
pub enum TargetFn {
    /// `ρ = (α(t)(1-x)^γ + β(t)x^γ) / (x^γ + (1-x)^γ)`, the profile matching
    /// the canonical rate; a pointwise convex combination of the boundary
    /// data, so `ρ(t,0)=α(t)`, `ρ(t,1)=β(t)` and the data bounds are kept.
    Canonical { gamma: f64 },
    Constant(f64),
    /// Arbitrary target with declared essential bounds. Not serializable.
    Custom {
        f: Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>,
        lo: f64,
        hi: f64,
        time_dependent: bool,
    },
}

impl fmt::Debug for TargetFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TargetFn::Canonical { gamma } => write!(f, "Canonical {{ gamma: {gamma} }}"),
            TargetFn::Constant(c) => write!(f, "Constant({c})"),
            TargetFn::Custom { lo, hi, .. } => write!(f, "Custom {{ lo: {lo}, hi: {hi} }}"),
        }
    }
}

/// Boundary data triple with evaluation helpers.
#[derive(Debug, Clone)]
pub struct BoundaryData {
    pub alpha: TimeFn,
    pub beta: TimeFn,
    pub rho: TargetFn,
}

impl BoundaryData {
    pub fn alpha(&self, t: f64) -> f64 {
        self.alpha.eval(t)
    }

    pub fn beta(&self, t: f64) -> f64 {
        self.beta.eval(t)
    }

    /// Target value; the canonical form is clamped to the open interval to
    /// keep the endpoint powers finite.
    pub fn rho(&self, t: f64, x: f64) -> f64 {
        match &self.rho {
            TargetFn::Canonical { gamma } => {
                let x = x.clamp(1e-300, 1.0 - 1e-16);
                let xl = x.powf(*gamma);
                let xr = (1.0 - x).powf(*gamma);
                (self.alpha.eval(t) * xr + self.beta.eval(t) * xl) / (xl + xr)
            }
            TargetFn::Constant(c) => *c,
            TargetFn::Custom { f, .. } => f(t, x),
        }
    }

    /// Essential bounds of the target alone.
    pub fn rho_bounds(&self) -> (f64, f64) {
        match &self.rho {
            TargetFn::Canonical { .. } => {
                let (al, ah) = self.alpha.bounds();
                let (bl, bh) = self.beta.bounds();
                (al.min(bl), ah.max(bh))
            }
            TargetFn::Constant(c) => (*c, *c),
            TargetFn::Custom { lo, hi, .. } => (*lo, *hi),
        }
    }

    /// Combined essential bounds of `α`, `β`, `ρ`.
    pub fn data_bounds(&self) -> (f64, f64) {
        let (al, ah) = self.alpha.bounds();
        let (bl, bh) = self.beta.bounds();
        let (rl, rh) = self.rho_bounds();
        (al.min(bl).min(rl), ah.max(bh).max(rh))
    }

    /// True when `ρ(t, ·)` does not depend on `t`; lets solvers cache cell
    /// averages of the target.
    pub fn rho_time_independent(&self) -> bool {
        match &self.rho {
            TargetFn::Canonical { .. } => self.alpha.is_constant() && self.beta.is_constant(),
            TargetFn::Constant(_) => true,
            TargetFn::Custom { time_dependent, .. } => !time_dependent,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn canonical(alpha: f64, beta: f64, gamma: f64) -> BoundaryData {
        BoundaryData {
            alpha: TimeFn::Constant(alpha),
            beta: TimeFn::Constant(beta),
            rho: TargetFn::Canonical { gamma },
        }
    }

    #[test]
    fn canonical_target_is_symmetric_at_midpoint() {
        // ρ(1/2) = (α + β) / 2 for every exponent
        for gamma in [0.5, 1.0, 2.0, 3.5] {
            let b = canonical(0.8, 0.2, gamma);
            assert_relative_eq!(b.rho(0.0, 0.5), 0.5, epsilon = 1e-14);
        }
    }

    #[test]
    fn canonical_target_attains_data_at_boundaries() {
        // limits along dyadic x
        let b = canonical(0.8, 0.2, 2.0);
        for k in 5..40 {
            let x = 0.5f64.powi(k);
            assert!((b.rho(0.0, x) - 0.8).abs() < 4.0 * x * x / (1.0 - x).powi(2) + 1e-12);
            assert!((b.rho(0.0, 1.0 - x) - 0.2).abs() < 4.0 * x * x + 1e-12);
        }
        assert_relative_eq!(b.rho(0.0, 1e-14), 0.8, epsilon = 1e-12);
        assert_relative_eq!(b.rho(0.0, 1.0 - 1e-14), 0.2, epsilon = 1e-12);
    }

    #[test]
    fn canonical_target_stays_within_data_bounds() {
        let b = canonical(0.8, 0.2, 2.0);
        for i in 1..200 {
            let x = i as f64 / 200.0;
            let r = b.rho(0.0, x);
            assert!((0.2..=0.8).contains(&r));
        }
        assert_eq!(b.data_bounds(), (0.2, 0.8));
    }

    #[test]
    fn tabulated_alpha_is_interpolated() {
        let tab = PiecewiseLinear::new(vec![0.0, 1.0], vec![0.1, 0.3]).unwrap();
        let b = BoundaryData {
            alpha: TimeFn::Table(tab),
            beta: TimeFn::Constant(0.2),
            rho: TargetFn::Canonical { gamma: 2.0 },
        };
        assert_relative_eq!(b.alpha(0.5), 0.2);
        assert!(!b.rho_time_independent());
        assert_relative_eq!(b.rho(0.5, 1e-13), 0.2, epsilon = 1e-10);
    }
}
