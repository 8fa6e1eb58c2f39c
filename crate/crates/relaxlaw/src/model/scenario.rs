//! Complete problem statements: flux, relaxation profile, boundary data,
//! initial profile and horizon.

use std::fmt;
use std::sync::Arc;

use crate::model::boundary::{BoundaryData, TargetFn, TimeFn};
use crate::model::flux::Flux;
use crate::model::relaxation::RelaxationProfile;
use crate::numerics::{gauss3_average, PiecewiseLinear};

/// Initial datum `u₀` on `(0, 1)` with exact cell averages where the shape
/// allows them.
#[derive(Clone)]
pub enum Profile {
    Constant(f64),
    /// `left` for `x < at`, `right` for `x > at`.
    Step { left: f64, right: f64, at: f64 },
    Table(PiecewiseLinear),
    /// Arbitrary measurable profile with declared essential bounds; cell
    /// averages fall back to 3-point Gauss quadrature.
    Custom {
        f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
        lo: f64,
        hi: f64,
    },
}

impl fmt::Debug for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Profile::Constant(c) => write!(f, "Constant({c})"),
            Profile::Step { left, right, at } => {
                write!(f, "Step {{ left: {left}, right: {right}, at: {at} }}")
            }
            Profile::Table(_) => write!(f, "Table(..)"),
            Profile::Custom { lo, hi, .. } => write!(f, "Custom {{ lo: {lo}, hi: {hi} }}"),
        }
    }
}

impl Profile {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Profile::Constant(c) => *c,
            Profile::Step { left, right, at } => {
                if x < *at {
                    *left
                } else {
                    *right
                }
            }
            Profile::Table(t) => t.eval(x),
            Profile::Custom { f, .. } => f(x),
        }
    }

    /// Average over `[a, b]`; exact for constants, steps and tables.
    pub fn cell_average(&self, a: f64, b: f64) -> f64 {
        debug_assert!(a < b);
        match self {
            Profile::Constant(c) => *c,
            Profile::Step { left, right, at } => {
                if *at <= a {
                    *right
                } else if *at >= b {
                    *left
                } else {
                    (left * (at - a) + right * (b - at)) / (b - a)
                }
            }
            Profile::Table(t) => t.integral(a, b) / (b - a),
            Profile::Custom { f, .. } => gauss3_average(&|x| f(x), a, b),
        }
    }

    pub fn bounds(&self) -> (f64, f64) {
        match self {
            Profile::Constant(c) => (*c, *c),
            Profile::Step { left, right, .. } => (left.min(*right), left.max(*right)),
            Profile::Table(t) => (t.min_value(), t.max_value()),
            Profile::Custom { lo, hi, .. } => (*lo, *hi),
        }
    }
}

/// A complete problem statement.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub flux: Flux,
    pub relax: RelaxationProfile,
    pub boundary: BoundaryData,
    pub u0: Profile,
    /// Time horizon.
    pub t_end: f64,
    /// Exponent when rate and target come from the canonical family.
    pub gamma: Option<f64>,
}

impl Scenario {
    /// Canonical scenario: quadratic traffic flux, canonical rate and target
    /// for the given exponent, constant boundary densities.
    ///
    /// Both sides are integrable exactly when `gamma < 1`.
    pub fn canonical(
        gamma: f64,
        alpha: f64,
        beta: f64,
        u0: Profile,
        t_end: f64,
    ) -> Result<Self, String> {
        if !(gamma > 0.0) {
            return Err(format!("gamma must be positive, got {gamma}"));
        }
        for (name, v) in [("alpha", alpha), ("beta", beta)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(format!("{name} must lie in [0, 1], got {v}"));
            }
        }
        let (lo, hi) = u0.bounds();
        if lo < 0.0 || hi > 1.0 {
            return Err(format!(
                "initial datum must take values in [0, 1], got range [{lo}, {hi}]"
            ));
        }
        if !(t_end > 0.0) {
            return Err(format!("horizon must be positive, got {t_end}"));
        }
        Ok(Scenario {
            flux: Flux::QuadraticTraffic,
            relax: RelaxationProfile::canonical(gamma)?,
            boundary: BoundaryData {
                alpha: TimeFn::Constant(alpha),
                beta: TimeFn::Constant(beta),
                rho: TargetFn::Canonical { gamma },
            },
            u0,
            t_end,
            gamma: Some(gamma),
        })
    }

    /// Pure conservation-law scenario (`V ≡ 0`) with Riemann initial data;
    /// boundary data pinned to the outer states. Testing mode: fails the
    /// rate-divergence assumption by construction.
    pub fn riemann(flux: Flux, left: f64, right: f64, at: f64, t_end: f64) -> Self {
        Scenario {
            flux,
            relax: RelaxationProfile::Zero,
            boundary: BoundaryData {
                alpha: TimeFn::Constant(left),
                beta: TimeFn::Constant(right),
                rho: TargetFn::Constant(0.0),
            },
            u0: Profile::Step { left, right, at },
            t_end,
            gamma: None,
        }
    }

    /// `[m⁻, m⁺]`: the invariant region computed from the essential bounds of
    /// the initial datum, the boundary data and the relaxation target.
    pub fn invariant_region(&self) -> (f64, f64) {
        let (ul, uh) = self.u0.bounds();
        let (dl, dh) = self.boundary.data_bounds();
        (ul.min(dl), uh.max(dh))
    }

    /// `sup |J'|` over the invariant region: the CFL velocity scale.
    pub fn wave_speed_bound(&self) -> f64 {
        let (lo, hi) = self.invariant_region();
        self.flux.max_wave_speed_on(lo, hi)
    }

    /// `sup { |J'(u)| : |u| ≤ r }` with `r` the largest essential bound among
    /// the data; the constant weighting the boundary terms of the integrable
    /// entropy inequality.
    pub fn data_ball_lipschitz(&self) -> f64 {
        let (lo, hi) = self.invariant_region();
        self.flux.lipschitz_bound(lo.abs().max(hi.abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn canonical_rho_midpoint_and_rate() {
        let s = Scenario::canonical(2.0, 0.8, 0.2, Profile::Constant(0.5), 1.0).unwrap();
        // ρ(1/2) = (α + β)/2
        assert_relative_eq!(s.boundary.rho(0.0, 0.5), 0.5, epsilon = 1e-14);
        // V(1/2) = 4 c_2 with c_2 = 1/ζ(3)
        assert_relative_eq!(s.relax.value(0.5), 3.327_629, epsilon = 1e-5);
        assert!(!s.relax.integrable_left());
        assert_eq!(s.gamma, Some(2.0));
    }

    #[test]
    fn integrable_below_exponent_one() {
        let s = Scenario::canonical(0.5, 0.8, 0.2, Profile::Constant(0.5), 1.0).unwrap();
        assert!(s.relax.integrable_left() && s.relax.integrable_right());
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(Scenario::canonical(0.0, 0.5, 0.5, Profile::Constant(0.5), 1.0).is_err());
        assert!(Scenario::canonical(-2.0, 0.5, 0.5, Profile::Constant(0.5), 1.0).is_err());
        assert!(Scenario::canonical(2.0, 1.5, 0.5, Profile::Constant(0.5), 1.0).is_err());
        let err = Scenario::canonical(2.0, 0.5, 0.5, Profile::Constant(1.5), 1.0);
        assert!(err.unwrap_err().contains("[0, 1]"));
    }

    #[test]
    fn invariant_region_covers_all_data() {
        let s = Scenario::canonical(
            2.0,
            0.8,
            0.2,
            Profile::Step { left: 0.1, right: 0.9, at: 0.5 },
            1.0,
        )
        .unwrap();
        assert_eq!(s.invariant_region(), (0.1, 0.9));
        // over the region itself |1 - 2u| peaks at u = 0.9
        assert_relative_eq!(s.wave_speed_bound(), 0.8);
        // over the centered ball of radius 0.9 it peaks at u = -0.9
        assert_relative_eq!(s.data_ball_lipschitz(), 2.8);
    }

    #[test]
    fn step_profile_cell_average_is_exact() {
        let p = Profile::Step { left: 1.0, right: 0.0, at: 0.5 };
        assert_relative_eq!(p.cell_average(0.4, 0.6), 0.5);
        assert_relative_eq!(p.cell_average(0.45, 0.55), 0.5, epsilon = 1e-12);
        assert_relative_eq!(p.cell_average(0.0, 0.25), 1.0);
        assert_relative_eq!(p.cell_average(0.75, 1.0), 0.0);
        assert_relative_eq!(p.cell_average(0.4, 0.55), 2.0 / 3.0, epsilon = 1e-14);
    }
}
