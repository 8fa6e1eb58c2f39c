//! Relaxation rate profiles `V(x)` on `(0, 1)`.
//!
//! The standing assumptions require `V > 0` with `V → ∞` at both endpoints;
//! whether `∫ V` converges there (the integrability dichotomy) drives both the
//! definition of the entropy solution and the boundary behavior. Power-law
//! profiles are handled in closed form so that divergent cell masses are
//! recognized symbolically rather than by overflow.

use crate::numerics::{adaptive_simpson, zeta};

/// Relaxation rate profile.
#[derive(Debug, Clone, PartialEq)]
pub enum RelaxationProfile {
    /// `V(x) = (c_γ/γ) [x^{-γ} + (1-x)^{-γ}]` with `c_γ = 1/ζ(1+γ)`, the
    /// profile produced by heavy-tailed reservoir couplings.
    Canonical { gamma: f64, c_gamma: f64 },
    /// Independent power-law blow-up on each side:
    /// `V(x) = coeff_left · x^{-gamma_left} + coeff_right · (1-x)^{-gamma_right}`.
    /// Lets one side be integrable and the other not (mixed regime).
    TwoSidedPower {
        gamma_left: f64,
        gamma_right: f64,
        coeff_left: f64,
        coeff_right: f64,
    },
    /// Constant rate. Violates the boundary blow-up assumption; testing only.
    Constant { rate: f64 },
    /// `V ≡ 0`. Pure conservation-law mode for Riemann oracles; testing only.
    Zero,
}

impl RelaxationProfile {
    /// Canonical profile for exponent `gamma > 0`, with `c_γ` computed from
    /// partial zeta sums with a `1e-9` tail bracket.
    pub fn canonical(gamma: f64) -> Result<Self, String> {
        if !(gamma > 0.0) {
            return Err(format!("canonical profile requires gamma > 0, got {gamma}"));
        }
        let c_gamma = 1.0 / zeta(1.0 + gamma, 1e-9);
        Ok(RelaxationProfile::Canonical { gamma, c_gamma })
    }

    /// Rate at an interior point. Diverges (to `+∞` in floats) at 0 and 1 for
    /// the power-law profiles.
    pub fn value(&self, x: f64) -> f64 {
        match self {
            RelaxationProfile::Canonical { gamma, c_gamma } => {
                c_gamma / gamma * (x.powf(-gamma) + (1.0 - x).powf(-gamma))
            }
            RelaxationProfile::TwoSidedPower {
                gamma_left,
                gamma_right,
                coeff_left,
                coeff_right,
            } => coeff_left * x.powf(-gamma_left) + coeff_right * (1.0 - x).powf(-gamma_right),
            RelaxationProfile::Constant { rate } => *rate,
            RelaxationProfile::Zero => 0.0,
        }
    }

    /// `∫_a^b V(x) dx` over `0 ≤ a < b ≤ 1`, `+∞` when the interval touches a
    /// non-integrable endpoint. Closed forms for the power laws.
    pub fn cell_mass(&self, a: f64, b: f64) -> f64 {
        assert!((0.0..=1.0).contains(&a) && (0.0..=1.0).contains(&b) && a <= b);
        match self {
            RelaxationProfile::Canonical { gamma, c_gamma } => {
                let c = c_gamma / gamma;
                let left = power_integral(*gamma, a, b);
                let right = power_integral(*gamma, 1.0 - b, 1.0 - a);
                c * (left + right)
            }
            RelaxationProfile::TwoSidedPower {
                gamma_left,
                gamma_right,
                coeff_left,
                coeff_right,
            } => {
                coeff_left * power_integral(*gamma_left, a, b)
                    + coeff_right * power_integral(*gamma_right, 1.0 - b, 1.0 - a)
            }
            RelaxationProfile::Constant { rate } => rate * (b - a),
            RelaxationProfile::Zero => 0.0,
        }
    }

    /// Is `∫_0^y V` finite?
    pub fn integrable_left(&self) -> bool {
        match self {
            RelaxationProfile::Canonical { gamma, .. } => *gamma < 1.0,
            RelaxationProfile::TwoSidedPower { gamma_left, .. } => *gamma_left < 1.0,
            RelaxationProfile::Constant { .. } | RelaxationProfile::Zero => true,
        }
    }

    /// Is `∫_{1-y}^1 V` finite?
    pub fn integrable_right(&self) -> bool {
        match self {
            RelaxationProfile::Canonical { gamma, .. } => *gamma < 1.0,
            RelaxationProfile::TwoSidedPower { gamma_right, .. } => *gamma_right < 1.0,
            RelaxationProfile::Constant { .. } | RelaxationProfile::Zero => true,
        }
    }

    /// `(1/y²) ∫_0^y [1/V(x) + 1/V(1-x)] dx`, the quantity whose boundedness
    /// over `y → 0` is the strengthened uniqueness condition.
    pub fn inv_v_bound(&self, y: f64) -> f64 {
        assert!(y > 0.0 && y < 1.0);
        let f = |x: f64| {
            if x <= 0.0 {
                return 0.0;
            }
            let a = self.value(x);
            let b = self.value(1.0 - x);
            let mut s = 0.0;
            if a.is_finite() && a > 0.0 {
                s += 1.0 / a;
            }
            if b.is_finite() && b > 0.0 {
                s += 1.0 / b;
            }
            s
        };
        adaptive_simpson(&f, 0.0, y, 1e-12) / (y * y)
    }

    /// True if the profile blows up at the endpoints, sampled along a dyadic
    /// approach: strict monotone growth plus an eight-fold gain over the
    /// sampled range. Constant and zero profiles fail this.
    pub fn diverges_at_boundary(&self) -> bool {
        let first_l = self.value(0.5f64.powi(3));
        let first_r = self.value(1.0 - 0.5f64.powi(3));
        let mut prev_l = 0.0f64;
        let mut prev_r = 0.0f64;
        for k in 3..20 {
            let x = 0.5f64.powi(k);
            let vl = self.value(x);
            let vr = self.value(1.0 - x);
            if vl <= prev_l || vr <= prev_r {
                return false;
            }
            prev_l = vl;
            prev_r = vr;
        }
        prev_l >= 8.0 * first_l && prev_r >= 8.0 * first_r
    }
}

/// `∫_a^b x^{-γ} dx` with the divergence at `a = 0` recognized symbolically.
fn power_integral(gamma: f64, a: f64, b: f64) -> f64 {
    debug_assert!(a <= b);
    if a == b {
        return 0.0;
    }
    if a <= 0.0 {
        if gamma >= 1.0 {
            return f64::INFINITY;
        }
        return b.powf(1.0 - gamma) / (1.0 - gamma);
    }
    if (gamma - 1.0).abs() < 1e-14 {
        (b / a).ln()
    } else {
        (b.powf(1.0 - gamma) - a.powf(1.0 - gamma)) / (1.0 - gamma)
    }
}
