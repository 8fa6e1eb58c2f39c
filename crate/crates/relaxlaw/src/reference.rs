//! Closed-form reference solutions for the quadratic traffic flux
//! `J(u) = u(1 - u)` with the relaxation switched off.
//!
//! These are the independent oracles behind the Riemann test suite: they are
//! evaluated from the self-similar formulas alone and share no code with the
//! solvers.

/// Pointwise entropy solution of the Riemann problem for `J(u) = u(1-u)`
/// with states `(left, right)` split at `x0`.
///
/// Characteristic speed is `J'(u) = 1 - 2u`. With the concave flux, colliding
/// characteristics (`left < right`) form a shock with the chord speed, and
/// separating ones (`left > right`) open a rarefaction fan interpolating
/// `u = (1 - ξ)/2` along `ξ = (x - x0)/t`.
pub fn riemann_traffic_exact(left: f64, right: f64, x0: f64, t: f64, x: f64) -> f64 {
    if t <= 0.0 {
        return if x < x0 { left } else { right };
    }
    let xi = (x - x0) / t;
    if left <= right {
        // shock with Rankine-Hugoniot speed; for u(1-u) the chord slope is
        // 1 - left - right
        let sigma = 1.0 - left - right;
        if xi < sigma {
            left
        } else {
            right
        }
    } else {
        let s_l = 1.0 - 2.0 * left;
        let s_r = 1.0 - 2.0 * right;
        if xi <= s_l {
            left
        } else if xi >= s_r {
            right
        } else {
            0.5 * (1.0 - xi)
        }
    }
}

/// Exact cell averages of [`riemann_traffic_exact`] on a uniform `n`-cell
/// grid over `(0, 1)`, by integrating each self-similar piece in closed form.
pub fn riemann_traffic_cell_averages(
    left: f64,
    right: f64,
    x0: f64,
    t: f64,
    n: usize,
) -> Vec<f64> {
    let dx = 1.0 / n as f64;
    (0..n)
        .map(|i| {
            let a = i as f64 * dx;
            let b = a + dx;
            riemann_traffic_integral(left, right, x0, t, a, b) / dx
        })
        .collect()
}

/// `∫_a^b u(t, x) dx` for the exact Riemann solution.
fn riemann_traffic_integral(left: f64, right: f64, x0: f64, t: f64, a: f64, b: f64) -> f64 {
    debug_assert!(a <= b);
    if t <= 0.0 {
        let cut = x0.clamp(a, b);
        return left * (cut - a) + right * (b - cut);
    }
    if left <= right {
        let sigma = 1.0 - left - right;
        let cut = (x0 + sigma * t).clamp(a, b);
        left * (cut - a) + right * (b - cut)
    } else {
        let xl = x0 + (1.0 - 2.0 * left) * t; // fan head
        let xr = x0 + (1.0 - 2.0 * right) * t; // fan tail
        let c1 = xl.clamp(a, b);
        let c2 = xr.clamp(a, b);
        // fan piece: ∫ (1 - (x - x0)/t)/2 dx
        let fan = |x: f64| 0.5 * (x - (x - x0) * (x - x0) / (2.0 * t) - x0) + 0.5 * x0;
        left * (c1 - a) + (fan(c2) - fan(c1)) + right * (b - c2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn colliding_states_form_a_stationary_shock() {
        // (0, 1): chord speed (J(1) - J(0))/(1 - 0) = 0
        for t in [0.1, 0.5] {
            assert_eq!(riemann_traffic_exact(0.0, 1.0, 0.5, t, 0.49), 0.0);
            assert_eq!(riemann_traffic_exact(0.0, 1.0, 0.5, t, 0.51), 1.0);
        }
    }

    #[test]
    fn separating_states_open_a_fan_between_speeds_plus_minus_one() {
        // (1, 0): fan spans ξ ∈ [-1, 1]
        let t = 0.25;
        assert_eq!(riemann_traffic_exact(1.0, 0.0, 0.5, t, 0.5 - 1.1 * t), 1.0);
        assert_eq!(riemann_traffic_exact(1.0, 0.0, 0.5, t, 0.5 + 1.1 * t), 0.0);
        assert_relative_eq!(riemann_traffic_exact(1.0, 0.0, 0.5, t, 0.5), 0.5);
        assert_relative_eq!(
            riemann_traffic_exact(1.0, 0.0, 0.5, t, 0.5 + 0.5 * t),
            0.25
        );
    }

    #[test]
    fn cell_averages_integrate_to_total_mass() {
        // rarefaction conserves ∫u: mass = 1·x0 at t=0 minus flux difference
        // J(1) - J(1) .. both boundary states are constant in time, flux 0
        let n = 64;
        let avg = riemann_traffic_cell_averages(1.0, 0.0, 0.5, 0.25, n);
        let mass: f64 = avg.iter().sum::<f64>() / n as f64;
        assert_relative_eq!(mass, 0.5, epsilon = 1e-12);
        // averages respect the pointwise bounds and decrease monotonically
        assert!(avg.windows(2).all(|w| w[1] <= w[0] + 1e-12));
        assert!(avg.iter().all(|&u| (0.0..=1.0).contains(&u)));
    }

    #[test]
    fn cell_average_of_fan_matches_quadrature() {
        let f = |x: f64| riemann_traffic_exact(1.0, 0.0, 0.5, 0.25, x);
        let q = crate::numerics::adaptive_simpson(&f, 0.3, 0.7, 1e-12) / 0.4;
        let exact = riemann_traffic_integral(1.0, 0.0, 0.5, 0.25, 0.3, 0.7) / 0.4;
        assert_relative_eq!(q, exact, epsilon = 1e-9);
    }
}
