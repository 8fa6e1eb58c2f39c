//! Shared numerical kernels: adaptive quadrature, Riemann zeta with rigorous
//! tail brackets, smooth cutoff/bump polynomials and piecewise-linear tables.

/// Adaptive Simpson quadrature of `f` over `[a, b]`.
///
/// Classic recursive bisection with the Richardson error estimate
/// `|S_left + S_right - S| / 15`. Tolerance is absolute. The refinement is
/// budget-bounded, so divergent integrands return a large (possibly infinite)
/// partial value instead of recursing forever; callers that probe possibly
/// divergent integrals check `is_finite` on the result.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let (a, b, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson(a, b, fa, fm, fb);
    let mut budget: u32 = 20_000;
    sign * simpson_rec(f, a, b, fa, fm, fb, whole, tol, 50, &mut budget)
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    budget: &mut u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    let done = depth == 0 || *budget == 0 || !delta.is_finite() || delta.abs() <= 15.0 * tol;
    if done {
        if delta.is_finite() {
            left + right + delta / 15.0
        } else {
            left + right
        }
    } else {
        *budget -= 1;
        simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, budget)
            + simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, budget)
    }
}

/// Composite 3-point Gauss-Legendre average of `f` over `[a, b]`.
///
/// Exact for quintic polynomials; used for cell averages of smooth profiles.
pub fn gauss3_average<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    // nodes/weights on [-1, 1]
    const X: f64 = 0.774_596_669_241_483_4; // sqrt(3/5)
    const W0: f64 = 8.0 / 9.0;
    const W1: f64 = 5.0 / 9.0;
    let m = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    0.5 * (W1 * f(m - h * X) + W0 * f(m) + W1 * f(m + h * X))
}

/// Riemann zeta `ζ(s)` for `s > 1` by partial sums plus an integral tail
/// bracket. Terminates when the bracket width drops below `tail_tol`, so the
/// returned value carries a rigorous absolute error bound of `tail_tol / 2`.
pub fn zeta(s: f64, tail_tol: f64) -> f64 {
    assert!(s > 1.0, "zeta requires s > 1, got {s}");
    let mut sum = 0.0;
    let mut n = 1u64;
    loop {
        sum += (n as f64).powf(-s);
        // tail in ( (n+1)^{1-s}/(s-1), n^{1-s}/(s-1) )
        let lo = ((n + 1) as f64).powf(1.0 - s) / (s - 1.0);
        let hi = (n as f64).powf(1.0 - s) / (s - 1.0);
        if hi - lo < tail_tol {
            return sum + 0.5 * (lo + hi);
        }
        n += 1;
        assert!(n < 100_000_000, "zeta({s}) did not converge to {tail_tol}");
    }
}

/// Sum of the zeta tail `Σ_{k≥n} k^{-s}` with the same integral bracket.
pub fn zeta_tail(s: f64, n: u64, tail_tol: f64) -> f64 {
    assert!(s > 1.0 && n >= 1);
    let mut sum = 0.0;
    let mut k = n;
    loop {
        sum += (k as f64).powf(-s);
        let lo = ((k + 1) as f64).powf(1.0 - s) / (s - 1.0);
        let hi = (k as f64).powf(1.0 - s) / (s - 1.0);
        if hi - lo < tail_tol {
            return sum + 0.5 * (lo + hi);
        }
        k += 1;
    }
}

/// Quintic smoothstep: 0 for `s ≤ 0`, 1 for `s ≥ 1`, C² monotone ramp between.
pub fn smoothstep(s: f64) -> f64 {
    if s <= 0.0 {
        0.0
    } else if s >= 1.0 {
        1.0
    } else {
        s * s * s * (10.0 + s * (-15.0 + 6.0 * s))
    }
}

/// Derivative of [`smoothstep`].
pub fn smoothstep_deriv(s: f64) -> f64 {
    if s <= 0.0 || s >= 1.0 {
        0.0
    } else {
        30.0 * s * s * (1.0 - s) * (1.0 - s)
    }
}

/// C² bump on `[-1, 1]`: `(1 - s²)³`, zero outside.
pub fn bump(s: f64) -> f64 {
    if s.abs() >= 1.0 {
        0.0
    } else {
        let w = 1.0 - s * s;
        w * w * w
    }
}

/// Derivative of [`bump`].
pub fn bump_deriv(s: f64) -> f64 {
    if s.abs() >= 1.0 {
        0.0
    } else {
        let w = 1.0 - s * s;
        -6.0 * s * w * w
    }
}

/// Piecewise-linear table over sorted knots, with exact integrals and a
/// piecewise-constant derivative. Backs the CSV-table forms of fluxes,
/// boundary data and initial profiles.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinear {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl PiecewiseLinear {
    /// Build from knots; requires at least two strictly increasing abscissae.
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self, String> {
        if xs.len() < 2 || xs.len() != ys.len() {
            return Err(format!(
                "piecewise-linear table needs >= 2 matching knots, got {}/{}",
                xs.len(),
                ys.len()
            ));
        }
        if xs.windows(2).any(|w| w[1] <= w[0]) {
            return Err("piecewise-linear abscissae must be strictly increasing".into());
        }
        if xs.iter().chain(ys.iter()).any(|v| !v.is_finite()) {
            return Err("piecewise-linear knots must be finite".into());
        }
        Ok(Self { xs, ys })
    }

    pub fn knots(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.xs.iter().copied().zip(self.ys.iter().copied())
    }

    /// Evaluate with constant extrapolation outside the knot range.
    pub fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if x <= self.xs[0] {
            return self.ys[0];
        }
        if x >= self.xs[n - 1] {
            return self.ys[n - 1];
        }
        let i = self.segment(x);
        let t = (x - self.xs[i]) / (self.xs[i + 1] - self.xs[i]);
        self.ys[i] + t * (self.ys[i + 1] - self.ys[i])
    }

    /// Left segment slope at `x` (piecewise-constant derivative; zero outside).
    pub fn slope(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if x < self.xs[0] || x > self.xs[n - 1] {
            return 0.0;
        }
        let i = self.segment(x);
        (self.ys[i + 1] - self.ys[i]) / (self.xs[i + 1] - self.xs[i])
    }

    /// Exact integral over `[a, b]` (constant extrapolation outside knots).
    pub fn integral(&self, a: f64, b: f64) -> f64 {
        if a == b {
            return 0.0;
        }
        if b < a {
            return -self.integral(b, a);
        }
        // integrate segment by segment over the intersection
        let mut total = 0.0;
        let n = self.xs.len();
        let mut lo = a;
        if lo < self.xs[0] {
            total += (self.xs[0].min(b) - lo) * self.ys[0];
            lo = self.xs[0].min(b);
        }
        for i in 0..n - 1 {
            if lo >= b {
                break;
            }
            let (x0, x1) = (self.xs[i], self.xs[i + 1]);
            let s = lo.max(x0);
            let e = b.min(x1);
            if s < e {
                total += (e - s) * 0.5 * (self.eval(s) + self.eval(e));
                lo = e;
            }
        }
        if lo < b {
            total += (b - lo) * self.ys[n - 1];
        }
        total
    }

    pub fn min_value(&self) -> f64 {
        self.ys.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_value(&self) -> f64 {
        self.ys.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    fn segment(&self, x: f64) -> usize {
        match self
            .xs
            .binary_search_by(|v| v.partial_cmp(&x).expect("finite knots"))
        {
            Ok(i) => i.min(self.xs.len() - 2),
            Err(i) => i.saturating_sub(1).min(self.xs.len() - 2),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn simpson_integrates_polynomials_exactly() {
        let f = |x: f64| 3.0 * x * x - 2.0 * x + 1.0;
        assert_relative_eq!(adaptive_simpson(&f, 0.0, 2.0, 1e-12), 6.0, epsilon = 1e-10);
    }

    #[test]
    fn simpson_handles_reversed_and_singular_like_integrands() {
        let f = |x: f64| x.sqrt();
        let v = adaptive_simpson(&f, 0.0, 1.0, 1e-10);
        assert_relative_eq!(v, 2.0 / 3.0, epsilon = 1e-7);
        assert_relative_eq!(adaptive_simpson(&f, 1.0, 0.0, 1e-10), -v, epsilon = 1e-12);
    }

    #[test]
    fn zeta_three_matches_apery() {
        // ζ(3) = 1.2020569031595942854...
        let z = zeta(3.0, 1e-10);
        assert_relative_eq!(z, 1.202_056_903_159_594, epsilon = 1e-9);
    }

    #[test]
    fn zeta_two_matches_pi_squared_over_six() {
        let z = zeta(2.0, 1e-10);
        assert_relative_eq!(z, std::f64::consts::PI.powi(2) / 6.0, epsilon = 1e-9);
    }

    #[test]
    fn zeta_tail_is_consistent_with_zeta() {
        let s = 3.0;
        let partial: f64 = (1..10u64).map(|k| (k as f64).powf(-s)).sum();
        assert_relative_eq!(
            zeta_tail(s, 10, 1e-12),
            zeta(s, 1e-12) - partial,
            epsilon = 1e-10
        );
    }

    #[test]
    fn smoothstep_is_a_c2_ramp() {
        assert_eq!(smoothstep(0.0), 0.0);
        assert_eq!(smoothstep(1.0), 1.0);
        assert_relative_eq!(smoothstep(0.5), 0.5);
        // derivative vanishes at both ends and matches a central difference inside
        assert_eq!(smoothstep_deriv(0.0), 0.0);
        assert_eq!(smoothstep_deriv(1.0), 0.0);
        let h = 1e-6;
        for &s in &[0.2, 0.5, 0.8] {
            let fd = (smoothstep(s + h) - smoothstep(s - h)) / (2.0 * h);
            assert_relative_eq!(fd, smoothstep_deriv(s), epsilon = 1e-6);
        }
    }

    #[test]
    fn gauss3_average_is_exact_for_quadratics() {
        let f = |x: f64| x * x;
        assert_relative_eq!(gauss3_average(&f, 0.0, 1.0), 1.0 / 3.0, epsilon = 1e-14);
    }

    #[test]
    fn piecewise_linear_eval_and_integral() {
        let t = PiecewiseLinear::new(vec![0.0, 1.0, 2.0], vec![0.0, 1.0, 0.0]).unwrap();
        assert_relative_eq!(t.eval(0.5), 0.5);
        assert_relative_eq!(t.eval(1.5), 0.5);
        assert_relative_eq!(t.eval(-1.0), 0.0);
        assert_relative_eq!(t.integral(0.0, 2.0), 1.0);
        assert_relative_eq!(t.integral(0.5, 1.5), 0.75);
        assert_relative_eq!(t.slope(0.2), 1.0);
        assert_relative_eq!(t.slope(1.2), -1.0);
    }

    #[test]
    fn piecewise_linear_rejects_bad_knots() {
        assert!(PiecewiseLinear::new(vec![0.0], vec![1.0]).is_err());
        assert!(PiecewiseLinear::new(vec![0.0, 0.0], vec![1.0, 2.0]).is_err());
    }
}
