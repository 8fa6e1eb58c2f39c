//! Test functions for the weak-form checks: interior cutoffs that approach
//! the indicator of `(0, 1)`, C² bumps, and boundary-touching ramps for the
//! integrable-regime inequality. All are tensor products `φ(t) ψ(x)` with
//! closed-form derivatives.

use crate::numerics::{bump, bump_deriv, smoothstep, smoothstep_deriv};

fn smoothstep_second_deriv(s: f64) -> f64 {
    if !(0.0..=1.0).contains(&s) {
        0.0
    } else {
        60.0 * s * (1.0 - s) * (1.0 - 2.0 * s)
    }
}

fn bump_second_deriv(s: f64) -> f64 {
    if s.abs() >= 1.0 {
        0.0
    } else {
        let w = 1.0 - s * s;
        w * (30.0 * s * s - 6.0)
    }
}

/// Spatial factor `ψ(x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpaceTest {
    /// Cutoff `ψ_ε`: smooth ramp on `[0, ε]`, one on `[ε, 1-ε]`, mirrored
    /// ramp on `[1-ε, 1]`; supported in `(0, 1)` and `→ 1` in `L¹` as the
    /// width shrinks.
    Cutoff { eps: f64 },
    /// C² bump supported in `(center - width, center + width)`.
    Bump { center: f64, width: f64 },
    /// Identically one across the closed interval (boundary-touching).
    One,
    /// One at the left endpoint, decaying to zero at `x1` (tests the left
    /// boundary only).
    LeftRamp { x1: f64 },
    /// Zero until `x0`, one at the right endpoint.
    RightRamp { x0: f64 },
}

impl SpaceTest {
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            SpaceTest::Cutoff { eps } => {
                if x < eps {
                    smoothstep(x / eps)
                } else if x > 1.0 - eps {
                    smoothstep((1.0 - x) / eps)
                } else {
                    1.0
                }
            }
            SpaceTest::Bump { center, width } => bump((x - center) / width),
            SpaceTest::One => 1.0,
            SpaceTest::LeftRamp { x1 } => 1.0 - smoothstep(x / x1),
            SpaceTest::RightRamp { x0 } => smoothstep((x - x0) / (1.0 - x0)),
        }
    }

    pub fn deriv(&self, x: f64) -> f64 {
        match *self {
            SpaceTest::Cutoff { eps } => {
                if x < eps {
                    smoothstep_deriv(x / eps) / eps
                } else if x > 1.0 - eps {
                    -smoothstep_deriv((1.0 - x) / eps) / eps
                } else {
                    0.0
                }
            }
            SpaceTest::Bump { center, width } => bump_deriv((x - center) / width) / width,
            SpaceTest::One => 0.0,
            SpaceTest::LeftRamp { x1 } => -smoothstep_deriv(x / x1) / x1,
            SpaceTest::RightRamp { x0 } => smoothstep_deriv((x - x0) / (1.0 - x0)) / (1.0 - x0),
        }
    }

    /// Second derivative (needed by the parabolic weak form, which moves two
    /// derivatives onto the test function).
    pub fn second_deriv(&self, x: f64) -> f64 {
        match *self {
            SpaceTest::Cutoff { eps } => {
                if x < eps {
                    smoothstep_second_deriv(x / eps) / (eps * eps)
                } else if x > 1.0 - eps {
                    smoothstep_second_deriv((1.0 - x) / eps) / (eps * eps)
                } else {
                    0.0
                }
            }
            SpaceTest::Bump { center, width } => {
                bump_second_deriv((x - center) / width) / (width * width)
            }
            SpaceTest::One => 0.0,
            SpaceTest::LeftRamp { x1 } => -smoothstep_second_deriv(x / x1) / (x1 * x1),
            SpaceTest::RightRamp { x0 } => {
                let w = 1.0 - x0;
                smoothstep_second_deriv((x - x0) / w) / (w * w)
            }
        }
    }

    /// Compactly supported inside `(0, 1)`? Decides which entropy inequality
    /// applies.
    pub fn vanishes_at_boundary(&self) -> bool {
        matches!(self, SpaceTest::Cutoff { .. } | SpaceTest::Bump { .. })
    }

    pub fn label(&self) -> String {
        match *self {
            SpaceTest::Cutoff { eps } => format!("cutoff(eps={eps})"),
            SpaceTest::Bump { center, width } => format!("bump(c={center},w={width})"),
            SpaceTest::One => "one".to_string(),
            SpaceTest::LeftRamp { x1 } => format!("left-ramp(x1={x1})"),
            SpaceTest::RightRamp { x0 } => format!("right-ramp(x0={x0})"),
        }
    }
}

/// Temporal factor `φ(t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TimeTest {
    /// One at `t = 0` with zero slope, C² decay to zero at `tau`; activates
    /// the initial term of the weak form.
    InitialWindow { tau: f64 },
    /// C² bump supported in `(t0, t1)`; the initial term drops out.
    Bump { t0: f64, t1: f64 },
}

impl TimeTest {
    pub fn eval(&self, t: f64) -> f64 {
        match *self {
            TimeTest::InitialWindow { tau } => 1.0 - smoothstep(t / tau),
            TimeTest::Bump { t0, t1 } => bump((2.0 * t - t0 - t1) / (t1 - t0)),
        }
    }

    pub fn deriv(&self, t: f64) -> f64 {
        match *self {
            TimeTest::InitialWindow { tau } => -smoothstep_deriv(t / tau) / tau,
            TimeTest::Bump { t0, t1 } => bump_deriv((2.0 * t - t0 - t1) / (t1 - t0)) * 2.0 / (t1 - t0),
        }
    }

    pub fn label(&self) -> String {
        match *self {
            TimeTest::InitialWindow { tau } => format!("initial(tau={tau})"),
            TimeTest::Bump { t0, t1 } => format!("window({t0},{t1})"),
        }
    }
}

/// A fixed, pre-registered library of tensor-product test functions.
#[derive(Debug, Clone)]
pub struct TestFunctionFamily {
    pub tests: Vec<(TimeTest, SpaceTest)>,
}

impl TestFunctionFamily {
    /// Interior family: dyadic cutoffs plus interior bumps, crossed with an
    /// initial window and two interior time windows.
    pub fn interior(t_end: f64) -> Self {
        let times = [
            TimeTest::InitialWindow { tau: 0.5 * t_end },
            TimeTest::Bump { t0: 0.2 * t_end, t1: 0.8 * t_end },
            TimeTest::Bump { t0: 0.5 * t_end, t1: 0.95 * t_end },
        ];
        let spaces = [
            SpaceTest::Cutoff { eps: 1.0 / 8.0 },
            SpaceTest::Cutoff { eps: 1.0 / 16.0 },
            SpaceTest::Cutoff { eps: 1.0 / 32.0 },
            SpaceTest::Bump { center: 0.5, width: 0.35 },
            SpaceTest::Bump { center: 0.3, width: 0.25 },
        ];
        let tests = times
            .iter()
            .flat_map(|&t| spaces.iter().map(move |&s| (t, s)))
            .collect();
        TestFunctionFamily { tests }
    }

    /// Boundary-touching family for the integrable-regime inequality.
    pub fn boundary(t_end: f64) -> Self {
        let times = [
            TimeTest::InitialWindow { tau: 0.5 * t_end },
            TimeTest::Bump { t0: 0.2 * t_end, t1: 0.8 * t_end },
        ];
        let spaces = [
            SpaceTest::One,
            SpaceTest::LeftRamp { x1: 0.5 },
            SpaceTest::RightRamp { x0: 0.5 },
        ];
        let tests = times
            .iter()
            .flat_map(|&t| spaces.iter().map(move |&s| (t, s)))
            .collect();
        TestFunctionFamily { tests }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn cutoff_meets_its_contract() {
        for k in 2..7 {
            let eps = 0.5f64.powi(k);
            let psi = SpaceTest::Cutoff { eps };
            assert_eq!(psi.eval(0.0), 0.0);
            assert_eq!(psi.eval(1.0), 0.0);
            for i in 0..=100 {
                let x = i as f64 / 100.0;
                let v = psi.eval(x);
                assert!((0.0..=1.0).contains(&v));
                if (eps..=1.0 - eps).contains(&x) {
                    assert_eq!(v, 1.0);
                }
            }
        }
    }

    #[test]
    fn cutoff_tends_to_one_in_l1() {
        // ∫ (1 - ψ_ε) ≤ 2ε, halving along the dyadic list
        let mut prev = f64::INFINITY;
        for k in 2..8 {
            let eps = 0.5f64.powi(k);
            let psi = SpaceTest::Cutoff { eps };
            let gap = crate::numerics::adaptive_simpson(&|x| 1.0 - psi.eval(x), 0.0, 1.0, 1e-10);
            assert!(gap <= 2.0 * eps && gap < prev);
            prev = gap;
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let h = 1e-6;
        let spaces = [
            SpaceTest::Cutoff { eps: 0.25 },
            SpaceTest::Bump { center: 0.5, width: 0.3 },
            SpaceTest::LeftRamp { x1: 0.5 },
            SpaceTest::RightRamp { x0: 0.5 },
        ];
        for s in spaces {
            for i in 1..100 {
                let x = i as f64 / 100.0 + 0.0037;
                if !(h..1.0 - h).contains(&x) {
                    continue;
                }
                let fd = (s.eval(x + h) - s.eval(x - h)) / (2.0 * h);
                assert_relative_eq!(fd, s.deriv(x), epsilon = 1e-5, max_relative = 1e-4);
                let fd2 = (s.deriv(x + h) - s.deriv(x - h)) / (2.0 * h);
                assert_relative_eq!(fd2, s.second_deriv(x), epsilon = 1e-3, max_relative = 1e-3);
            }
        }
        let times = [
            TimeTest::InitialWindow { tau: 0.5 },
            TimeTest::Bump { t0: 0.2, t1: 0.8 },
        ];
        for tf in times {
            for i in 1..100 {
                let t = i as f64 / 100.0;
                let fd = (tf.eval(t + h) - tf.eval(t - h)) / (2.0 * h);
                assert_relative_eq!(fd, tf.deriv(t), epsilon = 1e-5, max_relative = 1e-4);
            }
        }
    }

    #[test]
    fn initial_window_activates_the_initial_term() {
        let w = TimeTest::InitialWindow { tau: 0.5 };
        assert_eq!(w.eval(0.0), 1.0);
        assert_eq!(w.eval(0.6), 0.0);
        let b = TimeTest::Bump { t0: 0.2, t1: 0.8 };
        assert_eq!(b.eval(0.0), 0.0);
    }

    #[test]
    fn families_have_the_advertised_structure() {
        let fam = TestFunctionFamily::interior(1.0);
        assert!(fam.tests.iter().all(|(_, s)| s.vanishes_at_boundary()));
        assert_eq!(fam.tests.len(), 15);
        let bf = TestFunctionFamily::boundary(1.0);
        assert!(bf.tests.iter().all(|(_, s)| !s.vanishes_at_boundary()));
    }
}
