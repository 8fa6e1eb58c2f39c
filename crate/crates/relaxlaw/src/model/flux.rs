//! Flux functions `J` of the balance law, with derivatives, Lipschitz bounds
//! and the critical points needed by exact interface-flux formulas.

use crate::numerics::PiecewiseLinear;

/// Convexity classification of a flux, used by boundary-trace diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convexity {
    Convex,
    Concave,
    Neither,
}

/// Scalar flux `J(u)` together with its derivative.
///
/// Built-ins cover the common model fluxes; arbitrary shapes enter through
/// piecewise-linear tables (whose derivative is piecewise constant).
#[derive(Debug, Clone, PartialEq)]
pub enum Flux {
    /// `J(u) = u (1 - u)`, the quadratic traffic/exclusion flux (concave).
    QuadraticTraffic,
    /// `J(u) = u² / 2` (convex).
    Burgers,
    /// `J(u) = speed · u`.
    Linear { speed: f64 },
    /// Piecewise-linear interpolation of `(u, J)` knots.
    Table(PiecewiseLinear),
}

impl Flux {
    /// Flux value `J(u)`.
    pub fn j(&self, u: f64) -> f64 {
        match self {
            Flux::QuadraticTraffic => u * (1.0 - u),
            Flux::Burgers => 0.5 * u * u,
            Flux::Linear { speed } => speed * u,
            Flux::Table(t) => t.eval(u),
        }
    }

    /// Derivative `J'(u)`.
    pub fn dj(&self, u: f64) -> f64 {
        match self {
            Flux::QuadraticTraffic => 1.0 - 2.0 * u,
            Flux::Burgers => u,
            Flux::Linear { speed } => *speed,
            Flux::Table(t) => t.slope(u),
        }
    }

    /// `M(r) = sup { |J'(u)| : |u| ≤ r }`.
    pub fn lipschitz_bound(&self, r: f64) -> f64 {
        let r = r.abs();
        match self {
            Flux::QuadraticTraffic => (1.0 + 2.0 * r).max((1.0f64 - 2.0 * r).abs()),
            Flux::Burgers => r,
            Flux::Linear { speed } => speed.abs(),
            Flux::Table(t) => {
                let mut m = 0.0f64;
                let mut prev: Option<(f64, f64)> = None;
                for (x, y) in t.knots() {
                    if let Some((px, py)) = prev {
                        // segment intersects [-r, r]?
                        if x > -r && px < r {
                            m = m.max(((y - py) / (x - px)).abs());
                        }
                    }
                    prev = Some((x, y));
                }
                m
            }
        }
    }

    pub fn convexity(&self) -> Convexity {
        match self {
            Flux::QuadraticTraffic => Convexity::Concave,
            Flux::Burgers => Convexity::Convex,
            Flux::Linear { .. } => Convexity::Convex, // affine: both; convex suffices
            Flux::Table(t) => {
                let slopes: Vec<f64> = {
                    let k: Vec<(f64, f64)> = t.knots().collect();
                    k.windows(2)
                        .map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0))
                        .collect()
                };
                let nondec = slopes.windows(2).all(|w| w[1] >= w[0] - 1e-14);
                let noninc = slopes.windows(2).all(|w| w[1] <= w[0] + 1e-14);
                match (nondec, noninc) {
                    (true, _) => Convexity::Convex,
                    (_, true) => Convexity::Concave,
                    _ => Convexity::Neither,
                }
            }
        }
    }

    /// Interior points where `J'` changes sign (plus table breakpoints).
    /// Together with the endpoints these locate every extremum of `J` on an
    /// interval, which is what the Godunov flux needs.
    pub fn critical_points(&self) -> Vec<f64> {
        let mut out = Vec::new();
        self.for_each_critical_point(f64::NEG_INFINITY, f64::INFINITY, |c| out.push(c));
        out
    }

    /// Visit critical points inside `(lo, hi)` in increasing order without
    /// allocating (this sits in the interface-flux inner loop).
    pub fn for_each_critical_point(&self, lo: f64, hi: f64, mut visit: impl FnMut(f64)) {
        match self {
            Flux::QuadraticTraffic => {
                if 0.5 > lo && 0.5 < hi {
                    visit(0.5);
                }
            }
            Flux::Burgers => {
                if 0.0 > lo && 0.0 < hi {
                    visit(0.0);
                }
            }
            Flux::Linear { .. } => {}
            Flux::Table(t) => {
                for (x, _) in t.knots() {
                    if x > lo && x < hi {
                        visit(x);
                    }
                }
            }
        }
    }

    /// `sup { |J'(u)| : lo ≤ u ≤ hi }`, the wave-speed bound on an invariant
    /// region. Tighter than [`Self::lipschitz_bound`], which takes the
    /// centered ball.
    pub fn max_wave_speed_on(&self, lo: f64, hi: f64) -> f64 {
        let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
        match self {
            // |J'| is convex for these, so endpoints suffice
            Flux::QuadraticTraffic | Flux::Burgers | Flux::Linear { .. } => {
                self.dj(lo).abs().max(self.dj(hi).abs())
            }
            Flux::Table(t) => {
                let mut m = 0.0f64;
                let mut prev: Option<(f64, f64)> = None;
                for (x, y) in t.knots() {
                    if let Some((px, py)) = prev {
                        if x > lo && px < hi {
                            m = m.max(((y - py) / (x - px)).abs());
                        }
                    }
                    prev = Some((x, y));
                }
                m
            }
        }
    }

    /// Extremes of `J` over `[lo, hi]` evaluated exactly via critical points.
    pub fn min_max_on(&self, lo: f64, hi: f64) -> (f64, f64) {
        let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
        let mut min = self.j(lo).min(self.j(hi));
        let mut max = self.j(lo).max(self.j(hi));
        self.for_each_critical_point(lo, hi, |c| {
            let v = self.j(c);
            min = min.min(v);
            max = max.max(v);
        });
        (min, max)
    }
}
