//! The individual certification checks. Every check is a pure function of
//! `(Field, Scenario, parameters)`; weak-form integrals use the same
//! quadrature order as the solvers (snapshot trapezoid in time, cell sums in
//! space) so the consistency slack stays first order in `dx + Δt`.

use rayon::prelude::*;

use crate::diagnostics::report::{Check, DiagnosticsReport, Regime};
use crate::diagnostics::testfn::{SpaceTest, TestFunctionFamily, TimeTest};
use crate::fv::{Field, InterfaceFlux};
use crate::model::{kruzhkov_anchor_grid, kruzhkov_flux, Convexity, EntropyPair, Scenario};
use crate::model::validate::regime;

/// Coefficient of the entropy-residual consistency slack
/// `C · (dx + max snapshot gap)`. Calibrated once on the Riemann suite
/// (stationary shock, transonic rarefaction, off-center shocks) plus the
/// canonical relaxation scenarios at exponents 1/2, 1 and 2, over 64-512
/// cells with layer-resolving snapshot schedules: the worst normalized
/// residual was 0.72 (exponent 1 at 64 cells, decaying to 0.07 at 512), all
/// other cases below 0.15. Frozen with margin; genuine violations sit an
/// order of magnitude above this slack and do not shrink under refinement.
pub const ENTROPY_SLACK_COEFF: f64 = 1.1;

/// Absolute tolerance on near-boundary traces (density and flux) used by the
/// non-integrable-side checks.
pub const TRACE_TOL: f64 = 0.02;

/// Slack for the one-sided Otto boundary inequalities in the integrable
/// regime; covers the marginal conjugate-state case at moderate grids.
pub const OTTO_SLACK: f64 = 0.02;

/// Per-step slack (in units of `dx`) allowed on top of strict L¹ contraction.
pub const CONTRACTION_SLACK_CELLS: f64 = 10.0;

/// Trapezoid weights over the snapshot times clipped to `[start, end]`.
/// Returns `(snapshot index, weight)` with `Σ weight = end - start` when the
/// window is covered by snapshots.
fn window_weights(field: &Field, start: f64, end: f64) -> Vec<(usize, f64)> {
    let ts: Vec<f64> = field.history.iter().map(|s| s.t).collect();
    let mut out = Vec::new();
    for (j, &t) in ts.iter().enumerate() {
        if t < start - 1e-13 || t > end + 1e-13 {
            continue;
        }
        let lo = if j == 0 { ts[0] } else { 0.5 * (ts[j - 1] + t) }.max(start);
        let hi = if j + 1 == ts.len() {
            ts[j]
        } else {
            0.5 * (t + ts[j + 1])
        }
        .min(end);
        if hi > lo {
            out.push((j, hi - lo));
        }
    }
    out
}

fn max_snapshot_gap(field: &Field) -> f64 {
    field
        .history
        .windows(2)
        .map(|w| w[1].t - w[0].t)
        .fold(0.0f64, f64::max)
}

/// Snapshot schedule for weak-form diagnostics: a uniform grid over
/// `[0, t_end]` plus a geometric ladder of early times resolving the stiff
/// relaxation layer (each finite-rate cell relaxes on its own time scale
/// `1/V̄`, far below the uniform spacing near the boundary).
pub fn diagnostic_times(scenario: &Scenario, n_cells: usize, uniform: usize) -> Vec<f64> {
    let t_end = scenario.t_end;
    let mut times: Vec<f64> = (1..=uniform)
        .map(|j| t_end * j as f64 / uniform as f64)
        .collect();
    let grid = crate::fv::Grid::new(scenario, n_cells).expect("valid grid");
    let v_max = grid
        .v_bar
        .iter()
        .copied()
        .filter(|v| v.is_finite())
        .fold(0.0f64, f64::max);
    if v_max > 0.0 {
        let t_min = (0.5 / v_max).max(1e-12 * t_end);
        let mut t = t_end / uniform as f64;
        while t > t_min {
            t *= 0.5;
            times.push(t);
        }
    }
    times.sort_by(|a, b| a.partial_cmp(b).unwrap());
    times.dedup_by(|a, b| (*a - *b).abs() < 1e-13 * t_end);
    times
}

/// The 21-anchor Kruzhkov grid spanning the invariant region, extended by the
/// boundary data values and the flux critical points.
pub fn build_k_grid(scenario: &Scenario) -> Vec<f64> {
    let (lo, hi) = scenario.invariant_region();
    let extra = [
        scenario.boundary.alpha(0.0),
        scenario.boundary.beta(0.0),
        scenario.boundary.alpha(scenario.t_end),
        scenario.boundary.beta(scenario.t_end),
    ];
    kruzhkov_anchor_grid(&scenario.flux, lo, hi, &extra)
}

/// Weak-form Kruzhkov residual of one `(k, φψ)` combination.
///
/// Returns `source - initial - transport - boundary_allowance`; entropy
/// admissibility demands this be nonpositive up to consistency slack. For
/// test functions supported away from the boundary the allowance is zero and
/// the inequality is the interior one; boundary-touching tests add the
/// Lipschitz-weighted data terms of the integrable-regime inequality.
pub fn kruzhkov_weak_residual(
    field: &Field,
    scenario: &Scenario,
    k: f64,
    phi: TimeTest,
    psi: SpaceTest,
    with_boundary_terms: bool,
) -> f64 {
    let grid = &field.grid;
    let dx = grid.dx;
    let n = grid.n_cells;
    let weights = window_weights(field, 0.0, field.t);

    // initial term
    let u0 = &field.history[0].u;
    let mut initial = 0.0;
    let phi0 = phi.eval(0.0);
    if phi0 != 0.0 {
        for i in 0..n {
            initial += (u0[i] - k).abs() * phi0 * psi.eval(grid.cell_center(i)) * dx;
        }
    }

    let mut transport = 0.0;
    let mut source = 0.0;
    for &(j, w) in &weights {
        let snap = &field.history[j];
        let (pv, pd) = (phi.eval(snap.t), phi.deriv(snap.t));
        for i in 0..n {
            let x = grid.cell_center(i);
            let u = snap.u[i];
            let psi_v = psi.eval(x);
            let psi_d = psi.deriv(x);
            if psi_v != 0.0 || psi_d != 0.0 {
                transport +=
                    w * dx * ((u - k).abs() * pd * psi_v + kruzhkov_flux(&scenario.flux, u, k) * pv * psi_d);
                // pinned cells sit exactly on the target: their source
                // contribution is zero by convention
                if !grid.is_pinned(i) && psi_v != 0.0 {
                    let rho = grid.rho_bar(&scenario.boundary, i, snap.t);
                    let sgn = if u == k { 0.0 } else { (u - k).signum() };
                    source += w * dx * sgn * grid.v_bar[i] * (u - rho) * pv * psi_v;
                }
            }
        }
    }

    let mut boundary_allowance = 0.0;
    if with_boundary_terms {
        let m = scenario.data_ball_lipschitz();
        for &(j, w) in &weights {
            let t = field.history[j].t;
            let pv = phi.eval(t);
            boundary_allowance += m
                * w
                * pv
                * ((scenario.boundary.alpha(t) - k).abs() * psi.eval(0.0)
                    + (scenario.boundary.beta(t) - k).abs() * psi.eval(1.0));
        }
    }

    source - initial - transport - boundary_allowance
}

/// Weak-form entropy certification over a Kruzhkov anchor grid and a test
/// family. Interior tests apply in every regime; boundary-touching tests
/// apply the data-weighted inequality and are skipped (with a note) on
/// non-integrable sides, where no such allowance exists.
///
/// The field must carry history at a dense set of times that resolves the
/// stiff relaxation layer near `t = 0` ([`diagnostic_times`] builds such a
/// schedule); otherwise the source-term quadrature inflates the residual.
pub fn entropy_residual(
    field: &Field,
    scenario: &Scenario,
    k_grid: &[f64],
    tests: &TestFunctionFamily,
) -> DiagnosticsReport {
    let reg = regime(scenario);
    let mut report = DiagnosticsReport::new(reg);
    let slack = ENTROPY_SLACK_COEFF * (field.grid.dx + max_snapshot_gap(field));

    let results: Vec<Check> = tests
        .tests
        .par_iter()
        .map(|&(phi, psi)| {
            let interior = psi.vanishes_at_boundary();
            let name = format!("entropy[{}·{}]", phi.label(), psi.label());
            if !interior {
                // the data-weighted allowance needs integrability on every
                // side the test touches
                let touches_left = psi.eval(0.0) > 0.0;
                let touches_right = psi.eval(1.0) > 0.0;
                let ok_left = !touches_left || scenario.relax.integrable_left();
                let ok_right = !touches_right || scenario.relax.integrable_right();
                if !(ok_left && ok_right) {
                    return Check::inconclusive(
                        name,
                        "entropy-inequality-boundary",
                        f64::NAN,
                        "boundary-supported test skipped: side not integrable",
                    );
                }
            }
            let worst = k_grid
                .iter()
                .map(|&k| kruzhkov_weak_residual(field, scenario, k, phi, psi, !interior))
                .fold(f64::NEG_INFINITY, f64::max);
            let anchor = if interior {
                "entropy-inequality"
            } else {
                "entropy-inequality-boundary"
            };
            Check::new(name, anchor, worst <= slack, worst, slack)
        })
        .collect();
    for c in results {
        report.push(c);
    }
    report
}

/// Cell-wise Kruzhkov residual of one splitting step, using the numerical
/// entropy flux `Ξ(a, b) = F(a∨k, b∨k) - F(a∧k, b∧k)` of the scheme itself.
/// For a monotone step the result is nonpositive up to rounding; its positive
/// part measures entropy violation.
#[allow(clippy::too_many_arguments)]
pub fn cell_entropy_residual(
    scenario: &Scenario,
    field_before: &Field,
    u_after: &[f64],
    t: f64,
    dt: f64,
    k: f64,
    scheme: InterfaceFlux,
    out: &mut Vec<f64>,
) {
    let grid = &field_before.grid;
    let n = grid.n_cells;
    let dx = grid.dx;
    let u = &field_before.u;
    let alpha = scenario.boundary.alpha(t);
    let beta = scenario.boundary.beta(t);
    let xi = |a: f64, b: f64| -> f64 {
        scheme.eval(&scenario.flux, a.max(k), b.max(k)) - scheme.eval(&scenario.flux, a.min(k), b.min(k))
    };
    out.clear();
    for i in 0..n {
        let left = if i == 0 { xi(alpha, u[0]) } else { xi(u[i - 1], u[i]) };
        let right = if i == n - 1 { xi(u[n - 1], beta) } else { xi(u[i], u[i + 1]) };
        let mut r = ((u_after[i] - k).abs() - (u[i] - k).abs()) / dt + (right - left) / dx;
        if !grid.is_pinned(i) {
            let rho = grid.rho_bar(&scenario.boundary, i, t + 0.5 * dt);
            let sgn = if u_after[i] == k { 0.0 } else { (u_after[i] - k).signum() };
            r += sgn * grid.v_bar[i] * (u_after[i] - rho);
        }
        out.push(r);
    }
}

/// Discrete relaxation energy `∬ V (u - ρ)² dx dt` over finite-rate cells
/// (pinned cells sit on the target and contribute zero).
pub fn energy_bound_value(field: &Field, scenario: &Scenario) -> f64 {
    let grid = &field.grid;
    let weights = window_weights(field, 0.0, field.t);
    let mut acc = 0.0;
    for (j, w) in weights {
        let snap = &field.history[j];
        for i in 0..grid.n_cells {
            if grid.is_pinned(i) {
                continue;
            }
            let rho = grid.rho_bar(&scenario.boundary, i, snap.t);
            let d = snap.u[i] - rho;
            acc += w * grid.dx * grid.v_bar[i] * d * d;
        }
    }
    acc
}

/// Refinement stability of the energy values measured on successively
/// doubled grids: each ratio to the previous value must stay below 1.5.
/// Informational (inconclusive) in the fully integrable regime, where the
/// energy bound is not part of the solution concept.
pub fn energy_refinement_check(values: &[f64], reg: Regime) -> Check {
    assert!(values.len() >= 2, "need at least two resolutions");
    let mut worst_ratio = 0.0f64;
    for w in values.windows(2) {
        let ratio = if w[0] == 0.0 { 1.0 } else { w[1] / w[0] };
        worst_ratio = worst_ratio.max(ratio);
    }
    if reg == Regime::Integrable {
        Check::inconclusive(
            "energy-refinement-stability",
            "energy-bound",
            worst_ratio,
            "informational: energy bound not required in the integrable regime",
        )
    } else {
        Check::new(
            "energy-refinement-stability",
            "energy-bound",
            worst_ratio <= 1.5,
            worst_ratio,
            1.5,
        )
    }
}

/// Time-average of `q(u)` over a window at a fixed cell, per unit time.
fn band_time_average(
    field: &Field,
    window: (f64, f64),
    cell: usize,
    q: impl Fn(f64) -> f64,
) -> f64 {
    let weights = window_weights(field, window.0, window.1);
    let total: f64 = weights.iter().map(|&(_, w)| w).sum();
    let acc: f64 = weights
        .iter()
        .map(|&(j, w)| w * q(field.history[j].u[cell]))
        .sum();
    acc / total
}

/// Near-boundary trace diagnostics on the first eight unpinned cell bands of
/// each side.
///
/// Non-integrable side (constant datum required): the time-averaged flux of
/// every supplied pair must approach its datum value, and for convex or
/// concave fluxes the time-averaged density itself must approach the datum
/// monotonically over the bands. Integrable side: the one-sided Otto
/// inequalities for boundary pairs anchored at the datum. The space-time
/// average of `|u - datum|` over shrinking probe widths is evaluated on
/// non-integrable sides as well.
pub fn boundary_trace(
    field: &Field,
    scenario: &Scenario,
    pairs: &[EntropyPair],
    window: (f64, f64),
) -> Result<DiagnosticsReport, String> {
    let (s, t) = window;
    if !(0.0 <= s && s < t && t <= scenario.t_end * (1.0 + 1e-12)) {
        return Err(format!("window ({s}, {t}) must sit inside (0, {})", scenario.t_end));
    }
    if window_weights(field, s, t).len() < 2 {
        return Err("window covers fewer than two snapshots".into());
    }
    let mut report = DiagnosticsReport::new(regime(scenario));

    for side in [Side::Left, Side::Right] {
        let integrable = match side {
            Side::Left => scenario.relax.integrable_left(),
            Side::Right => scenario.relax.integrable_right(),
        };
        let datum_fn: &dyn Fn(f64) -> f64 = match side {
            Side::Left => &|tt| scenario.boundary.alpha(tt),
            Side::Right => &|tt| scenario.boundary.beta(tt),
        };
        let datum_const = match side {
            Side::Left => scenario.boundary.alpha.is_constant(),
            Side::Right => scenario.boundary.beta.is_constant(),
        };
        let datum = datum_fn(0.5 * (s + t));
        let bands = side_bands(field, side, 8);
        let side_name = side.name();

        if !integrable {
            if !datum_const {
                report.push(Check::inconclusive(
                    format!("{side_name}-flux-trace"),
                    "boundary-flux-trace",
                    f64::NAN,
                    "constant boundary datum required for the flux-trace limit",
                ));
                continue;
            }
            // flux traces for the supplied pairs
            for p in pairs {
                let a1 = band_time_average(field, window, bands[0], |u| p.q(u));
                let gap = (a1 - p.q(datum)).abs();
                let (lo, hi) = scenario.invariant_region();
                let lip = (0..=64)
                    .map(|i| {
                        let u = lo + (hi - lo) * i as f64 / 64.0;
                        (p.df(u) * scenario.flux.dj(u)).abs()
                    })
                    .fold(0.0f64, f64::max);
                let tol = TRACE_TOL * lip.max(1.0);
                report.push(Check::new(
                    format!("{side_name}-flux-trace[{}]", p.label()),
                    "boundary-flux-trace",
                    gap <= tol,
                    gap,
                    tol,
                ));
            }
            // density trace: meaningful for convex/concave fluxes
            match scenario.flux.convexity() {
                Convexity::Convex | Convexity::Concave => {
                    let gaps: Vec<f64> = bands
                        .iter()
                        .map(|&c| (band_time_average(field, window, c, |u| u) - datum).abs())
                        .collect();
                    let monotone = gaps.windows(2).all(|w| w[0] <= w[1] + 1e-3);
                    report.push(Check::new(
                        format!("{side_name}-density-trace"),
                        "boundary-density-trace",
                        monotone && gaps[0] <= TRACE_TOL,
                        gaps[0],
                        TRACE_TOL,
                    ));
                }
                Convexity::Neither => {
                    report.push(Check::inconclusive(
                        format!("{side_name}-density-trace"),
                        "boundary-density-trace",
                        f64::NAN,
                        "density trace requires a convex or concave flux",
                    ));
                }
            }
            // space-time average of |u - datum| over shrinking probes
            let avg = |y: f64| -> f64 {
                let grid = &field.grid;
                let weights = window_weights(field, s, t);
                let mut acc = 0.0;
                for &(j, w) in &weights {
                    let snap = &field.history[j];
                    for i in 0..grid.n_cells {
                        let x = grid.cell_center(i);
                        let inside = match side {
                            Side::Left => x < y,
                            Side::Right => x > 1.0 - y,
                        };
                        if inside {
                            acc += w * grid.dx * (snap.u[i] - datum_fn(snap.t)).abs();
                        }
                    }
                }
                acc / y
            };
            let mut ys = Vec::new();
            let mut y = 0.25;
            while y >= 8.0 * field.grid.dx {
                ys.push(y);
                y *= 0.5;
            }
            if ys.len() >= 3 {
                let vals: Vec<f64> = ys.iter().map(|&y| avg(y)).collect();
                let decreasing = vals.windows(2).all(|w| w[1] <= w[0] + 5e-3);
                let last = *vals.last().unwrap();
                report.push(Check::new(
                    format!("{side_name}-spacetime-average"),
                    "space-time-boundary-average",
                    decreasing && last <= 0.7 * vals[0] + 5e-3,
                    last,
                    0.7 * vals[0] + 5e-3,
                ));
            }
        } else {
            // Otto inequalities with boundary pairs anchored at the datum
            let flux = &scenario.flux;
            let otto_pairs = [
                EntropyPair::quadratic(flux, datum),
                EntropyPair::regularized_boundary(flux, datum, 0.05).unwrap(),
                EntropyPair::regularized_boundary(flux, datum, 0.02).unwrap(),
                EntropyPair::one_sided_minus(flux, datum),
                EntropyPair::one_sided_plus(flux, datum),
            ];
            if !datum_const {
                report.push(Check::inconclusive(
                    format!("{side_name}-otto-inequality"),
                    "otto-boundary-inequality",
                    f64::NAN,
                    "time-dependent datum: sampled at the window midpoint only",
                ));
            }
            let mut worst = f64::NEG_INFINITY;
            for p in &otto_pairs {
                let a1 = band_time_average(field, window, bands[0], |u| p.q(u));
                // left boundary needs Q ≤ 0, right needs Q ≥ 0
                let signed = match side {
                    Side::Left => a1,
                    Side::Right => -a1,
                };
                worst = worst.max(signed);
            }
            report.push(Check::new(
                format!("{side_name}-otto-inequality"),
                "otto-boundary-inequality",
                worst <= OTTO_SLACK,
                worst,
                OTTO_SLACK,
            ));
            // detachment magnitude, reported for inspection
            let trace = band_time_average(field, window, bands[0], |u| u);
            report.push(Check::inconclusive(
                format!("{side_name}-trace-vs-datum"),
                "boundary-density-trace",
                (trace - datum).abs(),
                "informational: integrable side may detach from the datum",
            ));
        }
    }
    Ok(report)
}

#[derive(Clone, Copy, PartialEq)]
enum Side {
    Left,
    Right,
}

impl Side {
    fn name(&self) -> &'static str {
        match self {
            Side::Left => "left",
            Side::Right => "right",
        }
    }
}

/// First `count` unpinned cells from the given wall, nearest first.
fn side_bands(field: &Field, side: Side, count: usize) -> Vec<usize> {
    let n = field.grid.n_cells;
    let mut out = Vec::with_capacity(count);
    match side {
        Side::Left => {
            let mut i = 0;
            while out.len() < count && i < n {
                if !field.grid.is_pinned(i) {
                    out.push(i);
                }
                i += 1;
            }
        }
        Side::Right => {
            let mut i = n;
            while out.len() < count && i > 0 {
                i -= 1;
                if !field.grid.is_pinned(i) {
                    out.push(i);
                }
            }
        }
    }
    out
}

/// L¹ stability against a second run differing only in its initial datum:
/// at every snapshot time the distance may not exceed the initial distance
/// by more than [`CONTRACTION_SLACK_CELLS`] cells' worth of mass.
pub fn contraction_check(field_u: &Field, field_v: &Field) -> Result<DiagnosticsReport, String> {
    if field_u.grid.n_cells != field_v.grid.n_cells {
        return Err(format!(
            "grid mismatch: {} vs {} cells",
            field_u.grid.n_cells, field_v.grid.n_cells
        ));
    }
    if field_u.history.len() != field_v.history.len() {
        return Err("snapshot schedules differ".into());
    }
    let dx = field_u.grid.dx;
    let dist = |a: &[f64], b: &[f64]| -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>() * dx
    };
    let d0 = dist(&field_u.history[0].u, &field_v.history[0].u);
    let slack = CONTRACTION_SLACK_CELLS * dx;
    let mut worst = f64::NEG_INFINITY;
    for (a, b) in field_u.history.iter().zip(&field_v.history).skip(1) {
        if (a.t - b.t).abs() > 1e-12 {
            return Err("snapshot times differ".into());
        }
        worst = worst.max(dist(&a.u, &b.u) - d0);
    }
    let mut report = DiagnosticsReport::new(Regime::NonIntegrable);
    report.push(Check::new(
        "l1-contraction",
        "l1-contraction",
        worst <= slack,
        worst,
        slack,
    ));
    Ok(report)
}

/// `∫ |u(t) - u₀| dx` must decrease towards `t → 0` along the early
/// snapshots, within a two-cell slack.
pub fn initial_continuity(field: &Field, scenario: &Scenario) -> DiagnosticsReport {
    let dx = field.grid.dx;
    let u0 = &field.history[0].u;
    let mut early: Vec<(f64, f64)> = field
        .history
        .iter()
        .skip(1)
        .filter(|s| s.t <= 0.5 * scenario.t_end + 1e-13)
        .map(|s| {
            let d: f64 = s.u.iter().zip(u0).map(|(a, b)| (a - b).abs()).sum::<f64>() * dx;
            (s.t, d)
        })
        .collect();
    early.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    early.truncate(6);
    let mut report = DiagnosticsReport::new(regime(scenario));
    if early.len() < 2 {
        report.push(Check::inconclusive(
            "initial-continuity",
            "initial-l1-continuity",
            f64::NAN,
            "needs at least two early snapshots",
        ));
        return report;
    }
    let slack = 2.0 * dx;
    let monotone = early.windows(2).all(|w| w[0].1 <= w[1].1 + slack);
    report.push(Check::new(
        "initial-continuity",
        "initial-l1-continuity",
        monotone,
        early[0].1,
        early.last().unwrap().1 + slack,
    ));
    report
}

/// Manufactured fields for negative controls.
pub mod manufactured {
    use crate::fv::{Field, Grid, Snapshot};
    use crate::model::{Flux, Profile, Scenario};

    /// A frozen entropy-violating jump: the separating states `(1, 0)` should
    /// open a rarefaction, holding them fixed violates the entropy
    /// inequality for anchors between the states.
    pub fn expansion_shock(n_cells: usize, t_end: f64, n_snapshots: usize) -> (Scenario, Field) {
        let scenario = Scenario::riemann(Flux::QuadraticTraffic, 1.0, 0.0, 0.5, t_end);
        let grid = Grid::new(&scenario, n_cells).unwrap();
        let u: Vec<f64> = (0..n_cells)
            .map(|i| if grid.cell_center(i) < 0.5 { 1.0 } else { 0.0 })
            .collect();
        let history = (0..=n_snapshots)
            .map(|j| Snapshot { t: t_end * j as f64 / n_snapshots as f64, u: u.clone() })
            .collect();
        (scenario, Field::from_snapshots(grid, history))
    }

    /// A field frozen at the left datum regardless of the equation; its
    /// relaxation energy diverges under refinement whenever the far datum
    /// differs and the rate is non-integrable there.
    pub fn constant_alpha(scenario: &Scenario, n_cells: usize, n_snapshots: usize) -> Field {
        let grid = Grid::new(scenario, n_cells).unwrap();
        let alpha = scenario.boundary.alpha(0.0);
        let u = vec![alpha; n_cells];
        let history = (0..=n_snapshots)
            .map(|j| Snapshot {
                t: scenario.t_end * j as f64 / n_snapshots as f64,
                u: u.clone(),
            })
            .collect();
        Field::from_snapshots(grid, history)
    }

    /// Smooth manufactured solution `u = 0.5 + a sin(2πx) e^{-t}` with the
    /// forcing folded into the relaxation target, so it solves the balance
    /// law exactly; entropy residuals must vanish under refinement.
    pub fn smooth_forced(gamma: f64, amplitude: f64, t_end: f64) -> Scenario {
        use crate::model::boundary::{TargetFn, TimeFn};
        use std::f64::consts::PI;
        use std::sync::Arc;
        let relax = crate::model::RelaxationProfile::canonical(gamma).unwrap();
        let relax_for_rho = relax.clone();
        let exact = move |t: f64, x: f64| 0.5 + amplitude * (2.0 * PI * x).sin() * (-t).exp();
        let rho = move |t: f64, x: f64| {
            let u = exact(t, x);
            let u_t = -amplitude * (2.0 * PI * x).sin() * (-t).exp();
            let u_x = 2.0 * PI * amplitude * (2.0 * PI * x).cos() * (-t).exp();
            let j_x = (1.0 - 2.0 * u) * u_x;
            u + (u_t + j_x) / relax_for_rho.value(x)
        };
        let u0 = move |x: f64| exact(0.0, x);
        Scenario {
            flux: Flux::QuadraticTraffic,
            relax,
            boundary: crate::model::BoundaryData {
                alpha: TimeFn::Constant(0.5),
                beta: TimeFn::Constant(0.5),
                rho: TargetFn::Custom {
                    f: Arc::new(rho),
                    lo: 0.5 - 2.0 * amplitude,
                    hi: 0.5 + 2.0 * amplitude,
                    time_dependent: true,
                },
            },
            u0: Profile::Custom {
                f: Arc::new(u0),
                lo: 0.5 - amplitude,
                hi: 0.5 + amplitude,
            },
            t_end,
            gamma: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fv::{solve, SolveOptions};
    use crate::model::Profile;

    fn equilibrium() -> (Scenario, Field) {
        let s = Scenario::canonical(2.0, 0.5, 0.5, Profile::Constant(0.5), 1.0).unwrap();
        let times: Vec<f64> = (1..=16).map(|j| j as f64 / 16.0).collect();
        let run = solve(&s, 64, &times, &SolveOptions::default()).unwrap();
        (s, run.field)
    }

    #[test]
    fn equilibrium_passes_every_entropy_check() {
        let (s, field) = equilibrium();
        let report = entropy_residual(&field, &s, &build_k_grid(&s), &TestFunctionFamily::interior(1.0));
        assert!(report.all_passed(), "{}", report.summary());
        // residuals are numerically zero, not merely within slack
        for c in &report.checks {
            assert!(c.value <= 1e-10, "{}: {}", c.name, c.value);
        }
    }

    #[test]
    fn admissible_shock_dissipates_entropy() {
        // colliding states (0, 1): residual strictly negative for anchors
        // between the states
        let s = Scenario::riemann(crate::model::Flux::QuadraticTraffic, 0.0, 1.0, 0.5, 0.5);
        let times: Vec<f64> = (1..=16).map(|j| 0.5 * j as f64 / 16.0).collect();
        let run = solve(&s, 128, &times, &SolveOptions::default()).unwrap();
        let report = entropy_residual(
            &run.field,
            &s,
            &build_k_grid(&s),
            &TestFunctionFamily::interior(0.5),
        );
        assert!(report.all_passed(), "{}", report.summary());
        let r = kruzhkov_weak_residual(
            &run.field,
            &s,
            0.5,
            TimeTest::Bump { t0: 0.1, t1: 0.4 },
            SpaceTest::Bump { center: 0.5, width: 0.2 },
            false,
        );
        assert!(r < -1e-3, "expected strict dissipation, got {r}");
    }

    #[test]
    fn frozen_expansion_shock_fails_the_entropy_check() {
        let (s, field) = manufactured::expansion_shock(128, 0.5, 16);
        let report = entropy_residual(
            &field,
            &s,
            &build_k_grid(&s),
            &TestFunctionFamily::interior(0.5),
        );
        assert!(!report.all_passed(), "violation must be detected");
        // the violation is order one, far above the consistency slack
        let worst = report
            .checks
            .iter()
            .map(|c| c.value)
            .fold(f64::NEG_INFINITY, f64::max);
        assert!(worst > 0.05, "violation {worst} unexpectedly small");
    }

    #[test]
    fn equilibrium_energy_is_zero_and_traces_sit_on_data() {
        let (s, field) = equilibrium();
        assert!(energy_bound_value(&field, &s) < 1e-20);
        let pairs = vec![
            EntropyPair::linear(&s.flux),
            EntropyPair::quadratic(&s.flux, 0.5),
        ];
        let report = boundary_trace(&field, &s, &pairs, (0.5, 1.0)).unwrap();
        assert!(report.all_passed(), "{}", report.summary());
        for c in report.checks.iter().filter(|c| c.name.contains("density-trace")) {
            assert!(c.value < 1e-12);
        }
    }

    #[test]
    fn divergent_manufactured_energy_fails_refinement() {
        let s = Scenario::canonical(2.0, 0.8, 0.2, Profile::Constant(0.8), 1.0).unwrap();
        let vals: Vec<f64> = [64usize, 128, 256]
            .iter()
            .map(|&n| {
                let f = manufactured::constant_alpha(&s, n, 8);
                energy_bound_value(&f, &s)
            })
            .collect();
        // the weighted mismatch concentrates at the far wall and doubles with
        // the resolution
        assert!(vals[1] > 1.6 * vals[0] && vals[2] > 1.6 * vals[1], "{vals:?}");
        let check = energy_refinement_check(&vals, Regime::NonIntegrable);
        assert_eq!(check.status, crate::diagnostics::CheckStatus::Fail);
    }

    #[test]
    fn contraction_check_trivial_and_mismatch() {
        let (_, field) = equilibrium();
        let report = contraction_check(&field, &field).unwrap();
        assert!(report.all_passed());
        let s2 = Scenario::canonical(2.0, 0.5, 0.5, Profile::Constant(0.5), 1.0).unwrap();
        let other = solve(&s2, 32, &[1.0], &SolveOptions::default()).unwrap();
        assert!(contraction_check(&field, &other.field).is_err());
    }

    #[test]
    fn initial_continuity_on_equilibrium_and_step_data() {
        let (s, field) = equilibrium();
        let report = initial_continuity(&field, &s);
        assert!(report.all_passed(), "{}", report.summary());

        let s = Scenario::canonical(
            2.0,
            0.8,
            0.2,
            Profile::Step { left: 0.2, right: 0.8, at: 0.5 },
            1.0,
        )
        .unwrap();
        let run = solve(&s, 128, &[1e-3, 1e-2, 1e-1], &SolveOptions::default()).unwrap();
        let report = initial_continuity(&run.field, &s);
        assert!(report.all_passed(), "{}", report.summary());
    }

    #[test]
    fn smooth_forced_solution_residual_decays_under_refinement() {
        let s = manufactured::smooth_forced(2.0, 0.1, 0.5);
        let mut worst = Vec::new();
        for n in [64usize, 128, 256] {
            let times: Vec<f64> = (1..=2 * n / 16).map(|j| 0.5 * j as f64 * 16.0 / (2 * n) as f64).collect();
            let run = solve(&s, n, &times, &SolveOptions::default()).unwrap();
            let report = entropy_residual(
                &run.field,
                &s,
                &build_k_grid(&s),
                &TestFunctionFamily::interior(0.5),
            );
            assert!(report.all_passed(), "n={n}: {}", report.summary());
            worst.push(
                report
                    .checks
                    .iter()
                    .map(|c| c.value.abs())
                    .fold(0.0f64, f64::max),
            );
        }
        // positive-part residuals shrink roughly linearly with dx + Δt
        assert!(
            worst[2] <= 0.7 * worst[0] + 1e-12,
            "no decay under refinement: {worst:?}"
        );
    }

    #[test]
    fn reports_are_deterministic() {
        let (s, field) = equilibrium();
        let a = entropy_residual(&field, &s, &build_k_grid(&s), &TestFunctionFamily::interior(1.0));
        let b = entropy_residual(&field, &s, &build_k_grid(&s), &TestFunctionFamily::interior(1.0));
        assert_eq!(a.checks.len(), b.checks.len());
        for (x, y) in a.checks.iter().zip(&b.checks) {
            assert_eq!(x.name, y.name);
            assert_eq!(x.value.to_bits(), y.value.to_bits());
        }
    }
}
