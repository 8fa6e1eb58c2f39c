// dev probe: calibrate the entropy-residual slack with layer-resolving schedules
fn main() {
    use relaxlaw::diagnostics::{build_k_grid, diagnostic_times, kruzhkov_weak_residual, TestFunctionFamily};
    use relaxlaw::fv::{solve, SolveOptions};
    use relaxlaw::model::{Flux, Profile, Scenario};

    let mut global_worst: f64 = f64::NEG_INFINITY;
    let mut run_case = |name: &str, s: &Scenario, n: usize| {
        let times = diagnostic_times(s, n, 32);
        let run = solve(s, n, &times, &SolveOptions::default()).unwrap();
        let dx = 1.0 / n as f64;
        let gap = s.t_end / 32.0;
        let fam = TestFunctionFamily::interior(s.t_end);
        let ks = build_k_grid(s);
        let mut worst = f64::NEG_INFINITY;
        for &(phi, psi) in &fam.tests {
            for &k in &ks {
                let r = kruzhkov_weak_residual(&run.field, s, k, phi, psi, false);
                worst = worst.max(r / (dx + gap));
            }
        }
        println!("{name} n={n}: worst normalized residual = {worst:.4}  (snapshots {})", times.len());
        global_worst = global_worst.max(worst);
    };

    for n in [64usize, 128, 256, 512] {
        let shock = Scenario::riemann(Flux::QuadraticTraffic, 0.0, 1.0, 0.5, 0.5);
        run_case("shock(0,1)", &shock, n);
        let rare = Scenario::riemann(Flux::QuadraticTraffic, 1.0, 0.0, 0.5, 0.4);
        run_case("rarefaction(1,0)", &rare, n);
        let off2 = Scenario::riemann(Flux::QuadraticTraffic, 0.1, 0.7, 0.6, 0.4);
        run_case("shock(0.1,0.7)", &off2, n);
        let canon = Scenario::canonical(2.0, 0.8, 0.2, Profile::Constant(0.5), 1.0).unwrap();
        run_case("canonical-g2", &canon, n);
        let canon_s = Scenario::canonical(2.0, 0.8, 0.2, Profile::Step{left:0.1,right:0.9,at:0.5}, 1.0).unwrap();
        run_case("canonical-g2-step", &canon_s, n);
        let canon_h = Scenario::canonical(0.5, 0.8, 0.2, Profile::Constant(0.5), 1.0).unwrap();
        run_case("canonical-g05", &canon_h, n);
        let canon_g1 = Scenario::canonical(1.0, 0.9, 0.1, Profile::Constant(0.3), 1.0).unwrap();
        run_case("canonical-g1", &canon_g1, n);
    }
    println!("GLOBAL WORST: {global_worst:.4}");
}
