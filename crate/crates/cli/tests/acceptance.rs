//! Acceptance criteria 1–9. Each test prints one `PASS`/`FAIL` line for its
//! criterion (plus detail lines) directly to stdout so the lines survive
//! output capture.

use std::io::Write;
use std::time::{Duration, Instant};

use pgsor_cli::presets::{Reference, REFERENCES};
use pgsor_cli::verify::{bound_trials, check_boundary, check_scaling_equivalence, eigen_map_trials, ITERATE_STEPS, ITERATE_TOL};
use pgsor_cli::{cmd_params, random::random_instance};
use pgsor_core::problems::generate;
use pgsor_core::solvers::{gsor_solve, mhss_solve, pgsor_solve};
use pgsor_core::spectral::{
    estimate_spectrum, gsor_optimal_alpha, observed_convergence_factor, pgsor_optimal_params, rho_s_tilde,
};
use pgsor_core::{ExampleId, PowerOptions, ProblemConfig, SolverSettings};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PARAM_TOL: f64 = 0.005;
const IT_TOL: usize = 2;
const MHSS_IT_TOL: usize = 3;
const OBSERVED_TOL: f64 = 0.05;
const SEED: u64 = 2024;

/// Detail lines of one criterion, written in one block after the verdict.
#[derive(Default)]
struct Log(Vec<String>);

impl Log {
    fn line(&mut self, line: String) {
        self.0.push(line);
    }

    fn verdict(self, criterion: u8, title: &str, ok: bool, summary: &str) {
        let mut out = std::io::stdout().lock();
        let _ = writeln!(
            out,
            "criterion {criterion} [{}] {title}: {summary}",
            if ok { "PASS" } else { "FAIL" }
        );
        for l in self.0 {
            let _ = writeln!(out, "{l}");
        }
        let _ = out.flush();
    }
}

fn config(r: &Reference) -> ProblemConfig {
    ProblemConfig::new(r.example, r.m)
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

#[test]
fn criterion_1_parameter_table() {
    let mut log = Log::default();
    let start = Instant::now();
    let mut misses = Vec::new();
    for r in &REFERENCES {
        let rep = cmd_params(&config(r)).unwrap();
        let omega = rep.pgsor.omega.unwrap();
        let checks = [
            ("gsor alpha", rep.gsor.alpha, r.gsor_alpha),
            ("pgsor alpha", rep.pgsor.alpha, r.pgsor_alpha),
            ("pgsor omega", omega, r.pgsor_omega),
        ];
        for (what, got, want) in checks {
            let ok = close(got, want, PARAM_TOL);
            log.line(format!(
                "  example {} m={:<3} {what:<12} computed {got:.4} reference {want:.3} {}",
                r.example,
                r.m,
                if ok { "ok" } else { "MISS" }
            ));
            if !ok {
                misses.push(format!("ex{} m={} {what}", r.example, r.m));
            }
        }
    }
    let elapsed = start.elapsed();
    let ok = misses.is_empty() && elapsed < Duration::from_secs(30);
    log.verdict(
        1,
        "optimal parameters within 0.005",
        ok,
        &format!("{} misses {:?}, {:.1?}", misses.len(), misses, elapsed),
    );
    assert!(ok, "parameter mismatches: {misses:?}");
}

#[test]
fn criterion_2_gsor_pgsor_iterations() {
    let mut log = Log::default();
    let start = Instant::now();
    let mut misses = Vec::new();
    for r in &REFERENCES {
        let prob = generate(&config(r)).unwrap();
        let (_, g) = gsor_solve(&prob, &SolverSettings::new(r.gsor_alpha)).unwrap();
        let (_, p) = pgsor_solve(&prob, &SolverSettings::new(r.pgsor_alpha).with_omega(r.pgsor_omega)).unwrap();
        for (what, rep, want) in [("gsor", &g, r.gsor_iterations), ("pgsor", &p, r.pgsor_iterations)] {
            let ok = rep.converged && rep.iterations.abs_diff(want) <= IT_TOL;
            log.line(format!(
                "  example {} m={:<3} {what:<6} IT {:>3} reference {want:>3} {}",
                r.example,
                r.m,
                rep.iterations,
                if ok { "ok" } else { "MISS" }
            ));
            if !ok {
                misses.push(format!("ex{} m={} {what}", r.example, r.m));
            }
        }
    }
    let elapsed = start.elapsed();
    let ok = misses.is_empty() && elapsed < Duration::from_secs(60);
    log.verdict(
        2,
        "GSOR/PGSOR iteration counts within 2",
        ok,
        &format!("{} misses {:?}, {:.1?}", misses.len(), misses, elapsed),
    );
    assert!(ok, "iteration mismatches: {misses:?}");
}

#[test]
fn criterion_3_mhss_iterations() {
    let mut log = Log::default();
    let mut misses = Vec::new();
    for r in REFERENCES.iter().filter(|r| r.m == 16) {
        let prob = generate(&config(r)).unwrap();
        let (_, rep) = mhss_solve(&prob, &SolverSettings::new(r.mhss_alpha)).unwrap();
        let ok = rep.converged && rep.iterations.abs_diff(r.mhss_iterations) <= MHSS_IT_TOL;
        log.line(format!(
            "  example {} m=16 mhss alpha {:.3} IT {:>3} reference {:>3} {}",
            r.example,
            r.mhss_alpha,
            rep.iterations,
            r.mhss_iterations,
            if ok { "ok" } else { "MISS" }
        ));
        if !ok {
            misses.push(format!("ex{}", r.example));
        }
    }
    let ok = misses.is_empty();
    log.verdict(3, "MHSS iteration counts within 3", ok, &format!("{} misses {:?}", misses.len(), misses));
    assert!(ok);
}

#[test]
fn criterion_4_spectral_radius_table() {
    let mut log = Log::default();
    let mut misses = Vec::new();
    for r in &REFERENCES {
        let prob = generate(&config(r)).unwrap();
        let est = estimate_spectrum(&prob.w, &prob.t, &PowerOptions::default()).unwrap();
        let g = gsor_optimal_alpha(est.rho_s());
        let p = pgsor_optimal_params(&est).unwrap();
        for (what, got, want) in [("gsor", g.predicted_rho, r.gsor_rho), ("pgsor", p.predicted_rho, r.pgsor_rho)] {
            let ok = close(got, want, PARAM_TOL);
            log.line(format!(
                "  example {} m={:<3} {what:<6} predicted rho {got:.4} reference {want:.3} {}",
                r.example,
                r.m,
                if ok { "ok" } else { "MISS" }
            ));
            if !ok {
                misses.push(format!("ex{} m={} {what} rho", r.example, r.m));
            }
        }
        let (_, run) = gsor_solve(&prob, &SolverSettings::new(g.alpha)).unwrap();
        if run.iterations >= 6 {
            let obs = observed_convergence_factor(&run).unwrap();
            let ok = close(obs, g.predicted_rho, OBSERVED_TOL);
            log.line(format!(
                "  example {} m={:<3} gsor   observed rho {obs:.4} predicted {:.4} (IT {}) {}",
                r.example,
                r.m,
                g.predicted_rho,
                run.iterations,
                if ok { "ok" } else { "MISS" }
            ));
            if !ok {
                misses.push(format!("ex{} m={} observed", r.example, r.m));
            }
        }
    }
    let ok = misses.is_empty();
    log.verdict(
        4,
        "predicted rho within 0.005, observed within 0.05",
        ok,
        &format!("{} misses {:?}", misses.len(), misses),
    );
    assert!(ok, "spectral radius mismatches: {misses:?}");
}

#[test]
fn criterion_5_optimal_bound_suite() {
    let log = Log::default();
    let res = bound_trials(SEED, 200);
    log.verdict(
        5,
        "optimal PGSOR bound on 200 random pairs",
        res.ok(),
        &format!("{}/{} passed, largest predicted rho {:.6}", res.passed, res.trials, res.worst),
    );
    assert!(res.ok());
}

#[test]
fn criterion_6_eigenvalue_map() {
    let log = Log::default();
    let res = eigen_map_trials(SEED, 100);
    log.verdict(
        6,
        "eigenvalue map on 100 random pairs",
        res.ok(),
        &format!("{}/{} passed, worst deviation {:.3e}", res.passed, res.trials, res.worst),
    );
    assert!(res.ok());
}

#[test]
fn criterion_7_scaling_equivalence() {
    let mut log = Log::default();
    let mut worst = 0.0f64;
    let mut failures = 0;
    let prob = generate(&ProblemConfig::new(ExampleId::Helmholtz, 8)).unwrap();
    let est = estimate_spectrum(&prob.w, &prob.t, &PowerOptions::default()).unwrap();
    let p = pgsor_optimal_params(&est).unwrap();
    let gap = check_scaling_equivalence(&prob, p.alpha, p.omega.unwrap(), ITERATE_STEPS).unwrap();
    log.line(format!("  example 4 m=8 max gap {gap:.3e}"));
    worst = worst.max(gap);
    failures += usize::from(gap > ITERATE_TOL);

    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for _ in 0..20 {
        let (_, prob) = random_instance(&mut rng, 8);
        let alpha = rng.random_range(0.5..1.0);
        let omega = rng.random_range(0.25..4.0);
        let gap = check_scaling_equivalence(&prob, alpha, omega, ITERATE_STEPS).unwrap();
        worst = worst.max(gap);
        failures += usize::from(gap > ITERATE_TOL);
    }
    let ok = failures == 0;
    log.verdict(
        7,
        "PGSOR iterates equal GSOR on scaled system",
        ok,
        &format!("{failures} failures over 21 instances, worst gap {worst:.3e}"),
    );
    assert!(ok);
}

#[test]
fn criterion_8_convergence_boundary() {
    let mut log = Log::default();
    let mut failures = Vec::new();
    for mu in [1.0, 3.0, 10.0] {
        let (conv, div) = check_boundary(&[mu; 4]);
        log.line(format!("  mu={mu:<4} 0.9x converged={conv} 1.1x diverged={div}"));
        if !(conv && div) {
            failures.push(mu);
        }
    }
    let ok = failures.is_empty();
    log.verdict(8, "GSOR convergence boundary", ok, &format!("failures at mu {failures:?}"));
    assert!(ok);
}

#[test]
fn criterion_9_optimality_grid() {
    let mut log = Log::default();
    let mut failures = Vec::new();
    for ex in ExampleId::ALL {
        let prob = generate(&ProblemConfig::new(ex, 16)).unwrap();
        let est = estimate_spectrum(&prob.w, &prob.t, &PowerOptions::default()).unwrap();
        let w = pgsor_optimal_params(&est).unwrap().omega.unwrap();
        let best = rho_s_tilde(w, &est);
        let (lo, hi) = (w / 10.0, 10.0 * w);
        let min_grid = (0..1000)
            .map(|k| rho_s_tilde(lo + (hi - lo) * k as f64 / 999.0, &est))
            .fold(f64::INFINITY, f64::min);
        let ok = min_grid >= best - 1e-9;
        log.line(format!(
            "  example {ex} omega*={w:.4} rho~(omega*)={best:.6} grid min={min_grid:.6} {}",
            if ok { "ok" } else { "MISS" }
        ));
        if !ok {
            failures.push(ex.number());
        }
    }
    let ok = failures.is_empty();
    log.verdict(9, "omega* is optimal on a 1000-point grid", ok, &format!("failures {failures:?}"));
    assert!(ok);
}
