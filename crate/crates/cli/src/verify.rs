//! Randomized checks of the spectral relations and solver equivalences
//! against dense oracles.

use std::fmt;

use pgsor_core::solvers::{complex_scale, gsor_solve, GsorStepper};
use pgsor_core::spectral::{gsor_convergence_interval, map_lambda, pgsor_optimal_params};
use pgsor_core::{PairVector, ProblemInstance, SolverSettings, SparseMatrix, SpectralEstimate};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::commands::UsageError;
use crate::oracle::{s_spectrum, s_tilde_spectrum};
use crate::random::{random_instance, random_pair};

pub const MAX_DIM: usize = 8;
pub const MAP_TOL: f64 = 1e-10;
pub const ITERATE_TOL: f64 = 1e-12;
pub const ITERATE_STEPS: usize = 10;
/// `(√2-1)/(√2+1)`, rounded up to four digits.
pub const PGSOR_RHO_BOUND: f64 = 0.1716;
pub const OMEGA_SAMPLES: [f64; 3] = [0.5, 1.0, 2.0];

#[derive(Clone, Debug, PartialEq)]
pub struct PropertyResult {
    pub name: &'static str,
    pub passed: usize,
    pub trials: usize,
    /// Largest violation measure seen (error or margin, property specific).
    pub worst: f64,
}

impl PropertyResult {
    pub fn ok(&self) -> bool {
        self.passed == self.trials
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyReport {
    pub seed: u64,
    pub properties: Vec<PropertyResult>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.properties.iter().all(PropertyResult::ok)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "seed {}", self.seed)?;
        for p in &self.properties {
            writeln!(
                f,
                "{:<24} {:>5}/{:<5} {}  worst={:.3e}",
                p.name,
                p.passed,
                p.trials,
                if p.ok() { "PASS" } else { "FAIL" },
                p.worst
            )?;
        }
        Ok(())
    }
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Sorted spectrum of `S̃_ω` equals the image of the spectrum of `S` under
/// `μ ↦ (ωμ-1)/(ω+μ)`. Returns the largest deviation.
pub fn check_eigen_map(w: &[f64], t: &[f64], n: usize, omega: f64) -> f64 {
    let mut mapped: Vec<f64> = s_spectrum(n, w, t).iter().map(|&mu| map_lambda(omega, mu)).collect();
    mapped.sort_by(f64::total_cmp);
    let direct = s_tilde_spectrum(n, w, t, omega);
    mapped.iter().zip(&direct).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
}

pub fn eigen_map_trials(seed: u64, trials: usize) -> PropertyResult {
    let mut rng = rng_for(seed, 1);
    let mut passed = 0;
    let mut worst = 0.0f64;
    for k in 0..trials {
        let pair = random_pair(&mut rng, MAX_DIM);
        let omega = OMEGA_SAMPLES[k % OMEGA_SAMPLES.len()];
        let err = check_eigen_map(&pair.w_dense, &pair.t_dense, pair.n, omega);
        worst = worst.max(err);
        if err <= MAP_TOL {
            passed += 1;
        }
    }
    PropertyResult {
        name: "eigenvalue map",
        passed,
        trials,
        worst,
    }
}

/// Outcome of the optimal-parameter bound check for one pair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundCheck {
    pub alpha: f64,
    pub predicted_rho: f64,
    pub oracle_rho_tilde: f64,
}

impl BoundCheck {
    pub fn ok(&self) -> bool {
        self.alpha > 0.828
            && self.alpha <= 1.0
            && self.predicted_rho < PGSOR_RHO_BOUND + 1e-12
            && self.oracle_rho_tilde < 1.0
    }
}

pub fn check_bound(w: &[f64], t: &[f64], n: usize) -> BoundCheck {
    let mu = s_spectrum(n, w, t);
    let est = SpectralEstimate::from_bounds(mu[0].max(0.0), mu[n - 1].max(mu[0].max(0.0)))
        .expect("psd pencil has nonnegative spectrum");
    let choice = pgsor_optimal_params(&est).expect("T is nonzero");
    let omega = choice.omega.expect("pgsor choice has omega");
    let tilde = s_tilde_spectrum(n, w, t, omega);
    BoundCheck {
        alpha: choice.alpha,
        predicted_rho: choice.predicted_rho,
        oracle_rho_tilde: tilde.iter().map(|x| x.abs()).fold(0.0, f64::max),
    }
}

pub fn bound_trials(seed: u64, trials: usize) -> PropertyResult {
    let mut rng = rng_for(seed, 2);
    let mut passed = 0;
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let pair = random_pair(&mut rng, MAX_DIM);
        let c = check_bound(&pair.w_dense, &pair.t_dense, pair.n);
        worst = worst.max(c.predicted_rho);
        if c.ok() {
            passed += 1;
        }
    }
    PropertyResult {
        name: "optimal pgsor bound",
        passed,
        trials,
        worst,
    }
}

/// Largest entrywise gap between `count` PGSOR iterates and GSOR iterates on
/// the system scaled by `ω - i`, both from the zero vector.
pub fn check_scaling_equivalence(prob: &ProblemInstance, alpha: f64, omega: f64, count: usize) -> pgsor_core::Result<f64> {
    let pgsor = GsorStepper::pgsor(prob, alpha, omega)?;
    let scaled = complex_scale(prob, omega, 1.0)?;
    let gsor = GsorStepper::gsor(&scaled, alpha)?;
    let start = PairVector::zeros(prob.dim());
    let a = pgsor.iterates(start.clone(), count);
    let b = gsor.iterates(start, count);
    Ok(a.iter().zip(&b).map(|(x, y)| x.max_abs_diff(y)).fold(0.0, f64::max))
}

pub fn scaling_trials(seed: u64, trials: usize) -> PropertyResult {
    let mut rng = rng_for(seed, 3);
    let mut passed = 0;
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let (_, prob) = random_instance(&mut rng, MAX_DIM);
        let alpha = rng.random_range(0.5..1.0);
        let omega = rng.random_range(0.25..4.0);
        match check_scaling_equivalence(&prob, alpha, omega, ITERATE_STEPS) {
            Ok(gap) => {
                worst = worst.max(gap);
                if gap <= ITERATE_TOL {
                    passed += 1;
                }
            }
            Err(_) => worst = f64::INFINITY,
        }
    }
    PropertyResult {
        name: "scaling equivalence",
        passed,
        trials,
        worst,
    }
}

/// GSOR on `W = I`, `T = diag(d)` with `max d = μ`: returns whether the runs
/// at `0.9` and `1.1` times the interval end converge and diverge.
pub fn check_boundary(diag: &[f64]) -> (bool, bool) {
    let n = diag.len();
    let mu = diag.iter().copied().fold(0.0, f64::max);
    let prob = ProblemInstance::new(
        SparseMatrix::identity(n),
        SparseMatrix::diagonal(diag),
        vec![1.0; n],
        vec![1.0; n],
    )
    .expect("diagonal instance is valid");
    let (_, end) = gsor_convergence_interval(mu);
    let run = |alpha: f64| {
        gsor_solve(&prob, &SolverSettings::new(alpha).with_max_iter(20_000))
            .map(|(_, r)| r)
            .expect("identity factorizes")
    };
    let inside = run(0.9 * end);
    let outside = run(1.1 * end);
    (inside.converged, outside.diverged)
}

pub fn boundary_trials(seed: u64, trials: usize) -> PropertyResult {
    let mut rng = rng_for(seed, 4);
    let mut passed = 0;
    for _ in 0..trials {
        let n = rng.random_range(1..=MAX_DIM);
        let mu = 10f64.powf(rng.random_range(-1.0..1.0));
        let mut diag: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..mu)).collect();
        diag[rng.random_range(0..n)] = mu;
        let (conv, div) = check_boundary(&diag);
        if conv && div {
            passed += 1;
        }
    }
    PropertyResult {
        name: "convergence boundary",
        passed,
        trials,
        worst: (trials - passed) as f64,
    }
}

/// Runs all property suites with `trials` random cases each.
pub fn cmd_verify(seed: u64, trials: usize) -> anyhow::Result<VerifyReport> {
    if trials == 0 {
        return Err(UsageError("trials must be at least 1".into()).into());
    }
    Ok(VerifyReport {
        seed,
        properties: vec![
            eigen_map_trials(seed, trials),
            bound_trials(seed, trials),
            scaling_trials(seed, trials),
            boundary_trials(seed, trials),
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundary_on_fixed_diagonals() {
        for mu in [1.0, 3.0, 10.0] {
            assert_eq!(check_boundary(&[mu]), (true, true));
        }
    }

    #[test]
    fn small_run_passes() {
        let r = cmd_verify(3, 10).unwrap();
        assert!(r.all_passed(), "{r}");
    }

    #[test]
    fn zero_trials_is_usage_error() {
        let err = cmd_verify(0, 0).unwrap_err();
        assert!(err.downcast_ref::<UsageError>().is_some());
    }
}
