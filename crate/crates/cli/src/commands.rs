//! Implementations behind the `params`, `solve`, `bench` and `gen`
//! subcommands.

use std::fmt::{self, Write as _};
use std::path::Path;

use anyhow::{Context, Result};
use pgsor_core::linalg::{mm_write, write_vector};
use pgsor_core::problems::generate;
use pgsor_core::solvers::{gsor_solve, mhss_solve, pgsor_solve};
use pgsor_core::spectral::{
    approx_params, estimate_spectrum, gsor_optimal_alpha, gsor_rho, observed_convergence_factor, pgsor_optimal_params,
    pgsor_rho,
};
use pgsor_core::{ParamChoice, PowerOptions, ProblemConfig, ProblemInstance, SolverSettings, SpectralEstimate};
use rayon::prelude::*;

use crate::presets;
use crate::row::{BenchMethod, BenchRow};

/// Bad arguments; the binary exits with status 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

/// Largest grid accepted by `bench` unless overridden.
pub const DEFAULT_GRID_CAP: usize = 256;

#[derive(Clone, Debug, PartialEq)]
pub struct ParamsReport {
    pub config: ProblemConfig,
    pub spectrum: SpectralEstimate,
    pub gsor: ParamChoice,
    pub pgsor: ParamChoice,
    pub approx: ParamChoice,
    pub mhss_alpha: Option<f64>,
}

impl ParamsReport {
    fn from_instance(config: &ProblemConfig, prob: &ProblemInstance) -> Result<Self> {
        let spectrum = estimate_spectrum(&prob.w, &prob.t, &PowerOptions::default())
            .with_context(|| format!("estimating the spectrum of example {} (m={})", config.example, config.m))?;
        let pgsor = pgsor_optimal_params(&spectrum)?;
        Ok(ParamsReport {
            config: config.clone(),
            gsor: gsor_optimal_alpha(spectrum.rho_s()),
            pgsor,
            approx: approx_params(),
            mhss_alpha: presets::mhss_alpha(config.example, config.m),
            spectrum,
        })
    }

    /// Parameter summary with three decimals.
    pub fn render(&self) -> String {
        let mut s = String::new();
        let c = &self.config;
        let _ = writeln!(s, "example {} m={} n={}", c.example, c.m, c.n());
        let _ = writeln!(s, "  mu_min={:.4} mu_max={:.4}", self.spectrum.mu_min, self.spectrum.mu_max);
        let _ = writeln!(s, "  gsor   alpha={:.3} rho={:.3}", self.gsor.alpha, self.gsor.predicted_rho);
        let _ = writeln!(
            s,
            "  pgsor  alpha={:.3} omega={:.3} rho={:.3}",
            self.pgsor.alpha,
            self.pgsor.omega.unwrap_or(f64::NAN),
            self.pgsor.predicted_rho
        );
        match self.mhss_alpha {
            Some(a) => {
                let _ = writeln!(s, "  mhss   alpha={a:.3}");
            }
            None => {
                let _ = writeln!(s, "  mhss   alpha=n/a");
            }
        }
        s
    }

    /// Rows for the three parametrized methods, without run data.
    pub fn rows(&self) -> Vec<BenchRow> {
        let c = &self.config;
        let row = |method, p: &ParamChoice| BenchRow {
            example: c.example.number(),
            m: c.m,
            method,
            alpha: Some(p.alpha),
            omega: p.omega,
            iterations: 0,
            converged: false,
            final_residual: None,
            predicted_rho: Some(p.predicted_rho),
            observed_rho: None,
        };
        vec![
            row(BenchMethod::Gsor, &self.gsor),
            row(BenchMethod::Pgsor, &self.pgsor),
            row(BenchMethod::PgsorApprox, &self.approx),
        ]
    }
}

pub fn cmd_params(config: &ProblemConfig) -> Result<ParamsReport> {
    let prob = generate(config).with_context(|| format!("generating example {} (m={})", config.example, config.m))?;
    ParamsReport::from_instance(config, &prob)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveSpec {
    pub method: BenchMethod,
    pub alpha: Option<f64>,
    pub omega: Option<f64>,
    pub tol: f64,
    pub max_iter: usize,
}

impl SolveSpec {
    pub fn new(method: BenchMethod) -> Self {
        SolveSpec {
            method,
            alpha: None,
            omega: None,
            tol: 1e-6,
            max_iter: 10_000,
        }
    }
}

/// Fills missing parameters and returns `(α, ω, predicted ρ)`.
fn resolve(
    spec: &SolveSpec,
    config: &ProblemConfig,
    spectrum: impl FnOnce() -> Result<SpectralEstimate>,
) -> Result<(f64, Option<f64>, Option<f64>)> {
    match spec.method {
        BenchMethod::Gsor => {
            let est = spectrum()?;
            let alpha = spec.alpha.unwrap_or_else(|| gsor_optimal_alpha(est.rho_s()).alpha);
            Ok((alpha, None, Some(gsor_rho(alpha, est.mu_min, est.mu_max))))
        }
        BenchMethod::Pgsor => {
            let est = spectrum()?;
            let (alpha, omega) = match (spec.alpha, spec.omega) {
                (Some(a), Some(w)) => (a, w),
                (a, w) => {
                    let best = pgsor_optimal_params(&est)?;
                    let omega = w.or(best.omega).expect("pgsor choice has omega");
                    let alpha = match (a, w) {
                        (Some(a), _) => a,
                        (None, Some(w)) => {
                            let xi = pgsor_core::spectral::rho_s_tilde(w, &est).max(0.0);
                            gsor_optimal_alpha(xi).alpha
                        }
                        (None, None) => best.alpha,
                    };
                    (alpha, omega)
                }
            };
            Ok((alpha, Some(omega), Some(pgsor_rho(alpha, omega, &est))))
        }
        BenchMethod::PgsorApprox => {
            let preset = approx_params();
            let alpha = spec.alpha.unwrap_or(preset.alpha);
            let omega = spec.omega.or(preset.omega);
            let predicted = if spec.alpha.is_none() && spec.omega.is_none() {
                Some(preset.predicted_rho)
            } else {
                None
            };
            Ok((alpha, omega, predicted))
        }
        BenchMethod::Mhss => {
            let alpha = match spec.alpha.or_else(|| presets::mhss_alpha(config.example, config.m)) {
                Some(a) => a,
                None => {
                    return Err(usage(format!(
                        "no built-in MHSS alpha for example {} at m={}; pass --alpha",
                        config.example, config.m
                    )))
                }
            };
            Ok((alpha, None, None))
        }
    }
}

fn solve_instance(
    config: &ProblemConfig,
    prob: &ProblemInstance,
    spec: &SolveSpec,
    spectrum: impl FnOnce() -> Result<SpectralEstimate>,
) -> Result<BenchRow> {
    if spec.tol <= 0.0 || !spec.tol.is_finite() {
        return Err(usage(format!("tolerance must be positive, got {}", spec.tol)));
    }
    let (alpha, omega, predicted_rho) = resolve(spec, config, spectrum)?;
    let mut settings = SolverSettings::new(alpha).with_tol(spec.tol).with_max_iter(spec.max_iter);
    if let Some(w) = omega {
        settings = settings.with_omega(w);
    }
    let (_, report) = match spec.method {
        BenchMethod::Gsor => gsor_solve(prob, &settings),
        BenchMethod::Pgsor | BenchMethod::PgsorApprox => pgsor_solve(prob, &settings),
        BenchMethod::Mhss => mhss_solve(prob, &settings),
    }
    .with_context(|| format!("running {} on example {} (m={})", spec.method, config.example, config.m))?;
    Ok(BenchRow {
        example: config.example.number(),
        m: config.m,
        method: spec.method,
        alpha: Some(alpha),
        omega,
        iterations: report.iterations,
        converged: report.converged,
        final_residual: Some(report.final_residual()),
        predicted_rho,
        observed_rho: observed_convergence_factor(&report).ok(),
    })
}

/// Generates the instance and runs one solve. A run that stops without
/// converging still yields its row.
pub fn cmd_solve(config: &ProblemConfig, spec: &SolveSpec) -> Result<BenchRow> {
    let prob = generate(config).with_context(|| format!("generating example {} (m={})", config.example, config.m))?;
    solve_instance(config, &prob, spec, || {
        Ok(estimate_spectrum(&prob.w, &prob.t, &PowerOptions::default())?)
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchSpec {
    pub examples: Vec<pgsor_core::ExampleId>,
    pub grids: Vec<usize>,
    pub methods: Vec<BenchMethod>,
    pub tol: f64,
    pub max_iter: usize,
    /// Explicit MHSS `α`, overriding the built-in table.
    pub mhss_alpha: Option<f64>,
    pub grid_cap: usize,
}

impl BenchSpec {
    pub fn new(examples: Vec<pgsor_core::ExampleId>, grids: Vec<usize>, methods: Vec<BenchMethod>) -> Self {
        BenchSpec {
            examples,
            grids,
            methods,
            tol: 1e-6,
            max_iter: 10_000,
            mhss_alpha: None,
            grid_cap: DEFAULT_GRID_CAP,
        }
    }
}

fn failed_row(config: &ProblemConfig, method: BenchMethod) -> BenchRow {
    BenchRow {
        example: config.example.number(),
        m: config.m,
        method,
        alpha: None,
        omega: None,
        iterations: 0,
        converged: false,
        final_residual: None,
        predicted_rho: None,
        observed_rho: None,
    }
}

/// Runs every (example, grid, method) combination. Problems run in parallel;
/// rows come back ordered by example, grid, then method. Runs that fail are
/// recorded as unconverged rows.
pub fn cmd_bench(spec: &BenchSpec) -> Result<Vec<BenchRow>> {
    if spec.methods.is_empty() {
        return Err(usage("no methods given"));
    }
    if spec.examples.is_empty() {
        return Err(usage("no examples given"));
    }
    if spec.grids.is_empty() {
        return Err(usage("no grid sizes given"));
    }
    if let Some(&m) = spec.grids.iter().find(|&&m| m == 0 || m > spec.grid_cap) {
        return Err(usage(format!("grid size {m} outside 1..={}", spec.grid_cap)));
    }
    let mut methods = spec.methods.clone();
    methods.sort();
    methods.dedup();

    let mut cases: Vec<ProblemConfig> = Vec::new();
    for &ex in &spec.examples {
        for &m in &spec.grids {
            cases.push(ProblemConfig::new(ex, m));
        }
    }
    cases.sort_by_key(|c| (c.example, c.m));
    cases.dedup();

    let chunks: Vec<Vec<BenchRow>> = cases
        .par_iter()
        .map(|config| bench_case(config, &methods, spec))
        .collect();
    Ok(chunks.into_iter().flatten().collect())
}

fn bench_case(config: &ProblemConfig, methods: &[BenchMethod], spec: &BenchSpec) -> Vec<BenchRow> {
    let prob = match generate(config) {
        Ok(p) => p,
        Err(_) => return methods.iter().map(|&m| failed_row(config, m)).collect(),
    };
    let needs_spectrum = methods.iter().any(|m| matches!(m, BenchMethod::Gsor | BenchMethod::Pgsor));
    let spectrum = if needs_spectrum {
        estimate_spectrum(&prob.w, &prob.t, &PowerOptions::default()).ok()
    } else {
        None
    };
    methods
        .iter()
        .map(|&method| {
            let solve = SolveSpec {
                method,
                alpha: if method == BenchMethod::Mhss { spec.mhss_alpha } else { None },
                omega: None,
                tol: spec.tol,
                max_iter: spec.max_iter,
            };
            let est = spectrum.clone();
            solve_instance(config, &prob, &solve, || {
                est.ok_or_else(|| anyhow::anyhow!("spectral estimation failed"))
            })
            .unwrap_or_else(|_| failed_row(config, method))
        })
        .collect()
}

/// Writes `W.mtx`, `T.mtx`, `p.mtx` and `q.mtx` into `dir`.
pub fn cmd_gen(config: &ProblemConfig, dir: &Path) -> Result<ProblemInstance> {
    let prob = generate(config).with_context(|| format!("generating example {} (m={})", config.example, config.m))?;
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    mm_write(&prob.w, dir.join("W.mtx"))?;
    mm_write(&prob.t, dir.join("T.mtx"))?;
    write_vector(&prob.p, dir.join("p.mtx"))?;
    write_vector(&prob.q, dir.join("q.mtx"))?;
    Ok(prob)
}
