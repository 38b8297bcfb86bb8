//! Extreme eigenvalues of `S = W⁻¹T` and the parameter formulas built on them.
//!
//! With `W` SPD and `T` symmetric positive semidefinite, `S` has real
//! nonnegative eigenvalues `0 ≤ μ_min ≤ μ_max`. These two numbers determine
//!
//! * the GSOR convergence interval `0 < α < 2/(1+μ_max)` and its optimum
//!   `α* = 2/(1+√(1+μ_max²))`, with convergence factor `1 - α*`;
//! * the spectrum of the preconditioned `S̃_ω = (ωW+T)⁻¹(ωT-W)`, whose
//!   eigenvalues are `(ωμ-1)/(ω+μ)`, and from it the optimal `(α*, ω*)` of
//!   PGSOR.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{dot, factorize_spd, SparseMatrix, SpdFactorization};
use crate::solvers::SolverReport;

/// `2/(1+√2)`, the PGSOR `α*` when `ρ(S̃_ω) = 1`.
pub const APPROX_ALPHA: f64 = 0.828;
pub const APPROX_OMEGA: f64 = 1.0;

/// Final residual ratios averaged by [`observed_convergence_factor`].
pub const OBSERVED_WINDOW: usize = 5;

#[derive(Clone, Debug, PartialEq)]
pub struct PowerOptions {
    pub max_iters: usize,
    /// Stop once `|μ_k - μ_{k-1}| ≤ tol·|μ_k|`.
    pub tol: f64,
    pub seed: u64,
    /// Skip the inverse iteration and take `μ_min = 0`.
    pub force_mu_min_zero: bool,
}

impl Default for PowerOptions {
    fn default() -> Self {
        PowerOptions {
            max_iters: 200,
            tol: 1e-8,
            seed: 0x5eed_0001,
            force_mu_min_zero: false,
        }
    }
}

/// Result of a single power or inverse power run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EigenEstimate {
    pub value: f64,
    pub iterations: usize,
    /// Relative change of the last Rayleigh quotient update.
    pub rel_change: f64,
    pub converged: bool,
}

impl EigenEstimate {
    fn exact(value: f64) -> Self {
        EigenEstimate {
            value,
            iterations: 0,
            rel_change: 0.0,
            converged: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralEstimate {
    pub mu_min: f64,
    pub mu_max: f64,
    pub max_run: EigenEstimate,
    pub min_run: EigenEstimate,
}

impl SpectralEstimate {
    /// Wraps known extreme eigenvalues.
    pub fn from_bounds(mu_min: f64, mu_max: f64) -> Result<Self> {
        if !(mu_min >= 0.0) || !(mu_max >= mu_min) || !mu_max.is_finite() {
            return Err(Error::InvalidInput(format!(
                "need 0 <= mu_min <= mu_max, got ({mu_min}, {mu_max})"
            )));
        }
        Ok(SpectralEstimate {
            mu_min,
            mu_max,
            max_run: EigenEstimate::exact(mu_max),
            min_run: EigenEstimate::exact(mu_min),
        })
    }

    /// `ρ(S)`.
    pub fn rho_s(&self) -> f64 {
        self.mu_max
    }
}

/// Relaxation parameter choice plus the convergence factor it predicts.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParamChoice {
    pub alpha: f64,
    /// Absent for plain GSOR.
    pub omega: Option<f64>,
    pub predicted_rho: f64,
    /// `ρ(S̃_ω)` for PGSOR choices.
    pub xi: Option<f64>,
}

/// Rayleigh-quotient power iteration for the pencil `A z = λ B z`:
/// `z ← B⁻¹ A z`, `λ = ⟨Az, z⟩ / ⟨Bz, z⟩`. Returns 0 if `A z` vanishes for
/// several random starts.
fn pencil_power(
    a: &SparseMatrix,
    b: &SparseMatrix,
    b_fact: &SpdFactorization,
    opts: &PowerOptions,
) -> EigenEstimate {
    let n = a.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut z = vec![0.0; n];
    let mut az = vec![0.0; n];
    let mut bz = vec![0.0; n];

    let mut nonzero = false;
    for _ in 0..3 {
        z.iter_mut().for_each(|x| *x = rng.random_range(-1.0..1.0));
        a.mul_into(&z, &mut az);
        if az.iter().any(|&x| x != 0.0) {
            nonzero = true;
            break;
        }
    }
    if !nonzero {
        return EigenEstimate::exact(0.0);
    }

    let mut lambda = f64::NAN;
    let mut rel_change = f64::INFINITY;
    for k in 1..=opts.max_iters {
        a.mul_into(&z, &mut az);
        b.mul_into(&z, &mut bz);
        let next = dot(&az, &z) / dot(&bz, &z);
        if k > 1 {
            rel_change = (next - lambda).abs() / next.abs().max(f64::MIN_POSITIVE);
        }
        lambda = next;
        if rel_change <= opts.tol || lambda == 0.0 {
            return EigenEstimate {
                value: lambda,
                iterations: k,
                rel_change,
                converged: true,
            };
        }
        b_fact.solve_into(&az, &mut z).expect("dimensions match");
        let norm = dot(&z, &z).sqrt();
        if norm == 0.0 {
            return EigenEstimate {
                value: 0.0,
                iterations: k,
                rel_change: 0.0,
                converged: true,
            };
        }
        z.iter_mut().for_each(|x| *x /= norm);
    }
    EigenEstimate {
        value: lambda,
        iterations: opts.max_iters,
        rel_change,
        converged: false,
    }
}

fn check_pair(w: &SparseMatrix, t: &SparseMatrix) -> Result<()> {
    if w.dim() != t.dim() {
        return Err(Error::DimensionMismatch {
            expected: w.dim(),
            found: t.dim(),
        });
    }
    Ok(())
}

/// Largest eigenvalue of `W⁻¹T` by power iteration.
pub fn estimate_mu_max(w: &SparseMatrix, t: &SparseMatrix, opts: &PowerOptions) -> Result<EigenEstimate> {
    check_pair(w, t)?;
    let wf = factorize_spd(w).map_err(|e| e.for_matrix("W"))?;
    Ok(pencil_power(t, w, &wf, opts))
}

/// Smallest eigenvalue of `W⁻¹T`: zero when `T` does not factorize (singular
/// semidefinite), otherwise the reciprocal of the dominant eigenvalue of
/// `T⁻¹W` found by inverse power iteration.
pub fn estimate_mu_min(w: &SparseMatrix, t: &SparseMatrix, opts: &PowerOptions) -> Result<EigenEstimate> {
    check_pair(w, t)?;
    if opts.force_mu_min_zero {
        return Ok(EigenEstimate::exact(0.0));
    }
    let tf = match factorize_spd(t) {
        Ok(f) => f,
        Err(Error::NotPositiveDefinite { .. }) => return Ok(EigenEstimate::exact(0.0)),
        Err(e) => return Err(e),
    };
    let run = pencil_power(w, t, &tf, opts);
    Ok(EigenEstimate {
        value: if run.value > 0.0 { 1.0 / run.value } else { 0.0 },
        ..run
    })
}

pub fn estimate_spectrum(w: &SparseMatrix, t: &SparseMatrix, opts: &PowerOptions) -> Result<SpectralEstimate> {
    let max_run = estimate_mu_max(w, t, opts)?;
    let min_run = estimate_mu_min(w, t, opts)?;
    // Rayleigh quotients bracket the spectrum from inside; clamp for safety
    // when both runs land on the same tight cluster.
    let mu_max = max_run.value.max(0.0);
    let mu_min = min_run.value.clamp(0.0, mu_max);
    Ok(SpectralEstimate {
        mu_min,
        mu_max,
        max_run,
        min_run,
    })
}

/// Eigenvalue of `S̃_ω` corresponding to eigenvalue `μ` of `S`.
pub fn map_lambda(omega: f64, mu: f64) -> f64 {
    (omega * mu - 1.0) / (omega + mu)
}

/// Decreasing branch `(1 - ω μ_min)/(ω + μ_min)`.
pub fn branch_min(omega: f64, est: &SpectralEstimate) -> f64 {
    (1.0 - omega * est.mu_min) / (omega + est.mu_min)
}

/// Increasing branch `(ω μ_max - 1)/(ω + μ_max)`.
pub fn branch_max(omega: f64, est: &SpectralEstimate) -> f64 {
    (omega * est.mu_max - 1.0) / (omega + est.mu_max)
}

/// `ρ(S̃_ω)`.
pub fn rho_s_tilde(omega: f64, est: &SpectralEstimate) -> f64 {
    branch_min(omega, est).max(branch_max(omega, est))
}

fn optimal_alpha(rho: f64) -> f64 {
    2.0 / (1.0 + (1.0 + rho * rho).sqrt())
}

pub fn gsor_optimal_alpha(rho_s: f64) -> ParamChoice {
    let alpha = optimal_alpha(rho_s);
    ParamChoice {
        alpha,
        omega: None,
        predicted_rho: 1.0 - alpha,
        xi: None,
    }
}

/// Optimal `(α*, ω*)` for PGSOR. `ω*` balances the two branches of
/// `ρ(S̃_ω)`; `α*` is then the GSOR optimum for `ξ = ρ(S̃_ω*)`.
pub fn pgsor_optimal_params(est: &SpectralEstimate) -> Result<ParamChoice> {
    let (lo, hi) = (est.mu_min, est.mu_max);
    if lo + hi <= 0.0 {
        return Err(Error::DegenerateSpectrum);
    }
    let omega = (1.0 - lo * hi + ((1.0 + lo * lo) * (1.0 + hi * hi)).sqrt()) / (lo + hi);
    let xi = rho_s_tilde(omega, est).max(0.0);
    let alpha = optimal_alpha(xi);
    Ok(ParamChoice {
        alpha,
        omega: Some(omega),
        predicted_rho: 1.0 - alpha,
        xi: Some(xi),
    })
}

/// Spectral radius of the GSOR iteration matrix for a given `α` when the
/// eigenvalues of `S` (or `S̃_ω`) lie in `[lo, hi]`.
///
/// Each eigenvalue `μ` contributes the roots of
/// `λ² - (2(1-α) - α²μ²) λ + (1-α)² = 0`; the largest modulus is attained at
/// an end of the range of `μ²`.
pub fn gsor_rho(alpha: f64, lo: f64, hi: f64) -> f64 {
    let c = (1.0 - alpha) * (1.0 - alpha);
    let radius = |mu: f64| {
        let b = 2.0 * (1.0 - alpha) - alpha * alpha * mu * mu;
        let disc = b * b - 4.0 * c;
        if disc <= 0.0 {
            c.sqrt()
        } else {
            (b.abs() + disc.sqrt()) / 2.0
        }
    };
    let mut rho = radius(lo).max(radius(hi));
    if lo < 0.0 && hi > 0.0 {
        rho = rho.max(radius(0.0));
    }
    rho
}

/// `ρ` of PGSOR with parameters `(α, ω)`.
pub fn pgsor_rho(alpha: f64, omega: f64, est: &SpectralEstimate) -> f64 {
    gsor_rho(alpha, map_lambda(omega, est.mu_min), map_lambda(omega, est.mu_max))
}

/// Open interval of `α` for which GSOR converges.
pub fn gsor_convergence_interval(mu_max: f64) -> (f64, f64) {
    (0.0, 2.0 / (1.0 + mu_max))
}

/// Every `ω` above this value gives `ρ(S̃_ω) < ρ(S)`.
pub fn improvement_threshold(est: &SpectralEstimate) -> Result<f64> {
    let (lo, hi) = (est.mu_min, est.mu_max);
    if lo + hi <= 0.0 {
        return Err(Error::DegenerateSpectrum);
    }
    Ok(((1.0 - lo * hi) / (lo + hi)).max(0.0))
}

/// Data-independent preset `(α, ω) = (0.828, 1)`.
pub fn approx_params() -> ParamChoice {
    ParamChoice {
        alpha: APPROX_ALPHA,
        omega: Some(APPROX_OMEGA),
        predicted_rho: 1.0 - APPROX_ALPHA,
        xi: Some(1.0),
    }
}

/// Geometric mean of the last [`OBSERVED_WINDOW`] residual ratios of a
/// converged run.
pub fn observed_convergence_factor(report: &SolverReport) -> Result<f64> {
    let h = &report.residual_history;
    if h.len() < OBSERVED_WINDOW + 1 {
        return Err(Error::InsufficientData {
            needed: OBSERVED_WINDOW + 1,
            found: h.len(),
        });
    }
    if !report.converged {
        return Err(Error::InvalidInput("run did not converge".into()));
    }
    let last = h[h.len() - 1];
    let first = h[h.len() - 1 - OBSERVED_WINDOW];
    Ok((last / first).powf(1.0 / OBSERVED_WINDOW as f64))
}
