//! GSOR, preconditioned GSOR and MHSS outer iterations.
//!
//! Every method starts from the configured initial guess (zero by default),
//! evaluates the relative residual `||b - A u||₂ / ||b||₂` of the original
//! complex system once per full sweep, and stops at the first iterate whose
//! residual drops below `tol`.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::linalg::{factorize_spd, norm_sq, PairVector, SparseMatrix, SpdFactorization};
use crate::problems::ProblemInstance;

/// Residuals above this (or non-finite) end the run as diverged.
pub const DIVERGENCE_THRESHOLD: f64 = 1e12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Gsor,
    Pgsor,
    Mhss,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Gsor => "gsor",
            Method::Pgsor => "pgsor",
            Method::Mhss => "mhss",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gsor" => Ok(Method::Gsor),
            "pgsor" => Ok(Method::Pgsor),
            "mhss" => Ok(Method::Mhss),
            other => Err(Error::InvalidInput(format!("unknown method {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverSettings {
    pub alpha: f64,
    /// Preconditioner scalar; PGSOR only.
    pub omega: Option<f64>,
    pub tol: f64,
    pub max_iter: usize,
    pub initial_guess: Option<PairVector>,
}

impl SolverSettings {
    pub fn new(alpha: f64) -> Self {
        SolverSettings {
            alpha,
            omega: None,
            tol: 1e-6,
            max_iter: 10_000,
            initial_guess: None,
        }
    }

    pub fn with_omega(mut self, omega: f64) -> Self {
        self.omega = Some(omega);
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    pub fn with_initial_guess(mut self, u0: PairVector) -> Self {
        self.initial_guess = Some(u0);
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0) || !self.alpha.is_finite() {
            return Err(Error::InvalidInput(format!("alpha must be > 0, got {}", self.alpha)));
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidInput(format!("tol must be > 0, got {}", self.tol)));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidInput("max_iter must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverReport {
    pub method: Method,
    pub converged: bool,
    /// Stopped early because the residual blew up or became non-finite.
    pub diverged: bool,
    pub iterations: usize,
    /// Relative residuals for `k = 0..=iterations`.
    pub residual_history: Vec<f64>,
    pub alpha: f64,
    pub omega: Option<f64>,
    pub tol: f64,
    pub max_iter: usize,
    pub elapsed: Duration,
}

impl SolverReport {
    pub fn final_residual(&self) -> f64 {
        *self.residual_history.last().expect("history holds the k=0 entry")
    }
}

/// `||b - A u||₂ / ||b||₂` for `A = W + iT`, `b = p + iq`.
pub fn residual_norm(prob: &ProblemInstance, u: &PairVector) -> Result<f64> {
    let n = prob.dim();
    if u.re.len() != n || u.im.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: u.len(),
        });
    }
    let b_norm = (norm_sq(&prob.p) + norm_sq(&prob.q)).sqrt();
    if b_norm == 0.0 {
        return Err(Error::ZeroRightHandSide);
    }
    let mut ws = Workspace::new(n);
    Ok(residual_with(prob, u, &mut ws) / b_norm)
}

struct Workspace {
    a: Vec<f64>,
    b: Vec<f64>,
    c: Vec<f64>,
    d: Vec<f64>,
}

impl Workspace {
    fn new(n: usize) -> Self {
        Workspace {
            a: vec![0.0; n],
            b: vec![0.0; n],
            c: vec![0.0; n],
            d: vec![0.0; n],
        }
    }
}

/// Unnormalized `||b - A u||₂`.
fn residual_with(prob: &ProblemInstance, u: &PairVector, ws: &mut Workspace) -> f64 {
    prob.w.mul_into(&u.re, &mut ws.a);
    prob.t.mul_into(&u.im, &mut ws.b);
    prob.t.mul_into(&u.re, &mut ws.c);
    prob.w.mul_into(&u.im, &mut ws.d);
    let mut s = 0.0;
    for i in 0..prob.dim() {
        let re = prob.p[i] - (ws.a[i] - ws.b[i]);
        let im = prob.q[i] - (ws.c[i] + ws.d[i]);
        s += re * re + im * im;
    }
    s.sqrt()
}

/// One GSOR sweep on the real block system `[W -T; T W]`:
///
/// ```text
/// W x' = (1-α) W x + α T y  + α p
/// W y' = (1-α) W y - α T x' + α q
/// ```
///
/// realized as `x' = (1-α) x + α W⁻¹(T y + p)` and likewise for `y'`, with a
/// single factorization of `W` shared by both half-sweeps.
#[derive(Clone, Debug)]
pub struct GsorStepper {
    w: SpdFactorization,
    t: SparseMatrix,
    p: Vec<f64>,
    q: Vec<f64>,
    alpha: f64,
}

impl GsorStepper {
    pub fn new(w: &SparseMatrix, t: SparseMatrix, p: Vec<f64>, q: Vec<f64>, alpha: f64) -> Result<Self> {
        let n = w.dim();
        for found in [t.dim(), p.len(), q.len()] {
            if found != n {
                return Err(Error::DimensionMismatch { expected: n, found });
            }
        }
        Ok(GsorStepper {
            w: factorize_spd(w)?,
            t,
            p,
            q,
            alpha,
        })
    }

    /// Plain GSOR on `prob`.
    pub fn gsor(prob: &ProblemInstance, alpha: f64) -> Result<Self> {
        Self::new(&prob.w, prob.t.clone(), prob.p.clone(), prob.q.clone(), alpha)
            .map_err(|e| e.for_matrix("W"))
    }

    /// GSOR on the system left-multiplied by `[ωI I; -I ωI]`, i.e. with
    /// `W̃ = ωW + T`, `T̃ = ωT - W`, `p̃ = ωp + q`, `q̃ = ωq - p`.
    pub fn pgsor(prob: &ProblemInstance, alpha: f64, omega: f64) -> Result<Self> {
        if !(omega > 0.0) || !omega.is_finite() {
            return Err(Error::InvalidInput(format!("omega must be > 0, got {omega}")));
        }
        let (w, t, p, q) = scaled_parts(prob, omega, 1.0)?;
        Self::new(&w, t, p, q, alpha).map_err(|e| e.for_matrix("W̃ = ωW + T"))
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn step(&self, u: &mut PairVector) {
        let mut ws = Workspace::new(self.p.len());
        self.step_with(u, &mut ws);
    }

    fn step_with(&self, u: &mut PairVector, ws: &mut Workspace) {
        let a = self.alpha;
        self.t.mul_into(&u.im, &mut ws.a);
        for (r, p) in ws.a.iter_mut().zip(&self.p) {
            *r += p;
        }
        self.w.solve_into(&ws.a, &mut ws.b).expect("dimensions checked");
        for (x, s) in u.re.iter_mut().zip(&ws.b) {
            *x = (1.0 - a) * *x + a * s;
        }

        self.t.mul_into(&u.re, &mut ws.a);
        for (r, q) in ws.a.iter_mut().zip(&self.q) {
            *r = q - *r;
        }
        self.w.solve_into(&ws.a, &mut ws.b).expect("dimensions checked");
        for (y, s) in u.im.iter_mut().zip(&ws.b) {
            *y = (1.0 - a) * *y + a * s;
        }
    }

    /// The first `count` iterates after `start` (excluding `start`).
    pub fn iterates(&self, start: PairVector, count: usize) -> Vec<PairVector> {
        let mut ws = Workspace::new(self.p.len());
        let mut u = start;
        (0..count)
            .map(|_| {
                self.step_with(&mut u, &mut ws);
                u.clone()
            })
            .collect()
    }
}

/// MHSS on the complex system, carried out as real solves: both shifted
/// matrices `αI + W` and `αI + T` are real, so each half-step solves the
/// real and imaginary parts of its right-hand side separately.
struct MhssStepper<'a> {
    prob: &'a ProblemInstance,
    w_shift: SpdFactorization,
    t_shift: SpdFactorization,
    alpha: f64,
}

impl<'a> MhssStepper<'a> {
    fn new(prob: &'a ProblemInstance, alpha: f64) -> Result<Self> {
        Ok(MhssStepper {
            prob,
            w_shift: factorize_spd(&prob.w.shift(alpha)).map_err(|e| e.for_matrix("αI + W"))?,
            t_shift: factorize_spd(&prob.t.shift(alpha)).map_err(|e| e.for_matrix("αI + T"))?,
            alpha,
        })
    }

    fn step_with(&self, u: &mut PairVector, ws: &mut Workspace) {
        let (a, prob) = (self.alpha, self.prob);
        // (αI + W) u½ = (αI - iT) u + b
        prob.t.mul_into(&u.im, &mut ws.a);
        prob.t.mul_into(&u.re, &mut ws.b);
        for i in 0..prob.dim() {
            ws.c[i] = a * u.re[i] + ws.a[i] + prob.p[i];
            ws.d[i] = a * u.im[i] - ws.b[i] + prob.q[i];
        }
        self.w_shift.solve_into(&ws.c, &mut u.re).expect("dimensions checked");
        self.w_shift.solve_into(&ws.d, &mut u.im).expect("dimensions checked");

        // (αI + T) u¹ = (αI + iW) u½ - ib
        prob.w.mul_into(&u.im, &mut ws.a);
        prob.w.mul_into(&u.re, &mut ws.b);
        for i in 0..prob.dim() {
            ws.c[i] = a * u.re[i] - ws.a[i] + prob.q[i];
            ws.d[i] = a * u.im[i] + ws.b[i] - prob.p[i];
        }
        self.t_shift.solve_into(&ws.c, &mut u.re).expect("dimensions checked");
        self.t_shift.solve_into(&ws.d, &mut u.im).expect("dimensions checked");
    }
}

fn run(
    prob: &ProblemInstance,
    settings: &SolverSettings,
    method: Method,
    mut step: impl FnMut(&mut PairVector, &mut Workspace),
) -> Result<(PairVector, SolverReport)> {
    let started = Instant::now();
    let n = prob.dim();
    let mut u = settings.initial_guess.clone().unwrap_or_else(|| PairVector::zeros(n));
    if u.re.len() != n || u.im.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: u.len(),
        });
    }
    let b_norm = (norm_sq(&prob.p) + norm_sq(&prob.q)).sqrt();
    if b_norm == 0.0 {
        return Err(Error::ZeroRightHandSide);
    }

    let mut ws = Workspace::new(n);
    let mut history = vec![residual_with(prob, &u, &mut ws) / b_norm];
    let mut converged = history[0] < settings.tol;
    let mut diverged = false;
    let mut iterations = 0;

    while !converged && iterations < settings.max_iter {
        step(&mut u, &mut ws);
        iterations += 1;
        let r = residual_with(prob, &u, &mut ws) / b_norm;
        history.push(r);
        if !r.is_finite() || r > DIVERGENCE_THRESHOLD {
            diverged = true;
            break;
        }
        converged = r < settings.tol;
    }

    let report = SolverReport {
        method,
        converged,
        diverged,
        iterations,
        residual_history: history,
        alpha: settings.alpha,
        omega: settings.omega,
        tol: settings.tol,
        max_iter: settings.max_iter,
        elapsed: started.elapsed(),
    };
    Ok((u, report))
}

pub fn gsor_solve(prob: &ProblemInstance, settings: &SolverSettings) -> Result<(PairVector, SolverReport)> {
    settings.validate()?;
    let stepper = GsorStepper::gsor(prob, settings.alpha)?;
    run(prob, settings, Method::Gsor, |u, ws| stepper.step_with(u, ws))
}

/// PGSOR with `settings.omega` (required). The stopping residual is measured
/// on the original system, not the ω-scaled one.
pub fn pgsor_solve(prob: &ProblemInstance, settings: &SolverSettings) -> Result<(PairVector, SolverReport)> {
    settings.validate()?;
    let omega = settings
        .omega
        .ok_or_else(|| Error::InvalidInput("PGSOR requires omega".into()))?;
    let stepper = GsorStepper::pgsor(prob, settings.alpha, omega)?;
    run(prob, settings, Method::Pgsor, |u, ws| stepper.step_with(u, ws))
}

pub fn mhss_solve(prob: &ProblemInstance, settings: &SolverSettings) -> Result<(PairVector, SolverReport)> {
    settings.validate()?;
    let stepper = MhssStepper::new(prob, settings.alpha)?;
    run(prob, settings, Method::Mhss, |u, ws| stepper.step_with(u, ws))
}

fn scaled_parts(
    prob: &ProblemInstance,
    beta: f64,
    delta: f64,
) -> Result<(SparseMatrix, SparseMatrix, Vec<f64>, Vec<f64>)> {
    let w = prob.w.linear_combination(beta, &prob.t, delta)?;
    let t = prob.t.linear_combination(beta, &prob.w, -delta)?;
    let p = prob.p.iter().zip(&prob.q).map(|(p, q)| beta * p + delta * q).collect();
    let q = prob.q.iter().zip(&prob.p).map(|(q, p)| beta * q - delta * p).collect();
    Ok((w, t, p, q))
}

/// Multiplies `(W + iT) u = b` through by `β - iδ`:
/// `Ŵ = βW + δT`, `T̂ = βT - δW`, `b̂ = (β - iδ) b`. `Ŵ` must stay SPD.
pub fn complex_scale(prob: &ProblemInstance, beta: f64, delta: f64) -> Result<ProblemInstance> {
    let invalid = |reason: String| Error::ScalingInvalid { beta, delta, reason };
    if beta == 0.0 && delta == 0.0 {
        return Err(invalid("beta and delta are both zero".into()));
    }
    let (w, t, p, q) = scaled_parts(prob, beta, delta)?;
    factorize_spd(&w).map_err(|e| invalid(e.for_matrix("βW + δT").to_string()))?;
    Ok(ProblemInstance {
        w,
        t,
        p,
        q,
        config: prob.config.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{gen_example1, gen_example4, ExampleId, ProblemConfig, generate};
    use crate::test_oracle::dense_solve;

    fn tiny(w: &[f64], t: &[f64], n: usize, p: Vec<f64>, q: Vec<f64>) -> ProblemInstance {
        ProblemInstance::new(
            SparseMatrix::from_dense(n, w).unwrap(),
            SparseMatrix::from_dense(n, t).unwrap(),
            p,
            q,
        )
        .unwrap()
    }

    fn diag_problem(n: usize, mu: f64) -> ProblemInstance {
        ProblemInstance::new(
            SparseMatrix::identity(n),
            SparseMatrix::identity(n).scale(mu),
            vec![1.0; n],
            vec![1.0; n],
        )
        .unwrap()
    }

    /// Dense solve of the real 2n×2n block system.
    fn reference_solution(prob: &ProblemInstance) -> PairVector {
        let n = prob.dim();
        let (w, t) = (prob.w.to_dense(), prob.t.to_dense());
        let mut a = vec![0.0; 4 * n * n];
        for i in 0..n {
            for j in 0..n {
                a[i * 2 * n + j] = w[i * n + j];
                a[i * 2 * n + n + j] = -t[i * n + j];
                a[(n + i) * 2 * n + j] = t[i * n + j];
                a[(n + i) * 2 * n + n + j] = w[i * n + j];
            }
        }
        let rhs: Vec<f64> = prob.p.iter().chain(&prob.q).copied().collect();
        let z = dense_solve(2 * n, &a, &rhs);
        PairVector::new(z[..n].to_vec(), z[n..].to_vec()).unwrap()
    }

    #[test]
    fn residual_examples() {
        let prob = tiny(&[2.0], &[1.0], 1, vec![1.0], vec![0.0]);
        let u = PairVector::new(vec![1.0], vec![0.0]).unwrap();
        assert!((residual_norm(&prob, &u).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(residual_norm(&prob, &PairVector::zeros(1)).unwrap(), 1.0);

        let exact = reference_solution(&prob);
        assert!(residual_norm(&prob, &exact).unwrap() < 1e-12);

        let zero_b = tiny(&[2.0], &[1.0], 1, vec![0.0], vec![0.0]);
        assert!(matches!(
            residual_norm(&zero_b, &u),
            Err(Error::ZeroRightHandSide)
        ));
        assert!(matches!(
            residual_norm(&prob, &PairVector::zeros(2)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn gsor_one_step_when_t_vanishes() {
        let w = crate::linalg::tridiag(4, 1.0).unwrap();
        let prob = ProblemInstance::new(w, SparseMatrix::zeros(4), vec![1.0, 2.0, 3.0, 4.0], vec![-1.0; 4])
            .unwrap();
        let (_, rep) = gsor_solve(&prob, &SolverSettings::new(1.0)).unwrap();
        assert!(rep.converged);
        assert_eq!(rep.iterations, 1);
        assert_eq!(rep.residual_history.len(), 2);
    }

    #[test]
    fn gsor_diverges_outside_interval() {
        let prob = diag_problem(3, 3.0);
        let (u, rep) = gsor_solve(&prob, &SolverSettings::new(0.6)).unwrap();
        assert!(!rep.converged);
        assert!(rep.diverged);
        assert!(rep.final_residual() > rep.residual_history[1]);
        assert!(u.len() == 3);

        let (_, ok) = gsor_solve(&prob, &SolverSettings::new(0.45)).unwrap();
        assert!(ok.converged);
    }

    #[test]
    fn pgsor_one_step_when_w_equals_t() {
        let w = crate::linalg::tridiag(5, 1.0).unwrap();
        let prob = ProblemInstance::new(w.clone(), w, vec![1.0; 5], vec![0.5; 5]).unwrap();
        let settings = SolverSettings::new(1.0).with_omega(1.0);
        let (_, rep) = pgsor_solve(&prob, &settings).unwrap();
        assert!(rep.converged);
        assert_eq!(rep.iterations, 1);
    }

    #[test]
    fn pgsor_requires_omega() {
        let prob = diag_problem(2, 1.0);
        assert!(pgsor_solve(&prob, &SolverSettings::new(0.9)).is_err());
        assert!(pgsor_solve(&prob, &SolverSettings::new(0.9).with_omega(-1.0)).is_err());
    }

    #[test]
    fn mhss_fixed_point() {
        let prob = gen_example4(4, 100.0, 100.0).unwrap();
        let exact = reference_solution(&prob);
        let settings = SolverSettings::new(0.37).with_initial_guess(exact.clone());
        let (_, rep) = mhss_solve(&prob, &settings).unwrap();
        assert!(rep.converged);
        assert_eq!(rep.iterations, 0);

        let stepper = MhssStepper::new(&prob, 0.37).unwrap();
        let mut u = exact.clone();
        stepper.step_with(&mut u, &mut Workspace::new(prob.dim()));
        assert!(u.max_abs_diff(&exact) < 1e-12);
    }

    #[test]
    fn settings_are_validated() {
        let prob = diag_problem(2, 1.0);
        assert!(gsor_solve(&prob, &SolverSettings::new(0.0)).is_err());
        assert!(gsor_solve(&prob, &SolverSettings::new(0.5).with_tol(0.0)).is_err());
        assert!(gsor_solve(&prob, &SolverSettings::new(0.5).with_max_iter(0)).is_err());
    }

    #[test]
    fn non_spd_w_is_reported() {
        let prob = tiny(&[1.0, 2.0, 2.0, 1.0], &[1.0, 0.0, 0.0, 1.0], 2, vec![1.0; 2], vec![0.0; 2]);
        match gsor_solve(&prob, &SolverSettings::new(0.5)) {
            Err(Error::NotPositiveDefinite { matrix, .. }) => assert_eq!(matrix, "W"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn complex_scale_examples() {
        let prob = gen_example1(3, 0.25).unwrap();
        assert_eq!(complex_scale(&prob, 1.0, 0.0).unwrap(), prob);

        let omega = 0.7;
        let s = complex_scale(&prob, omega, 1.0).unwrap();
        let w_expected = prob.w.linear_combination(omega, &prob.t, 1.0).unwrap();
        assert_eq!(s.w, w_expected);

        // i (W + iT) = -T + iW; -T is negative definite here
        assert!(matches!(
            complex_scale(&prob, 0.0, -1.0),
            Err(Error::ScalingInvalid { .. })
        ));
        // with W = I, T = -2I the rotated operator is fine
        let flip = tiny(&[1.0], &[-2.0], 1, vec![1.0], vec![3.0]);
        let r = complex_scale(&flip, 0.0, -1.0).unwrap();
        assert_eq!(r.w.to_dense(), vec![2.0]);
        assert_eq!(r.t.to_dense(), vec![1.0]);
        assert_eq!((r.p[0], r.q[0]), (-3.0, 1.0));
        assert!(complex_scale(&prob, 0.0, 0.0).is_err());
    }

    #[test]
    fn converged_runs_match_direct_solution() {
        for ex in ExampleId::ALL {
            for m in [3, 6, 8] {
                let prob = generate(&ProblemConfig::new(ex, m)).unwrap();
                let exact = reference_solution(&prob);
                let tol = 1e-6;
                for (u, rep) in [
                    gsor_solve(&prob, &SolverSettings::new(0.4)).unwrap(),
                    pgsor_solve(&prob, &SolverSettings::new(0.9).with_omega(1.0)).unwrap(),
                    mhss_solve(&prob, &SolverSettings::new(0.5)).unwrap(),
                ] {
                    assert!(rep.converged, "{ex} m={m} {:?}", rep.method);
                    assert!(rep.final_residual() < tol);
                    assert_eq!(rep.residual_history.len(), rep.iterations + 1);
                    let err = PairVector::new(
                        u.re.iter().zip(&exact.re).map(|(a, b)| a - b).collect(),
                        u.im.iter().zip(&exact.im).map(|(a, b)| a - b).collect(),
                    )
                    .unwrap()
                    .norm();
                    assert!(err / exact.norm() < 100.0 * tol, "{ex} m={m} {:?}", rep.method);
                }
            }
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let prob = generate(&ProblemConfig::new(ExampleId::DampedDynamics, 8)).unwrap();
        let s = SolverSettings::new(0.455);
        let (_, a) = gsor_solve(&prob, &s).unwrap();
        let (_, b) = gsor_solve(&prob, &s).unwrap();
        assert_eq!(a.residual_history, b.residual_history);
    }
}
