//! Finite-difference test problems on the unit square.
//!
//! All four examples use an `m × m` interior grid with `h = 1/(m+1)` and
//! `n = m²` unknowns. Examples 1, 2 and 4 are normalized by multiplying the
//! matrices and the right-hand side by `h²`; example 3 is left unscaled.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{add_rank_correction, factorize_spd, kron_sum, tridiag, SparseMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExampleId {
    /// Time-stepping system `(K + (3-√3)/τ I) + i (K + (3+√3)/τ I)`.
    ShiftedLaplacian = 1,
    /// Damped structural dynamics `(K - ω² I) + i (10ω I + μ K)`.
    DampedDynamics = 2,
    /// Periodic-type `W` against a Dirichlet Laplacian `T`.
    Periodic = 3,
    /// Complex Helmholtz `(K + σ₁ I) + i σ₂ I`.
    Helmholtz = 4,
}

impl ExampleId {
    pub const ALL: [ExampleId; 4] = [
        ExampleId::ShiftedLaplacian,
        ExampleId::DampedDynamics,
        ExampleId::Periodic,
        ExampleId::Helmholtz,
    ];

    pub fn number(self) -> u8 {
        self as u8
    }
}

impl TryFrom<u8> for ExampleId {
    type Error = Error;

    fn try_from(v: u8) -> Result<Self> {
        match v {
            1 => Ok(ExampleId::ShiftedLaplacian),
            2 => Ok(ExampleId::DampedDynamics),
            3 => Ok(ExampleId::Periodic),
            4 => Ok(ExampleId::Helmholtz),
            _ => Err(Error::InvalidInput(format!("example id must be 1..=4, got {v}"))),
        }
    }
}

impl FromStr for ExampleId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let v: u8 = s
            .trim()
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad example id {s:?}")))?;
        ExampleId::try_from(v)
    }
}

impl fmt::Display for ExampleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

/// Grid size plus the example-specific scalars. Scalars that do not apply to
/// the chosen example are ignored.
#[derive(Clone, Debug, PartialEq)]
pub struct ProblemConfig {
    pub example: ExampleId,
    pub m: usize,
    /// Time step of example 1; `None` means `τ = h`.
    pub tau: Option<f64>,
    pub omega_drive: f64,
    pub mu_damp: f64,
    pub sigma1: f64,
    pub sigma2: f64,
}

impl ProblemConfig {
    pub fn new(example: ExampleId, m: usize) -> Self {
        ProblemConfig {
            example,
            m,
            tau: None,
            omega_drive: std::f64::consts::PI,
            mu_damp: 0.02,
            sigma1: 100.0,
            sigma2: 100.0,
        }
    }

    pub fn h(&self) -> f64 {
        1.0 / (self.m as f64 + 1.0)
    }

    pub fn n(&self) -> usize {
        self.m * self.m
    }

    pub fn tau(&self) -> f64 {
        self.tau.unwrap_or_else(|| self.h())
    }

    pub fn validate(&self) -> Result<()> {
        if self.m == 0 {
            return Err(Error::InvalidDimension("grid size m must be >= 1".into()));
        }
        if self.example == ExampleId::Periodic && self.m < 2 {
            return Err(Error::InvalidDimension("example 3 needs m >= 2".into()));
        }
        if !(self.tau() > 0.0) {
            return Err(Error::InvalidInput(format!("tau must be > 0, got {}", self.tau())));
        }
        if !(self.sigma1 >= 0.0) || !(self.sigma2 >= 0.0) {
            return Err(Error::InvalidInput("sigma1, sigma2 must be >= 0".into()));
        }
        Ok(())
    }
}

/// `(W + iT) u = p + iq` together with the configuration that produced it.
#[derive(Clone, Debug, PartialEq)]
pub struct ProblemInstance {
    pub w: SparseMatrix,
    pub t: SparseMatrix,
    pub p: Vec<f64>,
    pub q: Vec<f64>,
    pub config: Option<ProblemConfig>,
}

impl ProblemInstance {
    /// Wraps user-supplied data; checks dimensions and symmetry only.
    pub fn new(w: SparseMatrix, t: SparseMatrix, p: Vec<f64>, q: Vec<f64>) -> Result<Self> {
        let n = w.dim();
        for found in [t.dim(), p.len(), q.len()] {
            if found != n {
                return Err(Error::DimensionMismatch { expected: n, found });
            }
        }
        if !w.is_symmetric() || !t.is_symmetric() {
            return Err(Error::InvalidInput("W and T must be symmetric".into()));
        }
        Ok(ProblemInstance {
            w,
            t,
            p,
            q,
            config: None,
        })
    }

    pub fn dim(&self) -> usize {
        self.w.dim()
    }
}

pub fn generate(config: &ProblemConfig) -> Result<ProblemInstance> {
    match config.example {
        ExampleId::ShiftedLaplacian => gen_example1(config.m, config.tau()),
        ExampleId::DampedDynamics => gen_example2(config.m, config.omega_drive, config.mu_damp),
        ExampleId::Periodic => gen_example3(config.m),
        ExampleId::Helmholtz => gen_example4(config.m, config.sigma1, config.sigma2),
    }
}

/// Five-point negative Laplacian `K = I⊗V + V⊗I`, `V = h⁻² tridiag(-1,2,-1)`.
fn dirichlet_laplacian(m: usize) -> Result<SparseMatrix> {
    let h = 1.0 / (m as f64 + 1.0);
    Ok(kron_sum(&tridiag(m, 1.0 / (h * h))?))
}

/// `b = (1+i) A 1` split into real and imaginary parts.
fn ones_rhs(w: &SparseMatrix, t: &SparseMatrix) -> (Vec<f64>, Vec<f64>) {
    let ones = vec![1.0; w.dim()];
    let w1 = w.spmv(&ones).expect("square");
    let t1 = t.spmv(&ones).expect("square");
    let p = w1.iter().zip(&t1).map(|(a, b)| a - b).collect();
    let q = w1.iter().zip(&t1).map(|(a, b)| a + b).collect();
    (p, q)
}

fn check_w(w: &SparseMatrix) -> Result<()> {
    factorize_spd(w)
        .map(|_| ())
        .map_err(|e| Error::Generation(Box::new(e.for_matrix("W"))))
}

fn finish(
    w: SparseMatrix,
    t: SparseMatrix,
    p: Vec<f64>,
    q: Vec<f64>,
    config: ProblemConfig,
) -> Result<ProblemInstance> {
    check_w(&w)?;
    Ok(ProblemInstance {
        w,
        t,
        p,
        q,
        config: Some(config),
    })
}

pub fn gen_example1(m: usize, tau: f64) -> Result<ProblemInstance> {
    let config = ProblemConfig {
        tau: Some(tau),
        ..ProblemConfig::new(ExampleId::ShiftedLaplacian, m)
    };
    config.validate()?;
    let h2 = config.h().powi(2);
    let s3 = 3f64.sqrt();
    let k = dirichlet_laplacian(m)?;
    let w = k.shift((3.0 - s3) / tau).scale(h2);
    let t = k.shift((3.0 + s3) / tau).scale(h2);
    let p: Vec<f64> = (1..=config.n())
        .map(|j| {
            let j = j as f64;
            h2 * j / (tau * (j + 1.0) * (j + 1.0))
        })
        .collect();
    let q = p.iter().map(|x| -x).collect();
    finish(w, t, p, q, config)
}

pub fn gen_example2(m: usize, omega_drive: f64, mu_damp: f64) -> Result<ProblemInstance> {
    let config = ProblemConfig {
        omega_drive,
        mu_damp,
        ..ProblemConfig::new(ExampleId::DampedDynamics, m)
    };
    config.validate()?;
    let h2 = config.h().powi(2);
    let k = dirichlet_laplacian(m)?;
    let w = k.shift(-omega_drive * omega_drive).scale(h2);
    let t = k
        .scale(mu_damp)
        .shift(10.0 * omega_drive)
        .scale(h2);
    let (p, q) = ones_rhs(&w, &t);
    finish(w, t, p, q, config)
}

pub fn gen_example3(m: usize) -> Result<ProblemInstance> {
    let config = ProblemConfig::new(ExampleId::Periodic, m);
    config.validate()?;
    let v = tridiag(m, 1.0)?;
    let t = kron_sum(&v);
    let vc = add_rank_correction(&v, &[(0, m - 1, -1.0), (m - 1, 0, -1.0)])?;
    // 9 (e₁e_mᵀ + e_m e₁ᵀ) ⊗ I couples block row 0 with block row m-1
    let last = (m - 1) * m;
    let corner: Vec<_> = (0..m)
        .flat_map(|k| [(k, last + k, 9.0), (last + k, k, 9.0)])
        .collect();
    let w = add_rank_correction(&kron_sum(&vc).scale(10.0), &corner)?;
    let (p, q) = ones_rhs(&w, &t);
    finish(w, t, p, q, config)
}

pub fn gen_example4(m: usize, sigma1: f64, sigma2: f64) -> Result<ProblemInstance> {
    let config = ProblemConfig {
        sigma1,
        sigma2,
        ..ProblemConfig::new(ExampleId::Helmholtz, m)
    };
    config.validate()?;
    let h2 = config.h().powi(2);
    let k = dirichlet_laplacian(m)?;
    let w = k.shift(sigma1).scale(h2);
    let t = SparseMatrix::identity(config.n()).scale(sigma2 * h2);
    let (p, q) = ones_rhs(&w, &t);
    finish(w, t, p, q, config)
}
