//! Stationary solvers for complex symmetric linear systems `(W + iT) u = b`.
//!
//! The complex system is handled through its real 2×2 block form
//!
//! ```text
//! [ W  -T ] [x]   [p]
//! [ T   W ] [y] = [q]
//! ```
//!
//! with `u = x + iy` and `b = p + iq`. The crate provides the GSOR iteration,
//! its preconditioned variant (PGSOR, which scales the system by `ω - i`),
//! and the MHSS iteration, together with closed-form parameter selection
//! driven by the extreme eigenvalues of `S = W⁻¹T`.
//!
//! Modules:
//!
//! * [`linalg`]: symmetric sparse storage, Kronecker-sum assembly, sparse
//!   Cholesky, Matrix Market I/O.
//! * [`problems`]: the four finite-difference test problems.
//! * [`spectral`]: power / inverse power estimation of `μ_min`, `μ_max` and
//!   the optimal-parameter formulas.
//! * [`solvers`]: GSOR, PGSOR, MHSS and the `(β - iδ)` scaling transform.

// `!(x > 0.0)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod linalg;
pub mod problems;
pub mod solvers;
pub mod spectral;

#[cfg(test)]
pub(crate) mod test_oracle;

pub use error::{Error, Result};
pub use linalg::{factorize_spd, Ordering, PairVector, SparseMatrix, SpdFactorization};
pub use problems::{ExampleId, ProblemConfig, ProblemInstance};
pub use solvers::{
    complex_scale, gsor_solve, mhss_solve, pgsor_solve, residual_norm, GsorStepper, Method,
    SolverReport, SolverSettings,
};
pub use spectral::{ParamChoice, PowerOptions, SpectralEstimate};
