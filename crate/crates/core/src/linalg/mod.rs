//! Sparse symmetric matrices, SPD factorization and Matrix Market I/O.

mod cholesky;
pub mod market;
mod ordering;
mod sparse;
mod vector;

pub use cholesky::{factorize_spd, spd_solve, SpdFactorization, PIVOT_RTOL};
pub use market::{mm_read, mm_write, read_vector, write_vector};
pub use ordering::Ordering;
pub use sparse::{add_rank_correction, kron_sum, tridiag, SparseMatrix};
pub use vector::PairVector;

pub(crate) use vector::{dot, norm_sq};
