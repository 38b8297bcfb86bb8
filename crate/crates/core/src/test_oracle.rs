//! Dense eigen-solvers used only as independent oracles in unit tests.

use nalgebra::{DMatrix, SymmetricEigen};

/// Sorted eigenvalues of a symmetric row-major matrix.
pub fn sym_eigenvalues(n: usize, a: &[f64]) -> Vec<f64> {
    let m = DMatrix::from_row_slice(n, n, a);
    let mut ev: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Sorted eigenvalues of the pencil `A z = λ B z` with `B` SPD.
pub fn gen_sym_eigenvalues(n: usize, a: &[f64], b: &[f64]) -> Vec<f64> {
    let a = DMatrix::from_row_slice(n, n, a);
    let b = DMatrix::from_row_slice(n, n, b);
    let l = b.cholesky().expect("B must be SPD").l();
    let linv = l.clone().try_inverse().unwrap();
    let c = &linv * a * linv.transpose();
    let c = (&c + c.transpose()) * 0.5;
    let mut ev: Vec<f64> = SymmetricEigen::new(c).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Dense LU solve.
pub fn dense_solve(n: usize, a: &[f64], b: &[f64]) -> Vec<f64> {
    let a = DMatrix::from_row_slice(n, n, a);
    let b = nalgebra::DVector::from_column_slice(b);
    a.lu().solve(&b).expect("nonsingular").iter().copied().collect()
}
