//! Dense reference eigensolvers.

use nalgebra::{DMatrix, SymmetricEigen};

/// Sorted eigenvalues of the pencil `A x = λ B x` with `A` symmetric and `B`
/// SPD, through `L⁻¹ A L⁻ᵀ` where `B = L Lᵀ`. Matrices are row-major.
pub fn gen_sym_eigenvalues(n: usize, a: &[f64], b: &[f64]) -> Vec<f64> {
    let a = DMatrix::from_row_slice(n, n, a);
    let b = DMatrix::from_row_slice(n, n, b);
    let l = b.cholesky().expect("B must be SPD").l();
    let l_inv = l.try_inverse().expect("triangular factor is invertible");
    let c = &l_inv * a * l_inv.transpose();
    let c = (&c + c.transpose()) * 0.5;
    let mut ev: Vec<f64> = SymmetricEigen::new(c).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Sorted eigenvalues of `W⁻¹T`.
pub fn s_spectrum(n: usize, w: &[f64], t: &[f64]) -> Vec<f64> {
    gen_sym_eigenvalues(n, t, w)
}

/// Sorted eigenvalues of `(ωW+T)⁻¹(ωT-W)`.
pub fn s_tilde_spectrum(n: usize, w: &[f64], t: &[f64], omega: f64) -> Vec<f64> {
    let a: Vec<f64> = t.iter().zip(w).map(|(t, w)| omega * t - w).collect();
    let b: Vec<f64> = w.iter().zip(t).map(|(w, t)| omega * w + t).collect();
    gen_sym_eigenvalues(n, &a, &b)
}
