//! Seeded random test instances.

use pgsor_core::{ProblemInstance, SparseMatrix};
use rand::Rng;

/// Dense row-major `W` (SPD) and `T` (symmetric psd, random rank) of size
/// `n`, plus their sparse copies.
#[derive(Clone, Debug)]
pub struct RandomPair {
    pub n: usize,
    pub w_dense: Vec<f64>,
    pub t_dense: Vec<f64>,
    pub w: SparseMatrix,
    pub t: SparseMatrix,
}

/// `GᵀG / rows + shift·I`, symmetrized exactly.
fn gram<R: Rng>(rng: &mut R, n: usize, rows: usize, shift: f64) -> Vec<f64> {
    let g: Vec<f64> = (0..rows * n).map(|_| rng.random_range(-1.0..1.0)).collect();
    let mut a = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let mut s: f64 = (0..rows).map(|k| g[k * n + i] * g[k * n + j]).sum::<f64>() / rows as f64;
            if i == j {
                s += shift;
            }
            a[i * n + j] = s;
            a[j * n + i] = s;
        }
    }
    a
}

pub fn random_pair<R: Rng>(rng: &mut R, max_n: usize) -> RandomPair {
    let n = rng.random_range(1..=max_n);
    let shift = rng.random_range(0.1..1.0);
    let w_dense = gram(rng, n, n, shift);
    let rank = rng.random_range(1..=n);
    let scale = 10f64.powf(rng.random_range(-1.0..1.0));
    let t_dense: Vec<f64> = gram(rng, n, rank, 0.0).iter().map(|x| x * scale).collect();
    let w = SparseMatrix::from_dense(n, &w_dense).expect("symmetric by construction");
    let t = SparseMatrix::from_dense(n, &t_dense).expect("symmetric by construction");
    RandomPair {
        n,
        w_dense,
        t_dense,
        w,
        t,
    }
}

/// Random pair with a random right-hand side.
pub fn random_instance<R: Rng>(rng: &mut R, max_n: usize) -> (RandomPair, ProblemInstance) {
    let pair = random_pair(rng, max_n);
    let p: Vec<f64> = (0..pair.n).map(|_| rng.random_range(-1.0..1.0)).collect();
    let q: Vec<f64> = (0..pair.n).map(|_| rng.random_range(-1.0..1.0)).collect();
    let prob = ProblemInstance::new(pair.w.clone(), pair.t.clone(), p, q).expect("valid instance");
    (pair, prob)
}
