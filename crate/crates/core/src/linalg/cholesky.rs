use super::ordering::{permutation, Ordering};
use super::SparseMatrix;
use crate::error::{Error, Result};

/// Pivots below `PIVOT_RTOL * ||A||_inf` are rejected.
pub const PIVOT_RTOL: f64 = 1e-14;

/// Envelope (profile) Cholesky factor `P A Pᵀ = L Lᵀ`.
///
/// Row `i` of `L` is stored densely from its first structural nonzero up to
/// the diagonal. Immutable once built, so one factor can serve concurrent
/// solves.
#[derive(Clone, Debug)]
pub struct SpdFactorization {
    n: usize,
    /// `perm[new] = old`
    perm: Vec<usize>,
    first: Vec<usize>,
    start: Vec<usize>,
    values: Vec<f64>,
    source_norm: f64,
}

/// Factorizes a symmetric positive definite matrix with the default ordering.
pub fn factorize_spd(a: &SparseMatrix) -> Result<SpdFactorization> {
    SpdFactorization::new(a, Ordering::default())
}

impl SpdFactorization {
    pub fn new(a: &SparseMatrix, ordering: Ordering) -> Result<Self> {
        let n = a.dim();
        let perm = permutation(a, ordering);
        let mut inv = vec![0; n];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }

        let first: Vec<usize> = (0..n)
            .map(|i| {
                a.row(perm[i])
                    .map(|(j, _)| inv[j])
                    .filter(|&j| j <= i)
                    .min()
                    .unwrap_or(i)
            })
            .collect();
        let mut start = Vec::with_capacity(n + 1);
        start.push(0);
        for i in 0..n {
            start.push(start[i] + (i - first[i] + 1));
        }
        let mut values = vec![0.0; start[n]];

        let norm = a.norm_inf();
        let threshold = PIVOT_RTOL * norm;

        for i in 0..n {
            let fi = first[i];
            let base = start[i];
            for (j, v) in a.row(perm[i]) {
                let jn = inv[j];
                if jn <= i {
                    values[base + jn - fi] = v;
                }
            }
            for j in fi..i {
                let fj = first[j];
                let k0 = fi.max(fj);
                let (head, tail) = values.split_at_mut(base);
                let row_j = &head[start[j]..start[j + 1]];
                let row_i = &mut tail[..i - fi + 1];
                let dot: f64 = row_i[k0 - fi..j - fi]
                    .iter()
                    .zip(&row_j[k0 - fj..j - fj])
                    .map(|(x, y)| x * y)
                    .sum();
                let ljj = row_j[j - fj];
                row_i[j - fi] = (row_i[j - fi] - dot) / ljj;
            }
            let row_i = &mut values[base..base + i - fi + 1];
            let (off, diag) = row_i.split_at_mut(i - fi);
            let d = diag[0] - off.iter().map(|x| x * x).sum::<f64>();
            if !(d > threshold) {
                return Err(Error::NotPositiveDefinite {
                    matrix: "A".into(),
                    row: perm[i],
                    pivot: d,
                });
            }
            diag[0] = d.sqrt();
        }

        Ok(SpdFactorization {
            n,
            perm,
            first,
            start,
            values,
            source_norm: norm,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Stored entries of `L`.
    pub fn envelope_size(&self) -> usize {
        self.values.len()
    }

    /// `||A||_inf` of the factorized matrix.
    pub fn source_norm(&self) -> f64 {
        self.source_norm
    }

    pub fn solve(&self, r: &[f64]) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.n];
        self.solve_into(r, &mut out)?;
        Ok(out)
    }

    pub fn solve_into(&self, r: &[f64], out: &mut [f64]) -> Result<()> {
        if r.len() != self.n || out.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: if r.len() != self.n { r.len() } else { out.len() },
            });
        }
        let mut z: Vec<f64> = self.perm.iter().map(|&old| r[old]).collect();

        // L y = P r
        for i in 0..self.n {
            let fi = self.first[i];
            let row = &self.values[self.start[i]..self.start[i + 1]];
            let (off, diag) = row.split_at(i - fi);
            let dot: f64 = off.iter().zip(&z[fi..i]).map(|(l, y)| l * y).sum();
            z[i] = (z[i] - dot) / diag[0];
        }
        // Lᵀ x = y, column sweep over the row-stored factor
        for i in (0..self.n).rev() {
            let fi = self.first[i];
            let row = &self.values[self.start[i]..self.start[i + 1]];
            let (off, diag) = row.split_at(i - fi);
            z[i] /= diag[0];
            let xi = z[i];
            for (zj, l) in z[fi..i].iter_mut().zip(off) {
                *zj -= l * xi;
            }
        }

        for (new, &old) in self.perm.iter().enumerate() {
            out[old] = z[new];
        }
        Ok(())
    }
}

/// Solves `A z = r` with a factorization of `A`.
pub fn spd_solve(f: &SpdFactorization, r: &[f64]) -> Result<Vec<f64>> {
    f.solve(r)
}
