use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Real symmetric sparse matrix in compressed-row form.
///
/// Both triangles are stored. Column indices are strictly increasing within a
/// row, no stored value is zero, and every `(i, j, v)` has a matching
/// `(j, i, v)` with bitwise-equal value.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix {
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl SparseMatrix {
    /// Builds a matrix from `(row, col, value)` triplets. Duplicates are summed,
    /// zeros are dropped and the result must be exactly symmetric.
    pub fn from_triplets(n: usize, triplets: &[(usize, usize, f64)]) -> Result<Self> {
        let mut acc: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        for &(i, j, v) in triplets {
            if i >= n || j >= n {
                return Err(Error::InvalidInput(format!(
                    "entry ({i}, {j}) out of range for dimension {n}"
                )));
            }
            if !v.is_finite() {
                return Err(Error::InvalidInput(format!("non-finite value at ({i}, {j})")));
            }
            *acc.entry((i, j)).or_insert(0.0) += v;
        }
        for (&(i, j), &v) in &acc {
            let mirror = acc.get(&(j, i)).copied().unwrap_or(0.0);
            if v != mirror {
                return Err(Error::InvalidInput(format!(
                    "asymmetric entries: ({i}, {j}) = {v}, ({j}, {i}) = {mirror}"
                )));
            }
        }
        Ok(Self::from_sorted_map(n, acc))
    }

    /// Row-major dense input; must be exactly symmetric.
    pub fn from_dense(n: usize, data: &[f64]) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: data.len(),
            });
        }
        let triplets: Vec<_> = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| data[i * n + j] != 0.0)
            .map(|(i, j)| (i, j, data[i * n + j]))
            .collect();
        Self::from_triplets(n, &triplets)
    }

    fn from_sorted_map(n: usize, acc: BTreeMap<(usize, usize), f64>) -> Self {
        let mut row_ptr = vec![0; n + 1];
        let mut col_idx = Vec::with_capacity(acc.len());
        let mut values = Vec::with_capacity(acc.len());
        for ((i, j), v) in acc {
            if v == 0.0 {
                continue;
            }
            row_ptr[i + 1] += 1;
            col_idx.push(j);
            values.push(v);
        }
        for i in 0..n {
            row_ptr[i + 1] += row_ptr[i];
        }
        SparseMatrix {
            n,
            row_ptr,
            col_idx,
            values,
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![1.0; n])
    }

    pub fn diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut col_idx = Vec::with_capacity(n);
        let mut values = Vec::with_capacity(n);
        row_ptr.push(0);
        for (i, &d) in diag.iter().enumerate() {
            if d != 0.0 {
                col_idx.push(i);
                values.push(d);
            }
            row_ptr.push(col_idx.len());
        }
        SparseMatrix {
            n,
            row_ptr,
            col_idx,
            values,
        }
    }

    pub fn zeros(n: usize) -> Self {
        SparseMatrix {
            n,
            row_ptr: vec![0; n + 1],
            col_idx: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// `(column, value)` pairs of row `i`.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.row_ptr[i]..self.row_ptr[i + 1];
        self.col_idx[range.clone()]
            .iter()
            .copied()
            .zip(self.values[range].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let range = self.row_ptr[i]..self.row_ptr[i + 1];
        match self.col_idx[range.clone()].binary_search(&j) {
            Ok(k) => self.values[range.start + k],
            Err(_) => 0.0,
        }
    }

    pub fn diag(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    /// All stored entries as `(row, col, value)`.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n).flat_map(move |i| self.row(i).map(move |(j, v)| (i, j, v)))
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.n * self.n];
        for (i, j, v) in self.triplets() {
            out[i * self.n + j] = v;
        }
        out
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.n)
            .map(|i| self.row(i).map(|(_, v)| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn is_symmetric(&self) -> bool {
        self.triplets().all(|(i, j, v)| self.get(j, i) == v)
    }

    pub fn scale(&self, s: f64) -> Self {
        if s == 0.0 {
            return Self::zeros(self.n);
        }
        SparseMatrix {
            n: self.n,
            row_ptr: self.row_ptr.clone(),
            col_idx: self.col_idx.clone(),
            values: self.values.iter().map(|v| v * s).collect(),
        }
    }

    /// `a * self + b * other`, dropping entries that cancel.
    pub fn linear_combination(&self, a: f64, other: &SparseMatrix, b: f64) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        let mut row_ptr = Vec::with_capacity(self.n + 1);
        let mut col_idx = Vec::with_capacity(self.nnz() + other.nnz());
        let mut values = Vec::with_capacity(self.nnz() + other.nnz());
        row_ptr.push(0);
        let push = |col_idx: &mut Vec<usize>, values: &mut Vec<f64>, j: usize, v: f64| {
            if v != 0.0 {
                col_idx.push(j);
                values.push(v);
            }
        };
        for i in 0..self.n {
            let mut left = self.row(i).peekable();
            let mut right = other.row(i).peekable();
            loop {
                match (left.peek().copied(), right.peek().copied()) {
                    (Some((jl, vl)), Some((jr, vr))) => {
                        if jl == jr {
                            push(&mut col_idx, &mut values, jl, a * vl + b * vr);
                            left.next();
                            right.next();
                        } else if jl < jr {
                            push(&mut col_idx, &mut values, jl, a * vl);
                            left.next();
                        } else {
                            push(&mut col_idx, &mut values, jr, b * vr);
                            right.next();
                        }
                    }
                    (Some((jl, vl)), None) => {
                        push(&mut col_idx, &mut values, jl, a * vl);
                        left.next();
                    }
                    (None, Some((jr, vr))) => {
                        push(&mut col_idx, &mut values, jr, b * vr);
                        right.next();
                    }
                    (None, None) => break,
                }
            }
            row_ptr.push(col_idx.len());
        }
        Ok(SparseMatrix {
            n: self.n,
            row_ptr,
            col_idx,
            values,
        })
    }

    pub fn add(&self, other: &SparseMatrix) -> Result<Self> {
        self.linear_combination(1.0, other, 1.0)
    }

    /// `self + shift * I`.
    pub fn shift(&self, shift: f64) -> Self {
        self.add(&Self::identity(self.n).scale(shift))
            .expect("identity has matching dimension")
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &SparseMatrix) -> Self {
        let (na, nb) = (self.n, other.n);
        let n = na * nb;
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut col_idx = Vec::with_capacity(self.nnz() * other.nnz());
        let mut values = Vec::with_capacity(self.nnz() * other.nnz());
        row_ptr.push(0);
        for ia in 0..na {
            for ib in 0..nb {
                for (ja, va) in self.row(ia) {
                    for (jb, vb) in other.row(ib) {
                        let v = va * vb;
                        if v != 0.0 {
                            col_idx.push(ja * nb + jb);
                            values.push(v);
                        }
                    }
                }
                row_ptr.push(col_idx.len());
            }
        }
        SparseMatrix {
            n,
            row_ptr,
            col_idx,
            values,
        }
    }

    /// `y = A v`.
    pub fn spmv(&self, v: &[f64]) -> Result<Vec<f64>> {
        let mut y = vec![0.0; self.n];
        self.spmv_into(v, &mut y)?;
        Ok(y)
    }

    pub fn spmv_into(&self, v: &[f64], y: &mut [f64]) -> Result<()> {
        if v.len() != self.n || y.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: if v.len() != self.n { v.len() } else { y.len() },
            });
        }
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = self.row(i).map(|(j, a)| a * v[j]).sum();
        }
        Ok(())
    }

    /// Unchecked product for hot loops; lengths must already match.
    pub(crate) fn mul_into(&self, v: &[f64], y: &mut [f64]) {
        debug_assert_eq!(v.len(), self.n);
        for (i, yi) in y.iter_mut().enumerate() {
            let mut s = 0.0;
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                s += self.values[k] * v[self.col_idx[k]];
            }
            *yi = s;
        }
    }
}

/// `scale * tridiag(-1, 2, -1)` of size `m`.
pub fn tridiag(m: usize, scale: f64) -> Result<SparseMatrix> {
    if m == 0 {
        return Err(Error::InvalidDimension("tridiag needs m >= 1".into()));
    }
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(Error::InvalidInput(format!("tridiag scale must be > 0, got {scale}")));
    }
    let mut triplets = Vec::with_capacity(3 * m);
    for i in 0..m {
        if i > 0 {
            triplets.push((i, i - 1, -scale));
        }
        triplets.push((i, i, 2.0 * scale));
        if i + 1 < m {
            triplets.push((i, i + 1, -scale));
        }
    }
    SparseMatrix::from_triplets(m, &triplets)
}

/// `I ⊗ V + V ⊗ I`.
pub fn kron_sum(v: &SparseMatrix) -> SparseMatrix {
    let id = SparseMatrix::identity(v.dim());
    id.kron(v)
        .add(&v.kron(&id))
        .expect("kronecker factors share dimension")
}

/// Adds explicit `(i, j, value)` corrections. The list itself must be
/// symmetric: every `(i, j, v)` needs a matching `(j, i, v)`.
pub fn add_rank_correction(a: &SparseMatrix, pairs: &[(usize, usize, f64)]) -> Result<SparseMatrix> {
    let correction = SparseMatrix::from_triplets(a.dim(), pairs)?;
    a.add(&correction)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_oracle::sym_eigenvalues;
    use proptest::prelude::*;

    #[test]
    fn tridiag_small_cases() {
        assert_eq!(tridiag(1, 1.0).unwrap().to_dense(), vec![2.0]);
        assert_eq!(tridiag(2, 9.0).unwrap().to_dense(), vec![18.0, -9.0, -9.0, 18.0]);
        assert!(matches!(tridiag(0, 1.0), Err(Error::InvalidDimension(_))));
        assert!(tridiag(3, 0.0).is_err());
    }

    #[test]
    fn tridiag_spectrum() {
        let t = tridiag(3, 1.0).unwrap();
        let ev = sym_eigenvalues(3, &t.to_dense());
        let s2 = 2f64.sqrt();
        let expected = [2.0 - s2, 2.0, 2.0 + s2];
        for (a, b) in ev.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12, "{ev:?}");
        }
    }

    #[test]
    fn kron_sum_examples() {
        let one = SparseMatrix::diagonal(&[2.0]);
        assert_eq!(kron_sum(&one).to_dense(), vec![4.0]);

        let v = tridiag(2, 9.0).unwrap();
        let k = kron_sum(&v);
        assert_eq!(k.dim(), 4);
        assert_eq!(k.diag(), vec![36.0; 4]);
        for i in 0..4 {
            let off: Vec<f64> = k.row(i).filter(|&(j, _)| j != i).map(|(_, x)| x).collect();
            assert!(off.iter().all(|&x| x == -9.0));
            assert_eq!(k.row(i).map(|(_, x)| x).sum::<f64>(), 18.0);
        }
        let ev = sym_eigenvalues(4, &k.to_dense());
        for (a, b) in ev.iter().zip([18.0, 36.0, 36.0, 54.0]) {
            assert!((a - b).abs() < 1e-10, "{ev:?}");
        }
        assert!(k.is_symmetric());
    }

    #[test]
    fn rank_correction() {
        let a = tridiag(3, 1.0).unwrap();
        assert_eq!(add_rank_correction(&a, &[]).unwrap(), a);

        let z = SparseMatrix::zeros(2);
        let b = add_rank_correction(&z, &[(0, 1, -1.0), (1, 0, -1.0)]).unwrap();
        assert_eq!(b.to_dense(), vec![0.0, -1.0, -1.0, 0.0]);

        let vc = add_rank_correction(&a, &[(0, 2, -1.0), (2, 0, -1.0)]).unwrap();
        assert_eq!(vc.get(0, 2), -1.0);
        assert_eq!(vc.get(2, 0), -1.0);
        assert_eq!(vc.get(1, 1), 2.0);

        let err = add_rank_correction(&a, &[(0, 2, -1.0)]);
        assert!(matches!(err, Err(Error::InvalidInput(_))));
    }

    #[test]
    fn cancellation_drops_entries() {
        let a = tridiag(3, 1.0).unwrap();
        let z = a.linear_combination(1.0, &a, -1.0).unwrap();
        assert_eq!(z.nnz(), 0);
    }

    #[test]
    fn spmv_examples() {
        let id = SparseMatrix::identity(3);
        assert_eq!(id.spmv(&[1.0, -2.0, 5.0]).unwrap(), vec![1.0, -2.0, 5.0]);
        let t = tridiag(2, 9.0).unwrap();
        assert_eq!(t.spmv(&[1.0, 1.0]).unwrap(), vec![9.0, 9.0]);
        assert_eq!(t.spmv(&[0.0, 0.0]).unwrap(), vec![0.0, 0.0]);
        assert!(matches!(
            t.spmv(&[1.0]),
            Err(Error::DimensionMismatch { expected: 2, found: 1 })
        ));
    }

    fn small_symmetric() -> impl Strategy<Value = (usize, Vec<f64>)> {
        (1usize..=4).prop_flat_map(|m| {
            prop::collection::vec(-3.0f64..3.0, m * m).prop_map(move |raw| {
                let mut d = vec![0.0; m * m];
                for i in 0..m {
                    for j in 0..m {
                        d[i * m + j] = raw[i * m + j] + raw[j * m + i];
                    }
                }
                (m, d)
            })
        })
    }

    proptest! {
        #[test]
        fn kron_sum_spectrum_is_pairwise_sums((m, dense) in small_symmetric()) {
            let v = SparseMatrix::from_dense(m, &dense).unwrap();
            let k = kron_sum(&v);
            prop_assert!(k.is_symmetric());
            let ev = sym_eigenvalues(m, &dense);
            let mut sums: Vec<f64> = ev.iter().flat_map(|a| ev.iter().map(move |b| a + b)).collect();
            sums.sort_by(f64::total_cmp);
            let kev = sym_eigenvalues(m * m, &k.to_dense());
            for (a, b) in kev.iter().zip(&sums) {
                prop_assert!((a - b).abs() < 1e-10);
            }
        }
    }
}
