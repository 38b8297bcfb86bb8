use crate::error::{Error, Result};

/// `u = re + i·im` stored as two real vectors of equal length.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PairVector {
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl PairVector {
    pub fn new(re: Vec<f64>, im: Vec<f64>) -> Result<Self> {
        if re.len() != im.len() {
            return Err(Error::DimensionMismatch {
                expected: re.len(),
                found: im.len(),
            });
        }
        Ok(PairVector { re, im })
    }

    pub fn zeros(n: usize) -> Self {
        PairVector {
            re: vec![0.0; n],
            im: vec![0.0; n],
        }
    }

    pub fn len(&self) -> usize {
        self.re.len()
    }

    pub fn is_empty(&self) -> bool {
        self.re.is_empty()
    }

    /// Complex Euclidean norm `sqrt(||re||² + ||im||²)`.
    pub fn norm(&self) -> f64 {
        (norm_sq(&self.re) + norm_sq(&self.im)).sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.re.iter().chain(&self.im).all(|v| v.is_finite())
    }

    /// Largest entrywise difference over both parts.
    pub fn max_abs_diff(&self, other: &PairVector) -> f64 {
        self.re
            .iter()
            .zip(&other.re)
            .chain(self.im.iter().zip(&other.im))
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

pub(crate) fn norm_sq(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum()
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
