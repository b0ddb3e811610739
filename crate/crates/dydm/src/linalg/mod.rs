//! Symmetric matrices, ordered spectra, and spectral preprocessing.

mod invariant;
mod jacobi;
mod rescale;

pub use invariant::{
    invariant_log_density, invariant_score, sample_invariant_matrix, sample_invariant_spectrum,
};
pub use jacobi::eig_sym;
pub use rescale::{fit_rescale, PerturbationEvent, RescaleMap};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Real symmetric matrix with packed upper-triangle storage.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymMatrix {
    n: usize,
    /// Row-wise packed upper triangle: entry (i, j) with i <= j sits at
    /// `i*n - i*(i-1)/2 + (j-i)`.
    upper: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        SymMatrix {
            n,
            upper: vec![0.0; n * (n + 1) / 2],
        }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = SymMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Diagonal matrix with the given entries.
    pub fn diag(values: &[f64]) -> Self {
        let mut m = SymMatrix::zeros(values.len());
        for (i, v) in values.iter().enumerate() {
            m.set(i, i, *v);
        }
        m
    }

    #[inline]
    fn index(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        i * self.n - i * (i.wrapping_sub(1)) / 2 + (j - i)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.upper[self.index(i, j)]
    }

    /// Sets entry (i, j) and its mirror.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let idx = self.index(i, j);
        self.upper[idx] = v;
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Dense row-major copy.
    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.n;
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let v = self.get(i, j);
                out[i * n + j] = v;
                out[j * n + i] = v;
            }
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.n {
            for j in i..self.n {
                let v = self.get(i, j);
                acc += if i == j { v * v } else { 2.0 * v * v };
            }
        }
        acc.sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.upper.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.upper.iter().all(|v| v.is_finite())
    }
}

/// Strictly descending eigenvalue vector: a point in the open Weyl chamber.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Spectrum(Vec<f64>);

impl Spectrum {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        for (i, v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::numeric(format!("non-finite eigenvalue at {i}")));
            }
        }
        for i in 1..values.len() {
            let gap = values[i - 1] - values[i];
            if gap <= 0.0 {
                return Err(Error::NotOrdered { index: i, gap });
            }
        }
        Ok(Spectrum(values))
    }

    /// Skips validation; the caller must guarantee strict descending order.
    pub(crate) fn new_unchecked(values: Vec<f64>) -> Self {
        debug_assert!(values.windows(2).all(|w| w[0] > w[1]));
        Spectrum(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Smallest adjacent gap. Positive by construction.
    pub fn min_gap(&self) -> f64 {
        self.0
            .windows(2)
            .map(|w| w[0] - w[1])
            .fold(f64::INFINITY, f64::min)
    }

    pub fn into_values(self) -> Vec<f64> {
        self.0
    }
}

impl TryFrom<Vec<f64>> for Spectrum {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        Spectrum::new(v)
    }
}

impl From<Spectrum> for Vec<f64> {
    fn from(s: Spectrum) -> Vec<f64> {
        s.0
    }
}

/// Returns true when `values` is strictly descending and finite.
pub fn strictly_descending(values: &[f64]) -> bool {
    values.iter().all(|v| v.is_finite()) && values.windows(2).all(|w| w[0] > w[1])
}

/// Eigendecomposition result: descending eigenvalues (ties permitted, unlike
/// [`Spectrum`]) with matching orthonormal eigenvectors.
#[derive(Clone, Debug)]
pub struct EigenPair {
    /// Descending eigenvalues.
    pub values: Vec<f64>,
    /// Column-major: `vectors[k*n..(k+1)*n]` is the unit eigenvector of
    /// `values[k]`.
    pub vectors: Vec<f64>,
    pub n: usize,
}

impl EigenPair {
    pub fn vector(&self, k: usize) -> &[f64] {
        &self.vectors[k * self.n..(k + 1) * self.n]
    }

    /// max |V^T V - I|
    pub fn orthonormality_defect(&self) -> f64 {
        let n = self.n;
        let mut worst: f64 = 0.0;
        for a in 0..n {
            for b in a..n {
                let dot: f64 = self
                    .vector(a)
                    .iter()
                    .zip(self.vector(b))
                    .map(|(x, y)| x * y)
                    .sum();
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn packed_storage_is_symmetric() {
        let mut m = SymMatrix::zeros(3);
        m.set(0, 2, 5.0);
        m.set(2, 1, -1.5);
        assert_eq!(m.get(2, 0), 5.0);
        assert_eq!(m.get(1, 2), -1.5);
        assert_eq!(m.get(1, 1), 0.0);
    }

    #[test]
    fn spectrum_rejects_ties_and_disorder() {
        assert!(Spectrum::new(vec![2.0, 1.0, 1.0]).is_err());
        assert!(Spectrum::new(vec![1.0, 2.0]).is_err());
        assert!(Spectrum::new(vec![f64::NAN]).is_err());
        let s = Spectrum::new(vec![3.0, 1.0, -2.0]).unwrap();
        assert_eq!(s.min_gap(), 2.0);
    }
}
