//! Distance transform of a sample set.
//!
//! Samples are mapped to a vector of `M = N(N+1)/2` real scalars: pairwise
//! Euclidean (conjugate-transpose) distances, double centered, and the upper
//! triangle including the diagonal read row by row.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::data::SampleSet;
use crate::error::{Error, Result};

/// Dense row-major square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix {
    n: usize,
    values: Vec<f64>,
}

impl SquareMatrix {
    pub fn new(n: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != n * n {
            return Err(Error::ShapeMismatch(format!(
                "{} values for a {n}x{n} matrix",
                values.len()
            )));
        }
        Ok(SquareMatrix { n, values })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::ShapeMismatch("matrix is not square".into()));
        }
        Self::new(n, rows.concat())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.n..(i + 1) * self.n]
    }
}

/// The double-centered distance matrix `H a H`, symmetric by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct CenteredDistanceMatrix(SquareMatrix);

impl CenteredDistanceMatrix {
    pub fn n(&self) -> usize {
        self.0.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0.get(i, j)
    }

    pub fn as_slice(&self) -> &[f64] {
        self.0.as_slice()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        self.0.row(i)
    }

    pub fn max_abs(&self) -> f64 {
        self.0.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `B[perm[i], perm[j]]` for every `(i, j)`.
    ///
    /// Centering commutes with relabeling the samples, so this equals
    /// recomputing distances and centering on the permuted sample set.
    pub fn permuted(&self, perm: &[usize]) -> Result<CenteredDistanceMatrix> {
        let n = self.n();
        crate::data::check_permutation(perm, n)?;
        let mut values = Vec::with_capacity(n * n);
        for &pi in perm {
            let row = self.row(pi);
            values.extend(perm.iter().map(|&pj| row[pj]));
        }
        Ok(CenteredDistanceMatrix(SquareMatrix { n, values }))
    }
}

/// Flattened upper triangle (with diagonal) of a centered distance matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceVector {
    values: Vec<f64>,
    n_source: usize,
}

impl DistanceVector {
    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn n_source(&self) -> usize {
        self.n_source
    }
}

/// `M = N(N+1)/2`.
pub const fn flat_len(n: usize) -> usize {
    n * (n + 1) / 2
}

/// Start of row `i` in the flattened upper triangle of an `n x n` matrix.
/// Rows `0..i` hold `n + (n-1) + ... + (n-i+1)` entries.
#[inline]
pub const fn row_start(n: usize, i: usize) -> usize {
    i * n - i * i.saturating_sub(1) / 2
}

/// Flat index of `(i, j)`, `i <= j`, in row-major upper-triangle order.
#[inline]
pub fn flat_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i <= j && j < n);
    row_start(n, i) + (j - i)
}

/// Inverse of [`flat_index`].
pub fn flat_pair(n: usize, k: usize) -> (usize, usize) {
    assert!(k < flat_len(n), "flat index {k} out of range for n = {n}");
    let mut i = 0;
    let mut start = 0;
    while start + (n - i) <= k {
        start += n - i;
        i += 1;
    }
    (i, i + (k - start))
}

/// Euclidean norm of `a - b` with scaled accumulation, so large or tiny
/// components neither overflow nor underflow the sum of squares.
fn difference_norm(a: &[Complex64], b: &[Complex64]) -> f64 {
    let mut scale = 0.0f64;
    let mut ssq = 1.0f64;
    for (p, q) in a.iter().zip(b) {
        let d = p - q;
        for v in [d.re, d.im] {
            if v != 0.0 {
                let av = v.abs();
                if scale < av {
                    let r = scale / av;
                    ssq = 1.0 + ssq * r * r;
                    scale = av;
                } else {
                    let r = av / scale;
                    ssq += r * r;
                }
            }
        }
    }
    scale * ssq.sqrt()
}

/// Pairwise distances `a_ij = sqrt((X_i - X_j)^* (X_i - X_j))`.
pub fn pairwise_distances(s: &SampleSet) -> SquareMatrix {
    let n = s.n();
    let upper: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let xi = s.row(i);
            (i + 1..n).map(|j| difference_norm(xi, s.row(j))).collect()
        })
        .collect();
    let mut values = vec![0.0; n * n];
    for (i, row) in upper.iter().enumerate() {
        for (off, &d) in row.iter().enumerate() {
            let j = i + 1 + off;
            values[i * n + j] = d;
            values[j * n + i] = d;
        }
    }
    SquareMatrix { n, values }
}

/// `H a H` with `H = I - 11^T / N`, computed from row, column and grand means.
pub fn double_center(a: &SquareMatrix) -> Result<CenteredDistanceMatrix> {
    if !a.values.iter().all(|v| v.is_finite()) {
        return Err(Error::NonFiniteInput);
    }
    let n = a.n;
    let nf = n as f64;
    let row_means: Vec<f64> = (0..n).map(|i| a.row(i).iter().sum::<f64>() / nf).collect();
    // Column sums use the same summation order as row sums, so a symmetric
    // input yields bit-identical row and column means.
    let col_means: Vec<f64> = (0..n)
        .map(|j| (0..n).map(|i| a.get(i, j)).sum::<f64>() / nf)
        .collect();
    let grand = row_means.iter().sum::<f64>() / nf;
    let mut values = Vec::with_capacity(n * n);
    for (i, &r) in row_means.iter().enumerate() {
        for (&v, &c) in a.row(i).iter().zip(&col_means) {
            values.push((v + grand) - (r + c));
        }
    }
    Ok(CenteredDistanceMatrix(SquareMatrix { n, values }))
}

/// Row-major upper triangle including the diagonal.
pub fn flatten_upper(a: &CenteredDistanceMatrix) -> DistanceVector {
    let n = a.n();
    let mut values = Vec::with_capacity(flat_len(n));
    for i in 0..n {
        values.extend_from_slice(&a.row(i)[i..]);
    }
    DistanceVector {
        values,
        n_source: n,
    }
}

pub fn centered_distances(s: &SampleSet) -> Result<CenteredDistanceMatrix> {
    double_center(&pairwise_distances(s))
}

pub fn distance_transform(s: &SampleSet) -> Result<DistanceVector> {
    Ok(flatten_upper(&centered_distances(s)?))
}
