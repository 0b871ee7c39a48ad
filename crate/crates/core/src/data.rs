//! Sample containers: one side of a paired dataset, and the pair itself.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `n` samples of `dim`-dimensional complex vectors, stored row-major.
/// Real data has zero imaginary parts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSet {
    n: usize,
    dim: usize,
    data: Vec<Complex64>,
}

impl SampleSet {
    pub fn new(n: usize, dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidSampleSet(format!(
                "need at least 2 samples, got {n}"
            )));
        }
        if dim == 0 {
            return Err(Error::InvalidSampleSet(
                "dimension must be at least 1".into(),
            ));
        }
        if data.len() != n * dim {
            return Err(Error::InvalidSampleSet(format!(
                "expected {} entries for {n}x{dim}, got {}",
                n * dim,
                data.len()
            )));
        }
        if !data.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::NonFiniteInput);
        }
        Ok(SampleSet { n, dim, data })
    }

    pub fn from_real(n: usize, dim: usize, data: &[f64]) -> Result<Self> {
        Self::new(
            n,
            dim,
            data.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
        )
    }

    /// One real scalar per sample.
    pub fn from_scalars(values: &[f64]) -> Result<Self> {
        Self::from_real(values.len(), 1, values)
    }

    pub fn from_rows<R: AsRef<[Complex64]>>(rows: &[R]) -> Result<Self> {
        let dim = rows.first().map(|r| r.as_ref().len()).unwrap_or(0);
        if rows.iter().any(|r| r.as_ref().len() != dim) {
            return Err(Error::InvalidSampleSet("ragged rows".into()));
        }
        let data = rows
            .iter()
            .flat_map(|r| r.as_ref().iter().copied())
            .collect();
        Self::new(rows.len(), dim, data)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Complex64]> {
        self.data.chunks_exact(self.dim)
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub(crate) fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(|z| z.im == 0.0)
    }

    /// The real scalar sequence of a real, one-dimensional sample set.
    pub fn scalars(&self) -> Option<Vec<f64>> {
        (self.dim == 1 && self.is_real()).then(|| self.data.iter().map(|z| z.re).collect())
    }

    /// Samples reordered so that row `i` of the result is row `perm[i]` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        check_permutation(perm, self.n)?;
        let data = perm
            .iter()
            .flat_map(|&i| self.row(i).iter().copied())
            .collect();
        Ok(SampleSet {
            n: self.n,
            dim: self.dim,
            data,
        })
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Result<Self> {
        Self::new(self.n, self.dim, self.data.iter().map(|&z| f(z)).collect())
    }
}

pub(crate) fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    if perm.len() != n {
        return Err(Error::BadPermutation(n));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || std::mem::replace(&mut seen[p], true) {
            return Err(Error::BadPermutation(n));
        }
    }
    Ok(())
}

/// Aligned X (N x p) and Y (N x q) samples sharing the index `i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairedData {
    pub x: SampleSet,
    pub y: SampleSet,
}

impl PairedData {
    pub fn new(x: SampleSet, y: SampleSet) -> Result<Self> {
        if x.n() != y.n() {
            return Err(Error::ShapeMismatch(format!(
                "X has {} samples, Y has {}",
                x.n(),
                y.n()
            )));
        }
        Ok(PairedData { x, y })
    }

    pub fn n(&self) -> usize {
        self.x.n()
    }

    pub fn swapped(self) -> Self {
        PairedData {
            x: self.y,
            y: self.x,
        }
    }

    /// Both sides are real and one-dimensional, so the raw-data Chatterjee
    /// correlation applies.
    pub fn is_bivariate_real(&self) -> bool {
        self.x.scalars().is_some() && self.y.scalars().is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(SampleSet::from_scalars(&[1.0]).is_err());
        assert!(SampleSet::from_real(2, 0, &[]).is_err());
        assert!(SampleSet::from_real(2, 2, &[1.0, 2.0, 3.0]).is_err());
        assert!(matches!(
            SampleSet::from_scalars(&[1.0, f64::INFINITY]),
            Err(Error::NonFiniteInput)
        ));
        let x = SampleSet::from_scalars(&[1.0, 2.0]).unwrap();
        let y = SampleSet::from_scalars(&[1.0, 2.0, 3.0]).unwrap();
        assert!(matches!(
            PairedData::new(x, y),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn permutation_checks() {
        let s = SampleSet::from_scalars(&[1.0, 2.0, 3.0]).unwrap();
        assert!(s.permuted(&[0, 0, 1]).is_err());
        assert!(s.permuted(&[0, 1]).is_err());
        let p = s.permuted(&[2, 0, 1]).unwrap();
        assert_eq!(p.scalars().unwrap(), vec![3.0, 1.0, 2.0]);
    }
}
