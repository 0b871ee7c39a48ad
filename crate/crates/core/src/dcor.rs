//! Distance correlation (V-statistic form), the symmetric baseline.

use serde::{Deserialize, Serialize};

use crate::data::SampleSet;
use crate::error::{Error, Result};
use crate::transform::{centered_distances, CenteredDistanceMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DcorStatistic {
    pub value: f64,
}

/// `(1/N^2) sum_ij A_ij B_ij`.
pub fn dcov_squared(a: &CenteredDistanceMatrix, b: &CenteredDistanceMatrix) -> f64 {
    let n = a.n() as f64;
    let s: f64 = a
        .as_slice()
        .iter()
        .zip(b.as_slice())
        .map(|(p, q)| p * q)
        .sum();
    s / (n * n)
}

/// Distance correlation from a squared covariance and the two squared
/// variances. Degenerate (zero-variance) input gives 0.
pub fn dcor_from_moments(dcov2: f64, dvar2_x: f64, dvar2_y: f64) -> f64 {
    let denom = (dvar2_x * dvar2_y).sqrt();
    if denom.is_nan() || denom <= 0.0 {
        return 0.0;
    }
    (dcov2.max(0.0) / denom).sqrt().min(1.0)
}

pub fn dcor_from_centered(a: &CenteredDistanceMatrix, b: &CenteredDistanceMatrix) -> f64 {
    dcor_from_moments(dcov_squared(a, b), dcov_squared(a, a), dcov_squared(b, b))
}

pub fn distance_correlation(x: &SampleSet, y: &SampleSet) -> Result<DcorStatistic> {
    if x.n() != y.n() {
        return Err(Error::ShapeMismatch(format!(
            "X has {} samples, Y has {}",
            x.n(),
            y.n()
        )));
    }
    let a = centered_distances(x)?;
    let b = centered_distances(y)?;
    Ok(DcorStatistic {
        value: dcor_from_centered(&a, &b),
    })
}
