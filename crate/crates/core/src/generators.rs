//! Synthetic paired-data models and outlier contamination.
//!
//! Bivariate models draw `x ~ U[-1, 1]` and `eps ~ N(0, 1)`; noise enters as
//! `c * lambda * eps` with a model-specific weight. The multivariate models
//! use fixed noise weights and are swept over sample size instead. The
//! complex model couples two complex Gaussian components multiplicatively.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::data::{PairedData, SampleSet};
use crate::error::{Error, Result};
use crate::seed::{self, tag, StreamRng};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    /// `y = 0.5 x + 3 lambda eps`
    Linear1D,
    /// `y = |x + 0.5| [x < 0] + |x - 0.5| [x >= 0] + 0.75 lambda eps`
    WShape,
    /// `y = cos(8 pi x) + 3 lambda eps`
    Sinusoid,
    /// `y = z sqrt(1 - x^2) + 0.9 lambda eps`, `z = +-1` with equal probability
    Circular,
    /// `y_j = 0.5 x_j - 0.1 sum_{k != j} x_k + 0.4 eps_j`, `x_j ~ U[-1, 1]`
    LinearMV,
    /// `y_j = x_j^2 - 0.1 sum_{k != j} x_k^2 + 0.2 eps_j`, `x_j ~ U[-1, 1]`
    QuadraticMV,
    /// `y_j = ln x_j^2`, `x_j ~ N(0, 1)`
    LogQuadraticMV,
    /// `y_1 = a_1 x_1 x_2 + lambda eps_1`, `y_2 = a_2 x_1 conj(x_2) + lambda eps_2`
    PacComplex,
    /// `x`, `y` independent standard Gaussian scalars.
    Independent,
}

impl Model {
    pub const ALL: [Model; 9] = [
        Model::Linear1D,
        Model::WShape,
        Model::Sinusoid,
        Model::Circular,
        Model::LinearMV,
        Model::QuadraticMV,
        Model::LogQuadraticMV,
        Model::PacComplex,
        Model::Independent,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Model::Linear1D => "linear",
            Model::WShape => "w-shape",
            Model::Sinusoid => "sinusoid",
            Model::Circular => "circular",
            Model::LinearMV => "linear-mv",
            Model::QuadraticMV => "quadratic-mv",
            Model::LogQuadraticMV => "log-quadratic-mv",
            Model::PacComplex => "pac-complex",
            Model::Independent => "independent",
        }
    }

    pub fn from_name(s: &str) -> Option<Model> {
        Model::ALL.into_iter().find(|m| m.name() == s)
    }

    /// Dimension of X (and Y) when the model is not dimension-configurable.
    pub fn fixed_dim(self) -> Option<usize> {
        match self {
            Model::LinearMV | Model::QuadraticMV | Model::LogQuadraticMV => None,
            Model::PacComplex => Some(2),
            _ => Some(1),
        }
    }

    pub fn is_multivariate(self) -> bool {
        self.fixed_dim().is_none()
    }
}

impl std::fmt::Display for Model {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutlierSpec {
    pub fraction: f64,
    pub low: f64,
    pub high: f64,
}

impl OutlierSpec {
    /// 5% of Y entries set to values in [200, 210].
    pub const HEAVY: OutlierSpec = OutlierSpec {
        fraction: 0.05,
        low: 200.0,
        high: 210.0,
    };
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub model: Model,
    pub n: usize,
    /// Dimension of the multivariate models; ignored by the others.
    pub dim: usize,
    /// Noise level lambda. The multivariate models use fixed noise weights.
    pub noise: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outliers: Option<OutlierSpec>,
}

pub const DEFAULT_MV_DIM: usize = 5;

impl GeneratorSpec {
    pub fn new(model: Model, n: usize) -> Self {
        GeneratorSpec {
            model,
            n,
            dim: model.fixed_dim().unwrap_or(DEFAULT_MV_DIM),
            noise: 0.0,
            outliers: None,
        }
    }

    pub fn with_noise(mut self, noise: f64) -> Self {
        self.noise = noise;
        self
    }

    pub fn with_dim(mut self, dim: usize) -> Self {
        self.dim = dim;
        self
    }

    pub fn with_outliers(mut self, outliers: OutlierSpec) -> Self {
        self.outliers = Some(outliers);
        self
    }

    pub fn effective_dim(&self) -> usize {
        self.model.fixed_dim().unwrap_or(self.dim)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidSpec(format!(
                "n must be at least 2, got {}",
                self.n
            )));
        }
        if !(self.noise.is_finite() && self.noise >= 0.0) {
            return Err(Error::InvalidSpec(format!(
                "noise must be >= 0, got {}",
                self.noise
            )));
        }
        if self.model.is_multivariate() && self.dim == 0 {
            return Err(Error::InvalidSpec("dim must be at least 1".into()));
        }
        if let Some(o) = self.outliers {
            validate_outliers(o.fraction, o.low, o.high)?;
            if self.model == Model::PacComplex {
                return Err(Error::ComplexYUnsupported);
            }
        }
        Ok(())
    }

    /// Raw-data Chatterjee tests apply to this model.
    pub fn is_bivariate_real(&self) -> bool {
        !matches!(self.model, Model::PacComplex) && self.effective_dim() == 1
    }
}

fn validate_outliers(fraction: f64, low: f64, high: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&fraction) {
        return Err(Error::InvalidSpec(format!(
            "outlier fraction must lie in [0, 1], got {fraction}"
        )));
    }
    if !(low.is_finite() && high.is_finite() && low <= high) {
        return Err(Error::InvalidSpec(format!(
            "bad outlier range [{low}, {high}]"
        )));
    }
    Ok(())
}

pub fn w_shape(x: f64) -> f64 {
    if x < 0.0 {
        (x + 0.5).abs()
    } else {
        (x - 0.5).abs()
    }
}

fn normal(rng: &mut StreamRng) -> f64 {
    rng.sample(StandardNormal)
}

fn uniform_pm1(rng: &mut StreamRng) -> f64 {
    rng.random_range(-1.0..=1.0)
}

fn draw_complex_gaussian(rng: &mut StreamRng) -> Complex64 {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    Complex64::new(s * normal(rng), s * normal(rng))
}

fn draw_unit_modulus(rng: &mut StreamRng) -> Complex64 {
    Complex64::from_polar(1.0, rng.random_range(0.0..2.0 * PI))
}

/// `n` standard complex Gaussian draws: real and imaginary parts
/// independent `N(0, 1/2)`, so `E|z|^2 = 1`.
pub fn complex_gaussian(n: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = seed::rng(seed);
    (0..n).map(|_| draw_complex_gaussian(&mut rng)).collect()
}

/// `e^{i theta}` with `theta ~ U[0, 2 pi)`.
pub fn unit_modulus(seed: u64) -> Complex64 {
    draw_unit_modulus(&mut seed::rng(seed))
}

fn bivariate(
    n: usize,
    rng: &mut StreamRng,
    f: impl Fn(f64, &mut StreamRng) -> f64,
) -> Result<PairedData> {
    let mut xs = Vec::with_capacity(n);
    let mut ys = Vec::with_capacity(n);
    for _ in 0..n {
        let x = uniform_pm1(rng);
        xs.push(x);
        ys.push(f(x, rng));
    }
    PairedData::new(SampleSet::from_scalars(&xs)?, SampleSet::from_scalars(&ys)?)
}

/// `y_j = g(x_j) - 0.1 sum_{k != j} g(x_k) + w eps_j` on uniform inputs.
fn coupled_mv(
    n: usize,
    p: usize,
    rng: &mut StreamRng,
    g: impl Fn(f64) -> f64,
    self_weight: f64,
    noise_weight: f64,
) -> Result<PairedData> {
    let mut xs = Vec::with_capacity(n * p);
    let mut ys = Vec::with_capacity(n * p);
    for _ in 0..n {
        let row: Vec<f64> = (0..p).map(|_| uniform_pm1(rng)).collect();
        let total: f64 = row.iter().map(|&v| g(v)).sum();
        for &v in &row {
            let others = total - g(v);
            ys.push(self_weight * g(v) - 0.1 * others + noise_weight * normal(rng));
        }
        xs.extend(row);
    }
    PairedData::new(
        SampleSet::from_real(n, p, &xs)?,
        SampleSet::from_real(n, p, &ys)?,
    )
}

/// Generate one dataset. Bit-reproducible for a fixed `(spec, seed)`.
pub fn generate(spec: &GeneratorSpec, seed: u64) -> Result<PairedData> {
    spec.validate()?;
    let n = spec.n;
    let lam = spec.noise;
    let rng = &mut seed::rng_at(seed, &[tag::DATA]);
    let data = match spec.model {
        Model::Linear1D => bivariate(n, rng, |x, r| 0.5 * x + 3.0 * lam * normal(r))?,
        Model::WShape => bivariate(n, rng, |x, r| w_shape(x) + 0.75 * lam * normal(r))?,
        Model::Sinusoid => bivariate(n, rng, |x, r| (8.0 * PI * x).cos() + 3.0 * lam * normal(r))?,
        Model::Circular => bivariate(n, rng, |x, r| {
            let z = if r.random::<bool>() { 1.0 } else { -1.0 };
            z * (1.0 - x * x).sqrt() + 0.9 * lam * normal(r)
        })?,
        Model::LinearMV => coupled_mv(n, spec.dim, rng, |v| v, 0.5, 0.4)?,
        Model::QuadraticMV => coupled_mv(n, spec.dim, rng, |v| v * v, 1.0, 0.2)?,
        Model::LogQuadraticMV => {
            let p = spec.dim;
            let xs: Vec<f64> = (0..n * p).map(|_| normal(rng)).collect();
            let ys: Vec<f64> = xs.iter().map(|&v| (v * v).ln()).collect();
            PairedData::new(
                SampleSet::from_real(n, p, &xs)?,
                SampleSet::from_real(n, p, &ys)?,
            )?
        }
        Model::PacComplex => {
            let a1 = draw_unit_modulus(rng);
            let a2 = draw_unit_modulus(rng);
            let mut xs = Vec::with_capacity(2 * n);
            let mut ys = Vec::with_capacity(2 * n);
            for _ in 0..n {
                let x1 = draw_complex_gaussian(rng);
                let x2 = draw_complex_gaussian(rng);
                let e1 = draw_complex_gaussian(rng);
                let e2 = draw_complex_gaussian(rng);
                xs.extend([x1, x2]);
                ys.extend([a1 * x1 * x2 + e1 * lam, a2 * x1 * x2.conj() + e2 * lam]);
            }
            PairedData::new(SampleSet::new(n, 2, xs)?, SampleSet::new(n, 2, ys)?)?
        }
        Model::Independent => {
            let xs: Vec<f64> = (0..n).map(|_| normal(rng)).collect();
            let ys: Vec<f64> = (0..n).map(|_| normal(rng)).collect();
            PairedData::new(SampleSet::from_scalars(&xs)?, SampleSet::from_scalars(&ys)?)?
        }
    };
    match spec.outliers {
        Some(o) => inject_outliers(
            &data,
            o.fraction,
            o.low,
            o.high,
            seed::derive(seed, &[tag::OUTLIERS]),
        ),
        None => Ok(data),
    }
}

/// Replace `round(fraction * N * q)` distinct scalar entries of Y by
/// `U[low, high]` draws. X is untouched.
pub fn inject_outliers(
    d: &PairedData,
    fraction: f64,
    low: f64,
    high: f64,
    seed: u64,
) -> Result<PairedData> {
    validate_outliers(fraction, low, high)?;
    if !d.y.is_real() {
        return Err(Error::ComplexYUnsupported);
    }
    let total = d.y.n() * d.y.dim();
    let count = (fraction * total as f64).round() as usize;
    let mut out = d.clone();
    if count == 0 {
        return Ok(out);
    }
    let mut rng = seed::rng(seed);
    let positions = rand::seq::index::sample(&mut rng, total, count);
    let cells = out.y.as_mut_slice();
    for pos in positions.iter() {
        cells[pos] = Complex64::new(rng.random_range(low..=high), 0.0);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circular_without_noise_lies_on_circle() {
        let d = generate(&GeneratorSpec::new(Model::Circular, 200), 1).unwrap();
        for (x, y) in d.x.scalars().unwrap().iter().zip(d.y.scalars().unwrap()) {
            assert!((x * x + y * y - 1.0).abs() < 1e-12);
        }
        // Both branches appear.
        let ys = d.y.scalars().unwrap();
        assert!(ys.iter().any(|&v| v > 0.0) && ys.iter().any(|&v| v < 0.0));
    }

    #[test]
    fn w_shape_values() {
        assert_eq!(w_shape(-0.5), 0.0);
        assert_eq!(w_shape(-1.0), 0.5);
        assert_eq!(w_shape(0.5), 0.0);
        assert_eq!(w_shape(0.0), 0.5);
    }

    #[test]
    fn noiseless_bivariate_is_exact() {
        type Curve = fn(f64) -> f64;
        let cases: [(Model, Curve); 3] = [
            (Model::Linear1D, |x| 0.5 * x),
            (Model::WShape, w_shape),
            (Model::Sinusoid, |x| (8.0 * PI * x).cos()),
        ];
        for (model, f) in cases {
            let d = generate(&GeneratorSpec::new(model, 50), 3).unwrap();
            for (x, y) in d.x.scalars().unwrap().iter().zip(d.y.scalars().unwrap()) {
                assert_eq!(y, f(*x) + 0.0, "{model}");
                assert!((-1.0..=1.0).contains(x));
            }
        }
    }

    #[test]
    fn log_quadratic_is_exact() {
        let d = generate(&GeneratorSpec::new(Model::LogQuadraticMV, 40), 2).unwrap();
        assert_eq!((d.x.dim(), d.y.dim()), (5, 5));
        for (x, y) in d.x.as_slice().iter().zip(d.y.as_slice()) {
            assert_eq!(y.re, (x.re * x.re).ln());
        }
    }

    #[test]
    fn multivariate_noise_residuals() {
        // Residual after removing the deterministic part is the weighted noise.
        let d = generate(&GeneratorSpec::new(Model::QuadraticMV, 400), 4).unwrap();
        let mut resid = Vec::new();
        for (xr, yr) in d.x.rows().zip(d.y.rows()) {
            let sq: Vec<f64> = xr.iter().map(|z| z.re * z.re).collect();
            let total: f64 = sq.iter().sum();
            for (j, y) in yr.iter().enumerate() {
                resid.push(y.re - (sq[j] - 0.1 * (total - sq[j])));
            }
        }
        let var = resid.iter().map(|r| r * r).sum::<f64>() / resid.len() as f64;
        assert!((var.sqrt() - 0.2).abs() < 0.01, "{}", var.sqrt());
    }

    #[test]
    fn pac_modulus_relation() {
        let d = generate(&GeneratorSpec::new(Model::PacComplex, 100), 5).unwrap();
        assert_eq!((d.x.dim(), d.y.dim()), (2, 2));
        for (x, y) in d.x.rows().zip(d.y.rows()) {
            let want1 = x[0].norm() * x[1].norm();
            assert!((y[0].norm() - want1).abs() <= 1e-12 * want1.max(1e-300));
            assert!((y[1].norm() - want1).abs() <= 1e-12 * want1.max(1e-300));
        }
        assert!(!d.y.is_real());
    }

    #[test]
    fn reproducible() {
        for model in Model::ALL {
            let spec = GeneratorSpec::new(model, 30).with_noise(0.3);
            assert_eq!(generate(&spec, 11).unwrap(), generate(&spec, 11).unwrap());
            assert_ne!(generate(&spec, 11).unwrap(), generate(&spec, 12).unwrap());
        }
    }

    #[test]
    fn dimensions() {
        for model in [
            Model::Linear1D,
            Model::WShape,
            Model::Sinusoid,
            Model::Circular,
        ] {
            let d = generate(&GeneratorSpec::new(model, 10), 0).unwrap();
            assert_eq!((d.x.dim(), d.y.dim()), (1, 1));
        }
        for model in [Model::LinearMV, Model::QuadraticMV, Model::LogQuadraticMV] {
            let d = generate(&GeneratorSpec::new(model, 10), 0).unwrap();
            assert_eq!((d.x.dim(), d.y.dim()), (5, 5));
        }
    }

    #[test]
    fn invalid_specs() {
        assert!(generate(&GeneratorSpec::new(Model::Sinusoid, 1), 0).is_err());
        assert!(generate(&GeneratorSpec::new(Model::Sinusoid, 10).with_noise(-1.0), 0).is_err());
        let bad = GeneratorSpec::new(Model::LogQuadraticMV, 10).with_outliers(OutlierSpec {
            fraction: 1.5,
            low: 0.0,
            high: 1.0,
        });
        assert!(matches!(generate(&bad, 0), Err(Error::InvalidSpec(_))));
    }

    #[test]
    fn outlier_count_and_range() {
        let clean = generate(&GeneratorSpec::new(Model::LogQuadraticMV, 100), 8).unwrap();
        let dirty = inject_outliers(&clean, 0.05, 200.0, 210.0, 3).unwrap();
        assert_eq!(dirty.x, clean.x);
        let changed: Vec<f64> = clean
            .y
            .as_slice()
            .iter()
            .zip(dirty.y.as_slice())
            .filter(|(a, b)| a != b)
            .map(|(_, b)| b.re)
            .collect();
        assert_eq!(changed.len(), 25);
        assert!(changed.iter().all(|v| (200.0..=210.0).contains(v)));

        let same = inject_outliers(&clean, 0.0, 200.0, 210.0, 3).unwrap();
        assert_eq!(same, clean);

        let spec = GeneratorSpec::new(Model::LogQuadraticMV, 100).with_outliers(OutlierSpec::HEAVY);
        let d = generate(&spec, 8).unwrap();
        let big = d.y.as_slice().iter().filter(|z| z.re >= 200.0).count();
        assert_eq!(big, 25);
    }

    #[test]
    fn outliers_refuse_complex_y() {
        let d = generate(&GeneratorSpec::new(Model::PacComplex, 10), 0).unwrap();
        assert!(matches!(
            inject_outliers(&d, 0.1, 1.0, 2.0, 0),
            Err(Error::ComplexYUnsupported)
        ));
    }

    #[test]
    fn complex_gaussian_unit_power() {
        let z = complex_gaussian(100_000, 17);
        let p = z.iter().map(|v| v.norm_sqr()).sum::<f64>() / z.len() as f64;
        assert!((p - 1.0).abs() < 0.02, "{p}");
        assert_eq!(complex_gaussian(5, 3), complex_gaussian(5, 3));
        assert_eq!(complex_gaussian(1, 3).len(), 1);
    }

    #[test]
    fn unit_modulus_draws() {
        let mut sum = Complex64::new(0.0, 0.0);
        for s in 0..10_000u64 {
            let a = unit_modulus(s);
            assert!((a.norm() - 1.0).abs() <= 1e-15);
            sum += a;
        }
        sum /= 10_000.0;
        assert!(sum.re.abs() < 0.05 && sum.im.abs() < 0.05);
        assert_eq!(unit_modulus(4), unit_modulus(4));
    }
}
