//! Monte-Carlo power estimation.
//!
//! For each simulation a dataset is generated and one synchronized
//! permutation test is run; every hypothesis shares its K draws. Power is the
//! fraction of simulations with `p < alpha`. Seeds derive from
//! `(master, point index, simulation index)` so any grid point can be
//! recomputed on its own, and results do not depend on the worker count.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::{generate, GeneratorSpec, Model};
use crate::permutation::{Hypothesis, PValueRule, PValues, SynchronizedTest, TestConfig};
use crate::ranks::TiePolicy;
use crate::seed::{self, tag};

pub const DEFAULT_REPETITIONS: usize = 250;
pub const DEFAULT_PERMUTATIONS: usize = 250;
pub const DEFAULT_ALPHA: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerSettings {
    pub alpha: f64,
    pub n_sim: usize,
    pub permutations: usize,
    pub seed: u64,
}

impl PowerSettings {
    pub fn new(alpha: f64, n_sim: usize, permutations: usize, seed: u64) -> Self {
        PowerSettings {
            alpha,
            n_sim,
            permutations,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_sim == 0 {
            return Err(Error::InvalidSpec("n_sim must be at least 1".into()));
        }
        if self.permutations == 0 {
            return Err(Error::InvalidK);
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidSpec(format!(
                "alpha must lie in (0, 1), got {}",
                self.alpha
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerPoint {
    pub spec: GeneratorSpec,
    pub alpha: f64,
    pub n_sim: usize,
    #[serde(rename = "K")]
    pub permutations: usize,
    /// Keyed by power label; raw-Chatterjee entries only for bivariate real data.
    pub power_by_test: BTreeMap<Hypothesis, f64>,
}

impl PowerPoint {
    pub fn power(&self, h: Hypothesis) -> Option<f64> {
        self.power_by_test.get(&h).copied()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    NoiseLambda,
    SampleSize,
}

impl Axis {
    pub fn name(self) -> &'static str {
        match self {
            Axis::NoiseLambda => "lambda",
            Axis::SampleSize => "n",
        }
    }

    pub fn value_of(self, spec: &GeneratorSpec) -> f64 {
        match self {
            Axis::NoiseLambda => spec.noise,
            Axis::SampleSize => spec.n as f64,
        }
    }

    fn apply(self, template: &GeneratorSpec, value: f64) -> Result<GeneratorSpec> {
        let mut spec = *template;
        match self {
            Axis::NoiseLambda => spec.noise = value,
            Axis::SampleSize => {
                if value.fract() != 0.0 || value < 2.0 {
                    return Err(Error::InvalidSpec(format!("bad sample size {value}")));
                }
                spec.n = value as usize;
            }
        }
        Ok(spec)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerCurve {
    pub model: Model,
    pub axis: Axis,
    pub points: Vec<PowerPoint>,
}

impl PowerCurve {
    pub fn axis_values(&self) -> Vec<f64> {
        self.points
            .iter()
            .map(|p| self.axis.value_of(&p.spec))
            .collect()
    }
}

/// p-values of every applicable test for `n_sim` simulated datasets at grid
/// point `point`.
pub fn simulate_pvalues(
    spec: &GeneratorSpec,
    settings: &PowerSettings,
    point: usize,
) -> Result<Vec<PValues>> {
    settings.validate()?;
    spec.validate()?;
    (0..settings.n_sim)
        .into_par_iter()
        .map(|sim| {
            let path = [point as u64, sim as u64];
            let data = generate(spec, seed::derive(settings.seed, &path))?;
            let ties = TiePolicy::RandomBreak {
                seed: seed::derive(settings.seed, &[path[0], path[1], tag::TIES]),
            };
            let config = TestConfig {
                permutations: settings.permutations,
                seed: seed::derive(settings.seed, &[path[0], path[1], tag::TEST]),
                ties,
                pvalue_rule: PValueRule::Exact,
            };
            Ok(SynchronizedTest::new(&data.x, &data.y, ties)?
                .run(&config)?
                .p_values)
        })
        .collect()
}

/// Fraction of `p < alpha` per hypothesis present in every simulation.
pub fn power_from_pvalues(pvalues: &[PValues], alpha: f64) -> BTreeMap<Hypothesis, f64> {
    let n = pvalues.len();
    Hypothesis::ALL
        .into_iter()
        .filter(|&h| n > 0 && pvalues.iter().all(|p| p.get(h).is_some()))
        .map(|h| {
            let hits = pvalues
                .iter()
                .filter(|p| p.get(h).is_some_and(|v| v < alpha))
                .count();
            (h, hits as f64 / n as f64)
        })
        .collect()
}

fn point_at(spec: &GeneratorSpec, settings: &PowerSettings, point: usize) -> Result<PowerPoint> {
    let pvalues = simulate_pvalues(spec, settings, point)?;
    Ok(PowerPoint {
        spec: *spec,
        alpha: settings.alpha,
        n_sim: settings.n_sim,
        permutations: settings.permutations,
        power_by_test: power_from_pvalues(&pvalues, settings.alpha),
    })
}

/// Power of every applicable test for one generator configuration.
pub fn estimate_power(spec: &GeneratorSpec, settings: &PowerSettings) -> Result<PowerPoint> {
    point_at(spec, settings, 0)
}

/// One power estimate per axis value. Values must be strictly increasing.
pub fn power_curve(
    template: &GeneratorSpec,
    axis: Axis,
    values: &[f64],
    settings: &PowerSettings,
) -> Result<PowerCurve> {
    if values.is_empty() {
        return Err(Error::InvalidSpec("empty axis grid".into()));
    }
    if values
        .windows(2)
        .any(|w| w[0].partial_cmp(&w[1]) != Some(Ordering::Less))
    {
        return Err(Error::InvalidSpec(
            "axis values must be strictly increasing".into(),
        ));
    }
    let points = values
        .iter()
        .enumerate()
        .map(|(i, &v)| point_at(&axis.apply(template, v)?, settings, i))
        .collect::<Result<Vec<_>>>()?;
    Ok(PowerCurve {
        model: template.model,
        axis,
        points,
    })
}

/// `lo, lo + step, ..., hi` with endpoints rounded to avoid drift.
pub fn linear_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => vec![],
        1 => vec![lo],
        _ => (0..count)
            .map(|i| {
                let v = lo + (hi - lo) * i as f64 / (count - 1) as f64;
                (v * 1e12).round() / 1e12
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn settings(n_sim: usize, k: usize) -> PowerSettings {
        PowerSettings::new(0.05, n_sim, k, 2024)
    }

    #[test]
    fn powers_are_multiples_of_one_over_n_sim() {
        let spec = GeneratorSpec::new(Model::WShape, 40).with_noise(0.3);
        let p = estimate_power(&spec, &settings(12, 19)).unwrap();
        assert_eq!(p.power_by_test.len(), 9);
        for v in p.power_by_test.values() {
            assert!((0.0..=1.0).contains(v));
            let s = v * 12.0;
            assert!((s - s.round()).abs() < 1e-9);
        }
    }

    #[test]
    fn raw_chatterjee_absent_for_multivariate_and_complex() {
        for model in [Model::LogQuadraticMV, Model::PacComplex] {
            let p = estimate_power(&GeneratorSpec::new(model, 20), &settings(3, 9)).unwrap();
            assert!(p.power(Hypothesis::ChYfX).is_none());
            assert!(p.power(Hypothesis::ChYcX).is_none());
            assert!(p.power(Hypothesis::DchYfX).is_some());
            assert_eq!(p.power_by_test.len(), 5);
        }
    }

    #[test]
    fn monotone_in_alpha() {
        let spec = GeneratorSpec::new(Model::Sinusoid, 30).with_noise(0.5);
        let pv = simulate_pvalues(&spec, &settings(20, 29), 0).unwrap();
        let lo = power_from_pvalues(&pv, 0.05);
        let hi = power_from_pvalues(&pv, 0.1);
        for h in lo.keys() {
            assert!(hi[h] >= lo[h]);
        }
        // p-values are multiples of 1/K, so a tiny alpha rejects only p = 0.
        let tiny = power_from_pvalues(&pv, 1e-9);
        let all = power_from_pvalues(&pv, 1.0 - 1e-9);
        for h in lo.keys() {
            let zeros = pv.iter().filter(|p| p.get(*h) == Some(0.0)).count();
            assert_eq!(tiny[h], zeros as f64 / pv.len() as f64);
            // p = 1 exactly is possible and never rejects.
            assert!(all[h] >= hi[h]);
        }
    }

    #[test]
    fn curve_grid_and_validation() {
        let spec = GeneratorSpec::new(Model::Linear1D, 20);
        let c = power_curve(&spec, Axis::NoiseLambda, &[0.5], &settings(2, 5)).unwrap();
        assert_eq!(c.points.len(), 1);
        assert!(power_curve(&spec, Axis::NoiseLambda, &[], &settings(2, 5)).is_err());
        assert!(power_curve(&spec, Axis::NoiseLambda, &[0.2, 0.1], &settings(2, 5)).is_err());
        assert!(power_curve(&spec, Axis::SampleSize, &[20.5], &settings(2, 5)).is_err());
        assert_eq!(linear_grid(0.0, 1.0, 11).len(), 11);
        assert_eq!(linear_grid(0.0, 1.0, 11)[3], 0.3);
        assert!(estimate_power(&spec, &PowerSettings::new(1.0, 2, 5, 0)).is_err());
        assert!(estimate_power(&spec, &PowerSettings::new(0.05, 0, 5, 0)).is_err());
        assert!(estimate_power(&spec, &PowerSettings::new(0.05, 2, 0, 0)).is_err());
    }

    #[test]
    fn first_curve_point_equals_single_estimate() {
        let spec = GeneratorSpec::new(Model::Circular, 25).with_noise(0.2);
        let s = settings(4, 11);
        let single = estimate_power(&spec, &s).unwrap();
        let curve = power_curve(&spec, Axis::NoiseLambda, &[0.2, 0.4], &s).unwrap();
        assert_eq!(curve.points[0], single);
        assert_eq!(curve.axis_values(), vec![0.2, 0.4]);
    }
}
