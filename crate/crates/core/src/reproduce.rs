//! Experiment grids behind the published figures and the cause-effect table.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::{GeneratorSpec, Model, OutlierSpec};
use crate::io::{self, OutputFormat};
use crate::permutation::{AssociationReport, PValueRule, SynchronizedTest, TestConfig};
use crate::power::{linear_grid, power_curve, Axis, PowerCurve, PowerSettings};
use crate::ranks::TiePolicy;
use crate::seed::{self, tag};

pub const DEFAULT_SEED: u64 = 2024;
pub const TABLE2_PERMUTATIONS: usize = 300;
pub const BIVARIATE_N: usize = 100;
pub const PAC_N: usize = 100;
pub const SAMPLE_SIZE_GRID: [usize; 8] = [25, 50, 75, 100, 130, 160, 200, 240];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    Fig2,
    Fig3,
    Fig5,
    Fig6,
    Fig7,
    Table2,
}

impl Target {
    pub const ALL: [Target; 6] = [
        Target::Fig2,
        Target::Fig3,
        Target::Fig5,
        Target::Fig6,
        Target::Fig7,
        Target::Table2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Target::Fig2 => "fig2",
            Target::Fig3 => "fig3",
            Target::Fig5 => "fig5",
            Target::Fig6 => "fig6",
            Target::Fig7 => "fig7",
            Target::Table2 => "table2",
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Target {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Target::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::InvalidSpec(format!("unknown target `{s}`")))
    }
}

/// One curve of a figure: a template spec swept along an axis.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvePlan {
    pub template: GeneratorSpec,
    pub axis: Axis,
    pub values: Vec<f64>,
}

fn noise_sweep(models: &[Model], n: usize, values: Vec<f64>) -> Vec<CurvePlan> {
    models
        .iter()
        .map(|&m| CurvePlan {
            template: GeneratorSpec::new(m, n),
            axis: Axis::NoiseLambda,
            values: values.clone(),
        })
        .collect()
}

fn size_sweep(templates: &[GeneratorSpec]) -> Vec<CurvePlan> {
    templates
        .iter()
        .map(|&t| CurvePlan {
            template: t,
            axis: Axis::SampleSize,
            values: SAMPLE_SIZE_GRID.iter().map(|&n| n as f64).collect(),
        })
        .collect()
}

/// The power-curve grid of a figure target; `None` for the table.
pub fn plan(target: Target) -> Option<Vec<CurvePlan>> {
    let bivariate = [
        Model::Linear1D,
        Model::WShape,
        Model::Sinusoid,
        Model::Circular,
    ];
    // The association and causal-direction figures share one grid; every
    // CSV row carries both families of powers.
    let plans = match target {
        Target::Fig2 | Target::Fig3 => {
            noise_sweep(&bivariate, BIVARIATE_N, linear_grid(0.0, 1.0, 11))
        }
        Target::Fig5 => size_sweep(&[
            GeneratorSpec::new(Model::LinearMV, 25),
            GeneratorSpec::new(Model::QuadraticMV, 25),
            GeneratorSpec::new(Model::LogQuadraticMV, 25),
        ]),
        Target::Fig6 => noise_sweep(&[Model::PacComplex], PAC_N, linear_grid(0.0, 2.0, 9)),
        Target::Fig7 => size_sweep(&[
            GeneratorSpec::new(Model::LogQuadraticMV, 25).with_outliers(OutlierSpec::HEAVY)
        ]),
        Target::Table2 => return None,
    };
    Some(plans)
}

/// Run every curve of a figure. Curve `c` draws from the sub-seed
/// `derive(seed, [c])`.
pub fn run_figure(target: Target, settings: &PowerSettings) -> Result<Vec<PowerCurve>> {
    let plans = plan(target)
        .ok_or_else(|| Error::InvalidSpec(format!("{target} is not a power figure")))?;
    plans
        .iter()
        .enumerate()
        .map(|(c, p)| {
            let sub = PowerSettings {
                seed: seed::derive(settings.seed, &[c as u64]),
                ..*settings
            };
            power_curve(&p.template, p.axis, &p.values, &sub)
        })
        .collect()
}

/// The cause-effect table on the bundled pair with X = indoor and
/// Y = outdoor temperature. The fixture has repeated readings, so ties are
/// broken at random from a sub-seed.
pub fn run_table2(permutations: usize, seed: u64) -> Result<AssociationReport> {
    let data = io::pair0048(true);
    let ties = TiePolicy::RandomBreak {
        seed: seed::derive(seed, &[tag::TIES]),
    };
    let config = TestConfig {
        permutations,
        seed,
        ties,
        pvalue_rule: PValueRule::Exact,
    };
    SynchronizedTest::new(&data.x, &data.y, ties)?.run(&config)
}

pub const TABLE2_X: &str = "indoor";
pub const TABLE2_Y: &str = "outdoor";

/// Run a target and write its outputs into `out_dir`. Returns the paths
/// written.
pub fn reproduce(
    target: Target,
    settings: &PowerSettings,
    format: OutputFormat,
    out_dir: &Path,
) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(out_dir)?;
    let ext = match format {
        OutputFormat::Csv => "csv",
        OutputFormat::Json => "json",
    };
    let path = out_dir.join(format!("{target}.{ext}"));
    let file = std::io::BufWriter::new(std::fs::File::create(&path)?);
    if target == Target::Table2 {
        settings.validate()?;
        let report = run_table2(settings.permutations, settings.seed)?;
        match format {
            OutputFormat::Csv => io::write_report_csv(file, &report)?,
            OutputFormat::Json => io::write_report_json(file, &report)?,
        }
        let table = out_dir.join("table2.txt");
        std::fs::write(&table, io::format_report_table(&report, TABLE2_X, TABLE2_Y))?;
        return Ok(vec![path, table]);
    }
    let curves = run_figure(target, settings)?;
    match format {
        OutputFormat::Csv => io::write_power_csv(file, &curves, settings)?,
        OutputFormat::Json => io::write_power_json(file, &curves, settings)?,
    }
    Ok(vec![path])
}
