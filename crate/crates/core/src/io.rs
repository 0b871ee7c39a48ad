//! Dataset loading and result serialization.
//!
//! User CSV files carry a header row. A column named in a [`ColumnSpec`] is
//! either a real coordinate or, through the `_re`/`_im` suffix pair, one
//! complex coordinate.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::data::{PairedData, SampleSet};
use crate::error::{Error, Result};
use crate::permutation::{AssociationReport, Hypothesis};
use crate::power::{PowerCurve, PowerSettings};
use crate::ranks::TiePolicy;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub const RE_SUFFIX: &str = "_re";
pub const IM_SUFFIX: &str = "_im";

/// The bundled cause-effect pair 48 (outdoor, indoor temperature), one
/// whitespace-separated pair per line.
pub const PAIR0048: &str = include_str!("../data/pair0048.txt");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnSpec {
    pub x_columns: Vec<String>,
    pub y_columns: Vec<String>,
}

/// Where one coordinate's value comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Coordinate {
    Real(usize),
    Complex(usize, usize),
}

impl Coordinate {
    fn columns(&self) -> Vec<usize> {
        match *self {
            Coordinate::Real(c) => vec![c],
            Coordinate::Complex(re, im) => vec![re, im],
        }
    }
}

impl ColumnSpec {
    pub fn new<S: AsRef<str>>(x: &[S], y: &[S]) -> Self {
        ColumnSpec {
            x_columns: x.iter().map(|s| s.as_ref().to_string()).collect(),
            y_columns: y.iter().map(|s| s.as_ref().to_string()).collect(),
        }
    }

    /// Resolve both sides against a header and check they are disjoint.
    fn resolve(&self, header: &[String]) -> Result<(Vec<Coordinate>, Vec<Coordinate>)> {
        let index: HashMap<&str, usize> = header
            .iter()
            .enumerate()
            .map(|(i, h)| (h.as_str(), i))
            .collect();
        let x = resolve_side(&self.x_columns, &index)?;
        let y = resolve_side(&self.y_columns, &index)?;
        let used: BTreeSet<usize> = x.iter().flat_map(Coordinate::columns).collect();
        if let Some(c) = y
            .iter()
            .flat_map(Coordinate::columns)
            .find(|c| used.contains(c))
        {
            return Err(Error::OverlappingColumns(header[c].clone()));
        }
        Ok((x, y))
    }
}

fn resolve_side(names: &[String], index: &HashMap<&str, usize>) -> Result<Vec<Coordinate>> {
    if names.is_empty() {
        return Err(Error::MissingColumn("<empty column list>".into()));
    }
    let mut out: Vec<Coordinate> = Vec::new();
    for name in names {
        let partner =
            |base: &str, suffix: &str| index.get(format!("{base}{suffix}").as_str()).copied();
        let coord = if let Some(base) = name.strip_suffix(RE_SUFFIX) {
            let re = *index
                .get(name.as_str())
                .ok_or_else(|| Error::MissingColumn(name.clone()))?;
            let im = partner(base, IM_SUFFIX)
                .ok_or_else(|| Error::UnpairedComplexColumn(name.clone()))?;
            Coordinate::Complex(re, im)
        } else if let Some(base) = name.strip_suffix(IM_SUFFIX) {
            let im = *index
                .get(name.as_str())
                .ok_or_else(|| Error::MissingColumn(name.clone()))?;
            let re = partner(base, RE_SUFFIX)
                .ok_or_else(|| Error::UnpairedComplexColumn(name.clone()))?;
            Coordinate::Complex(re, im)
        } else if let Some(&c) = index.get(name.as_str()) {
            Coordinate::Real(c)
        } else {
            match (partner(name, RE_SUFFIX), partner(name, IM_SUFFIX)) {
                (Some(re), Some(im)) => Coordinate::Complex(re, im),
                (None, None) => return Err(Error::MissingColumn(name.clone())),
                (Some(_), None) => {
                    return Err(Error::UnpairedComplexColumn(format!("{name}{RE_SUFFIX}")))
                }
                (None, Some(_)) => {
                    return Err(Error::UnpairedComplexColumn(format!("{name}{IM_SUFFIX}")))
                }
            }
        };
        // Listing both halves of a pair names one coordinate.
        if !out.contains(&coord) {
            out.push(coord);
        }
    }
    Ok(out)
}

fn parse_cell(raw: &str, row: usize, column: &str) -> Result<f64> {
    let v: f64 = raw.trim().parse().map_err(|_| Error::NonNumericCell {
        row,
        column: column.to_string(),
        value: raw.to_string(),
    })?;
    if !v.is_finite() {
        return Err(Error::NonNumericCell {
            row,
            column: column.to_string(),
            value: raw.to_string(),
        });
    }
    Ok(v)
}

/// Load X and Y from a headed CSV. Rows become samples.
pub fn load_paired_csv(path: impl AsRef<Path>, cols: &ColumnSpec) -> Result<PairedData> {
    let file = std::fs::File::open(path)?;
    read_paired_csv(file, cols)
}

pub fn read_paired_csv<R: std::io::Read>(reader: R, cols: &ColumnSpec) -> Result<PairedData> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    if header.iter().all(|h| h.is_empty()) {
        return Err(Error::EmptyFile);
    }
    let (xc, yc) = cols.resolve(&header)?;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut rows = 0;
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let row = i + 1;
        let cell = |c: usize| parse_cell(rec.get(c).unwrap_or(""), row, &header[c]);
        for (coords, out) in [(&xc, &mut xs), (&yc, &mut ys)] {
            for coord in coords.iter() {
                out.push(match *coord {
                    Coordinate::Real(c) => Complex64::new(cell(c)?, 0.0),
                    Coordinate::Complex(re, im) => Complex64::new(cell(re)?, cell(im)?),
                });
            }
        }
        rows += 1;
    }
    if rows == 0 {
        return Err(Error::EmptyFile);
    }
    PairedData::new(
        SampleSet::new(rows, xc.len(), xs)?,
        SampleSet::new(rows, yc.len(), ys)?,
    )
}

fn side_header(prefix: &str, s: &SampleSet) -> Vec<String> {
    (1..=s.dim())
        .flat_map(|j| {
            if s.is_real() {
                vec![format!("{prefix}{j}")]
            } else {
                vec![
                    format!("{prefix}{j}{RE_SUFFIX}"),
                    format!("{prefix}{j}{IM_SUFFIX}"),
                ]
            }
        })
        .collect()
}

/// Write a paired dataset as CSV and return the column spec that reloads it.
/// Real sides get columns `x1, x2, ...`; complex sides get `x1_re, x1_im, ...`.
pub fn write_paired_csv<W: Write>(writer: W, data: &PairedData) -> Result<ColumnSpec> {
    let mut w = csv::Writer::from_writer(writer);
    let hx = side_header("x", &data.x);
    let hy = side_header("y", &data.y);
    w.write_record(hx.iter().chain(&hy))?;
    for i in 0..data.n() {
        let mut rec: Vec<String> = Vec::with_capacity(hx.len() + hy.len());
        for s in [&data.x, &data.y] {
            for z in s.row(i) {
                // `Display` for f64 is the shortest exact round-trip form.
                rec.push(z.re.to_string());
                if !s.is_real() {
                    rec.push(z.im.to_string());
                }
            }
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    let names = |s: &SampleSet, prefix: &str| -> Vec<String> {
        (1..=s.dim()).map(|j| format!("{prefix}{j}")).collect()
    };
    Ok(ColumnSpec {
        x_columns: names(&data.x, "x"),
        y_columns: names(&data.y, "y"),
    })
}

/// Parse a two-column whitespace-separated cause-effect pair. Column 1 is X
/// and column 2 is Y unless `swap` is set. Blank lines are skipped.
pub fn parse_cause_effect_pair(text: &str, swap: bool) -> Result<PairedData> {
    let mut a = Vec::new();
    let mut b = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        if fields.len() != 2 {
            return Err(Error::ColumnCountMismatch {
                line: i + 1,
                found: fields.len(),
            });
        }
        a.push(parse_cell(fields[0], i + 1, "1")?);
        b.push(parse_cell(fields[1], i + 1, "2")?);
    }
    if a.is_empty() {
        return Err(Error::EmptyFile);
    }
    let data = PairedData::new(SampleSet::from_scalars(&a)?, SampleSet::from_scalars(&b)?)?;
    Ok(if swap { data.swapped() } else { data })
}

pub fn load_cause_effect_pair(path: impl AsRef<Path>, swap: bool) -> Result<PairedData> {
    parse_cause_effect_pair(&std::fs::read_to_string(path)?, swap)
}

/// The bundled pair 48. Unswapped, X is outdoor and Y is indoor temperature.
pub fn pair0048(swap: bool) -> PairedData {
    parse_cause_effect_pair(PAIR0048, swap).expect("bundled fixture parses")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub seed: u64,
    #[serde(rename = "K")]
    pub permutations: usize,
    pub n_sim: usize,
    pub alpha: f64,
    pub ties: TiePolicy,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        self.power_settings().validate()
    }

    pub fn power_settings(&self) -> PowerSettings {
        PowerSettings::new(self.alpha, self.n_sim, self.permutations, self.seed)
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

/// Header comment lines recording everything needed to regenerate a file.
pub fn provenance_lines(settings: &PowerSettings) -> Vec<String> {
    vec![
        format!("# dchat {VERSION}"),
        format!(
            "# seed={} K={} n_sim={} alpha={} ties=random pvalue_rule=exact",
            settings.seed, settings.permutations, settings.n_sim, settings.alpha
        ),
    ]
}

pub const POWER_COLUMNS: [&str; 6] = ["model", "axis_name", "axis_value", "alpha", "n_sim", "K"];

/// One row per curve point; raw-Chatterjee cells are empty where they do
/// not apply.
pub fn write_power_csv<W: Write>(
    mut writer: W,
    curves: &[PowerCurve],
    settings: &PowerSettings,
) -> Result<()> {
    for line in provenance_lines(settings) {
        writeln!(writer, "{line}")?;
    }
    let mut w = csv::Writer::from_writer(writer);
    let header: Vec<&str> = POWER_COLUMNS
        .into_iter()
        .chain(Hypothesis::ALL.iter().map(|h| h.label()))
        .collect();
    w.write_record(&header)?;
    for curve in curves {
        for p in &curve.points {
            let mut rec = vec![
                curve.model.name().to_string(),
                curve.axis.name().to_string(),
                curve.axis.value_of(&p.spec).to_string(),
                p.alpha.to_string(),
                p.n_sim.to_string(),
                p.permutations.to_string(),
            ];
            rec.extend(Hypothesis::ALL.iter().map(|&h| fmt_opt(p.power(h))));
            w.write_record(&rec)?;
        }
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
struct PowerJson<'a> {
    version: &'a str,
    settings: &'a PowerSettings,
    curves: &'a [PowerCurve],
}

pub fn write_power_json<W: Write>(
    writer: W,
    curves: &[PowerCurve],
    settings: &PowerSettings,
) -> Result<()> {
    serde_json::to_writer_pretty(
        writer,
        &PowerJson {
            version: VERSION,
            settings,
            curves,
        },
    )?;
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
struct ReportJson<'a> {
    version: &'a str,
    #[serde(flatten)]
    report: &'a AssociationReport,
}

pub fn write_report_json<W: Write>(writer: W, report: &AssociationReport) -> Result<()> {
    serde_json::to_writer_pretty(
        writer,
        &ReportJson {
            version: VERSION,
            report,
        },
    )?;
    Ok(())
}

/// Row names in the style of the cause-effect table.
pub fn hypothesis_title(h: Hypothesis) -> &'static str {
    match h {
        Hypothesis::DchYfX => "dCh[Y=F(X)]",
        Hypothesis::DchXfY => "dCh[X=G(Y)]",
        Hypothesis::ChYfX => "Ch[y=f(x)]",
        Hypothesis::ChXfY => "Ch[x=g(y)]",
        Hypothesis::SzYfX => "dCor(X,Y)",
        Hypothesis::DchXcY => "dCh delta(x->y)",
        Hypothesis::DchYcX => "dCh delta(y->x)",
        Hypothesis::ChXcY => "Ch delta(x->y)",
        Hypothesis::ChYcX => "Ch delta(y->x)",
    }
}

/// One row per applicable hypothesis: label, observed statistic, p-value.
pub fn write_report_csv<W: Write>(mut writer: W, report: &AssociationReport) -> Result<()> {
    writeln!(writer, "# dchat {VERSION}")?;
    writeln!(
        writer,
        "# seed={} K={} n={} verdict={}",
        report.seed, report.permutations, report.n, report.verdict
    )?;
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["hypothesis", "key", "statistic", "p_value"])?;
    for h in Hypothesis::ALL {
        if let (Some(s), Some(p)) = (report.observed.get(h), report.p_values.get(h)) {
            w.write_record([h.label(), h.key(), &s.to_string(), &p.to_string()])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Human-readable table with p-values to three decimals and the verdicts.
pub fn format_report_table(report: &AssociationReport, x_name: &str, y_name: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "N = {}, K = {}, seed = {}",
        report.n, report.permutations, report.seed
    );
    let _ = writeln!(s, "{:<18} {:>10} {:>8}", "test", "statistic", "p-value");
    for h in Hypothesis::ALL {
        if let (Some(v), Some(p)) = (report.observed.get(h), report.p_values.get(h)) {
            let _ = writeln!(s, "{:<18} {:>10.4} {:>8.3}", hypothesis_title(h), v, p);
        }
    }
    let _ = writeln!(
        s,
        "RECI (dCh): {}",
        verdict_text(report.verdict, x_name, y_name)
    );
    if let Some(v) = report.ch_verdict {
        let _ = writeln!(s, "RECI (Ch):  {}", verdict_text(v, x_name, y_name));
    }
    s
}

pub fn verdict_text(v: crate::directed::CausalVerdict, x_name: &str, y_name: &str) -> String {
    use crate::directed::CausalVerdict::*;
    match v {
        XCausesY => format!("{x_name} causes {y_name}"),
        YCausesX => format!("{y_name} causes {x_name}"),
        Undetermined => "undetermined".to_string(),
    }
}
