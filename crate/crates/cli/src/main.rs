use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use dchat::io::{self as dio, ColumnSpec, OutputFormat};
use dchat::power::{linear_grid, power_curve, Axis, PowerSettings, DEFAULT_ALPHA};
use dchat::reproduce::{self, Target, DEFAULT_SEED, TABLE2_PERMUTATIONS};
use dchat::seed::{self, tag};
use dchat::{
    generate, synchronized_test, Error, GeneratorSpec, Model, OutlierSpec, PairedData, TestConfig,
    TiePolicy,
};

#[derive(Parser)]
#[command(
    name = "dchat",
    version,
    about = "Distance-based Chatterjee correlation, causal direction and power"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Test association and causal direction on a dataset.
    Analyze(AnalyzeArgs),
    /// Draw one dataset from a generator and write it as CSV.
    Simulate(SimulateArgs),
    /// Monte-Carlo power of every test along a noise or sample-size grid.
    Power(PowerArgs),
    /// Regenerate the data behind a published figure or table.
    Reproduce(ReproduceArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Ties {
    Error,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
        }
    }
}

#[derive(Args)]
struct Common {
    /// Master seed; every random stream derives from it.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Output path (a directory for `reproduce`).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Headed CSV file; pick columns with --x and --y.
    #[arg(long, conflicts_with_all = ["pair", "fixture"])]
    csv: Option<PathBuf>,
    /// Comma-separated X columns. `name` matches `name_re`/`name_im` pairs.
    #[arg(long, value_delimiter = ',', requires = "csv")]
    x: Vec<String>,
    #[arg(long, value_delimiter = ',', requires = "csv")]
    y: Vec<String>,
    /// Two-column whitespace-separated cause-effect pair file.
    #[arg(long, conflicts_with = "fixture")]
    pair: Option<PathBuf>,
    /// Use the bundled cause-effect pair 48 (column 1 outdoor, column 2 indoor).
    #[arg(long)]
    fixture: bool,
    /// Exchange the two columns of a pair file.
    #[arg(long)]
    swap: bool,
    /// Number of synchronized permutations K.
    #[arg(long, default_value_t = 250)]
    perms: usize,
    #[arg(long, value_enum, default_value = "error")]
    ties: Ties,
    /// p-value as (count + 1) / (K + 1) instead of count / K.
    #[arg(long)]
    plus_one: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct ModelArgs {
    #[arg(long, value_parser = parse_model)]
    model: Model,
    /// Sample size N.
    #[arg(long, default_value_t = 100)]
    n: usize,
    /// Dimension of multivariate models.
    #[arg(long)]
    dim: Option<usize>,
    /// Replace 5% of Y entries with values drawn from [200, 210].
    #[arg(long)]
    outliers: bool,
}

impl ModelArgs {
    fn spec(&self, noise: f64) -> GeneratorSpec {
        let mut s = GeneratorSpec::new(self.model, self.n).with_noise(noise);
        if let Some(d) = self.dim {
            s = s.with_dim(d);
        }
        if self.outliers {
            s = s.with_outliers(OutlierSpec::HEAVY);
        }
        s
    }
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Noise level lambda.
    #[arg(long, default_value_t = 0.0)]
    noise: f64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PowerArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Noise levels to sweep, comma separated.
    #[arg(long, value_delimiter = ',', conflicts_with = "sizes")]
    noise: Vec<f64>,
    /// Sample sizes to sweep, comma separated.
    #[arg(long, value_delimiter = ',')]
    sizes: Vec<usize>,
    #[command(flatten)]
    sim: SimArgs,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct SimArgs {
    /// Number of synchronized permutations K per dataset.
    #[arg(long)]
    perms: Option<usize>,
    /// Number of simulated datasets per grid point.
    #[arg(long, default_value_t = dchat::power::DEFAULT_REPETITIONS)]
    reps: usize,
    #[arg(long, default_value_t = DEFAULT_ALPHA)]
    alpha: f64,
}

#[derive(Args)]
struct ReproduceArgs {
    #[arg(value_parser = parse_target)]
    target: Target,
    #[command(flatten)]
    sim: SimArgs,
    #[command(flatten)]
    common: Common,
}

fn parse_model(s: &str) -> Result<Model, String> {
    Model::from_name(s).ok_or_else(|| {
        let names: Vec<&str> = Model::ALL.iter().map(|m| m.name()).collect();
        format!("unknown model `{s}`; expected one of {}", names.join(", "))
    })
}

fn parse_target(s: &str) -> Result<Target, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn tie_policy(t: Ties, seed: u64) -> TiePolicy {
    match t {
        Ties::Error => TiePolicy::Error,
        Ties::Random => TiePolicy::RandomBreak {
            seed: seed::derive(seed, &[tag::TIES]),
        },
    }
}

fn open_out(path: Option<&Path>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn load(args: &AnalyzeArgs) -> anyhow::Result<(PairedData, String, String)> {
    if let Some(path) = &args.csv {
        if args.x.is_empty() || args.y.is_empty() {
            bail!("--csv needs both --x and --y");
        }
        let d = dio::load_paired_csv(path, &ColumnSpec::new(&args.x, &args.y))
            .with_context(|| format!("loading {}", path.display()))?;
        return Ok((d, args.x.join(","), args.y.join(",")));
    }
    let d = if let Some(path) = &args.pair {
        dio::load_cause_effect_pair(path, args.swap)
            .with_context(|| format!("loading {}", path.display()))?
    } else if args.fixture {
        dio::pair0048(args.swap)
    } else {
        bail!("give one of --csv, --pair or --fixture");
    };
    let (a, b) = if args.fixture {
        ("outdoor", "indoor")
    } else {
        ("column 1", "column 2")
    };
    let (x, y) = if args.swap { (b, a) } else { (a, b) };
    Ok((d, x.to_string(), y.to_string()))
}

fn analyze(args: AnalyzeArgs) -> anyhow::Result<()> {
    let (data, x_name, y_name) = load(&args)?;
    let ties = tie_policy(args.ties, args.common.seed);
    let mut config = TestConfig::new(args.perms, args.common.seed, ties);
    if args.plus_one {
        config.pvalue_rule = dchat::PValueRule::PlusOne;
    }
    let report = synchronized_test(&data.x, &data.y, &config)?;
    let out = args.common.out.as_deref();
    match (args.common.format, out) {
        (None, None) => print!("{}", dio::format_report_table(&report, &x_name, &y_name)),
        (fmt, _) => {
            let mut w = open_out(out)?;
            match fmt.map(OutputFormat::from).unwrap_or_default() {
                OutputFormat::Csv => dio::write_report_csv(&mut w, &report)?,
                OutputFormat::Json => {
                    dio::write_report_json(&mut w, &report)?;
                    writeln!(w)?;
                }
            }
            w.flush()?;
            if out.is_some() {
                eprint!("{}", dio::format_report_table(&report, &x_name, &y_name));
            }
        }
    }
    Ok(())
}

fn simulate(args: SimulateArgs) -> anyhow::Result<()> {
    let data = generate(&args.model.spec(args.noise), args.seed)?;
    let mut w = open_out(args.out.as_deref())?;
    dio::write_paired_csv(&mut w, &data)?;
    w.flush()?;
    Ok(())
}

fn settings(sim: &SimArgs, seed: u64, default_k: usize) -> anyhow::Result<PowerSettings> {
    let s = PowerSettings::new(sim.alpha, sim.reps, sim.perms.unwrap_or(default_k), seed);
    s.validate()?;
    Ok(s)
}

fn power(args: PowerArgs) -> anyhow::Result<()> {
    let settings = settings(
        &args.sim,
        args.common.seed,
        dchat::power::DEFAULT_PERMUTATIONS,
    )?;
    let (axis, values) = if !args.sizes.is_empty() {
        (
            Axis::SampleSize,
            args.sizes.iter().map(|&n| n as f64).collect(),
        )
    } else if !args.noise.is_empty() {
        (Axis::NoiseLambda, args.noise.clone())
    } else if args.model.model.is_multivariate() {
        (Axis::SampleSize, vec![args.model.n as f64])
    } else {
        (Axis::NoiseLambda, linear_grid(0.0, 1.0, 11))
    };
    let curve = power_curve(&args.model.spec(0.0), axis, &values, &settings)?;
    let mut w = open_out(args.common.out.as_deref())?;
    match args
        .common
        .format
        .map(OutputFormat::from)
        .unwrap_or_default()
    {
        OutputFormat::Csv => dio::write_power_csv(&mut w, &[curve], &settings)?,
        OutputFormat::Json => {
            dio::write_power_json(&mut w, &[curve], &settings)?;
            writeln!(w)?;
        }
    }
    w.flush()?;
    Ok(())
}

fn run_reproduce(args: ReproduceArgs) -> anyhow::Result<()> {
    let default_k = match args.target {
        Target::Table2 => TABLE2_PERMUTATIONS,
        _ => dchat::power::DEFAULT_PERMUTATIONS,
    };
    let settings = settings(&args.sim, args.common.seed, default_k)?;
    let dir = args.common.out.unwrap_or_else(|| PathBuf::from("."));
    let format = args
        .common
        .format
        .map(OutputFormat::from)
        .unwrap_or_default();
    for path in reproduce::reproduce(args.target, &settings, format, &dir)? {
        println!("{}", path.display());
    }
    if args.target == Target::Table2 {
        print!("{}", std::fs::read_to_string(dir.join("table2.txt"))?);
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze(a) => analyze(a),
        Command::Simulate(a) => simulate(a),
        Command::Power(a) => power(a),
        Command::Reproduce(a) => run_reproduce(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if matches!(e.downcast_ref::<Error>(), Some(Error::TiesDetected { .. })) {
                eprintln!("hint: rerun with --ties=random to break ties uniformly at random");
            }
            ExitCode::FAILURE
        }
    }
}
