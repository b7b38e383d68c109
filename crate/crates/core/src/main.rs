use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use polcorr::report::{self, ReportSpec, ScanSpec};
use polcorr::{Angle64, ChshSettings64, ModelKind, SourceConfig64};

#[derive(Debug, Parser)]
#[command(name = "polcorr", version, about = "Polarization correlation scans, Monte Carlo runs and CHSH reports")]
struct Cli {
    /// Interpret every angle given on the command line as degrees (output stays in radians).
    #[arg(long, global = true)]
    degrees: bool,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Analytic coincidence curves p(θ2) for a list of θ1 values.
    Scan(ScanArgs),
    /// Monte Carlo estimate of the same curves.
    Mc(McArgs),
    /// CHSH statistic at fixed settings or maximized over a grid.
    Chsh(ChshArgs),
    /// Fringe visibility of the p_vv curve for each θ1.
    Visibility(VisibilityArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModelArg {
    Classical,
    QuantumMinus,
    QuantumPlus,
}

impl From<ModelArg> for ModelKind {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Classical => ModelKind::ClassicalMalus,
            ModelArg::QuantumMinus => ModelKind::QUANTUM_MINUS,
            ModelArg::QuantumPlus => ModelKind::QUANTUM_PLUS,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, ValueEnum)]
enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy)]
struct Range {
    start: f64,
    end: f64,
    steps: usize,
}

fn parse_range(s: &str) -> Result<Range, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [start, end, steps] = parts[..] else {
        return Err("expected <start:end:steps>".to_string());
    };
    Ok(Range {
        start: start.trim().parse().map_err(|e| format!("start: {e}"))?,
        end: end.trim().parse().map_err(|e| format!("end: {e}"))?,
        steps: steps.trim().parse().map_err(|e| format!("steps: {e}"))?,
    })
}

fn parse_settings(s: &str) -> Result<[f64; 4], String> {
    let values = s
        .split(',')
        .map(|v| v.trim().parse::<f64>().map_err(|e| format!("`{v}`: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    values
        .try_into()
        .map_err(|v: Vec<f64>| format!("expected 4 comma-separated angles, got {}", v.len()))
}

#[derive(Debug, Args)]
struct SourceArgs {
    /// Source axis orientation.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    source_axis: f64,

    /// Probability that a pair is emitted in the HV mode.
    #[arg(long, default_value_t = 0.5)]
    mode_weight: f64,
}

#[derive(Debug, Args)]
struct ScanArgs {
    #[arg(long, value_enum, default_value = "classical")]
    model: ModelArg,

    /// Comma-separated channel-1 angles [default: 0, π/8, 3π/16, π/4, 3π/8, π/2].
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    theta1: Vec<f64>,

    /// Channel-2 sweep as <start:end:steps>, endpoints included [default: 0:π:181].
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    theta2_range: Option<Range>,

    #[command(flatten)]
    source: SourceArgs,

    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,

    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Debug, Args)]
struct McArgs {
    #[command(flatten)]
    scan: ScanArgs,

    /// Single channel-2 angle (shorthand for a one-point range).
    #[arg(long, conflicts_with = "theta2_range", allow_hyphen_values = true)]
    theta2: Option<f64>,

    #[arg(long, default_value_t = 100_000)]
    trials: u64,

    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Worker chunks; results do not depend on this value.
    #[arg(long)]
    chunks: Option<usize>,
}

#[derive(Debug, Args)]
struct ChshArgs {
    #[arg(long, value_enum, default_value = "classical")]
    model: ModelArg,

    /// Fixed settings a,a',b,b'.
    #[arg(long, value_parser = parse_settings, conflicts_with = "grid_step", allow_hyphen_values = true)]
    settings: Option<[f64; 4]>,

    /// Grid spacing for the exhaustive search [default: π/64].
    #[arg(long)]
    grid_step: Option<f64>,
}

#[derive(Debug, Args)]
struct VisibilityArgs {
    #[arg(long, value_enum, default_value = "classical")]
    model: ModelArg,

    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    theta1: Vec<f64>,

    #[command(flatten)]
    source: SourceArgs,
}

struct Units {
    degrees: bool,
}

impl Units {
    fn rad(&self, x: f64) -> f64 {
        if self.degrees {
            x.to_radians()
        } else {
            x
        }
    }
}

fn source(args: &SourceArgs, u: &Units) -> polcorr::Result<SourceConfig64> {
    SourceConfig64::new(Angle64::new(u.rad(args.source_axis))?, args.mode_weight)
}

fn theta1_list(given: &[f64], u: &Units) -> Vec<f64> {
    if given.is_empty() {
        report::FIGURE1_THETA1.to_vec()
    } else {
        given.iter().map(|&x| u.rad(x)).collect()
    }
}

fn scan_spec(args: &ScanArgs, u: &Units) -> polcorr::Result<ScanSpec> {
    let mut spec = ScanSpec::figure1(args.model.into());
    spec.theta1_list = theta1_list(&args.theta1, u);
    if let Some(r) = args.theta2_range {
        spec.theta2_start = u.rad(r.start);
        spec.theta2_end = u.rad(r.end);
        spec.steps = r.steps;
    }
    spec.src = source(&args.source, u)?;
    Ok(spec)
}

fn sink(out: &Option<PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn emit(
    format: Format,
    meta: &ReportSpec,
    rows: &[report::ScanRow],
    out: &Option<PathBuf>,
) -> polcorr::Result<()> {
    let w = sink(out)?;
    match format {
        Format::Csv => report::emit_csv(rows, w),
        Format::Json => report::emit_json(meta, rows, w),
    }
}

fn run(cli: Cli) -> polcorr::Result<()> {
    let u = Units {
        degrees: cli.degrees,
    };
    let command = cli.command.unwrap_or(Command::Scan(ScanArgs {
        model: ModelArg::Classical,
        theta1: Vec::new(),
        theta2_range: None,
        source: SourceArgs {
            source_axis: 0.0,
            mode_weight: 0.5,
        },
        out: None,
        format: Format::Csv,
    }));
    match command {
        Command::Scan(args) => {
            let spec = scan_spec(&args, &u)?;
            let rows = report::scan(&spec)?;
            emit(args.format, &ReportSpec::analytic(&spec), &rows, &args.out)
        }
        Command::Mc(args) => {
            let mut spec = scan_spec(&args.scan, &u)?;
            if let Some(t2) = args.theta2 {
                // One point: the range end is never sampled for a single step.
                spec.theta2_start = u.rad(t2);
                spec.theta2_end = spec.theta2_start + 1.0;
                spec.steps = 2;
            }
            let chunks = args.chunks.unwrap_or_else(rayon::current_num_threads);
            let mut rows = report::mc_scan(&spec, args.trials, args.seed, chunks)?;
            if args.theta2.is_some() {
                rows.retain(|r| r.theta2_rad == spec.theta2_start);
            }
            let meta = ReportSpec::monte_carlo(&spec, args.trials, args.seed);
            emit(args.scan.format, &meta, &rows, &args.scan.out)
        }
        Command::Chsh(args) => {
            let model: ModelKind = args.model.into();
            let result = match args.settings {
                Some(s) => {
                    let settings =
                        ChshSettings64::new(u.rad(s[0]), u.rad(s[1]), u.rad(s[2]), u.rad(s[3]))?;
                    polcorr::chsh_statistic(settings, model)
                }
                None => {
                    let step = args
                        .grid_step
                        .map(|x| u.rad(x))
                        .unwrap_or(std::f64::consts::PI / 64.0);
                    polcorr::maximize_chsh(model, Angle64::new(step)?)?
                }
            };
            let mut out = io::stdout().lock();
            out.write_all(report::format_chsh(&result).as_bytes())?;
            Ok(())
        }
        Command::Visibility(args) => {
            let src = source(&args.source, &u)?;
            let list = theta1_list(&args.theta1, &u);
            report::emit_visibility_csv(args.model.into(), &list, &src, io::stdout().lock())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(polcorr::Error::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("polcorr: {e}");
            ExitCode::from(1)
        }
    }
}
