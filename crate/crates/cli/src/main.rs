//! `subseasonal` command line.
//!
//! Exit codes: 0 on success, 1 on a configuration error, 2 on an I/O or
//! input-parsing error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use subseasonal::harness::{
    emit_load_reports, emit_reports, ingest_dataset, read_load_csv, run_experiment,
    run_rolling_load, EvaluationReport, ExperimentConfig, LoadConfig, LoadReport, Method,
    ModelFamily,
};
use subseasonal::{count_subseries, CombineMode, DmLoss, Error};

#[derive(Parser, Debug)]
#[command(
    name = "subseasonal",
    version,
    about = "Forecasting with sub-seasonal series"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Standard-vs-multiple experiment over a JSON dataset.
    Run(RunArgs),
    /// Rolling-origin evaluation on an hourly load CSV.
    LoadEval(LoadArgs),
    /// Print the number of subseries needed for frequency m and horizon h.
    Count {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        h: usize,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum MethodArg {
    Standard,
    Multiple,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Standard => Method::Standard,
            MethodArg::Multiple => Method::Multiple,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ModelArg {
    Ets,
    Snaive,
    Dshw,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum CombineArg {
    Pooled,
    LevelEqual,
}

impl From<CombineArg> for CombineMode {
    fn from(c: CombineArg) -> Self {
        match c {
            CombineArg::Pooled => CombineMode::FlatPooled,
            CombineArg::LevelEqual => CombineMode::LevelEqual,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum LossArg {
    Absolute,
    Squared,
}

#[derive(clap::Args, Debug)]
struct RunArgs {
    /// Dataset JSON file.
    #[arg(long)]
    data: PathBuf,
    #[arg(long, value_enum, default_value = "multiple")]
    method: MethodArg,
    #[arg(long, value_enum, default_value = "ets")]
    model: ModelArg,
    #[arg(long, value_enum, default_value = "pooled")]
    combine: CombineArg,
    /// Nominal prediction-interval coverage.
    #[arg(long, default_value_t = 0.95)]
    pi: f64,
    /// Simulated sample paths per forecast.
    #[arg(long, default_value_t = 1000)]
    paths: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, env = "SUBSEASONAL_WORKERS")]
    workers: Option<usize>,
    #[arg(long, env = "SUBSEASONAL_OUT", default_value = "out")]
    out: PathBuf,
    /// Only series of this category.
    #[arg(long)]
    category: Option<String>,
    /// File with one series id per line; only these series are run.
    #[arg(long)]
    ids: Option<PathBuf>,
    /// Loss of the per-series Diebold-Mariano tests.
    #[arg(long, value_enum, default_value = "absolute")]
    dm_loss: LossArg,
    /// Also write per-level mean forecasts.
    #[arg(long)]
    verbose: bool,
}

#[derive(clap::Args, Debug)]
struct LoadArgs {
    /// CSV with header `timestamp,demand`.
    #[arg(long)]
    csv: PathBuf,
    /// Nested periods `short,long`.
    #[arg(long, value_delimiter = ',', default_value = "24,168")]
    periods: Vec<usize>,
    /// Long-cycle position of the first row.
    #[arg(long, default_value_t = 1)]
    start_phase: usize,
    /// Hours of initial training data.
    #[arg(long, default_value_t = 1344)]
    train: usize,
    #[arg(long, default_value_t = 24)]
    horizon: usize,
    #[arg(long, default_value_t = 24)]
    step: usize,
    #[arg(long, value_enum, default_value = "multiple")]
    method: MethodArg,
    #[arg(long, value_enum, default_value = "pooled")]
    combine: CombineArg,
    #[arg(long, default_value_t = 0.95)]
    pi: f64,
    #[arg(long, default_value_t = 100)]
    paths: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Fit the AR(1) error adjustment in every DSHW model.
    #[arg(long)]
    ar: bool,
    #[arg(long, env = "SUBSEASONAL_OUT", default_value = "out")]
    out: PathBuf,
}

enum Failure {
    Config(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(_) | Error::Parse(_) => Failure::Io(e.to_string()),
            other => Failure::Config(other.to_string()),
        }
    }
}

fn read_ids(path: &Path) -> Result<Vec<String>, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    Ok(text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(String::from)
        .collect())
}

fn print_run_summary(report: &EvaluationReport) {
    println!(
        "{} series evaluated, {} failed, {} records skipped at ingestion",
        report.outcomes.len(),
        report.failed(),
        report.skipped_records.len()
    );
    let labels: Vec<String> = report.buckets.iter().map(|b| b.label()).collect();
    println!(
        "{:<6} {:<9} {}",
        "metric",
        "method",
        labels
            .iter()
            .map(|l| format!("{l:>10}"))
            .collect::<String>()
    );
    for row in &report.aggregate {
        let values: String = row
            .values
            .iter()
            .map(|(v, _)| match v {
                Some(v) => format!("{v:>10.4}"),
                None => format!("{:>10}", "-"),
            })
            .collect();
        println!("{:<6} {:<9} {values}", row.metric, row.method.to_string());
    }
}

fn run(args: RunArgs) -> Result<(), Failure> {
    let model = match args.model {
        ModelArg::Ets => ModelFamily::Ets,
        ModelArg::Snaive => ModelFamily::Snaive,
        ModelArg::Dshw => ModelFamily::Dshw,
    };
    let workers = args
        .workers
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let ids = args.ids.as_deref().map(read_ids).transpose()?;
    let config = ExperimentConfig {
        data_path: Some(args.data.clone()),
        method: args.method.into(),
        model,
        combine_mode: args.combine.into(),
        level: args.pi,
        paths: args.paths,
        seed: args.seed,
        out_dir: args.out.clone(),
        category: args.category,
        ids,
        workers,
        verbose: args.verbose,
        dm_loss: match args.dm_loss {
            LossArg::Absolute => DmLoss::Absolute,
            LossArg::Squared => DmLoss::Squared,
        },
    };
    config.validate()?;
    let dataset = ingest_dataset(&args.data)?;
    let report = run_experiment(&dataset, &config)?;
    let written = emit_reports(&report, &args.out)?;
    print_run_summary(&report);
    for path in written {
        log::info!("wrote {}", path.display());
    }
    println!("reports written to {}", args.out.display());
    Ok(())
}

fn print_load_summary(report: &LoadReport) {
    println!(
        "{} origins evaluated, {} skipped",
        report.origins.len(),
        report.skipped.len()
    );
    let mean = |c: &[f64]| c.iter().sum::<f64>() / c.len() as f64;
    println!(
        "mean scaled error, standard: {:.4}",
        mean(&report.standard_curve)
    );
    if let Some(c) = &report.multiple_curve {
        println!("mean scaled error, multiple: {:.4}", mean(c));
    }
}

fn load_eval(args: LoadArgs) -> Result<(), Failure> {
    let &[short, long] = args.periods.as_slice() else {
        return Err(Failure::Config(
            "--periods takes two values, e.g. 24,168".into(),
        ));
    };
    let periods = (short, long);
    let config = LoadConfig {
        train: args.train,
        horizon: args.horizon,
        step: args.step,
        method: args.method.into(),
        combine_mode: args.combine.into(),
        level: args.pi,
        paths: args.paths,
        seed: args.seed,
        use_ar: args.ar,
    };
    config.validate(periods)?;
    let series = read_load_csv(&args.csv, periods, args.start_phase)?;
    let report = run_rolling_load(&series, &config)?;
    emit_load_reports(&report, &args.out)?;
    print_load_summary(&report);
    println!("reports written to {}", args.out.display());
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Run(args) => run(args),
        Command::LoadEval(args) => load_eval(args),
        Command::Count { m, h } => count_subseries(m, h)
            .map(|n| println!("{n}"))
            .map_err(Failure::from),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
