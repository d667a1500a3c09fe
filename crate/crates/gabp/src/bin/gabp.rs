use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gabp::csvio::{self, PredictionRow};
use gabp::error::{Error, Result};
use gabp::pipeline::{self, TrainOptions};
use gabp::RunConfig;
use gabp_core::ingest::DEFAULT_Z_THRESHOLD;
use gabp_core::stats::DEFAULT_LAG;
use gabp_core::synth::{self, GarchParams};
use gabp_core::MutationVariant;

#[derive(Parser)]
#[command(name = "gabp", version, about = "GA-optimized BP network for realized-volatility forecasting")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a synthetic GARCH(1,1) market table as CSV.
    Synth(SynthArgs),
    /// Descriptive statistics and volatility-clustering tests for one column.
    Stats(StatsArgs),
    /// Train GA-BP (or plain BP) and write model, traces, predictions and report.
    Train(TrainArgs),
    /// Forecast with a saved model.
    Predict(PredictArgs),
    /// Score a predictions CSV (`date,actual,predicted[,split]`).
    Evaluate(EvaluateArgs),
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = synth::DEFAULT_ROWS)]
    rows: usize,
    #[arg(long, default_value_t = GarchParams::default().omega)]
    omega: f64,
    #[arg(long, default_value_t = GarchParams::default().alpha)]
    alpha: f64,
    #[arg(long, default_value_t = GarchParams::default().beta)]
    beta: f64,
    #[arg(long, default_value_t = GarchParams::default().mu)]
    mu: f64,
}

#[derive(Args)]
struct StatsArgs {
    #[arg(long)]
    data: PathBuf,
    #[arg(long, default_value = "close")]
    column: String,
    #[arg(long, default_value_t = DEFAULT_LAG)]
    lag: usize,
    /// Summarize the column itself instead of its log returns.
    #[arg(long)]
    levels: bool,
    #[arg(long, default_value_t = DEFAULT_Z_THRESHOLD)]
    z_threshold: f64,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct TrainArgs {
    /// Data CSV; overrides `data` in the config file.
    #[arg(long)]
    data: Option<PathBuf>,
    /// JSON run configuration; missing fields take their defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    workers: Option<usize>,
    /// Train plain BP from one random start instead of GA-BP.
    #[arg(long)]
    skip_ga: bool,
    #[arg(long)]
    mutation_variant: Option<MutationVariant>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Also write SVG line charts next to the CSVs.
    #[arg(long)]
    svg: bool,
    /// Write the normalized feature matrix with targets and split labels.
    #[arg(long)]
    dump_dataset: Option<PathBuf>,
    /// Print the test report as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct PredictArgs {
    #[arg(long)]
    model: PathBuf,
    #[arg(long)]
    data: PathBuf,
    /// Output CSV; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EvaluateArgs {
    #[arg(long)]
    predictions: PathBuf,
    /// Only rows with this split label; all rows when omitted.
    #[arg(long)]
    split: Option<String>,
    /// Write the error series as `index,error,error_pct`.
    #[arg(long)]
    errors_out: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

fn print_json<T: serde::Serialize>(v: &T) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn synth_cmd(a: SynthArgs) -> Result<()> {
    let p = GarchParams { omega: a.omega, alpha: a.alpha, beta: a.beta, mu: a.mu, n: a.rows, seed: a.seed };
    csvio::save_table(&a.out, &synth::generate(&p)?)
}

fn stats_cmd(a: StatsArgs) -> Result<()> {
    let table = pipeline::load_prices(&a.data, &[a.column.as_str()], a.z_threshold)?;
    let s = pipeline::series_stats(&table, &a.column, a.lag, a.levels)?;
    if a.json {
        print_json(&s);
    } else {
        print!("{}", pipeline::format_summary(&s));
    }
    Ok(())
}

fn train_cmd(a: TrainArgs) -> Result<()> {
    let mut cfg = match &a.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(d) = a.data {
        cfg.data = Some(d);
    }
    if let Some(s) = a.seed {
        cfg.seed = s;
    }
    if let Some(w) = a.workers {
        cfg.workers = w;
    }
    if let Some(v) = a.mutation_variant {
        cfg.ga.mutation_variant = v;
    }
    if let Some(o) = a.out_dir {
        cfg.out_dir = o;
    }
    cfg.skip_ga |= a.skip_ga;
    let outcome = pipeline::cmd_train(&cfg, &TrainOptions { svg: a.svg, dump_dataset: a.dump_dataset })?;
    if a.json {
        print_json(&outcome.report);
    } else {
        println!("test split ({} of {} rows), artifacts in {}", outcome.report.n, outcome.dataset.len(), cfg.out_dir.display());
        print!("{}", pipeline::format_report(&outcome.report));
    }
    Ok(())
}

fn write_predictions_stdout(rows: &[PredictionRow]) -> Result<()> {
    let mut out = std::io::stdout().lock();
    writeln!(out, "date,actual,predicted").map_err(|e| Error::io("<stdout>", e))?;
    for r in rows {
        writeln!(out, "{},{},{}", r.date.format("%Y-%m-%d"), r.actual, r.predicted)
            .map_err(|e| Error::io("<stdout>", e))?;
    }
    Ok(())
}

fn predict_cmd(a: PredictArgs) -> Result<()> {
    let rows = pipeline::cmd_predict(&a.model, &a.data)?;
    match &a.out {
        Some(p) => csvio::write_predictions(p, &rows),
        None => write_predictions_stdout(&rows),
    }
}

fn evaluate_cmd(a: EvaluateArgs) -> Result<()> {
    let rows = csvio::read_predictions(&a.predictions)?;
    let report = pipeline::evaluate_rows(&rows, a.split.as_deref())?;
    if let Some(p) = &a.errors_out {
        csvio::write_errors(Path::new(p), &report)?;
    }
    if a.json {
        print_json(&report);
    } else {
        print!("{}", pipeline::format_report(&report));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Synth(a) => synth_cmd(a),
        Command::Stats(a) => stats_cmd(a),
        Command::Train(a) => train_cmd(a),
        Command::Predict(a) => predict_cmd(a),
        Command::Evaluate(a) => evaluate_cmd(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
