//! The train, predict, evaluate and stats commands as library functions.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use gabp_core::evolve::{ga_bp, plain_bp, Executor, GenerationBest};
use gabp_core::features::{apply_norm, build_dataset, feature_rows, log_returns, FeatureError, FEATURE_NAMES};
use gabp_core::ingest::{interpolate_missing, repair_outliers, PriceTable, RawTable};
use gabp_core::metrics::{evaluate, EvalReport};
use gabp_core::network::{Network, SampleSet};
use gabp_core::stats::{summarize, SeriesSummary};
use gabp_core::Dataset;

use crate::config::RunConfig;
use crate::csvio::{self, PredictionRow};
use crate::error::{Error, Result};
use crate::exec::Parallel;
use crate::model::ModelFile;
use crate::svg::line_chart;

pub const MODEL_FILE: &str = "model.json";
pub const TRACE_FILE: &str = "fitness_trace.csv";
pub const PREDICTIONS_FILE: &str = "predictions.csv";
pub const ERRORS_FILE: &str = "errors.csv";
pub const REPORT_FILE: &str = "report.json";
pub const CONFIG_FILE: &str = "config.json";

/// Gap filling followed by outlier repair.
pub fn clean(raw: &RawTable, z_threshold: f64) -> Result<PriceTable> {
    Ok(repair_outliers(&interpolate_missing(raw)?, z_threshold)?)
}

pub fn load_prices(path: &Path, columns: &[&str], z_threshold: f64) -> Result<PriceTable> {
    clean(&csvio::load_csv(path, columns)?, z_threshold)
}

#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub dataset: Dataset,
    pub network: Network,
    /// Best fitness per generation; empty when the GA was skipped.
    pub trace: Vec<GenerationBest>,
    pub evaluations: usize,
    pub bp_loss: Vec<f64>,
    /// Forecast for every row, natural units.
    pub forecast: Vec<f64>,
    /// Test-split evaluation.
    pub report: EvalReport,
}

impl TrainOutcome {
    pub fn prediction_rows(&self) -> Vec<PredictionRow> {
        let mut split = vec!["train"; self.dataset.len()];
        for &i in &self.dataset.test_idx {
            split[i] = "test";
        }
        (0..self.dataset.len())
            .map(|i| PredictionRow {
                date: self.dataset.dates[i],
                actual: self.dataset.y[i],
                predicted: self.forecast[i],
                split: Some(split[i].to_string()),
            })
            .collect()
    }
}

/// GA-BP (or plain BP with `skip_ga`) on an already cleaned table.
pub fn train_table<E: Executor>(table: &PriceTable, cfg: &RunConfig, exec: &E) -> Result<TrainOutcome> {
    let shape = cfg.shape()?;
    let dataset = build_dataset(table, &cfg.columns, cfg.vol_window, cfg.seed, cfg.train_frac)?;
    let ga = cfg.ga_config();
    let (network, trace, evaluations, bp_loss) = if cfg.skip_ga {
        let (net, loss) = plain_bp(&dataset, shape, cfg.activation, ga.bounds, cfg.bp, cfg.seed)?;
        (net, Vec::new(), 0, loss)
    } else {
        let out = ga_bp(&dataset, shape, cfg.activation, &ga, cfg.bp, exec)?;
        (out.network, out.run.best_per_generation, out.run.evaluations, out.loss_trace)
    };
    let all: Vec<usize> = (0..dataset.len()).collect();
    let forecast = dataset.forecast(&network, &all)?;
    let test_pred: Vec<f64> = dataset.test_idx.iter().map(|&i| forecast[i]).collect();
    let report = evaluate(&test_pred, &dataset.targets(&dataset.test_idx))?;
    Ok(TrainOutcome { dataset, network, trace, evaluations, bp_loss, forecast, report })
}

#[derive(Debug, Clone, Default)]
pub struct TrainOptions {
    pub svg: bool,
    pub dump_dataset: Option<PathBuf>,
}

/// Loads `cfg.data`, trains and writes every artifact into `cfg.out_dir`.
pub fn cmd_train(cfg: &RunConfig, opts: &TrainOptions) -> Result<TrainOutcome> {
    cfg.validate()?;
    let path = cfg.data.as_deref().expect("validated");
    let table = load_prices(path, &cfg.columns.names(), cfg.z_threshold)?;
    let exec = Parallel::new(cfg.workers).map_err(|e| Error::Config(format!("worker pool: {e}")))?;
    let outcome = train_table(&table, cfg, &exec)?;
    write_artifacts(&cfg.out_dir, cfg, &outcome, opts.svg)?;
    if let Some(p) = &opts.dump_dataset {
        csvio::write_dataset(p, &outcome.dataset)?;
    }
    Ok(outcome)
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn write_artifacts(dir: &Path, cfg: &RunConfig, outcome: &TrainOutcome, svg: bool) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let model = ModelFile::new(&outcome.network, &outcome.dataset, &cfg.columns, cfg.vol_window, cfg.z_threshold);
    write_text(&dir.join(MODEL_FILE), &(model.to_json() + "\n"))?;
    write_text(&dir.join(CONFIG_FILE), &(cfg.to_json() + "\n"))?;
    csvio::write_trace(&dir.join(TRACE_FILE), &outcome.trace)?;
    let rows = outcome.prediction_rows();
    csvio::write_predictions(&dir.join(PREDICTIONS_FILE), &rows)?;
    csvio::write_errors(&dir.join(ERRORS_FILE), &outcome.report)?;
    let report = serde_json::to_string_pretty(&outcome.report).expect("report serializes");
    write_text(&dir.join(REPORT_FILE), &(report + "\n"))?;

    if svg {
        let fitness: Vec<f64> = outcome.trace.iter().map(|g| g.best_fitness).collect();
        write_text(&dir.join("fitness_trace.svg"), &line_chart("Best fitness per generation", &[("G", &fitness)]))?;
        let actual: Vec<f64> = rows.iter().map(|r| r.actual).collect();
        write_text(
            &dir.join("predictions.svg"),
            &line_chart("Realized vs predicted volatility", &[("actual", &actual), ("predicted", &outcome.forecast)]),
        )?;
        write_text(
            &dir.join("errors.svg"),
            &line_chart("Test forecast error", &[("error", &outcome.report.error_series)]),
        )?;
        let pct: Vec<f64> = outcome.report.error_pct_series.iter().map(|p| p.unwrap_or(f64::NAN)).collect();
        write_text(&dir.join("error_pct.svg"), &line_chart("Test forecast relative error", &[("error_pct", &pct)]))?;
    }
    Ok(())
}

/// Rebuilds features from `table` with the model's stored scaling and runs
/// the network on every row.
pub fn predict_table(model: &ModelFile, table: &PriceTable) -> Result<Vec<PredictionRow>> {
    if model.feature_names.iter().map(String::as_str).ne(FEATURE_NAMES) {
        return Err(Error::SchemaMismatch(format!(
            "model features {:?} differ from {:?}",
            model.feature_names, FEATURE_NAMES
        )));
    }
    let net = model.network()?;
    let rows = match feature_rows(table, &model.columns, model.vol_window) {
        Err(FeatureError::InsufficientRows { .. }) => return Err(Error::EmptyInput),
        other => other?,
    };
    if rows.is_empty() {
        return Err(Error::EmptyInput);
    }
    let x = apply_norm(&rows, &model.norm_params);
    let samples = SampleSet::new(x, vec![0.0; rows.len()], model.feature_names.len(), 1)?;
    let out = net.predict(&samples)?;
    Ok(rows
        .dates
        .iter()
        .zip(&rows.y)
        .zip(out)
        .map(|((&date, &actual), u)| PredictionRow {
            date,
            actual,
            predicted: model.target_norm.invert(u),
            split: None,
        })
        .collect())
}

pub fn cmd_predict(model_path: &Path, data_path: &Path) -> Result<Vec<PredictionRow>> {
    let model = ModelFile::load(model_path)?;
    let table = load_prices(data_path, &model.columns.names(), model.z_threshold)?;
    predict_table(&model, &table)
}

/// Evaluates `predicted` against `actual`, optionally restricted to rows
/// whose split label equals `split`.
pub fn evaluate_rows(rows: &[PredictionRow], split: Option<&str>) -> Result<EvalReport> {
    let keep: Vec<&PredictionRow> = rows
        .iter()
        .filter(|r| split.is_none_or(|s| r.split.as_deref() == Some(s)))
        .collect();
    let predicted: Vec<f64> = keep.iter().map(|r| r.predicted).collect();
    let actual: Vec<f64> = keep.iter().map(|r| r.actual).collect();
    Ok(evaluate(&predicted, &actual)?)
}

/// Summary of the log returns of `column`, or of its levels.
pub fn series_stats(table: &PriceTable, column: &str, lag: usize, levels: bool) -> Result<SeriesSummary> {
    let values = table
        .column(column)
        .ok_or_else(|| Error::SchemaMismatch(format!("column `{column}` not loaded")))?;
    let series = if levels { values.to_vec() } else { log_returns(values)? };
    Ok(summarize(&series, lag)?)
}

fn table(rows: &[(&str, String)]) -> String {
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    let mut out = String::new();
    for (k, v) in rows {
        let _ = writeln!(out, "{k:<width$}  {v}");
    }
    out
}

pub fn format_report(r: &EvalReport) -> String {
    table(&[
        ("n", r.n.to_string()),
        ("MFE", format!("{:.6e}", r.mfe)),
        ("RMSE", format!("{:.6e}", r.rmse)),
        ("MAE", format!("{:.6e}", r.mae)),
        ("MAPE", r.mape.map_or_else(|| "undefined".into(), |m| format!("{m:.6}"))),
        ("MSE (derived)", format!("{:.6e}", r.mse())),
    ])
}

pub fn format_summary(s: &SeriesSummary) -> String {
    table(&[
        ("Obs", s.n_obs.to_string()),
        ("Mean", format!("{:.6}", s.mean)),
        ("Max", format!("{:.6}", s.max)),
        ("Min", format!("{:.6}", s.min)),
        ("S.D.", format!("{:.6}", s.std_dev)),
        ("Skewness", format!("{:.4}", s.skewness)),
        ("Excess kurtosis", format!("{:.4}", s.excess_kurtosis)),
        (&format!("Q2({})", s.lag), format!("{:.4}", s.q2_stat)),
        (&format!("ARCH({})", s.lag), format!("{:.4}", s.arch_stat)),
    ])
}
