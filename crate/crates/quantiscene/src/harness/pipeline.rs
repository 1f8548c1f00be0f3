//! End-to-end reporting: answer a dataset, aggregate the answers, fit the
//! psychometric curves, and write CSV/JSON/SVG outputs.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::psychometrics::{
    fit_weber, fit_weber_bootstrap, fixtures, plot_svg, threshold_ratio, CurveKey, GridReport,
    ModeSummary, PsychometricPoint,
};

use super::subject_run::{run_subject, write_answers, SubjectRunner};
use super::{join_answers, read_dataset};

/// Reporting knobs; the defaults suit the desk-scale grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ReportConfig {
    /// Decimal places for grid percentages.
    pub decimals: u8,
    /// Bootstrap resamples for fit standard errors; `None` skips them.
    pub bootstrap_resamples: Option<usize>,
    /// Row tag for the aggregation; defaults to the subject label.
    pub train_tag: Option<String>,
}

impl Default for ReportConfig {
    fn default() -> Self {
        ReportConfig {
            decimals: 1,
            bootstrap_resamples: None,
            train_tag: None,
        }
    }
}

/// Fit outcome of one curve: the summary, or why it had to be skipped.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ModeOutcome {
    Fitted {
        w: f64,
        threshold_75: f64,
        residual: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        stderr: Option<f64>,
    },
    Degenerate {
        reason: String,
    },
}

/// The summary written as `summary.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportSummary {
    pub subject: String,
    pub run_id: String,
    pub records: usize,
    pub modes: BTreeMap<String, ModeOutcome>,
}

/// Paths of the files a report run produced.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportFiles {
    pub grid_csv: PathBuf,
    pub summary_json: PathBuf,
    pub curves_svg: PathBuf,
    pub answers_json: Option<PathBuf>,
    pub summary: ReportSummary,
}

fn stage<T>(name: &'static str, result: Result<T>) -> Result<T> {
    result.map_err(|source| Error::Pipeline {
        stage: name,
        source: Box::new(source),
    })
}

/// Fits every curve in a grid, labelling each outcome `train/mode`.
/// Degenerate curves (saturated, too few points) map to a reason instead
/// of an error. `seed` drives the bootstrap when `bootstrap` is set.
pub fn fit_outcomes(
    curves: &BTreeMap<CurveKey, Vec<PsychometricPoint>>,
    bootstrap: Option<usize>,
    seed: u64,
) -> BTreeMap<String, ModeOutcome> {
    curves
        .iter()
        .map(|(key, points)| {
            let label = format!("{}/{}", key.train, key.mode);
            let fit = match bootstrap {
                Some(resamples) => fit_weber_bootstrap(points, resamples, seed),
                None => fit_weber(points),
            };
            let outcome = match fit {
                Ok(fit) => ModeOutcome::Fitted {
                    w: fit.w,
                    threshold_75: threshold_ratio(fit.w, 0.75),
                    residual: fit.residual,
                    stderr: fit.stderr,
                },
                Err(err) => ModeOutcome::Degenerate {
                    reason: err.to_string(),
                },
            };
            (label, outcome)
        })
        .collect()
}

fn summaries_for_plot(outcomes: &BTreeMap<String, ModeOutcome>) -> BTreeMap<String, ModeSummary> {
    outcomes
        .iter()
        .filter_map(|(label, outcome)| match outcome {
            ModeOutcome::Fitted {
                w,
                threshold_75,
                residual,
                ..
            } => Some((
                label.clone(),
                ModeSummary {
                    w: *w,
                    threshold_75: *threshold_75,
                    residual: *residual,
                },
            )),
            ModeOutcome::Degenerate { .. } => None,
        })
        .collect()
}

fn write_outputs(
    out_dir: &Path,
    grid: &GridReport,
    summary: &ReportSummary,
    decimals: u8,
) -> Result<ReportFiles> {
    fs::create_dir_all(out_dir)?;
    let grid_csv = out_dir.join("grid.csv");
    fs::write(&grid_csv, grid.to_csv(decimals))?;
    let summary_json = out_dir.join("summary.json");
    fs::write(&summary_json, serde_json::to_string_pretty(summary)?)?;
    let curves_svg = out_dir.join("curves.svg");
    fs::write(
        &curves_svg,
        plot_svg(&grid.curves, &summaries_for_plot(&summary.modes)),
    )?;
    Ok(ReportFiles {
        grid_csv,
        summary_json,
        curves_svg,
        answers_json: None,
        summary: summary.clone(),
    })
}

/// Runs the full pipeline over an existing dataset: answer every record
/// with `runner`, aggregate into the grid, fit each curve, and write
/// `grid.csv`, `summary.json`, `curves.svg` and the persisted answers
/// into `out_dir`. Deterministic for built-in subjects given `run_seed`.
///
/// Curves that carry no information about the Weber fraction (an exact
/// counter saturates every cell at 100%) are flagged as degenerate in the
/// summary rather than failing the run.
pub fn pipeline_report(
    data_dir: &Path,
    runner: &SubjectRunner,
    run_seed: u64,
    out_dir: &Path,
    config: &ReportConfig,
) -> Result<ReportFiles> {
    let (_, records) = stage("dataset", read_dataset(data_dir))?;
    let answers = stage("subject", run_subject(runner, data_dir, &records, run_seed))?;

    fs::create_dir_all(out_dir)?;
    let answers_json = out_dir.join(format!("answers-{}.json", answers.run_id));
    stage("subject", write_answers(&answers_json, &answers))?;

    let tag = config
        .train_tag
        .clone()
        .unwrap_or_else(|| answers.subject.clone());
    let outcomes = stage("aggregate", join_answers(&records, &answers.answers, &tag))?;
    let grid = crate::psychometrics::aggregate(&outcomes);

    let summary = ReportSummary {
        subject: answers.subject.clone(),
        run_id: answers.run_id.clone(),
        records: records.len(),
        modes: fit_outcomes(&grid.curves, config.bootstrap_resamples, run_seed),
    };
    let mut files = stage("report", write_outputs(out_dir, &grid, &summary, config.decimals))?;
    files.answers_json = Some(answers_json);
    Ok(files)
}

/// Writes the same report files from the bundled reference fixtures:
/// the published evaluation grid and ratio curves with their fits.
pub fn fixture_report(out_dir: &Path, decimals: u8) -> Result<ReportFiles> {
    let mut grid = fixtures::grid();
    grid.curves = fixtures::ratio_curves();
    let summary = ReportSummary {
        subject: "fixtures".to_owned(),
        run_id: "fixtures".to_owned(),
        records: grid.cells.values().map(|s| s.trials as usize).sum(),
        modes: fit_outcomes(&grid.curves, None, 0),
    };
    stage("report", write_outputs(out_dir, &grid, &summary, decimals))
}
