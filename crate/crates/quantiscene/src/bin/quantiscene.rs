//! Thin command-line front end: every verb parses arguments, calls into
//! the library, and prints where the results went. The `QUANTISCENE_SEED`
//! environment variable overrides any seed from a flag or config file.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use quantiscene::error::{Error, Result};
use quantiscene::generator::{CaptionerKind, PositionMode, RatioSetting};
use quantiscene::harness::{
    self, fit_outcomes, fixture_report, join_answers, pipeline_report, read_answers,
    read_dataset, run_external, verify_dataset, AnswerSet, EvalDatasetConfig, ExternalSubject,
    ReportConfig, ReportFiles, SubjectRunner, TrainDatasetConfig,
};
use quantiscene::psychometrics::aggregate;
use quantiscene::rng;
use quantiscene::subjects::SubjectKind;

const SEED_VAR: &str = "QUANTISCENE_SEED";

#[derive(Parser)]
#[command(
    name = "quantiscene",
    version,
    about = "Generate quantifier-caption datasets, simulate subjects, and fit psychometrics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a training dataset (scenes with sampled captions).
    GenTrain(GenTrain),
    /// Generate an evaluation dataset (the mode x area x ratio grid).
    GenEval(GenEval),
    /// Answer a dataset with a built-in or external subject.
    Simulate(Simulate),
    /// Aggregate persisted answers into the accuracy grid CSV.
    Aggregate(Aggregate),
    /// Fit Weber fractions and 75% thresholds to persisted answers.
    Fit(Fit),
    /// Run the full pipeline (or re-render the bundled reference data).
    Report(Report),
    /// Re-check every invariant of a written dataset.
    Verify(Verify),
    /// Answer wire-protocol requests on stdin from a dataset's records.
    SubjectStdio(SubjectStdio),
}

#[derive(Args)]
struct GenTrain {
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    /// JSON config with every knob; flags below override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Caption sampler: q_full or q_half.
    #[arg(long, value_parser = CaptionerKind::from_str)]
    captioner: Option<CaptionerKind>,
    /// Number of images [default: 4096].
    #[arg(long)]
    images: Option<usize>,
    /// Captions sampled per image [default: 5].
    #[arg(long)]
    captions_per_image: Option<usize>,
    /// Image resolution in pixels [default: 64].
    #[arg(long)]
    resolution: Option<u32>,
    /// Master seed [default: 0].
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct GenEval {
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    /// JSON config with every knob; flags below override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Instances per grid cell [default: 1024].
    #[arg(long)]
    trials: Option<usize>,
    /// Positioning modes, comma separated [default: random,partitioned,paired].
    #[arg(long, value_delimiter = ',', value_parser = PositionMode::from_str)]
    modes: Option<Vec<PositionMode>>,
    /// Ratio columns, comma separated, e.g. all,1:2,2:3 [default: the 8-column grid].
    #[arg(long, value_delimiter = ',', value_parser = RatioSetting::from_str)]
    ratios: Option<Vec<RatioSetting>>,
    /// Area control: size, area, or both [default: both].
    #[arg(long, value_enum)]
    areas: Option<AreaChoice>,
    /// Use the ratio-study columns 1:2 .. 10:11 instead of the grid columns.
    #[arg(long, conflicts_with = "ratios")]
    ratio_study: bool,
    /// Image resolution in pixels [default: 64].
    #[arg(long)]
    resolution: Option<u32>,
    /// Master seed [default: 0].
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct SubjectArgs {
    /// Built-in subject: exact, ans:<w>, or pairing:<radius>[:<drop>].
    #[arg(long, value_parser = SubjectKind::from_str)]
    subject: Option<SubjectKind>,
    /// External subject: a shell command speaking the wire protocol.
    #[arg(long, conflicts_with = "subject")]
    cmd: Option<String>,
    /// Per-batch timeout for --cmd, in seconds [default: 60].
    #[arg(long)]
    timeout: Option<u64>,
    /// Requests per batch for --cmd [default: 256].
    #[arg(long)]
    batch_size: Option<usize>,
}

impl SubjectArgs {
    fn runner(&self) -> Result<SubjectRunner> {
        match (&self.subject, &self.cmd) {
            (Some(kind), None) => Ok(SubjectRunner::Builtin(*kind)),
            (None, Some(command)) => {
                let mut subject = ExternalSubject::new(command.clone());
                if let Some(secs) = self.timeout {
                    subject.timeout = Duration::from_secs(secs);
                }
                if let Some(size) = self.batch_size {
                    subject.batch_size = size;
                }
                Ok(SubjectRunner::External(subject))
            }
            _ => Err(Error::InvalidConfig(
                "pass exactly one of --subject or --cmd".into(),
            )),
        }
    }
}

#[derive(Args)]
struct Simulate {
    /// Dataset directory.
    #[arg(long)]
    data: PathBuf,
    #[command(flatten)]
    subject: SubjectArgs,
    /// Where to write the answer set [default: <data>/answers-<run-id>.json].
    #[arg(long)]
    out: Option<PathBuf>,
    /// Run seed for subject noise [default: 0].
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct Aggregate {
    /// Dataset directory.
    #[arg(long)]
    data: PathBuf,
    /// Answer set written by `simulate`.
    #[arg(long)]
    answers: PathBuf,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Decimal places for percentages.
    #[arg(long, default_value_t = 1)]
    decimals: u8,
    /// Row tag for the grid [default: the answer set's subject].
    #[arg(long)]
    train_tag: Option<String>,
}

#[derive(Args)]
struct Fit {
    /// Dataset directory.
    #[arg(long)]
    data: PathBuf,
    /// Answer set written by `simulate`.
    #[arg(long)]
    answers: PathBuf,
    /// Bootstrap resamples for fit standard errors.
    #[arg(long)]
    bootstrap: Option<usize>,
    /// Row tag for curve labels [default: the answer set's subject].
    #[arg(long)]
    train_tag: Option<String>,
    /// Bootstrap seed [default: 0].
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct Report {
    /// Dataset directory (omit with --from-fixtures).
    #[arg(long, required_unless_present = "from_fixtures")]
    data: Option<PathBuf>,
    #[command(flatten)]
    subject: SubjectArgs,
    /// Output directory for grid.csv, summary.json, curves.svg.
    #[arg(long)]
    out: PathBuf,
    /// Report the bundled reference grid and curves instead of a run.
    #[arg(long, conflicts_with_all = ["data", "subject", "cmd"])]
    from_fixtures: bool,
    /// Decimal places for grid percentages.
    #[arg(long, default_value_t = 1)]
    decimals: u8,
    /// Bootstrap resamples for fit standard errors.
    #[arg(long)]
    bootstrap: Option<usize>,
    /// Row tag for the grid [default: the subject label].
    #[arg(long)]
    train_tag: Option<String>,
    /// Run seed for subject noise and bootstrap [default: 0].
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct Verify {
    /// Dataset directory.
    #[arg(long)]
    data: PathBuf,
}

#[derive(Args)]
struct SubjectStdio {
    /// Dataset directory whose records back the answers.
    #[arg(long)]
    data: PathBuf,
    /// Built-in subject answering the requests.
    #[arg(long, default_value = "exact", value_parser = SubjectKind::from_str)]
    subject: SubjectKind,
    /// Run seed for subject noise [default: 0].
    #[arg(long)]
    seed: Option<u64>,
}

/// Which halves of the area-control axis to generate.
#[derive(Clone, Copy, clap::ValueEnum)]
enum AreaChoice {
    Size,
    Area,
    Both,
}

impl AreaChoice {
    fn flags(self) -> Vec<bool> {
        match self {
            AreaChoice::Size => vec![false],
            AreaChoice::Area => vec![true],
            AreaChoice::Both => vec![false, true],
        }
    }
}

/// Seed precedence: the QUANTISCENE_SEED environment variable beats the
/// --seed flag, which beats a seed from a config file, which beats 0.
fn resolve_seed(flag: Option<u64>, file: Option<u64>) -> Result<u64> {
    if let Some(text) = std::env::var_os(SEED_VAR) {
        let text = text.to_string_lossy();
        return text.parse().map_err(|_| {
            Error::InvalidConfig(format!("{SEED_VAR}={text:?} is not a 64-bit seed"))
        });
    }
    Ok(flag.or(file).unwrap_or(0))
}

/// A dataset config file may carry its own seed next to the knobs.
#[derive(Deserialize)]
struct Job<C> {
    #[serde(default)]
    seed: Option<u64>,
    #[serde(flatten)]
    config: C,
}

fn load_job<C: Default + for<'de> Deserialize<'de>>(
    path: &Option<PathBuf>,
) -> Result<(C, Option<u64>)> {
    match path {
        None => Ok((C::default(), None)),
        Some(path) => {
            let job: Job<C> = serde_json::from_slice(&std::fs::read(path)?)?;
            Ok((job.config, job.seed))
        }
    }
}

fn print_manifest(manifest: &harness::DatasetManifest, out: &std::path::Path) {
    let records: u64 = manifest.splits.values().map(|s| s.records).sum();
    let images: u64 = manifest.splits.values().map(|s| s.images).sum();
    println!(
        "wrote {} records, {} images, {} splits (seed {}) to {}",
        records,
        images,
        manifest.splits.len(),
        manifest.master_seed,
        out.display()
    );
}

fn print_report(files: &ReportFiles) {
    println!("grid:    {}", files.grid_csv.display());
    println!("summary: {}", files.summary_json.display());
    println!("curves:  {}", files.curves_svg.display());
    if let Some(answers) = &files.answers_json {
        println!("answers: {}", answers.display());
    }
    for (label, outcome) in &files.summary.modes {
        match outcome {
            harness::ModeOutcome::Fitted {
                w, threshold_75, ..
            } => println!("{label}: w = {w:.4}, 75% threshold = {threshold_75:.4}"),
            harness::ModeOutcome::Degenerate { reason } => {
                println!("{label}: no fit ({reason})")
            }
        }
    }
}

fn load_run(
    data: &std::path::Path,
    answers: &std::path::Path,
    train_tag: &Option<String>,
) -> Result<(AnswerSet, quantiscene::psychometrics::GridReport)> {
    let (_, records) = read_dataset(data)?;
    let set = read_answers(answers)?;
    let tag = train_tag.clone().unwrap_or_else(|| set.subject.clone());
    let outcomes = join_answers(&records, &set.answers, &tag)?;
    Ok((set, aggregate(&outcomes)))
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::GenTrain(args) => {
            let (mut config, file_seed): (TrainDatasetConfig, _) = load_job(&args.config)?;
            if let Some(captioner) = args.captioner {
                config.base.captioner = captioner;
            }
            if let Some(images) = args.images {
                config.images = images;
            }
            if let Some(captions) = args.captions_per_image {
                config.base.captions_per_image = captions;
            }
            if let Some(resolution) = args.resolution {
                config.raster.resolution = resolution;
            }
            let seed = resolve_seed(args.seed, file_seed)?;
            let manifest = harness::generate_train_dataset(&config, seed, &args.out)?;
            print_manifest(&manifest, &args.out);
        }
        Command::GenEval(args) => {
            let (mut config, file_seed): (EvalDatasetConfig, _) = load_job(&args.config)?;
            if let Some(trials) = args.trials {
                config.trials_per_cell = trials;
            }
            if let Some(modes) = args.modes {
                config.modes = modes;
            }
            if args.ratio_study {
                config.ratios = harness::ratio_study_ratios();
            } else if let Some(ratios) = args.ratios {
                config.ratios = ratios;
            }
            if let Some(areas) = args.areas {
                config.area_flags = areas.flags();
            }
            if let Some(resolution) = args.resolution {
                config.raster.resolution = resolution;
            }
            let seed = resolve_seed(args.seed, file_seed)?;
            let manifest = harness::generate_eval_dataset(&config, seed, &args.out)?;
            print_manifest(&manifest, &args.out);
        }
        Command::Simulate(args) => {
            let seed = resolve_seed(args.seed, None)?;
            let (_, records) = read_dataset(&args.data)?;
            let runner = args.subject.runner()?;
            let set = match &runner {
                SubjectRunner::External(subject) => {
                    match run_external(subject, &args.data, &records) {
                        Ok(answers) => AnswerSet::new(&runner.label(), seed, answers),
                        Err(failure) => {
                            let partial = AnswerSet::new(&runner.label(), seed, failure.answered);
                            let path = args.data.join(format!(
                                "answers-{}.partial.json",
                                partial.run_id
                            ));
                            harness::write_answers(&path, &partial)?;
                            eprintln!(
                                "partial: {} of {} answered, resume at record {}, saved {}",
                                partial.answers.len(),
                                records.len(),
                                failure.cursor,
                                path.display()
                            );
                            return Err(failure.error);
                        }
                    }
                }
                SubjectRunner::Builtin(_) => {
                    harness::run_subject(&runner, &args.data, &records, seed)?
                }
            };
            let out = args
                .out
                .unwrap_or_else(|| args.data.join(format!("answers-{}.json", set.run_id)));
            harness::write_answers(&out, &set)?;
            println!(
                "subject {} answered {} records (run {}) -> {}",
                set.subject,
                set.answers.len(),
                set.run_id,
                out.display()
            );
        }
        Command::Aggregate(args) => {
            let (_, grid) = load_run(&args.data, &args.answers, &args.train_tag)?;
            let csv = grid.to_csv(args.decimals);
            match args.out {
                Some(path) => {
                    std::fs::write(&path, csv)?;
                    println!("wrote {} cells to {}", grid.cells.len(), path.display());
                }
                None => print!("{csv}"),
            }
        }
        Command::Fit(args) => {
            let seed = resolve_seed(args.seed, None)?;
            let (_, grid) = load_run(&args.data, &args.answers, &args.train_tag)?;
            let outcomes = fit_outcomes(&grid.curves, args.bootstrap, seed);
            println!("{}", serde_json::to_string_pretty(&outcomes)?);
        }
        Command::Report(args) => {
            let files = if args.from_fixtures {
                fixture_report(&args.out, args.decimals)?
            } else {
                let data = args.data.as_ref().expect("clap enforces --data");
                let seed = resolve_seed(args.seed, None)?;
                let config = ReportConfig {
                    decimals: args.decimals,
                    bootstrap_resamples: args.bootstrap,
                    train_tag: args.train_tag,
                };
                pipeline_report(data, &args.subject.runner()?, seed, &args.out, &config)?
            };
            print_report(&files);
        }
        Command::Verify(args) => {
            let report = verify_dataset(&args.data)?;
            for problem in &report.problems {
                eprintln!("problem: {problem}");
            }
            println!(
                "checked {} records and {} files: {}",
                report.records,
                report.files_checked,
                if report.ok() { "ok" } else { "PROBLEMS FOUND" }
            );
            if !report.ok() {
                return Err(Error::InvalidConfig(format!(
                    "{} problem(s) in {}",
                    report.problems.len(),
                    args.data.display()
                )));
            }
        }
        Command::SubjectStdio(args) => {
            let seed = resolve_seed(args.seed, None)?;
            let (_, records) = read_dataset(&args.data)?;
            answer_stdin(&records, args.subject, seed)?;
        }
    }
    Ok(())
}

/// One wire-protocol request as this tool consumes it.
#[derive(Deserialize)]
struct Request {
    id: String,
    caption: String,
}

/// Serves the wire protocol from pre-generated records: each request's
/// caption is parsed fresh and answered by `subject` against the record's
/// scene, with the same per-record noise streams `simulate` would use.
fn answer_stdin(
    records: &[harness::InstanceRecord],
    subject: SubjectKind,
    seed: u64,
) -> Result<()> {
    let by_id: BTreeMap<&str, &harness::InstanceRecord> =
        records.iter().map(|r| (r.id.as_str(), r)).collect();
    let stdin = std::io::stdin();
    let mut stdout = std::io::stdout().lock();
    for line in stdin.lock().lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let request: Request = serde_json::from_str(&line)?;
        let record = by_id.get(request.id.as_str()).ok_or_else(|| {
            Error::Protocol(format!("request for unknown id {:?}", request.id))
        })?;
        let scene = record.scene.as_ref().ok_or_else(|| Error::InvalidRecord {
            id: record.id.clone(),
            message: "dataset was written without inlined scenes".into(),
        })?;
        let caption = quantiscene::caption::parse(&request.caption)?;
        let answer = subject.answer(scene, &caption, rng::mix_seed(seed, &record.id, 0))?;
        serde_json::to_writer(&mut stdout, &serde_json::json!({"id": request.id, "answer": answer}))?;
        stdout.write_all(b"\n")?;
        stdout.flush()?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            let mut source = std::error::Error::source(&err);
            while let Some(cause) = source {
                eprintln!("  caused by: {cause}");
                source = cause.source();
            }
            ExitCode::FAILURE
        }
    }
}
