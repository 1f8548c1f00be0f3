//! Drive external answerers over the wire protocol: one request per line
//! on stdin (`{"id":…,"image":…,"caption":…}`), one answer per line on
//! stdout (`{"id":…,"answer":…}`).
//!
//! The "subjects" here are one-line shell commands, which is the point:
//! anything that reads and writes line-delimited JSON can be a subject.
//!
//! ```text
//! cargo run --release --example external_subject
//! ```

use quantiscene::generator::PositionMode;
use quantiscene::harness::{
    generate_eval_dataset, join_answers, read_dataset, run_external, EvalDatasetConfig,
    ExternalSubject,
};
use quantiscene::psychometrics::aggregate;

fn main() -> quantiscene::error::Result<()> {
    let data_dir = std::env::temp_dir().join("quantiscene-external-demo");
    if data_dir.exists() {
        std::fs::remove_dir_all(&data_dir)?;
    }

    let mut config = EvalDatasetConfig::default();
    config.trials_per_cell = 16;
    config.modes = vec![PositionMode::Random];
    config.area_flags = vec![false];
    config.raster.resolution = 32;
    generate_eval_dataset(&config, 55, &data_dir)?;
    let (_, records) = read_dataset(&data_dir)?;
    println!("dataset: {} records in {}", records.len(), data_dir.display());

    // A subject that answers "true" to everything, written in sed. The -u
    // keeps it unbuffered so each batch's answers come back promptly.
    let yes_sayer = ExternalSubject::new(
        r#"sed -u 's/.*"id":"\([^"]*\)".*/{"id":"\1","answer":true}/'"#,
    );
    let answers = run_external(&yes_sayer, &data_dir, &records).map_err(|f| f.error)?;
    println!("\nthe yes-sayer answered all {} requests:", answers.len());
    let outcomes = join_answers(&records, &answers, "yes-sayer")?;
    let grid = aggregate(&outcomes);
    print!("{}", grid.to_csv(1));
    println!("(its accuracy per cell = the fraction of captions that really are true)");

    // A subject that answers half the batch and exits. The harness keeps
    // the partial answers and reports where to resume.
    let quitter = ExternalSubject::new(&format!(
        r#"head -n {} | sed -u 's/.*"id":"\([^"]*\)".*/{{"id":"\1","answer":false}}/'"#,
        records.len() / 2
    ));
    match run_external(&quitter, &data_dir, &records) {
        Ok(_) => println!("\nthe quitter unexpectedly finished"),
        Err(failure) => {
            println!(
                "\nthe quitter failed as intended: {}\n  partial answers kept: {}\n  resume from record index {}",
                failure.error,
                failure.answered.len(),
                failure.cursor
            );
        }
    }
    Ok(())
}
