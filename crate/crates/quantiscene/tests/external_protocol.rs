//! The external-subject wire protocol: line-delimited JSON requests on
//! stdin, answers on stdout. These tests drive it with one-line shell
//! subjects and check the failure modes stay typed errors.

use std::time::Duration;

use quantiscene::error::Error;
use quantiscene::generator::PositionMode;
use quantiscene::harness::{
    generate_eval_dataset, join_answers, read_dataset, run_external, EvalDatasetConfig,
    ExternalSubject, InstanceRecord,
};
use tempfile::TempDir;

/// Replies `{"id":…,"answer":true}` to every request, unbuffered.
const YES_SAYER: &str = r#"sed -u 's/.*"id":"\([^"]*\)".*/{"id":"\1","answer":true}/'"#;

fn dataset() -> (TempDir, Vec<InstanceRecord>) {
    let dir = tempfile::tempdir().unwrap();
    let mut config = EvalDatasetConfig::default();
    config.trials_per_cell = 8;
    config.modes = vec![PositionMode::Random];
    config.area_flags = vec![false];
    config.ratios = vec![
        quantiscene::generator::RatioSetting::fixed(1, 2).unwrap(),
        quantiscene::generator::RatioSetting::fixed(5, 6).unwrap(),
    ];
    config.raster.resolution = 16;
    generate_eval_dataset(&config, 441, dir.path()).unwrap();
    let (_, records) = read_dataset(dir.path()).unwrap();
    assert_eq!(records.len(), 16);
    (dir, records)
}

#[test]
fn yes_sayer_scores_exactly_the_true_fraction() {
    let (dir, records) = dataset();
    let answers = run_external(&ExternalSubject::new(YES_SAYER), dir.path(), &records)
        .expect("the yes-sayer answers everything");
    assert_eq!(answers.len(), records.len());
    assert!(answers.values().all(|&a| a));

    let outcomes = join_answers(&records, &answers, "yes").unwrap();
    let correct = outcomes.iter().filter(|o| o.correct).count();
    let truly_true = records
        .iter()
        .filter(|r| r.agreement == Some(true))
        .count();
    assert_eq!(correct, truly_true);
}

#[test]
fn small_batches_round_trip() {
    let (dir, records) = dataset();
    let mut subject = ExternalSubject::new(YES_SAYER);
    subject.batch_size = 5;
    let answers = run_external(&subject, dir.path(), &records).unwrap();
    assert_eq!(answers.len(), 16);
}

#[test]
fn out_of_order_answers_within_a_batch_are_accepted() {
    let (dir, records) = dataset();
    // Reads two requests, answers them in reverse order.
    let swapper = r#"while read -r a && read -r b; do
        ai=${a#*\"id\":\"}; ai=${ai%%\"*}
        bi=${b#*\"id\":\"}; bi=${bi%%\"*}
        printf '{"id":"%s","answer":true}\n{"id":"%s","answer":true}\n' "$bi" "$ai"
    done"#;
    let mut subject = ExternalSubject::new(swapper);
    subject.batch_size = 2;
    let answers = run_external(&subject, dir.path(), &records).unwrap();
    assert_eq!(answers.len(), 16);
}

#[test]
fn early_exit_keeps_partial_answers_and_a_cursor() {
    let (dir, records) = dataset();
    let quitter = format!("head -n 8 | {YES_SAYER}");
    let failure = run_external(&ExternalSubject::new(quitter), dir.path(), &records)
        .expect_err("the quitter must fail");
    assert!(matches!(failure.error, Error::Protocol(_)), "{}", failure.error);
    assert_eq!(failure.answered.len(), 8);
    assert_eq!(failure.cursor, 8);
    for record in &records[..8] {
        assert_eq!(failure.answered.get(&record.id), Some(&true));
    }
}

#[test]
fn silence_times_out_with_a_typed_error() {
    let (dir, records) = dataset();
    let mut subject = ExternalSubject::new("cat > /dev/null");
    subject.timeout = Duration::from_millis(300);
    let failure = run_external(&subject, dir.path(), &records).expect_err("must time out");
    assert!(matches!(failure.error, Error::Timeout(_)), "{}", failure.error);
    assert_eq!(failure.answered.len(), 0);
    assert_eq!(failure.cursor, 0);
}

#[test]
fn protocol_violations_are_typed_errors() {
    let (dir, records) = dataset();
    let cases: [(&str, String); 4] = [
        ("malformed line", "echo 'not json at all'".to_owned()),
        (
            "wrong field types",
            r#"sed -u 's/.*/{"id":13,"answer":"maybe"}/'"#.to_owned(),
        ),
        (
            "unknown id",
            r#"sed -u 's/.*"id":"\([^"]*\)".*/{"id":"nope-\1","answer":true}/'"#.to_owned(),
        ),
        (
            "duplicate answers",
            r#"sed -u 's/.*"id":"\([^"]*\)".*/{"id":"\1","answer":true}\n{"id":"\1","answer":true}/'"#
                .to_owned(),
        ),
    ];
    for (label, command) in cases {
        let failure = run_external(&ExternalSubject::new(command), dir.path(), &records)
            .expect_err(&format!("{label} should fail"));
        assert!(
            matches!(failure.error, Error::Protocol(_)),
            "{label}: {}",
            failure.error
        );
    }
}

#[test]
fn fuzzed_subjects_never_panic() {
    let (dir, records) = dataset();
    let commands = [
        "true",
        "false",
        "yes '{'",
        "tr -d '\\n' < /dev/zero",
        "head -c 256 /dev/urandom",
        "printf '\\n\\n\\n'",
        r#"sed -u 's/.*/{"answer":true}/'"#,
        r#"sed -u 's/.*/null/'"#,
    ];
    for command in commands {
        let mut subject = ExternalSubject::new(command);
        subject.timeout = Duration::from_millis(400);
        let failure = run_external(&subject, dir.path(), &records)
            .err()
            .unwrap_or_else(|| panic!("{command:?} unexpectedly answered everything"));
        assert!(
            matches!(failure.error, Error::Protocol(_) | Error::Timeout(_)),
            "{command:?} produced an untyped failure: {}",
            failure.error
        );
    }
}
