use std::collections::BTreeMap;

use tempfile::tempdir;

use super::*;
use crate::generator::PositionMode::{Paired, Random};
use crate::subjects::{AnsParams, SubjectKind};

fn tiny_eval_config() -> EvalDatasetConfig {
    let mut config = EvalDatasetConfig::default();
    config.trials_per_cell = 6;
    config.modes = vec![Random];
    config.area_flags = vec![false];
    config.ratios = vec![
        RatioSetting::fixed(1, 2).unwrap(),
        RatioSetting::Mixed,
    ];
    config.raster.resolution = 16;
    config
}

#[test]
fn eval_dataset_round_trips_and_verifies() {
    let dir = tempdir().unwrap();
    let manifest = generate_eval_dataset(&tiny_eval_config(), 41, dir.path()).unwrap();

    assert_eq!(manifest.version, MANIFEST_VERSION);
    assert_eq!(manifest.rng_id, rng::RNG_ID);
    assert_eq!(manifest.captioner, "eval_half");
    assert_eq!(manifest.splits.len(), 2);
    assert_eq!(manifest.splits["random-size-1x2"].records, 6);
    // 12 images plus the instance file.
    assert_eq!(manifest.files.len(), 13);

    let (read_back, records) = read_dataset(dir.path()).unwrap();
    assert_eq!(read_back, manifest);
    assert_eq!(records.len(), 12);
    for record in &records {
        assert!(record.scene.is_some());
        assert!(record.agreement.is_some());
        let cell = record.cell.as_ref().unwrap();
        assert_eq!(cell.mode, Random);
        assert_eq!(
            caption::realize(&record.caption_ast),
            record.caption_text
        );
        assert!(dir.path().join(&record.image_path).is_file());
    }
    // The fixed cell pins the base pair; the mixed cell samples it.
    assert!(records
        .iter()
        .filter(|r| r.id.starts_with("random-size-1x2/"))
        .all(|r| {
            let ratio = r.cell.as_ref().unwrap().meta.ratio;
            (ratio.small, ratio.large) == (1, 2)
        }));

    let report = verify_dataset(dir.path()).unwrap();
    assert_eq!(report.records, 12);
    assert_eq!(report.files_checked, 13);
    assert!(report.ok(), "unexpected problems: {:?}", report.problems);
}

#[test]
fn regeneration_is_bytewise_identical() {
    let config = tiny_eval_config();
    let (a, b) = (tempdir().unwrap(), tempdir().unwrap());
    let first = generate_eval_dataset(&config, 99, a.path()).unwrap();
    let second = generate_eval_dataset(&config, 99, b.path()).unwrap();
    assert_eq!(first.files, second.files);
    assert_eq!(
        std::fs::read(a.path().join("instances.jsonl")).unwrap(),
        std::fs::read(b.path().join("instances.jsonl")).unwrap()
    );

    let different = generate_eval_dataset(&config, 100, tempdir().unwrap().path()).unwrap();
    assert_ne!(first.files["instances.jsonl"], different.files["instances.jsonl"]);
}

#[test]
fn train_dataset_shares_images_across_captions() {
    let dir = tempdir().unwrap();
    let mut config = TrainDatasetConfig::default();
    config.images = 4;
    config.base.captions_per_image = 3;
    config.raster.resolution = 16;
    let manifest = generate_train_dataset(&config, 7, dir.path()).unwrap();

    assert_eq!(manifest.captioner, "q_full");
    assert_eq!(manifest.splits["train"].records, 12);
    assert_eq!(manifest.splits["train"].images, 4);
    assert_eq!(manifest.files.len(), 5);

    let (_, records) = read_dataset(dir.path()).unwrap();
    assert_eq!(records.len(), 12);
    assert!(records.iter().all(|r| r.scene.is_none() && r.cell.is_none()));
    let images: std::collections::BTreeSet<&str> =
        records.iter().map(|r| r.image_path.as_str()).collect();
    assert_eq!(images.len(), 4);
    // Records of one image share its generator seed.
    assert!(records
        .chunks(3)
        .all(|chunk| chunk.iter().all(|r| r.seed == chunk[0].seed)));

    let report = verify_dataset(dir.path()).unwrap();
    assert!(report.ok(), "unexpected problems: {:?}", report.problems);
}

#[test]
fn tampering_is_detected() {
    let dir = tempdir().unwrap();
    generate_eval_dataset(&tiny_eval_config(), 5, dir.path()).unwrap();

    let png = dir.path().join("random-size-1x2/00000.png");
    let mut bytes = std::fs::read(&png).unwrap();
    let last = bytes.len() - 1;
    bytes[last] ^= 0xff;
    std::fs::write(&png, bytes).unwrap();
    let report = verify_dataset(dir.path()).unwrap();
    assert!(!report.ok());
    assert!(report
        .problems
        .iter()
        .any(|p| p.contains("00000.png") && p.contains("checksum")));

    let jsonl = dir.path().join("instances.jsonl");
    let mut text = std::fs::read_to_string(&jsonl).unwrap();
    text.push('\n');
    std::fs::write(&jsonl, text).unwrap();
    assert!(matches!(
        read_dataset(dir.path()),
        Err(Error::ChecksumMismatch { .. })
    ));
}

#[test]
fn exact_counter_answers_equal_agreements() {
    let dir = tempdir().unwrap();
    generate_eval_dataset(&tiny_eval_config(), 13, dir.path()).unwrap();
    let (_, records) = read_dataset(dir.path()).unwrap();

    let answers = run_builtin(SubjectKind::ExactCounter, &records, 1).unwrap();
    assert_eq!(answers.answers.len(), records.len());
    for record in &records {
        assert_eq!(answers.answers[&record.id], record.agreement.unwrap());
    }

    let outcomes = join_answers(&records, &answers.answers, "exact").unwrap();
    assert_eq!(outcomes.len(), records.len());
    assert!(outcomes.iter().all(|o| o.correct));
    let grid = crate::psychometrics::aggregate(&outcomes);
    assert!(grid.cells.values().all(|s| s.percent() == 100.0));
}

#[test]
fn builtin_answers_are_thread_count_independent() {
    let dir = tempdir().unwrap();
    generate_eval_dataset(&tiny_eval_config(), 29, dir.path()).unwrap();
    let (_, records) = read_dataset(dir.path()).unwrap();
    let subject = SubjectKind::Ans(AnsParams::new(1.2).unwrap());

    let parallel = run_builtin(subject.clone(), &records, 3).unwrap();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let serial = pool.install(|| run_builtin(subject, &records, 3).unwrap());
    assert_eq!(parallel, serial);
}

#[test]
fn join_rejects_incomplete_or_unlabeled_answer_sets() {
    let dir = tempdir().unwrap();
    generate_eval_dataset(&tiny_eval_config(), 17, dir.path()).unwrap();
    let (_, mut records) = read_dataset(dir.path()).unwrap();
    let full = run_builtin(SubjectKind::ExactCounter, &records, 1)
        .unwrap()
        .answers;

    let mut missing = full.clone();
    missing.remove(&records[0].id);
    assert!(matches!(
        join_answers(&records, &missing, "t"),
        Err(Error::Protocol(_))
    ));

    let mut extra = full.clone();
    extra.insert("nonexistent/00000".into(), true);
    assert!(matches!(
        join_answers(&records, &extra, "t"),
        Err(Error::Protocol(_))
    ));

    records[0].agreement = None;
    assert!(matches!(
        join_answers(&records, &full, "t"),
        Err(Error::MissingGroundTruth(_))
    ));
}

#[test]
fn answer_sets_round_trip_through_disk() {
    let mut answers = BTreeMap::new();
    answers.insert("a/00000".to_owned(), true);
    answers.insert("a/00001".to_owned(), false);
    let set = AnswerSet::new("ans:1.11", 42, answers);
    assert_eq!(set.run_id, "ans_1.11-0000002a");

    let dir = tempdir().unwrap();
    let path = dir.path().join("answers.json");
    write_answers(&path, &set).unwrap();
    assert_eq!(read_answers(&path).unwrap(), set);
}

#[test]
fn pipeline_report_flags_saturated_fits_and_writes_outputs() {
    let dir = tempdir().unwrap();
    let data = dir.path().join("data");
    let out = dir.path().join("report");
    generate_eval_dataset(&tiny_eval_config(), 23, &data).unwrap();

    let files = pipeline_report(
        &data,
        &SubjectRunner::Builtin(SubjectKind::ExactCounter),
        0,
        &out,
        &ReportConfig::default(),
    )
    .unwrap();

    let csv = std::fs::read_to_string(&files.grid_csv).unwrap();
    assert!(csv.starts_with("train,mode,area,ratio,accuracy,trials\n"));
    assert!(csv.contains("exact,random,size,1:2,100.0,6"));
    assert!(files.curves_svg.is_file());
    assert!(files.answers_json.as_ref().unwrap().is_file());

    let summary: ReportSummary =
        serde_json::from_slice(&std::fs::read(&files.summary_json).unwrap()).unwrap();
    assert_eq!(summary.subject, "exact");
    assert_eq!(summary.records, 12);
    assert!(matches!(
        summary.modes["exact/random"],
        ModeOutcome::Degenerate { .. }
    ));
}

#[test]
fn fixture_report_reproduces_the_published_readouts() {
    let dir = tempdir().unwrap();
    let files = fixture_report(dir.path(), 0).unwrap();

    let csv = std::fs::read_to_string(&files.grid_csv).unwrap();
    assert!(csv.contains("q_full,partitioned,size,7:8,72,100"));
    assert!(csv.contains("q_full,random,size,1:2,100,100"));

    let ModeOutcome::Fitted { w, threshold_75, .. } = files.summary.modes["q_full/random"] else {
        panic!("random fixture curve must fit");
    };
    assert!((1.09..=1.13).contains(&w));
    assert!((threshold_75 - 1.11).abs() <= 0.02);

    let ModeOutcome::Fitted { w, threshold_75, .. } =
        files.summary.modes["q_full/partitioned"]
    else {
        panic!("partitioned fixture curve must fit");
    };
    assert!((1.14..=1.18).contains(&w));
    assert!((threshold_75 - 1.16).abs() <= 0.02);
}

#[test]
fn paired_cells_join_their_own_curves() {
    let dir = tempdir().unwrap();
    let mut config = tiny_eval_config();
    config.modes = vec![Random, Paired];
    config.ratios = vec![RatioSetting::fixed(1, 2).unwrap()];
    generate_eval_dataset(&config, 31, dir.path()).unwrap();
    let (_, records) = read_dataset(dir.path()).unwrap();
    let answers = run_builtin(SubjectKind::ExactCounter, &records, 0).unwrap();
    let outcomes = join_answers(&records, &answers.answers, "exact").unwrap();
    let grid = crate::psychometrics::aggregate(&outcomes);
    assert_eq!(grid.curves.len(), 2);
    for points in grid.curves.values() {
        assert_eq!(points.len(), 1);
        assert_eq!(points[0].ratio, 2.0);
        assert_eq!(points[0].trials, 6);
    }
}
