//! Dataset plumbing and end-to-end pipelines: serialize generated
//! instances to JSONL + PNG with a checksummed manifest, answer them with
//! built-in or external subjects, and aggregate the answers into reports.
//!
//! A dataset directory holds `manifest.json`, `instances.jsonl` (one
//! record per line), and one PNG per image under per-split directories.
//! Everything is a pure function of `(config, master_seed)`: regenerating
//! from a manifest reproduces identical bytes regardless of thread count.

mod pipeline;
mod subject_proc;
mod subject_run;

pub use pipeline::{
    fit_outcomes, fixture_report, pipeline_report, ModeOutcome, ReportConfig, ReportFiles,
    ReportSummary,
};
pub use subject_proc::{run_external, ExternalFailure, ExternalSubject};
pub use subject_run::{read_answers, run_builtin, run_subject, write_answers, AnswerSet, SubjectRunner};

use std::collections::BTreeMap;
use std::fs;
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::caption::{self, CaptionAst};
use crate::error::{Error, Result};
use crate::generator::{
    eval_caption_for, generate_eval_scene_reseeded, generate_training_scene_reseeded,
    sample_training_caption, check_eval_scene, EvalConfig, EvalSceneMeta,
    PositionMode, RatioSetting, TrainConfig, DEFAULT_RATIO_POOL, EXTENDED_RATIO_POOL,
};
use crate::psychometrics::TrialOutcome;
use crate::raster::{self, RasterConfig};
use crate::rng;
use crate::scene::Scene;

/// Manifest format version.
pub const MANIFEST_VERSION: &str = "quantiscene-dataset-v1";

/// The evaluation grid the scene was generated under, kept on the record
/// so answers can be aggregated without the manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellDesc {
    pub mode: PositionMode,
    pub area_controlled: bool,
    /// Grid column: a fixed pair or the mixed `all` setting.
    pub ratio_setting: RatioSetting,
    pub meta: EvalSceneMeta,
}

/// One dataset instance: an image, a caption, and its agreement value.
///
/// `caption_text` always equals `realize(caption_ast)`, and whenever the
/// scene is inlined, `evaluate(caption_ast, scene)` equals `agreement`.
/// `seed` is the instance seed handed to the scene generator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceRecord {
    pub id: String,
    pub image_path: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scene: Option<Scene>,
    pub caption_text: String,
    pub caption_ast: CaptionAst,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub agreement: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cell: Option<CellDesc>,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitInfo {
    pub records: u64,
    pub images: u64,
}

/// Evaluation-grid dataset configuration. The default is the full
/// 48-cell grid at 1024 trials per cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EvalDatasetConfig {
    pub trials_per_cell: usize,
    pub modes: Vec<PositionMode>,
    /// Area flags to cross with the modes; `false` is size-controlled.
    pub area_flags: Vec<bool>,
    pub ratios: Vec<RatioSetting>,
    /// Per-cell template; its mode, area flag and ratio are overwritten.
    pub base: EvalConfig,
    pub raster: RasterConfig,
    /// Inline each scene in its record (needed by built-in subjects and
    /// deep verification).
    pub inline_scenes: bool,
}

impl Default for EvalDatasetConfig {
    fn default() -> Self {
        EvalDatasetConfig {
            trials_per_cell: 1024,
            modes: PositionMode::ALL.to_vec(),
            area_flags: vec![false, true],
            ratios: default_grid_ratios(),
            base: EvalConfig::default(),
            raster: RasterConfig::default(),
            inline_scenes: true,
        }
    }
}

/// The standard grid columns: `all` plus the seven fixed pairs.
pub fn default_grid_ratios() -> Vec<RatioSetting> {
    let mut ratios = vec![RatioSetting::Mixed];
    ratios.extend(
        DEFAULT_RATIO_POOL
            .iter()
            .map(|&(s, l)| RatioSetting::fixed(s, l).expect("pool ratio")),
    );
    ratios
}

/// The ratio-study columns: every fixed pair from 1:2 up to 10:11.
pub fn ratio_study_ratios() -> Vec<RatioSetting> {
    DEFAULT_RATIO_POOL
        .iter()
        .chain(EXTENDED_RATIO_POOL.iter())
        .map(|&(s, l)| RatioSetting::fixed(s, l).expect("pool ratio"))
        .collect()
}

/// Training dataset configuration. The default is one 4096-image shard
/// with five captions per image.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainDatasetConfig {
    pub images: usize,
    pub base: TrainConfig,
    pub raster: RasterConfig,
    pub inline_scenes: bool,
}

impl Default for TrainDatasetConfig {
    fn default() -> Self {
        TrainDatasetConfig {
            images: 4096,
            base: TrainConfig::default(),
            raster: RasterConfig::default(),
            inline_scenes: false,
        }
    }
}

/// What a dataset directory was generated from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DatasetConfig {
    Train(TrainDatasetConfig),
    Eval(EvalDatasetConfig),
}

impl DatasetConfig {
    pub fn raster(&self) -> &RasterConfig {
        match self {
            DatasetConfig::Train(c) => &c.raster,
            DatasetConfig::Eval(c) => &c.raster,
        }
    }

    fn captioner_tag(&self) -> String {
        match self {
            DatasetConfig::Train(c) => c.base.captioner.label().to_owned(),
            DatasetConfig::Eval(_) => "eval_half".to_owned(),
        }
    }
}

/// Everything needed to reproduce and validate a dataset directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub version: String,
    pub rng_id: String,
    pub master_seed: u64,
    pub captioner: String,
    pub config: DatasetConfig,
    pub splits: BTreeMap<String, SplitInfo>,
    /// Relative path → SHA-256 hex of every data file.
    pub files: BTreeMap<String, String>,
}

fn sha256_hex(bytes: &[u8]) -> String {
    use std::fmt::Write as _;
    let digest = Sha256::digest(bytes);
    let mut out = String::with_capacity(64);
    for byte in digest {
        let _ = write!(out, "{byte:02x}");
    }
    out
}

/// Directory name of one evaluation cell, e.g. `random-size-1x2`.
pub fn cell_split_name(mode: PositionMode, area_controlled: bool, ratio: RatioSetting) -> String {
    format!(
        "{}-{}-{}",
        mode,
        crate::psychometrics::area_label(area_controlled),
        ratio.to_string().replace(':', "x")
    )
}

struct RenderedInstance {
    record: InstanceRecord,
    image: Option<(String, Vec<u8>)>,
}

/// Generates the full evaluation grid into `out_dir`.
///
/// Every cell from `config.modes × config.area_flags × config.ratios`
/// receives `trials_per_cell` instances. Instance `i` of a cell derives
/// its scene seed from `(master_seed, "eval/<cell>", i)` and redraws
/// deterministically on placement failure, so the dataset is a pure
/// function of `(config, master_seed)` regardless of parallelism.
pub fn generate_eval_dataset(
    config: &EvalDatasetConfig,
    master_seed: u64,
    out_dir: &Path,
) -> Result<DatasetManifest> {
    if config.trials_per_cell == 0 {
        return Err(Error::InvalidConfig("trials_per_cell must be positive".into()));
    }
    let mut cells = Vec::new();
    for &mode in &config.modes {
        for &area_controlled in &config.area_flags {
            for &ratio in &config.ratios {
                let mut cell_config = config.base.clone();
                cell_config.mode = mode;
                cell_config.area_controlled = area_controlled;
                cell_config.ratio = ratio;
                cells.push((cell_split_name(mode, area_controlled, ratio), cell_config));
            }
        }
    }
    if cells.is_empty() {
        return Err(Error::InvalidConfig("empty evaluation grid".into()));
    }

    let mut splits = BTreeMap::new();
    let mut instances: Vec<(String, usize, EvalConfig)> =
        Vec::with_capacity(cells.len() * config.trials_per_cell);
    for (split, cell_config) in &cells {
        splits.insert(
            split.clone(),
            SplitInfo {
                records: config.trials_per_cell as u64,
                images: config.trials_per_cell as u64,
            },
        );
        for index in 0..config.trials_per_cell {
            instances.push((split.clone(), index, cell_config.clone()));
        }
    }

    let rendered: Vec<RenderedInstance> = instances
        .into_par_iter()
        .map(|(split, index, cell_config)| -> Result<RenderedInstance> {
            let seed = rng::mix_seed(master_seed, &format!("eval/{split}"), index as u64);
            let (scene, meta, _) = generate_eval_scene_reseeded(&cell_config, seed)?;
            let caption_seed = rng::mix_seed(master_seed, &format!("caption/{split}"), index as u64);
            let (caption_ast, agreement) = eval_caption_for(&meta, caption_seed);
            let image_path = format!("{split}/{index:05}.png");
            let image = raster::render(&scene, &config.raster)?;
            let record = InstanceRecord {
                id: format!("{split}/{index:05}"),
                image_path: image_path.clone(),
                caption_text: caption::realize(&caption_ast),
                caption_ast,
                agreement: Some(agreement),
                cell: Some(CellDesc {
                    mode: cell_config.mode,
                    area_controlled: cell_config.area_controlled,
                    ratio_setting: cell_config.ratio,
                    meta,
                }),
                seed,
                scene: config.inline_scenes.then_some(scene),
            };
            Ok(RenderedInstance {
                record,
                image: Some((image_path, raster::png_bytes(&image)?)),
            })
        })
        .collect::<Result<_>>()?;

    write_rendered(
        out_dir,
        DatasetConfig::Eval(config.clone()),
        master_seed,
        splits,
        rendered,
    )
}

/// Generates a training dataset into `out_dir`: `images` scenes under the
/// `train` split, each rendered once and captioned
/// `config.base.captions_per_image` times.
pub fn generate_train_dataset(
    config: &TrainDatasetConfig,
    master_seed: u64,
    out_dir: &Path,
) -> Result<DatasetManifest> {
    if config.images == 0 || config.base.captions_per_image == 0 {
        return Err(Error::InvalidConfig(
            "training datasets need at least one image and one caption".into(),
        ));
    }
    let captions = config.base.captions_per_image;
    let rendered: Vec<Vec<RenderedInstance>> = (0..config.images)
        .into_par_iter()
        .map(|index| -> Result<Vec<RenderedInstance>> {
            let seed = rng::mix_seed(master_seed, "train", index as u64);
            let (scene, _) = generate_training_scene_reseeded(&config.base, seed)?;
            let image_path = format!("train/{index:05}.png");
            let image = raster::render(&scene, &config.raster)?;
            let png = raster::png_bytes(&image)?;
            let records = (0..captions)
                .map(|c| {
                    let caption_seed =
                        rng::mix_seed(master_seed, &format!("train-caption/{c}"), index as u64);
                    let (caption_ast, agreement) =
                        sample_training_caption(&scene, config.base.captioner, caption_seed);
                    InstanceRecord {
                        id: format!("train/{index:05}#{c}"),
                        image_path: image_path.clone(),
                        caption_text: caption::realize(&caption_ast),
                        caption_ast,
                        agreement: Some(agreement),
                        cell: None,
                        seed,
                        scene: config.inline_scenes.then(|| scene.clone()),
                    }
                })
                .collect::<Vec<_>>();
            Ok(records
                .into_iter()
                .enumerate()
                .map(|(c, record)| RenderedInstance {
                    record,
                    image: (c == 0).then(|| (image_path.clone(), png.clone())),
                })
                .collect())
        })
        .collect::<Result<_>>()?;

    let mut splits = BTreeMap::new();
    splits.insert(
        "train".to_owned(),
        SplitInfo {
            records: (config.images * captions) as u64,
            images: config.images as u64,
        },
    );
    write_rendered(
        out_dir,
        DatasetConfig::Train(config.clone()),
        master_seed,
        splits,
        rendered.into_iter().flatten().collect(),
    )
}

fn write_rendered(
    out_dir: &Path,
    config: DatasetConfig,
    master_seed: u64,
    splits: BTreeMap<String, SplitInfo>,
    rendered: Vec<RenderedInstance>,
) -> Result<DatasetManifest> {
    fs::create_dir_all(out_dir)?;
    let mut files = BTreeMap::new();
    let mut jsonl = Vec::new();
    for instance in &rendered {
        serde_json::to_writer(&mut jsonl, &instance.record)?;
        jsonl.push(b'\n');
    }
    files.insert("instances.jsonl".to_owned(), sha256_hex(&jsonl));
    fs::write(out_dir.join("instances.jsonl"), &jsonl)?;

    rendered
        .par_iter()
        .try_for_each(|instance| -> Result<()> {
            if let Some((path, bytes)) = &instance.image {
                let target = out_dir.join(path);
                if let Some(parent) = target.parent() {
                    fs::create_dir_all(parent)?;
                }
                fs::write(target, bytes)?;
            }
            Ok(())
        })?;
    for instance in &rendered {
        if let Some((path, bytes)) = &instance.image {
            files.insert(path.clone(), sha256_hex(bytes));
        }
    }

    let manifest = DatasetManifest {
        version: MANIFEST_VERSION.to_owned(),
        rng_id: rng::RNG_ID.to_owned(),
        master_seed,
        captioner: config.captioner_tag(),
        config,
        splits,
        files,
    };
    fs::write(
        out_dir.join("manifest.json"),
        serde_json::to_string_pretty(&manifest)?,
    )?;
    Ok(manifest)
}

/// Reads a dataset directory back: manifest plus all instance records, in
/// file order. The instance file's checksum is verified against the
/// manifest; image files are left to [`verify_dataset`].
pub fn read_dataset(dir: &Path) -> Result<(DatasetManifest, Vec<InstanceRecord>)> {
    let manifest: DatasetManifest =
        serde_json::from_slice(&fs::read(dir.join("manifest.json"))?)?;
    if manifest.version != MANIFEST_VERSION {
        return Err(Error::InvalidConfig(format!(
            "manifest version {:?}; this build reads {MANIFEST_VERSION:?}",
            manifest.version
        )));
    }
    let jsonl = fs::read(dir.join("instances.jsonl"))?;
    if let Some(expected) = manifest.files.get("instances.jsonl") {
        let actual = sha256_hex(&jsonl);
        if &actual != expected {
            return Err(Error::ChecksumMismatch {
                path: "instances.jsonl".to_owned(),
                expected: expected.clone(),
                actual,
            });
        }
    }
    let mut records = Vec::new();
    for line in BufReader::new(&jsonl[..]).lines() {
        let line = line?;
        if line.is_empty() {
            continue;
        }
        records.push(serde_json::from_str(&line)?);
    }
    Ok((manifest, records))
}

/// Outcome of [`verify_dataset`]: counts plus every invariant violation
/// found. An empty `problems` list means the dataset checks out.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct VerifyReport {
    pub records: usize,
    pub files_checked: usize,
    pub problems: Vec<String>,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.problems.is_empty()
    }
}

/// Re-checks every dataset invariant: file checksums, caption texts
/// against their ASTs, agreements against inlined scenes, evaluation-cell
/// scene constraints, and bytewise image reproduction for records with
/// inlined scenes.
pub fn verify_dataset(dir: &Path) -> Result<VerifyReport> {
    let (manifest, records) = read_dataset(dir)?;
    let mut problems: Vec<String> = Vec::new();

    let mut file_problems: Vec<String> = manifest
        .files
        .par_iter()
        .filter_map(|(path, expected)| match fs::read(dir.join(path)) {
            Err(err) => Some(format!("{path}: unreadable: {err}")),
            Ok(bytes) => {
                let actual = sha256_hex(&bytes);
                (&actual != expected)
                    .then(|| format!("{path}: checksum {actual} does not match manifest"))
            }
        })
        .collect();
    file_problems.sort();
    problems.extend(file_problems);

    let mut record_problems: Vec<String> = records
        .par_iter()
        .flat_map_iter(|record| check_record(dir, &manifest, record))
        .collect();
    record_problems.sort();
    problems.extend(record_problems);

    Ok(VerifyReport {
        records: records.len(),
        files_checked: manifest.files.len(),
        problems,
    })
}

fn check_record(dir: &Path, manifest: &DatasetManifest, record: &InstanceRecord) -> Vec<String> {
    let mut problems = Vec::new();
    let id = &record.id;
    if caption::realize(&record.caption_ast) != record.caption_text {
        problems.push(format!("{id}: caption text does not realize its AST"));
    }
    match caption::parse(&record.caption_text) {
        Ok(parsed) => {
            if parsed != record.caption_ast {
                problems.push(format!("{id}: caption text parses to a different AST"));
            }
        }
        Err(err) => problems.push(format!("{id}: caption text does not parse: {err}")),
    }
    if record.agreement.is_none() {
        problems.push(format!("{id}: agreement missing"));
    }
    if !manifest.files.contains_key(&record.image_path) {
        problems.push(format!("{id}: image {} not in manifest", record.image_path));
    }

    let Some(scene) = &record.scene else {
        return problems;
    };
    if let Some(agreement) = record.agreement {
        if caption::evaluate(&record.caption_ast, scene) != agreement {
            problems.push(format!("{id}: agreement does not match evaluation"));
        }
    }
    if let Some(cell) = &record.cell {
        if let DatasetConfig::Eval(config) = &manifest.config {
            let mut cell_config = config.base.clone();
            cell_config.mode = cell.mode;
            cell_config.area_controlled = cell.area_controlled;
            cell_config.ratio = cell.ratio_setting;
            if let Err(violation) = check_eval_scene(scene, &cell.meta, &cell_config) {
                problems.push(format!("{id}: scene constraint violated: {violation}"));
            }
        }
    } else {
        for violation in scene.violations() {
            problems.push(format!("{id}: scene constraint violated: {violation}"));
        }
    }
    match raster::render(scene, manifest.config.raster()) {
        Err(err) => problems.push(format!("{id}: scene does not render: {err}")),
        Ok(image) => match (raster::png_bytes(&image), fs::read(dir.join(&record.image_path))) {
            (Ok(bytes), Ok(disk)) => {
                if bytes != disk {
                    problems.push(format!(
                        "{id}: image {} does not reproduce from its scene",
                        record.image_path
                    ));
                }
            }
            (Err(err), _) => problems.push(format!("{id}: image encode failed: {err}")),
            (_, Err(err)) => problems.push(format!("{id}: image unreadable: {err}")),
        },
    }
    problems
}

/// Joins subject answers to their records as aggregation rows.
///
/// `train` tags the rows (the answering subject's training regime or
/// spec). Records without an evaluation cell are skipped — training
/// records don't aggregate into the grid. Errors with
/// [`Error::MissingGroundTruth`] if an answered record lacks an agreement,
/// and [`Error::Protocol`] if a record has no answer or an answer matches
/// no record.
pub fn join_answers(
    records: &[InstanceRecord],
    answers: &BTreeMap<String, bool>,
    train: &str,
) -> Result<Vec<TrialOutcome>> {
    let mut seen = 0usize;
    let mut outcomes = Vec::new();
    for record in records {
        let Some(answer) = answers.get(&record.id) else {
            return Err(Error::Protocol(format!("no answer for record {}", record.id)));
        };
        seen += 1;
        let Some(cell) = &record.cell else {
            continue;
        };
        let Some(agreement) = record.agreement else {
            return Err(Error::MissingGroundTruth(record.id.clone()));
        };
        outcomes.push(TrialOutcome {
            train: train.to_owned(),
            mode: cell.mode,
            area_controlled: cell.area_controlled,
            cell_ratio: cell.ratio_setting,
            ratio: cell.meta.ratio,
            correct: *answer == agreement,
        });
    }
    if seen != answers.len() {
        return Err(Error::Protocol(format!(
            "{} answers do not match any record",
            answers.len() - seen
        )));
    }
    Ok(outcomes)
}

/// Appends JSONL lines for `records` to a writer; used by the CLI and
/// tests that need handcrafted datasets.
pub fn write_records(mut writer: impl std::io::Write, records: &[InstanceRecord]) -> Result<()> {
    for record in records {
        serde_json::to_writer(&mut writer, record)?;
        writer.write_all(b"\n")?;
    }
    Ok(())
}

/// Resolves a dataset image path against the dataset directory.
pub fn image_file(dir: &Path, record: &InstanceRecord) -> PathBuf {
    dir.join(&record.image_path)
}

#[cfg(test)]
mod tests;
