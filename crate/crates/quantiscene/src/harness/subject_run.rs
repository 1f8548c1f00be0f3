//! Answering datasets with built-in subjects, and answer-set persistence.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;
use crate::subjects::SubjectKind;

use super::subject_proc::{run_external, ExternalSubject};
use super::InstanceRecord;

/// How a dataset gets answered: in-process simulation or an external
/// process speaking the wire protocol.
#[derive(Debug, Clone)]
pub enum SubjectRunner {
    Builtin(SubjectKind),
    External(ExternalSubject),
}

impl SubjectRunner {
    pub fn label(&self) -> String {
        match self {
            SubjectRunner::Builtin(kind) => kind.to_string(),
            SubjectRunner::External(subject) => format!("cmd:{}", subject.command),
        }
    }
}

/// One subject's answers over a dataset, keyed by record id and tagged
/// with a run id so several subjects can be compared side by side.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnswerSet {
    pub run_id: String,
    pub subject: String,
    pub seed: u64,
    pub answers: BTreeMap<String, bool>,
}

impl AnswerSet {
    pub fn new(subject: &str, seed: u64, answers: BTreeMap<String, bool>) -> Self {
        let sanitized: String = subject
            .chars()
            .map(|c| if c.is_ascii_alphanumeric() || c == '.' || c == '-' {
                c
            } else {
                '_'
            })
            .take(40)
            .collect();
        AnswerSet {
            run_id: format!("{sanitized}-{seed:08x}"),
            subject: subject.to_owned(),
            seed,
            answers,
        }
    }
}

/// Answers every record with a built-in subject, in parallel. Each record
/// draws its noise from a stream derived from `(run_seed, record id)`, so
/// the answers are deterministic and independent of thread count. Records
/// must carry inlined scenes.
pub fn run_builtin(
    subject: SubjectKind,
    records: &[InstanceRecord],
    run_seed: u64,
) -> Result<AnswerSet> {
    let answers: BTreeMap<String, bool> = records
        .par_iter()
        .map(|record| -> Result<(String, bool)> {
            let scene = record.scene.as_ref().ok_or_else(|| Error::InvalidRecord {
                id: record.id.clone(),
                message: "built-in subjects need an inlined scene".into(),
            })?;
            let seed = rng::mix_seed(run_seed, &record.id, 0);
            let answer = subject.answer(scene, &record.caption_ast, seed)?;
            Ok((record.id.clone(), answer))
        })
        .collect::<Result<_>>()?;
    Ok(AnswerSet::new(&subject.to_string(), run_seed, answers))
}

/// Answers every record with either kind of subject. External failures
/// surface as their underlying error; use [`run_external`] directly to
/// keep partial results.
pub fn run_subject(
    runner: &SubjectRunner,
    data_dir: &Path,
    records: &[InstanceRecord],
    run_seed: u64,
) -> Result<AnswerSet> {
    match runner {
        SubjectRunner::Builtin(kind) => run_builtin(*kind, records, run_seed),
        SubjectRunner::External(subject) => {
            let answers =
                run_external(subject, data_dir, records).map_err(|failure| failure.error)?;
            Ok(AnswerSet::new(&runner.label(), run_seed, answers))
        }
    }
}

pub fn write_answers(path: &Path, answers: &AnswerSet) -> Result<()> {
    fs::write(path, serde_json::to_string_pretty(answers)?).map_err(Error::from)
}

pub fn read_answers(path: &Path) -> Result<AnswerSet> {
    Ok(serde_json::from_slice(&fs::read(path)?)?)
}
