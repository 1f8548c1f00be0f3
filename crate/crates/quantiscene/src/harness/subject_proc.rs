//! The external-subject wire protocol.
//!
//! The harness spawns the subject command through `sh -c`, writes one
//! JSON request per line to its stdin
//! (`{"id":…, "image":"<path>", "caption":"<text>"}`), and reads one JSON
//! answer per line from its stdout (`{"id":…, "answer":true|false}`).
//! Requests go out in dataset order, in batches; answers within a batch
//! may arrive in any order. Malformed lines, unknown or duplicate ids,
//! early exits and stalls all surface as typed errors that carry the
//! answers collected so far plus a resumption cursor.

use std::collections::{BTreeMap, HashSet};
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;
use std::process::{Child, Command, Stdio};
use std::sync::mpsc;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::Error;

use super::InstanceRecord;

/// Default per-batch answer deadline.
pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(60);

/// Requests sent before waiting for the batch's answers.
pub const DEFAULT_BATCH_SIZE: usize = 256;

/// Longest response line accepted; anything longer is a protocol error.
/// Keeps a subject that never prints a newline from exhausting memory.
const MAX_LINE_BYTES: u64 = 64 * 1024;

/// Reader-to-main channel depth. Bounded so a subject that floods its
/// stdout blocks on pipe backpressure instead of filling memory.
const CHANNEL_DEPTH: usize = 1024;

/// An external answerer: a shell command speaking the line protocol.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExternalSubject {
    pub command: String,
    #[serde(default = "default_timeout")]
    pub timeout: Duration,
    #[serde(default = "default_batch_size")]
    pub batch_size: usize,
}

fn default_timeout() -> Duration {
    DEFAULT_TIMEOUT
}

fn default_batch_size() -> usize {
    DEFAULT_BATCH_SIZE
}

impl ExternalSubject {
    pub fn new(command: impl Into<String>) -> Self {
        ExternalSubject {
            command: command.into(),
            timeout: DEFAULT_TIMEOUT,
            batch_size: DEFAULT_BATCH_SIZE,
        }
    }
}

/// A failed external run: the typed error plus everything answered before
/// it, and the index of the first record without an answer — rerunning
/// from `records[cursor..]` resumes the run.
#[derive(Debug)]
pub struct ExternalFailure {
    pub error: Error,
    pub answered: BTreeMap<String, bool>,
    pub cursor: usize,
}

impl From<ExternalFailure> for Error {
    fn from(failure: ExternalFailure) -> Error {
        failure.error
    }
}

#[derive(Serialize)]
struct RequestLine<'a> {
    id: &'a str,
    image: &'a str,
    caption: &'a str,
}

#[derive(Deserialize)]
struct ResponseLine {
    id: String,
    answer: bool,
}

/// Runs an external subject over `records`, resolving image paths against
/// `data_dir`. Returns one answer per record or an [`ExternalFailure`]
/// with the partial results.
pub fn run_external(
    subject: &ExternalSubject,
    data_dir: &Path,
    records: &[InstanceRecord],
) -> Result<BTreeMap<String, bool>, ExternalFailure> {
    let batch_size = subject.batch_size.max(1);
    let mut child = Command::new("sh")
        .arg("-c")
        .arg(&subject.command)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()
        .map_err(|err| ExternalFailure {
            error: Error::Io(err),
            answered: BTreeMap::new(),
            cursor: 0,
        })?;
    let mut stdin = child.stdin.take().expect("piped stdin");
    let stdout = child.stdout.take().expect("piped stdout");

    let (sender, receiver) = mpsc::sync_channel::<std::io::Result<String>>(CHANNEL_DEPTH);
    let reader = std::thread::spawn(move || {
        let mut stdout = BufReader::new(stdout);
        loop {
            let mut line = String::new();
            let message = match stdout.by_ref().take(MAX_LINE_BYTES).read_line(&mut line) {
                Ok(0) => break,
                Ok(_) if line.len() as u64 >= MAX_LINE_BYTES && !line.ends_with('\n') => {
                    Err(std::io::Error::new(
                        std::io::ErrorKind::InvalidData,
                        format!("response line exceeds {MAX_LINE_BYTES} bytes"),
                    ))
                }
                Ok(_) => Ok(line),
                Err(err) => Err(err),
            };
            let failed = message.is_err();
            if sender.send(message).is_err() || failed {
                break;
            }
        }
    });

    let mut answered: BTreeMap<String, bool> = BTreeMap::new();
    let mut outcome: Result<(), Error> = Ok(());

    'batches: for batch in records.chunks(batch_size) {
        let mut pending: HashSet<&str> = HashSet::with_capacity(batch.len());
        for record in batch {
            let image = data_dir.join(&record.image_path);
            let request = RequestLine {
                id: &record.id,
                image: &image.to_string_lossy(),
                caption: &record.caption_text,
            };
            let mut line = match serde_json::to_string(&request) {
                Ok(line) => line,
                Err(err) => {
                    outcome = Err(Error::Json(err));
                    break 'batches;
                }
            };
            line.push('\n');
            if stdin.write_all(line.as_bytes()).is_err() {
                outcome = Err(Error::Protocol("subject closed its input stream".into()));
                break 'batches;
            }
            pending.insert(&record.id);
        }
        if stdin.flush().is_err() {
            outcome = Err(Error::Protocol("subject closed its input stream".into()));
            break 'batches;
        }

        let deadline = Instant::now() + subject.timeout;
        while !pending.is_empty() {
            let remaining = deadline.saturating_duration_since(Instant::now());
            if remaining.is_zero() {
                outcome = Err(Error::Timeout(subject.timeout));
                break 'batches;
            }
            let line = match receiver.recv_timeout(remaining) {
                Ok(Ok(line)) => line,
                Ok(Err(err)) => {
                    outcome = Err(if err.kind() == std::io::ErrorKind::InvalidData {
                        Error::Protocol(err.to_string())
                    } else {
                        Error::Io(err)
                    });
                    break 'batches;
                }
                Err(mpsc::RecvTimeoutError::Timeout) => {
                    outcome = Err(Error::Timeout(subject.timeout));
                    break 'batches;
                }
                Err(mpsc::RecvTimeoutError::Disconnected) => {
                    outcome = Err(Error::Protocol(format!(
                        "subject exited with {} request(s) unanswered",
                        pending.len()
                    )));
                    break 'batches;
                }
            };
            if line.trim().is_empty() {
                continue;
            }
            let response: ResponseLine = match serde_json::from_str(&line) {
                Ok(response) => response,
                Err(err) => {
                    outcome = Err(Error::Protocol(format!(
                        "malformed response line {line:?}: {err}"
                    )));
                    break 'batches;
                }
            };
            if !pending.remove(response.id.as_str()) {
                let reason = if answered.contains_key(&response.id) {
                    "duplicate answer for id"
                } else {
                    "answer for unknown id"
                };
                outcome = Err(Error::Protocol(format!("{reason} {:?}", response.id)));
                break 'batches;
            }
            answered.insert(response.id, response.answer);
        }
    }

    drop(stdin);
    // Unblock a reader parked on a full channel before waiting on the child:
    // once the receiver is gone the reader exits, the pipe fills, and the
    // subject stalls there until `shutdown` reaps it.
    drop(receiver);
    shutdown(&mut child);
    let _ = reader.join();

    match outcome {
        Ok(()) => Ok(answered),
        Err(error) => {
            let cursor = records
                .iter()
                .position(|r| !answered.contains_key(&r.id))
                .unwrap_or(records.len());
            Err(ExternalFailure {
                error,
                answered,
                cursor,
            })
        }
    }
}

/// Gives the subject a moment to exit on stdin EOF, then kills it.
fn shutdown(child: &mut Child) {
    for _ in 0..40 {
        match child.try_wait() {
            Ok(Some(_)) => return,
            Ok(None) => std::thread::sleep(Duration::from_millis(25)),
            Err(_) => break,
        }
    }
    let _ = child.kill();
    let _ = child.wait();
}
