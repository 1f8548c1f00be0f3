//! Crate-wide error type.

use thiserror::Error;

/// Position-annotated caption parse failure.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at byte {position}: {message}")]
pub struct ParseError {
    /// Byte offset into the input where the offending token starts.
    pub position: usize,
    pub message: String,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    /// Rejection sampling could not place all objects collision-free.
    #[error("placement failed: {0}")]
    PlacementFailure(String),

    /// Area control would push object sizes outside the hard size bounds.
    #[error("infeasible area control: {0}")]
    InfeasibleAreaControl(String),

    /// A subject model was asked a caption shape it cannot answer.
    #[error("unsupported caption for subject {subject}: {caption}")]
    UnsupportedCaption { subject: String, caption: String },

    /// Psychometric fit input was unusable (too few points, or all
    /// accuracies saturated at ceiling or chance).
    #[error("degenerate psychometric data: {0}")]
    DegenerateData(String),

    /// A subject answer did not join to a record with ground truth.
    #[error("missing ground truth for answer id {0}")]
    MissingGroundTruth(String),

    /// The external subject broke the wire protocol.
    #[error("subject protocol error: {0}")]
    Protocol(String),

    /// The external subject did not answer a batch within the deadline.
    #[error("subject timed out after {0:?}")]
    Timeout(std::time::Duration),

    /// A dataset file's checksum did not match its manifest entry.
    #[error("checksum mismatch for {path}: manifest {expected}, actual {actual}")]
    ChecksumMismatch {
        path: String,
        expected: String,
        actual: String,
    },

    /// A pipeline stage failed; wraps the underlying error with the stage
    /// name for context.
    #[error("{stage}: {source}")]
    Pipeline {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid record {id}: {message}")]
    InvalidRecord { id: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error("image error: {0}")]
    Image(#[from] image::ImageError),
}

pub type Result<T> = std::result::Result<T, Error>;
