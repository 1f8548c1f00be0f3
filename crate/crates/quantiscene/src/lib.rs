//! Controlled abstract scenes, quantifier captions, exact truth oracles,
//! simulated subjects, and Weber-fraction psychometrics.
//!
//! The crate generates scenes of colored shapes on a unit canvas together
//! with English quantifier captions ("More than half the shapes are red
//! shapes."), evaluates caption truth exactly in integer arithmetic, and
//! simulates subjects that answer those captions: an exact counter, an
//! approximate-number-system (ANS) agent with ratio-dependent noise, and a
//! spatial pairing agent. A psychometric harness aggregates answers into
//! accuracy grids, fits Weber fractions to accuracy-vs-ratio curves, and
//! reports discrimination thresholds.
//!
//! The best way to get oriented is the `examples/` directory; each example
//! is a small runnable program exercising one capability:
//!
//! * `scene_tour` - build a scene by hand, count predicates, serialize it
//! * `eval_modes` - generate evaluation scenes in the three positioning
//!   modes (random, partitioned, paired) and render them to PNG
//! * `caption_grammar` - realize and parse captions, see parse diagnostics
//! * `most_strategies` - compare the cardinality and pairing verification
//!   strategies for "most"
//! * `ans_curve` - Monte-Carlo ANS accuracy against the closed form
//! * `weber_fit` - fit Weber fractions to the bundled reference curves
//! * `train_dataset` - write a small training dataset with captions
//! * `external_subject` - drive an external answerer over the wire protocol
//! * `full_pipeline` - closed loop: generate, answer, aggregate, fit, report
//!
//! Run one with `cargo run --release --example eval_modes`.
//!
//! The same functionality is scriptable through the thin `quantiscene`
//! binary (`gen-train`, `gen-eval`, `simulate`, `aggregate`, `fit`,
//! `report`, `verify`); the binary only parses arguments and dispatches to
//! this library.

pub mod caption;
pub mod error;
pub mod generator;
pub mod harness;
pub mod math;
pub mod psychometrics;
pub mod raster;
pub mod rng;
pub mod scene;
pub mod subjects;

pub use caption::{evaluate, parse, realize, CaptionAst, Modifier, Quantity};
pub use generator::{EvalConfig, PositionMode, RatioSpec, TrainConfig};
pub use error::Error;
pub use harness::{
    generate_eval_dataset, generate_train_dataset, pipeline_report, read_dataset, run_external,
    verify_dataset, DatasetManifest, EvalDatasetConfig, ExternalSubject, InstanceRecord,
    SubjectRunner, TrainDatasetConfig,
};
pub use psychometrics::{
    aggregate, fit_weber, threshold_ratio, GridReport, PsychometricPoint, TrialOutcome, WeberFit,
};
pub use scene::{Color, ObjectSpec, Predicate, Scene, ShapeKind};
pub use subjects::{AnsParams, SubjectKind};

