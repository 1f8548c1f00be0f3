//! Caption samplers: the training captioners and the evaluation captioner.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::EvalSceneMeta;
use crate::caption::{self, is_excluded_pair, CaptionAst, Modifier, Quantity};
use crate::error::Error;
use crate::rng;
use crate::scene::{Color, Predicate, Scene, ShapeKind};

/// Training captioner: the full quantifier grammar, or the subset
/// restricted to "more/less than half" comparisons.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CaptionerKind {
    QFull,
    QHalf,
}

impl CaptionerKind {
    pub fn label(self) -> &'static str {
        match self {
            CaptionerKind::QFull => "q_full",
            CaptionerKind::QHalf => "q_half",
        }
    }
}

impl fmt::Display for CaptionerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for CaptionerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "q_full" => Ok(CaptionerKind::QFull),
            "q_half" => Ok(CaptionerKind::QHalf),
            other => Err(Error::InvalidConfig(format!(
                "captioner {other:?}: want q_full or q_half"
            ))),
        }
    }
}

/// Redraws before giving up on hitting the sampled truth target; the
/// returned agreement is always the caption's actual truth value.
const CAPTION_RESAMPLES: usize = 100;

/// Probability of instantiating a predicate value from the attributes
/// actually present, rather than uniformly (which yields absent values and
/// hence trivially countable captions).
const PRESENT_VALUE_BIAS: f64 = 0.75;

/// Samples a caption for a training scene, balancing true and false
/// captions by redrawing until a coin-flipped target truth is hit.
/// Deterministic in `(scene, captioner, seed)`.
pub fn sample_training_caption(
    scene: &Scene,
    captioner: CaptionerKind,
    seed: u64,
) -> (CaptionAst, bool) {
    assert!(!scene.objects.is_empty(), "captions need a nonempty scene");
    let mut rng = rng::stream(seed);
    let target = rng.gen_bool(0.5);
    let mut ast = draw_caption(scene, captioner, &mut rng);
    let mut truth = caption::evaluate(&ast, scene);
    for _ in 1..CAPTION_RESAMPLES {
        if truth == target {
            break;
        }
        ast = draw_caption(scene, captioner, &mut rng);
        truth = caption::evaluate(&ast, scene);
    }
    (ast, truth)
}

fn draw_caption(scene: &Scene, captioner: CaptionerKind, rng: &mut ChaCha8Rng) -> CaptionAst {
    let (modifier, quantity) = match captioner {
        CaptionerKind::QHalf => {
            let modifier = if rng.gen_bool(0.5) {
                Modifier::MoreThan
            } else {
                Modifier::LessThan
            };
            (modifier, Quantity::Fraction(1, 2))
        }
        CaptionerKind::QFull => loop {
            let modifier = Modifier::ALL[rng.gen_range(0..Modifier::ALL.len())];
            let quantities = Quantity::all();
            let quantity = quantities[rng.gen_range(0..quantities.len())];
            if !is_excluded_pair(modifier, quantity) {
                break (modifier, quantity);
            }
        },
    };

    // Restrictor: half universal, the rest split between the attributes.
    let universal = Predicate::universal();
    let restrictor = match rng.gen_range(0..4) {
        0 | 1 => universal,
        2 => Predicate::color(biased_color(scene, &universal, rng)),
        _ => Predicate::shape(biased_shape(scene, &universal, rng)),
    };
    // Scope constrains the attribute the restrictor leaves free.
    let scope_is_color = if restrictor.is_universal() {
        rng.gen_bool(0.5)
    } else {
        restrictor.color.is_none()
    };
    let scope = if scope_is_color {
        Predicate::color(biased_color(scene, &restrictor, rng))
    } else {
        Predicate::shape(biased_shape(scene, &restrictor, rng))
    };

    CaptionAst {
        modifier,
        quantity,
        restrictor,
        scope,
    }
}

fn biased_color(scene: &Scene, filter: &Predicate, rng: &mut ChaCha8Rng) -> Color {
    let pool: Vec<Color> = scene
        .objects
        .iter()
        .filter(|o| filter.matches(o))
        .map(|o| o.color)
        .collect();
    if !pool.is_empty() && rng.gen_bool(PRESENT_VALUE_BIAS) {
        pool[rng.gen_range(0..pool.len())]
    } else {
        Color::ALL[rng.gen_range(0..Color::ALL.len())]
    }
}

fn biased_shape(scene: &Scene, filter: &Predicate, rng: &mut ChaCha8Rng) -> ShapeKind {
    let pool: Vec<ShapeKind> = scene
        .objects
        .iter()
        .filter(|o| filter.matches(o))
        .map(|o| o.shape)
        .collect();
    if !pool.is_empty() && rng.gen_bool(PRESENT_VALUE_BIAS) {
        pool[rng.gen_range(0..pool.len())]
    } else {
        ShapeKind::ALL[rng.gen_range(0..ShapeKind::ALL.len())]
    }
}

/// The evaluation caption for a generated scene: "More/less than half the
/// shapes are X" with the modifier and the contrasted group X drawn
/// uniformly. The agreement follows exactly from the group counts, because
/// the majority group always exceeds half. Deterministic in
/// `(meta, seed)`.
pub fn eval_caption_for(meta: &EvalSceneMeta, seed: u64) -> (CaptionAst, bool) {
    let mut rng = rng::stream(seed);
    let modifier = if rng.gen_bool(0.5) {
        Modifier::MoreThan
    } else {
        Modifier::LessThan
    };
    let scope_majority = rng.gen_bool(0.5);
    let scope = if scope_majority {
        meta.majority_predicate
    } else {
        meta.minority_predicate
    };
    let ast = CaptionAst {
        modifier,
        quantity: Quantity::Fraction(1, 2),
        restrictor: Predicate::universal(),
        scope,
    };
    let agreement = scope_majority == (modifier == Modifier::MoreThan);
    (ast, agreement)
}
