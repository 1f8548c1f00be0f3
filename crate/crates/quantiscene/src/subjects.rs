//! Simulated answerers: an exact counter, an approximate-number-system
//! (ANS) comparator with Weber-law noise, and a spatial-pairing strategy
//! with a reach limit and attention drops.
//!
//! Subjects are immutable; every prediction takes an explicit seed, so
//! parallel evaluation stays reproducible and order-independent.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::caption::{evaluate, CaptionAst, Modifier, Quantity};
use crate::error::{Error, Result};
use crate::math::normal_cdf;
use crate::rng;
use crate::scene::{Predicate, Scene};

/// Weber-law noise parameters for the ANS subject.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnsParams {
    /// Weber fraction `w`; the internal scalar-variability coefficient is
    /// `w - 1` (standard deviation per unit count).
    pub weber_w: f64,
}

impl AnsParams {
    pub fn new(weber_w: f64) -> Result<Self> {
        if !(weber_w.is_finite() && weber_w > 1.0) {
            return Err(Error::InvalidConfig(format!(
                "Weber fraction must be a finite number above 1, got {weber_w}"
            )));
        }
        Ok(AnsParams { weber_w })
    }

    /// Scalar-variability coefficient `w - 1`.
    pub fn coefficient(&self) -> f64 {
        self.weber_w - 1.0
    }
}

/// Reach and attention parameters for the spatial-pairing subject.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairingParams {
    /// Maximum center distance at which two objects can be paired off.
    pub pair_radius: f64,
    /// Probability that an unpaired object is overlooked when the
    /// leftovers are tallied.
    pub drop_prob: f64,
}

impl PairingParams {
    pub const DEFAULT_DROP_PROB: f64 = 0.1;

    pub fn new(pair_radius: f64, drop_prob: f64) -> Result<Self> {
        if pair_radius.is_nan() || pair_radius < 0.0 {
            return Err(Error::InvalidConfig(format!(
                "pair radius must be nonnegative, got {pair_radius}"
            )));
        }
        if !(0.0..=1.0).contains(&drop_prob) {
            return Err(Error::InvalidConfig(format!(
                "drop probability must lie in [0, 1], got {drop_prob}"
            )));
        }
        Ok(PairingParams {
            pair_radius,
            drop_prob,
        })
    }
}

/// A simulated subject strategy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SubjectKind {
    /// Counts exactly; answers any caption with its ground truth.
    ExactCounter,
    /// Compares noisy count estimates drawn with Weber-law spread.
    Ans(AnsParams),
    /// Pairs witnesses against counterexamples within a reach radius and
    /// judges the leftovers, occasionally overlooking one.
    SpatialPairing(PairingParams),
}

impl SubjectKind {
    /// Answers a caption against a scene. The exact counter evaluates any
    /// caption; the ANS and pairing subjects only understand "more/less
    /// than half" comparisons and return `UnsupportedCaption` otherwise.
    pub fn answer(&self, scene: &Scene, caption: &CaptionAst, seed: u64) -> Result<bool> {
        match self {
            SubjectKind::ExactCounter => Ok(evaluate(caption, scene)),
            SubjectKind::Ans(params) => {
                let positive = half_comparison_polarity(self, caption)?;
                let witnesses = scene.count_joint(&caption.restrictor, &caption.scope);
                let counterexamples =
                    scene.count_joint(&caption.restrictor, &caption.scope.negate());
                let most = ans_predict((witnesses, counterexamples), params, seed)
                    == Comparison::FirstLarger;
                Ok(most == positive)
            }
            SubjectKind::SpatialPairing(params) => {
                let positive = half_comparison_polarity(self, caption)?;
                let most = spatial_pairing_predict(
                    scene,
                    &caption.restrictor,
                    &caption.scope,
                    params,
                    seed,
                );
                Ok(most == positive)
            }
        }
    }
}

/// Returns true for "more than half", false for "less than half", and an
/// error for anything else.
fn half_comparison_polarity(subject: &SubjectKind, caption: &CaptionAst) -> Result<bool> {
    if caption.quantity == Quantity::Fraction(1, 2) {
        match caption.modifier {
            Modifier::MoreThan => return Ok(true),
            Modifier::LessThan => return Ok(false),
            _ => {}
        }
    }
    Err(Error::UnsupportedCaption {
        subject: subject.to_string(),
        caption: caption.surface(),
    })
}

impl fmt::Display for SubjectKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubjectKind::ExactCounter => write!(f, "exact"),
            SubjectKind::Ans(p) => write!(f, "ans:{}", p.weber_w),
            SubjectKind::SpatialPairing(p) => {
                write!(f, "pairing:{}:{}", p.pair_radius, p.drop_prob)
            }
        }
    }
}

impl FromStr for SubjectKind {
    type Err = Error;

    /// Parses `exact`, `ans:<weber_w>`, `pairing:<radius>` or
    /// `pairing:<radius>:<drop_prob>`.
    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.split(':');
        let kind = parts.next().unwrap_or_default();
        let rest: Vec<&str> = parts.collect();
        let bad = |message: String| Err(Error::InvalidConfig(message));
        let number = |field: &str, text: &str| -> Result<f64> {
            text.parse::<f64>().map_err(|_| {
                Error::InvalidConfig(format!("subject spec {s:?}: bad {field} {text:?}"))
            })
        };
        match (kind, rest.as_slice()) {
            ("exact", []) => Ok(SubjectKind::ExactCounter),
            ("ans", [w]) => Ok(SubjectKind::Ans(AnsParams::new(number("Weber fraction", w)?)?)),
            ("pairing", [radius]) => Ok(SubjectKind::SpatialPairing(PairingParams::new(
                number("radius", radius)?,
                PairingParams::DEFAULT_DROP_PROB,
            )?)),
            ("pairing", [radius, drop]) => Ok(SubjectKind::SpatialPairing(PairingParams::new(
                number("radius", radius)?,
                number("drop probability", drop)?,
            )?)),
            _ => bad(format!(
                "subject spec {s:?}: want exact, ans:<w>, or pairing:<radius>[:<drop>]"
            )),
        }
    }
}

/// Outcome of a two-quantity comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparison {
    FirstLarger,
    SecondLarger,
}

/// Compares two counts through Weber-law noise: each count `c` is read as
/// a draw from `Normal(c, (w - 1) * c)` and the larger estimate wins
/// (exact ties fall to a fair coin). Deterministic given the seed.
pub fn ans_predict(counts: (usize, usize), params: &AnsParams, seed: u64) -> Comparison {
    let mut rng = rng::stream(seed);
    let first = noisy_count(counts.0, params, &mut rng);
    let second = noisy_count(counts.1, params, &mut rng);
    if first > second {
        Comparison::FirstLarger
    } else if second > first {
        Comparison::SecondLarger
    } else if rng.gen_bool(0.5) {
        Comparison::FirstLarger
    } else {
        Comparison::SecondLarger
    }
}

fn noisy_count(count: usize, params: &AnsParams, rng: &mut ChaCha8Rng) -> f64 {
    let mean = count as f64;
    let sd = params.coefficient() * mean;
    if sd == 0.0 {
        return mean;
    }
    Normal::new(mean, sd)
        .expect("finite mean and positive spread")
        .sample(rng)
}

/// Closed-form accuracy of the ANS comparator on two counts at ratio
/// `r >= 1`: the difference of the two Gaussian estimates is itself
/// Gaussian, giving `Phi((r - 1) / ((w - 1) * sqrt(1 + r^2)))`. The count
/// scale cancels, so only the ratio matters.
pub fn ans_accuracy(r: f64, w: f64) -> f64 {
    assert!(r >= 1.0, "ratio {r} below 1; pass larger/smaller");
    assert!(w > 1.0, "Weber fraction {w} must exceed 1");
    normal_cdf((r - 1.0) / ((w - 1.0) * (1.0 + r * r).sqrt()))
}

/// Always picks the truly larger side; ties go to the second.
pub fn exact_predict(counts: (usize, usize)) -> Comparison {
    if counts.0 > counts.1 {
        Comparison::FirstLarger
    } else {
        Comparison::SecondLarger
    }
}

/// Judges "most A are B" by pairing: walks the witnesses (`A and B`) in
/// scene order, pairing each with the nearest unmatched counterexample
/// (`A and not B`) within `pair_radius`. Whatever stays unpaired on
/// either side is tallied as evidence, each object overlooked with the
/// configured drop probability, and the sign of the tally answers
/// (zero falls to a fair coin).
///
/// With an unlimited radius and a zero drop probability every mutual
/// pair forms, so the answer collapses to the exact pairing oracle
/// whenever the two sides differ in size.
pub fn spatial_pairing_predict(
    scene: &Scene,
    a: &Predicate,
    b: &Predicate,
    params: &PairingParams,
    seed: u64,
) -> bool {
    let mut rng = rng::stream(seed);
    let not_b = b.negate();
    let mut witnesses: Vec<(f64, f64)> = Vec::new();
    let mut counterexamples: Vec<(f64, f64)> = Vec::new();
    for obj in &scene.objects {
        if a.matches(obj) && b.matches(obj) {
            witnesses.push(obj.center);
        } else if a.matches(obj) && not_b.matches(obj) {
            counterexamples.push(obj.center);
        }
    }

    let mut alive = vec![true; counterexamples.len()];
    let mut unpaired_witnesses = 0usize;
    for w in &witnesses {
        let mut best: Option<(f64, usize)> = None;
        for (j, c) in counterexamples.iter().enumerate() {
            if !alive[j] {
                continue;
            }
            let d = (w.0 - c.0).hypot(w.1 - c.1);
            if d <= params.pair_radius && best.is_none_or(|(bd, _)| d < bd) {
                best = Some((d, j));
            }
        }
        match best {
            Some((_, j)) => alive[j] = false,
            None => unpaired_witnesses += 1,
        }
    }

    let mut evidence = 0i64;
    for _ in 0..unpaired_witnesses {
        if !rng.gen_bool(params.drop_prob) {
            evidence += 1;
        }
    }
    for left in alive {
        if left && !rng.gen_bool(params.drop_prob) {
            evidence -= 1;
        }
    }
    match evidence.cmp(&0) {
        std::cmp::Ordering::Greater => true,
        std::cmp::Ordering::Less => false,
        std::cmp::Ordering::Equal => rng.gen_bool(0.5),
    }
}
