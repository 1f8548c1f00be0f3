//! Scene generators: random training worlds and controlled evaluation
//! scenes.
//!
//! Evaluation scenes contrast two object groups that differ in exactly one
//! value of a contrast attribute (shape or color) and share the other
//! attribute's value. Group counts follow a `multiplier·(small, large)`
//! ratio within the object budget. Three spatial arrangements are
//! supported:
//!
//! * `random` — positions sampled uniformly,
//! * `partitioned` — the groups lie strictly on opposite sides of a line
//!   through the canvas center at a sampled angle,
//! * `paired` — every minority object gets a majority partner placed next
//!   to it, within [`PAIR_DISTANCE_FACTOR`] times the sum of the two
//!   bounding radii; leftover majority objects are unconstrained.
//!
//! Sizes are drawn uniformly from a global linear range regardless of
//! group ("size-controlled", the default), or from per-group ranges scaled
//! so both groups cover the same expected image area ("area-controlled").
//!
//! All entry points are deterministic in `(config, seed)` and derive their
//! randomness from [`crate::rng::stream`], so datasets are reproducible
//! and instances generate in parallel.

mod captions;
mod checks;
mod placement;

pub use captions::{eval_caption_for, sample_training_caption, CaptionerKind};
pub use checks::{check_eval_scene, PAIR_DISTANCE_FACTOR};

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;
use crate::scene::{Color, CollisionPolicy, ObjectSpec, Predicate, Scene, ShapeKind};
use placement::{rect_region, side_region, Placer, Region, SCENE_RESTARTS, TRIES_PER_OBJECT};

// ---------------------------------------------------------------------------
// Ratios
// ---------------------------------------------------------------------------

/// The standard contrast ratio pool, `1:2` through `7:8`.
pub const DEFAULT_RATIO_POOL: [(u32, u32); 7] =
    [(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8)];

/// Harder ratios used by the threshold studies. Their base pairs exceed the
/// default object budget, which generation widens to `small + large`.
pub const EXTENDED_RATIO_POOL: [(u32, u32); 3] = [(8, 9), (9, 10), (10, 11)];

/// A resolved contrast ratio: `multiplier·small` minority objects versus
/// `multiplier·large` majority objects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatioSpec {
    pub small: u32,
    pub large: u32,
    pub multiplier: u32,
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl RatioSpec {
    pub fn new(small: u32, large: u32, multiplier: u32) -> Result<Self> {
        if small == 0 || multiplier == 0 {
            return Err(Error::InvalidConfig(format!(
                "ratio {small}:{large} x{multiplier}: parts must be positive"
            )));
        }
        if small >= large {
            return Err(Error::InvalidConfig(format!(
                "ratio {small}:{large}: the minority part must be smaller"
            )));
        }
        if gcd(small, large) != 1 {
            return Err(Error::InvalidConfig(format!(
                "ratio {small}:{large} is not reduced"
            )));
        }
        Ok(RatioSpec {
            small,
            large,
            multiplier,
        })
    }

    /// `(minority, majority)` object counts.
    pub fn counts(&self) -> (usize, usize) {
        (
            (self.multiplier * self.small) as usize,
            (self.multiplier * self.large) as usize,
        )
    }

    pub fn total(&self) -> usize {
        let (a, b) = self.counts();
        a + b
    }

    /// Majority-to-minority ratio as a real number.
    pub fn value(&self) -> f64 {
        f64::from(self.large) / f64::from(self.small)
    }

    pub fn label(&self) -> String {
        format!("{}:{}", self.small, self.large)
    }
}

/// Per-cell ratio setting: a fixed base pair, or the mixed-"all" setting
/// that draws the base pair uniformly from [`DEFAULT_RATIO_POOL`] for each
/// scene.
///
/// Orders with `Mixed` first, then fixed pairs by minority part, matching
/// the column order of the evaluation grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum RatioSetting {
    Mixed,
    Fixed { small: u32, large: u32 },
}

impl RatioSetting {
    pub fn fixed(small: u32, large: u32) -> Result<Self> {
        RatioSpec::new(small, large, 1)?;
        Ok(RatioSetting::Fixed { small, large })
    }
}

impl fmt::Display for RatioSetting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RatioSetting::Mixed => write!(f, "all"),
            RatioSetting::Fixed { small, large } => write!(f, "{small}:{large}"),
        }
    }
}

impl FromStr for RatioSetting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "all" {
            return Ok(RatioSetting::Mixed);
        }
        let invalid = || Error::InvalidConfig(format!("ratio setting {s:?}: want \"all\" or \"small:large\""));
        let (a, b) = s.split_once(':').ok_or_else(invalid)?;
        let small: u32 = a.trim().parse().map_err(|_| invalid())?;
        let large: u32 = b.trim().parse().map_err(|_| invalid())?;
        RatioSetting::fixed(small, large)
    }
}

impl From<RatioSetting> for String {
    fn from(r: RatioSetting) -> String {
        r.to_string()
    }
}

impl TryFrom<String> for RatioSetting {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

/// Spatial arrangement of an evaluation scene.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PositionMode {
    Random,
    Partitioned,
    Paired,
}

impl PositionMode {
    pub const ALL: [PositionMode; 3] = [
        PositionMode::Random,
        PositionMode::Partitioned,
        PositionMode::Paired,
    ];

    pub fn label(self) -> &'static str {
        match self {
            PositionMode::Random => "random",
            PositionMode::Partitioned => "partitioned",
            PositionMode::Paired => "paired",
        }
    }
}

impl fmt::Display for PositionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for PositionMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PositionMode::ALL
            .into_iter()
            .find(|m| m.label() == s)
            .ok_or_else(|| {
                Error::InvalidConfig(format!(
                    "position mode {s:?}: want random, partitioned or paired"
                ))
            })
    }
}

/// Which attribute separates the two evaluation groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ContrastAttribute {
    Shape,
    Color,
}

/// One evaluation cell: arrangement, area flag, ratio setting, and the
/// scene-construction knobs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EvalConfig {
    pub mode: PositionMode,
    pub area_controlled: bool,
    pub ratio: RatioSetting,
    /// Contrast attribute; `None` samples shape or color per scene.
    pub contrast_attribute: Option<ContrastAttribute>,
    /// Total object budget; widened to `small + large` for ratios whose
    /// base pair alone exceeds it.
    pub object_budget: usize,
    pub collision_policy: CollisionPolicy,
    /// Global linear size range before any area-control scaling.
    pub size_range: (f64, f64),
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            mode: PositionMode::Random,
            area_controlled: false,
            ratio: RatioSetting::Mixed,
            contrast_attribute: None,
            object_budget: 15,
            collision_policy: CollisionPolicy::NoneAllowed,
            size_range: DEFAULT_SIZE_RANGE,
        }
    }
}

/// Training world configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainConfig {
    pub max_objects: usize,
    pub captioner: CaptionerKind,
    pub collision_policy: CollisionPolicy,
    pub captions_per_image: usize,
    pub size_range: (f64, f64),
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            max_objects: 15,
            captioner: CaptionerKind::QFull,
            collision_policy: CollisionPolicy::NoneAllowed,
            captions_per_image: 5,
            size_range: DEFAULT_SIZE_RANGE,
        }
    }
}

// ---------------------------------------------------------------------------
// Sizes and area control
// ---------------------------------------------------------------------------

/// Default linear size range, as a fraction of the canvas side.
pub const DEFAULT_SIZE_RANGE: (f64, f64) = (0.1, 0.25);

/// Area control never pushes linear sizes outside these bounds.
pub const HARD_SIZE_BOUNDS: (f64, f64) = (0.06, 0.45);

/// Regular-pentagon height/width ratio, sin 72°.
const PENTAGON_ASPECT: f64 = 0.951_056_516_295_153_5;

/// Second-dimension factor range for the freely stretched shapes.
const ASPECT_RANGE: (f64, f64) = (0.5, 0.8);

/// Canonical `(width, height)` from a linear scale drawn uniformly in
/// `range`: rectangles and ellipses stretch by a random factor, the other
/// shapes keep their natural aspect.
fn sample_size(shape: ShapeKind, range: (f64, f64), rng: &mut ChaCha8Rng) -> (f64, f64) {
    let s = rng.gen_range(range.0..=range.1);
    match shape {
        ShapeKind::Square | ShapeKind::Triangle | ShapeKind::Cross | ShapeKind::Circle => (s, s),
        ShapeKind::Pentagon => (s, PENTAGON_ASPECT * s),
        ShapeKind::Semicircle => (s, 0.5 * s),
        ShapeKind::Rectangle | ShapeKind::Ellipse => {
            let d = rng.gen_range(ASPECT_RANGE.0..=ASPECT_RANGE.1);
            (s, d * s)
        }
    }
}

/// Expected analytic area per unit of squared linear scale: the shape's
/// area coefficient folded with the mean of its aspect policy.
fn effective_area_coefficient(shape: ShapeKind) -> f64 {
    let aspect = match shape {
        ShapeKind::Square | ShapeKind::Triangle | ShapeKind::Cross | ShapeKind::Circle => 1.0,
        ShapeKind::Pentagon => PENTAGON_ASPECT,
        ShapeKind::Semicircle => 0.5,
        ShapeKind::Rectangle | ShapeKind::Ellipse => (ASPECT_RANGE.0 + ASPECT_RANGE.1) / 2.0,
    };
    shape.unit_area_coefficient() * aspect
}

/// Size ranges making the two groups cover the same expected total area.
///
/// With linear scales drawn uniformly from `c·base`, a group's expected
/// total area is `n·k·c²·E[s²]` for count `n` and effective coefficient
/// `k`, so the balanced scales are `c_min = (k_maj·n_maj / (k_min·n_min))^¼`
/// with `c_min·c_maj = 1`. The multiplier cancels, leaving the base pair.
pub fn size_ranges_for_area_control(
    ratio: &RatioSpec,
    shapes: (ShapeKind, ShapeKind),
    base: (f64, f64),
) -> Result<((f64, f64), (f64, f64))> {
    let k_min = effective_area_coefficient(shapes.0);
    let k_maj = effective_area_coefficient(shapes.1);
    let c_min = (k_maj * f64::from(ratio.large) / (k_min * f64::from(ratio.small))).powf(0.25);
    let scale = |c: f64| (c * base.0, c * base.1);
    for (lo, hi) in [scale(c_min), scale(1.0 / c_min)] {
        if lo < HARD_SIZE_BOUNDS.0 || hi > HARD_SIZE_BOUNDS.1 {
            return Err(Error::InfeasibleAreaControl(format!(
                "area control for {} with shapes {:?} needs linear sizes in \
                 [{lo:.3}, {hi:.3}], outside the hard bounds [{}, {}]",
                ratio.label(),
                shapes,
                HARD_SIZE_BOUNDS.0,
                HARD_SIZE_BOUNDS.1,
            )));
        }
    }
    Ok((scale(c_min), scale(1.0 / c_min)))
}

// ---------------------------------------------------------------------------
// Evaluation scenes
// ---------------------------------------------------------------------------

/// Separating line through the canvas center with unit normal at `angle`;
/// the minority group lies on the positive side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PartitionLine {
    pub angle: f64,
}

impl PartitionLine {
    pub fn normal(&self) -> (f64, f64) {
        (self.angle.cos(), self.angle.sin())
    }

    /// Signed distance of a point from the line, positive on the minority
    /// side.
    pub fn signed_distance(&self, point: (f64, f64)) -> f64 {
        let (nx, ny) = self.normal();
        nx * (point.0 - 0.5) + ny * (point.1 - 0.5)
    }
}

/// Ground-truth description of a generated evaluation scene.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalSceneMeta {
    pub contrast: ContrastAttribute,
    pub minority_predicate: Predicate,
    pub majority_predicate: Predicate,
    /// `(minority, majority)` object counts.
    pub counts: (usize, usize),
    pub ratio: RatioSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partition: Option<PartitionLine>,
}

fn resolve_ratio(config: &EvalConfig, rng: &mut ChaCha8Rng) -> Result<RatioSpec> {
    let (small, large) = match config.ratio {
        RatioSetting::Fixed { small, large } => (small, large),
        RatioSetting::Mixed => DEFAULT_RATIO_POOL[rng.gen_range(0..DEFAULT_RATIO_POOL.len())],
    };
    let base = (small + large) as usize;
    let budget = config.object_budget.max(base);
    let multiplier = rng.gen_range(1..=(budget / base) as u32);
    RatioSpec::new(small, large, multiplier)
}

/// Two distinct uniform indices below `n`.
fn distinct_pair(n: usize, rng: &mut ChaCha8Rng) -> (usize, usize) {
    let a = rng.gen_range(0..n);
    let b = (a + rng.gen_range(1..n)) % n;
    (a, b)
}

struct GroupAttrs {
    shape: ShapeKind,
    color: Color,
}

/// Generates one evaluation scene. Deterministic in `(config, seed)`.
pub fn generate_eval_scene(config: &EvalConfig, seed: u64) -> Result<(Scene, EvalSceneMeta)> {
    validate_size_range(config.size_range)?;
    let mut rng = rng::stream(seed);
    let ratio = resolve_ratio(config, &mut rng)?;
    let (n_min, n_maj) = ratio.counts();

    let contrast = config.contrast_attribute.unwrap_or_else(|| {
        if rng.gen_bool(0.5) {
            ContrastAttribute::Shape
        } else {
            ContrastAttribute::Color
        }
    });
    let (minority, majority) = match contrast {
        ContrastAttribute::Shape => {
            let (a, b) = distinct_pair(ShapeKind::ALL.len(), &mut rng);
            let shared = Color::ALL[rng.gen_range(0..Color::ALL.len())];
            (
                GroupAttrs {
                    shape: ShapeKind::ALL[a],
                    color: shared,
                },
                GroupAttrs {
                    shape: ShapeKind::ALL[b],
                    color: shared,
                },
            )
        }
        ContrastAttribute::Color => {
            let (a, b) = distinct_pair(Color::ALL.len(), &mut rng);
            let shared = ShapeKind::ALL[rng.gen_range(0..ShapeKind::ALL.len())];
            (
                GroupAttrs {
                    shape: shared,
                    color: Color::ALL[a],
                },
                GroupAttrs {
                    shape: shared,
                    color: Color::ALL[b],
                },
            )
        }
    };
    let (minority_predicate, majority_predicate) = match contrast {
        ContrastAttribute::Shape => (
            Predicate::shape(minority.shape),
            Predicate::shape(majority.shape),
        ),
        ContrastAttribute::Color => (
            Predicate::color(minority.color),
            Predicate::color(majority.color),
        ),
    };

    let (range_min, range_maj) = if config.area_controlled {
        size_ranges_for_area_control(&ratio, (minority.shape, majority.shape), config.size_range)?
    } else {
        (config.size_range, config.size_range)
    };

    for _ in 0..SCENE_RESTARTS {
        // Prototype objects for this attempt: attributes are fixed, sizes
        // and rotations are re-drawn so a restart explores a fresh layout.
        let proto = |attrs: &GroupAttrs, range: (f64, f64), rng: &mut ChaCha8Rng| ObjectSpec {
            shape: attrs.shape,
            color: attrs.color,
            center: (0.5, 0.5),
            rotation: rng.gen_range(0.0..std::f64::consts::TAU),
            size: sample_size(attrs.shape, range, rng),
        };
        let minority_protos: Vec<_> = (0..n_min)
            .map(|_| proto(&minority, range_min, &mut rng))
            .collect();
        let majority_protos: Vec<_> = (0..n_maj)
            .map(|_| proto(&majority, range_maj, &mut rng))
            .collect();

        let mut placer = Placer::new(config.collision_policy);
        let partition = match config.mode {
            PositionMode::Random => {
                if !place_random(
                    &mut placer,
                    minority_protos.into_iter().chain(majority_protos),
                    rect_region,
                    &mut rng,
                ) {
                    continue;
                }
                None
            }
            PositionMode::Partitioned => {
                let line = PartitionLine {
                    angle: rng.gen_range(0.0..std::f64::consts::TAU),
                };
                let min_ok = place_random(
                    &mut placer,
                    minority_protos,
                    |o| side_region(o, &line, 1.0),
                    &mut rng,
                );
                if !min_ok {
                    continue;
                }
                let maj_ok = place_random(
                    &mut placer,
                    majority_protos,
                    |o| side_region(o, &line, -1.0),
                    &mut rng,
                );
                if !maj_ok {
                    continue;
                }
                Some(line)
            }
            PositionMode::Paired => {
                if !place_paired(&mut placer, minority_protos, majority_protos, &mut rng) {
                    continue;
                }
                None
            }
        };

        let mut objects = placer.into_objects();
        objects.shuffle(&mut rng);
        let mut scene = Scene::new(objects);
        scene.collision_policy = config.collision_policy;
        let meta = EvalSceneMeta {
            contrast,
            minority_predicate,
            majority_predicate,
            counts: (n_min, n_maj),
            ratio,
            partition,
        };
        return Ok((scene, meta));
    }

    Err(Error::PlacementFailure(format!(
        "no policy-conforming layout for {} objects ({} mode) in {} restarts",
        ratio.total(),
        config.mode,
        SCENE_RESTARTS,
    )))
}

/// Remixed seeds tried by the `*_reseeded` generators before giving up.
pub const RESEED_ATTEMPTS: u64 = 32;

/// Like [`generate_eval_scene`], but an unlucky draw that exhausts the
/// placement budget is redrawn under a remixed seed instead of failing.
///
/// At the default sizes a full scene occasionally lands dense enough that
/// rejection sampling cannot lay it out (order 1e-3 per seed at a budget
/// of 15), which would abort dataset builds that need one scene per index.
/// The remix (`mix(seed, "rescue", attempt)`) is deterministic, so the
/// output is still a pure function of `(config, seed)`; the seed that
/// produced the scene is returned so the record stays re-derivable.
/// Infeasible configs still surface `PlacementFailure` once every attempt
/// has exhausted the placement budget.
pub fn generate_eval_scene_reseeded(
    config: &EvalConfig,
    seed: u64,
) -> Result<(Scene, EvalSceneMeta, u64)> {
    let mut last = None;
    for attempt in 0..RESEED_ATTEMPTS {
        let attempt_seed = if attempt == 0 {
            seed
        } else {
            rng::mix_seed(seed, "rescue", attempt)
        };
        match generate_eval_scene(config, attempt_seed) {
            Ok((scene, meta)) => return Ok((scene, meta, attempt_seed)),
            Err(err @ Error::PlacementFailure(_)) => last = Some(err),
            Err(err) => return Err(err),
        }
    }
    Err(last.expect("at least one reseed attempt"))
}

fn validate_size_range(range: (f64, f64)) -> Result<()> {
    if !(range.0 > 0.0 && range.0 <= range.1 && range.1 < 1.0) {
        return Err(Error::InvalidConfig(format!(
            "size range [{}, {}] is not an increasing range inside (0, 1)",
            range.0, range.1
        )));
    }
    Ok(())
}

/// Places prototypes largest-first, sampling centers uniformly from each
/// object's feasible region. Returns false when an object exhausts its
/// tries or has no feasible region at all.
fn place_random(
    placer: &mut Placer,
    protos: impl IntoIterator<Item = ObjectSpec>,
    region_for: impl Fn(&ObjectSpec) -> Option<Region>,
    rng: &mut ChaCha8Rng,
) -> bool {
    let mut protos: Vec<_> = protos.into_iter().collect();
    protos.sort_by(|a, b| b.bounding_radius().total_cmp(&a.bounding_radius()));
    for proto in protos {
        if !place_one(placer, proto, &region_for, rng) {
            return false;
        }
    }
    true
}

fn place_one(
    placer: &mut Placer,
    mut proto: ObjectSpec,
    region_for: impl Fn(&ObjectSpec) -> Option<Region>,
    rng: &mut ChaCha8Rng,
) -> bool {
    let Some(region) = region_for(&proto) else {
        return false;
    };
    for _ in 0..TRIES_PER_OBJECT {
        proto.center = region.sample(rng);
        if placer.try_place(proto) {
            return true;
        }
    }
    false
}

/// Fraction of [`PAIR_DISTANCE_FACTOR`] used when placing a partner, so
/// generated pairs sit strictly within the classifying distance and the
/// two bounding disks never overlap.
const PAIR_PLACEMENT_RANGE: (f64, f64) = (1.05, 1.45);

fn place_paired(
    placer: &mut Placer,
    minority: Vec<ObjectSpec>,
    majority: Vec<ObjectSpec>,
    rng: &mut ChaCha8Rng,
) -> bool {
    let mut minority = minority;
    let mut majority = majority;
    minority.sort_by(|a, b| b.bounding_radius().total_cmp(&a.bounding_radius()));
    majority.sort_by(|a, b| b.bounding_radius().total_cmp(&a.bounding_radius()));
    let leftover = majority.split_off(minority.len());

    for (anchor, partner) in minority.into_iter().zip(majority) {
        if !place_pair(placer, anchor, partner, rng) {
            return false;
        }
    }
    for proto in leftover {
        if !place_one(placer, proto, rect_region, rng) {
            return false;
        }
    }
    true
}

fn place_pair(
    placer: &mut Placer,
    mut anchor: ObjectSpec,
    mut partner: ObjectSpec,
    rng: &mut ChaCha8Rng,
) -> bool {
    let gap = anchor.bounding_radius() + partner.bounding_radius();
    let (ex, ey) = partner.canvas_extents();
    let Some(anchor_region) = rect_region(&anchor) else {
        return false;
    };
    for _ in 0..TRIES_PER_OBJECT {
        let center = anchor_region.sample(rng);
        anchor.center = center;
        if !placer.try_place(anchor) {
            continue;
        }
        for _ in 0..TRIES_PER_OBJECT {
            let angle = rng.gen_range(0.0..std::f64::consts::TAU);
            let d = gap * rng.gen_range(PAIR_PLACEMENT_RANGE.0..=PAIR_PLACEMENT_RANGE.1);
            let c = (center.0 + d * angle.cos(), center.1 + d * angle.sin());
            if c.0 < ex || c.0 > 1.0 - ex || c.1 < ey || c.1 > 1.0 - ey {
                continue;
            }
            partner.center = c;
            if placer.try_place(partner) {
                return true;
            }
        }
        // No partner position worked here; release the anchor and retry.
        placer.pop();
    }
    false
}

// ---------------------------------------------------------------------------
// Training scenes
// ---------------------------------------------------------------------------

/// Generates one training scene: 2..=`max_objects` objects with i.i.d.
/// uniform attributes at random positions. Deterministic in
/// `(config, seed)`.
pub fn generate_training_scene(config: &TrainConfig, seed: u64) -> Result<Scene> {
    if config.max_objects < 2 {
        return Err(Error::InvalidConfig(
            "training scenes need max_objects >= 2".to_string(),
        ));
    }
    validate_size_range(config.size_range)?;
    let mut rng = rng::stream(seed);
    let n = rng.gen_range(2..=config.max_objects);

    for _ in 0..SCENE_RESTARTS {
        let protos: Vec<_> = (0..n)
            .map(|_| {
                let shape = ShapeKind::ALL[rng.gen_range(0..ShapeKind::ALL.len())];
                ObjectSpec {
                    shape,
                    color: Color::ALL[rng.gen_range(0..Color::ALL.len())],
                    center: (0.5, 0.5),
                    rotation: rng.gen_range(0.0..std::f64::consts::TAU),
                    size: sample_size(shape, config.size_range, &mut rng),
                }
            })
            .collect();
        let mut placer = Placer::new(config.collision_policy);
        if !place_random(&mut placer, protos, rect_region, &mut rng) {
            continue;
        }
        let mut objects = placer.into_objects();
        objects.shuffle(&mut rng);
        let mut scene = Scene::new(objects);
        scene.collision_policy = config.collision_policy;
        return Ok(scene);
    }

    Err(Error::PlacementFailure(format!(
        "no policy-conforming layout for {n} training objects in {SCENE_RESTARTS} restarts"
    )))
}

/// [`generate_training_scene`] with the same deterministic reseed policy
/// as [`generate_eval_scene_reseeded`]; returns the seed that succeeded.
pub fn generate_training_scene_reseeded(
    config: &TrainConfig,
    seed: u64,
) -> Result<(Scene, u64)> {
    let mut last = None;
    for attempt in 0..RESEED_ATTEMPTS {
        let attempt_seed = if attempt == 0 {
            seed
        } else {
            rng::mix_seed(seed, "rescue", attempt)
        };
        match generate_training_scene(config, attempt_seed) {
            Ok(scene) => return Ok((scene, attempt_seed)),
            Err(err @ Error::PlacementFailure(_)) => last = Some(err),
            Err(err) => return Err(err),
        }
    }
    Err(last.expect("at least one reseed attempt"))
}
