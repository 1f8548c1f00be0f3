//! Behavioral checks on the simulated subjects: the spatial pairing
//! subject should suffer when the two groups are spatially separated,
//! while the approximate-number subject should not care about
//! arrangement at all.

use quantiscene::caption::{Modifier, Quantity};
use quantiscene::error::Error;
use quantiscene::generator::{
    eval_caption_for, generate_eval_scene_reseeded, EvalConfig, PositionMode, RatioSetting,
};
use quantiscene::rng;
use quantiscene::scene::Predicate;
use quantiscene::subjects::{ans_accuracy, AnsParams, PairingParams, SubjectKind};

const TRIALS: u64 = 1200;

/// Accuracy of `subject` on freshly generated 6:7 scenes in `mode`.
fn accuracy(subject: &SubjectKind, mode: PositionMode, tag: &str) -> f64 {
    let config = EvalConfig {
        mode,
        ratio: RatioSetting::fixed(6, 7).unwrap(),
        ..EvalConfig::default()
    };
    let mut hits = 0u64;
    for i in 0..TRIALS {
        let seed = rng::mix_seed(4242, tag, i);
        let (scene, meta, _) = generate_eval_scene_reseeded(&config, seed).unwrap();
        let (caption, truth) = eval_caption_for(&meta, rng::mix_seed(777, tag, i));
        let answer = subject
            .answer(&scene, &caption, rng::mix_seed(3333, tag, i))
            .unwrap();
        hits += u64::from(answer == truth);
    }
    hits as f64 / TRIALS as f64
}

fn pairing(radius: f64, drop: f64) -> SubjectKind {
    SubjectKind::SpatialPairing(PairingParams::new(radius, drop).unwrap())
}

#[test]
fn pairing_subject_is_hurt_by_partitioned_arrangements() {
    let subject = pairing(0.3, 0.1);
    let random = accuracy(&subject, PositionMode::Random, "p-random");
    let partitioned = accuracy(&subject, PositionMode::Partitioned, "p-part");
    let paired = accuracy(&subject, PositionMode::Paired, "p-paired");

    assert!(
        paired - partitioned >= 0.05,
        "paired {paired:.3} should beat partitioned {partitioned:.3} clearly"
    );
    assert!(
        random - partitioned >= 0.05,
        "random {random:.3} should beat partitioned {partitioned:.3} clearly"
    );
    for (label, acc) in [("random", random), ("partitioned", partitioned), ("paired", paired)] {
        assert!((0.7..=0.99).contains(&acc), "{label} accuracy {acc:.3} out of range");
    }
}

#[test]
fn widening_the_reach_removes_the_arrangement_penalty() {
    // A reach longer than the canvas diagonal pairs everything pairable,
    // so the partitioned arrangement stops being special.
    let near = accuracy(&pairing(0.3, 0.1), PositionMode::Partitioned, "r-part");
    let far = accuracy(&pairing(1.5, 0.1), PositionMode::Partitioned, "r-part");
    assert!(
        far - near >= 0.05,
        "reach 1.5 ({far:.3}) should beat reach 0.3 ({near:.3}) on partitioned scenes"
    );

    let far_paired = accuracy(&pairing(1.5, 0.1), PositionMode::Paired, "r-paired");
    assert!(
        (far - far_paired).abs() <= 0.04,
        "with unlimited reach, partitioned {far:.3} and paired {far_paired:.3} should agree"
    );
}

#[test]
fn ans_subject_ignores_arrangement() {
    let subject = SubjectKind::Ans(AnsParams::new(1.14).unwrap());
    let closed = ans_accuracy(7.0 / 6.0, 1.14);
    for mode in PositionMode::ALL {
        let acc = accuracy(&subject, mode, &format!("ans-{mode}"));
        assert!(
            (acc - closed).abs() <= 0.03,
            "{mode}: accuracy {acc:.3} strays from the closed form {closed:.3}"
        );
    }
}

#[test]
fn noisy_subjects_reject_captions_outside_their_competence() {
    let config = EvalConfig::default();
    let (scene, _, _) = generate_eval_scene_reseeded(&config, 3).unwrap();
    let caption = quantiscene::caption::CaptionAst {
        modifier: Modifier::Exactly,
        quantity: Quantity::Number(3),
        restrictor: Predicate::universal(),
        scope: Predicate::color(quantiscene::scene::Color::Red),
    };

    // The exact counter evaluates anything.
    SubjectKind::ExactCounter.answer(&scene, &caption, 0).unwrap();

    // The noisy subjects only model more/less-than-half comparisons.
    for subject in [SubjectKind::Ans(AnsParams::new(1.2).unwrap()), pairing(0.3, 0.1)] {
        match subject.answer(&scene, &caption, 0) {
            Err(Error::UnsupportedCaption { .. }) => {}
            other => panic!("expected UnsupportedCaption, got {other:?}"),
        }
    }
}
