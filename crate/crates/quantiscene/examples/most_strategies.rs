//! Compare the two verification strategies for "most": counting both
//! groups versus pairing witnesses against counterexamples. They are
//! provably equivalent; this demonstrates it empirically on generated
//! scenes and shows the pairing leftovers.
//!
//! ```text
//! cargo run --release --example most_strategies
//! ```

use quantiscene::caption::{pairing_remainder, verify_most_cardinality, verify_most_pairing};
use quantiscene::generator::{generate_eval_scene_reseeded, EvalConfig, PositionMode};
use quantiscene::scene::Predicate;

fn main() -> quantiscene::error::Result<()> {
    let universal = Predicate::universal();

    println!("one scene in detail:");
    let config = EvalConfig {
        mode: PositionMode::Paired,
        ..EvalConfig::default()
    };
    let (scene, meta, _) = generate_eval_scene_reseeded(&config, 11)?;
    let majority = meta.majority_predicate;
    let (witnesses, counterexamples) = pairing_remainder(&scene, &universal, &majority);
    println!(
        "  counts {:?}: {} of {} objects are {}",
        meta.counts,
        scene.count_joint(&universal, &majority),
        scene.objects.len(),
        majority.describe(),
    );
    println!(
        "  after pairing, {witnesses} witnesses and {counterexamples} counterexamples remain"
    );
    println!(
        "  cardinality says {}, pairing says {}",
        verify_most_cardinality(&scene, &universal, &majority),
        verify_most_pairing(&scene, &universal, &majority),
    );

    println!("\nagreement across modes (1000 scenes each):");
    for mode in PositionMode::ALL {
        let config = EvalConfig {
            mode,
            ..EvalConfig::default()
        };
        let mut agreements = 0usize;
        let mut majority_true = 0usize;
        for seed in 0..1000u64 {
            let (scene, meta, _) = generate_eval_scene_reseeded(&config, seed)?;
            let a = verify_most_cardinality(&scene, &universal, &meta.majority_predicate);
            let b = verify_most_pairing(&scene, &universal, &meta.majority_predicate);
            assert_eq!(a, b, "strategies disagreed (mode {mode}, seed {seed})");
            agreements += 1;
            majority_true += a as usize;
        }
        println!(
            "  {mode:11} {agreements}/1000 agree; \"most are majority\" true {majority_true} times"
        );
    }
    Ok(())
}
