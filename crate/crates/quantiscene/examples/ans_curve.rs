//! Monte-Carlo the approximate-number-system comparison and check it
//! against the closed-form accuracy curve.
//!
//! ```text
//! cargo run --release --example ans_curve
//! ```

use quantiscene::rng;
use quantiscene::subjects::{ans_accuracy, ans_predict, AnsParams, Comparison};

fn main() -> quantiscene::error::Result<()> {
    let params = AnsParams::new(1.14)?;
    let trials = 40_000u64;

    println!("Weber fraction w = {}, {trials} trials per ratio", params.weber_w);
    println!("{:>7} {:>10} {:>10} {:>8}", "ratio", "simulated", "closed", "diff");

    for (small, large) in [(9u32, 10u32), (7, 8), (5, 6), (4, 5), (3, 4), (2, 3), (1, 2)] {
        let ratio = f64::from(large) / f64::from(small);
        let hits = (0..trials)
            .filter(|&t| {
                let seed = rng::mix_seed(2024, "ans-curve", t);
                ans_predict((large as usize, small as usize), &params, seed)
                    == Comparison::FirstLarger
            })
            .count();
        let simulated = hits as f64 / trials as f64;
        let closed = ans_accuracy(ratio, params.weber_w);
        println!(
            "{:>4}:{:<2} {simulated:>10.4} {closed:>10.4} {:>8.4}",
            small,
            large,
            (simulated - closed).abs()
        );
    }

    println!("\nhow the curve moves with w (accuracy at ratio 7:8):");
    for w in [1.05, 1.11, 1.14, 1.16, 1.25, 1.5] {
        println!("  w = {w:<5} -> {:.4}", ans_accuracy(8.0 / 7.0, w));
    }
    Ok(())
}
