//! Fit Weber fractions to the bundled reference curves and read off the
//! 75% discrimination thresholds.
//!
//! ```text
//! cargo run --release --example weber_fit
//! ```

use quantiscene::psychometrics::{
    fit_weber, fit_weber_bootstrap, fixtures, threshold_ratio,
};

fn main() -> quantiscene::error::Result<()> {
    let curves = fixtures::ratio_curves();

    println!("reference accuracy-vs-ratio curves, n:n+1 columns:");
    for (key, points) in &curves {
        let preview: Vec<String> = points
            .iter()
            .take(4)
            .map(|p| format!("({:.3}, {:.2})", p.ratio, p.accuracy))
            .collect();
        println!("  {}/{}: {} points, e.g. {}", key.train, key.mode, points.len(), preview.join(" "));
    }

    println!("\nleast-squares fits:");
    for (key, points) in &curves {
        let fit = fit_weber(points)?;
        let threshold = threshold_ratio(fit.w, 0.75);
        println!(
            "  {}/{}: w = {:.4} (residual {:.2e}), 75% threshold = {:.4}",
            key.train, key.mode, fit.w, fit.residual, threshold
        );
    }

    println!("\nbootstrap standard errors (200 resamples):");
    for (key, points) in &curves {
        let fit = fit_weber_bootstrap(points, 200, 7)?;
        match fit.stderr {
            Some(stderr) => println!("  {}/{}: w = {:.4} +/- {stderr:.4}", key.train, key.mode, fit.w),
            None => println!("  {}/{}: w = {:.4} (no stderr)", key.train, key.mode, fit.w),
        }
    }

    println!("\nthreshold as a function of w at the 75% level:");
    for w in [1.05, 1.11, 1.14, 1.16, 1.25] {
        println!("  w = {w:<5} -> ratio {:.4}", threshold_ratio(w, 0.75));
    }
    Ok(())
}
