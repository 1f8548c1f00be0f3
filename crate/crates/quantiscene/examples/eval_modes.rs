//! Generate one evaluation scene per positioning mode and render each to
//! a PNG under the system temp directory.
//!
//! ```text
//! cargo run --release --example eval_modes
//! ```

use quantiscene::generator::{generate_eval_scene_reseeded, EvalConfig, PositionMode, RatioSetting};
use quantiscene::raster::{write_png, RasterConfig};

fn main() -> quantiscene::error::Result<()> {
    let out_dir = std::env::temp_dir().join("quantiscene-eval-modes");
    std::fs::create_dir_all(&out_dir)?;

    let raster = RasterConfig {
        resolution: 256,
        ..RasterConfig::default()
    };

    for mode in PositionMode::ALL {
        for area_controlled in [false, true] {
            let config = EvalConfig {
                mode,
                area_controlled,
                ratio: RatioSetting::fixed(2, 3)?,
                ..EvalConfig::default()
            };
            let (scene, meta, seed) = generate_eval_scene_reseeded(&config, 7)?;

            let label = if area_controlled { "area" } else { "size" };
            let path = out_dir.join(format!("{mode}-{label}.png"));
            write_png(&scene, &raster, &path)?;

            let (minority, majority) = meta.counts;
            println!(
                "{mode:11} {label:4}  {minority:2} x {min_pred} vs {majority:2} x {maj_pred}  \
                 (ratio {ratio}, seed {seed}) -> {path}",
                min_pred = meta.minority_predicate.describe(),
                maj_pred = meta.majority_predicate.describe(),
                ratio = meta.ratio.label(),
                path = path.display(),
            );
            if let Some(partition) = meta.partition {
                println!(
                    "            partition line at {:.0} degrees",
                    partition.angle.to_degrees()
                );
            }

            let minority_area: f64 = scene
                .objects
                .iter()
                .filter(|o| meta.minority_predicate.matches(o))
                .map(|o| o.analytic_area())
                .sum();
            let majority_area: f64 = scene
                .objects
                .iter()
                .filter(|o| meta.majority_predicate.matches(o))
                .map(|o| o.analytic_area())
                .sum();
            println!(
                "            group areas {:.4} vs {:.4} (ratio {:.3})",
                minority_area,
                majority_area,
                majority_area / minority_area
            );
            if area_controlled {
                println!(
                    "            (area control equalizes expected group areas; \
                     single scenes fluctuate)"
                );
            }
        }
    }
    Ok(())
}
