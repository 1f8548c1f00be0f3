//! Write a small training dataset (scenes plus sampled captions), read it
//! back, and print what landed on disk.
//!
//! ```text
//! cargo run --release --example train_dataset
//! ```

use quantiscene::generator::CaptionerKind;
use quantiscene::harness::{generate_train_dataset, read_dataset, verify_dataset, TrainDatasetConfig};

fn main() -> quantiscene::error::Result<()> {
    let out_dir = std::env::temp_dir().join("quantiscene-train-demo");
    if out_dir.exists() {
        std::fs::remove_dir_all(&out_dir)?;
    }

    let mut config = TrainDatasetConfig::default();
    config.images = 6;
    config.base.captions_per_image = 3;
    config.base.captioner = CaptionerKind::QFull;
    config.raster.resolution = 96;
    config.inline_scenes = true;

    let manifest = generate_train_dataset(&config, 123, &out_dir)?;
    println!(
        "wrote {} records over {} images to {}",
        manifest.splits["train"].records,
        manifest.splits["train"].images,
        out_dir.display()
    );

    let (_, records) = read_dataset(&out_dir)?;
    println!("\ncaptions per image (true/false = does the caption fit the scene):");
    let mut current_image = "";
    for record in &records {
        if record.image_path != current_image {
            current_image = &record.image_path;
            let objects = record.scene.as_ref().map_or(0, |s| s.objects.len());
            println!("  {current_image} ({objects} objects)");
        }
        println!(
            "    [{}] {}",
            record.agreement.expect("training records carry agreement"),
            record.caption_text
        );
    }

    let report = verify_dataset(&out_dir)?;
    println!(
        "\nverify: {} records, {} files, {}",
        report.records,
        report.files_checked,
        if report.ok() { "all invariants hold" } else { "PROBLEMS" }
    );
    Ok(())
}
