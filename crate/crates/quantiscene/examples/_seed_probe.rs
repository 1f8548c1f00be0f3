use quantiscene::generator::RatioSetting;
use quantiscene::harness::{
    generate_eval_dataset, join_answers, ratio_study_ratios, read_dataset, run_builtin,
    EvalDatasetConfig,
};
use quantiscene::psychometrics::{aggregate, fit_weber};
use quantiscene::raster::RasterConfig;
use quantiscene::subjects::{ans_accuracy, SubjectKind};
use quantiscene::PositionMode;

fn main() {
    let kind: SubjectKind = "ans:1.11".parse().unwrap();
    for master in [11u64, 12, 13, 14] {
        let dir = tempfile::tempdir().unwrap();
        let config = EvalDatasetConfig {
            trials_per_cell: 1024,
            modes: vec![PositionMode::Random],
            area_flags: vec![false],
            ratios: ratio_study_ratios(),
            raster: RasterConfig {
                resolution: 16,
                ..Default::default()
            },
            ..Default::default()
        };
        let _ = RatioSetting::Mixed;
        generate_eval_dataset(&config, master, dir.path()).unwrap();
        let (_, records) = read_dataset(dir.path()).unwrap();
        for run in [1u64, 2, 3] {
            let set = run_builtin(kind, &records, run).unwrap();
            let outcomes = join_answers(&records, &set.answers, "ans").unwrap();
            let report = aggregate(&outcomes);
            let points = report.curves.values().next().unwrap();
            let mut max_dev = 0.0f64;
            for p in points {
                let dev = (p.accuracy - ans_accuracy(p.ratio, 1.11)).abs();
                max_dev = max_dev.max(dev);
            }
            let fit = fit_weber(points).unwrap();
            println!(
                "master {master} run {run}: max_dev {max_dev:.4} w {:.4} (|dw| {:.4})",
                fit.w,
                (fit.w - 1.11f64).abs()
            );
        }
    }
}
