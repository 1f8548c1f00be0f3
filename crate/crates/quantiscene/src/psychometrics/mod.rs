//! Accuracy grids, Weber-fraction fits, and discrimination thresholds.
//!
//! [`aggregate`] tallies answered trials into the evaluation grid (training
//! regime × arrangement × area flag × ratio column) and pools per-ratio
//! accuracy curves. [`fit_weber`] recovers the Weber fraction of an
//! approximate-number observer from such a curve by trial-weighted least
//! squares against [`ans_accuracy`], and [`threshold_ratio`] reads off the
//! ratio that observer distinguishes at a given accuracy level.
//!
//! [`fixtures`] bundles published reference results for regression tests
//! and demo reports.

pub mod fixtures;
mod plot;

pub use plot::plot_svg;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generator::{PositionMode, RatioSetting, RatioSpec};
use crate::math::normal_cdf;
use crate::rng;
use crate::subjects::ans_accuracy;

/// One accuracy measurement at a fixed contrast ratio.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PsychometricPoint {
    /// Majority-to-minority ratio, strictly above 1.
    pub ratio: f64,
    /// Fraction of correct answers, in `[0, 1]`.
    pub accuracy: f64,
    /// Number of trials behind the measurement.
    pub trials: u64,
}

impl PsychometricPoint {
    pub fn new(ratio: f64, accuracy: f64, trials: u64) -> Result<Self> {
        if !ratio.is_finite() || ratio <= 1.0 {
            return Err(Error::InvalidConfig(format!(
                "psychometric ratio {ratio} must exceed 1"
            )));
        }
        if !(0.0..=1.0).contains(&accuracy) {
            return Err(Error::InvalidConfig(format!(
                "accuracy {accuracy} outside [0, 1]"
            )));
        }
        if trials == 0 {
            return Err(Error::InvalidConfig("psychometric point with no trials".into()));
        }
        Ok(PsychometricPoint {
            ratio,
            accuracy,
            trials,
        })
    }
}

/// One answered evaluation trial, ready for aggregation.
///
/// `cell_ratio` names the grid column the trial was generated under (a
/// fixed pair or the mixed `all` setting); `ratio` is the contrast actually
/// present in the scene, which the accuracy curves group by.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialOutcome {
    /// Training-regime or subject tag, e.g. `q_full`.
    pub train: String,
    pub mode: PositionMode,
    pub area_controlled: bool,
    pub cell_ratio: RatioSetting,
    pub ratio: RatioSpec,
    pub correct: bool,
}

/// Grid-cell coordinates: one column of one row of the evaluation table.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct CellKey {
    pub train: String,
    pub mode: PositionMode,
    pub area_controlled: bool,
    pub ratio: RatioSetting,
}

/// Tally of one grid cell.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CellStats {
    pub correct: u64,
    pub trials: u64,
}

impl CellStats {
    /// Exact accuracy in percent.
    pub fn percent(&self) -> f64 {
        100.0 * self.correct as f64 / self.trials as f64
    }

    /// Accuracy in percent rounded half away from zero to `decimals`.
    pub fn percent_rounded(&self, decimals: u8) -> f64 {
        let scale = 10f64.powi(i32::from(decimals));
        (self.percent() * scale).round() / scale
    }
}

/// One accuracy curve: every trial of a training regime and arrangement,
/// pooled across area flags.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct CurveKey {
    pub train: String,
    pub mode: PositionMode,
}

/// Aggregated evaluation results: the accuracy grid plus the per-ratio
/// curves it implies.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct GridReport {
    pub cells: BTreeMap<CellKey, CellStats>,
    /// Accuracy vs ratio, pooled across area flags, sorted by ratio.
    pub curves: BTreeMap<CurveKey, Vec<PsychometricPoint>>,
}

impl GridReport {
    pub fn percent(&self, key: &CellKey) -> Option<f64> {
        self.cells.get(key).map(CellStats::percent)
    }

    /// Renders the grid as CSV with the `train,mode,area,ratio,accuracy,trials`
    /// header; the `area` column names the dimension held equal across
    /// groups (`size` or `area`), and accuracy is in percent rounded to
    /// `decimals`.
    pub fn to_csv(&self, decimals: u8) -> String {
        let mut out = String::from("train,mode,area,ratio,accuracy,trials\n");
        for (key, stats) in &self.cells {
            let _ = writeln!(
                out,
                "{},{},{},{},{:.*},{}",
                key.train,
                key.mode,
                area_label(key.area_controlled),
                key.ratio,
                decimals as usize,
                stats.percent_rounded(decimals),
                stats.trials,
            );
        }
        out
    }
}

pub fn area_label(area_controlled: bool) -> &'static str {
    if area_controlled {
        "area"
    } else {
        "size"
    }
}

/// Tallies answered trials into a [`GridReport`].
///
/// Every trial lands in its grid cell, and additionally joins the accuracy
/// curve of its training regime and arrangement at the scene's actual
/// contrast ratio — trials from mixed-`all` cells contribute to the curve
/// point of whichever ratio they sampled. The result is independent of the
/// input order.
pub fn aggregate(outcomes: &[TrialOutcome]) -> GridReport {
    let mut cells: BTreeMap<CellKey, CellStats> = BTreeMap::new();
    let mut pools: BTreeMap<(CurveKey, (u32, u32)), CellStats> = BTreeMap::new();
    for outcome in outcomes {
        let cell = CellKey {
            train: outcome.train.clone(),
            mode: outcome.mode,
            area_controlled: outcome.area_controlled,
            ratio: outcome.cell_ratio,
        };
        let stats = cells.entry(cell).or_default();
        stats.trials += 1;
        stats.correct += u64::from(outcome.correct);

        let curve = CurveKey {
            train: outcome.train.clone(),
            mode: outcome.mode,
        };
        let pair = (outcome.ratio.small, outcome.ratio.large);
        let pooled = pools.entry((curve, pair)).or_default();
        pooled.trials += 1;
        pooled.correct += u64::from(outcome.correct);
    }

    let mut curves: BTreeMap<CurveKey, Vec<PsychometricPoint>> = BTreeMap::new();
    for ((curve, (small, large)), stats) in pools {
        curves.entry(curve).or_default().push(PsychometricPoint {
            ratio: f64::from(large) / f64::from(small),
            accuracy: stats.correct as f64 / stats.trials as f64,
            trials: stats.trials,
        });
    }
    for points in curves.values_mut() {
        points.sort_by(|a, b| a.ratio.total_cmp(&b.ratio));
    }

    GridReport { cells, curves }
}

/// Result of fitting a Weber fraction to an accuracy curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeberFit {
    pub w: f64,
    /// Trial-weighted sum of squared errors at the fitted `w`.
    pub residual: f64,
    /// Bootstrap standard error, when requested.
    pub stderr: Option<f64>,
}

/// Search bracket for the Weber fraction.
pub const WEBER_MIN: f64 = 1.001;
pub const WEBER_MAX: f64 = 3.0;

const FIT_TOLERANCE: f64 = 1e-7;

fn weighted_sse(points: &[PsychometricPoint], w: f64) -> f64 {
    points
        .iter()
        .map(|p| {
            let err = p.accuracy - ans_accuracy(p.ratio, w);
            p.trials as f64 * err * err
        })
        .sum()
}

/// Fits a Weber fraction to accuracy-vs-ratio points by trial-weighted
/// least squares against [`ans_accuracy`], minimizing over
/// `w ∈ [`[`WEBER_MIN`]`, `[`WEBER_MAX`]`]` by golden-section search to
/// within 1e−6.
///
/// Needs at least three points, at least one of them off the ceiling
/// (below 0.99) and at least one above chance; otherwise the data carries
/// no information about `w` and [`Error::DegenerateData`] is returned.
pub fn fit_weber(points: &[PsychometricPoint]) -> Result<WeberFit> {
    if points.len() < 3 {
        return Err(Error::DegenerateData(format!(
            "{} psychometric points; need at least 3",
            points.len()
        )));
    }
    if points.iter().all(|p| p.accuracy >= 0.99) {
        return Err(Error::DegenerateData(
            "all accuracies at ceiling; no information about w".into(),
        ));
    }
    if points.iter().all(|p| p.accuracy <= 0.5) {
        return Err(Error::DegenerateData(
            "all accuracies at or below chance; no information about w".into(),
        ));
    }

    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (WEBER_MIN, WEBER_MAX);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = weighted_sse(points, c);
    let mut fd = weighted_sse(points, d);
    while b - a > FIT_TOLERANCE {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = weighted_sse(points, c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = weighted_sse(points, d);
        }
    }
    let w = 0.5 * (a + b);
    Ok(WeberFit {
        w,
        residual: weighted_sse(points, w),
        stderr: None,
    })
}

/// Number of bootstrap resamples used by the reporting pipeline.
pub const DEFAULT_BOOTSTRAP_RESAMPLES: usize = 200;

/// [`fit_weber`] plus a case-resampling bootstrap standard error.
///
/// Resamples the point list with replacement `resamples` times, refits
/// each, and reports the sample standard deviation of the refitted Weber
/// fractions. Each resample draws from its own stream derived from `seed`,
/// so the result is reproducible and independent of scheduling; resamples
/// that turn out degenerate are skipped, and `stderr` stays `None` if
/// fewer than two survive.
pub fn fit_weber_bootstrap(
    points: &[PsychometricPoint],
    resamples: usize,
    seed: u64,
) -> Result<WeberFit> {
    let base = fit_weber(points)?;
    let refits: Vec<f64> = (0..resamples)
        .into_par_iter()
        .filter_map(|index| {
            let mut rng = rng::derive(seed, "bootstrap", index as u64);
            let drawn: Vec<PsychometricPoint> = (0..points.len())
                .map(|_| points[rng.gen_range(0..points.len())])
                .collect();
            fit_weber(&drawn).ok().map(|fit| fit.w)
        })
        .collect();
    let stderr = if refits.len() >= 2 {
        let n = refits.len() as f64;
        let mean = refits.iter().sum::<f64>() / n;
        let var = refits.iter().map(|w| (w - mean) * (w - mean)).sum::<f64>() / (n - 1.0);
        Some(var.sqrt())
    } else {
        None
    };
    Ok(WeberFit { stderr, ..base })
}

/// The ratio an observer with Weber fraction `w` distinguishes at accuracy
/// `level`, solved by bisection on [`ans_accuracy`] to within 1e−6.
///
/// `level` 0.5 is chance, reached exactly at ratio 1. Accuracy saturates
/// at `Φ(1/(w−1))` as the ratio grows, so levels at or beyond that bound
/// have no finite solution and return `f64::INFINITY`.
pub fn threshold_ratio(w: f64, level: f64) -> f64 {
    assert!(w.is_finite() && w > 1.0, "Weber fraction {w} must exceed 1");
    assert!(
        (0.5..1.0).contains(&level),
        "accuracy level {level} outside [0.5, 1)"
    );
    if level == 0.5 {
        return 1.0;
    }
    if level >= normal_cdf(1.0 / (w - 1.0)) {
        return f64::INFINITY;
    }
    let mut lo = 1.0;
    let mut hi = 2.0;
    while ans_accuracy(hi, w) < level {
        lo = hi;
        hi = 1.0 + 2.0 * (hi - 1.0);
    }
    for _ in 0..200 {
        if hi - lo <= 1e-10 {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if ans_accuracy(mid, w) < level {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Per-curve fit summary as reported by the pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeSummary {
    pub w: f64,
    pub threshold_75: f64,
    pub residual: f64,
}

/// Fits every curve and reads off its 75% threshold, keyed `train/mode`.
pub fn summarize_curves(
    curves: &BTreeMap<CurveKey, Vec<PsychometricPoint>>,
) -> Result<BTreeMap<String, ModeSummary>> {
    curves
        .iter()
        .map(|(key, points)| {
            let fit = fit_weber(points)?;
            Ok((
                format!("{}/{}", key.train, key.mode),
                ModeSummary {
                    w: fit.w,
                    threshold_75: threshold_ratio(fit.w, 0.75),
                    residual: fit.residual,
                },
            ))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generator::PositionMode::{Paired, Partitioned, Random};
    use rand_distr::{Binomial, Distribution};

    fn outcome(
        train: &str,
        mode: PositionMode,
        area: bool,
        cell: RatioSetting,
        (small, large): (u32, u32),
        correct: bool,
    ) -> TrialOutcome {
        TrialOutcome {
            train: train.into(),
            mode,
            area_controlled: area,
            cell_ratio: cell,
            ratio: RatioSpec::new(small, large, 1).unwrap(),
            correct,
        }
    }

    #[test]
    fn aggregate_tallies_cells_and_pools_curves() {
        let fixed = RatioSetting::fixed(1, 2).unwrap();
        let mut outcomes = vec![
            outcome("q_full", Random, false, fixed, (1, 2), true),
            outcome("q_full", Random, false, fixed, (1, 2), true),
            outcome("q_full", Random, false, fixed, (1, 2), false),
            outcome("q_full", Random, false, fixed, (1, 2), false),
            outcome("q_full", Random, true, fixed, (1, 2), true),
            outcome("q_full", Random, true, fixed, (1, 2), false),
            // A mixed-cell trial joins the curve at its sampled ratio.
            outcome("q_full", Random, false, RatioSetting::Mixed, (2, 3), true),
            outcome("q_half", Paired, true, fixed, (1, 2), true),
        ];
        let report = aggregate(&outcomes);

        assert_eq!(report.cells.len(), 4);
        let key = CellKey {
            train: "q_full".into(),
            mode: Random,
            area_controlled: false,
            ratio: fixed,
        };
        assert_eq!(report.percent(&key), Some(50.0));
        assert_eq!(
            report.cells[&key],
            CellStats {
                correct: 2,
                trials: 4
            }
        );

        let curve = &report.curves[&CurveKey {
            train: "q_full".into(),
            mode: Random,
        }];
        assert_eq!(curve.len(), 2);
        // 1:2 pools both area flags: 3 of 6 correct.
        assert_eq!(curve[1].ratio, 2.0);
        assert_eq!(curve[1].trials, 6);
        assert_eq!(curve[1].accuracy, 0.5);
        assert_eq!(curve[0].ratio, 1.5);
        assert_eq!(curve[0].trials, 1);
        assert!(curve[0].ratio < curve[1].ratio);

        outcomes.reverse();
        assert_eq!(aggregate(&outcomes), report, "order must not matter");

        let perfect: Vec<TrialOutcome> = outcomes
            .iter()
            .cloned()
            .map(|mut o| {
                o.correct = true;
                o
            })
            .collect();
        let all_correct = aggregate(&perfect);
        assert!(all_correct.cells.values().all(|s| s.percent() == 100.0));
    }

    #[test]
    fn csv_has_the_pinned_header_and_one_row_per_cell() {
        let fixed = RatioSetting::fixed(1, 2).unwrap();
        let report = aggregate(&[
            outcome("q_full", Random, false, fixed, (1, 2), true),
            outcome("q_full", Random, false, fixed, (1, 2), false),
            outcome("q_full", Partitioned, true, RatioSetting::Mixed, (2, 3), true),
        ]);
        let csv = report.to_csv(0);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "train,mode,area,ratio,accuracy,trials");
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[1], "q_full,random,size,1:2,50,2");
        assert_eq!(lines[2], "q_full,partitioned,area,all,100,1");
    }

    #[test]
    fn rounding_is_half_away_from_zero() {
        let stats = CellStats {
            correct: 737,
            trials: 1024,
        };
        assert_eq!(stats.percent_rounded(0), 72.0);
        assert_eq!(stats.percent_rounded(1), 72.0);
        assert_eq!(stats.percent_rounded(2), 71.97);
    }

    #[test]
    fn exact_ans_points_recover_their_weber_fraction() {
        let points: Vec<PsychometricPoint> = (0..9)
            .map(|i| {
                let ratio = 1.05 * (2.0f64 / 1.05).powf(f64::from(i) / 8.0);
                PsychometricPoint::new(ratio, ans_accuracy(ratio, 1.2), 1024).unwrap()
            })
            .collect();
        let fit = fit_weber(&points).unwrap();
        assert!((fit.w - 1.2).abs() <= 1e-4, "fit {} off 1.2", fit.w);
        assert!(fit.residual < 1e-9);
    }

    #[test]
    fn degenerate_curves_are_rejected() {
        let flat = |acc: f64| -> Vec<PsychometricPoint> {
            [1.1, 1.5, 2.0]
                .iter()
                .map(|&r| PsychometricPoint::new(r, acc, 100).unwrap())
                .collect()
        };
        assert!(matches!(
            fit_weber(&flat(0.8)[..2]),
            Err(Error::DegenerateData(_))
        ));
        assert!(matches!(
            fit_weber(&flat(0.995)),
            Err(Error::DegenerateData(_))
        ));
        assert!(matches!(
            fit_weber(&flat(0.5)),
            Err(Error::DegenerateData(_))
        ));

        assert!(PsychometricPoint::new(1.0, 0.8, 100).is_err());
        assert!(PsychometricPoint::new(1.5, 1.2, 100).is_err());
        assert!(PsychometricPoint::new(1.5, 0.8, 0).is_err());
    }

    #[test]
    fn threshold_spot_values_and_round_trip() {
        assert!((threshold_ratio(1.14, 0.75) - 1.143_439_906).abs() < 1e-6);
        assert!((threshold_ratio(1.11, 0.75) - 1.110_896_671).abs() < 1e-6);
        assert!((threshold_ratio(1.16, 0.75) - 1.165_751_368).abs() < 1e-6);
        assert_eq!(threshold_ratio(1.14, 0.5), 1.0);

        for &w in &[1.05, 1.11, 1.14, 1.16, 1.3, 2.0] {
            for &level in &[0.55, 0.6, 0.75, 0.9, 0.95] {
                let r = threshold_ratio(w, level);
                if r.is_finite() {
                    assert!(
                        (ans_accuracy(r, w) - level).abs() <= 1e-6,
                        "round trip failed at w={w} level={level}"
                    );
                }
            }
        }

        // At w = 3 accuracy saturates near 0.69, so 75% is out of reach.
        assert!(threshold_ratio(3.0, 0.75).is_infinite());
        assert!(threshold_ratio(2.0, 0.75).is_finite());
    }

    #[test]
    fn harder_data_never_lowers_the_threshold() {
        for mode in [Random, Paired, Partitioned] {
            let key = CurveKey {
                train: "q_full".into(),
                mode,
            };
            let points = fixtures::ratio_curves()[&key].clone();
            let harder: Vec<PsychometricPoint> = points
                .iter()
                .map(|p| PsychometricPoint {
                    accuracy: (p.accuracy - 0.05).max(0.0),
                    ..*p
                })
                .collect();
            let easy = threshold_ratio(fit_weber(&points).unwrap().w, 0.75);
            let hard = threshold_ratio(fit_weber(&harder).unwrap().w, 0.75);
            assert!(hard >= easy, "{mode}: threshold dropped {easy} -> {hard}");
        }
    }

    #[test]
    fn noisy_fits_stay_within_two_hundredths() {
        let ratios: Vec<f64> = (0..24)
            .map(|i| 1.05 * (3.0f64 / 1.05).powf(f64::from(i) / 23.0))
            .collect();
        for (case, &w_true) in [1.05, 1.1, 1.2, 1.5].iter().enumerate() {
            let hits = (0..100)
                .filter(|&rep| {
                    let mut rng = rng::derive(97, "fit-noise", (case * 100 + rep) as u64);
                    let points: Vec<PsychometricPoint> = ratios
                        .iter()
                        .map(|&r| {
                            let p = ans_accuracy(r, w_true);
                            let k = Binomial::new(1024, p).unwrap().sample(&mut rng);
                            PsychometricPoint::new(r, k as f64 / 1024.0, 1024).unwrap()
                        })
                        .collect();
                    (fit_weber(&points).unwrap().w - w_true).abs() <= 0.02
                })
                .count();
            assert!(hits >= 95, "w={w_true}: only {hits}/100 within 0.02");
        }
    }

    #[test]
    fn bootstrap_stderr_is_reproducible_and_plausible() {
        let key = CurveKey {
            train: "q_full".into(),
            mode: Random,
        };
        let points = fixtures::ratio_curves()[&key].clone();
        let fit = fit_weber_bootstrap(&points, 64, 11).unwrap();
        let again = fit_weber_bootstrap(&points, 64, 11).unwrap();
        assert_eq!(fit, again);
        assert_eq!(fit.w, fit_weber(&points).unwrap().w);
        let se = fit.stderr.unwrap();
        assert!(se > 0.0 && se < 0.05, "stderr {se} implausible");
    }

    #[test]
    fn summaries_cover_every_curve() {
        let curves = fixtures::ratio_curves();
        let summary = summarize_curves(&curves).unwrap();
        assert_eq!(summary.len(), 3);
        let random = summary["q_full/random"];
        assert!((random.threshold_75 - threshold_ratio(random.w, 0.75)).abs() < 1e-12);
        assert!(random.residual >= 0.0);
        let json = serde_json::to_string(&summary).unwrap();
        assert!(json.contains("q_full/partitioned"));
    }
}
