//! Minimal SVG rendering of accuracy-vs-ratio curves with fitted model
//! overlays.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::subjects::ans_accuracy;

use super::{CurveKey, ModeSummary, PsychometricPoint};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 56.0;
const RIGHT: f64 = 16.0;
const TOP: f64 = 18.0;
const BOTTOM: f64 = 44.0;

const COLORS: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#17becf",
];

struct Frame {
    x_min: f64,
    x_max: f64,
}

impl Frame {
    fn x(&self, ratio: f64) -> f64 {
        LEFT + (ratio - self.x_min) / (self.x_max - self.x_min) * (WIDTH - LEFT - RIGHT)
    }

    fn y(&self, accuracy: f64) -> f64 {
        let span = HEIGHT - TOP - BOTTOM;
        TOP + (1.0 - (accuracy - 0.5) / 0.5) * span
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Renders accuracy-vs-ratio curves as a standalone SVG document.
///
/// Each curve draws its measured points plus, when `fits` carries a
/// summary under the curve's `train/mode` key, the fitted model curve and
/// a marker at its 75% threshold. The y axis is fixed to the informative
/// `[0.5, 1.0]` band.
pub fn plot_svg(
    curves: &BTreeMap<CurveKey, Vec<PsychometricPoint>>,
    fits: &BTreeMap<String, ModeSummary>,
) -> String {
    let x_max = curves
        .values()
        .flatten()
        .map(|p| p.ratio)
        .fold(1.5, f64::max)
        * 1.03;
    let frame = Frame {
        x_min: 1.0,
        x_max,
    };

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" \
         font-family=\"sans-serif\" font-size=\"12\">"
    );
    let _ = writeln!(
        svg,
        "<rect x=\"0\" y=\"0\" width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>"
    );

    // Gridlines and axis labels.
    for i in 0..=5 {
        let acc = 0.5 + 0.1 * f64::from(i);
        let y = frame.y(acc);
        let _ = writeln!(
            svg,
            "<line x1=\"{LEFT}\" y1=\"{y:.1}\" x2=\"{:.1}\" y2=\"{y:.1}\" \
             stroke=\"#ccc\" stroke-dasharray=\"4 3\"/>",
            WIDTH - RIGHT
        );
        let _ = writeln!(
            svg,
            "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"end\">{acc:.1}</text>",
            LEFT - 6.0,
            y + 4.0
        );
    }
    for i in 0..=5 {
        let ratio = frame.x_min + (frame.x_max - frame.x_min) * f64::from(i) / 5.0;
        let x = frame.x(ratio);
        let _ = writeln!(
            svg,
            "<line x1=\"{x:.1}\" y1=\"{:.1}\" x2=\"{x:.1}\" y2=\"{:.1}\" stroke=\"#999\"/>",
            HEIGHT - BOTTOM,
            HEIGHT - BOTTOM + 5.0
        );
        let _ = writeln!(
            svg,
            "<text x=\"{x:.1}\" y=\"{:.1}\" text-anchor=\"middle\">{ratio:.2}</text>",
            HEIGHT - BOTTOM + 18.0
        );
    }
    let _ = writeln!(
        svg,
        "<rect x=\"{LEFT}\" y=\"{TOP}\" width=\"{:.1}\" height=\"{:.1}\" \
         fill=\"none\" stroke=\"#333\"/>",
        WIDTH - LEFT - RIGHT,
        HEIGHT - TOP - BOTTOM
    );
    let _ = writeln!(
        svg,
        "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\">ratio</text>",
        LEFT + (WIDTH - LEFT - RIGHT) / 2.0,
        HEIGHT - 6.0
    );
    let _ = writeln!(
        svg,
        "<text x=\"14\" y=\"{:.1}\" text-anchor=\"middle\" \
         transform=\"rotate(-90 14 {:.1})\">accuracy</text>",
        TOP + (HEIGHT - TOP - BOTTOM) / 2.0,
        TOP + (HEIGHT - TOP - BOTTOM) / 2.0
    );

    // 75% guide.
    let y75 = frame.y(0.75);
    let _ = writeln!(
        svg,
        "<line x1=\"{LEFT}\" y1=\"{y75:.1}\" x2=\"{:.1}\" y2=\"{y75:.1}\" \
         stroke=\"#666\" stroke-width=\"1\"/>",
        WIDTH - RIGHT
    );

    for (index, (key, points)) in curves.iter().enumerate() {
        let color = COLORS[index % COLORS.len()];
        let label = format!("{}/{}", key.train, key.mode);

        if let Some(summary) = fits.get(&label) {
            let mut path = String::new();
            for step in 0..=120 {
                let ratio =
                    frame.x_min + (frame.x_max - frame.x_min) * f64::from(step) / 120.0;
                let acc = if ratio > 1.0 {
                    ans_accuracy(ratio, summary.w)
                } else {
                    0.5
                };
                let _ = write!(
                    path,
                    "{}{:.1},{:.1}",
                    if step == 0 { "" } else { " " },
                    frame.x(ratio),
                    frame.y(acc)
                );
            }
            let _ = writeln!(
                svg,
                "<polyline points=\"{path}\" fill=\"none\" stroke=\"{color}\" \
                 stroke-width=\"1.2\" opacity=\"0.55\"/>"
            );
            if summary.threshold_75.is_finite() && summary.threshold_75 <= frame.x_max {
                let x = frame.x(summary.threshold_75);
                let _ = writeln!(
                    svg,
                    "<line class=\"threshold\" x1=\"{x:.1}\" y1=\"{y75:.1}\" \
                     x2=\"{x:.1}\" y2=\"{:.1}\" stroke=\"{color}\" \
                     stroke-dasharray=\"2 3\"/>",
                    HEIGHT - BOTTOM
                );
            }
        }

        let path: Vec<String> = points
            .iter()
            .map(|p| format!("{:.1},{:.1}", frame.x(p.ratio), frame.y(p.accuracy.max(0.5))))
            .collect();
        let _ = writeln!(
            svg,
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"2\"/>",
            path.join(" ")
        );
        for p in points {
            let _ = writeln!(
                svg,
                "<circle cx=\"{:.1}\" cy=\"{:.1}\" r=\"3\" fill=\"{color}\"/>",
                frame.x(p.ratio),
                frame.y(p.accuracy.max(0.5))
            );
        }

        let legend_y = TOP + 16.0 + 16.0 * index as f64;
        let legend_x = WIDTH - RIGHT - 190.0;
        let _ = writeln!(
            svg,
            "<rect x=\"{legend_x:.1}\" y=\"{:.1}\" width=\"10\" height=\"10\" fill=\"{color}\"/>",
            legend_y - 9.0
        );
        let text = match fits.get(&label) {
            Some(summary) => format!("{label}  w = {:.3}", summary.w),
            None => label.clone(),
        };
        let _ = writeln!(
            svg,
            "<text x=\"{:.1}\" y=\"{legend_y:.1}\">{}</text>",
            legend_x + 14.0,
            escape(&text)
        );
    }

    svg.push_str("</svg>\n");
    svg
}
