//! Static, script-free SVG charts. Output depends only on the input values,
//! so identical inputs render to identical bytes.

use std::fmt::Write;

use crate::model::Task;
use crate::pr::PrCurve;
use crate::sweep::{Metric, MetricLandscape};

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 600.0;
const TOP: f64 = 50.0;
const BOTTOM: f64 = 440.0;

const ACTION_COLORS: [&str; 4] = ["#1f4e9c", "#4f8fd6", "#0b7fa8", "#7aa6e0"];
const REASON_COLORS: [&str; 7] = [
    "#b2182b", "#e8604f", "#8c1d40", "#f08a7a", "#c8443a", "#7a0f1a", "#f2a490",
];

fn metric_color(m: Metric) -> &'static str {
    match m {
        Metric::ActionOverall => "#1f4e9c",
        Metric::ActionMean => "#6fa3e8",
        Metric::ReasonOverall => "#b2182b",
        Metric::ReasonMean => "#f08a7a",
    }
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

struct Canvas {
    out: String,
}

impl Canvas {
    fn new(title: &str) -> Self {
        let mut out = String::new();
        writeln!(
            out,
            r##"<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">
<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="#ffffff"/>
<text x="{:.2}" y="28" text-anchor="middle" font-size="15">{}</text>"##,
            (LEFT + RIGHT) / 2.0,
            escape(title)
        )
        .unwrap();
        Self { out }
    }

    fn axes(&mut self, x_label: &str, y_label: &str, x_ticks: &[(f64, String)], y_ticks: &[(f64, String)]) {
        let o = &mut self.out;
        writeln!(
            o,
            r##"<g class="axes" stroke="#333333" stroke-width="1">
<line x1="{LEFT}" y1="{BOTTOM}" x2="{RIGHT}" y2="{BOTTOM}"/>
<line x1="{LEFT}" y1="{TOP}" x2="{LEFT}" y2="{BOTTOM}"/>
</g>"##
        )
        .unwrap();
        for (x, label) in x_ticks {
            writeln!(
                o,
                r##"<line x1="{x:.2}" y1="{BOTTOM}" x2="{x:.2}" y2="{:.2}" stroke="#333333"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"##,
                BOTTOM + 5.0,
                BOTTOM + 20.0,
                escape(label)
            )
            .unwrap();
        }
        for (y, label) in y_ticks {
            writeln!(
                o,
                r##"<line x1="{LEFT}" y1="{y:.2}" x2="{RIGHT}" y2="{y:.2}" stroke="#e5e5e5"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"##,
                LEFT - 8.0,
                y + 4.0,
                escape(label)
            )
            .unwrap();
        }
        writeln!(
            o,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>
<text x="20" y="{:.2}" text-anchor="middle" transform="rotate(-90 20 {:.2})">{}</text>"#,
            (LEFT + RIGHT) / 2.0,
            BOTTOM + 45.0,
            escape(x_label),
            (TOP + BOTTOM) / 2.0,
            (TOP + BOTTOM) / 2.0,
            escape(y_label)
        )
        .unwrap();
    }

    fn legend_entry(&mut self, row: usize, color: &str, label: &str) {
        let y = TOP + 10.0 + row as f64 * 16.0;
        writeln!(
            self.out,
            r#"<line x1="{:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="{color}" stroke-width="3"/><text x="{:.2}" y="{:.2}">{}</text>"#,
            RIGHT + 15.0,
            RIGHT + 35.0,
            RIGHT + 40.0,
            y + 4.0,
            escape(label)
        )
        .unwrap();
    }

    fn finish(mut self) -> String {
        self.out.push_str("</svg>\n");
        self.out
    }
}

fn y_of(fraction: f64) -> f64 {
    BOTTOM - fraction.clamp(0.0, 1.0) * (BOTTOM - TOP)
}

fn fraction_ticks(percent: bool) -> Vec<(f64, String)> {
    (0..=5)
        .map(|k| {
            let f = k as f64 / 5.0;
            let label = if percent {
                format!("{}", k * 20)
            } else {
                format!("{f:.1}")
            };
            (y_of(f), label)
        })
        .collect()
}

/// Four series (action overall/mean, reason overall/mean) of F1 in percent
/// against the shared threshold.
pub fn render_landscape_svg(ls: &MetricLandscape) -> String {
    let grid = ls.grid();
    let (lo, hi) = (grid[0], grid[grid.len() - 1]);
    let x_of = |t: f64| {
        if hi > lo {
            LEFT + (t - lo) / (hi - lo) * (RIGHT - LEFT)
        } else {
            (LEFT + RIGHT) / 2.0
        }
    };

    let mut c = Canvas::new("F1 versus confidence threshold");
    let x_ticks: Vec<(f64, String)> = grid.iter().map(|&t| (x_of(t), format!("{t}"))).collect();
    c.axes("Confidence threshold", "F1 (%)", &x_ticks, &fraction_ticks(true));

    for (row, metric) in Metric::ALL.into_iter().enumerate() {
        let color = metric_color(metric);
        let values = ls.profile(metric);
        let points: Vec<String> = grid
            .iter()
            .zip(&values)
            .map(|(&t, &v)| format!("{:.2},{:.2}", x_of(t), y_of(v)))
            .collect();
        let dash = if matches!(metric, Metric::ActionMean | Metric::ReasonMean) {
            r#" stroke-dasharray="6 4""#
        } else {
            ""
        };
        writeln!(
            c.out,
            r#"<g class="series" data-metric="{}">
<polyline fill="none" stroke="{color}" stroke-width="2"{dash} points="{}"/>"#,
            metric.key(),
            points.join(" ")
        )
        .unwrap();
        for (&t, &v) in grid.iter().zip(&values) {
            writeln!(
                c.out,
                r#"<circle class="vertex" cx="{:.2}" cy="{:.2}" r="3" fill="{color}"><title>{} @ {t:.2}: {:.2}</title></circle>"#,
                x_of(t),
                y_of(v),
                metric.label(),
                v * 100.0
            )
            .unwrap();
        }
        c.out.push_str("</g>\n");
        c.legend_entry(row, color, metric.label());
    }
    c.finish()
}

/// Precision against recall, one polyline per class, with one marker circle
/// per grid threshold.
pub fn render_pr_svg(curves: &[PrCurve]) -> String {
    let x_of = |r: f64| LEFT + r.clamp(0.0, 1.0) * (RIGHT - LEFT);
    let title = match curves.first().map(|c| c.task) {
        Some(Task::Action) => "Precision-recall: action classes",
        Some(Task::Reason) => "Precision-recall: reason classes",
        None => "Precision-recall",
    };
    let mut c = Canvas::new(title);
    let x_ticks: Vec<(f64, String)> = (0..=5)
        .map(|k| {
            let f = k as f64 / 5.0;
            (x_of(f), format!("{f:.1}"))
        })
        .collect();
    c.axes("Recall", "Precision", &x_ticks, &fraction_ticks(false));

    for (row, curve) in curves.iter().enumerate() {
        let palette: &[&str] = match curve.task {
            Task::Action => &ACTION_COLORS,
            Task::Reason => &REASON_COLORS,
        };
        let color = palette[curve.class_index % palette.len()];
        let points: Vec<String> = curve
            .fine_points()
            .map(|p| format!("{:.2},{:.2}", x_of(p.recall), y_of(p.precision)))
            .collect();
        writeln!(
            c.out,
            r#"<g class="curve" data-task="{}" data-class="{}">
<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            curve.task,
            curve.class_index,
            points.join(" ")
        )
        .unwrap();
        for m in curve.markers() {
            writeln!(
                c.out,
                r##"<circle class="grid-marker" cx="{:.2}" cy="{:.2}" r="3.5" fill="{color}" stroke="#000000" stroke-width="0.5"><title>threshold {:.2}: P={:.3} R={:.3}</title></circle>"##,
                x_of(m.recall),
                y_of(m.precision),
                m.threshold,
                m.precision,
                m.recall
            )
            .unwrap();
        }
        c.out.push_str("</g>\n");
        let ap = match curve.average_precision {
            Some(ap) => format!("AP {ap:.3}"),
            None => "AP n/a".to_string(),
        };
        c.legend_entry(row, color, &format!("{} ({ap})", curve.class_name));
    }
    c.finish()
}
