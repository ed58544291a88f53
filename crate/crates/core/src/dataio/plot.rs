use std::fmt::Write as _;
use std::path::Path;

use super::format::format_float;
use super::{write_file, DataIoError};

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

impl Series {
    pub fn new(label: impl Into<String>, points: Vec<(f64, f64)>) -> Self {
        Self {
            label: label.into(),
            points,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Axes {
    pub x_log: bool,
    pub y_log: bool,
    pub x_label: String,
    pub y_label: String,
}

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 170.0;
const TOP: f64 = 24.0;
const BOTTOM: f64 = 56.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

fn check(series: &[Series]) -> Result<(), DataIoError> {
    if series.is_empty() || series.iter().any(|s| s.points.len() < 2) {
        return Err(DataIoError::EmptySeries);
    }
    Ok(())
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Axis value in plot space, or `None` when it cannot be drawn.
fn project(v: f64, log: bool) -> Option<f64> {
    match (v.is_finite(), log) {
        (false, _) => None,
        (true, true) if v > 0.0 => Some(v.log10()),
        (true, true) => None,
        (true, false) => Some(v),
    }
}

fn padded_range(lo: f64, hi: f64) -> (f64, f64) {
    if !(lo.is_finite() && hi.is_finite()) {
        (0.0, 1.0)
    } else if hi - lo <= f64::EPSILON * hi.abs().max(lo.abs()).max(1e-300) {
        let pad = if lo == 0.0 { 1.0 } else { 0.5 * lo.abs() };
        (lo - pad, hi + pad)
    } else {
        (lo, hi)
    }
}

fn tick_label(v: f64, log: bool) -> String {
    if log {
        let rounded = v.round();
        if (v - rounded).abs() < 1e-9 {
            return format!("1e{}", rounded as i64);
        }
        return format!("{:.3e}", 10f64.powf(v));
    }
    if v == 0.0 {
        "0".to_string()
    } else if (1e-3..1e4).contains(&v.abs()) {
        let s = format!("{v:.4}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        format!("{v:.2e}")
    }
}

fn ticks(lo: f64, hi: f64, log: bool) -> Vec<f64> {
    if log && hi - lo >= 1.0 {
        let (a, b) = (lo.ceil() as i64, hi.floor() as i64);
        let step = ((b - a) / 8 + 1).max(1);
        return (a..=b).step_by(step as usize).map(|k| k as f64).collect();
    }
    (0..=4).map(|i| lo + (hi - lo) * i as f64 / 4.0).collect()
}

/// Self-contained SVG line chart.
pub fn render_svg(series: &[Series], axes: &Axes) -> Result<String, DataIoError> {
    check(series)?;
    let mut dropped = 0usize;
    let projected: Vec<Vec<(f64, f64)>> = series
        .iter()
        .map(|s| {
            s.points
                .iter()
                .filter_map(|&(x, y)| {
                    let p = project(x, axes.x_log).zip(project(y, axes.y_log));
                    dropped += usize::from(p.is_none());
                    p
                })
                .collect()
        })
        .collect();

    let all = projected.iter().flatten();
    let (mut x0, mut x1, mut y0, mut y1) = (
        f64::INFINITY,
        f64::NEG_INFINITY,
        f64::INFINITY,
        f64::NEG_INFINITY,
    );
    for &(x, y) in all {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    let (x0, x1) = padded_range(x0, x1);
    let (y0, y1) = padded_range(y0, y1);
    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| TOP + (y1 - y) / (y1 - y0) * ph;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"sans-serif\" font-size=\"11\">"
    );
    if axes.x_log || axes.y_log {
        let _ = writeln!(
            svg,
            "<!-- dropped {dropped} points with non-positive values on a log axis -->"
        );
    } else if dropped > 0 {
        let _ = writeln!(svg, "<!-- dropped {dropped} non-finite points -->");
    }
    let _ = writeln!(
        svg,
        "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>"
    );
    let _ = writeln!(
        svg,
        "<rect x=\"{LEFT}\" y=\"{TOP}\" width=\"{pw}\" height=\"{ph}\" fill=\"none\" stroke=\"black\"/>"
    );
    for t in ticks(x0, x1, axes.x_log) {
        let x = sx(t);
        let _ = writeln!(
            svg,
            "<line x1=\"{x:.2}\" y1=\"{:.2}\" x2=\"{x:.2}\" y2=\"{:.2}\" stroke=\"black\"/><text x=\"{x:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{}</text>",
            TOP + ph,
            TOP + ph + 5.0,
            TOP + ph + 18.0,
            escape(&tick_label(t, axes.x_log))
        );
    }
    for t in ticks(y0, y1, axes.y_log) {
        let y = sy(t);
        let _ = writeln!(
            svg,
            "<line x1=\"{:.2}\" y1=\"{y:.2}\" x2=\"{LEFT}\" y2=\"{y:.2}\" stroke=\"black\"/><text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\">{}</text>",
            LEFT - 5.0,
            LEFT - 8.0,
            y + 4.0,
            escape(&tick_label(t, axes.y_log))
        );
    }
    let _ = writeln!(
        svg,
        "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{}</text>",
        LEFT + pw / 2.0,
        HEIGHT - 12.0,
        escape(&axes.x_label)
    );
    let _ = writeln!(
        svg,
        "<text transform=\"translate(16 {:.2}) rotate(-90)\" text-anchor=\"middle\">{}</text>",
        TOP + ph / 2.0,
        escape(&axes.y_label)
    );
    for (i, (s, pts)) in series.iter().zip(&projected).enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        if !pts.is_empty() {
            let coords: Vec<String> = pts
                .iter()
                .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
                .collect();
            let _ = writeln!(
                svg,
                "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>",
                coords.join(" ")
            );
        }
        let ly = TOP + 14.0 + 18.0 * i as f64;
        let lx = WIDTH - RIGHT + 12.0;
        let _ = writeln!(
            svg,
            "<line x1=\"{lx:.2}\" y1=\"{ly:.2}\" x2=\"{:.2}\" y2=\"{ly:.2}\" stroke=\"{color}\" stroke-width=\"2\"/><text x=\"{:.2}\" y=\"{:.2}\">{}</text>",
            lx + 20.0,
            lx + 26.0,
            ly + 4.0,
            escape(&s.label)
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

/// Long-format `series,x,y` table with every input point at full precision.
fn render_csv(series: &[Series]) -> String {
    let mut out = String::from("series,x,y\n");
    for s in series {
        let label = csv_field(&s.label);
        for &(x, y) in &s.points {
            let _ = writeln!(out, "{label},{},{}", format_float(x), format_float(y));
        }
    }
    out
}

/// Write `path` (SVG) and the same path with a `.csv` extension.
pub fn emit_plot(series: &[Series], axes: &Axes, path: &Path) -> Result<(), DataIoError> {
    let svg = render_svg(series, axes)?;
    write_file(path, &svg)?;
    write_file(&path.with_extension("csv"), &render_csv(series))
}
