//! Dependency-free SVG plot rendering.
//!
//! Growth plots follow the legend convention used throughout: observed
//! counts dotted, model-interpolated values solid, extrapolated values
//! dashed. Output is deterministic for identical input.

use crate::diversity::CurveKind;
use crate::error::{Error, Result};
use crate::report::{density_curves, ComplexityReport, CorpusBlock};

/// Which corpus of a comparison report a plot refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusSide {
    A,
    B,
}

/// Plot selector for [`render_svg`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotKind {
    /// Vocabulary growth (V, V1, V2) for one corpus.
    Growth(CorpusSide),
    /// KDE overlay of per-segment TTR values.
    TtrDensity,
    /// KDE overlay of per-sample Flesch Reading Ease values.
    FleschDensity,
    /// D-level histogram.
    DlevelHistogram,
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const MARGIN_LEFT: f64 = 80.0;
const MARGIN_RIGHT: f64 = 24.0;
const MARGIN_TOP: f64 = 44.0;
const MARGIN_BOTTOM: f64 = 56.0;

const SERIES_COLORS: [&str; 3] = ["#000000", "#1f77b4", "#2ca02c"];
const OVERLAY_COLORS: [&str; 2] = ["#1f77b4", "#d62728"];

const DASH_DOTTED: &str = "2,3";
const DASH_DASHED: &str = "7,4";

struct Frame {
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
}

impl Frame {
    fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Frame {
        let pad = |lo: &mut f64, hi: &mut f64| {
            if *hi <= *lo {
                *hi = *lo + 1.0;
            }
        };
        let (mut x0, mut x1, mut y0, mut y1) = (x_min, x_max, y_min, y_max);
        pad(&mut x0, &mut x1);
        pad(&mut y0, &mut y1);
        Frame {
            x_min: x0,
            x_max: x1,
            y_min: y0,
            y_max: y1,
        }
    }

    fn px(&self, x: f64) -> f64 {
        MARGIN_LEFT + (x - self.x_min) / (self.x_max - self.x_min) * (WIDTH - MARGIN_LEFT - MARGIN_RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - MARGIN_BOTTOM
            - (y - self.y_min) / (self.y_max - self.y_min) * (HEIGHT - MARGIN_TOP - MARGIN_BOTTOM)
    }
}

fn fmt_coord(v: f64) -> String {
    format!("{v:.2}")
}

fn fmt_tick(v: f64) -> String {
    if v.abs() >= 1000.0 {
        format!("{v:.0}")
    } else if v.abs() >= 1.0 {
        format!("{v:.2}")
    } else {
        format!("{v:.4}")
    }
}

fn svg_open(title: &str) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n\
         <rect x=\"0\" y=\"0\" width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"#ffffff\"/>\n\
         <text x=\"{:.2}\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\" text-anchor=\"middle\">{}</text>\n",
        WIDTH / 2.0,
        xml_escape(title)
    )
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn axes(frame: &Frame, x_label: &str, y_label: &str) -> String {
    let mut out = String::new();
    let x0 = MARGIN_LEFT;
    let x1 = WIDTH - MARGIN_RIGHT;
    let y0 = HEIGHT - MARGIN_BOTTOM;
    let y1 = MARGIN_TOP;
    out.push_str(&format!(
        "<line x1=\"{x0:.2}\" y1=\"{y0:.2}\" x2=\"{x1:.2}\" y2=\"{y0:.2}\" stroke=\"#333333\" stroke-width=\"1\"/>\n\
         <line x1=\"{x0:.2}\" y1=\"{y0:.2}\" x2=\"{x0:.2}\" y2=\"{y1:.2}\" stroke=\"#333333\" stroke-width=\"1\"/>\n"
    ));
    for i in 0..=4 {
        let t = i as f64 / 4.0;
        let xv = frame.x_min + t * (frame.x_max - frame.x_min);
        let yv = frame.y_min + t * (frame.y_max - frame.y_min);
        let xp = frame.px(xv);
        let yp = frame.py(yv);
        out.push_str(&format!(
            "<line x1=\"{xp:.2}\" y1=\"{y0:.2}\" x2=\"{xp:.2}\" y2=\"{:.2}\" stroke=\"#333333\" stroke-width=\"1\"/>\n",
            y0 + 5.0
        ));
        out.push_str(&format!(
            "<text x=\"{xp:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">{}</text>\n",
            y0 + 18.0,
            fmt_tick(xv)
        ));
        out.push_str(&format!(
            "<line x1=\"{:.2}\" y1=\"{yp:.2}\" x2=\"{x0:.2}\" y2=\"{yp:.2}\" stroke=\"#333333\" stroke-width=\"1\"/>\n",
            x0 - 5.0
        ));
        out.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">{}</text>\n",
            x0 - 8.0,
            yp + 4.0,
            fmt_tick(yv)
        ));
    }
    out.push_str(&format!(
        "<text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">{}</text>\n",
        (x0 + x1) / 2.0,
        HEIGHT - 12.0,
        xml_escape(x_label)
    ));
    out.push_str(&format!(
        "<text x=\"18\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 18 {:.2})\">{}</text>\n",
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0,
        xml_escape(y_label)
    ));
    out
}

fn polyline(points: &[(f64, f64)], frame: &Frame, color: &str, dash: Option<&str>) -> String {
    let mut d = String::new();
    for (i, (x, y)) in points.iter().enumerate() {
        if i > 0 {
            d.push(' ');
        }
        d.push_str(&format!("{},{}", fmt_coord(frame.px(*x)), fmt_coord(frame.py(*y))));
    }
    let dash_attr = dash
        .map(|v| format!(" stroke-dasharray=\"{v}\""))
        .unwrap_or_default();
    format!(
        "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"{dash_attr} points=\"{d}\"/>\n"
    )
}

fn legend_entry(x: f64, y: f64, color: &str, dash: Option<&str>, label: &str) -> String {
    let dash_attr = dash
        .map(|v| format!(" stroke-dasharray=\"{v}\""))
        .unwrap_or_default();
    format!(
        "<line x1=\"{x:.2}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" stroke=\"{color}\" stroke-width=\"1.5\"{dash_attr}/>\n\
         <text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"12\">{}</text>\n",
        x + 28.0,
        x + 34.0,
        y + 4.0,
        xml_escape(label)
    )
}

/// Renders one plot from the report as an SVG 1.1 document.
pub fn render_svg(report: &ComplexityReport, kind: PlotKind) -> Result<String> {
    match kind {
        PlotKind::Growth(side) => render_growth(report, side),
        PlotKind::TtrDensity | PlotKind::FleschDensity => render_density(report, kind),
        PlotKind::DlevelHistogram => render_dlevel(report),
    }
}

fn render_growth(report: &ComplexityReport, side: CorpusSide) -> Result<String> {
    let block: &CorpusBlock = report
        .block(side)
        .ok_or_else(|| Error::Render(format!("corpus {side:?} block")))?;
    let growth = block
        .growth
        .value()
        .ok_or_else(|| Error::Render(format!("growth series for {}", block.name)))?;
    Ok(render_growth_block(&block.name, growth))
}

/// Renders a growth block on its own (used by model fitting, where no full
/// report exists). Curves with fewer than two checkpoints are skipped.
pub fn render_growth_block(name: &str, growth: &crate::report::GrowthBlock) -> String {
    let mut x_max = 0f64;
    let mut y_max = 0f64;
    let mut all_curves = vec![&growth.observed];
    all_curves.extend(growth.expected.iter());
    for curve in &all_curves {
        for p in &curve.checkpoints {
            x_max = x_max.max(p.n as f64);
            y_max = y_max.max(p.v);
        }
    }
    let frame = Frame::new(0.0, x_max, 0.0, y_max * 1.05);

    let mut out = svg_open(&format!("Vocabulary growth: {name}"));
    out.push_str(&axes(&frame, "tokens N", "types"));
    for curve in &all_curves {
        let dash = match curve.kind {
            CurveKind::Observed => Some(DASH_DOTTED),
            CurveKind::Interpolated => None,
            CurveKind::Extrapolated => Some(DASH_DASHED),
        };
        for (series_idx, extract) in [
            (0usize, (|p: &crate::diversity::GrowthPoint| p.v) as fn(&crate::diversity::GrowthPoint) -> f64),
            (1, |p| p.v1),
            (2, |p| p.v2),
        ] {
            let pts: Vec<(f64, f64)> = curve
                .checkpoints
                .iter()
                .map(|p| (p.n as f64, extract(p)))
                .collect();
            if pts.len() >= 2 {
                out.push_str(&polyline(&pts, &frame, SERIES_COLORS[series_idx], dash));
            }
        }
    }
    let lx = MARGIN_LEFT + 12.0;
    out.push_str(&legend_entry(lx, MARGIN_TOP + 10.0, "#000000", Some(DASH_DOTTED), "observed (dotted)"));
    out.push_str(&legend_entry(lx, MARGIN_TOP + 28.0, "#000000", None, "interpolated (solid)"));
    out.push_str(&legend_entry(lx, MARGIN_TOP + 46.0, "#000000", Some(DASH_DASHED), "extrapolated (dashed)"));
    out.push_str(&legend_entry(lx, MARGIN_TOP + 64.0, SERIES_COLORS[0], None, "V"));
    out.push_str(&legend_entry(lx, MARGIN_TOP + 82.0, SERIES_COLORS[1], None, "V1 (hapaxes)"));
    out.push_str(&legend_entry(lx, MARGIN_TOP + 100.0, SERIES_COLORS[2], None, "V2"));
    out.push_str("</svg>\n");
    out
}

fn render_density(report: &ComplexityReport, kind: PlotKind) -> Result<String> {
    let curves = density_curves(report, kind)?;
    let title = match kind {
        PlotKind::TtrDensity => "TTR density over segments",
        PlotKind::FleschDensity => "Flesch Reading Ease density over samples",
        _ => unreachable!(),
    };
    let mut x_min = f64::INFINITY;
    let mut x_max = f64::NEG_INFINITY;
    let mut y_max = 0f64;
    for (_, c) in &curves {
        for &(x, d) in &c.points {
            x_min = x_min.min(x);
            x_max = x_max.max(x);
            y_max = y_max.max(d);
        }
    }
    let frame = Frame::new(x_min, x_max, 0.0, y_max * 1.05);
    let mut out = svg_open(title);
    out.push_str(&axes(&frame, "value", "density"));
    for (i, (name, c)) in curves.iter().enumerate() {
        let color = OVERLAY_COLORS[i % OVERLAY_COLORS.len()];
        out.push_str(&polyline(&c.points, &frame, color, None));
        out.push_str(&legend_entry(
            MARGIN_LEFT + 12.0,
            MARGIN_TOP + 10.0 + 18.0 * i as f64,
            color,
            None,
            name,
        ));
    }
    out.push_str("</svg>\n");
    Ok(out)
}

fn render_dlevel(report: &ComplexityReport) -> Result<String> {
    let block = [Some(&report.corpus_a), report.corpus_b.as_ref()]
        .into_iter()
        .flatten()
        .find(|b| b.dlevel.is_some())
        .ok_or_else(|| Error::Render("dlevel distribution".into()))?;
    let dist = block.dlevel.as_ref().unwrap();
    let y_max = dist.counts.iter().copied().max().unwrap_or(1).max(1) as f64;
    let frame = Frame::new(-0.5, 7.5, 0.0, y_max * 1.1);
    let mut out = svg_open(&format!("D-level distribution: {}", block.name));
    out.push_str(&axes(&frame, "level", "sentences"));
    for (level, &count) in dist.counts.iter().enumerate() {
        let x0 = frame.px(level as f64 - 0.35);
        let x1 = frame.px(level as f64 + 0.35);
        let y0 = frame.py(0.0);
        let y1 = frame.py(count as f64);
        out.push_str(&format!(
            "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"#1f77b4\" stroke=\"#333333\" stroke-width=\"0.5\"/>\n",
            x0,
            y1,
            x1 - x0,
            (y0 - y1).max(0.0)
        ));
    }
    out.push_str("</svg>\n");
    Ok(out)
}
