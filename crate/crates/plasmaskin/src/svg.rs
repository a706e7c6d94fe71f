//! Standalone SVG line charts for sweep records, no external renderer.
//!
//! Records are grouped into one curve per `(epsilon, v_c)` pair, so the
//! figure families produced by sweeping one parameter at several values of
//! the other drop straight onto one canvas.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use crate::io::IoError;
use crate::record::ImpedanceRecord;
use crate::sweep::unwrapped_args;

/// Which quantity the chart plots.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    /// `|Z0|`.
    Abs,
    /// `Re(-Z0)`.
    ReNeg,
    /// Unwrapped `arg Z0`.
    Arg,
}

impl Quantity {
    fn axis_label(self) -> &'static str {
        match self {
            Self::Abs => "|Z0|",
            Self::ReNeg => "Re(-Z0)",
            Self::Arg => "arg Z0 (rad)",
        }
    }
}

impl FromStr for Quantity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "abs" => Ok(Self::Abs),
            "re_neg" => Ok(Self::ReNeg),
            "arg" => Ok(Self::Arg),
            other => Err(format!(
                "unknown quantity {other:?}; expected abs, re_neg or arg"
            )),
        }
    }
}

const WIDTH: f64 = 840.0;
const HEIGHT: f64 = 600.0;
const MARGIN_LEFT: f64 = 78.0;
const MARGIN_RIGHT: f64 = 24.0;
const MARGIN_TOP: f64 = 24.0;
const MARGIN_BOTTOM: f64 = 56.0;

const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
];

struct Curve {
    label: String,
    points: Vec<(f64, f64)>,
}

/// Renders one quantity of a record list as an SVG 1.1 document.
///
/// Under `log_y`, non-positive values cannot be placed and are dropped; the
/// number of dropped points is recorded in a comment inside the document.
pub fn render_svg(
    records: &[ImpedanceRecord],
    quantity: Quantity,
    log_y: bool,
    path: &Path,
) -> Result<(), IoError> {
    if records.is_empty() {
        return Err(IoError::EmptyRecords);
    }

    // Group into curves by (epsilon, v_c), keeping first-seen order.
    let mut groups: Vec<((u64, u64), Vec<ImpedanceRecord>)> = Vec::new();
    for r in records {
        let key = (r.epsilon.to_bits(), r.v_c.to_bits());
        match groups.iter_mut().find(|(k, _)| *k == key) {
            Some((_, bucket)) => bucket.push(*r),
            None => groups.push((key, vec![*r])),
        }
    }

    let mut dropped = 0usize;
    let mut curves: Vec<Curve> = Vec::new();
    for (_, bucket) in &groups {
        let ys: Vec<f64> = match quantity {
            Quantity::Abs => bucket.iter().map(|r| r.abs_z0).collect(),
            Quantity::ReNeg => bucket.iter().map(|r| -r.re_z0).collect(),
            Quantity::Arg => unwrapped_args(bucket),
        };
        let mut points = Vec::with_capacity(bucket.len());
        for (r, y) in bucket.iter().zip(ys) {
            if log_y && y <= 0.0 {
                dropped += 1;
                continue;
            }
            let y = if log_y { y.log10() } else { y };
            points.push((r.gamma, y));
        }
        curves.push(Curve {
            label: format!("eps={:e}, v_c={:e}", bucket[0].epsilon, bucket[0].v_c),
            points,
        });
    }

    let kept: Vec<(f64, f64)> = curves
        .iter()
        .flat_map(|c| c.points.iter().copied())
        .collect();
    let (x_min, x_max) = bounds(kept.iter().map(|p| p.0));
    let (y_min, y_max) = bounds(kept.iter().map(|p| p.1));
    let x_span = pad_span(x_min, x_max);
    let y_span = pad_span(y_min, y_max);

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let to_px = |x: f64, y: f64| {
        (
            MARGIN_LEFT + (x - x_span.0) / (x_span.1 - x_span.0) * plot_w,
            MARGIN_TOP + (1.0 - (y - y_span.0) / (y_span.1 - y_span.0)) * plot_h,
        )
    };

    let mut svg = String::with_capacity(16 * 1024);
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{WIDTH}\" \
         height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">"
    );
    if dropped > 0 {
        let _ = writeln!(
            svg,
            "<!-- dropped {dropped} non-positive point(s) under log scale -->"
        );
    }
    let _ = writeln!(
        svg,
        "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>"
    );

    // Axes.
    let (x0, y0) = (MARGIN_LEFT, MARGIN_TOP + plot_h);
    let _ = writeln!(
        svg,
        "<line x1=\"{x0}\" y1=\"{y0}\" x2=\"{}\" y2=\"{y0}\" stroke=\"black\"/>",
        MARGIN_LEFT + plot_w
    );
    let _ = writeln!(
        svg,
        "<line x1=\"{x0}\" y1=\"{y0}\" x2=\"{x0}\" y2=\"{MARGIN_TOP}\" stroke=\"black\"/>"
    );

    // X ticks.
    for i in 0..=6 {
        let x = x_span.0 + (x_span.1 - x_span.0) * i as f64 / 6.0;
        let (px, _) = to_px(x, y_span.0);
        let _ = writeln!(
            svg,
            "<line x1=\"{px:.2}\" y1=\"{y0}\" x2=\"{px:.2}\" y2=\"{}\" stroke=\"black\"/>",
            y0 + 6.0
        );
        let _ = writeln!(
            svg,
            "<text x=\"{px:.2}\" y=\"{}\" font-size=\"13\" text-anchor=\"middle\">{x:.3}</text>",
            y0 + 22.0
        );
    }

    // Y ticks: decades under log, uniform otherwise.
    let y_ticks: Vec<(f64, String)> = if log_y {
        let lo = y_span.0.floor() as i64;
        let hi = y_span.1.ceil() as i64;
        let step = (((hi - lo) as usize / 8) + 1) as i64;
        (lo..=hi)
            .step_by(step as usize)
            .map(|d| (d as f64, format!("1e{d}")))
            .collect()
    } else {
        (0..=6)
            .map(|i| {
                let y = y_span.0 + (y_span.1 - y_span.0) * i as f64 / 6.0;
                (y, format!("{y:.3}"))
            })
            .collect()
    };
    for (y, label) in &y_ticks {
        if *y < y_span.0 || *y > y_span.1 {
            continue;
        }
        let (_, py) = to_px(x_span.0, *y);
        let _ = writeln!(
            svg,
            "<line x1=\"{}\" y1=\"{py:.2}\" x2=\"{x0}\" y2=\"{py:.2}\" stroke=\"black\"/>",
            x0 - 6.0
        );
        let _ = writeln!(
            svg,
            "<text x=\"{}\" y=\"{:.2}\" font-size=\"13\" text-anchor=\"end\">{label}</text>",
            x0 - 10.0,
            py + 4.0
        );
    }

    // Axis labels.
    let _ = writeln!(
        svg,
        "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"15\" text-anchor=\"middle\">gamma</text>",
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 12.0
    );
    let _ = writeln!(
        svg,
        "<text x=\"18\" y=\"{:.2}\" font-size=\"15\" text-anchor=\"middle\" \
         transform=\"rotate(-90 18 {:.2})\">{}{}</text>",
        MARGIN_TOP + plot_h / 2.0,
        MARGIN_TOP + plot_h / 2.0,
        if log_y { "log10 " } else { "" },
        quantity.axis_label()
    );

    // Curves and legend.
    for (i, curve) in curves.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        if !curve.points.is_empty() {
            let mut pts = String::new();
            for (x, y) in &curve.points {
                let (px, py) = to_px(*x, *y);
                let _ = write!(pts, "{px:.2},{py:.2} ");
            }
            let _ = writeln!(
                svg,
                "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.6\" \
                 points=\"{}\"/>",
                pts.trim_end()
            );
        }
        let ly = MARGIN_TOP + 18.0 + 18.0 * i as f64;
        let lx = MARGIN_LEFT + plot_w - 210.0;
        let _ = writeln!(
            svg,
            "<line x1=\"{lx}\" y1=\"{ly}\" x2=\"{}\" y2=\"{ly}\" stroke=\"{color}\" \
             stroke-width=\"1.6\"/>",
            lx + 26.0
        );
        let _ = writeln!(
            svg,
            "<text x=\"{}\" y=\"{}\" font-size=\"13\">{}</text>",
            lx + 32.0,
            ly + 4.0,
            curve.label
        );
    }

    let _ = writeln!(svg, "</svg>");
    std::fs::write(path, svg).map_err(|source| IoError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for v in values {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if lo.is_finite() && hi.is_finite() {
        (lo, hi)
    } else {
        (0.0, 1.0)
    }
}

fn pad_span(lo: f64, hi: f64) -> (f64, f64) {
    if lo == hi {
        (lo - 0.5, hi + 0.5)
    } else {
        let pad = 0.05 * (hi - lo);
        (lo - pad, hi + pad)
    }
}
