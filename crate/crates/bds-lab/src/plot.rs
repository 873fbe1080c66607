//! Pure-text SVG line plots over sweep CSV files. No external renderer:
//! the output is deterministic bytes built from the parsed columns.

use anyhow::{bail, ensure, Context, Result};
use serde::{Deserialize, Serialize};

use crate::io::Meta;

/// What to draw: one x column against one or more y columns, each as a
/// polyline path, optionally on log10 axes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlotSpec {
    pub x: String,
    pub ys: Vec<String>,
    pub logx: bool,
    pub logy: bool,
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 30.0;
const MARGIN_BOTTOM: f64 = 50.0;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

/// Parses a sweep-style CSV: `#` comment lines are skipped, the first
/// remaining line is the header, every cell must be numeric.
pub fn parse_csv(text: &str) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut lines = text.lines().filter(|l| !l.trim_start().starts_with('#') && !l.trim().is_empty());
    let header: Vec<String> = lines
        .next()
        .context("CSV has no header")?
        .split(',')
        .map(|c| c.trim().to_string())
        .collect();
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let row: Vec<f64> = line
            .split(',')
            .map(|c| {
                c.trim()
                    .parse::<f64>()
                    .with_context(|| format!("row {}: bad number {c:?}", i + 1))
            })
            .collect::<Result<_>>()?;
        ensure!(row.len() == header.len(), "row {} has {} cells, header has {}", i + 1, row.len(), header.len());
        rows.push(row);
    }
    Ok((header, rows))
}

struct Axis {
    min: f64,
    max: f64,
    log: bool,
}

impl Axis {
    fn new(values: impl Iterator<Item = f64>, log: bool) -> Result<Self> {
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for v in values {
            if log {
                ensure!(v > 0.0, "log axis requires positive values, got {v}");
            }
            let t = if log { v.log10() } else { v };
            min = min.min(t);
            max = max.max(t);
        }
        if !min.is_finite() {
            // no data: draw a unit box
            (min, max) = (0.0, 1.0);
        }
        if min == max {
            min -= 0.5;
            max += 0.5;
        }
        Ok(Self { min, max, log })
    }

    fn transform(&self, v: f64) -> f64 {
        let t = if self.log { v.log10() } else { v };
        (t - self.min) / (self.max - self.min)
    }

    fn tick_values(&self) -> Vec<f64> {
        (0..=4)
            .map(|i| {
                let t = self.min + (self.max - self.min) * i as f64 / 4.0;
                if self.log {
                    10f64.powf(t)
                } else {
                    t
                }
            })
            .collect()
    }
}

fn fmt_tick(v: f64) -> String {
    format!("{v:.4}")
}

/// Renders the plot; the meta comment on the second line carries the
/// reproducibility header.
pub fn render_svg(csv_text: &str, spec: &PlotSpec, meta: &Meta) -> Result<String> {
    let (header, rows) = parse_csv(csv_text)?;
    let col = |name: &str| -> Result<usize> {
        header
            .iter()
            .position(|h| h == name)
            .with_context(|| format!("column {name:?} not in CSV header {header:?}"))
    };
    let x_col = col(&spec.x)?;
    if spec.ys.is_empty() {
        bail!("select at least one y column");
    }
    let y_cols: Vec<usize> = spec.ys.iter().map(|y| col(y)).collect::<Result<_>>()?;

    let x_axis = Axis::new(rows.iter().map(|r| r[x_col]), spec.logx)?;
    let y_axis = Axis::new(
        rows.iter().flat_map(|r| y_cols.iter().map(move |&c| r[c])),
        spec.logy,
    )?;
    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let px = |v: f64| MARGIN_LEFT + x_axis.transform(v) * plot_w;
    let py = |v: f64| HEIGHT - MARGIN_BOTTOM - y_axis.transform(v) * plot_h;

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    svg.push_str(&format!(
        "<!-- {} plot v{} seed={} config_sha256={} -->\n",
        meta.tool, meta.version, meta.seed, meta.config_sha256
    ));
    svg.push_str(&format!(
        "<rect x=\"0\" y=\"0\" width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n"
    ));
    // axes
    svg.push_str(&format!(
        "<line x1=\"{MARGIN_LEFT}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n",
        HEIGHT - MARGIN_BOTTOM,
        WIDTH - MARGIN_RIGHT,
        HEIGHT - MARGIN_BOTTOM
    ));
    svg.push_str(&format!(
        "<line x1=\"{MARGIN_LEFT}\" y1=\"{MARGIN_TOP}\" x2=\"{MARGIN_LEFT}\" y2=\"{}\" stroke=\"black\"/>\n",
        HEIGHT - MARGIN_BOTTOM
    ));
    for v in x_axis.tick_values() {
        let x = px(v);
        svg.push_str(&format!(
            "<line x1=\"{x:.2}\" y1=\"{}\" x2=\"{x:.2}\" y2=\"{}\" stroke=\"black\"/>\n",
            HEIGHT - MARGIN_BOTTOM,
            HEIGHT - MARGIN_BOTTOM + 5.0
        ));
        svg.push_str(&format!(
            "<text x=\"{x:.2}\" y=\"{}\" font-size=\"11\" text-anchor=\"middle\">{}</text>\n",
            HEIGHT - MARGIN_BOTTOM + 18.0,
            fmt_tick(v)
        ));
    }
    for v in y_axis.tick_values() {
        let y = py(v);
        svg.push_str(&format!(
            "<line x1=\"{}\" y1=\"{y:.2}\" x2=\"{MARGIN_LEFT}\" y2=\"{y:.2}\" stroke=\"black\"/>\n",
            MARGIN_LEFT - 5.0
        ));
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{:.2}\" font-size=\"11\" text-anchor=\"end\">{}</text>\n",
            MARGIN_LEFT - 8.0,
            y + 4.0,
            fmt_tick(v)
        ));
    }
    // axis labels and title
    svg.push_str(&format!(
        "<text x=\"{:.2}\" y=\"{}\" font-size=\"13\" text-anchor=\"middle\">{}</text>\n",
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 12.0,
        spec.x
    ));
    svg.push_str(&format!(
        "<text x=\"{:.2}\" y=\"{}\" font-size=\"13\" text-anchor=\"middle\">{} vs {}</text>\n",
        MARGIN_LEFT + plot_w / 2.0,
        18.0,
        spec.ys.join(", "),
        spec.x
    ));
    // one path per series, rows in file order
    for (si, (&c, name)) in y_cols.iter().zip(&spec.ys).enumerate() {
        let color = PALETTE[si % PALETTE.len()];
        if !rows.is_empty() {
            let mut d = String::new();
            for (ri, row) in rows.iter().enumerate() {
                let cmd = if ri == 0 { 'M' } else { 'L' };
                d.push_str(&format!("{cmd}{:.2} {:.2} ", px(row[x_col]), py(row[c])));
            }
            svg.push_str(&format!(
                "<path d=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>\n",
                d.trim_end()
            ));
        }
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{:.2}\" font-size=\"11\" fill=\"{color}\">{name}</text>\n",
            WIDTH - MARGIN_RIGHT - 130.0,
            MARGIN_TOP + 14.0 * (si as f64 + 1.0)
        ));
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}
