//! Trace and reference CSV files, and static SVG plots.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use symform::{ReferenceState, SimulationTrace, SymmetryLaplacian};

use crate::error::CliError;

const AXES: [&str; 3] = ["x", "y", "z"];

/// Seventeen significant digits: enough to reproduce any `f64` exactly.
pub fn format_value(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn trace_header(q: &SymmetryLaplacian) -> Vec<String> {
    let (n, d) = (q.node_count(), q.dim());
    let mut header = vec!["t".to_string()];
    for i in 1..=n {
        for axis in AXES.iter().take(d) {
            header.push(format!("p{i}_{axis}"));
        }
    }
    header.extend(q.edges().iter().map(|e| format!("e{}_{}", e.u, e.v)));
    header.push("potential".into());
    header
}

fn write_rows<I>(path: &Path, header: &[String], rows: I) -> Result<(), CliError>
where
    I: Iterator<Item = Vec<f64>>,
{
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_error(path, e))?;
    w.write_record(header).map_err(|e| csv_error(path, e))?;
    for row in rows {
        w.write_record(row.into_iter().map(format_value))
            .map_err(|e| csv_error(path, e))?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

fn csv_error(path: &Path, e: csv::Error) -> CliError {
    CliError::io(path, std::io::Error::other(e))
}

pub fn trace_rows(trace: &SimulationTrace) -> impl Iterator<Item = Vec<f64>> + '_ {
    (0..trace.len()).map(move |k| {
        let mut row = Vec::with_capacity(2 + trace.states[k].as_vector().len() + trace.edge_errors[k].len());
        row.push(trace.times[k]);
        row.extend(trace.states[k].as_vector().iter());
        row.extend(&trace.edge_errors[k]);
        row.push(trace.potentials[k]);
        row
    })
}

/// Columns: `t`, agent coordinates, per-edge error norms, potential.
pub fn write_trace_csv(path: &Path, trace: &SimulationTrace, q: &SymmetryLaplacian) -> Result<(), CliError> {
    write_rows(path, &trace_header(q), trace_rows(trace))
}

/// Columns: `t`, `r_*`, the frame (`angle` in the plane, row-major `R_ij` in 3-D), `s`.
pub fn write_reference_csv(path: &Path, reference: &[ReferenceState]) -> Result<(), CliError> {
    let d = reference.first().map_or(2, ReferenceState::dim);
    let mut header = vec!["t".to_string()];
    header.extend(AXES.iter().take(d).map(|a| format!("r_{a}")));
    if d == 2 {
        header.push("angle".into());
    } else {
        for i in 1..=3 {
            for j in 1..=3 {
                header.push(format!("R{i}{j}"));
            }
        }
    }
    header.push("s".into());
    let rows = reference.iter().map(|r| {
        let mut row = vec![r.t];
        row.extend(r.r.iter());
        if d == 2 {
            row.push(r.rotation.angle());
        } else {
            let m = r.rotation.matrix();
            row.extend((0..3).flat_map(|i| (0..3).map(move |j| m[(i, j)])));
        }
        row.push(r.s);
        row
    });
    write_rows(path, &header, rows)
}

/// A CSV file read back as numbers.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }
}

pub fn read_csv(path: &Path) -> Result<Table, CliError> {
    let origin = path.display().to_string();
    let mut r = csv::Reader::from_path(path).map_err(|e| csv_error(path, e))?;
    let header = r
        .headers()
        .map_err(|e| csv_error(path, e))?
        .iter()
        .map(str::to_string)
        .collect();
    let mut rows = Vec::new();
    for (line, record) in r.records().enumerate() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let row = record
            .iter()
            .map(|field| {
                field
                    .parse::<f64>()
                    .map_err(|e| CliError::config(&origin, format!("row {}: {e}: {field:?}", line + 2)))
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    Ok(Table { header, rows })
}

const WIDTH: f64 = 760.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 56.0;
/// Room for the legend right of the plot area.
const LEGEND: f64 = 120.0;
const MAX_POINTS: usize = 1500;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2",
];

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn fit<'a>(points: impl Iterator<Item = &'a (f64, f64)>) -> Self {
        let mut f = Frame {
            x0: f64::INFINITY,
            x1: f64::NEG_INFINITY,
            y0: f64::INFINITY,
            y1: f64::NEG_INFINITY,
        };
        for &(x, y) in points {
            f.x0 = f.x0.min(x);
            f.x1 = f.x1.max(x);
            f.y0 = f.y0.min(y);
            f.y1 = f.y1.max(y);
        }
        if !f.x0.is_finite() {
            (f.x0, f.x1, f.y0, f.y1) = (0.0, 1.0, 0.0, 1.0);
        }
        if f.x1 - f.x0 < 1e-12 {
            (f.x0, f.x1) = (f.x0 - 0.5, f.x1 + 0.5);
        }
        if f.y1 - f.y0 < 1e-12 {
            (f.y0, f.y1) = (f.y0 - 0.5, f.y1 + 0.5);
        }
        f
    }

    fn map(&self, (x, y): (f64, f64)) -> (f64, f64) {
        let px = MARGIN + (x - self.x0) / (self.x1 - self.x0) * (WIDTH - MARGIN - LEGEND);
        let py = HEIGHT - MARGIN - (y - self.y0) / (self.y1 - self.y0) * (HEIGHT - 2.0 * MARGIN);
        (px, py)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn thin(points: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let stride = points.len().div_ceil(MAX_POINTS).max(1);
    let mut out: Vec<_> = points.iter().step_by(stride).copied().collect();
    if let Some(&last) = points.last() {
        if out.last() != Some(&last) {
            out.push(last);
        }
    }
    out
}

/// A line chart of several series. Labels are plain text.
fn line_chart(
    title: &str,
    x_label: &str,
    y_label: &str,
    series: &[(String, Vec<(f64, f64)>)],
    markers: bool,
) -> String {
    let frame = Frame::fit(series.iter().flat_map(|(_, pts)| pts.iter()));
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let (left, bottom) = (MARGIN, HEIGHT - MARGIN);
    let _ = writeln!(
        svg,
        r#"<path d="M{left} {MARGIN} L{left} {bottom} L{} {bottom}" stroke="black" fill="none"/>"#,
        WIDTH - LEGEND
    );
    for k in 0..=4 {
        let fx = frame.x0 + (frame.x1 - frame.x0) * k as f64 / 4.0;
        let fy = frame.y0 + (frame.y1 - frame.y0) * k as f64 / 4.0;
        let (px, _) = frame.map((fx, frame.y0));
        let (_, py) = frame.map((frame.x0, fy));
        let _ = writeln!(
            svg,
            r#"<text x="{px:.1}" y="{:.1}" font-size="11" text-anchor="middle">{fx:.3}</text>"#,
            bottom + 16.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{py:.1}" font-size="11" text-anchor="end">{}</text>"#,
            left - 4.0,
            escape(&tick_label(y_label, fy))
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="24" font-size="15" text-anchor="middle">{}</text>"#,
        (WIDTH - LEGEND + MARGIN) / 2.0,
        escape(title)
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" font-size="12" text-anchor="middle">{}</text>"#,
        (WIDTH - LEGEND + MARGIN) / 2.0,
        HEIGHT - 12.0,
        escape(x_label)
    );
    let _ = writeln!(
        svg,
        r#"<text x="14" y="{:.1}" font-size="12" text-anchor="middle" transform="rotate(-90 14 {:.1})">{}</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0,
        escape(y_label)
    );
    for (k, (label, pts)) in series.iter().enumerate() {
        let colour = PALETTE[k % PALETTE.len()];
        let thinned = thin(pts);
        let coords: Vec<String> = thinned
            .iter()
            .map(|&p| {
                let (x, y) = frame.map(p);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline fill="none" stroke="{colour}" stroke-width="1.2" points="{}"><title>{}</title></polyline>"#,
            coords.join(" "),
            escape(label)
        );
        if markers {
            if let (Some(&first), Some(&last)) = (thinned.first(), thinned.last()) {
                let (x, y) = frame.map(first);
                let _ = writeln!(
                    svg,
                    r#"<circle cx="{x:.2}" cy="{y:.2}" r="3" fill="none" stroke="{colour}"/>"#
                );
                let (x, y) = frame.map(last);
                let _ = writeln!(svg, r#"<circle cx="{x:.2}" cy="{y:.2}" r="3.5" fill="{colour}"/>"#);
            }
        }
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" font-size="11" fill="{colour}">{}</text>"#,
            WIDTH - LEGEND + 12.0,
            MARGIN + 14.0 * k as f64,
            escape(label)
        );
    }
    svg.push_str("</svg>\n");
    svg
}

fn tick_label(y_label: &str, y: f64) -> String {
    if y_label.starts_with("log10") {
        format!("1e{y:.1}")
    } else {
        format!("{y:.3}")
    }
}

/// Agent paths in the x-y plane (the first two coordinates in 3-D).
pub fn paths_svg(trace: &SimulationTrace, title: &str) -> String {
    let n = trace.final_state().agent_count();
    let series: Vec<_> = (1..=n)
        .map(|i| {
            let pts = trace
                .states
                .iter()
                .map(|s| {
                    let a = s.agent(i);
                    (a[0], a[1])
                })
                .collect();
            (format!("agent {i}"), pts)
        })
        .collect();
    line_chart(title, "x", "y", &series, true)
}

/// Per-edge error norms against time on a log scale. Exact zeros are dropped.
pub fn errors_svg(trace: &SimulationTrace, labels: &[String], title: &str) -> String {
    let series: Vec<_> = labels
        .iter()
        .enumerate()
        .map(|(k, label)| {
            let pts = trace
                .times
                .iter()
                .zip(&trace.edge_errors)
                .filter(|(_, e)| e[k] > 0.0)
                .map(|(&t, e)| (t, e[k].log10()))
                .collect();
            (label.clone(), pts)
        })
        .collect();
    line_chart(title, "t", "log10 edge error", &series, false)
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}
