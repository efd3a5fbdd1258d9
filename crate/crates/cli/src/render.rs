//! SVG rendering of batch outputs: one line chart per aggregated metric and
//! one heatmap per snapshot.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use morphoevo_core::runner::output::AGGREGATE_HEADER;
use morphoevo_core::Lexicon;

use crate::error::{CliError, CliResult};
use crate::stage::write_staged;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 56.0;
const CELL_W: usize = 24;
const ROW_H: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesPoint {
    pub cycle: u64,
    pub mean: f64,
    pub p5: f64,
    pub p95: f64,
}

fn csv_err(path: &Path, msg: impl Into<String>) -> CliError {
    CliError::Csv {
        path: path.to_path_buf(),
        msg: msg.into(),
    }
}

/// Parses `aggregate.csv` into one series per metric, keyed by name.
pub fn parse_aggregate(path: &Path, text: &str) -> CliResult<BTreeMap<String, Vec<SeriesPoint>>> {
    let mut lines = text.lines();
    if lines.next().map(str::trim) != Some(AGGREGATE_HEADER) {
        return Err(csv_err(path, format!("header must be {AGGREGATE_HEADER:?}")));
    }
    let mut series: BTreeMap<String, Vec<SeriesPoint>> = BTreeMap::new();
    for (i, line) in lines.enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let [cycle, metric, mean, p5, p95] = fields[..] else {
            return Err(csv_err(path, format!("line {}: expected 5 fields", i + 2)));
        };
        let num = |s: &str| {
            s.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| csv_err(path, format!("line {}: bad number {s:?}", i + 2)))
        };
        let point = SeriesPoint {
            cycle: cycle
                .parse()
                .map_err(|_| csv_err(path, format!("line {}: bad cycle {cycle:?}", i + 2)))?,
            mean: num(mean)?,
            p5: num(p5)?,
            p95: num(p95)?,
        };
        series.entry(metric.to_string()).or_default().push(point);
    }
    for points in series.values_mut() {
        points.sort_by_key(|p| p.cycle);
    }
    Ok(series)
}

fn svg_open(out: &mut String, width: f64, height: f64) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = writeln!(out, r#"<rect width="{width}" height="{height}" fill="white"/>"#);
}

/// Mean polyline over a shaded 5th to 95th percentile ribbon.
pub fn line_chart(metric: &str, points: &[SeriesPoint]) -> String {
    let x0 = points.first().map_or(0, |p| p.cycle) as f64;
    let x1 = points.last().map_or(1, |p| p.cycle) as f64;
    let mut y0 = points.iter().map(|p| p.p5.min(p.mean)).fold(f64::INFINITY, f64::min);
    let mut y1 = points.iter().map(|p| p.p95.max(p.mean)).fold(f64::NEG_INFINITY, f64::max);
    if !y0.is_finite() || !y1.is_finite() {
        (y0, y1) = (0.0, 1.0);
    }
    if y1 - y0 < 1e-12 {
        (y0, y1) = (y0 - 0.5, y1 + 0.5);
    }
    let span_x = if x1 > x0 { x1 - x0 } else { 1.0 };
    let px = |c: u64| MARGIN + (c as f64 - x0) / span_x * (WIDTH - 2.0 * MARGIN);
    let py = |v: f64| HEIGHT - MARGIN - (v - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);

    let mut out = String::new();
    svg_open(&mut out, WIDTH, HEIGHT);
    let (left, right, top, bottom) = (MARGIN, WIDTH - MARGIN, MARGIN, HEIGHT - MARGIN);
    let _ = writeln!(
        out,
        r#"<path d="M{left} {top} L{left} {bottom} L{right} {bottom}" fill="none" stroke="black"/>"#
    );
    let ribbon: Vec<String> = points
        .iter()
        .map(|p| format!("{:.2},{:.2}", px(p.cycle), py(p.p95)))
        .chain(points.iter().rev().map(|p| format!("{:.2},{:.2}", px(p.cycle), py(p.p5))))
        .collect();
    let _ = writeln!(
        out,
        r#"<polygon class="band" points="{}" fill="steelblue" fill-opacity="0.3" stroke="none"/>"#,
        ribbon.join(" ")
    );
    let line: Vec<String> = points
        .iter()
        .map(|p| format!("{:.2},{:.2}", px(p.cycle), py(p.mean)))
        .collect();
    let _ = writeln!(
        out,
        r#"<polyline class="mean" points="{}" fill="none" stroke="black" stroke-width="1.5"/>"#,
        line.join(" ")
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="14">{metric}</text>"#,
        WIDTH / 2.0,
        MARGIN / 2.0
    );
    let label = |out: &mut String, x: f64, y: f64, anchor: &str, text: String| {
        let _ = writeln!(
            out,
            r#"<text x="{x:.2}" y="{y:.2}" text-anchor="{anchor}" font-family="sans-serif" font-size="11">{text}</text>"#
        );
    };
    label(&mut out, left, bottom + 16.0, "start", format!("{x0}"));
    label(&mut out, right, bottom + 16.0, "end", format!("{x1}"));
    label(&mut out, WIDTH / 2.0, bottom + 32.0, "middle", "cycle".into());
    label(&mut out, left - 6.0, bottom, "end", format!("{y0:.3}"));
    label(&mut out, left - 6.0, top + 4.0, "end", format!("{y1:.3}"));
    out.push_str("</svg>\n");
    out
}

/// Fill colour for an exponent index; hues step by the golden angle so
/// neighbouring indices contrast.
pub fn exponent_colour(index: u16) -> String {
    let hue = (f64::from(index) * 137.508) % 360.0;
    format!("hsl({hue:.1},65%,50%)")
}

/// Lexemes as rows, cells as columns, one fill per exponent index.
pub fn heatmap(title: &str, lexicon: &Lexicon) -> String {
    let width = lexicon.num_cells() * CELL_W;
    let height = lexicon.num_lexemes() * ROW_H + 20;
    let mut out = String::new();
    svg_open(&mut out, width as f64, height as f64);
    let _ = writeln!(
        out,
        r#"<text x="2" y="14" font-family="sans-serif" font-size="11">{title}</text>"#
    );
    for (l, row) in lexicon.rows().enumerate() {
        for (c, e) in row.iter().enumerate() {
            let _ = writeln!(
                out,
                r#"<rect x="{}" y="{}" width="{CELL_W}" height="{ROW_H}" fill="{}"/>"#,
                c * CELL_W,
                20 + l * ROW_H,
                exponent_colour(e.0)
            );
        }
    }
    out.push_str("</svg>\n");
    out
}

fn sorted_csvs(dir: &Path) -> CliResult<Vec<PathBuf>> {
    if !dir.is_dir() {
        return Ok(Vec::new());
    }
    let mut files: Vec<PathBuf> = fs::read_dir(dir)?
        .map(|e| e.map(|e| e.path()))
        .collect::<Result<_, _>>()?;
    files.retain(|p| p.extension().is_some_and(|x| x == "csv"));
    files.sort();
    Ok(files)
}

/// Renders `dir/aggregate.csv` and `dir/snapshots/*.csv` into
/// `dir/render/`. Returns the written paths, relative to `dir`.
pub fn render_outputs(dir: &Path) -> CliResult<Vec<PathBuf>> {
    let agg_path = dir.join("aggregate.csv");
    let text = fs::read_to_string(&agg_path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => CliError::MissingFile(agg_path.clone()),
        _ => CliError::Io(e),
    })?;
    let series = parse_aggregate(&agg_path, &text)?;
    let mut heatmaps = Vec::new();
    for path in sorted_csvs(&dir.join("snapshots"))? {
        let text = fs::read_to_string(&path)?;
        let lexicon = Lexicon::from_csv(&text).map_err(|e| csv_err(&path, e.to_string()))?;
        let stem = path.file_stem().unwrap_or_default().to_string_lossy().into_owned();
        heatmaps.push((stem, lexicon));
    }

    write_staged(&dir.join("render"), |stage| {
        let mut written = Vec::new();
        fs::create_dir_all(stage.join("charts"))?;
        for (metric, points) in &series {
            let rel = PathBuf::from("charts").join(format!("{metric}.svg"));
            fs::write(stage.join(&rel), line_chart(metric, points))?;
            written.push(Path::new("render").join(rel));
        }
        if !heatmaps.is_empty() {
            fs::create_dir_all(stage.join("snapshots"))?;
        }
        for (stem, lexicon) in &heatmaps {
            let rel = PathBuf::from("snapshots").join(format!("{stem}.svg"));
            fs::write(stage.join(&rel), heatmap(stem, lexicon))?;
            written.push(Path::new("render").join(rel));
        }
        Ok(written)
    })
}
