//! Convergence-report and figure output.
//!
//! Reports print as CSV with the header `N,error,order` or render as a
//! log-log SVG chart with reference-slope guides.  Both forms are byte
//! deterministic: the same report always produces the same file, and all
//! floating-point values are written with seventeen significant digits so
//! they parse back to the exact same doubles.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use gfrac_core::ConvergenceReport;

/// Output format selector for [`emit_report`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Svg,
}

/// Failures while writing reports or figures.
#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error("empty report")]
    Empty,
    #[error("column lengths do not match")]
    Shape,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// One named polyline of a chart.
pub struct SeriesLine<'a> {
    pub label: &'a str,
    pub x: &'a [f64],
    pub y: &'a [f64],
}

/// Chart description consumed by [`render_chart_svg`].
pub struct ChartSpec<'a> {
    pub title: &'a str,
    pub x_label: &'a str,
    pub y_label: &'a str,
    pub log_x: bool,
    pub log_y: bool,
    /// Reference slopes drawn as dashed guides on log-log axes.
    pub slope_guides: &'a [f64],
    pub series: &'a [SeriesLine<'a>],
}

/// Formats a value with seventeen significant digits, enough for the
/// printed text to parse back to the exact same double.
pub fn sig17(v: f64) -> String {
    format!("{v:.16e}")
}

/// Formats a report as CSV text with the header `N,error,order`.
///
/// The order column is empty on the first row, where no previous error
/// exists to compare against.
///
/// # Example
///
/// ```
/// use gfrac::report::format_report_csv;
/// use gfrac_core::ConvergenceReport;
///
/// let report = ConvergenceReport::from_errors(&[16, 32], &[1e-2, 2.5e-3]);
/// let csv = format_report_csv(&report).unwrap();
/// assert!(csv.starts_with("N,error,order\n16,"));
/// ```
pub fn format_report_csv(report: &ConvergenceReport) -> Result<String, ReportError> {
    if report.rows.is_empty() {
        return Err(ReportError::Empty);
    }
    let mut out = String::from("N,error,order\n");
    for row in &report.rows {
        let order = row.order.map(sig17).unwrap_or_default();
        let _ = writeln!(out, "{},{},{}", row.n_steps, sig17(row.error), order);
    }
    Ok(out)
}

/// Renders a report as a log-log SVG chart with slope guides 1 and 2.
pub fn render_report_svg(report: &ConvergenceReport) -> Result<String, ReportError> {
    if report.rows.is_empty() {
        return Err(ReportError::Empty);
    }
    let x: Vec<f64> = report.rows.iter().map(|r| r.n_steps as f64).collect();
    let y: Vec<f64> = report.rows.iter().map(|r| r.error).collect();
    render_chart_svg(&ChartSpec {
        title: "maximum error by step count",
        x_label: "N",
        y_label: "error",
        log_x: true,
        log_y: true,
        slope_guides: &[1.0, 2.0],
        series: &[SeriesLine {
            label: "error",
            x: &x,
            y: &y,
        }],
    })
}

/// Writes a report to `path` in the requested format.
pub fn emit_report(
    report: &ConvergenceReport,
    format: ReportFormat,
    path: &Path,
) -> Result<(), ReportError> {
    let text = match format {
        ReportFormat::Csv => format_report_csv(report)?,
        ReportFormat::Svg => render_report_svg(report)?,
    };
    fs::write(path, text)?;
    Ok(())
}

/// Writes equally long columns as CSV under the given header names.
pub fn write_columns_csv(
    path: &Path,
    headers: &[&str],
    columns: &[&[f64]],
) -> Result<(), ReportError> {
    if headers.len() != columns.len() || columns.is_empty() {
        return Err(ReportError::Shape);
    }
    let rows = columns[0].len();
    if rows == 0 {
        return Err(ReportError::Empty);
    }
    if columns.iter().any(|c| c.len() != rows) {
        return Err(ReportError::Shape);
    }
    let mut out = headers.join(",");
    out.push('\n');
    for i in 0..rows {
        let line: Vec<String> = columns.iter().map(|c| sig17(c[i])).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    fs::write(path, out)?;
    Ok(())
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 616.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 420.0;
const PALETTE: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

fn axis_value(v: f64, log: bool) -> f64 {
    if log {
        v.log10()
    } else {
        v
    }
}

fn tick_text(v: f64, log: bool) -> String {
    if log {
        format!("{:.2e}", 10f64.powf(v))
    } else {
        format!("{v:.3}")
    }
}

/// Renders a chart as standalone SVG text.
///
/// Coordinates are rounded to hundredths of a pixel, so the output is a
/// deterministic function of the input.
pub fn render_chart_svg(spec: &ChartSpec<'_>) -> Result<String, ReportError> {
    if spec.series.is_empty() {
        return Err(ReportError::Empty);
    }
    let mut xmin = f64::INFINITY;
    let mut xmax = f64::NEG_INFINITY;
    let mut ymin = f64::INFINITY;
    let mut ymax = f64::NEG_INFINITY;
    for line in spec.series {
        if line.x.is_empty() || line.x.len() != line.y.len() {
            return Err(if line.x.is_empty() {
                ReportError::Empty
            } else {
                ReportError::Shape
            });
        }
        for (&xv, &yv) in line.x.iter().zip(line.y.iter()) {
            let xv = axis_value(xv, spec.log_x);
            let yv = axis_value(yv, spec.log_y);
            xmin = xmin.min(xv);
            xmax = xmax.max(xv);
            ymin = ymin.min(yv);
            ymax = ymax.max(yv);
        }
    }
    if !(xmin.is_finite() && xmax.is_finite() && ymin.is_finite() && ymax.is_finite()) {
        return Err(ReportError::Shape);
    }
    let xpad = if xmax > xmin { 0.05 * (xmax - xmin) } else { 0.5 };
    let ypad = if ymax > ymin { 0.05 * (ymax - ymin) } else { 0.5 };
    xmin -= xpad;
    xmax += xpad;
    ymin -= ypad;
    ymax += ypad;

    let map_x = |v: f64| LEFT + (v - xmin) / (xmax - xmin) * (RIGHT - LEFT);
    let map_y = |v: f64| BOTTOM - (v - ymin) / (ymax - ymin) * (BOTTOM - TOP);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"monospace\" font-size=\"12\">"
    );
    let _ = writeln!(
        svg,
        "<rect x=\"0\" y=\"0\" width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>"
    );
    let _ = writeln!(
        svg,
        "<rect x=\"{LEFT}\" y=\"{TOP}\" width=\"{:.2}\" height=\"{:.2}\" \
         fill=\"none\" stroke=\"#333333\"/>",
        RIGHT - LEFT,
        BOTTOM - TOP
    );
    let _ = writeln!(
        svg,
        "<text x=\"{:.2}\" y=\"24\" text-anchor=\"middle\">{}</text>",
        (LEFT + RIGHT) / 2.0,
        spec.title
    );
    let _ = writeln!(
        svg,
        "<text x=\"{:.2}\" y=\"460\" text-anchor=\"middle\">{}</text>",
        (LEFT + RIGHT) / 2.0,
        spec.x_label
    );
    let _ = writeln!(
        svg,
        "<text x=\"16\" y=\"{:.2}\" text-anchor=\"middle\" \
         transform=\"rotate(-90 16 {:.2})\">{}</text>",
        (TOP + BOTTOM) / 2.0,
        (TOP + BOTTOM) / 2.0,
        spec.y_label
    );

    for k in 0..=4 {
        let frac = k as f64 / 4.0;
        let xv = xmin + frac * (xmax - xmin);
        let yv = ymin + frac * (ymax - ymin);
        let px = map_x(xv);
        let py = map_y(yv);
        let _ = writeln!(
            svg,
            "<line x1=\"{px:.2}\" y1=\"{BOTTOM}\" x2=\"{px:.2}\" y2=\"{:.2}\" stroke=\"#333333\"/>",
            BOTTOM + 6.0
        );
        let _ = writeln!(
            svg,
            "<text x=\"{px:.2}\" y=\"{:.2}\" text-anchor=\"middle\">{}</text>",
            BOTTOM + 20.0,
            tick_text(xv, spec.log_x)
        );
        let _ = writeln!(
            svg,
            "<line x1=\"{:.2}\" y1=\"{py:.2}\" x2=\"{LEFT}\" y2=\"{py:.2}\" stroke=\"#333333\"/>",
            LEFT - 6.0
        );
        let _ = writeln!(
            svg,
            "<text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\">{}</text>",
            LEFT - 10.0,
            py + 4.0,
            tick_text(yv, spec.log_y)
        );
    }

    if spec.log_x && spec.log_y {
        let first = &spec.series[0];
        let x0 = axis_value(first.x[0], true);
        let y0 = axis_value(first.y[0], true) + 0.2;
        for &slope in spec.slope_guides {
            let x1 = xmax - 0.05 * (xmax - xmin);
            let y1 = y0 - slope * (x1 - x0);
            let _ = writeln!(
                svg,
                "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" \
                 stroke=\"#999999\" stroke-dasharray=\"6 4\"/>",
                map_x(x0),
                map_y(y0),
                map_x(x1),
                map_y(y1)
            );
            let _ = writeln!(
                svg,
                "<text x=\"{:.2}\" y=\"{:.2}\" fill=\"#666666\">slope {slope}</text>",
                map_x(x1) + 2.0 - 60.0,
                map_y(y1) - 6.0
            );
        }
    }

    for (idx, line) in spec.series.iter().enumerate() {
        let color = PALETTE[idx % PALETTE.len()];
        let mut points = String::new();
        for (&xv, &yv) in line.x.iter().zip(line.y.iter()) {
            let _ = write!(
                points,
                "{:.2},{:.2} ",
                map_x(axis_value(xv, spec.log_x)),
                map_y(axis_value(yv, spec.log_y))
            );
        }
        let _ = writeln!(
            svg,
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>",
            points.trim_end()
        );
        for (&xv, &yv) in line.x.iter().zip(line.y.iter()) {
            let _ = writeln!(
                svg,
                "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"2.5\" fill=\"{color}\"/>",
                map_x(axis_value(xv, spec.log_x)),
                map_y(axis_value(yv, spec.log_y))
            );
        }
        let ly = TOP + 16.0 + 16.0 * idx as f64;
        let _ = writeln!(
            svg,
            "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"10\" height=\"10\" fill=\"{color}\"/>",
            RIGHT - 150.0,
            ly - 9.0
        );
        let _ = writeln!(
            svg,
            "<text x=\"{:.2}\" y=\"{ly:.2}\">{}</text>",
            RIGHT - 136.0,
            line.label
        );
    }

    svg.push_str("</svg>\n");
    Ok(svg)
}

/// Renders a chart and writes it to `path`.
pub fn write_chart_svg(path: &Path, spec: &ChartSpec<'_>) -> Result<(), ReportError> {
    let text = render_chart_svg(spec)?;
    fs::write(path, text)?;
    Ok(())
}
