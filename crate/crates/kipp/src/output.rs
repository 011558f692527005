//! Curve CSV and SVG rendering.

use std::fmt::Write as _;
use std::io;

use kipp_core::kipp::{detect_circles_with, trace_curve, Circle, CurveSample, DetectOptions};
use kipp_core::linalg::ComplexMatrix;
use serde::Serialize;

pub const DEFAULT_TRACE_STEPS: usize = 720;
pub const DEFAULT_RENDER_STEPS: usize = 2048;
pub const MIN_STEPS: usize = 8;

#[derive(Serialize)]
struct Row {
    theta: f64,
    branch: usize,
    lambda: f64,
    re: f64,
    im: f64,
}

/// Writes `theta,branch,lambda,re,im` with a header, one row per sample.
pub fn write_curve_csv<W: io::Write>(samples: &[CurveSample], out: W) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    for s in samples {
        w.serialize(Row {
            theta: s.theta,
            branch: s.branch,
            lambda: s.lambda,
            re: s.point.re,
            im: s.point.im,
        })?;
    }
    w.flush()?;
    Ok(())
}

pub fn curve_csv(a: &ComplexMatrix, steps: usize) -> String {
    let mut buf = Vec::new();
    write_curve_csv(&trace_curve(a, steps), &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("csv is utf-8")
}

fn coord(x: f64) -> String {
    let s = format!("{:.5}", x);
    if s == "-0.00000" {
        "0.00000".to_string()
    } else {
        s
    }
}

/// Standalone SVG of `C(A)`: one path per branch, circles dashed, unit disk for scale.
/// Mathematical orientation: the y coordinate is negated.
pub fn render_svg(a: &ComplexMatrix, steps: usize, circles: &[Circle]) -> String {
    let samples = trace_curve(a, steps);
    let n = a.rows();
    let mut s = String::new();
    s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"-1.1 -1.1 2.2 2.2\" width=\"600\" height=\"600\">\n";
    s += "  <g id=\"grid\" fill=\"none\" stroke=\"#bbbbbb\" stroke-width=\"0.003\">\n";
    s += "    <circle cx=\"0\" cy=\"0\" r=\"1\"/>\n";
    s += "    <line x1=\"-1.1\" y1=\"0\" x2=\"1.1\" y2=\"0\"/>\n";
    s += "    <line x1=\"0\" y1=\"-1.1\" x2=\"0\" y2=\"1.1\"/>\n";
    s += "  </g>\n";
    s += "  <g id=\"curve\" fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"0.006\">\n";
    for branch in 0..n {
        let mut d = String::new();
        for (k, p) in samples.iter().filter(|p| p.branch == branch).enumerate() {
            let cmd = if k == 0 { 'M' } else { 'L' };
            let _ = write!(d, "{}{} {} ", cmd, coord(p.point.re), coord(-p.point.im));
        }
        d.push('Z');
        let _ = writeln!(s, "    <path id=\"branch-{}\" d=\"{}\"/>", branch, d);
    }
    s += "  </g>\n";
    s += "  <g id=\"circles\" fill=\"none\" stroke=\"#c0392b\" stroke-width=\"0.006\" stroke-dasharray=\"0.03 0.02\">\n";
    for c in circles.iter().filter(|c| !c.degenerate) {
        let _ = writeln!(
            s,
            "    <circle cx=\"{}\" cy=\"{}\" r=\"{}\"/>",
            coord(c.center.re),
            coord(-c.center.im),
            coord(c.radius)
        );
    }
    s += "  </g>\n";
    s += "</svg>\n";
    s
}

/// [`render_svg`] with detected circles; detection failures draw none.
pub fn render_svg_detected(a: &ComplexMatrix, steps: usize, opts: &DetectOptions) -> String {
    let circles = detect_circles_with(a, opts).map(|r| r.circles).unwrap_or_default();
    render_svg(a, steps, &circles)
}
