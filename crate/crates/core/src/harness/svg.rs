//! Bare-bones SVG output: eigenvalue scatter plots and radial histograms.

use std::fmt::Write;

use num_complex::Complex64;

const SIZE: f64 = 600.0;
const MARGIN: f64 = 40.0;

fn header(out: &mut String, title: &str) {
    let _ = writeln!(
        out,
        r#"<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">
<title>{}</title>
<rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="white"/>
<text x="{}" y="24" font-family="sans-serif" font-size="16" text-anchor="middle">{}</text>"#,
        escape(title),
        SIZE / 2.0,
        escape(title)
    );
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Points as `<circle class="eig">`, reference circles about the origin as
/// `<circle class="ref">`. The view covers the largest reference circle.
pub fn scatter(points: &[Complex64], reference: &[(f64, &str)], title: &str) -> String {
    let extent = reference
        .iter()
        .map(|(r, _)| *r)
        .chain(points.iter().map(|z| z.norm()))
        .fold(1.0, f64::max)
        * 1.05;
    let scale = (SIZE - 2.0 * MARGIN) / (2.0 * extent);
    let cx = SIZE / 2.0;
    let cy = SIZE / 2.0 + 10.0;
    let mut out = String::new();
    header(&mut out, title);
    for (r, colour) in reference {
        let _ = writeln!(
            out,
            r#"<circle class="ref" cx="{cx:.2}" cy="{cy:.2}" r="{:.2}" fill="none" stroke="{}" stroke-width="1.5"/>"#,
            r * scale,
            escape(colour)
        );
    }
    for z in points {
        let _ = writeln!(
            out,
            r#"<circle class="eig" cx="{:.3}" cy="{:.3}" r="2" fill="black"/>"#,
            cx + z.re * scale,
            cy - z.im * scale
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Histogram bars (`edges.len() == heights.len() + 1`) with an overlaid
/// polyline `curve`.
pub fn histogram(edges: &[f64], heights: &[f64], curve: &[(f64, f64)], title: &str) -> String {
    assert_eq!(edges.len(), heights.len() + 1, "histogram shape");
    let x0 = edges.first().copied().unwrap_or(0.0);
    let x1 = edges.last().copied().unwrap_or(1.0).max(x0 + 1e-12);
    let ymax = heights
        .iter()
        .copied()
        .chain(curve.iter().map(|p| p.1))
        .filter(|v| v.is_finite())
        .fold(1e-12, f64::max)
        * 1.1;
    let w = SIZE - 2.0 * MARGIN;
    let h = SIZE - 2.0 * MARGIN - 20.0;
    let px = |x: f64| MARGIN + (x - x0) / (x1 - x0) * w;
    let py = |y: f64| SIZE - MARGIN - y / ymax * h;
    let mut out = String::new();
    header(&mut out, title);
    let _ = writeln!(
        out,
        r#"<line x1="{MARGIN}" y1="{0}" x2="{1}" y2="{0}" stroke="black"/>"#,
        SIZE - MARGIN,
        SIZE - MARGIN
    );
    for (i, &v) in heights.iter().enumerate() {
        let (a, b) = (px(edges[i]), px(edges[i + 1]));
        let _ = writeln!(
            out,
            r##"<rect class="bar" x="{a:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="#9ecae1" stroke="#3182bd"/>"##,
            py(v),
            (b - a).max(0.0),
            (SIZE - MARGIN - py(v)).max(0.0)
        );
    }
    if !curve.is_empty() {
        let pts: Vec<String> = curve
            .iter()
            .filter(|p| p.1.is_finite())
            .map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y.min(ymax))))
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline class="density" points="{}" fill="none" stroke="crimson" stroke-width="2"/>"#,
            pts.join(" ")
        );
    }
    out.push_str("</svg>\n");
    out
}
