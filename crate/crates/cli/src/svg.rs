//! SVG 1.1 rendering: each row shows a tropical curve on the left and its dual
//! subdivision on the right. Floating point is used only for drawing.

use std::fmt::Write;

use tropicount::rational::{to_f64, RationalPoint};
use tropicount::TropicalCurve;

const PANEL: f64 = 360.0;
const MARGIN: f64 = 24.0;

/// One curve to draw, with the points it passes through.
pub struct Row<'a> {
    pub curve: &'a TropicalCurve,
    pub points: &'a [RationalPoint],
    pub caption: String,
}

pub fn render(rows: &[Row]) -> String {
    let width = 2.0 * PANEL + 3.0 * MARGIN;
    let row_height = PANEL + 2.0 * MARGIN;
    let height = row_height * rows.len().max(1) as f64;
    let mut out = String::new();
    writeln!(
        out,
        r#"<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}">
<rect width="100%" height="100%" fill="white"/>"#
    )
    .unwrap();
    for (k, row) in rows.iter().enumerate() {
        let top = k as f64 * row_height + MARGIN;
        draw_curve(&mut out, row, MARGIN, top);
        draw_subdivision(&mut out, row.curve, 2.0 * MARGIN + PANEL, top);
        writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="12">{}</text>"#,
            MARGIN,
            top - 6.0,
            escape(&row.caption)
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    out
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Affine map from a data box onto a square panel, y pointing up.
struct Frame {
    min: (f64, f64),
    scale: f64,
    origin: (f64, f64),
}

impl Frame {
    fn fit(points: &[(f64, f64)], left: f64, top: f64) -> Frame {
        let (mut lo, mut hi) = ((f64::MAX, f64::MAX), (f64::MIN, f64::MIN));
        for &(x, y) in points {
            lo = (lo.0.min(x), lo.1.min(y));
            hi = (hi.0.max(x), hi.1.max(y));
        }
        if points.is_empty() {
            lo = (0.0, 0.0);
            hi = (1.0, 1.0);
        }
        let span = (hi.0 - lo.0).max(hi.1 - lo.1).max(1e-9);
        Frame {
            min: lo,
            scale: (PANEL - 2.0 * MARGIN) / span,
            origin: (left + MARGIN, top + PANEL - MARGIN),
        }
    }

    fn map(&self, p: (f64, f64)) -> (f64, f64) {
        (
            self.origin.0 + (p.0 - self.min.0) * self.scale,
            self.origin.1 - (p.1 - self.min.1) * self.scale,
        )
    }
}

fn coords(p: &RationalPoint) -> (f64, f64) {
    (to_f64(&p.x), to_f64(&p.y))
}

fn panel_border(out: &mut String, left: f64, top: f64) {
    writeln!(
        out,
        r##"<rect x="{left:.1}" y="{top:.1}" width="{PANEL:.0}" height="{PANEL:.0}" fill="none" stroke="#bbbbbb"/>"##
    )
    .unwrap();
}

fn line(out: &mut String, a: (f64, f64), b: (f64, f64), width: f64, colour: &str) {
    writeln!(
        out,
        r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{colour}" stroke-width="{width:.1}"/>"#,
        a.0, a.1, b.0, b.1
    )
    .unwrap();
}

fn label(out: &mut String, at: (f64, f64), text: &str) {
    writeln!(
        out,
        r##"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="11" fill="#aa2222">{text}</text>"##,
        at.0 + 3.0,
        at.1 - 3.0
    )
    .unwrap();
}

fn draw_curve(out: &mut String, row: &Row, left: f64, top: f64) {
    panel_border(out, left, top);
    let curve = row.curve;
    let mut extent: Vec<(f64, f64)> = curve.vertices().iter().map(coords).collect();
    extent.extend(row.points.iter().map(coords));
    // Rays get a visible length relative to the spread of the vertices.
    let spread = {
        let xs = extent.iter().map(|p| p.0);
        let ys = extent.iter().map(|p| p.1);
        let dx = xs.clone().fold(f64::MIN, f64::max) - xs.fold(f64::MAX, f64::min);
        let dy = ys.clone().fold(f64::MIN, f64::max) - ys.fold(f64::MAX, f64::min);
        dx.max(dy).max(1.0)
    };
    let ray_length = 0.35 * spread;
    let ray_ends: Vec<((f64, f64), (f64, f64))> = curve
        .rays()
        .iter()
        .map(|r| {
            let start = coords(&curve.vertices()[r.vertex]);
            let d = (r.direction.i as f64, r.direction.j as f64);
            let norm = (d.0 * d.0 + d.1 * d.1).sqrt();
            (start, (start.0 + ray_length * d.0 / norm, start.1 + ray_length * d.1 / norm))
        })
        .collect();
    extent.extend(ray_ends.iter().map(|e| e.1));
    let frame = Frame::fit(&extent, left, top);
    for e in curve.bounded_edges() {
        let a = frame.map(coords(&curve.vertices()[e.from]));
        let b = frame.map(coords(&curve.vertices()[e.to]));
        line(out, a, b, 1.5 * e.weight as f64, "#1f4e9c");
        if e.weight > 1 {
            label(out, ((a.0 + b.0) / 2.0, (a.1 + b.1) / 2.0), &e.weight.to_string());
        }
    }
    for (r, (start, end)) in curve.rays().iter().zip(&ray_ends) {
        let (a, b) = (frame.map(*start), frame.map(*end));
        line(out, a, b, 1.5 * r.weight as f64, "#1f4e9c");
        if r.weight > 1 {
            label(out, b, &r.weight.to_string());
        }
    }
    for p in row.points {
        let (x, y) = frame.map(coords(p));
        writeln!(out, r##"<circle cx="{x:.2}" cy="{y:.2}" r="3" fill="#d0301a"/>"##).unwrap();
    }
}

fn draw_subdivision(out: &mut String, curve: &TropicalCurve, left: f64, top: f64) {
    panel_border(out, left, top);
    let s = curve.dual();
    let lattice = s.polygon().lattice_points().all;
    let pts: Vec<(f64, f64)> = lattice.iter().map(|p| (p.i as f64, p.j as f64)).collect();
    let frame = Frame::fit(&pts, left, top);
    for &p in &pts {
        let (x, y) = frame.map(p);
        writeln!(out, r##"<circle cx="{x:.2}" cy="{y:.2}" r="2" fill="#999999"/>"##).unwrap();
    }
    for e in s.edges() {
        let (a, b) = (s.vertices()[e.ends[0]], s.vertices()[e.ends[1]]);
        let (pa, pb) = (frame.map((a.i as f64, a.j as f64)), frame.map((b.i as f64, b.j as f64)));
        line(out, pa, pb, 1.2, "#222222");
        if e.lattice_length() > 1 {
            label(out, ((pa.0 + pb.0) / 2.0, (pa.1 + pb.1) / 2.0), &e.lattice_length().to_string());
        }
    }
    for v in s.vertices() {
        let (x, y) = frame.map((v.i as f64, v.j as f64));
        writeln!(out, r##"<circle cx="{x:.2}" cy="{y:.2}" r="3" fill="#222222"/>"##).unwrap();
    }
}
