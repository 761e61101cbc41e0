//! Static SVG pictures: curves on the left, dual subdivisions on the right.

use std::fmt::Write;

use crate::curve::PlaneCurve;
use crate::duality::{DualSubdivision, Polygon};
use crate::scalar::Scalar;
use crate::vec2::Vec2;

const PANEL: f64 = 400.0;
const MARGIN: f64 = 20.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

type Pt = (f64, f64);

fn pt<S: Scalar>(p: &Vec2<S>) -> Pt {
    p.to_f64()
}

/// Maps a bounding box into a square panel at horizontal offset `x0`.
struct Frame {
    min: Pt,
    scale: f64,
    x0: f64,
}

impl Frame {
    fn fit(points: &[Pt], x0: f64) -> Frame {
        let (mut lo, mut hi) = ((f64::INFINITY, f64::INFINITY), (f64::NEG_INFINITY, f64::NEG_INFINITY));
        for &(x, y) in points {
            lo = (lo.0.min(x), lo.1.min(y));
            hi = (hi.0.max(x), hi.1.max(y));
        }
        if points.is_empty() {
            (lo, hi) = ((-1.0, -1.0), (1.0, 1.0));
        }
        let span = (hi.0 - lo.0).max(hi.1 - lo.1).max(1e-9);
        let scale = (PANEL - 2.0 * MARGIN) / span;
        let centre = ((lo.0 + hi.0) / 2.0, (lo.1 + hi.1) / 2.0);
        let half = span / 2.0;
        Frame { min: (centre.0 - half, centre.1 - half), scale, x0 }
    }

    fn map(&self, (x, y): Pt) -> Pt {
        (self.x0 + MARGIN + (x - self.min.0) * self.scale, PANEL - MARGIN - (y - self.min.1) * self.scale)
    }
}

fn line(out: &mut String, f: &Frame, a: Pt, b: Pt, color: &str, width: f64, dashed: bool) {
    let (a, b) = (f.map(a), f.map(b));
    let dash = if dashed { r#" stroke-dasharray="4 3""# } else { "" };
    let _ = writeln!(
        out,
        r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{color}" stroke-width="{width}"{dash}/>"#,
        a.0, a.1, b.0, b.1
    );
}

fn dot(out: &mut String, f: &Frame, p: Pt, color: &str, r: f64) {
    let p = f.map(p);
    let _ = writeln!(out, r#"<circle cx="{:.2}" cy="{:.2}" r="{r}" fill="{color}"/>"#, p.0, p.1);
}

fn polygon(out: &mut String, f: &Frame, p: &[Pt], fill: &str, stroke: &str) {
    let pts: Vec<String> = p.iter().map(|&q| f.map(q)).map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
    let _ = writeln!(
        out,
        r#"<polygon points="{}" fill="{fill}" fill-opacity="0.25" stroke="{stroke}" stroke-width="1.5"/>"#,
        pts.join(" ")
    );
}

/// Vertex positions plus leg tips, legs drawn with a common length.
fn curve_points<S: Scalar>(c: &PlaneCurve<S>) -> (Vec<Pt>, Vec<(Pt, Pt)>) {
    let verts: Vec<Pt> = c.positions.iter().map(pt).collect();
    let (mut lo, mut hi) = ((f64::INFINITY, f64::INFINITY), (f64::NEG_INFINITY, f64::NEG_INFINITY));
    for &(x, y) in &verts {
        lo = (lo.0.min(x), lo.1.min(y));
        hi = (hi.0.max(x), hi.1.max(y));
    }
    let reach = ((hi.0 - lo.0).max(hi.1 - lo.1) * 0.35).max(1.0);
    let legs = c
        .base
        .legs()
        .iter()
        .zip(&c.leg_slopes)
        .filter(|(_, u)| !u.is_zero())
        .map(|(&v, u)| {
            let (ux, uy) = pt(u);
            let norm = ux.hypot(uy);
            let a = verts[v];
            (a, (a.0 + reach * ux / norm, a.1 + reach * uy / norm))
        })
        .collect();
    (verts, legs)
}

fn draw_curve<S: Scalar>(out: &mut String, f: &Frame, c: &PlaneCurve<S>, verts: &[Pt], legs: &[(Pt, Pt)], color: &str) {
    for e in c.base.edges() {
        line(out, f, verts[e.ends[0]], verts[e.ends[1]], color, 2.0, false);
    }
    for &(a, b) in legs {
        line(out, f, a, b, color, 2.0, true);
    }
    for &v in verts {
        dot(out, f, v, color, 3.0);
    }
}

fn document(width: f64, body: &str) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{PANEL}\" viewBox=\"0 0 {width} {PANEL}\">\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n{body}</svg>\n"
    )
}

/// The curve, and when given its dual subdivision beside it.
pub fn curve_svg<S: Scalar>(c: &PlaneCurve<S>, sub: Option<&DualSubdivision<S>>) -> String {
    let mut body = String::new();
    let (verts, legs) = curve_points(c);
    let mut all = verts.clone();
    all.extend(legs.iter().map(|l| l.1));
    let f = Frame::fit(&all, 0.0);
    draw_curve(&mut body, &f, c, &verts, &legs, COLORS[0]);
    let Some(sub) = sub else { return document(PANEL, &body) };
    let poly = |p: &Polygon<S>| p.vertices.iter().map(pt).collect::<Vec<_>>();
    let outer = poly(&sub.outer);
    let g = Frame::fit(&outer, PANEL);
    polygon(&mut body, &g, &outer, "none", "black");
    for (_, cell) in &sub.cells {
        polygon(&mut body, &g, &poly(cell), COLORS[2], COLORS[2]);
    }
    document(2.0 * PANEL, &body)
}

/// Several curves in one panel, with the marked points.
pub fn curves_svg<S: Scalar>(curves: &[PlaneCurve<S>], points: &[Vec2<S>]) -> String {
    let drawn: Vec<_> = curves.iter().map(curve_points).collect();
    let mut all: Vec<Pt> = points.iter().map(pt).collect();
    for (v, l) in &drawn {
        all.extend(v);
        all.extend(l.iter().map(|x| x.1));
    }
    let f = Frame::fit(&all, 0.0);
    let mut body = String::new();
    for (i, (c, (v, l))) in curves.iter().zip(&drawn).enumerate() {
        draw_curve(&mut body, &f, c, v, l, COLORS[i % COLORS.len()]);
    }
    for p in points {
        dot(&mut body, &f, pt(p), "black", 5.0);
    }
    document(PANEL, &body)
}
