//! Static SVG rendering of polygon presentations.
//!
//! Polygons are laid out left to right in their own coordinates, pairings
//! are labelled at edge midpoints (with the gluing derivative when it is not
//! 1), and vertex classes are annotated at each corner. Output is a pure
//! function of the surface, so figures are reproducible.

use crate::num::rat_to_f64;
use crate::surface::{Angle, DilationSurface};
use std::fmt::Write as _;

const POLY_GAP: f64 = 0.35;
const SCALE: f64 = 120.0;

pub fn render_svg(s: &DilationSurface) -> String {
    // per-polygon horizontal offsets so chambers do not overlap
    let mut offsets = Vec::new();
    let mut cursor = 0.0f64;
    let mut min_y = f64::INFINITY;
    let mut max_y = f64::NEG_INFINITY;
    for poly in &s.spec.polygons {
        let xs: Vec<f64> = poly.iter().map(|p| rat_to_f64(&p.re)).collect();
        let ys: Vec<f64> = poly.iter().map(|p| rat_to_f64(&p.im)).collect();
        let (lo_x, hi_x) = bounds(&xs);
        let (lo_y, hi_y) = bounds(&ys);
        offsets.push(cursor - lo_x);
        cursor += hi_x - lo_x + POLY_GAP;
        min_y = min_y.min(lo_y);
        max_y = max_y.max(hi_y);
    }
    let width = (cursor - POLY_GAP) * SCALE + 40.0;
    let height = (max_y - min_y) * SCALE + 60.0;
    let tx = |p: usize, x: f64| -> f64 { (x + offsets[p]) * SCALE + 20.0 };
    let ty = |y: f64| -> f64 { (max_y - y) * SCALE + 30.0 };

    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {width:.1} {height:.1}\">"
    );
    out.push_str("<style>text{font-family:monospace;font-size:11px}</style>\n");

    for (pi, poly) in s.spec.polygons.iter().enumerate() {
        let mut points = String::new();
        for v in poly {
            let (x, y) = v.to_f64();
            let _ = write!(points, "{:.2},{:.2} ", tx(pi, x), ty(y));
        }
        let _ = writeln!(
            out,
            "<polygon points=\"{}\" fill=\"#eef2f7\" stroke=\"#333\" stroke-width=\"1\"/>",
            points.trim_end()
        );
    }

    // pairing labels at edge midpoints
    for (idx, &(a, b)) in s.spec.pairings.iter().enumerate() {
        let g = &s.gluings[idx];
        let label = if g.a.is_positive_real() && g.a.re == num::One::one() {
            format!("e{idx}")
        } else if g.a.is_positive_real() {
            format!("e{idx} a={}", g.a.re)
        } else {
            let (re, im) = g.a.to_f64();
            format!("e{idx} a={re:.3}+{im:.3}i")
        };
        for e in [a, b] {
            let (u, w) = s.edge_endpoints(e);
            let (ux, uy) = u.to_f64();
            let (wx, wy) = w.to_f64();
            let (mx, my) = ((ux + wx) / 2.0, (uy + wy) / 2.0);
            let _ = writeln!(
                out,
                "<text x=\"{:.2}\" y=\"{:.2}\" fill=\"#0a6\">{label}</text>",
                tx(e.polygon, mx),
                ty(my)
            );
        }
    }

    // vertex class annotations at the canonical corner of each class
    for (ci, class) in s.vertex_classes.iter().enumerate() {
        let c = class.corners[0];
        let v = &s.spec.polygons[c.polygon][c.vertex];
        let (x, y) = v.to_f64();
        let angle = match &class.angle {
            Angle::Turns(k) => format!("{k}·2π"),
            Angle::Approx(t) => format!("{t:.4}·2π"),
        };
        let _ = writeln!(
            out,
            "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"#c33\"/><text x=\"{:.2}\" y=\"{:.2}\" fill=\"#c33\">v{ci} {angle}</text>",
            tx(c.polygon, x),
            ty(y),
            tx(c.polygon, x) + 5.0,
            ty(y) - 5.0
        );
    }

    out.push_str("</svg>\n");
    out
}

fn bounds(v: &[f64]) -> (f64, f64) {
    let lo = v.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    (lo, hi)
}
