//! SVG rendering of the exact free-space diagram of a curve pair, with the
//! reachable region, signature columns and candidate passages overlaid.

use crate::curves::Curve;
use crate::error::{Error, Result};
use crate::oracle::free_space_reachable;
use crate::signatures::ell_delta_signature;
use crate::sparsity::build_passage_index;

/// Largest vertex count either curve may have; the rendering is backed by
/// the quadratic oracle.
pub const MAX_RENDER_VERTICES: usize = 512;

/// Clip the unit square by a half-plane a*s + b*t <= c (Sutherland-Hodgman).
fn clip(poly: Vec<(f64, f64)>, a: f64, b: f64, c: f64) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(poly.len() + 2);
    let inside = |p: (f64, f64)| a * p.0 + b * p.1 <= c;
    for i in 0..poly.len() {
        let cur = poly[i];
        let prev = poly[(i + poly.len() - 1) % poly.len()];
        let ci = inside(cur);
        let pi = inside(prev);
        if ci != pi {
            let da = a * (cur.0 - prev.0) + b * (cur.1 - prev.1);
            let t = (c - a * prev.0 - b * prev.1) / da;
            out.push((prev.0 + t * (cur.0 - prev.0), prev.1 + t * (cur.1 - prev.1)));
        }
        if ci {
            out.push(cur);
        }
    }
    out
}

/// Exact free region of one cell as a convex polygon in cell coordinates.
fn cell_polygon(p: &Curve, q: &Curve, pe: usize, qe: usize, delta: f64) -> Vec<(f64, f64)> {
    let mut poly = vec![(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)];
    let pa = p.vertex(pe);
    let pb = p.vertex(pe + 1);
    let qa = q.vertex(qe);
    let qb = q.vertex(qe + 1);
    for c in 0..p.dim() {
        // |pa + s (pb - pa) - qa - t (qb - qa)| <= delta, coordinate c
        let u = pb[c] - pa[c];
        let v = qa[c] - qb[c];
        let w = qa[c] - pa[c];
        // u*s + v*t <= w + delta and -(u*s + v*t) <= -w + delta
        poly = clip(poly, u, v, w + delta);
        if poly.is_empty() {
            return poly;
        }
        poly = clip(poly, -u, -v, -w + delta);
        if poly.is_empty() {
            return poly;
        }
    }
    poly
}

/// Render the delta-free space of (P, Q) as an SVG document.
pub fn render_fsd(p: &Curve, q: &Curve, delta: f64) -> Result<String> {
    if p.len() > MAX_RENDER_VERTICES || q.len() > MAX_RENDER_VERTICES {
        return Err(Error::InvalidArgument(format!(
            "diagram too large: {}x{} cells exceeds the {MAX_RENDER_VERTICES}-vertex rendering guard",
            p.len(),
            q.len()
        )));
    }
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch(p.dim(), q.dim()));
    }
    let pe = p.len() - 1;
    let qe = q.len() - 1;
    let width = 840.0;
    let height = 840.0;
    let margin = 20.0;
    let sx = (width - 2.0 * margin) / pe as f64;
    let sy = (height - 2.0 * margin) / qe as f64;
    let px = |x: f64| margin + x * sx;
    let py = |y: f64| height - margin - y * sy;

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">\n"
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");

    // free space cells
    for i in 0..pe {
        for j in 0..qe {
            let poly = cell_polygon(p, q, i, j, delta);
            if poly.len() >= 3 {
                let pts: Vec<String> = poly
                    .iter()
                    .map(|(s, t)| format!("{:.3},{:.3}", px(i as f64 + s), py(j as f64 + t)))
                    .collect();
                svg.push_str(&format!(
                    "<polygon points=\"{}\" fill=\"#bdd7ee\" stroke=\"none\"/>\n",
                    pts.join(" ")
                ));
            }
        }
    }

    // grid
    for i in 0..=pe {
        svg.push_str(&format!(
            "<line x1=\"{0:.2}\" y1=\"{1:.2}\" x2=\"{0:.2}\" y2=\"{2:.2}\" stroke=\"#dddddd\" stroke-width=\"0.5\"/>\n",
            px(i as f64),
            py(0.0),
            py(qe as f64)
        ));
    }
    for j in 0..=qe {
        svg.push_str(&format!(
            "<line x1=\"{0:.2}\" y1=\"{2:.2}\" x2=\"{1:.2}\" y2=\"{2:.2}\" stroke=\"#dddddd\" stroke-width=\"0.5\"/>\n",
            px(0.0),
            px(pe as f64),
            py(j as f64)
        ));
    }

    // reachable boundary intervals
    let map = free_space_reachable(p, q, delta);
    for i in 0..=pe {
        for j in 0..qe {
            if let Some((lo, hi)) = map.vertical_reachable(i, j) {
                svg.push_str(&format!(
                    "<line x1=\"{0:.2}\" y1=\"{1:.2}\" x2=\"{0:.2}\" y2=\"{2:.2}\" stroke=\"#2e7d32\" stroke-width=\"2.5\"/>\n",
                    px(i as f64),
                    py(j as f64 + lo),
                    py(j as f64 + hi)
                ));
            }
        }
    }
    for i in 0..pe {
        for j in 0..=qe {
            if let Some((lo, hi)) = map.horizontal_reachable(i, j) {
                svg.push_str(&format!(
                    "<line x1=\"{0:.2}\" y1=\"{2:.2}\" x2=\"{1:.2}\" y2=\"{2:.2}\" stroke=\"#2e7d32\" stroke-width=\"2.5\"/>\n",
                    px(i as f64 + lo),
                    px(i as f64 + hi),
                    py(j as f64)
                ));
            }
        }
    }

    // signature columns and their candidate passages
    let idx = build_passage_index(q);
    let colors = ["#c62828", "#6a1b9a", "#ef6c00"];
    if delta > 0.0 {
        for axis in 0..p.dim() {
            let sig = ell_delta_signature(p, axis, delta)?;
            let proj = p.project(axis)?;
            let color = colors[axis % colors.len()];
            for t in &sig.params {
                let x = t.key();
                svg.push_str(&format!(
                    "<line x1=\"{0:.2}\" y1=\"{1:.2}\" x2=\"{0:.2}\" y2=\"{2:.2}\" stroke=\"{color}\" stroke-width=\"1\" stroke-dasharray=\"6 3\"/>\n",
                    px(x),
                    py(0.0),
                    py(qe as f64)
                ));
                let sigma = proj.eval_coords(*t)[0];
                for pass in idx.candidate_passages(sigma, axis, delta) {
                    svg.push_str(&format!(
                        "<line x1=\"{0:.2}\" y1=\"{1:.2}\" x2=\"{0:.2}\" y2=\"{2:.2}\" stroke=\"{color}\" stroke-width=\"4\" opacity=\"0.65\"/>\n",
                        px(x),
                        py(pass.interval.lo * qe as f64),
                        py(pass.interval.hi * qe as f64)
                    ));
                }
            }
        }
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}
