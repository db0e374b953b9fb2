//! Static SVG 1.1 rendering of a planar scenario and an iterate path.
//!
//! One `<path>` per set (constraint outlined, targets filled) and one
//! `<polyline>` for the trajectory. Unbounded sets are clipped to the viewport.

use std::fmt::Write;

use heron_core::geometry::ConvexSet;
use heron_core::oracle::default_bounding_box;
use heron_core::{Scenario, Vector};

use crate::error::CliError;

const WIDTH: f64 = 800.0;
const MARGIN: f64 = 0.1;
const POINT_RADIUS_PX: f64 = 3.0;

/// World rectangle `[x0, x1] x [y0, y1]` mapped onto the pixel canvas, y up.
#[derive(Debug, Clone, Copy)]
struct Viewport {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
    scale: f64,
}

impl Viewport {
    fn px(&self, x: f64, y: f64) -> (f64, f64) {
        ((x - self.x0) * self.scale, (self.y1 - y) * self.scale)
    }

    fn height(&self) -> f64 {
        (self.y1 - self.y0) * self.scale
    }

    fn corners(&self) -> Vec<(f64, f64)> {
        vec![
            (self.x0, self.y0),
            (self.x1, self.y0),
            (self.x1, self.y1),
            (self.x0, self.y1),
        ]
    }
}

fn viewport(sc: &Scenario, path: &[Vector]) -> Viewport {
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    let mut grow = |p: &Vector| {
        for j in 0..2 {
            lo[j] = lo[j].min(p[j]);
            hi[j] = hi[j].max(p[j]);
        }
    };
    if let Ok((l, h)) = default_bounding_box(sc) {
        grow(&l);
        grow(&h);
    }
    for t in sc.targets() {
        if let Some((l, h)) = t.bounding_box() {
            grow(&l);
            grow(&h);
        }
    }
    path.iter().for_each(&mut grow);
    if !lo[0].is_finite() {
        lo = [-1.0, -1.0];
        hi = [1.0, 1.0];
    }
    // square up degenerate extents
    let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-9);
    for j in 0..2 {
        if hi[j] - lo[j] < 1e-9 {
            lo[j] -= 0.5 * span;
            hi[j] += 0.5 * span;
        }
    }
    let (mx, my) = (MARGIN * (hi[0] - lo[0]), MARGIN * (hi[1] - lo[1]));
    let (x0, x1, y0, y1) = (lo[0] - mx, hi[0] + mx, lo[1] - my, hi[1] + my);
    Viewport {
        x0,
        x1,
        y0,
        y1,
        scale: WIDTH / (x1 - x0),
    }
}

fn polygon(vp: &Viewport, pts: &[(f64, f64)]) -> String {
    let mut d = String::new();
    for (i, &(x, y)) in pts.iter().enumerate() {
        let (px, py) = vp.px(x, y);
        let _ = write!(d, "{}{px:.2} {py:.2} ", if i == 0 { "M" } else { "L" });
    }
    if !pts.is_empty() {
        d.push('Z');
    }
    d
}

fn dot(vp: &Viewport, x: f64, y: f64) -> String {
    let (cx, cy) = vp.px(x, y);
    circle_px(cx, cy, POINT_RADIUS_PX)
}

fn circle_px(cx: f64, cy: f64, r: f64) -> String {
    format!(
        "M{:.2} {cy:.2} A{r:.2} {r:.2} 0 1 0 {:.2} {cy:.2} A{r:.2} {r:.2} 0 1 0 {:.2} {cy:.2} Z",
        cx - r,
        cx + r,
        cx - r
    )
}

/// Keeps the part of `pts` with `n . p <= c` (one Sutherland-Hodgman pass).
fn clip_halfplane(pts: &[(f64, f64)], n: (f64, f64), c: f64) -> Vec<(f64, f64)> {
    let f = |p: (f64, f64)| n.0 * p.0 + n.1 * p.1 - c;
    let mut out = Vec::new();
    for i in 0..pts.len() {
        let a = pts[i];
        let b = pts[(i + 1) % pts.len()];
        let (fa, fb) = (f(a), f(b));
        if fa <= 0.0 {
            out.push(a);
        }
        if (fa < 0.0 && fb > 0.0) || (fa > 0.0 && fb < 0.0) {
            let t = fa / (fa - fb);
            out.push((a.0 + t * (b.0 - a.0), a.1 + t * (b.1 - a.1)));
        }
    }
    out
}

/// Segment of the line `p + t u` inside the viewport (Liang-Barsky).
fn clip_line(vp: &Viewport, p: &Vector, u: &Vector) -> Option<((f64, f64), (f64, f64))> {
    let (mut t0, mut t1) = (f64::NEG_INFINITY, f64::INFINITY);
    for (pj, uj, lo, hi) in [(p[0], u[0], vp.x0, vp.x1), (p[1], u[1], vp.y0, vp.y1)] {
        if uj.abs() < 1e-15 {
            if pj < lo || pj > hi {
                return None;
            }
            continue;
        }
        let (a, b) = ((lo - pj) / uj, (hi - pj) / uj);
        t0 = t0.max(a.min(b));
        t1 = t1.min(a.max(b));
    }
    (t0 <= t1).then(|| {
        (
            (p[0] + t0 * u[0], p[1] + t0 * u[1]),
            (p[0] + t1 * u[0], p[1] + t1 * u[1]),
        )
    })
}

fn set_path(vp: &Viewport, set: &ConvexSet) -> String {
    match set {
        ConvexSet::Singleton(p) => dot(vp, p[0], p[1]),
        ConvexSet::Ball(b) => {
            let (cx, cy) = vp.px(b.center()[0], b.center()[1]);
            circle_px(cx, cy, b.radius() * vp.scale)
        }
        ConvexSet::Box(b) => {
            let (lo, hi) = (b.lower(), b.upper());
            polygon(
                vp,
                &[
                    (lo[0], lo[1]),
                    (hi[0], lo[1]),
                    (hi[0], hi[1]),
                    (lo[0], hi[1]),
                ],
            )
        }
        ConvexSet::Affine(a) => match a.directions() {
            [] => dot(vp, a.base()[0], a.base()[1]),
            [u] => match clip_line(vp, a.base(), u) {
                Some((p, q)) => {
                    let (p, q) = (vp.px(p.0, p.1), vp.px(q.0, q.1));
                    format!("M{:.2} {:.2} L{:.2} {:.2}", p.0, p.1, q.0, q.1)
                }
                None => String::new(),
            },
            _ => polygon(vp, &vp.corners()),
        },
        ConvexSet::Halfspace(h) => {
            let n = h.normal();
            polygon(vp, &clip_halfplane(&vp.corners(), (n[0], n[1]), h.offset()))
        }
    }
}

/// Renders a 2D scenario and the iterate path as an SVG document.
pub fn render(sc: &Scenario, path: &[Vector]) -> Result<String, CliError> {
    if sc.dim() != 2 {
        return Err(CliError::Schema(format!(
            "--plot: only 2D scenarios can be rendered, this one has dimension {}",
            sc.dim()
        )));
    }
    let vp = viewport(sc, path);
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.2} {h:.2}">"#,
        w = WIDTH,
        h = vp.height()
    );
    let _ = writeln!(
        out,
        r##"<rect width="100%" height="100%" fill="#ffffff"/>"##
    );
    let _ = writeln!(
        out,
        r##"<path class="constraint" d="{}" fill="none" stroke="#1f4e9c" stroke-width="2"/>"##,
        set_path(&vp, sc.constraint())
    );
    for (i, t) in sc.targets().iter().enumerate() {
        let _ = writeln!(
            out,
            r##"<path class="target" id="target-{i}" d="{}" fill="#e0843a" fill-opacity="0.6" stroke="#8a4512" stroke-width="1"/>"##,
            set_path(&vp, t)
        );
    }
    let mut points = String::new();
    for p in path {
        let (x, y) = vp.px(p[0], p[1]);
        let _ = write!(points, "{x:.2},{y:.2} ");
    }
    let _ = writeln!(
        out,
        r##"<polyline class="trajectory" points="{}" fill="none" stroke="#c21d3a" stroke-width="1"/>"##,
        points.trim_end()
    );
    out.push_str("</svg>\n");
    Ok(out)
}
