//! SVG drawings of polygons in the Poincaré disk centred at the polygon's center.

use std::fmt::Write as _;

use crate::dirichlet::{DirichletPolygon, SideKind, VertexPoint};
use crate::enumeration::GroupPresentation;
use crate::isometry::{from_klein, to_klein, BoundaryPoint, Isometry, KleinPoint, UhpPoint};

const STEPS: usize = 48;

#[derive(Clone, Copy, Debug)]
enum Pt {
    In(UhpPoint),
    Bd(BoundaryPoint),
}

impl Pt {
    fn map(self, g: &Isometry) -> Pt {
        match self {
            Pt::In(z) => Pt::In(g.apply(z)),
            Pt::Bd(b) => Pt::Bd(g.apply_boundary(b)),
        }
    }
}

/// Klein coordinates in the disk centred at `center` mapped to the Poincaré disk.
fn poincare(k: KleinPoint) -> (f64, f64) {
    let s = 1.0 + (1.0 - k.x * k.x - k.y * k.y).max(0.0).sqrt();
    (k.x / s, k.y / s)
}

struct View {
    inv: Isometry,
    size: f64,
}

impl View {
    fn new(center: UhpPoint, size: f64) -> Self {
        Self { inv: Isometry::frame_at(center).inverse(), size }
    }

    fn disk(&self, p: Pt) -> (f64, f64) {
        let k = match p {
            Pt::In(z) => to_klein(self.inv.apply(z)),
            Pt::Bd(b) => self.inv.apply_boundary(b).to_klein(),
        };
        poincare(k)
    }

    fn px(&self, p: Pt) -> (f64, f64) {
        self.scale(self.disk(p))
    }

    fn scale(&self, (x, y): (f64, f64)) -> (f64, f64) {
        let r = 0.47 * self.size;
        (0.5 * self.size + r * x, 0.5 * self.size - r * y)
    }
}

fn vertex_pt(p: &DirichletPolygon, v: usize) -> Pt {
    match p.vertices[v].point {
        VertexPoint::Interior(z) => Pt::In(z),
        VertexPoint::Ideal(b) => Pt::Bd(b),
    }
}

/// Points along side `s`, start included, end excluded.
fn side_outline(p: &DirichletPolygon, s: usize) -> Vec<Pt> {
    let f = Isometry::frame_at(p.center);
    let inv = f.inverse();
    let side = &p.sides[s];
    let (a, b) = (vertex_pt(p, side.start), vertex_pt(p, side.end));
    let klein = |q: Pt| match q {
        Pt::In(z) => to_klein(inv.apply(z)),
        Pt::Bd(x) => inv.apply_boundary(x).to_klein(),
    };
    let (ka, kb) = (klein(a), klein(b));
    let mut out = vec![a];
    match &side.kind {
        SideKind::Paired { .. } | SideKind::Cut => {
            for j in 1..STEPS {
                let t = j as f64 / STEPS as f64;
                let k = KleinPoint { x: ka.x + t * (kb.x - ka.x), y: ka.y + t * (kb.y - ka.y) };
                if let Ok(z) = from_klein(k) {
                    out.push(Pt::In(f.apply(z)));
                }
            }
        }
        SideKind::Free => {
            let (mx, my) = (0.5 * (ka.x + kb.x), 0.5 * (ka.y + kb.y));
            let t0 = ka.y.atan2(ka.x);
            let mut dt = (kb.y.atan2(kb.x) - t0).rem_euclid(std::f64::consts::TAU);
            let mid = t0 + 0.5 * dt;
            if mid.cos() * mx + mid.sin() * my < 0.0 {
                dt -= std::f64::consts::TAU;
            }
            for j in 1..STEPS {
                let t = t0 + dt * j as f64 / STEPS as f64;
                let q = BoundaryPoint::from_klein(KleinPoint { x: t.cos(), y: t.sin() });
                out.push(Pt::Bd(f.apply_boundary(q)));
            }
        }
        SideKind::Horocycle { sigma, height, .. } => {
            let si = sigma.inverse();
            let x = |q: Pt| match q {
                Pt::In(z) => si.apply(z).x,
                Pt::Bd(BoundaryPoint::Real(r)) => r,
                Pt::Bd(BoundaryPoint::Infinity) => 0.0,
            };
            let (xa, xb) = (x(a), x(b));
            for j in 1..STEPS {
                let t = j as f64 / STEPS as f64;
                out.push(Pt::In(sigma.apply(UhpPoint { x: xa + t * (xb - xa), y: *height })));
            }
        }
    }
    out
}

fn outline(p: &DirichletPolygon) -> Vec<Pt> {
    (0..p.sides.len()).flat_map(|s| side_outline(p, s)).collect()
}

fn path(view: &View, pts: &[Pt]) -> String {
    let mut d = String::new();
    for (i, q) in pts.iter().enumerate() {
        let (x, y) = view.px(*q);
        let _ = write!(d, "{}{x:.2},{y:.2} ", if i == 0 { "M" } else { "L" });
    }
    d.push('Z');
    d
}

/// Extra marks drawn over the polygon.
#[derive(Clone, Debug, Default)]
pub struct SvgOptions {
    /// Width and height in pixels; 600 when zero.
    pub size: f64,
    /// Translates `g·P` drawn behind the polygon.
    pub tiles: Vec<Isometry>,
    pub points: Vec<(UhpPoint, String)>,
    /// Geodesic segments between pairs of points.
    pub segments: Vec<(UhpPoint, UhpPoint)>,
    pub labels: bool,
}

/// Maps a pixel of a drawing made with [`render_polygon`] back to the
/// upper half-plane, or `None` outside the disk.
pub fn pixel_to_uhp(center: UhpPoint, size: f64, px: f64, py: f64) -> Option<UhpPoint> {
    let size = if size > 0.0 { size } else { 600.0 };
    let r = 0.47 * size;
    let (x, y) = ((px - 0.5 * size) / r, (0.5 * size - py) / r);
    let n2 = x * x + y * y;
    if n2 >= 1.0 {
        return None;
    }
    let s = 2.0 / (1.0 + n2);
    let z = from_klein(KleinPoint { x: x * s, y: y * s }).ok()?;
    Some(Isometry::frame_at(center).apply(z))
}

pub fn render_polygon(group: &GroupPresentation, p: &DirichletPolygon, opts: &SvgOptions) -> String {
    let size = if opts.size > 0.0 { opts.size } else { 600.0 };
    let view = View::new(p.center, size);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    );
    let (cx, cy) = view.scale((0.0, 0.0));
    let _ = writeln!(
        s,
        r##"<circle cx="{cx:.2}" cy="{cy:.2}" r="{:.2}" fill="#fbfbf8" stroke="#333" stroke-width="1"/>"##,
        0.47 * size
    );
    let base = outline(p);
    for g in &opts.tiles {
        let pts: Vec<Pt> = base.iter().map(|q| q.map(g)).collect();
        let _ = writeln!(
            s,
            r##"<path d="{}" fill="#dfe8f1" fill-opacity="0.6" stroke="#7a8ca0" stroke-width="0.6"/>"##,
            path(&view, &pts)
        );
    }
    let _ = writeln!(
        s,
        r##"<path d="{}" fill="#f4d9a8" fill-opacity="0.8" stroke="#8a4b08" stroke-width="1.5"/>"##,
        path(&view, &base)
    );
    if opts.labels {
        for (i, side) in p.sides.iter().enumerate() {
            let pts = side_outline(p, i);
            let (x, y) = view.disk(pts[pts.len() / 2]);
            let (x, y) = view.scale((0.88 * x, 0.88 * y));
            let text = match &side.kind {
                SideKind::Paired { word: Some(w), .. } => group.format_word(w),
                SideKind::Paired { pairing, .. } => pairing.to_string(),
                SideKind::Free => "free".into(),
                SideKind::Cut => "cut".into(),
                SideKind::Horocycle { .. } => "horocycle".into(),
            };
            let _ = writeln!(
                s,
                r##"<text x="{x:.2}" y="{y:.2}" font-size="11" font-family="sans-serif" text-anchor="middle" fill="#5a2d00">{}</text>"##,
                escape(&text)
            );
        }
    }
    for &(a, b) in &opts.segments {
        let pts: Vec<Pt> = (0..=STEPS)
            .map(|j| Pt::In(crate::cover::sampling::toward(a, b, crate::dist(a, b) * j as f64 / STEPS as f64)))
            .collect();
        let mut d = path(&view, &pts);
        d.pop();
        let _ = writeln!(s, r##"<path d="{d}" fill="none" stroke="#b0232a" stroke-width="1.5"/>"##);
    }
    for (z, color) in &opts.points {
        let (x, y) = view.px(Pt::In(*z));
        let _ = writeln!(s, r#"<circle cx="{x:.2}" cy="{y:.2}" r="3.5" fill="{}"/>"#, escape(color));
    }
    let (x, y) = view.px(Pt::In(p.center));
    let _ = writeln!(s, r##"<circle cx="{x:.2}" cy="{y:.2}" r="2.5" fill="#222"/>"##);
    s.push_str("</svg>\n");
    s
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dirichlet::build_polygon;
    use crate::enumeration::norm_ball;

    #[test]
    fn renders_modular_domain() {
        let g = GroupPresentation::modular();
        let z0 = UhpPoint::at(0.0, 2.0);
        let ball = norm_ball(&g, z0, 4.0).unwrap();
        let p = build_polygon(z0, &ball).unwrap();
        let svg = render_polygon(&g, &p, &SvgOptions { labels: true, ..Default::default() });
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
        assert!(!svg.contains("NaN"));
        assert_eq!(svg.matches("<text").count(), p.sides.len());
    }

    #[test]
    fn pixel_round_trip() {
        let c = UhpPoint::at(0.3, 1.7);
        let v = View::new(c, 500.0);
        let z = UhpPoint::at(0.5, 1.1);
        let (x, y) = v.px(Pt::In(z));
        let back = pixel_to_uhp(c, 500.0, x, y).unwrap();
        assert!(crate::dist(z, back) < 1e-9);
        assert!(pixel_to_uhp(c, 500.0, 0.0, 0.0).is_none());
    }
}
