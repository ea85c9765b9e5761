//! Horoball neighbourhoods of cusps and horocyclic truncation.

use crate::dirichlet::{cusp_frame, DirichletPolygon, VertexKind, VertexPoint};
use crate::enumeration::GroupBall;
use crate::error::{Error, Result};
use crate::isometry::{BoundaryPoint, Isometry, UhpPoint};

/// The horoball `sigma·{Im z > height}` at `cusp = sigma·∞`.
#[derive(Clone, Copy, Debug)]
pub struct HoroballSpec {
    pub cusp: BoundaryPoint,
    /// Index of the cusp vertex in the polygon.
    pub vertex: usize,
    pub height: f64,
    pub sigma: Isometry,
}

impl HoroballSpec {
    /// Height of `z` in the cusp frame.
    pub fn height_of(&self, z: UhpPoint) -> f64 {
        self.sigma.inverse().apply(z).y
    }

    pub fn contains(&self, z: UhpPoint) -> bool {
        self.height_of(z) > self.height
    }
}

/// Heights tried, smallest (largest horoball) first.
pub const HEIGHT_SCHEDULE: [f64; 12] = [1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0, 128.0, 256.0, 512.0, 1024.0, 2048.0];

/// Whether `{Im > t}` in the frame `sigma` is moved off itself by every ball
/// element that does not fix the cusp. For `h = sigma^-1 g sigma = (a,b;c,d)`
/// with `c != 0`, the image is a horodisc of diameter `1/(c^2 t)`, which
/// misses `{Im > t}` exactly when `|c| t >= 1`.
pub fn stabilizer_property(sigma: &Isometry, height: f64, ball: &GroupBall) -> bool {
    let si = sigma.inverse();
    ball.iter().all(|e| {
        let h = si.compose(&e.element).compose(sigma);
        let c = h.c();
        c.abs() <= 1e-12 || c.abs() * height >= 1.0 - 1e-12
    })
}

/// Largest height of the part of the polygon boundary away from the cusp,
/// measured in the cusp frame.
fn max_height_away_from(p: &DirichletPolygon, v: usize, sigma: &Isometry) -> f64 {
    let si = sigma.inverse();
    let (sp, sn) = p.sides_at(v);
    let mut best: f64 = 0.0;
    for (s, side) in p.sides.iter().enumerate() {
        if s == sp || s == sn {
            continue;
        }
        let end_h = |w: usize| match p.vertices[w].point {
            VertexPoint::Interior(z) => si.apply(z).y,
            VertexPoint::Ideal(b) => match si.apply_boundary(b) {
                BoundaryPoint::Infinity => f64::INFINITY,
                BoundaryPoint::Real(_) => 0.0,
            },
        };
        best = best.max(end_h(side.start)).max(end_h(side.end));
        if let Some([a, b]) = side.line {
            // the side is part of a semicircle in the cusp frame
            if let (BoundaryPoint::Real(a), BoundaryPoint::Real(b)) = (si.apply_boundary(a), si.apply_boundary(b)) {
                let xs = |w: usize| match p.vertices[w].point {
                    VertexPoint::Interior(z) => si.apply(z).x,
                    VertexPoint::Ideal(q) => match si.apply_boundary(q) {
                        BoundaryPoint::Real(x) => x,
                        BoundaryPoint::Infinity => f64::INFINITY,
                    },
                };
                let (x1, x2) = (xs(side.start), xs(side.end));
                let mid = 0.5 * (a + b);
                if (x1.min(x2)..=x1.max(x2)).contains(&mid) {
                    best = best.max(0.5 * (a - b).abs());
                }
            } else {
                best = f64::INFINITY;
            }
        }
    }
    best
}

/// For each cusp vertex, the first height in [`HEIGHT_SCHEDULE`] whose
/// horoball is precisely invariant under the cusp stabilizer over the ball
/// and meets the polygon only in the cusp wedge.
pub fn select_horoballs(p: &DirichletPolygon, ball: &GroupBall) -> Result<Vec<HoroballSpec>> {
    let mut out = Vec::new();
    for (v, vert) in p.vertices.iter().enumerate() {
        let (VertexPoint::Ideal(cusp), VertexKind::Cusp { .. }) = (vert.point, &vert.kind) else { continue };
        let sigma = cusp_frame(cusp);
        let wedge_top = max_height_away_from(p, v, &sigma);
        let height = HEIGHT_SCHEDULE
            .iter()
            .copied()
            .find(|&t| t >= wedge_top && stabilizer_property(&sigma, t, ball))
            .ok_or_else(|| Error::NoHoroballHeight { cusp: cusp.to_string() })?;
        out.push(HoroballSpec { cusp, vertex: v, height, sigma });
    }
    Ok(out)
}

/// The polygon with the horoballs removed.
pub fn truncate(p: &DirichletPolygon, horoballs: &[HoroballSpec]) -> Result<DirichletPolygon> {
    let cuts: Vec<(usize, Isometry, f64)> = horoballs.iter().map(|h| (h.vertex, h.sigma, h.height)).collect();
    p.truncated(&cuts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dirichlet::{area, build_polygon};
    use crate::enumeration::{norm_ball, GroupPresentation};
    use std::f64::consts::PI;

    #[test]
    fn modular_cusp_height_one() {
        let g = GroupPresentation::modular();
        let z0 = UhpPoint::at(0.0, 2.0);
        let ball = norm_ball(&g, z0, 4.0).unwrap();
        let p = build_polygon(z0, &ball).unwrap();
        let h = select_horoballs(&p, &ball).unwrap();
        assert_eq!(h.len(), 1);
        assert_eq!(h[0].height, 1.0);
        assert!(!stabilizer_property(&Isometry::identity(), 0.5, &ball));
        let t = truncate(&p, &h).unwrap();
        assert!(t.vertices.iter().all(|v| v.point.interior().is_some()));
        assert!((area(&t) - (PI / 3.0 - 1.0)).abs() < 1e-9);
        let big = truncate(&p, &[HoroballSpec { height: 1e6, ..h[0] }]).unwrap();
        assert!((area(&big) - PI / 3.0).abs() < 1e-5);
    }

    #[test]
    fn translation_group_takes_schedule_head() {
        let g = GroupPresentation::exact("T", &[[1, 1, 0, 1]], true).unwrap();
        let ball = norm_ball(&g, UhpPoint::i(), 4.0).unwrap();
        let p = build_polygon(UhpPoint::i(), &ball).unwrap();
        let h = select_horoballs(&p, &ball).unwrap();
        assert_eq!(h.len(), 1);
        assert_eq!(h[0].height, HEIGHT_SCHEDULE[0]);
    }
}
