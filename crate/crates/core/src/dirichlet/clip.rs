//! Convex clipping in a Klein disk centered at the polygon center, and
//! Minkowski-space helpers for exact geodesic intersections.

use crate::isometry::{BoundaryPoint, Isometry, KleinPoint, UhpPoint};

/// A half-plane `n·k <= c` of the Klein disk, `|n| = 1`, together with the
/// Minkowski normal of its boundary geodesic.
#[derive(Clone, Copy, Debug)]
pub(crate) struct KleinHalfPlane {
    pub n: [f64; 2],
    pub c: f64,
    /// Spacelike normal `N` of the boundary geodesic: `X` is on it iff `<X, N> = 0`.
    pub normal: [f64; 3],
    /// Endpoints of the boundary geodesic in the upper half-plane (global frame).
    pub ends: [BoundaryPoint; 2],
}

/// Minkowski form `-t t' + u u' + v v'`.
pub(crate) fn mdot(a: [f64; 3], b: [f64; 3]) -> f64 {
    -a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// A vector Minkowski-orthogonal to both inputs.
pub(crate) fn mcross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    let e = [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ];
    [-e[0], e[1], e[2]]
}

/// Intersection of two geodesics given by their normals, as a hyperboloid
/// point, or `None` when they do not meet inside the plane.
pub(crate) fn geodesic_intersection(n1: [f64; 3], n2: [f64; 3]) -> Option<[f64; 3]> {
    let x = mcross(n1, n2);
    let q = -mdot(x, x);
    if !(q > 0.0) {
        return None;
    }
    let s = q.sqrt() * x[0].signum();
    if s == 0.0 {
        return None;
    }
    Some([x[0] / s, x[1] / s, x[2] / s])
}

pub(crate) fn hyperboloid_to_uhp(x: [f64; 3]) -> UhpPoint {
    // t - u = 1/y, v = -x/y
    let y = 1.0 / (x[0] - x[1]);
    UhpPoint { x: -x[2] * y, y }
}

#[cfg(test)]
pub(crate) fn klein_of(x: [f64; 3]) -> KleinPoint {
    KleinPoint { x: x[1] / x[0], y: x[2] / x[0] }
}

/// Null vector of a boundary point given in the (local) Klein disk.
pub(crate) fn null_of(k: KleinPoint) -> [f64; 3] {
    [1.0, k.x, k.y]
}

impl KleinHalfPlane {
    /// Half-plane of points at least as close to the local center as to the
    /// local point `p` (the bisector half-plane of `i` and `p`).
    pub fn bisector(p_local: UhpPoint, ends: [BoundaryPoint; 2]) -> Option<Self> {
        let [t, u, v] = p_local.hyperboloid();
        let w = u.hypot(v);
        if !(w > 0.0) {
            return None;
        }
        // closer to (1,0,0): (u, v)·k <= t - 1 ; normalized by sqrt(t^2 - 1) = |(u,v)|
        let n = [u / w, v / w];
        let c = (t - 1.0) / w;
        let normal = [1.0 - t, -u, -v];
        Some(Self { n, c, normal, ends })
    }

    /// Half-plane bounded by the chord through two local boundary points,
    /// keeping the side away from `away`.
    pub fn chord(p: KleinPoint, q: KleinPoint, away: KleinPoint, ends: [BoundaryPoint; 2]) -> Self {
        let (dx, dy) = (q.x - p.x, q.y - p.y);
        let len = dx.hypot(dy);
        let mut n = [-dy / len, dx / len];
        let mut c = n[0] * p.x + n[1] * p.y;
        if n[0] * away.x + n[1] * away.y < c {
            n = [-n[0], -n[1]];
            c = -c;
        }
        let normal = mcross(null_of(p), null_of(q));
        Self { n, c, normal, ends }
    }

    pub fn value(&self, k: KleinPoint) -> f64 {
        self.n[0] * k.x + self.n[1] * k.y - self.c
    }
}

/// Vertex of a clipped polygon with the label of the edge leaving it.
#[derive(Clone, Copy, Debug)]
pub(crate) struct ClipVertex {
    pub p: KleinPoint,
    pub edge: Option<usize>,
}

const CLIP_EPS: f64 = 1e-13;

/// Counterclockwise square containing the closed unit disk.
pub(crate) fn initial_box() -> Vec<ClipVertex> {
    let r = 1.5;
    [(-r, -r), (r, -r), (r, r), (-r, r)]
        .iter()
        .map(|&(x, y)| ClipVertex { p: KleinPoint { x, y }, edge: None })
        .collect()
}

/// Clips a convex counterclockwise polygon by `plane`, labelling new edges with `label`.
pub(crate) fn clip(poly: &[ClipVertex], plane: &KleinHalfPlane, label: usize) -> Vec<ClipVertex> {
    let n = poly.len();
    if n == 0 {
        return Vec::new();
    }
    let vals: Vec<f64> = poly.iter().map(|v| plane.value(v.p)).collect();
    if vals.iter().all(|&v| v <= CLIP_EPS) {
        return poly.to_vec();
    }
    let mut out = Vec::with_capacity(n + 1);
    for i in 0..n {
        let j = (i + 1) % n;
        let (a, b) = (poly[i], poly[j]);
        let (va, vb) = (vals[i], vals[j]);
        let a_in = va <= CLIP_EPS;
        let b_in = vb <= CLIP_EPS;
        if a_in {
            out.push(a);
        }
        if a_in != b_in {
            let s = va / (va - vb);
            let p = KleinPoint { x: a.p.x + s * (b.p.x - a.p.x), y: a.p.y + s * (b.p.y - a.p.y) };
            if a_in {
                // leaving: the new edge runs along the clip line
                out.push(ClipVertex { p, edge: Some(label) });
            } else {
                out.push(ClipVertex { p, edge: a.edge });
            }
        }
    }
    // drop degenerate edges
    let mut cleaned: Vec<ClipVertex> = Vec::with_capacity(out.len());
    for v in out {
        if let Some(last) = cleaned.last_mut() {
            if last.p.dist(&v.p) < 1e-14 {
                last.edge = v.edge;
                continue;
            }
        }
        cleaned.push(v);
    }
    while cleaned.len() > 1 && cleaned[0].p.dist(&cleaned[cleaned.len() - 1].p) < 1e-14 {
        cleaned.pop();
    }
    cleaned
}

/// Parameters `[lo, hi]` of the part of segment `a -> b` inside the closed unit disk.
pub(crate) fn disk_interval(a: KleinPoint, b: KleinPoint) -> Option<(f64, f64, bool, bool)> {
    let d = [b.x - a.x, b.y - a.y];
    let qa = d[0] * d[0] + d[1] * d[1];
    if qa == 0.0 {
        return None;
    }
    let qb = a.x * d[0] + a.y * d[1];
    let qc = a.x * a.x + a.y * a.y - 1.0;
    let disc = qb * qb - qa * qc;
    if disc <= 0.0 {
        return None;
    }
    let r = disc.sqrt();
    let s0 = (-qb - r) / qa;
    let s1 = (-qb + r) / qa;
    let lo = s0.max(0.0);
    let hi = s1.min(1.0);
    if hi - lo <= 1e-14 {
        return None;
    }
    Some((lo, hi, s0 >= 0.0, s1 <= 1.0))
}

/// The local frame: `frame·i = center`. Returns its inverse for mapping into
/// the local disk.
pub(crate) fn local_frame(center: UhpPoint) -> (Isometry, Isometry) {
    let f = Isometry::frame_at(center);
    (f, f.inverse())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::isometry::{dist, to_klein};

    #[test]
    fn intersection_is_equidistant() {
        let z0 = UhpPoint::i();
        let p1 = UhpPoint::at(1.0, 1.0);
        let p2 = UhpPoint::at(0.0, 3.0);
        let n1 = {
            let [t, u, v] = p1.hyperboloid();
            [1.0 - t, -u, -v]
        };
        let n2 = {
            let [t, u, v] = p2.hyperboloid();
            [1.0 - t, -u, -v]
        };
        let x = geodesic_intersection(n1, n2).unwrap();
        let w = hyperboloid_to_uhp(x);
        assert!((dist(w, z0) - dist(w, p1)).abs() < 1e-12);
        assert!((dist(w, z0) - dist(w, p2)).abs() < 1e-12);
        let k = klein_of(x);
        let k2 = to_klein(w);
        assert!(k.dist(&k2) < 1e-12);
    }

    #[test]
    fn clip_square_by_half_plane() {
        let hp = KleinHalfPlane::bisector(UhpPoint::at(0.0, 4.0), [BoundaryPoint::Real(-2.0), BoundaryPoint::Real(2.0)])
            .unwrap();
        let out = clip(&initial_box(), &hp, 0);
        assert_eq!(out.len(), 4);
        assert!(out.iter().any(|v| v.edge == Some(0)));
        for v in &out {
            assert!(hp.value(v.p) <= 1e-12);
        }
    }
}
