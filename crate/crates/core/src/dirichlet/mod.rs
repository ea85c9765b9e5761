//! Dirichlet domains as explicit polygons: construction by convex clipping in
//! the Klein disk, side pairings, vertex cycles, cusps and areas.

mod certify;
pub(crate) mod clip;

use std::f64::consts::PI;

use crate::enumeration::{GroupBall, Word};
use crate::error::{Error, Result};
use crate::isometry::{dist, to_klein, BoundaryPoint, FixedPoint, Geodesic, Isometry, IsometryClass, KleinPoint, UhpPoint};

use clip::{ClipVertex, KleinHalfPlane};

pub use certify::{certify_domain, reduce_to_domain, CertifiedDomain};

/// Klein-coordinate tolerance for merging vertices.
pub const VERTEX_TOL: f64 = 1e-9;
/// Tolerance for equidistance and congruence tests.
pub const BOUNDARY_TOL: f64 = 1e-9;

/// Position of a polygon vertex.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum VertexPoint {
    Interior(UhpPoint),
    Ideal(BoundaryPoint),
}

impl VertexPoint {
    pub fn interior(&self) -> Option<UhpPoint> {
        match self {
            VertexPoint::Interior(z) => Some(*z),
            VertexPoint::Ideal(_) => None,
        }
    }

    pub fn ideal(&self) -> Option<BoundaryPoint> {
        match self {
            VertexPoint::Ideal(p) => Some(*p),
            VertexPoint::Interior(_) => None,
        }
    }

    pub fn to_klein(&self) -> KleinPoint {
        match self {
            VertexPoint::Interior(z) => to_klein(*z),
            VertexPoint::Ideal(p) => p.to_klein(),
        }
    }

    /// Image under an isometry.
    pub fn map(&self, g: &Isometry) -> VertexPoint {
        match self {
            VertexPoint::Interior(z) => VertexPoint::Interior(g.apply(*z)),
            VertexPoint::Ideal(p) => VertexPoint::Ideal(g.apply_boundary(*p)),
        }
    }

    pub fn close_to(&self, other: &VertexPoint, tol: f64) -> bool {
        match (self, other) {
            (VertexPoint::Interior(a), VertexPoint::Interior(b)) => dist(*a, *b) <= tol,
            (VertexPoint::Ideal(a), VertexPoint::Ideal(b)) => a.close_to(b, tol),
            _ => false,
        }
    }
}

#[derive(Clone, Debug)]
pub enum VertexKind {
    Ordinary,
    Elliptic { order: u32 },
    /// Ideal vertex fixed by a parabolic element; `stabilizer` is primitive
    /// and translates in the positive direction in the cusp frame.
    Cusp { stabilizer: Isometry },
    /// Ideal vertex with no parabolic witness (endpoint of a free side, or unresolved).
    IdealFree,
}

#[derive(Clone, Debug)]
pub struct Vertex {
    pub point: VertexPoint,
    pub kind: VertexKind,
    /// Interior angle; zero at ideal vertices.
    pub angle: f64,
}

#[derive(Clone, Debug)]
pub enum SideKind {
    /// Segment of the bisector of `z0` and `pairing·z0`; `pairing^-1` maps it
    /// to the side labelled `pairing^-1`.
    Paired { pairing: Isometry, word: Option<Word> },
    /// Arc of the boundary at infinity.
    Free,
    /// Segment of an additional clipping geodesic.
    Cut,
    /// Horocyclic arc `Im(sigma^-1 z) = height` around a truncated cusp.
    Horocycle { cusp: BoundaryPoint, sigma: Isometry, height: f64 },
}

#[derive(Clone, Debug)]
pub struct Side {
    pub kind: SideKind,
    pub start: usize,
    pub end: usize,
    /// Endpoints at infinity of the supporting geodesic (geodesic sides only).
    pub line: Option<[BoundaryPoint; 2]>,
    /// Half-plane kept by a `Cut` side.
    pub keep: Option<Geodesic>,
}

impl Side {
    pub fn pairing(&self) -> Option<&Isometry> {
        match &self.kind {
            SideKind::Paired { pairing, .. } => Some(pairing),
            _ => None,
        }
    }

    pub fn is_free(&self) -> bool {
        matches!(self.kind, SideKind::Free)
    }

    pub fn is_geodesic(&self) -> bool {
        matches!(self.kind, SideKind::Paired { .. } | SideKind::Cut)
    }
}

/// A geodesic to clip by in addition to the bisectors, keeping the side away
/// from `away`.
#[derive(Clone, Copy, Debug)]
pub struct ExtraCut {
    pub ends: [BoundaryPoint; 2],
    pub away: BoundaryPoint,
}

/// A convex polygon with counterclockwise vertices; side `i` runs from
/// `sides[i].start` to `sides[i].end`.
#[derive(Clone, Debug)]
pub struct DirichletPolygon {
    pub center: UhpPoint,
    pub vertices: Vec<Vertex>,
    pub sides: Vec<Side>,
    /// The ball the polygon was built from.
    pub ball: GroupBall,
}

/// Vertices of the polygon grouped into congruence classes.
#[derive(Clone, Debug)]
pub struct EllipticCycle {
    pub vertices: Vec<usize>,
    pub order: u32,
    pub angles: Vec<f64>,
}

impl EllipticCycle {
    pub fn angle_sum(&self) -> f64 {
        self.angles.iter().sum()
    }
}

/// Whether `z` lies in the Dirichlet domain, judged against a ball that is
/// certified far enough: an element moving `z0` by more than `2 d(z, z0)`
/// cannot bring its bisector closer to `z`.
pub fn membership(z: UhpPoint, z0: UhpPoint, ball: &GroupBall) -> Result<bool> {
    let r = dist(z, z0);
    let needed = 2.0 * r;
    if !ball.certificate.covers(needed) {
        return Err(Error::InsufficientCertificate { needed, have: ball.certificate.to_string() });
    }
    Ok(ball.iter().all(|e| r <= dist(z, e.element.apply(z0)) + 1e-12))
}

fn elliptic_center_check(z0: UhpPoint, ball: &GroupBall) -> Result<()> {
    if let Some(g) = ball.elliptic_warning {
        return Err(Error::EllipticCenter { stabilizer: g });
    }
    for e in ball.iter() {
        if !e.element.is_identity() && dist(z0, e.element.apply(z0)) <= 1e-9 {
            return Err(Error::EllipticCenter { stabilizer: e.element });
        }
    }
    Ok(())
}

/// The polygon cut out by the bisector half-planes of every element of the
/// ball, with vertices classified against the ball.
pub fn build_polygon(z0: UhpPoint, ball: &GroupBall) -> Result<DirichletPolygon> {
    build_polygon_with(z0, ball, &[])
}

/// As [`build_polygon`], clipping additionally by the given geodesics.
pub fn build_polygon_with(z0: UhpPoint, ball: &GroupBall, cuts: &[ExtraCut]) -> Result<DirichletPolygon> {
    let mut p = build_unclassified(z0, ball, cuts)?;
    p.classify(ball);
    Ok(p)
}

enum PlaneSource {
    Element(usize),
    Cut(usize),
}

struct Plane {
    hp: KleinHalfPlane,
    source: PlaneSource,
}

pub(crate) fn build_unclassified(z0: UhpPoint, ball: &GroupBall, cuts: &[ExtraCut]) -> Result<DirichletPolygon> {
    elliptic_center_check(z0, ball)?;
    let (frame, inv) = clip::local_frame(z0);
    let mut planes = Vec::new();
    for (i, e) in ball.iter().enumerate() {
        if e.element.is_identity() {
            continue;
        }
        let w = e.element.apply(z0);
        let ends = crate::isometry::bisector_endpoints(z0, w)?;
        if let Some(hp) = KleinHalfPlane::bisector(inv.apply(w), ends) {
            planes.push(Plane { hp, source: PlaneSource::Element(i) });
        }
    }
    for (i, c) in cuts.iter().enumerate() {
        let p = inv.apply_boundary(c.ends[0]).to_klein();
        let q = inv.apply_boundary(c.ends[1]).to_klein();
        let away = inv.apply_boundary(c.away).to_klein();
        planes.push(Plane { hp: KleinHalfPlane::chord(p, q, away, c.ends), source: PlaneSource::Cut(i) });
    }

    let mut poly = clip::initial_box();
    for (i, pl) in planes.iter().enumerate() {
        poly = clip::clip(&poly, &pl.hp, i);
        if poly.is_empty() {
            return Err(Error::Uncertified("clipping produced an empty polygon".into()));
        }
    }
    let poly = merge_close(poly);

    let local_to_boundary = |k: KleinPoint, plane: &Plane| -> BoundaryPoint {
        // pick the analytic endpoint nearest to the junction
        let [a, b] = plane.hp.ends;
        let ka = inv.apply_boundary(a).to_klein();
        let kb = inv.apply_boundary(b).to_klein();
        if ka.dist(&k) <= kb.dist(&k) {
            a
        } else {
            b
        }
    };

    // geodesic sides with their parts inside the disk
    struct Raw {
        plane: usize,
        clip_index: usize,
        start: KleinPoint,
        end: KleinPoint,
        start_circle: bool,
        end_circle: bool,
    }
    let n = poly.len();
    let mut raws: Vec<Raw> = Vec::new();
    for j in 0..n {
        let Some(pl) = poly[j].edge else { continue };
        let (a, b) = (poly[j].p, poly[(j + 1) % n].p);
        let Some((lo, hi, sc, ec)) = clip::disk_interval(a, b) else { continue };
        let at = |s: f64| KleinPoint { x: a.x + s * (b.x - a.x), y: a.y + s * (b.y - a.y) };
        let (ps, pe) = (at(lo), at(hi));
        raws.push(Raw {
            plane: pl,
            clip_index: j,
            start: ps,
            end: pe,
            start_circle: sc || 1.0 - ps.norm() < VERTEX_TOL,
            end_circle: ec || 1.0 - pe.norm() < VERTEX_TOL,
        });
    }

    let mut vertices: Vec<Vertex> = Vec::new();
    let mut sides: Vec<Side> = Vec::new();
    if raws.is_empty() {
        return Ok(DirichletPolygon { center: z0, vertices, sides, ball: ball.clone() });
    }

    enum Junction {
        Finite(UhpPoint),
        Ideal(BoundaryPoint),
        Free(BoundaryPoint, BoundaryPoint),
    }
    let m = raws.len();
    let mut junctions = Vec::with_capacity(m);
    for k in 0..m {
        let (r, s) = (&raws[k], &raws[(k + 1) % m]);
        let consecutive = m > 1 && s.clip_index == (r.clip_index + 1) % n;
        let corner = poly[(r.clip_index + 1) % n].p;
        let (pr, ps) = (&planes[r.plane], &planes[s.plane]);
        let j = if consecutive && 1.0 - corner.norm() >= VERTEX_TOL && !(r.end_circle && s.start_circle) {
            match clip::geodesic_intersection(pr.hp.normal, ps.hp.normal) {
                Some(x) => Junction::Finite(frame.apply(clip::hyperboloid_to_uhp(x))),
                None => Junction::Finite(frame.apply(crate::isometry::from_klein(corner)?)),
            }
        } else if m > 1 && r.end.dist(&s.start) < 1e-7 {
            Junction::Ideal(local_to_boundary(r.end, pr))
        } else {
            Junction::Free(local_to_boundary(r.end, pr), local_to_boundary(s.start, ps))
        };
        junctions.push(j);
    }

    let push_vertex = |vertices: &mut Vec<Vertex>, point: VertexPoint| {
        vertices.push(Vertex { point, kind: VertexKind::Ordinary, angle: 0.0 });
        vertices.len() - 1
    };
    for k in 0..m {
        let start = match &junctions[(k + m - 1) % m] {
            Junction::Finite(z) => VertexPoint::Interior(*z),
            Junction::Ideal(p) => VertexPoint::Ideal(*p),
            Junction::Free(_, a) => VertexPoint::Ideal(*a),
        };
        let vi = push_vertex(&mut vertices, start);
        let pl = &planes[raws[k].plane];
        let (kind, keep) = match pl.source {
            PlaneSource::Element(i) => {
                let e = &ball.elements[i];
                (SideKind::Paired { pairing: e.element, word: e.word.clone() }, None)
            }
            PlaneSource::Cut(i) => {
                let c = cuts[i];
                let mut g = Geodesic::through(c.ends[0], c.ends[1]);
                if g.signed_klein(c.away.to_klein()) > 0.0 {
                    std::mem::swap(&mut g.e1, &mut g.e2);
                }
                (SideKind::Cut, Some(g))
            }
        };
        sides.push(Side { kind, start: vi, end: usize::MAX, line: Some(pl.hp.ends), keep });
        if let Junction::Free(b, _) = &junctions[k] {
            let bi = push_vertex(&mut vertices, VertexPoint::Ideal(*b));
            sides.push(Side { kind: SideKind::Free, start: bi, end: usize::MAX, line: None, keep: None });
        }
    }
    let nv = vertices.len();
    for (i, s) in sides.iter_mut().enumerate() {
        // sides and vertices alternate: vertex i starts side i
        debug_assert_eq!(s.start, i);
        s.end = (i + 1) % nv;
    }
    let mut p = DirichletPolygon { center: z0, vertices, sides, ball: ball.clone() };
    p.split_involution_sides();
    p.compute_angles();
    Ok(p)
}

/// Removes edges shorter than the vertex tolerance.
fn merge_close(mut poly: Vec<ClipVertex>) -> Vec<ClipVertex> {
    let mut changed = true;
    while changed && poly.len() > 2 {
        changed = false;
        let n = poly.len();
        for j in 0..n {
            let k = (j + 1) % n;
            if poly[j].p.dist(&poly[k].p) < VERTEX_TOL {
                poly[j].edge = poly[k].edge;
                poly.remove(k);
                changed = true;
                break;
            }
        }
    }
    poly
}

/// Interior angle at `v` between the directions towards `a` and `b`.
fn angle_at(v: UhpPoint, a: VertexPoint, b: VertexPoint) -> f64 {
    let dir = |p: VertexPoint| -> f64 {
        // phi(z) = (z - v) / (z - conj v), argument of phi
        let (re, im) = match p {
            VertexPoint::Ideal(BoundaryPoint::Infinity) => (1.0, 0.0),
            VertexPoint::Ideal(BoundaryPoint::Real(x)) => cdiv((x - v.x, -v.y), (x - v.x, v.y)),
            VertexPoint::Interior(z) => cdiv((z.x - v.x, z.y - v.y), (z.x - v.x, z.y + v.y)),
        };
        im.atan2(re)
    };
    let mut d = (dir(a) - dir(b)).abs();
    if d > PI {
        d = 2.0 * PI - d;
    }
    d
}

fn cdiv(p: (f64, f64), q: (f64, f64)) -> (f64, f64) {
    let den = q.0 * q.0 + q.1 * q.1;
    ((p.0 * q.0 + p.1 * q.1) / den, (p.1 * q.0 - p.0 * q.1) / den)
}

impl DirichletPolygon {
    pub fn is_unbounded_everywhere(&self) -> bool {
        self.sides.is_empty()
    }

    pub fn has_free_sides(&self) -> bool {
        self.sides.iter().any(Side::is_free)
    }

    /// Sides incident to vertex `v`: the one ending there and the one starting there.
    pub fn sides_at(&self, v: usize) -> (usize, usize) {
        let n = self.sides.len();
        ((v + n - 1) % n, v)
    }

    /// Whether `z` lies in the closed polygon, up to `tol` in distance.
    pub fn contains(&self, z: UhpPoint, tol: f64) -> bool {
        let d0 = dist(z, self.center);
        self.sides.iter().all(|s| match &s.kind {
            SideKind::Paired { pairing, .. } => d0 <= dist(z, pairing.apply(self.center)) + tol,
            SideKind::Free => true,
            SideKind::Cut => s.keep.map_or(true, |g| g.contains(z, tol)),
            SideKind::Horocycle { sigma, height, .. } => sigma.inverse().apply(z).y <= height * (1.0 + tol),
        })
    }

    /// Distinct side-pairing elements.
    pub fn pairings(&self) -> Vec<(Isometry, Option<Word>)> {
        let mut out: Vec<(Isometry, Option<Word>)> = Vec::new();
        for s in &self.sides {
            if let SideKind::Paired { pairing, word } = &s.kind {
                if !out.iter().any(|(g, _)| g.same_as(pairing, 1e-9)) {
                    out.push((*pairing, word.clone()));
                }
            }
        }
        out
    }

    /// Largest distance from the center to a finite vertex.
    pub fn max_vertex_distance(&self) -> f64 {
        self.vertices
            .iter()
            .filter_map(|v| v.point.interior())
            .map(|z| dist(z, self.center))
            .fold(0.0, f64::max)
    }

    /// Splits sides paired by an involution at the involution's fixed point.
    fn split_involution_sides(&mut self) {
        let mut i = 0;
        while i < self.sides.len() {
            let side = &self.sides[i];
            let fixed = match side.pairing() {
                Some(g) if g.classify() == IsometryClass::Elliptic && g.compose(g).is_identity() => {
                    match g.fixed_points() {
                        Ok(f) => match f.first() {
                            Some(FixedPoint::Interior(z)) => Some(*z),
                            _ => None,
                        },
                        Err(_) => None,
                    }
                }
                _ => None,
            };
            let Some(f) = fixed else {
                i += 1;
                continue;
            };
            let (a, b) = (self.vertices[side.start].point, self.vertices[side.end].point);
            let far = |p: VertexPoint| match p {
                VertexPoint::Interior(z) => dist(z, f) > 1e-9,
                VertexPoint::Ideal(_) => true,
            };
            if !far(a) || !far(b) {
                i += 1;
                continue;
            }
            // insert vertex f after side.start
            let at = i + 1;
            self.vertices.insert(at, Vertex { point: VertexPoint::Interior(f), kind: VertexKind::Ordinary, angle: 0.0 });
            let second = self.sides[i].clone();
            self.sides.insert(at, second);
            let nv = self.vertices.len();
            for (k, s) in self.sides.iter_mut().enumerate() {
                s.start = k;
                s.end = (k + 1) % nv;
            }
            i += 2;
        }
    }

    fn compute_angles(&mut self) {
        let n = self.vertices.len();
        if n == 0 {
            return;
        }
        for v in 0..n {
            let angle = match self.vertices[v].point {
                VertexPoint::Ideal(_) => 0.0,
                VertexPoint::Interior(z) => {
                    let (sp, sn) = self.sides_at(v);
                    let hp = matches!(self.sides[sp].kind, SideKind::Horocycle { .. });
                    let hn = matches!(self.sides[sn].kind, SideKind::Horocycle { .. });
                    if hp || hn {
                        PI / 2.0
                    } else {
                        let a = self.vertices[self.sides[sp].start].point;
                        let b = self.vertices[self.sides[sn].end].point;
                        angle_at(z, a, b)
                    }
                }
            };
            self.vertices[v].angle = angle;
        }
    }

    /// Classifies vertices against the ball: stabilizer orders of finite
    /// vertices and parabolic witnesses at ideal ones.
    pub fn classify(&mut self, ball: &GroupBall) {
        for v in 0..self.vertices.len() {
            let (sp, sn) = self.sides_at(v);
            let kind = match self.vertices[v].point {
                VertexPoint::Interior(z) => {
                    if matches!(self.sides[sp].kind, SideKind::Horocycle { .. })
                        || matches!(self.sides[sn].kind, SideKind::Horocycle { .. })
                    {
                        VertexKind::Ordinary
                    } else {
                        let m = stabilizer_count(z, ball);
                        if m >= 2 {
                            VertexKind::Elliptic { order: m as u32 }
                        } else {
                            VertexKind::Ordinary
                        }
                    }
                }
                VertexPoint::Ideal(p) => {
                    let free = self.sides[sp].is_free() || self.sides[sn].is_free();
                    match (free, parabolic_witness(p, ball)) {
                        (false, Some(g)) => VertexKind::Cusp { stabilizer: g },
                        _ => VertexKind::IdealFree,
                    }
                }
            };
            self.vertices[v].kind = kind;
        }
    }

    /// Indices of ideal vertices between two geodesic sides for which no
    /// parabolic witness was found.
    pub fn unresolved_ideal_vertices(&self) -> Vec<usize> {
        (0..self.vertices.len())
            .filter(|&v| {
                let (sp, sn) = self.sides_at(v);
                self.vertices[v].point.ideal().is_some()
                    && matches!(self.vertices[v].kind, VertexKind::IdealFree)
                    && self.sides[sp].is_geodesic()
                    && self.sides[sn].is_geodesic()
            })
            .collect()
    }

    /// Replaces cusp vertices by horocyclic arcs. `cuts` lists
    /// `(vertex index, sigma, height)`, where `sigma·∞` is the cusp.
    pub fn truncated(&self, cuts: &[(usize, Isometry, f64)]) -> Result<DirichletPolygon> {
        let mut vertices = Vec::new();
        let mut sides = Vec::new();
        let n = self.vertices.len();
        for v in 0..n {
            if let Some(&(_, sigma, height)) = cuts.iter().find(|c| c.0 == v) {
                let Some(cusp) = self.vertices[v].point.ideal() else {
                    return Err(Error::Input(format!("vertex {v} is not ideal")));
                };
                let (sp, sn) = self.sides_at(v);
                let sinv = sigma.inverse();
                let foot = |side: &Side| -> Result<UhpPoint> {
                    let line = side.line.ok_or_else(|| Error::Input("cusp side is not geodesic".into()))?;
                    let other = if line[0].close_to(&cusp, 1e-7) { line[1] } else { line[0] };
                    match sinv.apply_boundary(other) {
                        BoundaryPoint::Real(x) => Ok(sigma.apply(UhpPoint { x, y: height })),
                        BoundaryPoint::Infinity => Err(Error::Input("degenerate cusp side".into())),
                    }
                };
                let a = foot(&self.sides[sp])?;
                let b = foot(&self.sides[sn])?;
                vertices.push(Vertex { point: VertexPoint::Interior(a), kind: VertexKind::Ordinary, angle: PI / 2.0 });
                sides.push(Side {
                    kind: SideKind::Horocycle { cusp, sigma, height },
                    start: 0,
                    end: 0,
                    line: None,
                    keep: None,
                });
                vertices.push(Vertex { point: VertexPoint::Interior(b), kind: VertexKind::Ordinary, angle: PI / 2.0 });
                sides.push(self.sides[v].clone());
            } else {
                vertices.push(self.vertices[v].clone());
                sides.push(self.sides[v].clone());
            }
        }
        let nv = vertices.len();
        for (k, s) in sides.iter_mut().enumerate() {
            s.start = k;
            s.end = (k + 1) % nv;
        }
        Ok(DirichletPolygon { center: self.center, vertices, sides, ball: self.ball.clone() })
    }
}

/// Number of ball elements fixing `z` (identity included).
fn stabilizer_count(z: UhpPoint, ball: &GroupBall) -> usize {
    ball.iter().filter(|e| dist(e.element.apply(z), z) <= BOUNDARY_TOL).count()
}

/// The frame `sigma` with `sigma·∞ = p` used to measure horoball heights.
pub fn cusp_frame(p: BoundaryPoint) -> Isometry {
    match p {
        BoundaryPoint::Infinity => Isometry::identity(),
        BoundaryPoint::Real(x) => Isometry::new(x, -1.0, 1.0, 0.0).expect("determinant one"),
    }
}

/// Translation length of a parabolic fixing `p`, measured in the cusp frame.
pub fn cusp_translation(g: &Isometry, p: BoundaryPoint) -> f64 {
    let s = cusp_frame(p);
    let h = g.conjugate_by(&s);
    // h = ±(1, b; 0, 1)
    h.b() / h.a()
}

/// Primitive parabolic element in the ball fixing `p`, oriented to translate
/// in the positive direction in the cusp frame.
pub fn parabolic_witness(p: BoundaryPoint, ball: &GroupBall) -> Option<Isometry> {
    let mut best: Option<(f64, Isometry)> = None;
    for e in ball.iter() {
        let g = e.element;
        if g.classify() != IsometryClass::Parabolic || !g.fixes_boundary(p, 1e-9) {
            continue;
        }
        let t = cusp_translation(&g, p);
        let (t, g) = if t < 0.0 { (-t, g.inverse()) } else { (t, g) };
        if best.as_ref().map_or(true, |(bt, _)| t < *bt - 1e-12) {
            best = Some((t, g));
        }
    }
    best.map(|b| b.1)
}

/// Groups the finite vertices into congruence classes using the ball.
pub fn vertex_cycles(p: &DirichletPolygon, ball: &GroupBall) -> Result<Vec<EllipticCycle>> {
    let needed = 2.0 * p.max_vertex_distance();
    if !ball.certificate.covers(needed) {
        return Err(Error::InsufficientCertificate { needed, have: ball.certificate.to_string() });
    }
    let finite: Vec<usize> = (0..p.vertices.len())
        .filter(|&v| p.vertices[v].point.interior().is_some() && !touches_horocycle(p, v))
        .collect();
    let mut cycle_of = vec![usize::MAX; p.vertices.len()];
    let mut cycles: Vec<EllipticCycle> = Vec::new();
    for &v in &finite {
        if cycle_of[v] != usize::MAX {
            continue;
        }
        let z = p.vertices[v].point.interior().unwrap();
        let c = cycles.len();
        cycle_of[v] = c;
        let mut members = vec![v];
        for &u in &finite {
            if cycle_of[u] != usize::MAX {
                continue;
            }
            let w = p.vertices[u].point.interior().unwrap();
            if ball.iter().any(|e| dist(e.element.apply(z), w) <= BOUNDARY_TOL) {
                cycle_of[u] = c;
                members.push(u);
            }
        }
        let order = stabilizer_count(z, ball) as u32;
        let angles = members.iter().map(|&u| p.vertices[u].angle).collect();
        cycles.push(EllipticCycle { vertices: members, order, angles });
    }
    Ok(cycles)
}

fn touches_horocycle(p: &DirichletPolygon, v: usize) -> bool {
    let (a, b) = p.sides_at(v);
    matches!(p.sides[a].kind, SideKind::Horocycle { .. }) || matches!(p.sides[b].kind, SideKind::Horocycle { .. })
}

/// Vertex cycles with nontrivial stabilizer.
pub fn elliptic_cycles(p: &DirichletPolygon, ball: &GroupBall) -> Result<Vec<EllipticCycle>> {
    Ok(vertex_cycles(p, ball)?.into_iter().filter(|c| c.order >= 2).collect())
}

/// Result of looking for parabolic witnesses at ideal vertices.
#[derive(Clone, Debug, Default)]
pub struct CuspReport {
    pub cusps: Vec<(BoundaryPoint, Isometry)>,
    pub unresolved: Vec<BoundaryPoint>,
}

/// Ideal vertices that are cusps, one entry per vertex.
pub fn cusp_vertices(p: &DirichletPolygon) -> CuspReport {
    let mut r = CuspReport::default();
    for v in &p.vertices {
        if let (VertexPoint::Ideal(q), VertexKind::Cusp { stabilizer }) = (&v.point, &v.kind) {
            r.cusps.push((*q, *stabilizer));
        }
    }
    for v in p.unresolved_ideal_vertices() {
        r.unresolved.push(p.vertices[v].point.ideal().unwrap());
    }
    r
}

/// Hyperbolic area by Gauss–Bonnet; infinite when a free side is present.
/// Horocyclic sides contribute their length with geodesic curvature -1.
pub fn area(p: &DirichletPolygon) -> f64 {
    if p.sides.is_empty() || p.has_free_sides() {
        return f64::INFINITY;
    }
    let exterior: f64 = p.vertices.iter().map(|v| PI - v.angle).sum();
    let horo: f64 = p
        .sides
        .iter()
        .map(|s| match &s.kind {
            SideKind::Horocycle { sigma, height, .. } => {
                let inv = sigma.inverse();
                let a = inv.apply(p.vertices[s.start].point.interior().unwrap());
                let b = inv.apply(p.vertices[s.end].point.interior().unwrap());
                (a.x - b.x).abs() / height
            }
            _ => 0.0,
        })
        .sum();
    exterior - 2.0 * PI - horo
}

/// Elements `g` with `g·P ∩ P` nonempty: the identity, the side pairings,
/// and every element whose translate passes through a finite vertex.
pub fn gamma_f(p: &DirichletPolygon, ball: &GroupBall) -> Result<Vec<Isometry>> {
    let r = p.max_vertex_distance();
    let needed = 2.0 * r;
    if !ball.certificate.covers(needed) && !p.vertices.iter().all(|v| v.point.interior().is_none()) {
        return Err(Error::InsufficientCertificate { needed, have: ball.certificate.to_string() });
    }
    let mut out = vec![Isometry::identity()];
    let push = |out: &mut Vec<Isometry>, g: Isometry| {
        if !out.iter().any(|h| h.same_as(&g, 1e-9)) {
            out.push(g);
        }
    };
    for (g, _) in p.pairings() {
        push(&mut out, g);
    }
    let finite: Vec<UhpPoint> = p.vertices.iter().filter_map(|v| v.point.interior()).collect();
    for e in ball.within(needed + 1e-9) {
        let w = e.element.apply(p.center);
        if finite.iter().any(|&v| (dist(v, w) - dist(v, p.center)).abs() <= BOUNDARY_TOL) {
            push(&mut out, e.element);
        }
    }
    Ok(out)
}
