//! Deterministic sample points and pairs in a polygon.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dirichlet::{DirichletPolygon, SideKind, VertexPoint, BOUNDARY_TOL};
use crate::isometry::{dist, from_klein, to_klein, Isometry, KleinPoint, UhpPoint};

/// How many points and pairs to draw.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct SampleSpec {
    /// Target number of pairs; crafted pairs are always included.
    pub pairs: usize,
    pub seed: u64,
    /// Points per axis of the Klein-box grid.
    pub grid: usize,
    /// Points placed on sides.
    pub boundary: usize,
    /// Random points in the region.
    pub random: usize,
    /// Only points within this distance of the center are used; defaults to
    /// [`default_radius`].
    pub radius: Option<f64>,
}

impl Default for SampleSpec {
    fn default() -> Self {
        Self { pairs: 2000, seed: 0, grid: 64, boundary: 256, random: 256, radius: None }
    }
}

impl SampleSpec {
    pub fn with_pairs(pairs: usize, seed: u64) -> Self {
        Self { pairs, seed, ..Self::default() }
    }
}

/// Pairs of points of a region, with the parameters that produced them.
#[derive(Clone, Debug)]
pub struct PairSuite {
    pub pairs: Vec<(UhpPoint, UhpPoint)>,
    pub seed: u64,
    pub radius: f64,
}

impl PairSuite {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// Sampling window: the farthest finite vertex or half the longest pairing
/// displacement, plus a margin of 1.5.
pub fn default_radius(p: &DirichletPolygon) -> f64 {
    let reach = p
        .pairings()
        .iter()
        .map(|(g, _)| 0.5 * dist(p.center, g.apply(p.center)))
        .fold(0.0, f64::max);
    p.max_vertex_distance().max(reach) + 1.5
}

/// The point at distance `t` from `a` on the geodesic towards `b`.
pub fn toward(a: UhpPoint, b: UhpPoint, t: f64) -> UhpPoint {
    let f = Isometry::frame_at(a);
    let k = to_klein(f.inverse().apply(b));
    let n = k.norm();
    if n == 0.0 {
        return a;
    }
    let r = t.tanh() / n;
    f.apply(from_klein(KleinPoint { x: k.x * r, y: k.y * r }).expect("inside disk"))
}

fn local(p: &DirichletPolygon) -> (Isometry, Isometry) {
    let f = Isometry::frame_at(p.center);
    (f, f.inverse())
}

fn inside(region: &DirichletPolygon, z: UhpPoint, radius: f64) -> bool {
    dist(z, region.center) <= radius && region.contains(z, 1e-12)
}

/// Grid points of the Klein box around the center, inside the region.
pub fn grid_points(region: &DirichletPolygon, n: usize, radius: f64) -> Vec<UhpPoint> {
    let (f, _) = local(region);
    let r = radius.tanh();
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    for i in 0..n {
        for j in 0..n {
            let x = -r + 2.0 * r * (i as f64 + 0.5) / n as f64;
            let y = -r + 2.0 * r * (j as f64 + 0.5) / n as f64;
            if x * x + y * y >= 1.0 {
                continue;
            }
            let z = f.apply(from_klein(KleinPoint { x, y }).expect("inside disk"));
            if inside(region, z, radius) {
                out.push(z);
            }
        }
    }
    out
}

/// Uniform points of the Klein box, rejected outside the region.
pub fn random_points(region: &DirichletPolygon, count: usize, radius: f64, rng: &mut ChaCha8Rng) -> Vec<UhpPoint> {
    let (f, _) = local(region);
    let r = radius.tanh();
    let mut out = Vec::with_capacity(count);
    let mut tries = 0usize;
    while out.len() < count && tries < 200 * count.max(1) {
        tries += 1;
        let x = rng.gen_range(-r..r);
        let y = rng.gen_range(-r..r);
        if x * x + y * y >= 1.0 {
            continue;
        }
        let z = f.apply(from_klein(KleinPoint { x, y }).expect("inside disk"));
        if inside(region, z, radius) {
            out.push(z);
        }
    }
    out
}

/// Endpoints of the part of side `s` inside the sampling window, in local Klein coordinates.
fn side_segment(region: &DirichletPolygon, s: usize) -> (KleinPoint, KleinPoint) {
    let (_, inv) = local(region);
    let side = &region.sides[s];
    let k = |v: usize| match region.vertices[v].point {
        VertexPoint::Interior(z) => to_klein(inv.apply(z)),
        VertexPoint::Ideal(b) => inv.apply_boundary(b).to_klein(),
    };
    (k(side.start), k(side.end))
}

/// Points on geodesic sides, evenly spaced in local Klein coordinates.
fn side_points(region: &DirichletPolygon, s: usize, count: usize, radius: f64) -> Vec<UhpPoint> {
    let (f, _) = local(region);
    let (a, b) = side_segment(region, s);
    let mut out = Vec::new();
    for j in 1..=count {
        let t = j as f64 / (count + 1) as f64;
        let k = KleinPoint { x: a.x + t * (b.x - a.x), y: a.y + t * (b.y - a.y) };
        if let Ok(z) = from_klein(k) {
            let z = f.apply(z);
            if dist(z, region.center) <= radius {
                out.push(z);
            }
        }
    }
    out
}

/// Finite vertices, side midpoints and evenly spaced side points.
pub fn boundary_points(region: &DirichletPolygon, count: usize, radius: f64) -> Vec<UhpPoint> {
    let mut out: Vec<UhpPoint> = region
        .vertices
        .iter()
        .filter_map(|v| v.point.interior())
        .filter(|z| dist(*z, region.center) <= radius)
        .collect();
    let geodesic: Vec<usize> = (0..region.sides.len()).filter(|&s| region.sides[s].is_geodesic()).collect();
    if geodesic.is_empty() {
        return out;
    }
    let per = (count / geodesic.len()).max(1);
    for &s in &geodesic {
        out.extend(side_points(region, s, 1, radius));
        out.extend(side_points(region, s, per, radius));
    }
    out
}

/// Pairs of nearby points on opposite sides of each paired side and around
/// each finite vertex, pulled back into the region. Such pairs have
/// realizers among the neighbours of the region.
pub fn crafted_pairs(region: &DirichletPolygon, radius: f64) -> Vec<(UhpPoint, UhpPoint)> {
    let z0 = region.center;
    let mut out = Vec::new();
    let nudges = [1e-3, 2e-2];
    for (s, side) in region.sides.iter().enumerate() {
        let SideKind::Paired { pairing, .. } = &side.kind else { continue };
        let gi = pairing.inverse();
        let gz0 = pairing.apply(z0);
        let pts = side_points(region, s, 8, radius);
        for (j, &w) in pts.iter().enumerate() {
            let w2 = pts[(j + 1) % pts.len()];
            for &d in &nudges {
                let p = toward(w, z0, d);
                let q = gi.apply(toward(w, gz0, d));
                let q2 = gi.apply(toward(w2, gz0, 2.0 * d));
                out.push((p, q));
                out.push((q, p));
                out.push((p, q2));
            }
        }
    }
    for v in &region.vertices {
        let Some(vz) = v.point.interior() else { continue };
        if dist(vz, z0) > radius {
            continue;
        }
        let d0 = dist(vz, z0);
        let tiles: Vec<Isometry> = region
            .ball
            .iter()
            .filter(|e| (dist(vz, e.element.apply(z0)) - d0).abs() <= BOUNDARY_TOL)
            .map(|e| e.element)
            .collect();
        for &d in &nudges {
            let pulled: Vec<UhpPoint> =
                tiles.iter().map(|g| g.inverse().apply(toward(vz, g.apply(z0), d))).collect();
            let pulled2: Vec<UhpPoint> =
                tiles.iter().map(|g| g.inverse().apply(toward(vz, g.apply(z0), 2.5 * d))).collect();
            for a in &pulled {
                for b in &pulled2 {
                    out.push((*a, *b));
                }
            }
        }
    }
    out
}

/// A deterministic pair suite: all crafted pairs, then pairs drawn from grid,
/// random and boundary points until `spec.pairs` is reached.
pub fn pair_suite(region: &DirichletPolygon, spec: &SampleSpec) -> PairSuite {
    let radius = spec.radius.unwrap_or_else(|| default_radius(region));
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut pts = grid_points(region, spec.grid, radius);
    pts.extend(random_points(region, spec.random, radius, &mut rng));
    let bdry = boundary_points(region, spec.boundary, radius);
    pts.extend(bdry.iter().copied());
    let ok = |z: &UhpPoint| dist(*z, region.center) <= radius + 0.1 && region.contains(*z, 1e-9);
    let mut pairs: Vec<(UhpPoint, UhpPoint)> =
        crafted_pairs(region, radius).into_iter().filter(|(a, b)| ok(a) && ok(b)).collect();
    for a in bdry.iter().take(24) {
        for b in bdry.iter().take(24) {
            pairs.push((*a, *b));
        }
    }
    if !pts.is_empty() {
        while pairs.len() < spec.pairs {
            let a = pts[rng.gen_range(0..pts.len())];
            let b = pts[rng.gen_range(0..pts.len())];
            pairs.push((a, b));
        }
    }
    PairSuite { pairs, seed: spec.seed, radius }
}

/// Random points of the region (used for spot checks and surface experiments).
pub fn sample_points(region: &DirichletPolygon, count: usize, seed: u64, radius: Option<f64>) -> Vec<UhpPoint> {
    let radius = radius.unwrap_or_else(|| default_radius(region));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_points(region, count, radius, &mut rng)
}
