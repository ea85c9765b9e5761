//! Orientation-preserving isometries of the hyperbolic plane.
//!
//! The user-facing model is the upper half-plane. Polygon computations run in
//! the Klein disk, where geodesics are straight chords; the Klein model used
//! here is normalized so that `i` sits at the disk center.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance below which a matrix entry counts as zero for the sign convention.
const SIGN_EPS: f64 = 1e-12;

/// Default trace tolerance separating parabolic from elliptic/hyperbolic.
pub const PARABOLIC_TOL: f64 = 1e-9;

/// Tolerance used when two floating matrices are compared entrywise.
pub const ELEMENT_TOL: f64 = 1e-9;

/// A point `x + iy` of the upper half-plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct UhpPoint {
    pub x: f64,
    pub y: f64,
}

impl UhpPoint {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !(y > 0.0) || !x.is_finite() || !y.is_finite() {
            return Err(Error::InvalidPoint(format!("({x}, {y}) is not in the upper half-plane")));
        }
        Ok(Self { x, y })
    }

    /// Panics on invalid input; for literals in code and tests.
    pub fn at(x: f64, y: f64) -> Self {
        Self::new(x, y).expect("point in the upper half-plane")
    }

    pub fn i() -> Self {
        Self { x: 0.0, y: 1.0 }
    }

    /// Lift to the hyperboloid `t^2 - u^2 - v^2 = 1`, compatible with [`to_klein`].
    pub fn hyperboloid(&self) -> [f64; 3] {
        let r2 = self.x * self.x + self.y * self.y;
        [
            (r2 + 1.0) / (2.0 * self.y),
            (r2 - 1.0) / (2.0 * self.y),
            -self.x / self.y,
        ]
    }
}

impl fmt::Display for UhpPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:+}i", self.x, self.y)
    }
}

/// A point of the extended real line `R ∪ {∞}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum BoundaryPoint {
    Real(f64),
    Infinity,
}

impl BoundaryPoint {
    pub fn is_infinity(&self) -> bool {
        matches!(self, BoundaryPoint::Infinity)
    }

    /// Position on the unit circle of the Klein disk.
    pub fn to_klein(&self) -> KleinPoint {
        match *self {
            BoundaryPoint::Infinity => KleinPoint { x: 1.0, y: 0.0 },
            BoundaryPoint::Real(x) => {
                let d = x * x + 1.0;
                KleinPoint { x: (x * x - 1.0) / d, y: -2.0 * x / d }
            }
        }
    }

    /// Inverse of [`BoundaryPoint::to_klein`] for a point on the unit circle.
    pub fn from_klein(k: KleinPoint) -> Self {
        // k = ((x^2-1)/(x^2+1), -2x/(x^2+1)); x = -k.y / (1 - k.x)
        let denom = 1.0 - k.x;
        if denom.abs() < 1e-15 && k.y.abs() < 1e-7 {
            return BoundaryPoint::Infinity;
        }
        let x = -k.y / denom;
        if !x.is_finite() || x.abs() > 1e15 {
            BoundaryPoint::Infinity
        } else {
            BoundaryPoint::Real(x)
        }
    }

    /// Closeness on the boundary circle (chordal distance in the Klein disk).
    pub fn close_to(&self, other: &BoundaryPoint, tol: f64) -> bool {
        match (self, other) {
            (BoundaryPoint::Infinity, BoundaryPoint::Infinity) => true,
            _ => self.to_klein().dist(&other.to_klein()) <= tol,
        }
    }
}

impl fmt::Display for BoundaryPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundaryPoint::Real(x) => write!(f, "{x}"),
            BoundaryPoint::Infinity => write!(f, "∞"),
        }
    }
}

/// A point of the closed Klein disk.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KleinPoint {
    pub x: f64,
    pub y: f64,
}

impl KleinPoint {
    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(&self, other: &KleinPoint) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Klein disk image of a half-plane point; `i` maps to the center.
pub fn to_klein(z: UhpPoint) -> KleinPoint {
    let [t, u, v] = z.hyperboloid();
    KleinPoint { x: u / t, y: v / t }
}

/// Inverse of [`to_klein`]. Rejects points on or outside the unit circle.
pub fn from_klein(k: KleinPoint) -> Result<UhpPoint> {
    let r2 = k.x * k.x + k.y * k.y;
    if !(r2 < 1.0) {
        return Err(Error::InvalidPoint(format!(
            "Klein point ({}, {}) is not inside the unit disk",
            k.x, k.y
        )));
    }
    let t = 1.0 / (1.0 - r2).sqrt();
    let (u, v) = (k.x * t, k.y * t);
    // t - u = 1/y and v = -x/y
    let y = 1.0 / (t - u);
    Ok(UhpPoint { x: -v * y, y })
}

/// Hyperbolic distance in the upper half-plane.
pub fn dist(z1: UhpPoint, z2: UhpPoint) -> f64 {
    // 2 asinh(|z1 - z2| / (2 sqrt(y1 y2))) is arcosh(1 + |z1-z2|^2 / (2 y1 y2)),
    // but stays accurate for nearby points.
    let chord = (z1.x - z2.x).hypot(z1.y - z2.y);
    2.0 * (chord / (2.0 * (z1.y * z2.y).sqrt())).asinh()
}

/// Classification of a nonidentity isometry by its trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IsometryClass {
    Identity,
    Elliptic,
    Parabolic,
    Hyperbolic,
}

/// A fixed point of an isometry: inside the plane or on its boundary.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FixedPoint {
    Interior(UhpPoint),
    Boundary(BoundaryPoint),
}

/// An element of `PSL(2, R)` acting by Möbius transformations.
///
/// Entries are stored with the sign convention that the first nonzero entry of
/// `(a, b, c, d)` is positive. Elements of integer groups also carry their
/// exact entries, which then decide equality.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Isometry {
    m: [f64; 4],
    exact: Option<[i64; 4]>,
}

fn canonical_f(m: [f64; 4]) -> [f64; 4] {
    let lead = m.iter().find(|v| v.abs() > SIGN_EPS).copied().unwrap_or(1.0);
    if lead < 0.0 {
        [-m[0], -m[1], -m[2], -m[3]].map(|v| if v == 0.0 { 0.0 } else { v })
    } else {
        m.map(|v| if v == 0.0 { 0.0 } else { v })
    }
}

fn canonical_i(m: [i64; 4]) -> [i64; 4] {
    let lead = m.iter().find(|v| **v != 0).copied().unwrap_or(1);
    if lead < 0 {
        m.map(|v| -v)
    } else {
        m
    }
}

impl Isometry {
    /// Builds an element from real entries, rescaling a positive determinant to 1.
    ///
    /// Determinants farther than `1e-9` from 1 are rejected so that typos in
    /// input files are not silently renormalized.
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let det = a * d - b * c;
        let entries = [a, b, c, d];
        if !entries.iter().all(|v| v.is_finite()) || (det - 1.0).abs() > 1e-9 {
            return Err(Error::BadDeterminant { det, entries });
        }
        let s = det.sqrt().recip();
        Ok(Self { m: canonical_f([a * s, b * s, c * s, d * s]), exact: None })
    }

    /// Builds an element from integer entries with determinant exactly 1.
    pub fn exact(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        let det = a as i128 * d as i128 - b as i128 * c as i128;
        if det != 1 {
            return Err(Error::BadDeterminant {
                det: det as f64,
                entries: [a as f64, b as f64, c as f64, d as f64],
            });
        }
        Ok(Self::from_exact(canonical_i([a, b, c, d])))
    }

    fn from_exact(e: [i64; 4]) -> Self {
        Self { m: e.map(|v| v as f64), exact: Some(e) }
    }

    pub fn identity() -> Self {
        Self::from_exact([1, 0, 0, 1])
    }

    /// `z ↦ z + t`.
    pub fn translation(t: f64) -> Self {
        Self { m: [1.0, t, 0.0, 1.0], exact: None }
    }

    /// `z ↦ k^2 z`, the matrix `(k, 0; 0, 1/k)`.
    pub fn dilation(k: f64) -> Result<Self> {
        if !(k > 0.0) {
            return Err(Error::Input(format!("dilation factor {k} must be positive")));
        }
        Ok(Self { m: [k, 0.0, 0.0, 1.0 / k], exact: None })
    }

    /// Element mapping `i` to `z`: `(sqrt y, x / sqrt y; 0, 1 / sqrt y)`.
    pub fn frame_at(z: UhpPoint) -> Self {
        let s = z.y.sqrt();
        Self { m: [s, z.x / s, 0.0, 1.0 / s], exact: None }
    }

    pub fn entries(&self) -> [f64; 4] {
        self.m
    }

    pub fn exact_entries(&self) -> Option<[i64; 4]> {
        self.exact
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    /// Forgets the exact representation.
    pub fn to_float(&self) -> Self {
        Self { m: self.m, exact: None }
    }

    pub fn a(&self) -> f64 {
        self.m[0]
    }
    pub fn b(&self) -> f64 {
        self.m[1]
    }
    pub fn c(&self) -> f64 {
        self.m[2]
    }
    pub fn d(&self) -> f64 {
        self.m[3]
    }

    pub fn trace(&self) -> f64 {
        self.m[0] + self.m[3]
    }

    pub fn det(&self) -> f64 {
        self.m[0] * self.m[3] - self.m[1] * self.m[2]
    }

    /// Frobenius norm squared; equals `2 cosh d(i, g·i)`.
    pub fn norm_sq(&self) -> f64 {
        self.m.iter().map(|v| v * v).sum()
    }

    pub fn compose(&self, other: &Isometry) -> Isometry {
        if let (Some(p), Some(q)) = (self.exact, other.exact) {
            let mul = |x: i64, y: i64, z: i64, w: i64| -> Option<i64> {
                let v = x as i128 * y as i128 + z as i128 * w as i128;
                i64::try_from(v).ok()
            };
            let prod = [
                mul(p[0], q[0], p[1], q[2]),
                mul(p[0], q[1], p[1], q[3]),
                mul(p[2], q[0], p[3], q[2]),
                mul(p[2], q[1], p[3], q[3]),
            ];
            if let [Some(a), Some(b), Some(c), Some(d)] = prod {
                return Self::from_exact(canonical_i([a, b, c, d]));
            }
        }
        let (p, q) = (self.m, other.m);
        let prod = [
            p[0] * q[0] + p[1] * q[2],
            p[0] * q[1] + p[1] * q[3],
            p[2] * q[0] + p[3] * q[2],
            p[2] * q[1] + p[3] * q[3],
        ];
        Self { m: canonical_f(prod), exact: None }
    }

    pub fn inverse(&self) -> Isometry {
        match self.exact {
            Some([a, b, c, d]) => Self::from_exact(canonical_i([d, -b, -c, a])),
            None => {
                let [a, b, c, d] = self.m;
                Self { m: canonical_f([d, -b, -c, a]), exact: None }
            }
        }
    }

    /// `g^-1 h g`.
    pub fn conjugate_by(&self, g: &Isometry) -> Isometry {
        g.inverse().compose(self).compose(g)
    }

    pub fn apply(&self, z: UhpPoint) -> UhpPoint {
        let [a, b, c, d] = self.m;
        // (az+b)/(cz+d) = ((ax+b)(cx+d) + acy^2 + i y) / |cz+d|^2 for det 1
        let (nx, ny) = (a * z.x + b, a * z.y);
        let (dx, dy) = (c * z.x + d, c * z.y);
        let den = dx * dx + dy * dy;
        let x = (nx * dx + ny * dy) / den;
        let y = z.y / den;
        UhpPoint { x, y }
    }

    pub fn apply_boundary(&self, p: BoundaryPoint) -> BoundaryPoint {
        let [a, b, c, d] = self.m;
        match p {
            BoundaryPoint::Infinity => {
                if self.c_is_zero() {
                    BoundaryPoint::Infinity
                } else {
                    BoundaryPoint::Real(a / c)
                }
            }
            BoundaryPoint::Real(x) => {
                let den = c * x + d;
                if den == 0.0 || (den.abs() < 1e-14 * (c.abs() * x.abs() + d.abs()).max(1.0)) {
                    BoundaryPoint::Infinity
                } else {
                    BoundaryPoint::Real((a * x + b) / den)
                }
            }
        }
    }

    fn c_is_zero(&self) -> bool {
        match self.exact {
            Some(e) => e[2] == 0,
            None => self.m[2].abs() <= 1e-12,
        }
    }

    pub fn is_identity(&self) -> bool {
        match self.exact {
            Some(e) => e == [1, 0, 0, 1],
            None => {
                let m = self.m;
                (m[0] - 1.0).abs() <= ELEMENT_TOL
                    && m[1].abs() <= ELEMENT_TOL
                    && m[2].abs() <= ELEMENT_TOL
                    && (m[3] - 1.0).abs() <= ELEMENT_TOL
            }
        }
    }

    /// Equality in `PSL(2, R)`: exact when both sides are exact, entrywise otherwise.
    pub fn same_as(&self, other: &Isometry, tol: f64) -> bool {
        if let (Some(p), Some(q)) = (self.exact, other.exact) {
            return p == q;
        }
        let close = |p: [f64; 4], q: [f64; 4]| {
            p.iter().zip(q.iter()).all(|(x, y)| (x - y).abs() <= tol * x.abs().max(y.abs()).max(1.0))
        };
        let neg = self.m.map(|v| -v);
        close(self.m, other.m) || close(neg, other.m)
    }

    pub fn classify(&self) -> IsometryClass {
        self.classify_with(PARABOLIC_TOL)
    }

    pub fn classify_with(&self, tol: f64) -> IsometryClass {
        if self.is_identity() {
            return IsometryClass::Identity;
        }
        if let Some([a, _, _, d]) = self.exact {
            let t = (a + d).abs();
            return match t.cmp(&2) {
                std::cmp::Ordering::Less => IsometryClass::Elliptic,
                std::cmp::Ordering::Equal => IsometryClass::Parabolic,
                std::cmp::Ordering::Greater => IsometryClass::Hyperbolic,
            };
        }
        let t = self.trace().abs();
        if (t - 2.0).abs() <= tol {
            IsometryClass::Parabolic
        } else if t < 2.0 {
            IsometryClass::Elliptic
        } else {
            IsometryClass::Hyperbolic
        }
    }

    /// Order of an elliptic element when it is finite (at most 64), else `None`.
    pub fn elliptic_order(&self) -> Option<u32> {
        if self.classify() != IsometryClass::Elliptic {
            return None;
        }
        let mut g = *self;
        for n in 2..=64u32 {
            g = g.compose(self);
            if g.is_identity() {
                return Some(n);
            }
        }
        None
    }

    pub fn fixed_points(&self) -> Result<Vec<FixedPoint>> {
        let [a, b, c, d] = self.m;
        match self.classify() {
            IsometryClass::Identity => Err(Error::IdentityInput),
            IsometryClass::Elliptic => {
                let t = a + d;
                let y = (4.0 - t * t).max(0.0).sqrt() / (2.0 * c.abs());
                let x = (a - d) / (2.0 * c);
                Ok(vec![FixedPoint::Interior(UhpPoint { x, y })])
            }
            IsometryClass::Parabolic => {
                if self.c_is_zero() {
                    Ok(vec![FixedPoint::Boundary(BoundaryPoint::Infinity)])
                } else {
                    Ok(vec![FixedPoint::Boundary(BoundaryPoint::Real((a - d) / (2.0 * c)))])
                }
            }
            IsometryClass::Hyperbolic => {
                if self.c_is_zero() {
                    // z -> (a z + b) / d
                    Ok(vec![
                        FixedPoint::Boundary(BoundaryPoint::Real(b / (d - a))),
                        FixedPoint::Boundary(BoundaryPoint::Infinity),
                    ])
                } else {
                    let t = a + d;
                    let s = (t * t - 4.0).sqrt();
                    let mut xs = [(a - d - s) / (2.0 * c), (a - d + s) / (2.0 * c)];
                    xs.sort_by(|p, q| p.total_cmp(q));
                    Ok(xs.iter().map(|&x| FixedPoint::Boundary(BoundaryPoint::Real(x))).collect())
                }
            }
        }
    }

    /// Whether the element fixes a boundary point.
    pub fn fixes_boundary(&self, p: BoundaryPoint, tol: f64) -> bool {
        match p {
            BoundaryPoint::Infinity => self.c_is_zero(),
            BoundaryPoint::Real(x) => {
                let [a, b, c, d] = self.m;
                // c x^2 + (d - a) x - b = 0
                let r = c * x * x + (d - a) * x - b;
                let scale = (c.abs() * x * x + (d - a).abs() * x.abs() + b.abs()).max(1.0);
                r.abs() <= tol * scale
            }
        }
    }
}

impl fmt::Display for Isometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.exact {
            Some([a, b, c, d]) => write!(f, "({a},{b};{c},{d})"),
            None => {
                let [a, b, c, d] = self.m;
                write!(f, "({a:.6},{b:.6};{c:.6},{d:.6})")
            }
        }
    }
}

/// A complete geodesic, stored as a Klein-model chord.
///
/// The chord runs from `e1` to `e2`; the selected closed half-plane is the one
/// on the left of that direction when `left` is true.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Geodesic {
    pub e1: KleinPoint,
    pub e2: KleinPoint,
    pub left: bool,
}

impl Geodesic {
    /// Geodesic through two boundary points, selecting the left half-plane.
    pub fn through(p: BoundaryPoint, q: BoundaryPoint) -> Self {
        Self { e1: p.to_klein(), e2: q.to_klein(), left: true }
    }

    pub fn endpoints(&self) -> [BoundaryPoint; 2] {
        [BoundaryPoint::from_klein(self.e1), BoundaryPoint::from_klein(self.e2)]
    }

    /// Positive inside the selected half-plane, zero on the chord.
    pub fn signed_klein(&self, k: KleinPoint) -> f64 {
        let (dx, dy) = (self.e2.x - self.e1.x, self.e2.y - self.e1.y);
        let cross = dx * (k.y - self.e1.y) - dy * (k.x - self.e1.x);
        if self.left {
            cross
        } else {
            -cross
        }
    }

    pub fn contains(&self, z: UhpPoint, tol: f64) -> bool {
        self.signed_klein(to_klein(z)) >= -tol
    }

    /// Points of the geodesic at evenly spaced chord parameters in `(0, 1)`.
    pub fn sample(&self, n: usize) -> Vec<UhpPoint> {
        (1..=n)
            .filter_map(|j| {
                let s = j as f64 / (n + 1) as f64;
                let k = KleinPoint {
                    x: self.e1.x + s * (self.e2.x - self.e1.x),
                    y: self.e1.y + s * (self.e2.y - self.e1.y),
                };
                from_klein(k).ok()
            })
            .collect()
    }
}

/// Endpoints on `R ∪ {∞}` of the perpendicular bisector of `z0` and `z1`.
pub fn bisector_endpoints(z0: UhpPoint, z1: UhpPoint) -> Result<[BoundaryPoint; 2]> {
    if z0 == z1 {
        return Err(Error::CoincidentPoints);
    }
    let (x0, y0, x1, y1) = (z0.x, z0.y, z1.x, z1.y);
    let dy = y1 - y0;
    if dy.abs() <= 1e-15 * y0.max(y1) {
        return Ok([BoundaryPoint::Real(0.5 * (x0 + x1)), BoundaryPoint::Infinity]);
    }
    // Real w with |w - z0|^2 / y0 = |w - z1|^2 / y1.
    let c = (x0 * y1 - x1 * y0) / dy;
    let k = ((x0 * x0 + y0 * y0) * y1 - (x1 * x1 + y1 * y1) * y0) / dy;
    let r = (c * c - k).max(0.0).sqrt();
    Ok([BoundaryPoint::Real(c - r), BoundaryPoint::Real(c + r)])
}

/// Perpendicular bisector of the segment from `z0` to `z1`, with the
/// half-plane containing `z0` selected.
pub fn perp_bisector(z0: UhpPoint, z1: UhpPoint) -> Result<Geodesic> {
    let [p, q] = bisector_endpoints(z0, z1)?;
    let mut g = Geodesic::through(p, q);
    if g.signed_klein(to_klein(z0)) < 0.0 {
        std::mem::swap(&mut g.e1, &mut g.e2);
    }
    Ok(g)
}
