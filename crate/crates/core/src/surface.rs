//! Distances on the quotient surface through a verified cover, and the
//! distinct-distances count for point sets on the surface.

use serde::{Deserialize, Serialize};

use crate::cover::{CoverCandidate, VerificationReport};
use crate::dirichlet::{DirichletPolygon, BOUNDARY_TOL};
use crate::error::{Error, Result};
use crate::isometry::{dist, Isometry, UhpPoint};

/// A point of the surface, represented in the polygon.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurfacePoint {
    pub z: UhpPoint,
}

impl SurfacePoint {
    pub fn new(z: UhpPoint, polygon: &DirichletPolygon) -> Result<Self> {
        if !polygon.contains(z, BOUNDARY_TOL) {
            return Err(Error::InvalidPoint(format!("{z} is outside the domain")));
        }
        Ok(Self { z })
    }

    /// Skips the membership check.
    pub fn unchecked(z: UhpPoint) -> Self {
        Self { z }
    }
}

/// A cover cleared for distance queries.
#[derive(Clone, Debug)]
pub struct VerifiedCover {
    elements: Vec<Isometry>,
    pub forced: bool,
}

impl VerifiedCover {
    pub fn new(cover: &CoverCandidate, report: &VerificationReport) -> Result<Self> {
        if !report.verified() {
            return Err(Error::UnverifiedCover);
        }
        Ok(Self { elements: cover.isometries(), forced: false })
    }

    /// Accepts the elements without a report.
    pub fn forced(elements: Vec<Isometry>) -> Self {
        Self { elements, forced: true }
    }

    pub fn elements(&self) -> &[Isometry] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

pub fn surface_distance(p: &SurfacePoint, q: &SurfacePoint, cover: &VerifiedCover) -> f64 {
    cover.elements.iter().map(|g| dist(p.z, g.apply(q.z))).fold(f64::INFINITY, f64::min)
}

/// How the bound `N / (K^3 ln(K N))` is normalized.
pub const BOUND_NORMALIZATION: &str = "normalized: c = 1, natural logarithm";

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DistinctDistanceReport {
    pub n: usize,
    pub count: usize,
    pub tolerance: f64,
    pub k: usize,
    pub bound: f64,
    pub normalization: String,
    /// All pairwise distances, sorted.
    pub values: Vec<f64>,
}

impl DistinctDistanceReport {
    pub fn meets_bound(&self) -> bool {
        self.count as f64 >= self.bound
    }
}

/// `N / (K^3 ln(K N))`.
pub fn distinct_distance_bound(n: usize, k: usize) -> f64 {
    let (n, k) = (n as f64, k as f64);
    n / (k.powi(3) * (k * n).ln())
}

/// Number of clusters of sorted values, joining neighbours at most `tol` apart.
pub fn cluster_count(sorted: &[f64], tol: f64) -> usize {
    if sorted.is_empty() {
        return 0;
    }
    1 + sorted.windows(2).filter(|w| w[1] - w[0] > tol).count()
}

/// Pairwise surface distances of the points, deduplicated at `tol`, with
/// the lower bound for a cover of size `cover.len()`.
pub fn distinct_distances(points: &[SurfacePoint], cover: &VerifiedCover, tol: f64) -> DistinctDistanceReport {
    let mut values = Vec::with_capacity(points.len() * points.len().saturating_sub(1) / 2);
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            values.push(surface_distance(p, q, cover));
        }
    }
    values.sort_by(f64::total_cmp);
    let k = cover.len();
    DistinctDistanceReport {
        n: points.len(),
        count: cluster_count(&values, tol),
        tolerance: tol,
        k,
        bound: distinct_distance_bound(points.len(), k),
        normalization: BOUND_NORMALIZATION.into(),
        values,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bound_arithmetic() {
        assert!((distinct_distance_bound(100, 10) - 100.0 / (1000.0 * 1000f64.ln())).abs() < 1e-15);
        assert!((distinct_distance_bound(100, 10) - 0.014477).abs() < 1e-6);
    }

    #[test]
    fn clusters() {
        assert_eq!(cluster_count(&[], 1e-7), 0);
        assert_eq!(cluster_count(&[1.0, 1.0 + 1e-8, 2.0], 1e-7), 2);
    }

    #[test]
    fn two_points_one_distance() {
        let c = VerifiedCover::forced(vec![Isometry::identity()]);
        let pts = [SurfacePoint::unchecked(UhpPoint::i()), SurfacePoint::unchecked(UhpPoint::at(0.2, 1.5))];
        let r = distinct_distances(&pts, &c, 1e-7);
        assert_eq!(r.count, 1);
        assert_eq!(r.values.len(), 1);
    }
}
