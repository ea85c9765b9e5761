//! Inner approximations of the complement of the limit set, and clipping of
//! a polygon to the Nielsen region.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::dirichlet::{build_polygon_with, DirichletPolygon, ExtraCut};
use crate::enumeration::{word_ball, GroupPresentation};
use crate::error::{Error, Result};
use crate::isometry::BoundaryPoint;

/// The boundary arc from `start` to `end` in the positive direction of the
/// real line (through ∞ when `end < start`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub start: BoundaryPoint,
    pub end: BoundaryPoint,
}

fn angle(p: BoundaryPoint) -> f64 {
    match p {
        BoundaryPoint::Infinity => PI,
        BoundaryPoint::Real(x) => 2.0 * x.atan(),
    }
}

fn from_angle(t: f64) -> BoundaryPoint {
    let t = (t + PI).rem_euclid(2.0 * PI) - PI;
    if (t.abs() - PI).abs() < 1e-15 {
        BoundaryPoint::Infinity
    } else {
        BoundaryPoint::Real((0.5 * t).tan())
    }
}

impl Interval {
    /// Start angle and positive length on the circle.
    fn arc(&self) -> (f64, f64) {
        let a = angle(self.start);
        let len = (angle(self.end) - a).rem_euclid(2.0 * PI);
        (a, len)
    }

    pub fn midpoint(&self) -> BoundaryPoint {
        let (a, len) = self.arc();
        from_angle(a + 0.5 * len)
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        let (a, len) = self.arc();
        let (b, olen) = other.arc();
        let off = (b - a).rem_euclid(2.0 * PI);
        off + olen <= len + 1e-9 || (len >= 2.0 * PI - 1e-12)
    }
}

/// Merges arcs that overlap or touch, keeping the original endpoints.
pub fn merge(intervals: &[Interval]) -> Vec<Interval> {
    // (start angle, length, interval)
    let mut arcs: Vec<(f64, f64, Interval)> = intervals
        .iter()
        .map(|i| {
            let (a, len) = i.arc();
            (a, len, *i)
        })
        .filter(|a| a.1 > 0.0)
        .collect();
    arcs.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut out: Vec<(f64, f64, Interval)> = Vec::new();
    for (a, len, iv) in arcs {
        if let Some(last) = out.last_mut() {
            if a <= last.0 + last.1 + 1e-9 {
                if a + len > last.0 + last.1 {
                    last.1 = a + len - last.0;
                    last.2.end = iv.end;
                }
                continue;
            }
        }
        out.push((a, len, iv));
    }
    // arcs running past the cut at -π may swallow arcs at the start
    while out.len() > 1 {
        let (la, llen, _) = *out.last().unwrap();
        let (fa, flen, fiv) = out[0];
        if fa + 2.0 * PI > la + llen + 1e-9 {
            break;
        }
        let last = out.last_mut().unwrap();
        if fa + flen + 2.0 * PI > la + llen {
            last.1 = fa + flen + 2.0 * PI - la;
            last.2.end = fiv.end;
        }
        out.remove(0);
    }
    out.into_iter().map(|x| x.2).collect()
}

/// Free sides of the polygon as boundary intervals.
pub fn free_intervals(p: &DirichletPolygon) -> Vec<Interval> {
    p.sides
        .iter()
        .filter(|s| s.is_free())
        .filter_map(|s| {
            let a = p.vertices[s.start].point.ideal()?;
            let b = p.vertices[s.end].point.ideal()?;
            Some(Interval { start: a, end: b })
        })
        .collect()
}

/// Images of the free sides under all words of length at most `depth`,
/// merged. These lie in the complement of the limit set.
pub fn nielsen_intervals(p: &DirichletPolygon, group: &GroupPresentation, depth: usize) -> Result<Vec<Interval>> {
    let free = free_intervals(p);
    if free.is_empty() {
        return Err(Error::NoFreeSides);
    }
    let ball = word_ball(group, depth);
    let mut images = Vec::new();
    for g in ball.isometries() {
        for iv in &free {
            images.push(Interval { start: g.apply_boundary(iv.start), end: g.apply_boundary(iv.end) });
        }
    }
    Ok(merge(&images))
}

/// The polygon intersected with the half-planes bounded by the geodesics
/// over each interval, on the side away from the interval.
pub fn nielsen_clip(p: &DirichletPolygon, intervals: &[Interval]) -> Result<DirichletPolygon> {
    if intervals.is_empty() {
        return Ok(p.clone());
    }
    let cuts: Vec<ExtraCut> = intervals
        .iter()
        .filter(|iv| iv.start.to_klein().dist(&iv.end.to_klein()) > 1e-12)
        .map(|iv| ExtraCut { ends: [iv.start, iv.end], away: iv.midpoint() })
        .collect();
    build_polygon_with(p.center, &p.ball, &cuts)
}
