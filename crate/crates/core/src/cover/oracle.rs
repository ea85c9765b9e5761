//! Certified brute-force minimum of `d(p, g·q)` over the group.

use crate::enumeration::{norm_ball_with, EnumLimits, GroupBall, GroupPresentation};
use crate::error::Result;
use crate::isometry::{dist, Isometry, UhpPoint};

/// Two distances within this tolerance are treated as equal.
pub const TIE_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug)]
pub struct CertifiedDistance {
    pub value: f64,
    pub realizer: Isometry,
    /// Radius of the ball the search was certified against.
    pub certificate_radius: f64,
    /// No element outside the searched ball can do better: for those,
    /// `d(p, g·q) >= d(z0, g·z0) - d(p, z0) - d(q, z0) > value`.
    pub certified: bool,
}

/// All minimizers of `d(p, g·q)` for one pair, as indices into the oracle ball.
#[derive(Clone, Debug)]
pub struct Realizers {
    pub value: f64,
    pub elements: Vec<usize>,
    pub certified: bool,
}

/// Minimum-distance search over a displacement ball sorted by displacement.
#[derive(Clone, Debug)]
pub struct Oracle {
    ball: GroupBall,
}

impl Oracle {
    pub fn new(group: &GroupPresentation, center: UhpPoint, radius: f64, limits: EnumLimits) -> Result<Self> {
        Ok(Self { ball: norm_ball_with(group, center, radius, limits, None)? })
    }

    pub fn from_ball(ball: GroupBall) -> Self {
        Self { ball }
    }

    pub fn ball(&self) -> &GroupBall {
        &self.ball
    }

    pub fn center(&self) -> UhpPoint {
        self.ball.center
    }

    pub fn element(&self, i: usize) -> &Isometry {
        &self.ball.elements[i].element
    }

    pub fn certified_radius(&self) -> f64 {
        self.ball.certificate.radius().unwrap_or(0.0)
    }

    pub fn realizers(&self, p: UhpPoint, q: UhpPoint) -> Realizers {
        let c = self.ball.center;
        let reach = dist(p, c) + dist(q, c);
        let mut best = f64::INFINITY;
        let mut cands: Vec<(usize, f64)> = Vec::new();
        let mut stopped = false;
        for (i, e) in self.ball.iter().enumerate() {
            if e.displacement > best + reach + TIE_TOL {
                stopped = true;
                break;
            }
            let d = dist(p, e.element.apply(q));
            if d <= best + TIE_TOL {
                best = best.min(d);
                cands.push((i, d));
            }
        }
        cands.retain(|&(_, d)| d <= best + TIE_TOL);
        let certified = stopped || self.ball.certificate.covers(best + reach + TIE_TOL);
        Realizers { value: best, elements: cands.into_iter().map(|x| x.0).collect(), certified }
    }

    pub fn min_distance(&self, p: UhpPoint, q: UhpPoint) -> CertifiedDistance {
        let r = self.realizers(p, q);
        CertifiedDistance {
            value: r.value,
            realizer: *self.element(r.elements[0]),
            certificate_radius: self.certified_radius(),
            certified: r.certified,
        }
    }
}

/// Minimum of `d(p, g·q)` over the group, searched in a ball of radius
/// `d(p,q) + d(p,z0) + d(q,z0)`, which always suffices.
pub fn certified_min_distance(
    p: UhpPoint,
    q: UhpPoint,
    group: &GroupPresentation,
    z0: UhpPoint,
) -> Result<CertifiedDistance> {
    let radius = dist(p, q) + dist(p, z0) + dist(q, z0) + 1e-6;
    let oracle = Oracle::new(group, z0, radius, EnumLimits::default())?;
    Ok(oracle.min_distance(p, q))
}
