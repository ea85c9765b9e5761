//! Certifying that a polygon built from a finite ball is the whole Dirichlet
//! domain, by checking the side-pairing conditions and that every generator
//! is a product of the pairings.

use std::f64::consts::PI;
use web_time::Instant;

use crate::enumeration::{tessellation_ball, word_ball_with, BallElement, EnumLimits, GroupPresentation};
use crate::error::{Error, Result};
use crate::isometry::{dist, Isometry, IsometryClass, UhpPoint};

use super::{build_unclassified, DirichletPolygon, SideKind, VertexPoint};

const MAX_WORD_LENGTH: usize = 16;
const MATCH_TOL: f64 = 1e-7;

/// A polygon proven to be the Dirichlet domain of the group, with its side
/// pairings (which generate the group).
#[derive(Clone, Debug)]
pub struct CertifiedDomain {
    pub polygon: DirichletPolygon,
    pub pairings: Vec<BallElement>,
    /// Word length of the ball the polygon was first built from.
    pub word_length: usize,
}

/// Builds the Dirichlet polygon from word balls of growing length until it
/// passes the side-pairing checks, then reclassifies its vertices against a
/// complete ball from the tessellation.
pub fn certify_domain(group: &GroupPresentation, center: UhpPoint, limits: EnumLimits) -> Result<CertifiedDomain> {
    let start = Instant::now();
    let mut last = String::from("no word length tried");
    for length in 1..=MAX_WORD_LENGTH {
        let ball = word_ball_with(group, length, center, limits);
        if let Some(g) = ball.elliptic_warning {
            return Err(Error::EllipticCenter { stabilizer: g });
        }
        let capped = !matches!(ball.certificate, crate::enumeration::Certificate::WordOnly { .. });
        let polygon = build_unclassified(center, &ball, &[])?;
        match check_pairings(&polygon, group) {
            Ok(()) => {
                let pairings = polygon
                    .pairings()
                    .into_iter()
                    .map(|(g, w)| BallElement { element: g, word: w, displacement: dist(center, g.apply(center)) })
                    .collect();
                let mut domain = CertifiedDomain { polygon, pairings, word_length: length };
                let reach = domain.pairings.iter().map(|p| p.displacement).fold(0.0, f64::max);
                let radius = (2.0 * domain.polygon.max_vertex_distance()).max(2.0 * reach) + 1.0;
                let full = tessellation_ball(&domain, center, radius, limits)?;
                domain.polygon.classify(&full);
                domain.polygon.ball = full;
                log::debug!("certified domain at word length {length}");
                return Ok(domain);
            }
            Err(reason) => last = format!("word length {length}: {reason}"),
        }
        if capped || start.elapsed() > limits.max_time {
            break;
        }
    }
    Err(Error::Uncertified(last))
}

/// Moves `g·center` into the polygon by repeatedly applying inverse side
/// pairings. Returns the resulting element `h` (with `h·center` in the
/// polygon) and the pairings used, as indices into `pairings`.
pub fn reduce_to_domain(g: &Isometry, center: UhpPoint, pairings: &[Isometry]) -> (Isometry, Vec<usize>) {
    let targets: Vec<UhpPoint> = pairings.iter().map(|p| p.apply(center)).collect();
    let mut h = *g;
    let mut used = Vec::new();
    for _ in 0..10_000 {
        let w = h.apply(center);
        let d0 = dist(w, center);
        let mut best: Option<(usize, f64)> = None;
        for (i, t) in targets.iter().enumerate() {
            let gain = d0 - dist(w, *t);
            if gain > 1e-10 && best.map_or(true, |b| gain > b.1) {
                best = Some((i, gain));
            }
        }
        let Some((i, _)) = best else { break };
        h = pairings[i].inverse().compose(&h);
        used.push(i);
    }
    (h, used)
}

fn partner(p: &DirichletPolygon, s: usize) -> Option<usize> {
    let side = &p.sides[s];
    let g = side.pairing()?;
    let gi = g.inverse();
    let a = p.vertices[side.start].point.map(&gi);
    let b = p.vertices[side.end].point.map(&gi);
    (0..p.sides.len()).find(|&t| {
        let other = &p.sides[t];
        other.pairing().is_some_and(|h| h.same_as(&gi, 1e-9))
            && p.vertices[other.end].point.close_to(&a, MATCH_TOL)
            && p.vertices[other.start].point.close_to(&b, MATCH_TOL)
    })
}

/// Side pairings match up, vertex cycles close with angle sums `2π/m`
/// (parabolic at ideal vertices), and every generator reduces to the identity.
fn check_pairings(p: &DirichletPolygon, group: &GroupPresentation) -> std::result::Result<(), String> {
    if p.sides.is_empty() {
        return Err("no sides".into());
    }
    let n = p.sides.len();
    let mut partners = vec![usize::MAX; n];
    for s in 0..n {
        if p.sides[s].pairing().is_some() {
            partners[s] = partner(p, s).ok_or_else(|| format!("side {s} has no partner"))?;
        }
    }
    let mut seen = vec![false; p.vertices.len()];
    for v0 in 0..p.vertices.len() {
        if seen[v0] {
            continue;
        }
        let (sp, sn) = p.sides_at(v0);
        let ideal = matches!(p.vertices[v0].point, VertexPoint::Ideal(_));
        if ideal && (p.sides[sp].is_free() || p.sides[sn].is_free()) {
            seen[v0] = true;
            continue;
        }
        if p.sides[sn].pairing().is_none() {
            return Err(format!("vertex {v0} is not between paired sides"));
        }
        let (mut v, mut s) = (v0, sn);
        let mut c = Isometry::identity();
        let mut angle = p.vertices[v0].angle;
        seen[v0] = true;
        let mut closed = false;
        for _ in 0..1000 {
            let g = *p.sides[s].pairing().ok_or_else(|| format!("cycle of vertex {v0} meets an unpaired side"))?;
            let t = partners[s];
            let (nv, ns) = if v == p.sides[s].start {
                let nv = p.sides[t].end;
                (nv, nv)
            } else {
                let nv = p.sides[t].start;
                (nv, (nv + n - 1) % n)
            };
            c = g.inverse().compose(&c);
            if (nv, ns) == (v0, sn) {
                closed = true;
                break;
            }
            if !seen[nv] {
                angle += p.vertices[nv].angle;
            }
            seen[nv] = true;
            v = nv;
            s = ns;
        }
        if !closed {
            return Err(format!("cycle of vertex {v0} does not close"));
        }
        if ideal {
            if c.classify() != IsometryClass::Parabolic {
                return Err(format!("ideal vertex {v0} has a non-parabolic cycle transformation"));
            }
        } else {
            let m = match c.classify() {
                IsometryClass::Identity => 1,
                IsometryClass::Elliptic => c.elliptic_order().ok_or("cycle transformation of infinite order")?,
                _ => return Err(format!("vertex {v0} has a non-elliptic cycle transformation")),
            };
            if (angle * m as f64 - 2.0 * PI).abs() > 1e-6 * m as f64 {
                return Err(format!("vertex {v0}: angle sum {angle} is not 2π/{m}"));
            }
        }
    }
    let pairings: Vec<Isometry> = p.pairings().into_iter().map(|x| x.0).collect();
    for (g, name) in group.generators.iter().zip(&group.names) {
        let (h, _) = reduce_to_domain(g, p.center, &pairings);
        if !h.same_as(&Isometry::identity(), 1e-7) {
            return Err(format!("generator {name} is not a product of the side pairings"));
        }
    }
    if p.sides.iter().any(|s| matches!(s.kind, SideKind::Cut | SideKind::Horocycle { .. })) {
        return Err("polygon has non-bisector sides".into());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dirichlet::area;

    #[test]
    fn certifies_small_groups() {
        let m = GroupPresentation::modular();
        let d = certify_domain(&m, UhpPoint::at(0.0, 2.0), EnumLimits::default()).unwrap();
        assert!((area(&d.polygon) - PI / 3.0).abs() < 1e-9);
        assert_eq!(d.pairings.len(), 3);

        let g2 = GroupPresentation::exact("Gamma(2)", &[[1, 2, 0, 1], [1, 0, 2, 1]], true).unwrap();
        let d = certify_domain(&g2, UhpPoint::at(0.0, 2.0), EnumLimits::default()).unwrap();
        assert!((area(&d.polygon) - 2.0 * PI).abs() < 1e-9);

        let c = GroupPresentation::dilation(4.0).unwrap();
        let d = certify_domain(&c, UhpPoint::i(), EnumLimits::default()).unwrap();
        assert!(area(&d.polygon).is_infinite());
        assert_eq!(d.pairings.len(), 2);
    }

    #[test]
    fn reduction_recovers_element() {
        let m = GroupPresentation::modular();
        let z0 = UhpPoint::at(0.0, 2.0);
        let d = certify_domain(&m, z0, EnumLimits::default()).unwrap();
        let ps: Vec<Isometry> = d.pairings.iter().map(|p| p.element).collect();
        let g = Isometry::exact(5, 2, 2, 1).unwrap();
        let (h, used) = reduce_to_domain(&g, z0, &ps);
        assert!(h.is_identity());
        assert!(!used.is_empty());
    }
}
