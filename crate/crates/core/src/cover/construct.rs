//! Sampled constructions of covers: every element realizing the quotient
//! distance for some sampled pair.

use std::collections::BTreeSet;

use crate::dirichlet::DirichletPolygon;
use crate::enumeration::GroupPresentation;
use crate::error::Result;
use crate::isometry::UhpPoint;

use super::horoball::{truncate, HoroballSpec};
use super::nielsen::{nielsen_clip, nielsen_intervals};
use super::oracle::Oracle;
use super::sampling::{default_radius, pair_suite, PairSuite, SampleSpec};
use super::{par_map, CoverCandidate, CoverKind, ExtraTag, Provenance};

/// Ball indices of all realizers of all pairs, sorted.
pub fn realizer_union(oracle: &Oracle, pairs: &[(UhpPoint, UhpPoint)]) -> Vec<usize> {
    let sets = par_map(pairs, |(p, q)| oracle.realizers(*p, *q).elements);
    let mut all = BTreeSet::new();
    for s in sets {
        all.extend(s);
    }
    all.into_iter().collect()
}

fn candidate(oracle: &Oracle, center: UhpPoint, provenance: Provenance, idx: &[usize]) -> CoverCandidate {
    CoverCandidate::from_elements(center, CoverKind::Second, provenance, idx.iter().map(|&i| *oracle.element(i)))
}

/// Elements `g` with `g·w` in the Dirichlet domain of `z`, over sampled pairs
/// `(z, w)` of the polygon.
pub fn build_basic_cover(p: &DirichletPolygon, oracle: &Oracle, spec: &SampleSpec) -> CoverCandidate {
    let suite = pair_suite(p, spec);
    let idx = realizer_union(oracle, &suite.pairs);
    candidate(oracle, p.center, Provenance::BasicU, &idx)
}

/// Pairs `(z, w)` with `z` in the truncated polygon and `w` anywhere in the polygon.
fn truncated_pairs(p: &DirichletPolygon, region: &DirichletPolygon, spec: &SampleSpec) -> PairSuite {
    let radius = spec.radius.unwrap_or_else(|| default_radius(p));
    let spec = SampleSpec { radius: Some(radius), ..*spec };
    let mut suite = pair_suite(region, &spec);
    let full = pair_suite(p, &SampleSpec { seed: spec.seed.wrapping_add(1), ..spec });
    suite.pairs.extend(full.pairs.into_iter().filter(|(z, _)| region.contains(*z, 1e-12)));
    suite
}

/// The truncated construction. A realizer `g` of `(z, w)` is dropped when `w`
/// lies in a horoball `U` and `g^-1·z` is as high as any orbit point of `z` in
/// the frame of `U`, i.e. when `g·w` falls in the cusp piece of the
/// Dirichlet domain of `z` that truncation removes. Dropped elements not
/// otherwise present are kept as [`ExtraTag::DifferenceSet`] extras.
pub fn build_truncated_cover(
    p: &DirichletPolygon,
    oracle: &Oracle,
    horoballs: &[HoroballSpec],
    spec: &SampleSpec,
) -> Result<CoverCandidate> {
    if horoballs.is_empty() {
        let mut c = build_basic_cover(p, oracle, spec);
        c.elements.iter_mut().for_each(|e| e.provenance = Provenance::TruncatedU);
        return Ok(c);
    }
    let region = truncate(p, horoballs)?;
    let suite = truncated_pairs(p, &region, spec);
    let reach = 2.0 * suite.radius + 1.0;
    let per_pair = par_map(&suite.pairs, |&(z, w)| {
        let r = oracle.realizers(z, w);
        let mut kept = Vec::new();
        let mut dropped = Vec::new();
        for &i in &r.elements {
            let g = oracle.element(i);
            let cut = horoballs.iter().any(|h| {
                if !h.contains(w) {
                    return false;
                }
                let top = oracle
                    .ball()
                    .within(reach)
                    .map(|e| h.height_of(e.element.apply(z)))
                    .fold(0.0, f64::max);
                h.height_of(g.inverse().apply(z)) >= top * (1.0 - 1e-9)
            });
            if cut {
                dropped.push(i);
            } else {
                kept.push(i);
            }
        }
        (kept, dropped)
    });
    let mut kept = BTreeSet::new();
    let mut dropped = BTreeSet::new();
    for (k, d) in per_pair {
        kept.extend(k);
        dropped.extend(d);
    }
    let kept: Vec<usize> = kept.into_iter().collect();
    let mut c = candidate(oracle, p.center, Provenance::TruncatedU, &kept);
    for i in dropped {
        c.push(*oracle.element(i), Provenance::TruncatedU, Some(ExtraTag::DifferenceSet));
    }
    Ok(c)
}

/// The Nielsen construction: realizers of pairs in the polygon clipped to
/// the Nielsen region, plus [`ExtraTag::Hypercycle`] extras realizing pairs
/// of the full polygon.
pub fn build_nielsen_cover(
    p: &DirichletPolygon,
    group: &GroupPresentation,
    oracle: &Oracle,
    depth: usize,
    spec: &SampleSpec,
) -> Result<(CoverCandidate, DirichletPolygon)> {
    let intervals = nielsen_intervals(p, group, depth)?;
    let region = nielsen_clip(p, &intervals)?;
    let inner = pair_suite(&region, spec);
    let idx = realizer_union(oracle, &inner.pairs);
    let mut c = candidate(oracle, p.center, Provenance::NielsenU, &idx);
    let outer = pair_suite(p, &SampleSpec { seed: spec.seed.wrapping_add(1), ..*spec });
    for i in realizer_union(oracle, &outer.pairs) {
        c.push(*oracle.element(i), Provenance::NielsenU, Some(ExtraTag::Hypercycle));
    }
    Ok((c, region))
}
