//! Geodesic covers: finite sets of group elements realizing all quotient
//! distances between points of a fundamental domain.
//!
//! A *second* cover `C` satisfies `min_{g in C} d(p, g·q) = min_{g in Γ} d(p, g·q)`
//! for all `p, q` in the domain; a *first* cover asks this of
//! `min_{g1, g2 in C} d(g1·p, g2·q)`, i.e. of `C^-1 C` as a second cover.

mod construct;
mod context;
pub mod horoball;
pub mod nielsen;
pub mod oracle;
pub mod sampling;
pub mod verify;

use serde::{Deserialize, Serialize};

use crate::isometry::{Isometry, UhpPoint};

pub use construct::{build_basic_cover, build_nielsen_cover, build_truncated_cover, realizer_union};
pub use context::CoverContext;
pub use horoball::{select_horoballs, stabilizer_property, truncate, HoroballSpec, HEIGHT_SCHEDULE};
pub use nielsen::{nielsen_clip, nielsen_intervals, Interval};
pub use oracle::{certified_min_distance, CertifiedDistance, Oracle, Realizers};
pub use sampling::{pair_suite, PairSuite, SampleSpec};
pub use verify::{
    difference_set, evaluate_suite, first_cover_search, minimal_second_cover, necessity_probe, verify_first_cover,
    verify_second_cover, Failure, NecessityWitness, SuiteRealizers, VerificationReport,
};

/// Which construction produced an element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Provenance {
    BasicU,
    TruncatedU,
    NielsenU,
    Lifted,
    Manual,
}

/// Elements added beyond the main construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExtraTag {
    /// Realizers dropped by horocyclic truncation (the finite difference set).
    DifferenceSet,
    /// Realizers of pairs outside the Nielsen region.
    Hypercycle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CoverKind {
    First,
    Second,
}

#[derive(Clone, Copy, Debug)]
pub struct CoverElement {
    pub element: Isometry,
    pub provenance: Provenance,
    pub extra: Option<ExtraTag>,
}

/// A candidate cover; always contains the identity.
#[derive(Clone, Debug)]
pub struct CoverCandidate {
    pub elements: Vec<CoverElement>,
    pub center: UhpPoint,
    pub kind: CoverKind,
}

impl CoverCandidate {
    pub fn new(center: UhpPoint, kind: CoverKind) -> Self {
        let mut c = Self { elements: Vec::new(), center, kind };
        c.push(Isometry::identity(), Provenance::Manual, None);
        c
    }

    pub fn from_elements(
        center: UhpPoint,
        kind: CoverKind,
        provenance: Provenance,
        elements: impl IntoIterator<Item = Isometry>,
    ) -> Self {
        let mut c = Self { elements: Vec::new(), center, kind };
        c.push(Isometry::identity(), provenance, None);
        for g in elements {
            c.push(g, provenance, None);
        }
        c
    }

    /// Adds `g` unless already present. Returns whether it was added.
    pub fn push(&mut self, g: Isometry, provenance: Provenance, extra: Option<ExtraTag>) -> bool {
        if self.contains(&g) {
            return false;
        }
        self.elements.push(CoverElement { element: g, provenance, extra });
        true
    }

    pub fn contains(&self, g: &Isometry) -> bool {
        self.elements.iter().any(|e| e.element.same_as(g, 1e-9))
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn isometries(&self) -> Vec<Isometry> {
        self.elements.iter().map(|e| e.element).collect()
    }

    /// Elements from the main construction, without tagged extras.
    pub fn core(&self) -> Vec<Isometry> {
        self.elements.iter().filter(|e| e.extra.is_none()).map(|e| e.element).collect()
    }

    /// Number of tagged extras.
    pub fn extra_count(&self) -> usize {
        self.elements.iter().filter(|e| e.extra.is_some()).count()
    }
}

/// Lifts a cover of a finite-index subgroup `H` to the whole group, given
/// right coset representatives `g_i` (`Γ = H g_1 ∪ ... ∪ H g_n`): the set
/// `{h g_i}` with at most `|C_H|·n` elements.
pub fn lift_cover(h_cover: &CoverCandidate, reps: &[Isometry]) -> CoverCandidate {
    let mut out = CoverCandidate { elements: Vec::new(), center: h_cover.center, kind: h_cover.kind };
    for e in &h_cover.elements {
        for g in reps {
            out.push(e.element.compose(g), Provenance::Lifted, None);
        }
    }
    if !out.contains(&Isometry::identity()) {
        out.elements.insert(
            0,
            CoverElement { element: Isometry::identity(), provenance: Provenance::Lifted, extra: None },
        );
    }
    out
}

#[cfg(feature = "parallel")]
pub(crate) fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    items.iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lift_counts() {
        let g = Isometry::dilation(2.0).unwrap();
        let h = CoverCandidate::from_elements(
            UhpPoint::i(),
            CoverKind::Second,
            Provenance::Manual,
            [g.compose(&g), g.compose(&g).inverse()],
        );
        assert_eq!(lift_cover(&h, &[Isometry::identity()]).len(), h.len());
        let l = lift_cover(&h, &[Isometry::identity(), g]);
        assert!(l.len() <= 6);
        assert!(l.contains(&g) && l.contains(&g.inverse()));
    }
}
