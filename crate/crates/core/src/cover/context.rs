//! A certified domain together with an oracle large enough for every pair
//! sampled from it.

use crate::dirichlet::{certify_domain, CertifiedDomain, DirichletPolygon};
use crate::enumeration::{EnumLimits, GroupPresentation};
use crate::error::Result;
use crate::isometry::UhpPoint;

use super::oracle::Oracle;
use super::sampling::{default_radius, pair_suite, SampleSpec};
use super::verify::{evaluate_suite, SuiteRealizers};

#[derive(Clone, Debug)]
pub struct CoverContext {
    pub group: GroupPresentation,
    pub domain: CertifiedDomain,
    pub oracle: Oracle,
    /// Sample points lie within this distance of the center.
    pub sample_radius: f64,
}

impl CoverContext {
    /// The oracle ball has radius `4ρ` for sample radius `ρ`, enough for
    /// `best + d(p, z0) + d(q, z0)` with `best <= d(p, q) <= 2ρ`.
    pub fn new(group: &GroupPresentation, center: UhpPoint, limits: EnumLimits) -> Result<Self> {
        let domain = certify_domain(group, center, limits)?;
        let sample_radius = default_radius(&domain.polygon);
        let oracle = Oracle::new(group, center, 4.0 * sample_radius + 1e-6, limits)?;
        Ok(Self { group: group.clone(), domain, oracle, sample_radius })
    }

    pub fn polygon(&self) -> &DirichletPolygon {
        &self.domain.polygon
    }

    pub fn center(&self) -> UhpPoint {
        self.domain.polygon.center
    }

    /// Sampling parameters pinned to this context's radius.
    pub fn spec(&self, pairs: usize, seed: u64) -> SampleSpec {
        SampleSpec { radius: Some(self.sample_radius), ..SampleSpec::with_pairs(pairs, seed) }
    }

    /// Realizers of a fresh pair suite drawn from `region`.
    pub fn suite(&self, region: &DirichletPolygon, pairs: usize, seed: u64) -> SuiteRealizers {
        let s = pair_suite(region, &self.spec(pairs, seed));
        evaluate_suite(&self.oracle, &s.pairs, seed)
    }
}
