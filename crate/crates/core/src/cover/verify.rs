//! Sampled verification of covers against the brute-force oracle, necessity
//! probes and exact minimal covers for a pair suite.

use std::collections::BTreeSet;
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::isometry::{dist, Isometry, UhpPoint};

use super::oracle::{Oracle, Realizers, TIE_TOL};
use super::{par_map, CoverCandidate};

/// Realizer sets of every pair of a suite, computed once.
#[derive(Clone, Debug)]
pub struct SuiteRealizers {
    pub pairs: Vec<(UhpPoint, UhpPoint)>,
    pub sets: Vec<Realizers>,
    pub seed: u64,
}

impl SuiteRealizers {
    pub fn all_certified(&self) -> bool {
        self.sets.iter().all(|r| r.certified)
    }

    /// Distinct realizer sets as sorted index lists.
    fn distinct_sets(&self) -> Vec<Vec<usize>> {
        let mut s: BTreeSet<Vec<usize>> = BTreeSet::new();
        for r in &self.sets {
            let mut v = r.elements.clone();
            v.sort_unstable();
            s.insert(v);
        }
        s.into_iter().collect()
    }
}

pub fn evaluate_suite(oracle: &Oracle, pairs: &[(UhpPoint, UhpPoint)], seed: u64) -> SuiteRealizers {
    let sets = par_map(pairs, |(p, q)| oracle.realizers(*p, *q));
    SuiteRealizers { pairs: pairs.to_vec(), sets, seed }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Failure {
    pub p: UhpPoint,
    pub q: UhpPoint,
    pub cover_min: f64,
    pub oracle_min: f64,
    pub realizer: Isometry,
}

/// An element whose removal breaks some pair.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct NecessityWitness {
    /// Index into the cover.
    pub element: usize,
    /// A pair realized by this element alone, if one was sampled.
    pub witness: Option<(UhpPoint, UhpPoint)>,
    /// The cover without this element still passes the suite.
    pub removable: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerificationReport {
    pub pairs_tested: usize,
    pub failures: Vec<Failure>,
    pub all_certified: bool,
    pub seed: u64,
    pub cover_size: usize,
    /// Filled by [`VerificationReport::with_necessity`].
    #[serde(default)]
    pub necessity: Vec<NecessityWitness>,
}

impl VerificationReport {
    pub fn verified(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn with_necessity(mut self, oracle: &Oracle, suite: &SuiteRealizers, cover: &CoverCandidate) -> Self {
        self.necessity = necessity_probe(oracle, suite, cover);
        self
    }

    /// Number of elements with a witness pair.
    pub fn necessary_count(&self) -> usize {
        self.necessity.iter().filter(|w| w.witness.is_some()).count()
    }
}

/// Oracle ball indices of the given elements; elements outside the ball
/// cannot realize any certified minimum and are skipped.
fn indices(oracle: &Oracle, elements: &[Isometry]) -> BTreeSet<usize> {
    elements.iter().filter_map(|g| oracle.ball().index_of(g)).collect()
}

fn check(oracle: &Oracle, suite: &SuiteRealizers, set: &[Isometry]) -> VerificationReport {
    let idx = indices(oracle, set);
    let mut failures = Vec::new();
    for ((p, q), r) in suite.pairs.iter().zip(&suite.sets) {
        if r.elements.iter().any(|i| idx.contains(i)) {
            continue;
        }
        let cover_min = set.iter().map(|g| dist(*p, g.apply(*q))).fold(f64::INFINITY, f64::min);
        if cover_min <= r.value + TIE_TOL {
            continue;
        }
        failures.push(Failure { p: *p, q: *q, cover_min, oracle_min: r.value, realizer: *oracle.element(r.elements[0]) });
    }
    VerificationReport {
        pairs_tested: suite.pairs.len(),
        failures,
        all_certified: suite.all_certified(),
        seed: suite.seed,
        cover_size: set.len(),
        necessity: Vec::new(),
    }
}

/// Checks `min_{g in C} d(p, g·q)` against the oracle on every pair.
pub fn verify_second_cover(oracle: &Oracle, suite: &SuiteRealizers, cover: &[Isometry]) -> VerificationReport {
    check(oracle, suite, cover)
}

/// `C^-1 C` without duplicates.
pub fn difference_set(cover: &[Isometry]) -> Vec<Isometry> {
    let mut out: Vec<Isometry> = Vec::new();
    for a in cover {
        let ai = a.inverse();
        for b in cover {
            let g = ai.compose(b);
            if !out.iter().any(|h| h.same_as(&g, 1e-9)) {
                out.push(g);
            }
        }
    }
    out
}

/// Checks `min_{g1, g2 in C} d(g1·p, g2·q)` against the oracle.
pub fn verify_first_cover(oracle: &Oracle, suite: &SuiteRealizers, cover: &[Isometry]) -> VerificationReport {
    let mut r = check(oracle, suite, &difference_set(cover));
    r.cover_size = cover.len();
    r
}

/// For each cover element: a sampled pair it alone realizes, and whether the
/// cover still passes without it.
pub fn necessity_probe(oracle: &Oracle, suite: &SuiteRealizers, cover: &CoverCandidate) -> Vec<NecessityWitness> {
    let elems = cover.isometries();
    let ball_idx: Vec<Option<usize>> = elems.iter().map(|g| oracle.ball().index_of(g)).collect();
    let items: Vec<usize> = (0..elems.len()).collect();
    par_map(&items, |&k| {
        let witness = ball_idx[k].and_then(|bi| {
            suite
                .pairs
                .iter()
                .zip(&suite.sets)
                .find(|(_, r)| r.elements.len() == 1 && r.elements[0] == bi)
                .map(|(pq, _)| *pq)
        });
        let rest: Vec<Isometry> = elems.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, g)| *g).collect();
        let removable = check(oracle, suite, &rest).verified();
        NecessityWitness { element: k, witness, removable }
    })
}

/// Smallest subset of oracle-ball indices meeting every set, by branch and bound.
fn min_hitting_set(sets: &[Vec<usize>]) -> Vec<usize> {
    fn go(sets: &[Vec<usize>], chosen: &mut Vec<usize>, best: &mut Option<Vec<usize>>) {
        if best.as_ref().is_some_and(|b| chosen.len() >= b.len()) {
            return;
        }
        let open = sets.iter().filter(|s| !s.iter().any(|i| chosen.contains(i))).min_by_key(|s| s.len());
        let Some(open) = open else {
            *best = Some(chosen.clone());
            return;
        };
        for &i in open {
            chosen.push(i);
            go(sets, chosen, best);
            chosen.pop();
        }
    }
    let mut best = None;
    go(sets, &mut Vec::new(), &mut best);
    best.unwrap_or_default()
}

/// A smallest set of elements meeting every realizer set of the suite,
/// identity included.
pub fn minimal_second_cover(oracle: &Oracle, suite: &SuiteRealizers) -> Vec<Isometry> {
    let id = oracle.ball().index_of(&Isometry::identity()).expect("identity in ball");
    let sets: Vec<Vec<usize>> = suite.distinct_sets().into_iter().filter(|s| !s.contains(&id)).collect();
    let mut out = vec![Isometry::identity()];
    out.extend(min_hitting_set(&sets).into_iter().map(|i| *oracle.element(i)));
    out
}

/// The smallest `C` drawn from `pool`, with the identity, such that `C^-1 C`
/// passes the suite; sizes are tried in increasing order.
pub fn first_cover_search(
    oracle: &Oracle,
    suite: &SuiteRealizers,
    pool: &[Isometry],
    sizes: RangeInclusive<usize>,
) -> Option<Vec<Isometry>> {
    let pool: Vec<Isometry> = pool.iter().filter(|g| !g.is_identity()).copied().collect();
    let sets = suite.distinct_sets();
    let passes = |c: &[Isometry]| {
        let idx = indices(oracle, &difference_set(c));
        sets.iter().all(|s| s.iter().any(|i| idx.contains(i)))
    };
    fn combos(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if cur.len() == k {
            return f(cur);
        }
        for i in start..n {
            cur.push(i);
            if combos(n, k, i + 1, cur, f) {
                return true;
            }
            cur.pop();
        }
        false
    }
    for size in sizes {
        if size == 0 {
            continue;
        }
        let mut found = None;
        combos(pool.len(), size - 1, 0, &mut Vec::new(), &mut |ix| {
            let mut c = vec![Isometry::identity()];
            c.extend(ix.iter().map(|&i| pool[i]));
            if passes(&c) {
                found = Some(c);
                true
            } else {
                false
            }
        });
        if found.is_some() {
            return found;
        }
    }
    None
}
