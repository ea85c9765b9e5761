//! Group presentations and finite truncations of a group: word balls and
//! certified displacement balls.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::time::Duration;

use web_time::Instant;

use serde::{Deserialize, Serialize};

use crate::dirichlet;
use crate::error::{Error, Result};
use crate::isometry::{dist, Isometry, UhpPoint, ELEMENT_TOL};

/// How group elements are represented and compared.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ArithmeticMode {
    /// Integer matrices; equality is decidable.
    ExactInteger,
    /// Real matrices compared entrywise within [`ELEMENT_TOL`].
    Floating,
}

/// A finitely generated Fuchsian group, given by generators.
///
/// Discreteness is not checked; the caller asserts it.
#[derive(Clone, Debug)]
pub struct GroupPresentation {
    pub label: String,
    pub generators: Vec<Isometry>,
    pub names: Vec<String>,
    pub mode: ArithmeticMode,
    pub torsion_free: bool,
}

impl GroupPresentation {
    pub fn new(
        label: impl Into<String>,
        generators: Vec<Isometry>,
        mode: ArithmeticMode,
        torsion_free: bool,
    ) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::Input("a group needs at least one generator".into()));
        }
        for g in &generators {
            if g.is_identity() {
                return Err(Error::Input("generators must not be the identity".into()));
            }
            if mode == ArithmeticMode::ExactInteger && !g.is_exact() {
                return Err(Error::Input(format!("generator {g} is not an integer matrix")));
            }
        }
        let names = (1..=generators.len()).map(|k| format!("g{k}")).collect();
        Ok(Self { label: label.into(), generators, names, mode, torsion_free })
    }

    pub fn with_names(mut self, names: &[&str]) -> Self {
        if names.len() == self.generators.len() {
            self.names = names.iter().map(|s| s.to_string()).collect();
        }
        self
    }

    /// `PSL(2, Z)` generated by `S = (0,-1;1,0)` and `T = (1,1;0,1)`.
    pub fn modular() -> Self {
        let s = Isometry::exact(0, -1, 1, 0).unwrap();
        let t = Isometry::exact(1, 1, 0, 1).unwrap();
        Self::new("PSL(2,Z)", vec![s, t], ArithmeticMode::ExactInteger, false)
            .unwrap()
            .with_names(&["S", "T"])
    }

    /// Cyclic group generated by `z ↦ factor·z`.
    pub fn dilation(factor: f64) -> Result<Self> {
        let g = Isometry::dilation(factor.sqrt())?;
        Ok(Self::new(format!("<z -> {factor} z>"), vec![g], ArithmeticMode::Floating, true)?
            .with_names(&["g"]))
    }

    /// Integer group generated by the given matrices.
    pub fn exact(label: &str, gens: &[[i64; 4]], torsion_free: bool) -> Result<Self> {
        let generators = gens
            .iter()
            .map(|&[a, b, c, d]| Isometry::exact(a, b, c, d))
            .collect::<Result<Vec<_>>>()?;
        Self::new(label, generators, ArithmeticMode::ExactInteger, torsion_free)
    }

    /// Generators followed by their inverses, interleaved: `g1, g1^-1, g2, ...`.
    pub fn letters(&self) -> Vec<(i32, Isometry)> {
        self.generators
            .iter()
            .enumerate()
            .flat_map(|(k, g)| {
                let k = k as i32 + 1;
                [(k, *g), (-k, g.inverse())]
            })
            .collect()
    }

    pub fn format_word(&self, word: &Word) -> String {
        if word.0.is_empty() {
            return "1".into();
        }
        word.0
            .iter()
            .map(|&l| {
                let name = &self.names[(l.unsigned_abs() - 1) as usize];
                if l > 0 {
                    name.clone()
                } else {
                    format!("{name}^-1")
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn tolerance(&self) -> f64 {
        ELEMENT_TOL
    }
}

/// A word in the generators: `k > 0` is generator `k`, `-k` its inverse.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Word(pub Vec<i32>);

impl Word {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| -l).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut out = self.0.clone();
        for &l in &other.0 {
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|&l| if l > 0 { format!("g{l}") } else { format!("g{}^-1", -l) })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// How exhaustive a [`GroupBall`] is known to be.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Certificate {
    /// Every element moving the center by at most `radius` is present.
    Complete { radius: f64 },
    /// Every element of word length at most `length` is present.
    WordOnly { length: usize },
    /// Enumeration was cut short or could not be certified.
    Uncertified { reason: String },
}

impl Certificate {
    pub fn radius(&self) -> Option<f64> {
        match self {
            Certificate::Complete { radius } => Some(*radius),
            _ => None,
        }
    }

    pub fn covers(&self, needed: f64) -> bool {
        self.radius().is_some_and(|r| r + 1e-12 >= needed)
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Certificate::Complete { radius } => write!(f, "complete to radius {radius:.6}"),
            Certificate::WordOnly { length } => write!(f, "word length {length} only"),
            Certificate::Uncertified { reason } => write!(f, "uncertified ({reason})"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct BallElement {
    pub element: Isometry,
    /// A word representing the element, when known. Word balls store a
    /// shortest word; other balls store some witness.
    pub word: Option<Word>,
    /// Distance the element moves the ball center.
    pub displacement: f64,
}

/// A finite, duplicate-free set of group elements with an exhaustiveness certificate.
#[derive(Clone, Debug)]
pub struct GroupBall {
    pub elements: Vec<BallElement>,
    pub center: UhpPoint,
    pub certificate: Certificate,
    /// Set when some nonidentity element found fixes the center.
    pub elliptic_warning: Option<Isometry>,
    index: ElementIndex,
}

impl GroupBall {
    fn from_elements(
        elements: Vec<BallElement>,
        center: UhpPoint,
        certificate: Certificate,
    ) -> Self {
        let mut index = ElementIndex::default();
        for e in &elements {
            index.insert(e.element);
        }
        let elliptic_warning = elements
            .iter()
            .find(|e| !e.element.is_identity() && e.displacement <= 1e-9)
            .map(|e| e.element);
        Self { elements, center, certificate, elliptic_warning, index }
    }

    /// Ball containing only the identity, complete to radius 0.
    pub fn identity(center: UhpPoint) -> Self {
        let e = BallElement { element: Isometry::identity(), word: Some(Word::default()), displacement: 0.0 };
        Self::from_elements(vec![e], center, Certificate::Complete { radius: 0.0 })
    }

    /// Ball made of explicitly given elements; not certified.
    pub fn from_isometries(center: UhpPoint, elements: &[Isometry]) -> Self {
        let mut index = ElementIndex::default();
        let mut out = Vec::new();
        for g in std::iter::once(Isometry::identity()).chain(elements.iter().copied()) {
            if index.insert(g).1 {
                out.push(BallElement { element: g, word: None, displacement: dist(center, g.apply(center)) });
            }
        }
        let reason = "explicit element list".to_string();
        Self::from_elements(out, center, Certificate::Uncertified { reason })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &BallElement> {
        self.elements.iter()
    }

    pub fn isometries(&self) -> impl Iterator<Item = &Isometry> {
        self.elements.iter().map(|e| &e.element)
    }

    pub fn index_of(&self, g: &Isometry) -> Option<usize> {
        self.index.find(g)
    }

    pub fn contains(&self, g: &Isometry) -> bool {
        self.index.find(g).is_some()
    }

    pub fn is_certified(&self) -> bool {
        matches!(self.certificate, Certificate::Complete { .. })
    }

    /// Elements moving the center by at most `r`; the ball is sorted by displacement.
    pub fn within(&self, r: f64) -> impl Iterator<Item = &BallElement> {
        self.elements.iter().take_while(move |e| e.displacement <= r)
    }

    fn sort_canonical(&mut self) {
        sort_canonical(&mut self.elements);
        let mut index = ElementIndex::default();
        for e in &self.elements {
            index.insert(e.element);
        }
        self.index = index;
    }
}

fn sort_canonical(elements: &mut [BallElement]) {
    elements.sort_by(|p, q| {
        let kp = (p.displacement * 1e9).round() as i64;
        let kq = (q.displacement * 1e9).round() as i64;
        kp.cmp(&kq).then_with(|| {
            let (a, b) = (p.element.entries(), q.element.entries());
            a.iter()
                .zip(b.iter())
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        })
    });
}

/// Duplicate detection for group elements.
///
/// Exact elements are keyed by their entries; floating ones by a coarse grid
/// cell of their canonical entries, with neighbouring cells probed so that
/// elements within tolerance of a cell wall are still found.
#[derive(Clone, Debug, Default)]
pub struct ElementIndex {
    exact: HashMap<[i64; 4], usize>,
    cells: HashMap<[i64; 4], Vec<usize>>,
    items: Vec<Isometry>,
}

const CELL: f64 = 1e-6;

impl ElementIndex {
    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn get(&self, i: usize) -> &Isometry {
        &self.items[i]
    }

    fn cell_keys(m: [f64; 4]) -> Vec<[i64; 4]> {
        let mut keys = vec![[0i64; 4]];
        for (j, &v) in m.iter().enumerate() {
            let tol = ELEMENT_TOL * v.abs().max(1.0);
            let lo = ((v - tol) / CELL).floor() as i64;
            let hi = ((v + tol) / CELL).floor() as i64;
            let mut next = Vec::with_capacity(keys.len() * 2);
            for k in &keys {
                for c in lo..=hi {
                    let mut k2 = *k;
                    k2[j] = c;
                    next.push(k2);
                }
            }
            keys = next;
        }
        keys
    }

    pub fn find(&self, g: &Isometry) -> Option<usize> {
        if let Some(e) = g.exact_entries() {
            if let Some(&i) = self.exact.get(&e) {
                return Some(i);
            }
        }
        let m = g.entries();
        for cand in [m, m.map(|v| -v)] {
            for key in Self::cell_keys(cand) {
                if let Some(list) = self.cells.get(&key) {
                    if let Some(&i) = list.iter().find(|&&i| self.items[i].same_as(g, ELEMENT_TOL)) {
                        return Some(i);
                    }
                }
            }
        }
        None
    }

    /// Inserts `g` unless an equal element is present. Returns its index and
    /// whether it was new.
    pub fn insert(&mut self, g: Isometry) -> (usize, bool) {
        if let Some(i) = self.find(&g) {
            return (i, false);
        }
        let i = self.items.len();
        self.items.push(g);
        if let Some(e) = g.exact_entries() {
            self.exact.insert(e, i);
        }
        let m = g.entries();
        let key = m.map(|v| (v / CELL).floor() as i64);
        self.cells.entry(key).or_default().push(i);
        (i, true)
    }
}

/// Equality of group elements under the given arithmetic mode.
pub fn elements_equal(g: &Isometry, h: &Isometry, mode: ArithmeticMode) -> bool {
    match mode {
        ArithmeticMode::ExactInteger if g.is_exact() && h.is_exact() => {
            g.exact_entries() == h.exact_entries()
        }
        _ => g.to_float().same_as(&h.to_float(), ELEMENT_TOL),
    }
}

/// Resource limits for enumeration.
#[derive(Clone, Copy, Debug)]
pub struct EnumLimits {
    pub max_elements: usize,
    pub max_time: Duration,
}

impl Default for EnumLimits {
    fn default() -> Self {
        Self { max_elements: 1_000_000, max_time: Duration::from_secs(30) }
    }
}

/// All distinct elements expressible as words of length at most `length`,
/// in shortlex order over the letters `g1, g1^-1, g2, g2^-1, ...`.
pub fn word_ball(group: &GroupPresentation, length: usize) -> GroupBall {
    word_ball_with(group, length, UhpPoint::i(), EnumLimits::default())
}

pub fn word_ball_with(
    group: &GroupPresentation,
    length: usize,
    center: UhpPoint,
    limits: EnumLimits,
) -> GroupBall {
    let letters = group.letters();
    let mut index = ElementIndex::default();
    let mut elements = vec![BallElement {
        element: Isometry::identity(),
        word: Some(Word::default()),
        displacement: 0.0,
    }];
    index.insert(Isometry::identity());
    let mut frontier = vec![0usize];
    let mut truncated = false;
    for _ in 0..length {
        let mut next = Vec::new();
        'layer: for &i in &frontier {
            let (g, w) = (elements[i].element, elements[i].word.clone().unwrap_or_default());
            for (l, s) in &letters {
                if w.0.last() == Some(&-l) {
                    continue;
                }
                let h = g.compose(s);
                if index.insert(h).1 {
                    let mut word = w.0.clone();
                    word.push(*l);
                    elements.push(BallElement {
                        element: h,
                        word: Some(Word(word)),
                        displacement: dist(center, h.apply(center)),
                    });
                    next.push(elements.len() - 1);
                    if elements.len() >= limits.max_elements {
                        truncated = true;
                        break 'layer;
                    }
                }
            }
        }
        frontier = next;
        if truncated || frontier.is_empty() {
            break;
        }
    }
    let certificate = if truncated {
        Certificate::Uncertified { reason: format!("element cap {} reached", limits.max_elements) }
    } else {
        Certificate::WordOnly { length }
    };
    GroupBall::from_elements(elements, center, certificate)
}

/// Strategy used to certify a displacement ball.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BallStrategy {
    /// Scan integer matrices with bounded entries (the full modular group only).
    EntryScan,
    /// Walk the tessellation of a certified Dirichlet domain across its sides.
    Tessellation,
}

/// Whether an integer group is all of `PSL(2, Z)` (both `S` and `T` are
/// short words in the generators).
pub fn is_full_modular(group: &GroupPresentation) -> bool {
    if group.mode != ArithmeticMode::ExactInteger {
        return false;
    }
    let s = Isometry::exact(0, -1, 1, 0).unwrap();
    let t = Isometry::exact(1, 1, 0, 1).unwrap();
    let limits = EnumLimits { max_elements: 20_000, ..EnumLimits::default() };
    let ball = word_ball_with(group, 6, UhpPoint::i(), limits);
    ball.contains(&s) && ball.contains(&t)
}

/// All elements `g` with `dist(center, g·center) <= radius`, with a
/// `Complete(radius)` certificate when enumeration provably exhausts that set.
pub fn norm_ball(group: &GroupPresentation, center: UhpPoint, radius: f64) -> Result<GroupBall> {
    norm_ball_with(group, center, radius, EnumLimits::default(), None)
}

pub fn norm_ball_with(
    group: &GroupPresentation,
    center: UhpPoint,
    radius: f64,
    limits: EnumLimits,
    strategy: Option<BallStrategy>,
) -> Result<GroupBall> {
    if !(radius >= 0.0) {
        return Err(Error::Input(format!("radius {radius} must be nonnegative")));
    }
    let strategy = strategy.unwrap_or_else(|| {
        if is_full_modular(group) {
            BallStrategy::EntryScan
        } else {
            BallStrategy::Tessellation
        }
    });
    match strategy {
        BallStrategy::EntryScan => {
            if !is_full_modular(group) {
                return Err(Error::Input("entry scan applies to PSL(2,Z) only".into()));
            }
            modular_entry_scan(center, radius, limits)
        }
        BallStrategy::Tessellation => match dirichlet::certify_domain(group, center, limits) {
            Ok(domain) => tessellation_ball(&domain, center, radius, limits),
            Err(Error::EllipticCenter { stabilizer }) => {
                let mut ball = word_ball_with(group, 3, center, limits);
                ball.retain_within(radius);
                ball.certificate = Certificate::Uncertified {
                    reason: "center is an elliptic point".into(),
                };
                ball.elliptic_warning = Some(stabilizer);
                Ok(ball)
            }
            Err(e) => Err(e),
        },
    }
}

impl GroupBall {
    fn retain_within(&mut self, r: f64) {
        self.elements.retain(|e| e.displacement <= r);
        self.sort_canonical();
    }
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - (a.div_euclid(b)) * y)
    }
}

/// Exhaustive search over integer matrices. For `g = (a,b;c,d)` and
/// `center = A·i`, `2 cosh d(center, g·center) = |A^-1 g A|_F^2`, so every entry
/// of `g` is bounded by `|A|_F^2 sqrt(2 cosh radius)`.
fn modular_entry_scan(center: UhpPoint, radius: f64, limits: EnumLimits) -> Result<GroupBall> {
    let start = Instant::now();
    let frame = Isometry::frame_at(center);
    let bound = (frame.norm_sq() * (2.0 * radius.cosh()).sqrt()).floor();
    if bound > 1e6 {
        return Err(Error::ResourceCap(format!("entry bound {bound} too large")));
    }
    let e = bound as i64 + 1;
    let mut out = Vec::new();
    let push = |g: Isometry, out: &mut Vec<BallElement>| -> Result<()> {
        let disp = dist(center, g.apply(center));
        if disp <= radius {
            out.push(BallElement { element: g, word: None, displacement: disp });
            if out.len() > limits.max_elements {
                return Err(Error::ResourceCap(format!("more than {} elements", limits.max_elements)));
            }
        }
        Ok(())
    };
    for b in -e..=e {
        push(Isometry::exact(1, b, 0, 1)?, &mut out)?;
    }
    for c in 1..=e {
        if start.elapsed() > limits.max_time {
            return Err(Error::ResourceCap("entry scan time limit".into()));
        }
        for d in -e..=e {
            let (g, x, _) = ext_gcd(d.rem_euclid(c), c);
            if g != 1 {
                continue;
            }
            // a d = 1 mod c
            let a0 = x.rem_euclid(c);
            let kmin = (-e - a0).div_euclid(c);
            let kmax = (e - a0).div_euclid(c) + 1;
            for k in kmin..=kmax {
                let a = a0 + k * c;
                if a.abs() > e {
                    continue;
                }
                let num = a * d - 1;
                debug_assert_eq!(num.rem_euclid(c), 0);
                let b = num / c;
                push(Isometry::exact(a, b, c, d)?, &mut out)?;
            }
        }
    }
    sort_canonical(&mut out);
    Ok(GroupBall::from_elements(out, center, Certificate::Complete { radius }))
}

/// Breadth-first walk over tiles `g·D` adjacent across sides, keeping tiles
/// whose center moved by at most `radius`.
///
/// Every tile met by the segment from `center` to `g·center` has its own
/// center within `dist(center, g·center)`, and so do all tiles around a
/// vertex on that segment, so the walk reaches every element of the ball.
pub fn tessellation_ball(
    domain: &dirichlet::CertifiedDomain,
    center: UhpPoint,
    radius: f64,
    limits: EnumLimits,
) -> Result<GroupBall> {
    let start = Instant::now();
    let slack = 1e-9;
    let mut index = ElementIndex::default();
    let mut elements = vec![BallElement {
        element: Isometry::identity(),
        word: Some(Word::default()),
        displacement: 0.0,
    }];
    index.insert(Isometry::identity());
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let (g, w) = (elements[i].element, elements[i].word.clone());
        for p in &domain.pairings {
            let h = g.compose(&p.element);
            if index.find(&h).is_some() {
                continue;
            }
            let disp = dist(center, h.apply(center));
            if disp > radius + slack {
                continue;
            }
            index.insert(h);
            let word = match (&w, &p.word) {
                (Some(a), Some(b)) => Some(a.concat(b)),
                _ => None,
            };
            elements.push(BallElement { element: h, word, displacement: disp });
            queue.push_back(elements.len() - 1);
            if elements.len() > limits.max_elements {
                return Err(Error::ResourceCap(format!("more than {} elements", limits.max_elements)));
            }
        }
        if start.elapsed() > limits.max_time {
            return Err(Error::ResourceCap("tessellation walk time limit".into()));
        }
    }
    elements.retain(|e| e.displacement <= radius);
    sort_canonical(&mut elements);
    Ok(GroupBall::from_elements(elements, center, Certificate::Complete { radius }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn word_ball_examples() {
        let g = GroupPresentation::modular();
        assert_eq!(word_ball(&g, 0).len(), 1);
        let cyc = GroupPresentation::dilation(4.0).unwrap();
        let b = word_ball(&cyc, 3);
        assert_eq!(b.len(), 7);
        assert!(matches!(b.certificate, Certificate::WordOnly { length: 3 }));
    }

    #[test]
    fn words_evaluate_to_their_elements() {
        let g = GroupPresentation::modular();
        let letters: HashMap<i32, Isometry> = g.letters().into_iter().collect();
        for e in word_ball(&g, 5).iter() {
            let w = e.word.as_ref().unwrap();
            let v = w.0.iter().fold(Isometry::identity(), |acc, l| acc.compose(&letters[l]));
            assert!(v.same_as(&e.element, 0.0), "{w}");
        }
    }

    #[test]
    fn elements_equal_examples() {
        let m = GroupPresentation::modular();
        let (s, t) = (m.generators[0], m.generators[1]);
        let mode = ArithmeticMode::ExactInteger;
        assert!(elements_equal(&s.compose(&s), &Isometry::identity(), mode));
        assert!(!elements_equal(&t, &t.inverse(), mode));
        let ts = t.compose(&s);
        assert!(elements_equal(&ts.compose(&ts).compose(&ts), &Isometry::identity(), mode));
    }

    #[test]
    fn float_index_finds_perturbed_and_negated() {
        let mut idx = ElementIndex::default();
        let g = Isometry::new(2.0, 1.0, 1.0, 1.0).unwrap().to_float();
        idx.insert(g);
        let [a, b, c, d] = g.entries();
        let near = Isometry::new(a + 1e-11, b, c, d - 1e-11).unwrap();
        assert_eq!(idx.find(&near), Some(0));
        let far = Isometry::new(a + 1e-3, b, c, (1.0 + b * c) / (a + 1e-3)).unwrap();
        assert_eq!(idx.find(&far), None);
    }

    #[test]
    fn dilation_norm_ball() {
        let cyc = GroupPresentation::dilation(4.0).unwrap();
        let b = norm_ball(&cyc, UhpPoint::i(), 4f64.ln() + 1e-12).unwrap();
        assert_eq!(b.len(), 3);
        assert!(b.is_certified());
    }

    #[test]
    fn modular_norm_ball_radius_zero() {
        let m = GroupPresentation::modular();
        let b = norm_ball(&m, UhpPoint::at(0.0, 2.0), 0.0).unwrap();
        assert_eq!(b.len(), 1);
        assert!(b.elliptic_warning.is_none());
        let at_i = norm_ball(&m, UhpPoint::i(), 0.5).unwrap();
        assert!(at_i.elliptic_warning.is_some());
    }
}
