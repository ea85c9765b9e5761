//! JSON file formats for groups, polygons and covers.
//!
//! Reals are written with 17 significant digits (integers without a
//! fraction), so a load followed by a save reproduces the file byte for byte.

use std::fmt;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::value::RawValue;

use crate::cover::{CoverCandidate, CoverElement, CoverKind, ExtraTag, Failure, Provenance, VerificationReport};
use crate::dirichlet::{area, DirichletPolygon, SideKind, VertexKind, VertexPoint};
use crate::enumeration::{ArithmeticMode, GroupPresentation};
use crate::error::{Error, Result};
use crate::isometry::{BoundaryPoint, Isometry, UhpPoint};

/// A float that serializes with full precision; non-finite values become
/// the strings `"inf"`, `"-inf"` and `"nan"`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Real(pub f64);

impl Real {
    fn text(v: f64) -> String {
        if v == v.trunc() && v.abs() < 1e15 {
            format!("{}", v as i64)
        } else {
            format!("{v:.16e}")
        }
    }
}

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v = self.0;
        if v.is_nan() {
            return s.serialize_str("nan");
        }
        if v.is_infinite() {
            return s.serialize_str(if v > 0.0 { "inf" } else { "-inf" });
        }
        RawValue::from_string(Self::text(v)).map_err(serde::ser::Error::custom)?.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Real {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Real;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a number or one of \"inf\", \"-inf\", \"nan\"")
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Real, E> {
                Ok(Real(v))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Real, E> {
                Ok(Real(v as f64))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Real, E> {
                Ok(Real(v as f64))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Real, E> {
                match v {
                    "inf" => Ok(Real(f64::INFINITY)),
                    "-inf" => Ok(Real(f64::NEG_INFINITY)),
                    "nan" => Ok(Real(f64::NAN)),
                    _ => Err(E::invalid_value(de::Unexpected::Str(v), &self)),
                }
            }
        }
        d.deserialize_any(V)
    }
}

fn reals<const N: usize>(v: [f64; N]) -> [Real; N] {
    v.map(Real)
}

fn point(z: UhpPoint) -> [Real; 2] {
    [Real(z.x), Real(z.y)]
}

fn unpoint(p: [Real; 2]) -> Result<UhpPoint> {
    UhpPoint::new(p[0].0, p[1].0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModeName {
    #[serde(rename = "exact-int")]
    ExactInt,
    #[serde(rename = "float")]
    Float,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KindHint {
    Cofinite,
    SecondKind,
    Elementary,
}

/// `{label, mode, generators: [[[a, b], [c, d]], ...], torsion_free, kind_hint}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupFile {
    pub label: String,
    pub mode: ModeName,
    pub generators: Vec<[[Real; 2]; 2]>,
    pub torsion_free: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind_hint: Option<KindHint>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
}

fn integral(v: f64) -> Option<i64> {
    (v == v.trunc() && v.abs() < 9e15).then_some(v as i64)
}

/// An element from matrix entries `[a, b, c, d]`, integer-checked in exact mode.
pub fn element(m: [f64; 4], mode: ArithmeticMode) -> Result<Isometry> {
    match mode {
        ArithmeticMode::ExactInteger => {
            let e: Vec<i64> = m
                .iter()
                .map(|&v| integral(v).ok_or_else(|| Error::Input(format!("entry {v} is not an integer"))))
                .collect::<Result<_>>()?;
            Isometry::exact(e[0], e[1], e[2], e[3])
        }
        ArithmeticMode::Floating => Isometry::new(m[0], m[1], m[2], m[3]),
    }
}

fn matrix(g: &Isometry) -> [Real; 4] {
    reals(g.entries())
}

impl GroupFile {
    pub fn from_presentation(g: &GroupPresentation, kind_hint: Option<KindHint>) -> Self {
        let generators = g
            .generators
            .iter()
            .map(|h| {
                let [a, b, c, d] = h.entries();
                [[Real(a), Real(b)], [Real(c), Real(d)]]
            })
            .collect();
        Self {
            label: g.label.clone(),
            mode: match g.mode {
                ArithmeticMode::ExactInteger => ModeName::ExactInt,
                ArithmeticMode::Floating => ModeName::Float,
            },
            generators,
            torsion_free: g.torsion_free,
            kind_hint,
            names: Some(g.names.clone()),
        }
    }

    pub fn mode(&self) -> ArithmeticMode {
        match self.mode {
            ModeName::ExactInt => ArithmeticMode::ExactInteger,
            ModeName::Float => ArithmeticMode::Floating,
        }
    }

    /// Checks determinants and builds the presentation.
    pub fn to_presentation(&self) -> Result<GroupPresentation> {
        let mode = self.mode();
        let gens = self
            .generators
            .iter()
            .map(|[[a, b], [c, d]]| element([a.0, b.0, c.0, d.0], mode))
            .collect::<Result<Vec<_>>>()?;
        let g = GroupPresentation::new(self.label.clone(), gens, mode, self.torsion_free)?;
        Ok(match &self.names {
            Some(n) => {
                let names: Vec<&str> = n.iter().map(String::as_str).collect();
                g.with_names(&names)
            }
            None => g,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VertexRecord {
    /// `"ordinary"`, `"elliptic"`, `"cusp"` or `"ideal-free"`.
    pub kind: String,
    pub x: Real,
    /// Absent for ideal vertices; `x` is then the boundary point.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<Real>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<u32>,
    pub angle: Real,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SideRecord {
    pub start: usize,
    pub end: usize,
    /// `"paired"`, `"free"`, `"cut"` or `"horocycle"`.
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairing: Option<[Real; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub word: Option<String>,
}

/// `{group, center, sides, vertices, area}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolygonFile {
    pub group: GroupFile,
    pub center: [Real; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ball_radius: Option<Real>,
    pub vertices: Vec<VertexRecord>,
    pub sides: Vec<SideRecord>,
    pub area: Real,
}

impl PolygonFile {
    pub fn new(group: &GroupPresentation, kind_hint: Option<KindHint>, p: &DirichletPolygon, ball_radius: Option<f64>) -> Self {
        let vertices = p
            .vertices
            .iter()
            .map(|v| {
                let (x, y) = match v.point {
                    VertexPoint::Interior(z) => (z.x, Some(Real(z.y))),
                    VertexPoint::Ideal(BoundaryPoint::Real(x)) => (x, None),
                    VertexPoint::Ideal(BoundaryPoint::Infinity) => (f64::INFINITY, None),
                };
                let (kind, order) = match &v.kind {
                    VertexKind::Ordinary => ("ordinary", None),
                    VertexKind::Elliptic { order } => ("elliptic", Some(*order)),
                    VertexKind::Cusp { .. } => ("cusp", None),
                    VertexKind::IdealFree => ("ideal-free", None),
                };
                VertexRecord { kind: kind.into(), x: Real(x), y, order, angle: Real(v.angle) }
            })
            .collect();
        let sides = p
            .sides
            .iter()
            .map(|s| {
                let (kind, pairing, word) = match &s.kind {
                    SideKind::Paired { pairing, word } => {
                        ("paired", Some(matrix(pairing)), word.as_ref().map(|w| group.format_word(w)))
                    }
                    SideKind::Free => ("free", None, None),
                    SideKind::Cut => ("cut", None, None),
                    SideKind::Horocycle { .. } => ("horocycle", None, None),
                };
                SideRecord { start: s.start, end: s.end, kind: kind.into(), pairing, word }
            })
            .collect();
        Self {
            group: GroupFile::from_presentation(group, kind_hint),
            center: point(p.center),
            ball_radius: ball_radius.map(Real),
            vertices,
            sides,
            area: Real(area(p)),
        }
    }

    pub fn center(&self) -> Result<UhpPoint> {
        unpoint(self.center)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ElementRecord {
    pub matrix: [Real; 4],
    pub provenance: Provenance,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extra: Option<ExtraTag>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FailureRecord {
    pub p: [Real; 2],
    pub q: [Real; 2],
    pub cover_min: Real,
    pub oracle_min: Real,
    pub realizer: [Real; 4],
}

impl From<&Failure> for FailureRecord {
    fn from(f: &Failure) -> Self {
        Self {
            p: point(f.p),
            q: point(f.q),
            cover_min: Real(f.cover_min),
            oracle_min: Real(f.oracle_min),
            realizer: matrix(&f.realizer),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NecessityRecord {
    pub element: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<[[Real; 2]; 2]>,
    pub removable: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationSummary {
    /// Which elements were checked: `"all"` or `"core"` (without extras).
    pub variant: String,
    pub pairs_tested: usize,
    pub verified: bool,
    pub failures: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<FailureRecord>,
    pub all_certified: bool,
    pub seed: u64,
}

impl VerificationSummary {
    pub fn new(variant: &str, r: &VerificationReport) -> Self {
        Self {
            variant: variant.into(),
            pairs_tested: r.pairs_tested,
            verified: r.verified(),
            failures: r.failures.len(),
            first_failure: r.failures.first().map(FailureRecord::from),
            all_certified: r.all_certified,
            seed: r.seed,
        }
    }
}

/// `{group, center, kind, construction, seed, elements, verification}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverFile {
    pub group: GroupFile,
    pub center: [Real; 2],
    pub kind: CoverKind,
    pub construction: String,
    pub seed: u64,
    pub elements: Vec<ElementRecord>,
    #[serde(default)]
    pub verification: Vec<VerificationSummary>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub necessity: Vec<NecessityRecord>,
}

impl CoverFile {
    pub fn new(group: GroupFile, cover: &CoverCandidate, construction: &str, seed: u64) -> Self {
        let elements = cover
            .elements
            .iter()
            .map(|e| ElementRecord { matrix: matrix(&e.element), provenance: e.provenance, extra: e.extra })
            .collect();
        Self {
            group,
            center: point(cover.center),
            kind: cover.kind,
            construction: construction.into(),
            seed,
            elements,
            verification: Vec::new(),
            necessity: Vec::new(),
        }
    }

    /// Whether the stored verification of the full element list passed.
    pub fn is_verified(&self) -> bool {
        self.verification.iter().any(|v| v.variant == "all" && v.verified)
    }

    pub fn to_candidate(&self) -> Result<CoverCandidate> {
        let mode = self.group.mode();
        let elements = self
            .elements
            .iter()
            .map(|e| {
                Ok(CoverElement {
                    element: element(e.matrix.map(|r| r.0), mode)?,
                    provenance: e.provenance,
                    extra: e.extra,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let mut c = CoverCandidate { elements, center: unpoint(self.center)?, kind: self.kind };
        if !c.contains(&Isometry::identity()) {
            c.push(Isometry::identity(), Provenance::Manual, None);
        }
        Ok(c)
    }
}

pub fn to_json<T: Serialize>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

pub fn from_json<T: for<'de> Deserialize<'de>>(s: &str) -> Result<T> {
    Ok(serde_json::from_str(s)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_formatting() {
        assert_eq!(serde_json::to_string(&Real(0.1)).unwrap(), "1.0000000000000001e-1");
        assert_eq!(serde_json::to_string(&Real(-3.0)).unwrap(), "-3");
        assert_eq!(serde_json::to_string(&Real(f64::INFINITY)).unwrap(), "\"inf\"");
        let back: Real = serde_json::from_str("1.0000000000000001e-1").unwrap();
        assert_eq!(back.0, 0.1);
        let inf: Real = serde_json::from_str("\"inf\"").unwrap();
        assert!(inf.0.is_infinite());
    }

    #[test]
    fn bad_determinant_rejected() {
        let f: GroupFile = from_json(
            r#"{"label":"bad","mode":"exact-int","generators":[[[1,1],[1,1]]],"torsion_free":true}"#,
        )
        .unwrap();
        assert!(matches!(f.to_presentation(), Err(Error::BadDeterminant { .. })));
    }

    #[test]
    fn group_round_trip() {
        let g = GroupPresentation::modular();
        let f = GroupFile::from_presentation(&g, Some(KindHint::Cofinite));
        let s = to_json(&f).unwrap();
        let back: GroupFile = from_json(&s).unwrap();
        assert_eq!(to_json(&back).unwrap(), s);
        let h = back.to_presentation().unwrap();
        assert!(h.generators.iter().zip(&g.generators).all(|(a, b)| a.same_as(b, 0.0)));
    }
}
