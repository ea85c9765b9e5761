//! Browser demo: a Dirichlet domain drawn in the disk, recentred by clicks,
//! with surface distances and cover translates.

use geocover::cover::{
    build_truncated_cover, select_horoballs, verify_second_cover, CoverCandidate, CoverContext,
};
use geocover::dirichlet::area;
use geocover::enumeration::{EnumLimits, GroupPresentation};
use geocover::io::{from_json, GroupFile};
use geocover::surface::{surface_distance, SurfacePoint, VerifiedCover};
use geocover::svg::{pixel_to_uhp, render_polygon, SvgOptions};
use geocover::{dist, Error, Isometry, UhpPoint};
use serde::Serialize;
use wasm_bindgen::prelude::*;

pub const GROUPS: [(&str, &str); 4] = [
    ("modular", include_str!("../../../data/groups/modular.json")),
    ("gamma2", include_str!("../../../data/groups/gamma2.json")),
    ("cyclic4", include_str!("../../../data/groups/cyclic4.json")),
    ("second_kind", include_str!("../../../data/groups/second_kind.json")),
];

const PAIRS: usize = 300;

pub fn group(name: &str) -> Result<GroupPresentation, Error> {
    let (_, text) = GROUPS
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::Input(format!("unknown group {name}")))?;
    from_json::<GroupFile>(text)?.to_presentation()
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub center: [f64; 2],
    pub vertices: usize,
    pub sides: usize,
    pub area: Option<f64>,
    pub cover_size: usize,
    pub verified: bool,
    pub pairs: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Measure {
    pub p: [f64; 2],
    pub q: [f64; 2],
    pub distance: f64,
    pub plane_distance: f64,
    pub realizer: String,
}

/// Everything the page shows for one group and center.
pub struct Session {
    group: GroupPresentation,
    ctx: CoverContext,
    cover: CoverCandidate,
    verified: bool,
    size: f64,
    tiles: bool,
    marks: Vec<UhpPoint>,
    segment: Option<(UhpPoint, UhpPoint)>,
}

impl Session {
    pub fn new(name: &str, center: UhpPoint, size: f64) -> Result<Self, Error> {
        let group = group(name)?;
        let ctx = CoverContext::new(&group, center, EnumLimits::default())?;
        let hb = select_horoballs(ctx.polygon(), &ctx.polygon().ball)?;
        let cover = build_truncated_cover(ctx.polygon(), &ctx.oracle, &hb, &ctx.spec(PAIRS, 0))?;
        let suite = ctx.suite(ctx.polygon(), PAIRS, 1);
        let verified = verify_second_cover(&ctx.oracle, &suite, &cover.isometries()).verified();
        Ok(Self { group, ctx, cover, verified, size, tiles: false, marks: Vec::new(), segment: None })
    }

    pub fn center(&self) -> UhpPoint {
        self.ctx.center()
    }

    pub fn to_uhp(&self, px: f64, py: f64) -> Option<UhpPoint> {
        pixel_to_uhp(self.center(), self.size, px, py)
    }

    pub fn summary(&self) -> Summary {
        let p = self.ctx.polygon();
        let a = area(p);
        Summary {
            center: [self.center().x, self.center().y],
            vertices: p.vertices.len(),
            sides: p.sides.len(),
            area: a.is_finite().then_some(a),
            cover_size: self.cover.len(),
            verified: self.verified,
            pairs: PAIRS,
        }
    }

    pub fn set_tiles(&mut self, on: bool) {
        self.tiles = on;
    }

    /// Surface distance between two points of the domain, with the segment
    /// from `p` to the nearest translate of `q`.
    pub fn measure(&mut self, p: UhpPoint, q: UhpPoint) -> Result<Measure, Error> {
        let sp = SurfacePoint::new(p, self.ctx.polygon())?;
        let sq = SurfacePoint::new(q, self.ctx.polygon())?;
        let elems = self.cover.isometries();
        let best = elems
            .iter()
            .min_by(|a, b| dist(p, a.apply(q)).total_cmp(&dist(p, b.apply(q))))
            .copied()
            .unwrap_or_else(Isometry::identity);
        let d = surface_distance(&sp, &sq, &VerifiedCover::forced(elems));
        self.marks = vec![p, q];
        self.segment = Some((p, best.apply(q)));
        Ok(Measure {
            p: [p.x, p.y],
            q: [q.x, q.y],
            distance: d,
            plane_distance: dist(p, q),
            realizer: best.to_string(),
        })
    }

    pub fn mark(&mut self, p: UhpPoint) {
        self.marks = vec![p];
        self.segment = None;
    }

    pub fn clear(&mut self) {
        self.marks.clear();
        self.segment = None;
    }

    pub fn svg(&self) -> String {
        let mut points: Vec<(UhpPoint, String)> = self.marks.iter().map(|z| (*z, "#1d5fa8".to_string())).collect();
        let mut segments = Vec::new();
        if let Some((a, b)) = self.segment {
            points.push((b, "#b0232a".into()));
            segments.push((a, b));
        }
        let tiles = if self.tiles {
            self.cover.isometries().into_iter().filter(|g| !g.is_identity()).collect()
        } else {
            Vec::new()
        };
        render_polygon(&self.group, self.ctx.polygon(), &SvgOptions { size: self.size, tiles, points, segments, labels: true })
    }
}

fn js(e: Error) -> JsError {
    JsError::new(&e.to_string())
}

#[wasm_bindgen]
pub fn group_names() -> Vec<String> {
    GROUPS.iter().map(|(n, _)| n.to_string()).collect()
}

#[wasm_bindgen]
pub struct Demo {
    inner: Session,
    pending: Option<UhpPoint>,
}

#[wasm_bindgen]
impl Demo {
    #[wasm_bindgen(constructor)]
    pub fn new(group: &str, x: f64, y: f64, size: f64) -> Result<Demo, JsError> {
        let c = UhpPoint::new(x, y).map_err(js)?;
        Ok(Demo { inner: Session::new(group, c, size).map_err(js)?, pending: None })
    }

    /// Rebuilds the domain centred at the clicked pixel.
    pub fn recenter(&mut self, group: &str, px: f64, py: f64) -> Result<(), JsError> {
        let c = self.inner.to_uhp(px, py).ok_or_else(|| JsError::new("click inside the disk"))?;
        self.inner = Session::new(group, c, self.inner.size).map_err(js)?;
        self.pending = None;
        Ok(())
    }

    /// First click marks `p`, second click measures to `q`. Returns the
    /// measurement as JSON after the second click, otherwise an empty string.
    pub fn pick(&mut self, px: f64, py: f64) -> Result<String, JsError> {
        let z = self.inner.to_uhp(px, py).ok_or_else(|| JsError::new("click inside the disk"))?;
        match self.pending.take() {
            None => {
                SurfacePoint::new(z, self.inner.ctx.polygon()).map_err(js)?;
                self.inner.mark(z);
                self.pending = Some(z);
                Ok(String::new())
            }
            Some(p) => match self.inner.measure(p, z) {
                Ok(m) => Ok(serde_json::to_string(&m)?),
                Err(e) => {
                    self.pending = Some(p);
                    Err(js(e))
                }
            },
        }
    }

    pub fn clear(&mut self) {
        self.pending = None;
        self.inner.clear();
    }

    pub fn set_tiles(&mut self, on: bool) {
        self.inner.set_tiles(on);
    }

    pub fn svg(&self) -> String {
        self.inner.svg()
    }

    pub fn summary(&self) -> Result<String, JsError> {
        Ok(serde_json::to_string(&self.inner.summary())?)
    }
}
