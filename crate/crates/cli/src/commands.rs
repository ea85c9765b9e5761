use std::fs;
use std::path::Path;

use serde::Serialize;

use geocover::cover::{
    build_basic_cover, build_nielsen_cover, build_truncated_cover, lift_cover, necessity_probe, select_horoballs,
    verify_first_cover, verify_second_cover, CoverCandidate, CoverContext, CoverKind, VerificationReport,
};
use geocover::dirichlet::{area, build_polygon, certify_domain, DirichletPolygon};
use geocover::enumeration::{norm_ball_with, EnumLimits, GroupPresentation};
use geocover::io::{
    element, from_json, to_json, CoverFile, GroupFile, NecessityRecord, PolygonFile, Real, VerificationSummary,
};
use geocover::surface::{distinct_distances, surface_distance, SurfacePoint, VerifiedCover};
use geocover::svg::{render_polygon, SvgOptions};
use geocover::{Error, UhpPoint};

use crate::{Construction, CoverCommand, DdistArgs, DistArgs, DomainArgs, Failure, Kind};

type Res<T = ()> = Result<T, Failure>;

fn limits() -> Res<EnumLimits> {
    let mut l = EnumLimits::default();
    if let Ok(v) = std::env::var("FGC_MAX_ELEMENTS") {
        l.max_elements = v
            .trim()
            .parse()
            .map_err(|_| Failure::new(1, format!("FGC_MAX_ELEMENTS must be a positive integer, got {v:?}")))?;
    }
    Ok(l)
}

fn read(path: &Path) -> Res<String> {
    fs::read_to_string(path).map_err(|e| Failure::new(1, format!("{}: {e}", path.display())))
}

fn load<T: for<'de> serde::Deserialize<'de>>(path: &Path) -> Res<T> {
    from_json(&read(path)?).map_err(|e| Failure::new(1, format!("{}: {e}", path.display())))
}

fn emit<T: Serialize>(out: Option<&Path>, v: &T) -> Res {
    let text = to_json(v)?;
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::new(1, format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn point(v: &[f64]) -> Res<UhpPoint> {
    Ok(UhpPoint::new(v[0], v[1])?)
}

pub fn domain(a: &DomainArgs) -> Res {
    let file: GroupFile = load(&a.group)?;
    let group = file.to_presentation()?;
    let z0 = point(&a.center)?;
    let polygon = match a.ball_radius {
        Some(r) => {
            let ball = norm_ball_with(&group, z0, r, limits()?, None)?;
            if let Some(s) = ball.elliptic_warning {
                return Err(Error::EllipticCenter { stabilizer: s }.into());
            }
            if !ball.is_certified() {
                return Err(Failure::new(2, format!("ball of radius {r} is not certified: {}", ball.certificate)));
            }
            build_polygon(z0, &ball)?
        }
        None => certify_domain(&group, z0, limits()?)?.polygon,
    };
    let pf = PolygonFile::new(&group, file.kind_hint, &polygon, a.ball_radius);
    emit(a.out.as_deref(), &pf)?;
    if let Some(svg) = &a.svg {
        let text = render_polygon(&group, &polygon, &SvgOptions { labels: true, ..Default::default() });
        fs::write(svg, text).map_err(|e| Failure::new(1, format!("{}: {e}", svg.display())))?;
    }
    if a.out.is_some() {
        println!("{} vertices, {} sides, area {}", polygon.vertices.len(), polygon.sides.len(), area(&polygon));
    }
    Ok(())
}

/// The certified domain of the polygon file's group, checked against the file.
fn context(polygon: &Path) -> Res<(PolygonFile, GroupPresentation, CoverContext)> {
    let pf: PolygonFile = load(polygon)?;
    let group = pf.group.to_presentation()?;
    let ctx = CoverContext::new(&group, pf.center()?, limits()?)?;
    let a = area(ctx.polygon());
    let same_area = (a.is_infinite() && pf.area.0.is_infinite()) || (a - pf.area.0).abs() < 1e-6;
    if !same_area || ctx.polygon().sides.len() != pf.sides.len() {
        return Err(Failure::new(1, "polygon file does not match the Dirichlet domain of its group"));
    }
    Ok((pf, group, ctx))
}

fn witness_message(r: &VerificationReport) -> String {
    match r.failures.first() {
        Some(f) => format!(
            "verification failed on {} of {} pairs; first witness p = {}, q = {}: cover min {} > oracle min {} realized by {}",
            r.failures.len(),
            r.pairs_tested,
            f.p,
            f.q,
            f.cover_min,
            f.oracle_min,
            f.realizer
        ),
        None => String::new(),
    }
}

fn verify(ctx: &CoverContext, region: &DirichletPolygon, kind: CoverKind, elements: &[geocover::Isometry], pairs: usize, seed: u64) -> VerificationReport {
    let suite = ctx.suite(region, pairs, seed);
    match kind {
        CoverKind::Second => verify_second_cover(&ctx.oracle, &suite, elements),
        CoverKind::First => verify_first_cover(&ctx.oracle, &suite, elements),
    }
}

pub fn cover(c: CoverCommand) -> Res {
    match c {
        CoverCommand::Build { polygon, construction, depth, suite, out } => {
            let (pf, group, ctx) = context(&polygon)?;
            let spec = ctx.spec(suite.pairs, suite.seed);
            let (cover, name) = match construction {
                Construction::Basic => (build_basic_cover(ctx.polygon(), &ctx.oracle, &spec), "basic"),
                Construction::Truncated => {
                    let hb = select_horoballs(ctx.polygon(), &ctx.polygon().ball)?;
                    (build_truncated_cover(ctx.polygon(), &ctx.oracle, &hb, &spec)?, "truncated")
                }
                Construction::Nielsen => (build_nielsen_cover(ctx.polygon(), &group, &ctx.oracle, depth, &spec)?.0, "nielsen"),
            };
            // the verification suite is drawn with the next seed
            let vseed = suite.seed.wrapping_add(1);
            let all = verify(&ctx, ctx.polygon(), CoverKind::Second, &cover.isometries(), suite.pairs, vseed);
            let mut file = CoverFile::new(pf.group.clone(), &cover, name, suite.seed);
            file.verification.push(VerificationSummary::new("all", &all));
            if cover.extra_count() > 0 {
                let core = verify(&ctx, ctx.polygon(), CoverKind::Second, &cover.core(), suite.pairs, vseed);
                file.verification.push(VerificationSummary::new("core", &core));
            }
            emit(out.as_deref(), &file)?;
            if !all.verified() {
                return Err(Failure::new(4, witness_message(&all)));
            }
            if out.is_some() {
                println!("{} elements ({} extras), verified on {} pairs", cover.len(), cover.extra_count(), all.pairs_tested);
            }
            Ok(())
        }
        CoverCommand::Verify { polygon, cover, kind, suite, out } => {
            let (_, _, ctx) = context(&polygon)?;
            let mut file: CoverFile = load(&cover)?;
            let cand = file.to_candidate()?;
            let kind = match kind {
                Some(Kind::First) => CoverKind::First,
                Some(Kind::Second) => CoverKind::Second,
                None => cand.kind,
            };
            let r = verify(&ctx, ctx.polygon(), kind, &cand.isometries(), suite.pairs, suite.seed);
            let summary = VerificationSummary::new("all", &r);
            match out {
                Some(p) => {
                    file.verification = vec![summary];
                    file.kind = kind;
                    emit(Some(&p), &file)?;
                }
                None => emit(None, &summary)?,
            }
            if r.verified() {
                Ok(())
            } else {
                Err(Failure::new(4, witness_message(&r)))
            }
        }
        CoverCommand::Lift { cover, reps, group, out } => {
            let h: CoverFile = load(&cover)?;
            let gfile: GroupFile = load(&group)?;
            let mats: Vec<[[Real; 2]; 2]> = load(&reps)?;
            let reps = mats
                .iter()
                .map(|[[a, b], [c, d]]| element([a.0, b.0, c.0, d.0], gfile.mode()))
                .collect::<Result<Vec<_>, Error>>()?;
            let hc = h.to_candidate()?;
            let lifted = lift_cover(&hc, &reps);
            let file = CoverFile::new(gfile, &lifted, "lifted", h.seed);
            emit(out.as_deref(), &file)?;
            if out.is_some() {
                println!("{} elements (at most {} x {})", lifted.len(), hc.len(), reps.len());
            }
            Ok(())
        }
        CoverCommand::Probe { polygon, cover, suite, out } => {
            let (_, _, ctx) = context(&polygon)?;
            let file: CoverFile = load(&cover)?;
            let cand: CoverCandidate = file.to_candidate()?;
            let s = ctx.suite(ctx.polygon(), suite.pairs, suite.seed);
            let records: Vec<NecessityRecord> = necessity_probe(&ctx.oracle, &s, &cand)
                .into_iter()
                .map(|w| NecessityRecord {
                    element: w.element,
                    witness: w.witness.map(|(p, q)| [[Real(p.x), Real(p.y)], [Real(q.x), Real(q.y)]]),
                    removable: w.removable,
                })
                .collect();
            emit(out.as_deref(), &records)
        }
    }
}

/// The cover of a cover file, refused when unverified unless forced, with its domain.
fn verified_cover(path: &Path, force: bool) -> Res<(VerifiedCover, DirichletPolygon)> {
    let file: CoverFile = load(path)?;
    if !force && !file.is_verified() {
        return Err(Error::UnverifiedCover.into());
    }
    let cand = file.to_candidate()?;
    let group = file.group.to_presentation()?;
    let polygon = certify_domain(&group, cand.center, limits()?)?.polygon;
    let elements = match cand.kind {
        CoverKind::Second => cand.isometries(),
        CoverKind::First => geocover::cover::difference_set(&cand.isometries()),
    };
    Ok((VerifiedCover::forced(elements), polygon))
}

#[derive(Serialize)]
struct DistOutput {
    p: [Real; 2],
    q: [Real; 2],
    distance: Real,
}

pub fn dist(a: &DistArgs) -> Res {
    let (cover, polygon) = verified_cover(&a.cover, a.force)?;
    let p = SurfacePoint::new(point(&a.p)?, &polygon)?;
    let q = SurfacePoint::new(point(&a.q)?, &polygon)?;
    let d = surface_distance(&p, &q, &cover);
    emit(None, &DistOutput { p: [Real(p.z.x), Real(p.z.y)], q: [Real(q.z.x), Real(q.z.y)], distance: Real(d) })
}

#[derive(Serialize)]
struct DdistOutput {
    n: usize,
    count: usize,
    tolerance: Real,
    k: usize,
    bound: Real,
    normalization: String,
    values: Vec<Real>,
}

pub fn ddist(a: &DdistArgs) -> Res {
    if !(a.tol > 0.0) {
        return Err(Failure::new(1, "--tol must be positive"));
    }
    let (cover, polygon) = verified_cover(&a.cover, a.force)?;
    let raw: Vec<[Real; 2]> = load(&a.points)?;
    let pts = raw
        .iter()
        .map(|[x, y]| Ok(SurfacePoint::new(UhpPoint::new(x.0, y.0)?, &polygon)?))
        .collect::<Result<Vec<_>, Error>>()?;
    let r = distinct_distances(&pts, &cover, a.tol);
    emit(
        None,
        &DdistOutput {
            n: r.n,
            count: r.count,
            tolerance: Real(r.tolerance),
            k: r.k,
            bound: Real(r.bound),
            normalization: r.normalization,
            values: r.values.into_iter().map(Real).collect(),
        },
    )
}
