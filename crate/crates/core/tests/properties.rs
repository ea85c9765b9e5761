use std::f64::consts::PI;
use std::sync::OnceLock;

use approx::assert_abs_diff_eq;
use proptest::prelude::*;

use geocover::cover::{build_basic_cover, minimal_second_cover, CoverContext};
use geocover::dirichlet::{area, build_polygon};
use geocover::enumeration::{norm_ball, EnumLimits};
use geocover::surface::{distinct_distances, surface_distance, SurfacePoint, VerifiedCover};
use geocover::{dist, GroupPresentation, Isometry, UhpPoint};

fn point() -> impl Strategy<Value = UhpPoint> {
    (-3.0..3.0f64, 0.05..5.0f64).prop_map(|(x, y)| UhpPoint::at(x, y))
}

/// `(a, b; c, d)` with determinant 1 from three free parameters.
fn element() -> impl Strategy<Value = Isometry> {
    (0.2..4.0f64, -3.0..3.0f64, -3.0..3.0f64).prop_map(|(a, b, c)| {
        let d = (1.0 + b * c) / a;
        Isometry::new(a, b, c, d).unwrap()
    })
}

fn modular() -> &'static CoverContext {
    static CTX: OnceLock<CoverContext> = OnceLock::new();
    CTX.get_or_init(|| {
        CoverContext::new(&GroupPresentation::modular(), UhpPoint::at(0.0, 2.0), EnumLimits::default()).unwrap()
    })
}

/// Points of the standard modular domain |x| <= 1/2, |z| >= 1 near 2i.
fn modular_point() -> impl Strategy<Value = UhpPoint> {
    (-0.5..0.5f64, 0.0..1.0f64).prop_map(|(x, t)| {
        let lo = (1.0 - x * x).sqrt();
        UhpPoint::at(x, lo + t * (4.0 - lo))
    })
}

/// Brute force over integer matrices with entries bounded by `n`.
fn brute_modular(p: UhpPoint, q: UhpPoint, n: i64) -> f64 {
    let mut best = f64::INFINITY;
    for a in -n..=n {
        for b in -n..=n {
            for c in -n..=n {
                if a == 0 {
                    // then -bc = 1
                    if b * c != -1 {
                        continue;
                    }
                    for d in -n..=n {
                        let g = Isometry::exact(a, b, c, d).unwrap();
                        best = best.min(dist(p, g.apply(q)));
                    }
                } else if (1 + b * c) % a == 0 {
                    let d = (1 + b * c) / a;
                    let g = Isometry::exact(a, b, c, d).unwrap();
                    best = best.min(dist(p, g.apply(q)));
                }
            }
        }
    }
    best
}

fn verified(ctx: &CoverContext, elements: Vec<Isometry>) -> VerifiedCover {
    let suite = ctx.suite(ctx.polygon(), 1500, 11);
    assert!(geocover::cover::verify_second_cover(&ctx.oracle, &suite, &elements).verified());
    VerifiedCover::forced(elements)
}

fn basic(ctx: &CoverContext) -> VerifiedCover {
    verified(ctx, build_basic_cover(ctx.polygon(), &ctx.oracle, &ctx.spec(2000, 0)).isometries())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn isometries_preserve_distance(g in element(), z in point(), w in point()) {
        let d = dist(z, w);
        prop_assert!((dist(g.apply(z), g.apply(w)) - d).abs() <= 1e-8 * d.max(1.0));
    }

    #[test]
    fn inverse_and_composition(g in element(), h in element(), z in point()) {
        prop_assert!(g.compose(&g.inverse()).same_as(&Isometry::identity(), 1e-9));
        let a = g.compose(&h).apply(z);
        let b = g.apply(h.apply(z));
        prop_assert!(dist(a, b) < 1e-7);
    }

    #[test]
    fn distance_is_a_metric(a in point(), b in point(), c in point()) {
        prop_assert!((dist(a, b) - dist(b, a)).abs() < 1e-12);
        prop_assert!(dist(a, c) <= dist(a, b) + dist(b, c) + 1e-9);
        prop_assert!(dist(a, a) == 0.0);
    }

    #[test]
    fn exact_products_match_float_products(a in -6i64..6, b in -6i64..6, c in -6i64..6, e in -6i64..6) {
        let g = Isometry::exact(1, a, 0, 1).unwrap().compose(&Isometry::exact(1, 0, b, 1).unwrap());
        let h = Isometry::exact(1, 0, c, 1).unwrap().compose(&Isometry::exact(1, e, 0, 1).unwrap());
        let x = g.compose(&h);
        let y = g.to_float().compose(&h.to_float());
        prop_assert!(x.same_as(&y, 1e-12));
        prop_assert!(x.is_exact());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn generic_modular_centers_have_area_pi_over_3(x in -0.4..0.4f64, y in 1.3..3.0f64) {
        let z0 = UhpPoint::at(x, y);
        let ball = norm_ball(&GroupPresentation::modular(), z0, 5.0).unwrap();
        let p = build_polygon(z0, &ball).unwrap();
        prop_assert!((area(&p) - PI / 3.0).abs() < 1e-6);
        prop_assert!(p.contains(z0, 0.0));
    }

    #[test]
    fn modular_oracle_matches_brute_force(p in modular_point(), q in modular_point()) {
        let ctx = modular();
        let r = ctx.oracle.realizers(p, q);
        prop_assert!(r.certified);
        prop_assert!((r.value - brute_modular(p, q, 16)).abs() < 1e-9);
    }

    #[test]
    fn dilation_oracle_matches_power_scan(x in -3.0..3.0f64, y in 0.6..1.6f64, u in -3.0..3.0f64, v in 0.6..1.6f64) {
        let g = GroupPresentation::dilation(4.0).unwrap();
        let (p, q) = (UhpPoint::at(x, y), UhpPoint::at(u, v));
        let d = geocover::cover::certified_min_distance(p, q, &g, UhpPoint::i()).unwrap();
        let scan = (-30..=30)
            .map(|k| dist(p, UhpPoint::at(q.x * 4f64.powi(k), q.y * 4f64.powi(k))))
            .fold(f64::INFINITY, f64::min);
        prop_assert!((d.value - scan).abs() < 1e-9);
    }

    #[test]
    fn surface_distance_symmetry_and_triangle(p in modular_point(), q in modular_point(), r in modular_point()) {
        static COVER: OnceLock<VerifiedCover> = OnceLock::new();
        let c = COVER.get_or_init(|| basic(modular()));
        let (p, q, r) = (SurfacePoint::unchecked(p), SurfacePoint::unchecked(q), SurfacePoint::unchecked(r));
        let pq = surface_distance(&p, &q, c);
        prop_assert!((pq - surface_distance(&q, &p, c)).abs() < 1e-9);
        prop_assert!(surface_distance(&p, &r, c) <= pq + surface_distance(&q, &r, c) + 1e-8);
    }

    #[test]
    fn different_verified_covers_agree(p in modular_point(), q in modular_point()) {
        static COVERS: OnceLock<(VerifiedCover, VerifiedCover)> = OnceLock::new();
        let (a, b) = COVERS.get_or_init(|| {
            let ctx = modular();
            let suite = ctx.suite(ctx.polygon(), 2000, 12);
            (basic(ctx), verified(ctx, minimal_second_cover(&ctx.oracle, &suite)))
        });
        let (p, q) = (SurfacePoint::unchecked(p), SurfacePoint::unchecked(q));
        prop_assert!((surface_distance(&p, &q, a) - surface_distance(&p, &q, b)).abs() < 1e-9);
    }

    #[test]
    fn distinct_count_ignores_order(pts in prop::collection::vec(modular_point(), 2..16), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        static COVER: OnceLock<VerifiedCover> = OnceLock::new();
        let c = COVER.get_or_init(|| basic(modular()));
        let pts: Vec<SurfacePoint> = pts.into_iter().map(SurfacePoint::unchecked).collect();
        let mut shuffled = pts.clone();
        shuffled.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let a = distinct_distances(&pts, c, 1e-7);
        let b = distinct_distances(&shuffled, c, 1e-7);
        prop_assert_eq!(a.count, b.count);
        prop_assert!(a.count >= 1 && a.count <= pts.len() * (pts.len() - 1) / 2);
    }
}

#[test]
fn modular_example_distance() {
    let c = basic(modular());
    let d = surface_distance(
        &SurfacePoint::unchecked(UhpPoint::at(0.0, 2.0)),
        &SurfacePoint::unchecked(UhpPoint::at(0.4, 2.0)),
        &c,
    );
    assert_abs_diff_eq!(d, 1.02f64.acosh(), epsilon = 1e-12);
}
