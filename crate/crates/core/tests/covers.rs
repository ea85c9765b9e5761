use geocover::cover::*;
use geocover::dirichlet::gamma_f;
use geocover::enumeration::EnumLimits;
use geocover::{GroupPresentation, Isometry, UhpPoint};

fn modular() -> CoverContext {
    CoverContext::new(&GroupPresentation::modular(), UhpPoint::at(0.0, 2.0), EnumLimits::default()).unwrap()
}

fn dilation() -> (GroupPresentation, CoverContext) {
    let g = GroupPresentation::dilation(4.0).unwrap();
    let ctx = CoverContext::new(&g, UhpPoint::i(), EnumLimits::default()).unwrap();
    (g, ctx)
}

#[test]
fn dilation_cover_is_g_and_inverse() {
    let (g, ctx) = dilation();
    let a = g.generators[0];
    let basic = build_basic_cover(ctx.polygon(), &ctx.oracle, &ctx.spec(1000, 0));
    assert_eq!(basic.len(), 3);
    assert!(basic.contains(&a) && basic.contains(&a.inverse()));

    let c = CoverCandidate::from_elements(ctx.center(), CoverKind::Second, Provenance::Manual, [a, a.inverse()]);
    let suite = ctx.suite(ctx.polygon(), 1000, 3);
    let r = verify_second_cover(&ctx.oracle, &suite, &c.isometries()).with_necessity(&ctx.oracle, &suite, &c);
    assert!(r.verified() && r.all_certified);
    assert_eq!(r.necessary_count(), 3);
    assert!(r.necessity.iter().all(|w| !w.removable));
}

#[test]
fn identity_alone_fails_with_witness() {
    let ctx = modular();
    let suite = ctx.suite(ctx.polygon(), 500, 1);
    let r = verify_second_cover(&ctx.oracle, &suite, &[Isometry::identity()]);
    assert!(!r.verified());
    let f = r.failures[0];
    assert!(!f.realizer.is_identity());
    assert!(f.cover_min > f.oracle_min + 1e-9);
    let first = verify_first_cover(&ctx.oracle, &suite, &[Isometry::identity()]);
    assert_eq!(first.failures.len(), r.failures.len());
}

#[test]
fn ball_superset_and_monotonicity() {
    let ctx = modular();
    let suite = ctx.suite(ctx.polygon(), 1500, 2);
    let ball: Vec<Isometry> = ctx.oracle.ball().within(3.0).map(|e| e.element).collect();
    assert!(verify_second_cover(&ctx.oracle, &suite, &ball).verified());

    let min = minimal_second_cover(&ctx.oracle, &suite);
    assert!(verify_second_cover(&ctx.oracle, &suite, &min).verified());
    let mut more = min.clone();
    more.extend(ball.iter().take(7));
    assert!(verify_second_cover(&ctx.oracle, &suite, &more).verified());
}

#[test]
fn first_cover_reduces_to_second() {
    let ctx = modular();
    let suite = ctx.suite(ctx.polygon(), 1500, 4);
    let pool = build_basic_cover(ctx.polygon(), &ctx.oracle, &ctx.spec(2000, 0)).isometries();
    let c = first_cover_search(&ctx.oracle, &suite, &pool, 1..=5).unwrap();
    let a = verify_first_cover(&ctx.oracle, &suite, &c);
    let b = verify_second_cover(&ctx.oracle, &suite, &difference_set(&c));
    assert!(a.verified() && b.verified());
    for k in 0..c.len() {
        let mut fewer = c.clone();
        fewer.remove(k);
        let a = verify_first_cover(&ctx.oracle, &suite, &fewer).verified();
        let b = verify_second_cover(&ctx.oracle, &suite, &difference_set(&fewer)).verified();
        assert_eq!(a, b);
    }
}

#[test]
fn truncated_cover_verifies_in_both_variants() {
    let ctx = modular();
    let hb = select_horoballs(ctx.polygon(), ctx.oracle.ball()).unwrap();
    let c = build_truncated_cover(ctx.polygon(), &ctx.oracle, &hb, &ctx.spec(2000, 0)).unwrap();
    assert!(c.contains(&Isometry::identity()));
    assert!(c.elements.iter().all(|e| e.provenance == Provenance::TruncatedU));
    let suite = ctx.suite(ctx.polygon(), 2000, 9);
    assert!(verify_second_cover(&ctx.oracle, &suite, &c.isometries()).verified());
    assert!(verify_second_cover(&ctx.oracle, &suite, &c.core()).verified());
}

#[test]
fn truncation_without_cusps_is_basic() {
    let (_, ctx) = dilation();
    let hb = select_horoballs(ctx.polygon(), ctx.oracle.ball()).unwrap();
    assert!(hb.is_empty());
    let spec = ctx.spec(800, 0);
    let t = build_truncated_cover(ctx.polygon(), &ctx.oracle, &hb, &spec).unwrap();
    let b = build_basic_cover(ctx.polygon(), &ctx.oracle, &spec);
    assert_eq!(t.len(), b.len());
    assert!(b.isometries().iter().all(|g| t.contains(g)));
}

#[test]
fn lifted_cover_of_index_two_subgroup() {
    let (g, ctx) = dilation();
    let a = g.generators[0];
    let h = GroupPresentation::dilation(16.0).unwrap();
    let hctx = CoverContext::new(&h, UhpPoint::i(), EnumLimits::default()).unwrap();
    let hc = build_basic_cover(hctx.polygon(), &hctx.oracle, &hctx.spec(800, 0));
    let lifted = lift_cover(&hc, &[Isometry::identity(), a]);
    assert!(lifted.len() <= 2 * hc.len());
    assert!(lifted.elements.iter().all(|e| e.provenance == Provenance::Lifted));
    let suite = ctx.suite(ctx.polygon(), 1000, 5);
    assert!(verify_second_cover(&ctx.oracle, &suite, &lifted.isometries()).verified());
}

#[test]
fn verified_covers_contain_gamma_f_for_torsion_free_groups() {
    let (_, ctx) = dilation();
    let gf = gamma_f(ctx.polygon(), ctx.oracle.ball()).unwrap();
    let suite = ctx.suite(ctx.polygon(), 1000, 6);
    let min = minimal_second_cover(&ctx.oracle, &suite);
    assert!(gf.iter().all(|g| min.iter().any(|h| h.same_as(g, 1e-9))));
}

#[test]
fn nielsen_cover_grows_with_depth() {
    let g = GroupPresentation::exact("free", &[[1, 3, 0, 1], [1, 0, 3, 1]], true).unwrap();
    let ctx = CoverContext::new(&g, UhpPoint::at(0.0, 2.0), EnumLimits::default()).unwrap();
    let spec = ctx.spec(1000, 0);
    let (c2, r2) = build_nielsen_cover(ctx.polygon(), &g, &ctx.oracle, 2, &spec).unwrap();
    let (c3, _) = build_nielsen_cover(ctx.polygon(), &g, &ctx.oracle, 3, &spec).unwrap();
    assert!(geocover::dirichlet::area(&r2).is_finite());
    let suite = ctx.suite(ctx.polygon(), 1000, 8);
    let req = necessity_probe(&ctx.oracle, &suite, &c2);
    for w in req.iter().filter(|w| w.witness.is_some()) {
        assert!(c3.contains(&c2.elements[w.element].element));
    }
    assert!(verify_second_cover(&ctx.oracle, &suite, &c3.isometries()).verified());
}
