use homeocomm::corpus::{random_cylinder_map, random_line_map};
use homeocomm::homeo::reduce_turns;
use homeocomm::*;
use proptest::prelude::*;

fn circle_gap(a: f64, b: f64) -> f64 {
    let d = reduce_turns(a - b);
    d.min(1.0 - d)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn line_roundtrip(seed in any::<u64>(), t in -60.0..60.0f64) {
        let m = random_line_map(seed);
        let p = CPoint::level(t);
        let back = eval(&invert(&m), eval(&m, p).unwrap()).unwrap();
        prop_assert!((back.t - t).abs() < 1e-9);
    }

    #[test]
    fn cylinder_roundtrip(seed in any::<u64>(), theta in 0.0..1.0f64, t in -30.0..30.0f64) {
        let m = random_cylinder_map(seed);
        let p = CPoint::new(theta, t);
        let back = eval(&invert(&m), eval(&m, p).unwrap()).unwrap();
        prop_assert!((back.t - t).abs() < 1e-9);
        prop_assert!(circle_gap(back.theta, theta) < 1e-9);
    }

    #[test]
    fn line_maps_are_increasing(seed in any::<u64>(), a in -60.0..60.0f64, b in -60.0..60.0f64) {
        prop_assume!(a != b);
        let m = random_line_map(seed);
        let (x, y) = if a < b { (a, b) } else { (b, a) };
        prop_assert!(m.level(x).unwrap() < m.level(y).unwrap());
    }

    #[test]
    fn level_lifts_have_degree_one(seed in any::<u64>(), j in 0u32..4096, t in -30.0..30.0f64) {
        let m = random_cylinder_map(seed);
        let theta = j as f64 / 4096.0;
        let a = m.eval_lift(CPoint::new(theta, t)).unwrap();
        let b = m.eval_lift(CPoint::new(theta + 1.0, t)).unwrap();
        prop_assert_eq!(b.theta, a.theta + 1.0);
        prop_assert_eq!(b.t, a.t);
    }

    #[test]
    fn twists_keep_levels_and_bumps_keep_angles(
        theta in 0.0..1.0f64,
        t in -5.0..5.0f64,
        alpha in -0.5..0.5f64,
        shift in -0.9..0.9f64,
    ) {
        let twist = MapExpr::twist(homeo::PlFunction::new(&[(-2.0, 0.0), (0.0, alpha), (2.0, 0.0)]).unwrap());
        prop_assert_eq!(twist.eval(CPoint::new(theta, t)).unwrap().t, t);
        let bump = MapExpr::fiber_bump(
            homeo::FiberBump::new(-1.0, 1.0, vec![vec![(0.0, shift)], vec![(0.0, -shift)]]).unwrap(),
        );
        prop_assert_eq!(bump.eval(CPoint::new(theta, t)).unwrap().theta, theta);
    }

    #[test]
    fn identity_level_image_is_exact(t0 in -100.0..100.0f64) {
        let curve = level_image(&MapExpr::identity(), t0, FiberKind::Circle, 64).unwrap();
        prop_assert!(curve.values().iter().all(|&v| v == t0));
    }

    #[test]
    fn verify_identity_is_symmetric(seed in any::<u64>(), other in any::<u64>()) {
        let (a, b) = (random_line_map(seed), random_line_map(other));
        let grid = Grid::new(FiberKind::Point, (-20.0, 20.0), 1, 101);
        prop_assert_eq!(
            verify_identity(&a, &b, &grid, 1.0).max_error,
            verify_identity(&b, &a, &grid, 1.0).max_error
        );
    }

    #[test]
    fn refinement_never_lowers_the_error(seed in any::<u64>()) {
        let m = random_cylinder_map(seed);
        let grid = Grid::new(FiberKind::Circle, (-6.0, 6.0), 8, 9);
        let coarse = verify_identity(&m, &MapExpr::identity(), &grid, 1.0).max_error;
        let fine = verify_identity(&m, &MapExpr::identity(), &grid.refined(), 1.0).max_error;
        prop_assert!(fine >= coarse);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    /// Extending to `k` then `k'` gives the same lattice as extending to `k'` directly.
    #[test]
    fn lazy_extension_is_deterministic(seed in any::<u64>(), k in 1i64..12, extra in 1i64..12) {
        let f = random_line_map(seed);
        let stepwise = build_suited(&f, FiberKind::Point, SuitedParams::default()).unwrap();
        stepwise.boundary(k).unwrap();
        stepwise.boundary(-k).unwrap();
        stepwise.boundary(k + extra).unwrap();
        stepwise.boundary(-k - extra).unwrap();
        let direct = build_suited(&f, FiberKind::Point, SuitedParams::default()).unwrap();
        direct.boundary(-k - extra).unwrap();
        direct.boundary(k + extra).unwrap();
        prop_assert_eq!(stepwise.snapshot(), direct.snapshot());
    }

    #[test]
    fn certification_is_symmetric_under_inversion(step in 1u32..6) {
        let bands = Bands::arithmetic(0.0, step as f64).unwrap();
        let m = MapExpr::translation(step as f64);
        let s = Settings::line();
        let fwd = certify_loxodromic(&m, &bands, FiberKind::Point, &s).unwrap();
        let back = certify_loxodromic(&invert(&m), &bands, FiberKind::Point, &s).unwrap();
        prop_assert_eq!(fwd.sink, End::Plus);
        prop_assert_eq!(back.sink, End::Minus);
    }

    /// Straighteners are the identity, bit for bit, outside their band.
    #[test]
    fn straightener_support(gamma in 2.3..4.7f64, target in 2.3..4.7f64, t in -10.0..10.0f64) {
        prop_assume!(!(2.0..=5.0).contains(&t));
        let curve = std::sync::Arc::new(GraphCurve::constant(FiberKind::Point, gamma));
        let h = build_straightener(curve, (2.0, 5.0), target, 0.25).unwrap();
        prop_assert_eq!(h.level(t).unwrap(), t);
    }
}
