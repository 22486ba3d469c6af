//! Worked examples across the public API.

use std::sync::Arc;

use homeocomm::homeo::{FiberBump, PlFunction};
use homeocomm::*;

fn line_grid() -> Grid {
    Grid::new(FiberKind::Point, (-50.0, 50.0), 1, 10_000)
}

#[test]
fn evaluation_basics() {
    assert_eq!(MapExpr::identity().level(0.5).unwrap(), 0.5);
    let pl = MapExpr::vertical_pl(&[(0.0, 0.0), (1.0, 2.0)]).unwrap();
    assert_eq!(pl.level(0.5).unwrap(), 1.0);
    let twist = MapExpr::twist(PlFunction::constant(0.25));
    let q = twist.eval(CPoint::new(0.9, 3.0)).unwrap();
    assert!((q.theta - 0.15).abs() < 1e-12);
    assert_eq!(q.t, 3.0);
}

#[test]
fn inversion_basics() {
    assert_eq!(invert(&MapExpr::translation(1.0)).level(5.0).unwrap(), 4.0);
    let m = MapExpr::vertical_pl(&[(0.0, 0.0), (1.0, 3.0)]).unwrap();
    assert_eq!(invert(&m).level(1.5).unwrap(), 0.5);
}

#[test]
fn composition_basics() {
    let m = compose(&[MapExpr::translation(1.0), MapExpr::translation(2.0)]).unwrap();
    assert_eq!(m.level(0.0).unwrap(), 3.0);
    assert!(compose(&[]).unwrap().is_identity());
    for f in corpus::line_corpus(3, 5) {
        let id = compose(&[f.clone(), invert(&f)]).unwrap();
        assert!(verify_identity(&id, &MapExpr::identity(), &line_grid(), 1e-9).pass);
    }
    for f in corpus::cylinder_corpus(3, 3) {
        let id = compose(&[f.clone(), invert(&f)]).unwrap();
        let grid = Grid::new(FiberKind::Circle, (-20.0, 20.0), 50, 50);
        assert!(verify_identity(&id, &MapExpr::identity(), &grid, 1e-9).pass);
    }
}

#[test]
fn sup_distance_basics() {
    let m = corpus::random_line_map(11);
    assert_eq!(sup_distance(&m, &m, &line_grid()), 0.0);
    let d = sup_distance(&MapExpr::translation(1.0), &MapExpr::translation(1.5), &line_grid());
    assert_eq!(d, 0.5);
}

fn cosine_bump(n: usize) -> MapExpr {
    let tracks = (0..n)
        .map(|j| vec![(0.0, 0.3 * (std::f64::consts::TAU * j as f64 / n as f64).cos())])
        .collect();
    MapExpr::fiber_bump(FiberBump::new(-1.0, 1.0, tracks).unwrap())
}

#[test]
fn level_image_of_a_cosine_bump() {
    let n = 256;
    let bump = cosine_bump(n);
    let curve = level_image(&bump, 0.0, FiberKind::Circle, n).unwrap();
    for (theta, v) in curve.samples() {
        assert!((v - 0.3 * (std::f64::consts::TAU * theta).cos()).abs() < 1e-12);
    }
}

#[test]
fn folding_map_is_a_graph_violation() {
    let twist = MapExpr::twist(PlFunction::new(&[(-1.0, -2.0), (1.0, 2.0)]).unwrap());
    let m = compose(&[twist, cosine_bump(256)]).unwrap();
    // Brute scan: the angle map at level 0 decreases somewhere.
    let lift = |i: usize| m.eval_lift(CPoint::new(i as f64 / 4096.0, 0.0)).unwrap().theta;
    assert!((0..4096).any(|i| lift(i + 1) <= lift(i)));
    assert!(matches!(
        level_image(&m, 0.0, FiberKind::Circle, 1024),
        Err(Error::GraphViolation { .. })
    ));
    let report = check_orientation(&m, FiberKind::Circle, (-20.0, 20.0), 41);
    assert!(!report.pass && report.failures.is_empty());
    let err = commutator_factorization(&m, &Settings::cylinder()).unwrap_err();
    assert!(matches!(err, Error::GraphViolation { .. }), "{err}");
}

#[test]
fn orientation_checks() {
    let s = Settings::line();
    assert!(check_orientation(&MapExpr::translation(1.0), FiberKind::Point, s.window, 101).pass);
    let flip = MapExpr::vertical_pl(&[(0.0, 0.0), (1.0, -1.0)]);
    // Decreasing breakpoints are rejected at construction already.
    assert!(flip.is_err());
    for f in corpus::line_corpus(5, 10) {
        assert!(check_orientation(&f, FiberKind::Point, s.window, 101).pass);
    }
}

#[test]
fn worked_lattice_and_identity_lattice() {
    let s = build_suited(&MapExpr::translation(1.0), FiberKind::Point, SuitedParams::default()).unwrap();
    let m: Vec<f64> = (0..4).map(|k| s.boundary(k).unwrap()).collect();
    assert_eq!(m, [-2.0, 2.0, 5.0, 8.0]);
    let t: Vec<f64> = (0..3).map(|k| s.marker(k).unwrap()).collect();
    assert_eq!(t, [0.0, 3.0, 6.0]);

    let id = build_suited(&MapExpr::identity(), FiberKind::Point, SuitedParams::default()).unwrap();
    assert_eq!([id.boundary(0).unwrap(), id.boundary(1).unwrap(), id.boundary(2).unwrap()], [-1.0, 1.0, 3.0]);
    assert_eq!([id.marker(0).unwrap(), id.marker(1).unwrap()], [0.0, 2.0]);
}

#[test]
fn escaping_map_is_not_proper() {
    let params = SuitedParams {
        search_window: 100,
        ..SuitedParams::default()
    };
    let f = MapExpr::translation(-200.0);
    let err = build_suited(&f, FiberKind::Point, params).unwrap_err();
    assert!(matches!(err, Error::NotProper { .. }), "{err}");
}

#[test]
fn unbounded_displacement_is_not_proper() {
    // Tails of slope 1.2 and 0.8: displacement grows linearly at both ends,
    // so bands grow geometrically until the search window is exhausted.
    let f = MapExpr::vertical_pl(&[(-5.0, -4.0), (0.0, 2.0), (5.0, 6.0)]).unwrap();
    let err = commutator_factorization(&f, &Settings::line()).unwrap_err();
    assert!(matches!(err, Error::NotProper { .. }), "{err}");
}

#[test]
fn suitedness_reports() {
    let f = MapExpr::translation(1.0);
    let s = build_suited(&f, FiberKind::Point, SuitedParams::default()).unwrap();
    assert!(verify_suitedness(&f, &s, -3..=3).pass);

    let id = build_suited(&MapExpr::identity(), FiberKind::Point, SuitedParams::default()).unwrap();
    assert!(verify_suitedness(&MapExpr::identity(), &id, -3..=3).pass);

    // t_1 moved onto m_2.
    let mut snap = s.snapshot();
    let at = (1 - snap.first) as usize;
    snap.markers[at] = snap.boundaries[at + 1];
    let bad = SuitedDecomposition::from_lattice(&f, FiberKind::Point, SuitedParams::default(), &snap).unwrap();
    let report = verify_suitedness(&f, &bad, 0..=2);
    assert!(!report.pass);
    assert!(!report.failures.is_empty());
}

#[test]
fn certify_translation_and_identity() {
    let bands = Bands::arithmetic(0.0, 3.0).unwrap();
    let s = Settings::line();
    let cert = certify_loxodromic(&MapExpr::translation(3.0), &bands, FiberKind::Point, &s).unwrap();
    assert_eq!(cert.sink, End::Plus);
    let err = certify_loxodromic(&MapExpr::identity(), &bands, FiberKind::Point, &s).unwrap_err();
    assert!(matches!(err, Error::NotLoxodromic { condition: "iii", .. }));
}

#[test]
fn assembled_g_is_loxodromic_on_corpus() {
    let s = Settings::line();
    for f in corpus::line_corpus(21, 4) {
        let suited = build_suited(&f, FiberKind::Point, s.suited).unwrap();
        let a = assemble_g(&f, &suited, &s).unwrap();
        assert!(a.g_cert.dynamics.pass && a.gf_cert.dynamics.pass);
        // Independent orbit check: iterate g by hand and watch the band index.
        let mut t = 0.5;
        let mut k = suited.locate_boundary(t).unwrap();
        for _ in 0..30 {
            t = a.g.level(t).unwrap();
            let next = suited.locate_boundary(t).unwrap();
            assert!(next > k);
            k = next;
        }
    }
}

#[test]
fn vertical_shift_examples() {
    let s = build_suited(&MapExpr::translation(1.0), FiberKind::Point, SuitedParams::default()).unwrap();
    let g = build_vertical_shift(&s);
    assert_eq!(g.level(2.0).unwrap(), 5.0);
    assert_eq!(g.level(3.5).unwrap(), 6.5);
    for i in 1..=100 {
        let t = -2.0 + 4.0 * i as f64 / 101.0;
        let y = g.level(t).unwrap();
        assert!(y > 2.0 && y < 5.0);
    }
}

#[test]
fn straightener_examples() {
    let point = Arc::new(GraphCurve::constant(FiberKind::Point, 3.0));
    let h = build_straightener(point, (2.0, 5.0), 4.0, 0.25).unwrap();
    assert_eq!(h.level(3.0).unwrap(), 4.0);
    assert_eq!(h.level(2.5).unwrap(), 3.0);
    let flat = Arc::new(GraphCurve::constant(FiberKind::Circle, 4.0));
    assert!(build_straightener(flat, (2.0, 5.0), 4.0, 0.25).unwrap().is_identity());
}

#[test]
fn worked_translation_hits_markers() {
    let f = MapExpr::translation(1.0);
    let s = build_suited(&f, FiberKind::Point, SuitedParams::default()).unwrap();
    for shape in [StraightenerShape::Linear, StraightenerShape::Tangent] {
        let settings = Settings {
            straightener: shape,
            ..Settings::line()
        };
        let a = assemble_g(&f, &s, &settings).unwrap();
        let gf = compose(&[a.g, f.clone()]).unwrap();
        assert_eq!(gf.level(0.0).unwrap(), 3.0);
        assert_eq!(gf.level(3.0).unwrap(), 6.0);
    }
}

#[test]
fn conjugator_closed_form() {
    let s = Settings::line();
    let unit = certify_loxodromic(
        &MapExpr::translation(1.0),
        &Bands::arithmetic(0.0, 1.0).unwrap(),
        FiberKind::Point,
        &s,
    )
    .unwrap();
    let double = certify_loxodromic(
        &MapExpr::translation(2.0),
        &Bands::arithmetic(0.0, 2.0).unwrap(),
        FiberKind::Point,
        &s,
    )
    .unwrap();
    let c = conjugator(&unit, &double, 1024).unwrap();
    assert_eq!(c.level(0.5).unwrap(), 1.0);
    // Oracle: on band n, τⁿ∘φ∘σ⁻ⁿ(x) = 2(x − n) + 2n.
    for i in 0..100 {
        let x = -40.0 + (i * 13) as f64 / 17.0;
        let n = x.floor();
        assert!((c.level(x).unwrap() - (2.0 * (x - n) + 2.0 * n)).abs() < 1e-12);
    }
    let lhs = compose(&[c.clone(), unit.map.clone(), invert(&c)]).unwrap();
    assert!(verify_identity(&lhs, &double.map, &line_grid(), 1e-9).pass);
    let same = conjugator(&unit, &unit, 1024).unwrap();
    let lhs = compose(&[same.clone(), unit.map.clone(), invert(&same)]).unwrap();
    assert!(verify_identity(&lhs, &unit.map, &line_grid(), 1e-9).pass);
}

#[test]
fn commutator_examples() {
    let s = Settings::line();
    let cert = commutator_factorization(&MapExpr::identity(), &s).unwrap();
    assert_eq!(cert.report.max_error, 0.0);

    let f = MapExpr::translation(1.0);
    let cert = commutator_factorization(&f, &s).unwrap();
    assert!(cert.report.max_error < 1e-9);
    let Factors::Commutator { a, b } = &cert.factors else {
        panic!("expected a commutator");
    };
    let product = commutator(a, b).unwrap();
    assert!(sup_distance(&product, &f, &line_grid()) < 1e-9);
    // The conjugator fixes both ends.
    let c = b;
    for t in [-45.0, 45.0] {
        assert_eq!(c.level(t).unwrap().signum(), t.signum());
    }
}

#[test]
fn cylinder_commutator() {
    let f = corpus::random_cylinder_map(2);
    let cert = commutator_factorization(&f, &Settings::cylinder()).unwrap();
    assert!(cert.report.pass);
    assert!(cert.report.max_error < 1e-6);
    assert_eq!(cert.report.grid, (200, 200));
}

#[test]
fn split_examples() {
    let s = Settings::line();
    for f in [MapExpr::identity(), MapExpr::translation(1.0), MapExpr::translation(3.0)] {
        let (f1, f2) = split_loxodromic(&f, &s).unwrap();
        assert_eq!(f1.sink, End::Minus);
        assert_eq!(f2.sink, End::Plus);
        let product = compose(&[f1.map.clone(), f2.map.clone()]).unwrap();
        assert!(sup_distance(&product, &f, &line_grid()) < 1e-9);
    }
}

#[test]
fn power_roots() {
    let s = Settings::line();
    let fi = certify_loxodromic(
        &MapExpr::translation(3.0),
        &Bands::arithmetic(0.0, 3.0).unwrap(),
        FiberKind::Point,
        &s,
    )
    .unwrap();
    assert!(sup_distance(&power_root_conjugate(&fi, 1, &s).unwrap(), &fi.map, &line_grid()) < 1e-12);
    for p in [2u32, 3] {
        let root = power_root_conjugate(&fi, p, &s).unwrap();
        assert!(sup_distance(&root.power(p as i64), &fi.map, &line_grid()) < 1e-9, "p = {p}");
    }
    // Non-affine on [0, 3], t + 3 elsewhere; sends 3n to 3n + 3.
    let pl = MapExpr::vertical_pl(&[(-3.0, 0.0), (0.0, 3.0), (1.0, 3.5), (3.0, 6.0), (6.0, 9.0)]).unwrap();
    let fi = certify_loxodromic(&pl, &Bands::arithmetic(0.0, 3.0).unwrap(), FiberKind::Point, &s).unwrap();
    let root = power_root_conjugate(&fi, 3, &s).unwrap();
    assert!(sup_distance(&root.power(3), &pl, &line_grid()) < 1e-9);
}

#[test]
fn power_words() {
    let s = Settings {
        tolerance: 1e-6,
        ..Settings::line()
    };
    let g = MapExpr::translation(3.0);
    for exponents in [[2i64, 3], [-2, 3], [1, 4]] {
        let cert = power_word_decomposition(&g, &exponents, &s).unwrap();
        assert!(cert.report.max_error < 1e-6, "{exponents:?}");
        let Factors::PowerWord { terms } = &cert.factors else {
            panic!("expected a power word");
        };
        assert_eq!(terms.iter().map(|t| t.exponent).collect::<Vec<_>>(), exponents);
        assert!(terms.iter().all(|t| t.displacement > 1e-6));
    }
    let unit = power_word_decomposition(&g, &[1, 1], &Settings::line()).unwrap();
    assert!(unit.report.max_error < 1e-9);
    assert!(matches!(
        power_word_decomposition(&g, &[0, 2], &s),
        Err(Error::InvalidArgument(_))
    ));
    assert!(matches!(power_word_decomposition(&g, &[2], &s), Err(Error::InvalidArgument(_))));
}
