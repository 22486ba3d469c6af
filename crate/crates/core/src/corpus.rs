//! Seeded random homeomorphisms used by tests and benches.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::homeo::{compose, FiberBump, MapExpr, PlFunction};

fn log_uniform(rng: &mut impl Rng, lo: f64, hi: f64) -> f64 {
    (rng.gen_range(lo.ln()..hi.ln())).exp()
}

/// Breakpoints of a random increasing PL map on `[-span, span]`.
///
/// The first and last segments have slope 1, so the map is a translation
/// near each end. Interior slopes are log-uniform in `slopes`.
fn random_breakpoints(rng: &mut impl Rng, max_points: usize, span: f64, slopes: (f64, f64)) -> Vec<(f64, f64)> {
    let count = rng.gen_range(4..=max_points.max(4));
    let mut xs: Vec<f64> = (0..count - 2).map(|_| rng.gen_range(-span + 0.5..span - 0.5)).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    xs.insert(0, -span);
    xs.push(span);
    let mut y = -span + rng.gen_range(-2.0..2.0);
    let mut points = vec![(xs[0], y)];
    let last = xs.len() - 2;
    for (i, w) in xs.windows(2).enumerate() {
        let slope = if i == 0 || i == last {
            1.0
        } else {
            log_uniform(rng, slopes.0, slopes.1)
        };
        y += slope * (w[1] - w[0]);
        points.push((w[1], y));
    }
    points
}

/// A random increasing PL map of the line: at most 20 breakpoints in
/// `[-10, 10]`, interior slopes in `[0.1, 10]`, unit-slope tails.
pub fn random_line_map(seed: u64) -> MapExpr {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    MapExpr::vertical_pl(&random_breakpoints(&mut rng, 20, 10.0, (0.1, 10.0))).expect("slopes are positive")
}

pub fn line_corpus(seed: u64, count: usize) -> Vec<MapExpr> {
    (0..count as u64).map(|i| random_line_map(seed.wrapping_add(i))).collect()
}

fn random_twist(rng: &mut impl Rng) -> MapExpr {
    let count = rng.gen_range(2..=4);
    let mut xs: Vec<f64> = (0..count).map(|_| rng.gen_range(-7.0..7.0)).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    let values: Vec<f64> = xs.iter().map(|_| rng.gen_range(-0.4..0.4)).collect();
    let mut knots = vec![(-9.0, values[0])];
    knots.extend(xs.iter().copied().zip(values.iter().copied()));
    knots.push((9.0, *values.last().expect("at least one knot")));
    MapExpr::twist(PlFunction::new(&knots).expect("abscissae increase"))
}

fn random_bump(rng: &mut impl Rng) -> MapExpr {
    let width = rng.gen_range(2.0..6.0);
    let lower = rng.gen_range(-10.0..10.0 - width);
    let upper = lower + width;
    let mid = 0.5 * (lower + upper);
    let (a, b) = (rng.gen_range(0.0..0.35 * width), rng.gen_range(0.0..0.35 * width));
    let (pa, pb) = (rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0));
    let samples = 16;
    let tracks = (0..samples)
        .map(|j| {
            let theta = j as f64 / samples as f64;
            let x = mid + a * (std::f64::consts::TAU * (theta + pa)).cos();
            let y = mid + b * (std::f64::consts::TAU * (theta + pb)).cos();
            vec![(x, y)]
        })
        .collect();
    MapExpr::fiber_bump(FiberBump::new(lower, upper, tracks).expect("breakpoints inside the band"))
}

/// A random composition of at most six primitives on the cylinder.
pub fn random_cylinder_map(seed: u64) -> MapExpr {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let count = rng.gen_range(1..=6);
    let parts: Vec<MapExpr> = (0..count)
        .map(|_| match rng.gen_range(0..3) {
            0 => MapExpr::vertical_pl(&random_breakpoints(&mut rng, 6, 8.0, (0.5, 2.0))).expect("slopes are positive"),
            1 => random_twist(&mut rng),
            _ => random_bump(&mut rng),
        })
        .collect();
    compose(&parts).expect("all primitives act on the cylinder")
}

pub fn cylinder_corpus(seed: u64, count: usize) -> Vec<MapExpr> {
    (0..count as u64).map(|i| random_cylinder_map(seed.wrapping_add(i))).collect()
}
