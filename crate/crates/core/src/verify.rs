//! Grid-based verification reports.

use std::ops::RangeInclusive;

use crate::homeo::curve::sample_image;
use crate::homeo::metric::distance;
use crate::homeo::{CPoint, FiberKind, MapExpr};
use crate::suited::{Bands, End, LoxodromicCertificate, SuitedDecomposition};

/// Worst offenders kept per report.
const WORST: usize = 5;

/// Equispaced sample of `fiber × window`, endpoints included in level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub fiber: FiberKind,
    pub window: (f64, f64),
    pub theta_count: usize,
    pub t_count: usize,
}

impl Grid {
    pub fn new(fiber: FiberKind, window: (f64, f64), theta_count: usize, t_count: usize) -> Self {
        let theta_count = match fiber {
            FiberKind::Point => 1,
            FiberKind::Circle => theta_count.max(1),
        };
        Grid {
            fiber,
            window,
            theta_count,
            t_count: t_count.max(1),
        }
    }

    pub fn len(&self) -> usize {
        self.theta_count * self.t_count
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn level(&self, i: usize) -> f64 {
        if self.t_count == 1 {
            return self.window.0;
        }
        let (lo, hi) = self.window;
        lo + (i as f64 * (hi - lo)) / (self.t_count - 1) as f64
    }

    pub fn angle(&self, j: usize) -> f64 {
        j as f64 / self.theta_count as f64
    }

    pub fn points(&self) -> impl Iterator<Item = CPoint> + '_ {
        (0..self.t_count)
            .flat_map(move |i| (0..self.theta_count).map(move |j| CPoint::new(self.angle(j), self.level(i))))
    }

    /// Doubles the resolution in both directions, keeping every old point.
    pub fn refined(&self) -> Grid {
        let theta_count = match self.fiber {
            FiberKind::Point => 1,
            FiberKind::Circle => 2 * self.theta_count,
        };
        Grid {
            theta_count,
            t_count: 2 * self.t_count - 1,
            ..*self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WorstPoint {
    pub theta: f64,
    pub t: f64,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub window: (f64, f64),
    pub grid: (usize, usize),
    pub tolerance: f64,
    pub max_error: f64,
    /// Up to five points at or above tolerance, worst first.
    pub failures: Vec<WorstPoint>,
    pub pass: bool,
}

/// Running maximum plus the worst few points at or above tolerance.
struct Tally {
    tolerance: f64,
    max_error: f64,
    worst: Vec<WorstPoint>,
}

impl Tally {
    fn new(tolerance: f64) -> Self {
        Tally {
            tolerance,
            max_error: f64::NEG_INFINITY,
            worst: Vec::with_capacity(WORST + 1),
        }
    }

    fn record(&mut self, theta: f64, t: f64, error: f64) {
        let error = if error.is_nan() { f64::INFINITY } else { error };
        self.max_error = self.max_error.max(error);
        if error < self.tolerance {
            return;
        }
        if self.worst.len() == WORST && self.worst[WORST - 1].error >= error {
            return;
        }
        let at = self.worst.partition_point(|w| w.error >= error);
        self.worst.insert(at, WorstPoint { theta, t, error });
        self.worst.truncate(WORST);
    }

    fn finish(self, window: (f64, f64), grid: (usize, usize)) -> VerificationReport {
        let max_error = if self.max_error == f64::NEG_INFINITY {
            0.0
        } else {
            self.max_error
        };
        VerificationReport {
            window,
            grid,
            tolerance: self.tolerance,
            max_error,
            pass: max_error < self.tolerance,
            failures: self.worst,
        }
    }
}

/// Sup distance between `lhs` and `rhs` on the grid.
pub fn verify_identity(lhs: &MapExpr, rhs: &MapExpr, grid: &Grid, tolerance: f64) -> VerificationReport {
    let mut tally = Tally::new(tolerance);
    for p in grid.points() {
        let error = match (lhs.eval(p), rhs.eval(p)) {
            (Ok(a), Ok(b)) => distance(a, b),
            _ => f64::INFINITY,
        };
        tally.record(p.theta, p.t, error);
    }
    tally.finish(grid.window, (grid.theta_count, grid.t_count))
}

/// Checks that every band in `bands` contains its marker and the marker's
/// image with the decomposition's margin to spare.
///
/// The error of band `k` is `margin - slack`, where the slack is the smaller
/// gap between the sampled curves and the band's edges; it passes below 0.
pub fn verify_suitedness(
    f: &MapExpr,
    suited: &SuitedDecomposition,
    bands: RangeInclusive<i64>,
) -> VerificationReport {
    let params = suited.params();
    let margin = params.margin;
    let mut tally = Tally::new(0.0);
    let mut lo_level = f64::INFINITY;
    let mut hi_level = f64::NEG_INFINITY;
    for k in bands.clone() {
        let (Ok(lower), Ok(marker), Ok(upper)) =
            (suited.boundary(k), suited.marker(k), suited.boundary(k + 1))
        else {
            tally.record(0.0, f64::NAN, f64::INFINITY);
            continue;
        };
        lo_level = lo_level.min(lower);
        hi_level = hi_level.max(upper);
        let error = match marker_extent(f, suited.fiber(), marker, params.resolution) {
            Ok((lo, hi)) => margin - (lo - lower).min(upper - hi),
            Err(_) => f64::INFINITY,
        };
        tally.record(0.0, marker, error);
    }
    let count = (bands.end() - bands.start() + 1).max(0) as usize;
    tally.finish((lo_level, hi_level), (params.resolution, count))
}

/// Extent of the marker level together with its image.
pub(crate) fn marker_extent(
    f: &MapExpr,
    fiber: FiberKind,
    t: f64,
    resolution: usize,
) -> crate::Result<(f64, f64)> {
    let (lo, hi) = match fiber {
        FiberKind::Point => {
            let y = f.level(t)?;
            (y, y)
        }
        FiberKind::Circle => sample_image(f, t, resolution)?.level_range(),
    };
    Ok((lo.min(t), hi.max(t)))
}

/// Iterates `samples` points spread over `window` forward and backward and
/// records the smallest band progress toward the sink and source.
///
/// The error of an orbit is minus its smallest one-step progress, so the
/// report passes (tolerance 0) exactly when every step crosses at least one band.
pub fn verify_dynamics(
    cert: &LoxodromicCertificate,
    iterations: usize,
    samples: usize,
    window: (f64, f64),
) -> VerificationReport {
    let starts = orbit_starts(cert.fiber, window, samples);
    let mut report = verify_dynamics_from(&cert.map, &cert.bands, cert.sink, &starts, iterations);
    report.window = window;
    report
}

/// Starting points for orbit evidence: levels at cell midpoints of the
/// window, angles spread evenly over the circle.
pub fn orbit_starts(fiber: FiberKind, window: (f64, f64), samples: usize) -> Vec<CPoint> {
    let n = samples.max(1);
    (0..n)
        .map(|j| {
            let t = window.0 + ((j as f64 + 0.5) * (window.1 - window.0)) / n as f64;
            let theta = match fiber {
                FiberKind::Point => 0.0,
                FiberKind::Circle => j as f64 / n as f64,
            };
            CPoint::new(theta, t)
        })
        .collect()
}

/// [`verify_dynamics`] from explicit starting points.
pub fn verify_dynamics_from(
    map: &MapExpr,
    bands: &Bands,
    sink: End,
    starts: &[CPoint],
    iterations: usize,
) -> VerificationReport {
    let mut tally = Tally::new(0.0);
    let toward = sink.sign();
    let inverse = map.inverse();
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for &p in starts {
        lo = lo.min(p.t);
        hi = hi.max(p.t);
        let progress = [(map, toward), (&inverse, -toward)]
            .into_iter()
            .map(|(m, dir)| orbit_progress(m, bands, p, iterations, dir))
            .try_fold(i64::MAX, |acc, r| r.map(|v| acc.min(v)));
        let error = match progress {
            Ok(v) => -(v as f64),
            Err(_) => f64::INFINITY,
        };
        tally.record(p.theta, p.t, error);
    }
    tally.finish((lo, hi), (starts.len(), iterations))
}

/// Smallest `dir · (index after − index before)` along the orbit.
///
/// Bands are closed and widened by rounding slack, so a level on or next to a
/// boundary belongs to both neighbours. The orbit's index sequence is chosen
/// greedily: the least advance of at least one band when one is available.
/// Orbits of loxodromic maps can converge onto boundary levels, where the last
/// bits alone would decide a plain index.
fn orbit_progress(m: &MapExpr, bands: &Bands, p: CPoint, iterations: usize, dir: i64) -> crate::Result<i64> {
    let mut q = p;
    let (lo, hi) = candidates(bands, q.t)?;
    let mut index = if dir > 0 { lo } else { hi };
    let mut least = i64::MAX;
    for _ in 0..iterations {
        q = m.eval_lift(q)?;
        let (lo, hi) = candidates(bands, q.t)?;
        let next = if dir > 0 {
            lo.max(index + 1).min(hi)
        } else {
            hi.min(index - 1).max(lo)
        };
        least = least.min(dir * (next - index));
        index = next;
    }
    Ok(least)
}

/// Lowest and highest band index containing `t` up to rounding slack.
fn candidates(bands: &Bands, t: f64) -> crate::Result<(i64, i64)> {
    let slack = SLACK * t.abs().max(1.0);
    Ok((bands.locate(t - slack)?, bands.locate(t + slack)?))
}

const SLACK: f64 = 1e-12;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_maps_pass_with_zero_error() {
        let m = MapExpr::vertical_pl(&[(0.0, 0.0), (1.0, 3.0)]).unwrap();
        let grid = Grid::new(FiberKind::Point, (-50.0, 50.0), 1, 10_000);
        let r = verify_identity(&m, &m, &grid, 1e-9);
        assert!(r.pass);
        assert_eq!(r.max_error, 0.0);
        assert!(r.failures.is_empty());
    }

    #[test]
    fn detects_a_hundredth() {
        let grid = Grid::new(FiberKind::Point, (-50.0, 50.0), 1, 100);
        let r = verify_identity(&MapExpr::translation(1.0), &MapExpr::translation(1.01), &grid, 1e-3);
        assert!(!r.pass);
        assert!((r.max_error - 0.01).abs() < 1e-12);
        assert_eq!(r.failures.len(), 5);
        assert!(r.failures.windows(2).all(|w| w[0].error >= w[1].error));
    }

    #[test]
    fn symmetric_in_arguments() {
        let a = MapExpr::vertical_pl(&[(0.0, 0.0), (1.0, 3.0)]).unwrap();
        let b = MapExpr::translation(0.3);
        let grid = Grid::new(FiberKind::Point, (-5.0, 5.0), 1, 101);
        assert_eq!(
            verify_identity(&a, &b, &grid, 1.0).max_error,
            verify_identity(&b, &a, &grid, 1.0).max_error
        );
    }

    #[test]
    fn refinement_keeps_old_points() {
        let grid = Grid::new(FiberKind::Circle, (-20.0, 20.0), 10, 11);
        let fine = grid.refined();
        let fine_points: Vec<CPoint> = fine.points().collect();
        for p in grid.points() {
            assert!(fine_points.contains(&p));
        }
    }

    #[test]
    fn translation_orbit_moves_one_band_per_step() {
        let bands = Bands::arithmetic(0.0, 1.0).unwrap();
        let m = MapExpr::translation(1.0);
        let r = verify_dynamics_from(&m, &bands, End::Plus, &[CPoint::level(0.0)], 100);
        assert!(r.pass);
        assert_eq!(r.max_error, -1.0);
        let end = (0..100).try_fold(CPoint::level(0.0), |q, _| m.eval(q)).unwrap();
        assert_eq!(end.t, 100.0);
    }

    #[test]
    fn identity_has_no_progress() {
        let bands = Bands::arithmetic(0.0, 1.0).unwrap();
        let r = verify_dynamics_from(&MapExpr::identity(), &bands, End::Plus, &[CPoint::level(0.5)], 10);
        assert!(!r.pass);
        assert!(!r.failures.is_empty());
    }
}
