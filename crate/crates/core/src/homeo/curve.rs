//! Graph curves `θ ↦ γ(θ)` and images of levels.

use crate::error::{Error, Result};
use crate::homeo::bump::sample_weights;
use crate::homeo::{reduce_turns, CPoint, FiberKind, MapExpr};
use crate::roots::refine;

const MAX_RESOLUTION: usize = 65_536;
const MIN_RESOLUTION: usize = 16;
const MARGINAL_SLOPE: f64 = 1e-6;
const DEGREE_TOLERANCE: f64 = 1e-9;

/// An embedded circle `{(θ, γ(θ))}` in the cylinder, or a single level on the line.
///
/// Curves produced by [`level_image`] remember the map and level they came
/// from, and [`GraphCurve::value_at`] solves `Θ(φ) = θ` on that map instead of
/// interpolating the stored samples. The samples remain the published
/// representation.
#[derive(Debug, Clone)]
pub struct GraphCurve {
    fiber: FiberKind,
    values: Vec<f64>,
    image: Option<ImageSource>,
}

/// `(Θ(φ_i), T(φ_i)) = m(φ_i, level)` on the lift, `φ_i = i / n`, `i = 0..=n`.
#[derive(Debug, Clone)]
pub(crate) struct ImageSource {
    map: MapExpr,
    level: f64,
    lifts: Vec<f64>,
    levels: Vec<f64>,
}

impl GraphCurve {
    pub fn constant(fiber: FiberKind, level: f64) -> Self {
        GraphCurve {
            fiber,
            values: vec![level],
            image: None,
        }
    }

    /// Curve through `values[j]` at `θ = j / n`, linear in between.
    pub fn from_samples(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidArgument("empty curve".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(GraphCurve {
            fiber: FiberKind::Circle,
            values,
            image: None,
        })
    }

    pub fn fiber(&self) -> FiberKind {
        self.fiber
    }

    /// Sample count per turn.
    pub fn resolution(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `(θ_j, γ(θ_j))` at the equispaced abscissae.
    pub fn samples(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        let n = self.values.len() as f64;
        self.values
            .iter()
            .enumerate()
            .map(move |(j, &v)| (j as f64 / n, v))
    }

    pub fn min(&self) -> f64 {
        self.extremes().0
    }

    pub fn max(&self) -> f64 {
        self.extremes().1
    }

    fn extremes(&self) -> (f64, f64) {
        let extra = self.image.iter().flat_map(|s| s.levels.iter());
        self.values
            .iter()
            .chain(extra)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            })
    }

    pub fn is_constant(&self) -> bool {
        let first = self.values[0];
        self.values.iter().all(|&v| v == first)
            && self
                .image
                .as_ref()
                .is_none_or(|s| s.levels.iter().all(|&v| v == first))
    }

    pub fn value_at(&self, theta: f64) -> Result<f64> {
        if self.fiber == FiberKind::Point || self.values.len() == 1 {
            return Ok(self.values[0]);
        }
        if let Some(source) = &self.image {
            return source.value_at(theta);
        }
        let (j, k, w) = sample_weights(theta, self.values.len());
        let (a, b) = (self.values[j], self.values[k]);
        Ok(if w == 0.0 { a } else { a + w * (b - a) })
    }
}

impl ImageSource {
    /// Smallest and largest sampled level.
    pub(crate) fn level_range(&self) -> (f64, f64) {
        self.levels
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)))
    }

    pub(crate) fn value_at(&self, psi: f64) -> Result<f64> {
        let n = self.lifts.len() - 1;
        let base = self.lifts[0];
        let mut target = base + reduce_turns(psi - base);
        if target >= self.lifts[n] {
            target -= 1.0;
        }
        if target < base {
            target = base;
        }
        let i = (self.lifts.partition_point(|&l| l <= target) - 1).min(n - 1);
        if self.lifts[i] == target {
            return Ok(self.levels[i]);
        }
        let mut last = None;
        let phi = refine(
            |phi| {
                let q = self.map.eval_lift(CPoint::new(phi, self.level))?;
                last = Some((phi, q.t));
                Ok(q.theta)
            },
            target,
            i as f64 / n as f64,
            self.lifts[i],
            (i + 1) as f64 / n as f64,
            self.lifts[i + 1],
        )?;
        match last {
            Some((x, t)) if x == phi => Ok(t),
            _ => Ok(self.map.eval_lift(CPoint::new(phi, self.level))?.t),
        }
    }
}

/// Image of the level `t0` under `m`, as a graph over the fiber.
///
/// Samples `m` at `resolution` equispaced angles, doubling the resolution
/// while the smallest normalized angle increment is below `1e-6`, and
/// resamples the graph at equispaced abscissae.
pub fn level_image(m: &MapExpr, t0: f64, fiber: FiberKind, resolution: usize) -> Result<GraphCurve> {
    if fiber == FiberKind::Point {
        return Ok(GraphCurve::constant(fiber, m.level(t0)?));
    }
    let source = sample_image(m, t0, resolution)?;
    let n = source.lifts.len() - 1;
    let values = (0..n)
        .map(|j| source.value_at(j as f64 / n as f64))
        .collect::<Result<Vec<_>>>()?;
    Ok(GraphCurve {
        fiber,
        values,
        image: Some(source),
    })
}

/// Samples the image of the level `t0` on the cylinder and certifies that its
/// angle map is an increasing degree-1 map at the sampled points.
pub(crate) fn sample_image(m: &MapExpr, t0: f64, resolution: usize) -> Result<ImageSource> {
    if resolution < MIN_RESOLUTION {
        return Err(Error::InvalidArgument(format!(
            "curve resolution {resolution} is below {MIN_RESOLUTION}"
        )));
    }
    let mut n = resolution;
    loop {
        let mut lifts = Vec::with_capacity(n + 1);
        let mut levels = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let q = m.eval_lift(CPoint::new(i as f64 / n as f64, t0))?;
            lifts.push(q.theta);
            levels.push(q.t);
        }
        let turn = lifts[n] - lifts[0];
        if (turn - 1.0).abs() > DEGREE_TOLERANCE {
            return Err(Error::GraphViolation {
                level: t0,
                detail: format!("angle map has degree {turn}, not 1"),
            });
        }
        let (at, slope) = lifts
            .windows(2)
            .enumerate()
            .map(|(i, w)| (i, (w[1] - w[0]) * n as f64))
            .fold((0, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best });
        if slope <= 0.0 {
            return Err(Error::GraphViolation {
                level: t0,
                detail: format!(
                    "angle map folds near θ = {} at resolution {n}",
                    at as f64 / n as f64
                ),
            });
        }
        if slope < MARGINAL_SLOPE && n < MAX_RESOLUTION {
            n = (2 * n).min(MAX_RESOLUTION);
            continue;
        }
        return Ok(ImageSource {
            map: m.clone(),
            level: t0,
            lifts,
            levels,
        });
    }
}
