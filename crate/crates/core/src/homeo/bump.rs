//! Fiberwise bumps: level maps supported in a band, varying with the angle.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::homeo::curve::GraphCurve;
use crate::homeo::{CPoint, FiberKind};

/// How the per-angle bijection of `[lower, upper]` is specified.
#[derive(Debug, Clone)]
pub enum BumpProfile {
    /// Interior breakpoints sampled at equispaced angles `j / n`, interpolated
    /// linearly and periodically between samples. A single sample means the
    /// profile does not depend on the angle.
    Tracks(Vec<Vec<(f64, f64)>>),
    /// Sends the graph of `curve` to the level `target`.
    Graph {
        curve: Arc<GraphCurve>,
        target: f64,
        shape: KnotShape,
    },
}

/// Per-angle interpolation through `(lower, lower)`, the knot and `(upper, upper)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KnotShape {
    /// Two affine pieces.
    Linear,
    /// Monotone rational quadratic pieces with slope 1 at both edges and the
    /// given slopes just below and just above the knot.
    Rational { below: f64, above: f64 },
}

impl KnotShape {
    /// Whether a knot already on its target leaves every point fixed.
    pub fn is_flat(&self) -> bool {
        match *self {
            KnotShape::Linear => true,
            KnotShape::Rational { below, above } => below == 1.0 && above == 1.0,
        }
    }
}

/// For each angle an increasing PL bijection of `[lower, upper]` fixing both
/// ends; the identity outside the open band.
#[derive(Debug, Clone)]
pub struct FiberBump {
    lower: f64,
    upper: f64,
    profile: BumpProfile,
}

impl FiberBump {
    pub fn new(lower: f64, upper: f64, tracks: Vec<Vec<(f64, f64)>>) -> Result<Self> {
        check_band(lower, upper)?;
        let Some(first) = tracks.first() else {
            return Err(Error::InvalidMap("fiber bump has no samples".into()));
        };
        let count = first.len();
        for sample in &tracks {
            if sample.len() != count {
                return Err(Error::InvalidMap(
                    "fiber bump samples must have equal breakpoint counts".into(),
                ));
            }
            let mut prev = (lower, lower);
            for &(x, y) in sample.iter().chain(std::iter::once(&(upper, upper))) {
                if !(x.is_finite() && y.is_finite()) {
                    return Err(Error::InvalidMap("non-finite fiber bump breakpoint".into()));
                }
                if !(x > prev.0 && y > prev.1) {
                    return Err(Error::NotOrientationPreserving(format!(
                        "fiber bump breakpoint ({x}, {y}) is not strictly inside ({lower}, {upper}) in increasing order"
                    )));
                }
                prev = (x, y);
            }
        }
        Ok(FiberBump {
            lower,
            upper,
            profile: BumpProfile::Tracks(tracks),
        })
    }

    /// Angle-independent bump.
    pub fn constant(lower: f64, upper: f64, interior: &[(f64, f64)]) -> Result<Self> {
        FiberBump::new(lower, upper, vec![interior.to_vec()])
    }

    /// Bump sending the graph of `curve` to `target`. The caller guarantees the
    /// curve and the target lie in the open band; evaluation re-checks.
    pub fn graph(lower: f64, upper: f64, curve: Arc<GraphCurve>, target: f64, shape: KnotShape) -> Result<Self> {
        check_band(lower, upper)?;
        if let KnotShape::Rational { below, above } = shape {
            if !(below > 0.0 && above > 0.0 && below.is_finite() && above.is_finite()) {
                return Err(Error::InvalidMap(format!("knot slopes ({below}, {above}) must be positive")));
            }
        }
        if !(target > lower && target < upper) {
            return Err(Error::BandViolation {
                lower,
                upper,
                detail: format!("target level {target}"),
            });
        }
        Ok(FiberBump {
            lower,
            upper,
            profile: BumpProfile::Graph { curve, target, shape },
        })
    }

    pub fn band(&self) -> (f64, f64) {
        (self.lower, self.upper)
    }

    pub fn profile(&self) -> &BumpProfile {
        &self.profile
    }

    pub(crate) fn fiber_hint(&self) -> Option<FiberKind> {
        match &self.profile {
            BumpProfile::Tracks(tracks) if tracks.len() > 1 => Some(FiberKind::Circle),
            BumpProfile::Tracks(_) => None,
            BumpProfile::Graph { curve, .. } => Some(curve.fiber()),
        }
    }

    pub(crate) fn apply(&self, p: CPoint, inverse: bool) -> Result<CPoint> {
        if !(p.t > self.lower && p.t < self.upper) {
            return Ok(p);
        }
        let t = match &self.profile {
            BumpProfile::Tracks(tracks) => {
                let (j, k, w) = sample_weights(p.theta, tracks.len());
                let interior = tracks[j].iter().zip(&tracks[k]).map(|(a, b)| {
                    if w == 0.0 {
                        *a
                    } else {
                        (a.0 + w * (b.0 - a.0), a.1 + w * (b.1 - a.1))
                    }
                });
                if inverse {
                    self.through(interior.map(|(x, y)| (y, x)), p.t)
                } else {
                    self.through(interior, p.t)
                }
            }
            BumpProfile::Graph { curve, target, shape } => {
                let gamma = curve.value_at(p.theta)?;
                if !(gamma > self.lower && gamma < self.upper) {
                    return Err(Error::BandViolation {
                        lower: self.lower,
                        upper: self.upper,
                        detail: format!("curve level {gamma} at angle {}", p.theta),
                    });
                }
                if gamma == *target && shape.is_flat() {
                    return Ok(p);
                }
                let knot = if inverse {
                    (*target, gamma)
                } else {
                    (gamma, *target)
                };
                match *shape {
                    KnotShape::Linear => self.through(std::iter::once(knot), p.t),
                    KnotShape::Rational { below, above } => self.rational(knot, (below, above), p.t, inverse),
                }
            }
        };
        Ok(CPoint { theta: p.theta, t })
    }

    /// PL map through `(lower, lower)`, `interior…`, `(upper, upper)` at `t`.
    fn through(&self, interior: impl Iterator<Item = (f64, f64)>, t: f64) -> f64 {
        let mut prev = (self.lower, self.lower);
        for next in interior.chain(std::iter::once((self.upper, self.upper))) {
            if t < next.0 {
                return prev.1 + ((t - prev.0) * (next.1 - prev.1)) / (next.0 - prev.0);
            }
            prev = next;
        }
        t
    }
}

impl FiberBump {
    /// Rational quadratic halves through `knot` with slope 1 at the edges.
    /// The inverse is evaluated against the forward pieces.
    fn rational(&self, (x, y): (f64, f64), (below, above): (f64, f64), t: f64, inverse: bool) -> f64 {
        if t == x {
            return y;
        }
        let (start, end, d0, d1) = if t < x {
            ((self.lower, self.lower), (x, y), 1.0, below)
        } else {
            ((x, y), (self.upper, self.upper), above, 1.0)
        };
        let piece = RationalPiece { start, end, d0, d1 };
        if inverse {
            // `knot` is already swapped, so `start`/`end` are in image order.
            let forward = RationalPiece {
                start: (start.1, start.0),
                end: (end.1, end.0),
                d0,
                d1,
            };
            forward.invert(t)
        } else {
            piece.at(t)
        }
    }
}

/// Monotone rational quadratic from `start` to `end` with end slopes `d0`, `d1`.
///
/// `y = y0 + (y1 - y0)·(Δξ² + d0·ξ(1-ξ)) / (Δ + (d0 + d1 - 2Δ)·ξ(1-ξ))` with
/// `Δ` the secant slope; increasing for all positive data.
struct RationalPiece {
    start: (f64, f64),
    end: (f64, f64),
    d0: f64,
    d1: f64,
}

impl RationalPiece {
    fn secant(&self) -> f64 {
        (self.end.1 - self.start.1) / (self.end.0 - self.start.0)
    }

    fn at(&self, x: f64) -> f64 {
        let delta = self.secant();
        let xi = (x - self.start.0) / (self.end.0 - self.start.0);
        let q = xi * (1.0 - xi);
        let num = delta * xi * xi + self.d0 * q;
        let den = delta + (self.d0 + self.d1 - 2.0 * delta) * q;
        self.start.1 + (self.end.1 - self.start.1) * (num / den)
    }

    /// Solves the quadratic `(Δ - d0 + rE)ξ² + (d0 - rE)ξ - rΔ = 0`.
    fn invert(&self, y: f64) -> f64 {
        let delta = self.secant();
        let r = (y - self.start.1) / (self.end.1 - self.start.1);
        let e = self.d0 + self.d1 - 2.0 * delta;
        let a = delta - self.d0 + r * e;
        let b = self.d0 - r * e;
        let c = r * delta;
        let disc = (b * b + 4.0 * a * c).max(0.0);
        let xi = if b >= 0.0 {
            2.0 * c / (b + disc.sqrt())
        } else {
            (disc.sqrt() - b) / (2.0 * a)
        };
        self.start.0 + xi.clamp(0.0, 1.0) * (self.end.0 - self.start.0)
    }
}

fn check_band(lower: f64, upper: f64) -> Result<()> {
    if lower.is_finite() && upper.is_finite() && lower < upper {
        Ok(())
    } else {
        Err(Error::InvalidMap(format!("bad band ({lower}, {upper})")))
    }
}

/// Sample indices `(j, j+1 mod n)` and weight for periodic interpolation at `theta`.
pub(crate) fn sample_weights(theta: f64, n: usize) -> (usize, usize, f64) {
    if n == 1 {
        return (0, 0, 0.0);
    }
    let u = crate::homeo::reduce_turns(theta) * n as f64;
    let j = (u.floor() as usize).min(n - 1);
    let w = u - j as f64;
    (j, (j + 1) % n, w)
}
