//! Conjugating two loxodromic maps that share a sink.
//!
//! Both maps are read in the standard band `S¹ × [0, 1]` through an edge
//! chart that sends the bottom edge to the lower boundary of the fundamental
//! band and the top edge to its upper boundary, along an isotopy from the
//! identity to the map's own boundary angle map:
//!
//! `chart(θ, s) = ((1 - s)·θ + s·Θ(θ), (1 - s)·b₀ + s·b₁)`.
//!
//! Composing the chart of `τ` with the inverse chart of `σ` identifies the two
//! fundamental bands compatibly with both maps on the boundary, and the
//! identification is spread over every other band by iterating the maps.

use crate::error::{Error, Result};
use crate::homeo::{reduce_turns, CPoint, FiberKind, MapExpr, Node};
use crate::roots::refine;
use crate::suited::{Bands, End, LoxodromicCertificate};

use std::sync::Arc;

/// The boundary chart of one loxodromic map on its fundamental band.
#[derive(Debug, Clone)]
struct EdgeChart {
    map: MapExpr,
    bottom: f64,
    top: f64,
    fiber: FiberKind,
    /// `Θ(i / n)` on the lift, `i = 0..=n`; empty on the line.
    lifts: Vec<f64>,
}

impl EdgeChart {
    fn new(map: &MapExpr, bands: &Bands, fiber: FiberKind, resolution: usize) -> Result<Self> {
        let bottom = bands.level(0)?;
        let top = bands.level(1)?;
        let lifts = match fiber {
            FiberKind::Point => Vec::new(),
            FiberKind::Circle => {
                let n = resolution.max(16);
                let lifts = (0..=n)
                    .map(|i| Ok(map.eval_lift(CPoint::new(i as f64 / n as f64, bottom))?.theta))
                    .collect::<Result<Vec<f64>>>()?;
                let turn = lifts[n] - lifts[0];
                if (turn - 1.0).abs() > 1e-9 || lifts.windows(2).any(|w| w[1] <= w[0]) {
                    return Err(Error::GraphViolation {
                        level: bottom,
                        detail: "boundary angle map is not an increasing degree-1 map".into(),
                    });
                }
                lifts
            }
        };
        Ok(EdgeChart {
            map: map.clone(),
            bottom,
            top,
            fiber,
            lifts,
        })
    }

    fn angle(&self, theta: f64) -> Result<f64> {
        Ok(self.map.eval_lift(CPoint::new(theta, self.bottom))?.theta)
    }

    fn forward(&self, theta: f64, s: f64) -> Result<CPoint> {
        let t = (1.0 - s) * self.bottom + s * self.top;
        let theta = match self.fiber {
            FiberKind::Point => theta,
            FiberKind::Circle if s == 0.0 => theta,
            FiberKind::Circle => (1.0 - s) * theta + s * self.angle(theta)?,
        };
        Ok(CPoint { theta, t })
    }

    fn backward(&self, p: CPoint) -> Result<(f64, f64)> {
        let s = (p.t - self.bottom) / (self.top - self.bottom);
        if self.fiber == FiberKind::Point || s == 0.0 {
            return Ok((p.theta, s));
        }
        // Solve (1 - s)·θ + s·Θ(θ) = target on the lift; the left side is
        // increasing and commutes with θ ↦ θ + 1.
        let n = self.lifts.len() - 1;
        let slice = |i: usize| (1.0 - s) * (i as f64 / n as f64) + s * self.lifts[i];
        let base = slice(0);
        let mut target = base + reduce_turns(p.theta - base);
        if target >= base + 1.0 {
            target -= 1.0;
        }
        let turns = (p.theta - target).round();
        let (mut lo, mut hi) = (0, n);
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if slice(mid) <= target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let theta = refine(
            |x| Ok((1.0 - s) * x + s * self.angle(x)?),
            target,
            lo as f64 / n as f64,
            slice(lo),
            hi as f64 / n as f64,
            slice(hi),
        )?;
        Ok((theta + turns, s))
    }
}

/// `c` with `c ∘ σ ∘ c⁻¹ = τ`, evaluated as `τⁿ ∘ φ ∘ σ⁻ⁿ` on the `n`-th band of `σ`.
#[derive(Debug)]
pub struct Conjugator {
    fiber: FiberKind,
    sigma: LoxodromicCertificate,
    tau: LoxodromicCertificate,
    sigma_chart: EdgeChart,
    tau_chart: EdgeChart,
    resolution: usize,
}

impl Conjugator {
    pub fn fiber(&self) -> FiberKind {
        self.fiber
    }

    /// The certificates as given, before normalizing the sink.
    pub fn sigma(&self) -> &LoxodromicCertificate {
        &self.sigma
    }

    pub fn tau(&self) -> &LoxodromicCertificate {
        &self.tau
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub(crate) fn apply(&self, p: CPoint, inverse: bool) -> Result<CPoint> {
        let (from, from_chart, to_chart) = if inverse {
            (&self.tau, &self.tau_chart, &self.sigma_chart)
        } else {
            (&self.sigma, &self.sigma_chart, &self.tau_chart)
        };
        let n = from.bands.locate(p.t)?;
        let q = iterate(&from_chart.map, p, -n)?;
        let (theta, s) = from_chart.backward(q)?;
        let r = to_chart.forward(theta, s)?;
        iterate(&to_chart.map, r, n)
    }
}

/// `m^n(p)`, one application at a time.
fn iterate(m: &MapExpr, p: CPoint, n: i64) -> Result<CPoint> {
    let inverse = n < 0;
    let mut q = p;
    for _ in 0..n.unsigned_abs() {
        q = m.apply(q, inverse)?;
    }
    Ok(q)
}

/// A conjugator from `sigma` to `tau`.
///
/// Both must carry their bands toward the same end; when that end is `-∞`
/// the inverses are conjugated instead, which conjugates the maps as well.
pub fn conjugator(sigma: &LoxodromicCertificate, tau: &LoxodromicCertificate, resolution: usize) -> Result<MapExpr> {
    if sigma.fiber != tau.fiber {
        return Err(Error::FiberMismatch);
    }
    if sigma.sink != tau.sink {
        return Err(Error::EndsMismatch);
    }
    let (s, t) = match sigma.sink {
        End::Plus => (sigma.map.clone(), tau.map.clone()),
        End::Minus => (sigma.map.inverse(), tau.map.inverse()),
    };
    let fiber = sigma.fiber;
    let sigma_chart = EdgeChart::new(&s, &sigma.bands, fiber, resolution)?;
    let tau_chart = EdgeChart::new(&t, &tau.bands, fiber, resolution)?;
    Ok(MapExpr::from_node(Node::Conjugator(Arc::new(Conjugator {
        fiber,
        sigma: sigma.clone(),
        tau: tau.clone(),
        sigma_chart,
        tau_chart,
        resolution,
    }))))
}
