use std::sync::Arc;

use crate::error::{Error, Result};
use crate::homeo::CPoint;
use crate::suited::SuitedDecomposition;

/// A bi-infinite increasing sequence of levels `b_k`, cutting `fiber × ℝ`
/// into bands `[b_k, b_{k+1}]`.
#[derive(Debug, Clone)]
pub enum Bands {
    /// `b_k = origin + k·step`.
    Arithmetic { origin: f64, step: f64 },
    /// The boundaries `m_k` of a suited decomposition.
    Boundaries(Arc<SuitedDecomposition>),
    /// The marker levels `t_k` of a suited decomposition.
    Markers(Arc<SuitedDecomposition>),
    /// Every `stride`-th level of `inner`: `b_k = inner_{k·stride}`.
    Stride { inner: Box<Bands>, stride: i64 },
}

impl Bands {
    pub fn arithmetic(origin: f64, step: f64) -> Result<Self> {
        if origin.is_finite() && step.is_finite() && step > 0.0 {
            Ok(Bands::Arithmetic { origin, step })
        } else {
            Err(Error::InvalidArgument(format!("bands with origin {origin} and step {step}")))
        }
    }

    /// Groups of `stride` consecutive bands.
    pub fn stride(&self, stride: i64) -> Result<Self> {
        match stride {
            s if s < 1 => Err(Error::InvalidArgument(format!("stride {s}"))),
            1 => Ok(self.clone()),
            s => Ok(Bands::Stride {
                inner: Box::new(self.clone()),
                stride: s,
            }),
        }
    }

    pub fn suited(&self) -> Option<&Arc<SuitedDecomposition>> {
        match self {
            Bands::Arithmetic { .. } => None,
            Bands::Boundaries(s) | Bands::Markers(s) => Some(s),
            Bands::Stride { inner, .. } => inner.suited(),
        }
    }

    /// `b_k`.
    pub fn level(&self, k: i64) -> Result<f64> {
        match self {
            Bands::Arithmetic { origin, step } => Ok(origin + k as f64 * step),
            Bands::Boundaries(s) => s.boundary(k),
            Bands::Markers(s) => s.marker(k),
            Bands::Stride { inner, stride } => inner.level(k * stride),
        }
    }

    /// The `k` with `b_k <= t < b_{k+1}`.
    pub fn locate(&self, t: f64) -> Result<i64> {
        if !t.is_finite() {
            return Err(Error::NonFinite);
        }
        match self {
            Bands::Arithmetic { origin, step } => {
                let mut k = ((t - origin) / step).floor() as i64;
                while self.level(k)? > t {
                    k -= 1;
                }
                while self.level(k + 1)? <= t {
                    k += 1;
                }
                Ok(k)
            }
            Bands::Boundaries(s) => s.locate_boundary(t),
            Bands::Markers(s) => s.locate_marker(t),
            Bands::Stride { inner, stride } => Ok(inner.locate(t)?.div_euclid(*stride)),
        }
    }

    /// Sends band `k` affinely onto band `k + 1`, angle untouched. Every
    /// `b_k` goes to `b_{k+1}` bit-exactly.
    pub(crate) fn shift(&self, p: CPoint, inverse: bool) -> Result<CPoint> {
        let k = self.locate(p.t)?;
        let (from, to) = if inverse {
            ((k, k + 1), (k - 1, k))
        } else {
            ((k, k + 1), (k + 1, k + 2))
        };
        let (a0, a1) = (self.level(from.0)?, self.level(from.1)?);
        let (b0, b1) = (self.level(to.0)?, self.level(to.1)?);
        Ok(CPoint {
            theta: p.theta,
            t: b0 + ((p.t - a0) * (b1 - b0)) / (a1 - a0),
        })
    }
}
