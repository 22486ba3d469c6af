//! The band shift `g′`, the straighteners `h_k`, and `g = h ∘ g′`.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use crate::error::{Error, Result};
use crate::homeo::{compose, level_image, CPoint, FiberBump, FiberKind, GraphCurve, KnotShape, MapExpr, Node};
use crate::settings::{Settings, StraightenerShape};
use crate::suited::{certify_loxodromic, Bands, LoxodromicCertificate, SuitedDecomposition};

/// `g′`: each band `[m_k, m_{k+1}]` onto `[m_{k+1}, m_{k+2}]`, affinely in the
/// level and trivially in the angle.
pub fn build_vertical_shift(suited: &Arc<SuitedDecomposition>) -> MapExpr {
    MapExpr::band_shift(Bands::Boundaries(suited.clone()))
}

/// Fiberwise PL map of `[lower, upper]` with breakpoint `(γ(θ), target)`.
///
/// The curve must clear both edges by `margin`; the target must lie in the
/// open band. A curve that already sits at the target gives the identity.
pub fn build_straightener(curve: Arc<GraphCurve>, band: (f64, f64), target: f64, margin: f64) -> Result<MapExpr> {
    build_shaped_straightener(curve, band, target, margin, KnotShape::Linear)
}

/// [`build_straightener`] with another interpolation through the same knots.
pub fn build_shaped_straightener(
    curve: Arc<GraphCurve>,
    band: (f64, f64),
    target: f64,
    margin: f64,
    shape: KnotShape,
) -> Result<MapExpr> {
    let (lower, upper) = band;
    let (lo, hi) = (curve.min(), curve.max());
    if !(lo > lower + margin && hi < upper - margin) {
        return Err(Error::BandViolation {
            lower,
            upper,
            detail: format!("curve spans [{lo}, {hi}] with margin {margin}"),
        });
    }
    if !(target > lower && target < upper) {
        return Err(Error::BandViolation {
            lower,
            upper,
            detail: format!("target level {target}"),
        });
    }
    if curve.is_constant() && lo == target && shape.is_flat() {
        return Ok(MapExpr::identity());
    }
    Ok(MapExpr::fiber_bump(FiberBump::graph(lower, upper, curve, target, shape)?))
}

/// The straighteners `h_k`, one per band, built on first use.
///
/// `h_k` lives on `A_{k+1} = [m_{k+1}, m_{k+2}]` and flattens the curve
/// `g′(f(Σ_k))` onto the marker level `t_{k+1}`. Supports are disjoint, so
/// the product is evaluated by locating the band and applying one factor.
pub struct StraightenerFamily {
    map: MapExpr,
    suited: Arc<SuitedDecomposition>,
    shifted: MapExpr,
    shape: StraightenerShape,
    cache: RwLock<HashMap<i64, MapExpr>>,
}

impl StraightenerFamily {
    pub fn new(f: &MapExpr, suited: &Arc<SuitedDecomposition>, shape: StraightenerShape) -> Self {
        let shift = build_vertical_shift(suited);
        StraightenerFamily {
            map: f.clone(),
            suited: suited.clone(),
            shifted: compose(&[shift, f.clone()]).expect("band shift acts on every fiber"),
            shape,
            cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn map(&self) -> &MapExpr {
        &self.map
    }

    pub fn suited(&self) -> &Arc<SuitedDecomposition> {
        &self.suited
    }

    pub fn fiber(&self) -> FiberKind {
        self.suited.fiber()
    }

    pub fn shape(&self) -> StraightenerShape {
        self.shape
    }

    /// `h_k`, supported in `(m_{k+1}, m_{k+2})`.
    pub fn straightener(&self, k: i64) -> Result<MapExpr> {
        if let Some(h) = self.cache.read().expect("straightener cache").get(&k) {
            return Ok(h.clone());
        }
        let s = &self.suited;
        let params = s.params();
        let curve = level_image(&self.shifted, s.marker(k)?, s.fiber(), params.resolution)?;
        let (m0, m1, m2) = (s.boundary(k)?, s.boundary(k + 1)?, s.boundary(k + 2)?);
        // g′ rescales the margin along with the band; keep half of it as slack
        // against rounding.
        let margin = 0.5 * params.margin * ((m2 - m1) / (m1 - m0)).min(1.0);
        let knot = match self.shape {
            StraightenerShape::Linear => KnotShape::Linear,
            StraightenerShape::Tangent => self.knot_slopes(k)?,
        };
        let h = build_shaped_straightener(Arc::new(curve), (m1, m2), s.marker(k + 1)?, margin, knot)?;
        let mut cache = self.cache.write().expect("straightener cache");
        Ok(cache.entry(k).or_insert(h).clone())
    }

    /// Knot slopes making `g ∘ f` carry marker band `k` to band `k + 1` with
    /// unit relative slope at `t_k` from either side.
    ///
    /// `g′` contributes the boundary band ratio and `f` its one-sided slopes at
    /// the marker; on the cylinder the vertical slope of `f` is taken as 1.
    fn knot_slopes(&self, k: i64) -> Result<KnotShape> {
        let s = &self.suited;
        let (t0, t1, t2) = (s.marker(k)?, s.marker(k + 1)?, s.marker(k + 2)?);
        let (m0, m1, m2) = (s.boundary(k)?, s.boundary(k + 1)?, s.boundary(k + 2)?);
        let base = ((t2 - t1) / (t1 - t0)) * ((m1 - m0) / (m2 - m1));
        let (left, right) = match s.fiber() {
            FiberKind::Point => {
                let step = SLOPE_STEP * t0.abs().max(1.0);
                let y = self.map.level(t0)?;
                (
                    (y - self.map.level(t0 - step)?) / step,
                    (self.map.level(t0 + step)? - y) / step,
                )
            }
            FiberKind::Circle => (1.0, 1.0),
        };
        let slope = |d: f64| (base / d).clamp(1.0 / SLOPE_LIMIT, SLOPE_LIMIT);
        Ok(KnotShape::Rational {
            below: slope(left),
            above: slope(right),
        })
    }

    pub(crate) fn apply(&self, p: CPoint, inverse: bool) -> Result<CPoint> {
        let band = self.suited.locate_boundary(p.t)?;
        if p.t == self.suited.boundary(band)? {
            return Ok(p);
        }
        self.straightener(band - 1)?.apply(p, inverse)
    }
}

const SLOPE_STEP: f64 = 1.0 / 1048576.0;
const SLOPE_LIMIT: f64 = 1e3;

/// `g` together with loxodromic certificates for `g` (bands `A_k`) and for
/// `g ∘ f` (bands between consecutive marker levels).
#[derive(Debug, Clone)]
pub struct Assembled {
    pub g: MapExpr,
    pub g_cert: LoxodromicCertificate,
    pub gf_cert: LoxodromicCertificate,
}

pub fn assemble_g(f: &MapExpr, suited: &Arc<SuitedDecomposition>, settings: &Settings) -> Result<Assembled> {
    let shift = build_vertical_shift(suited);
    let h = MapExpr::from_node(Node::StraightenerProduct(Arc::new(StraightenerFamily::new(f, suited, settings.straightener))));
    let g = compose(&[h, shift])?;
    let gf = compose(&[g.clone(), f.clone()])?;
    let fiber = suited.fiber();
    let g_cert = certify_loxodromic(&g, &Bands::Boundaries(suited.clone()), fiber, settings)?;
    let gf_cert = certify_loxodromic(&gf, &Bands::Markers(suited.clone()), fiber, settings)?;
    Ok(Assembled { g, g_cert, gf_cert })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homeo::PlFunction;
    use crate::suited::{build_suited, SuitedParams};
    use std::f64::consts::TAU;

    #[test]
    fn point_straightener_is_the_pl_map() {
        let curve = Arc::new(GraphCurve::constant(FiberKind::Point, 3.0));
        let h = build_straightener(curve, (2.0, 5.0), 4.0, 0.25).unwrap();
        assert_eq!(h.level(3.0).unwrap(), 4.0);
        assert_eq!(h.level(2.5).unwrap(), 3.0);
        for t in [2.0, 5.0, 1.0, -7.5, 5.0000001, 100.0] {
            assert_eq!(h.level(t).unwrap(), t);
        }
    }

    #[test]
    fn flat_curve_at_target_is_identity() {
        let curve = Arc::new(GraphCurve::constant(FiberKind::Circle, 4.0));
        assert!(build_straightener(curve, (2.0, 5.0), 4.0, 0.25).unwrap().is_identity());
    }

    #[test]
    fn flattens_a_cosine() {
        let n = 1024;
        let values = (0..n).map(|j| 3.0 + 0.5 * (TAU * j as f64 / n as f64).cos()).collect();
        let curve = Arc::new(GraphCurve::from_samples(values).unwrap());
        let h = build_straightener(curve.clone(), (2.0, 5.0), 4.0, 0.25).unwrap();
        for (theta, v) in curve.samples() {
            let q = h.eval(CPoint::new(theta, v)).unwrap();
            assert!((q.t - 4.0).abs() < 1e-12);
            assert_eq!(q.theta, theta);
        }
    }

    #[test]
    fn curve_outside_band_rejected() {
        let curve = Arc::new(GraphCurve::constant(FiberKind::Point, 4.9));
        assert!(matches!(
            build_straightener(curve, (2.0, 5.0), 4.0, 0.25),
            Err(Error::BandViolation { .. })
        ));
    }

    #[test]
    fn worked_translation_hits_markers() {
        let f = MapExpr::translation(1.0);
        let s = build_suited(&f, FiberKind::Point, SuitedParams::default()).unwrap();
        let a = assemble_g(&f, &s, &Settings::line()).unwrap();
        let gf = compose(&[a.g.clone(), f]).unwrap();
        assert_eq!(gf.level(0.0).unwrap(), 3.0);
        assert_eq!(gf.level(3.0).unwrap(), 6.0);
        assert_eq!(a.g.level(2.0).unwrap(), 5.0);
    }

    #[test]
    fn identity_needs_no_straightening() {
        let f = MapExpr::identity();
        let s = build_suited(&f, FiberKind::Point, SuitedParams::default()).unwrap();
        let family = StraightenerFamily::new(&f, &s, StraightenerShape::Tangent);
        for k in -3..=3 {
            assert!(family.straightener(k).unwrap().is_identity());
        }
        let a = assemble_g(&f, &s, &Settings::line()).unwrap();
        let shift = build_vertical_shift(&s);
        for i in 0..200 {
            let t = -20.0 + 0.2 * i as f64;
            assert_eq!(a.g.level(t).unwrap(), shift.level(t).unwrap());
        }
    }

    #[test]
    fn cylinder_markers_are_carried_to_markers() {
        let bump = FiberBump::new(
            -3.0,
            3.0,
            (0..64)
                .map(|j| vec![(0.0, 0.8 * (TAU * j as f64 / 64.0).sin())])
                .collect(),
        )
        .unwrap();
        let twist = PlFunction::new(&[(-4.0, 0.0), (0.0, 0.3), (4.0, 0.0)]).unwrap();
        let f = compose(&[MapExpr::twist(twist), MapExpr::fiber_bump(bump)]).unwrap();
        let s = build_suited(&f, FiberKind::Circle, SuitedParams::default()).unwrap();
        let settings = Settings::cylinder();
        let a = assemble_g(&f, &s, &settings).unwrap();
        let gf = compose(&[a.g.clone(), f]).unwrap();
        let (t0, t1) = (s.marker(0).unwrap(), s.marker(1).unwrap());
        for j in 0..256 {
            let q = gf.eval(CPoint::new(j as f64 / 256.0, t0)).unwrap();
            assert!((q.t - t1).abs() < 1e-6, "{} vs {t1}", q.t);
        }
    }
}
