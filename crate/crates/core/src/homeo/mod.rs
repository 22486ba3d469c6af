//! Orientation-preserving homeomorphisms of `fiber × ℝ` as expression trees.
//!
//! A [`MapExpr`] is an immutable, cheaply clonable tree. Leaves are closed-form
//! primitives; interior nodes compose or invert. Evaluation happens on the
//! universal cover: the angle of a [`CPoint`] is carried as a real lift and only
//! reduced mod 1 by [`MapExpr::eval`]. Every primitive comes with its canonical
//! (identity-isotopic) lift, so the lift of a composite is well defined and
//! degree-1 maps satisfy `Θ(θ + 1) = Θ(θ) + 1`.
//!
//! Inversion is lazy: [`invert`] wraps the tree in an `Inverse` node and
//! evaluation dispatches to each primitive's own inverse, exact for the
//! piecewise-linear primitives and root-found for monotone cubics.

pub mod bump;
pub mod cubic;
pub mod curve;
pub mod metric;
pub mod orientation;
pub mod pl;

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::factor::conjugate::Conjugator;
use crate::factor::straighten::StraightenerFamily;
use crate::suited::Bands;

pub use bump::{BumpProfile, FiberBump, KnotShape};
pub use cubic::MonotoneCubic;
pub use curve::{level_image, GraphCurve};
pub use metric::sup_distance;
pub use orientation::{check_orientation, OrientationReport};
pub use pl::{PlFunction, PlMap};

/// The fiber of the space `fiber × ℝ` a map acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FiberKind {
    /// Singleton fiber; the space is the line.
    Point,
    /// The circle, in turns; the space is the cylinder.
    Circle,
}

/// A point of `fiber × ℝ`. For the point fiber `theta` is ignored and kept at 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CPoint {
    /// Angle in turns. Reduced to `[0, 1)` by [`MapExpr::eval`], a real lift otherwise.
    pub theta: f64,
    pub t: f64,
}

impl CPoint {
    pub const fn new(theta: f64, t: f64) -> Self {
        CPoint { theta, t }
    }

    pub const fn level(t: f64) -> Self {
        CPoint { theta: 0.0, t }
    }

    pub fn reduced(self) -> Self {
        CPoint {
            theta: reduce_turns(self.theta),
            t: self.t,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.theta.is_finite() && self.t.is_finite()
    }
}

/// `x mod 1` in `[0, 1)`.
pub fn reduce_turns(x: f64) -> f64 {
    let r = x.rem_euclid(1.0);
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

#[derive(Clone)]
pub enum Node {
    Identity,
    VerticalPl(PlMap),
    /// `(θ, t) ↦ (θ + α(t), t)`.
    Twist(PlFunction),
    FiberBump(FiberBump),
    MonotoneSmooth(MonotoneCubic),
    /// Children applied right to left.
    Compose(Vec<MapExpr>),
    Inverse(MapExpr),
    /// Affine identification of every band with its successor, `θ` untouched.
    BandShift(Bands),
    /// Product of disjointly supported straighteners, built on demand.
    StraightenerProduct(Arc<StraightenerFamily>),
    /// Conjugating map between two loxodromic maps, evaluated band by band.
    Conjugator(Arc<Conjugator>),
}

#[derive(Clone)]
pub struct MapExpr(Arc<Node>);

impl fmt::Debug for MapExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node() {
            Node::Identity => write!(f, "Identity"),
            Node::VerticalPl(pl) => f.debug_tuple("VerticalPl").field(pl).finish(),
            Node::Twist(a) => f.debug_tuple("Twist").field(a).finish(),
            Node::FiberBump(b) => f.debug_tuple("FiberBump").field(b).finish(),
            Node::MonotoneSmooth(c) => f.debug_tuple("MonotoneSmooth").field(c).finish(),
            Node::Compose(cs) => f.debug_tuple("Compose").field(cs).finish(),
            Node::Inverse(c) => f.debug_tuple("Inverse").field(c).finish(),
            Node::BandShift(b) => f.debug_tuple("BandShift").field(b).finish(),
            Node::StraightenerProduct(_) => write!(f, "StraightenerProduct(..)"),
            Node::Conjugator(_) => write!(f, "Conjugator(..)"),
        }
    }
}

impl MapExpr {
    pub fn from_node(node: Node) -> Self {
        MapExpr(Arc::new(node))
    }

    pub fn identity() -> Self {
        MapExpr::from_node(Node::Identity)
    }

    pub fn vertical_pl(breakpoints: &[(f64, f64)]) -> Result<Self> {
        Ok(MapExpr::from_node(Node::VerticalPl(PlMap::new(breakpoints)?)))
    }

    pub fn translation(offset: f64) -> Self {
        MapExpr::from_node(Node::VerticalPl(PlMap::translation(offset)))
    }

    pub fn twist(alpha: PlFunction) -> Self {
        MapExpr::from_node(Node::Twist(alpha))
    }

    pub fn fiber_bump(bump: FiberBump) -> Self {
        MapExpr::from_node(Node::FiberBump(bump))
    }

    pub fn monotone_smooth(cubic: MonotoneCubic) -> Self {
        MapExpr::from_node(Node::MonotoneSmooth(cubic))
    }

    pub fn band_shift(bands: Bands) -> Self {
        MapExpr::from_node(Node::BandShift(bands))
    }

    pub fn node(&self) -> &Node {
        &self.0
    }

    pub fn ptr_eq(&self, other: &MapExpr) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    /// Address of the shared node; equal for clones of the same tree.
    pub fn addr(&self) -> *const Node {
        Arc::as_ptr(&self.0)
    }

    /// Structural identity test; does not evaluate.
    pub fn is_identity(&self) -> bool {
        match self.node() {
            Node::Identity => true,
            Node::Compose(cs) => cs.iter().all(MapExpr::is_identity),
            Node::Inverse(c) => c.is_identity(),
            _ => false,
        }
    }

    /// The fiber this map is tied to, if any. Most primitives act on both.
    pub fn fiber_hint(&self) -> Option<FiberKind> {
        match self.node() {
            Node::Identity
            | Node::VerticalPl(_)
            | Node::MonotoneSmooth(_)
            | Node::BandShift(_) => None,
            Node::Twist(_) => Some(FiberKind::Circle),
            Node::FiberBump(b) => b.fiber_hint(),
            Node::Compose(cs) => cs.iter().find_map(MapExpr::fiber_hint),
            Node::Inverse(c) => c.fiber_hint(),
            Node::StraightenerProduct(h) => Some(h.fiber()),
            Node::Conjugator(c) => Some(c.fiber()),
        }
    }

    /// Image point with the angle reduced to `[0, 1)`.
    pub fn eval(&self, p: CPoint) -> Result<CPoint> {
        Ok(self.eval_lift(p)?.reduced())
    }

    /// Image point on the universal cover. Whole turns of the angle are split
    /// off and added back, so the lift commutes exactly with `θ ↦ θ + 1`
    /// wherever both angles are representable.
    pub fn eval_lift(&self, p: CPoint) -> Result<CPoint> {
        let turns = p.theta.floor();
        let q = self.apply(CPoint::new(p.theta - turns, p.t), false)?;
        Ok(CPoint::new(q.theta + turns, q.t))
    }

    /// Image of a level on the line.
    pub fn level(&self, t: f64) -> Result<f64> {
        Ok(self.apply(CPoint::level(t), false)?.t)
    }

    pub fn inverse(&self) -> MapExpr {
        invert(self)
    }

    /// `self^n`; negative powers iterate the inverse.
    pub fn power(&self, n: i64) -> MapExpr {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        match n.unsigned_abs() {
            0 => MapExpr::identity(),
            1 => base,
            k => MapExpr::from_node(Node::Compose(vec![base; k as usize])),
        }
    }

    pub(crate) fn apply(&self, p: CPoint, inverse: bool) -> Result<CPoint> {
        let q = match self.node() {
            Node::Identity => p,
            Node::VerticalPl(pl) => CPoint {
                theta: p.theta,
                t: if inverse { pl.inverse_at(p.t) } else { pl.at(p.t) },
            },
            Node::Twist(alpha) => {
                let a = alpha.at(p.t);
                CPoint {
                    theta: if inverse { p.theta - a } else { p.theta + a },
                    t: p.t,
                }
            }
            Node::FiberBump(b) => b.apply(p, inverse)?,
            Node::MonotoneSmooth(c) => CPoint {
                theta: p.theta,
                t: if inverse { c.inverse_at(p.t)? } else { c.at(p.t) },
            },
            Node::Compose(cs) => {
                let mut q = p;
                if inverse {
                    for c in cs.iter() {
                        q = c.apply(q, true)?;
                    }
                } else {
                    for c in cs.iter().rev() {
                        q = c.apply(q, false)?;
                    }
                }
                q
            }
            Node::Inverse(c) => c.apply(p, !inverse)?,
            Node::BandShift(bands) => bands.shift(p, inverse)?,
            Node::StraightenerProduct(h) => h.apply(p, inverse)?,
            Node::Conjugator(c) => c.apply(p, inverse)?,
        };
        if q.is_finite() {
            Ok(q)
        } else {
            Err(Error::NonFinite)
        }
    }
}

/// Evaluates `m` at `p`, angle reduced mod 1.
pub fn eval(m: &MapExpr, p: CPoint) -> Result<CPoint> {
    m.eval(p)
}

/// Lazy inverse. Double inverses and the identity collapse.
pub fn invert(m: &MapExpr) -> MapExpr {
    match m.node() {
        Node::Identity => m.clone(),
        Node::Inverse(c) => c.clone(),
        _ => MapExpr::from_node(Node::Inverse(m.clone())),
    }
}

/// `ms[0] ∘ ms[1] ∘ … ∘ ms[n-1]`, so the last map is applied first.
pub fn compose(ms: &[MapExpr]) -> Result<MapExpr> {
    let mut fiber = None;
    for m in ms {
        match (fiber, m.fiber_hint()) {
            (Some(a), Some(b)) if a != b => return Err(Error::FiberMismatch),
            (None, Some(b)) => fiber = Some(b),
            _ => {}
        }
    }
    Ok(match ms.len() {
        0 => MapExpr::identity(),
        1 => ms[0].clone(),
        _ => MapExpr::from_node(Node::Compose(ms.to_vec())),
    })
}

/// `a ∘ b ∘ a⁻¹ ∘ b⁻¹`.
pub fn commutator(a: &MapExpr, b: &MapExpr) -> Result<MapExpr> {
    compose(&[a.clone(), b.clone(), invert(a), invert(b)])
}
