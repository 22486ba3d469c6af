//! Spec documents: a fiber, a map tree and optional numerical settings.

use serde::{Deserialize, Serialize};

use homeocomm::homeo::{FiberBump, MonotoneCubic, Node, PlFunction};
use homeocomm::{compose, invert, FiberKind, MapExpr};

use crate::error::CliError;
use crate::SCHEMA;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Fiber {
    Point,
    Circle,
}

impl From<Fiber> for FiberKind {
    fn from(f: Fiber) -> Self {
        match f {
            Fiber::Point => FiberKind::Point,
            Fiber::Circle => FiberKind::Circle,
        }
    }
}

impl From<FiberKind> for Fiber {
    fn from(f: FiberKind) -> Self {
        match f {
            FiberKind::Point => Fiber::Point,
            FiberKind::Circle => Fiber::Circle,
        }
    }
}

/// A hand-writable map tree. Children of `compose` are applied right to left.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MapTree {
    Identity,
    VerticalPl { breakpoints: Vec<[f64; 2]> },
    /// Angle offset in turns as a piecewise-linear function of the level.
    Twist { alpha: Vec<[f64; 2]> },
    FiberBump {
        lower: f64,
        upper: f64,
        /// Interior breakpoints at equispaced angles.
        tracks: Vec<Vec<[f64; 2]>>,
    },
    MonotoneSmooth { knots: Vec<[f64; 2]>, c1_tails: bool },
    Compose { maps: Vec<MapTree> },
    Inverse { map: Box<MapTree> },
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<[f64; 2]>,
    /// Angle count and level count.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolution: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponents: Option<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecDocument {
    pub schema: String,
    pub fiber: Fiber,
    pub map: MapTree,
    #[serde(default)]
    pub options: Options,
}

impl SpecDocument {
    pub fn new(fiber: Fiber, map: MapTree) -> Self {
        SpecDocument {
            schema: SCHEMA.into(),
            fiber,
            map,
            options: Options::default(),
        }
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let doc: SpecDocument = serde_json::from_str(text).map_err(|e| CliError::Spec(e.to_string()))?;
        if doc.schema != SCHEMA {
            return Err(CliError::Spec(format!("unsupported schema {:?}", doc.schema)));
        }
        Ok(doc)
    }

    /// Canonical text: pretty JSON in declaration order, newline terminated.
    pub fn to_canonical(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("spec documents serialize");
        s.push('\n');
        s
    }

    pub fn build(&self) -> Result<MapExpr, CliError> {
        self.map.build().map_err(|e| CliError::Spec(e.to_string()))
    }
}

fn pairs(v: &[[f64; 2]]) -> Vec<(f64, f64)> {
    v.iter().map(|&[a, b]| (a, b)).collect()
}

impl MapTree {
    pub fn build(&self) -> homeocomm::Result<MapExpr> {
        Ok(match self {
            MapTree::Identity => MapExpr::identity(),
            MapTree::VerticalPl { breakpoints } => MapExpr::vertical_pl(&pairs(breakpoints))?,
            MapTree::Twist { alpha } => MapExpr::twist(PlFunction::new(&pairs(alpha))?),
            MapTree::FiberBump { lower, upper, tracks } => {
                let tracks = tracks.iter().map(|t| pairs(t)).collect();
                MapExpr::fiber_bump(FiberBump::new(*lower, *upper, tracks)?)
            }
            MapTree::MonotoneSmooth { knots, c1_tails } => {
                MapExpr::monotone_smooth(MonotoneCubic::new(&pairs(knots), *c1_tails)?)
            }
            MapTree::Compose { maps } => {
                let built = maps.iter().map(MapTree::build).collect::<homeocomm::Result<Vec<_>>>()?;
                compose(&built)?
            }
            MapTree::Inverse { map } => invert(&map.build()?),
        })
    }

    /// The tree of a primitive-only map; `None` once derived nodes appear.
    pub fn from_expr(m: &MapExpr) -> Option<MapTree> {
        let collect = |it: &mut dyn Iterator<Item = (f64, f64)>| it.map(|(a, b)| [a, b]).collect::<Vec<_>>();
        Some(match m.node() {
            Node::Identity => MapTree::Identity,
            Node::VerticalPl(pl) => MapTree::VerticalPl {
                breakpoints: collect(&mut pl.breakpoints()),
            },
            Node::Twist(alpha) => MapTree::Twist {
                alpha: collect(&mut alpha.knots()),
            },
            Node::FiberBump(b) => match b.profile() {
                homeocomm::homeo::BumpProfile::Tracks(tracks) => MapTree::FiberBump {
                    lower: b.band().0,
                    upper: b.band().1,
                    tracks: tracks.iter().map(|t| t.iter().map(|&(x, y)| [x, y]).collect()).collect(),
                },
                homeocomm::homeo::BumpProfile::Graph { .. } => return None,
            },
            Node::MonotoneSmooth(c) => MapTree::MonotoneSmooth {
                knots: collect(&mut c.knots()),
                c1_tails: c.c1_tails(),
            },
            Node::Compose(cs) => MapTree::Compose {
                maps: cs.iter().map(MapTree::from_expr).collect::<Option<_>>()?,
            },
            Node::Inverse(c) => MapTree::Inverse {
                map: Box::new(MapTree::from_expr(c)?),
            },
            Node::BandShift(_) | Node::StraightenerProduct(_) | Node::Conjugator(_) => return None,
        })
    }
}
