//! Certificate documents.
//!
//! Factor maps share large subtrees (`g`, `f`, the suited lattices), so they
//! are written as a node table in dependency order: every node refers to its
//! children by index, and each shared subtree appears once. Derived nodes are
//! stored as the inputs they are rebuilt from: a straightener product as its
//! map, suited lattice and shape; a conjugator as its two loxodromic
//! certificates. Lattices are stored as materialized at the time of writing
//! and extend deterministically on reload.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use homeocomm::factor::StraightenerFamily;
use homeocomm::homeo::{BumpProfile, FiberBump, MonotoneCubic, Node, PlFunction, PlMap};
use homeocomm::{
    conjugator, Bands, Conjugacy, End, Evidence, FactorizationCertificate, Factors, FiberKind, GraphCurve, KnotShape,
    LatticeSnapshot, LoxodromicCertificate, MapExpr, PowerTerm, Settings, StraightenerShape, SuitedDecomposition,
    SuitedParams, VerificationReport, WorstPoint,
};

use crate::error::CliError;
use crate::spec::{Fiber, SpecDocument};
use crate::SCHEMA;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateDocument {
    pub schema: String,
    pub spec: SpecDocument,
    pub settings: SettingsDoc,
    pub suited: Vec<SuitedDoc>,
    pub nodes: Vec<NodeDoc>,
    /// Index of the input map in `nodes`.
    pub input: usize,
    pub factors: FactorsDoc,
    pub evidence: EvidenceDoc,
    pub report: ReportDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SettingsDoc {
    pub fiber: Fiber,
    pub window: [f64; 2],
    pub grid: [usize; 2],
    pub tolerance: f64,
    pub transport_tolerance: f64,
    pub suited: ParamsDoc,
    pub straightener: ShapeDoc,
    pub iterations: usize,
    pub samples: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsDoc {
    pub t0: i64,
    pub margin: f64,
    pub resolution: usize,
    pub horizon: i64,
    pub search_window: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShapeDoc {
    Linear,
    Tangent,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuitedDoc {
    pub map: usize,
    pub params: ParamsDoc,
    pub first: i64,
    pub boundaries: Vec<i64>,
    pub markers: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum NodeDoc {
    Identity,
    VerticalPl {
        breakpoints: Vec<[f64; 2]>,
    },
    Twist {
        alpha: Vec<[f64; 2]>,
    },
    FiberBump {
        lower: f64,
        upper: f64,
        tracks: Vec<Vec<[f64; 2]>>,
    },
    /// A bump sending a sampled curve to a level.
    GraphBump {
        lower: f64,
        upper: f64,
        curve: Vec<f64>,
        target: f64,
        knot: KnotDoc,
    },
    MonotoneSmooth {
        knots: Vec<[f64; 2]>,
        c1_tails: bool,
    },
    Compose {
        children: Vec<usize>,
    },
    Inverse {
        child: usize,
    },
    BandShift {
        bands: BandsDoc,
    },
    Straighteners {
        map: usize,
        suited: usize,
        shape: ShapeDoc,
    },
    Conjugator {
        sigma: LoxodromicDoc,
        tau: LoxodromicDoc,
        resolution: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum KnotDoc {
    Linear,
    Rational { below: f64, above: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BandsDoc {
    Arithmetic { origin: f64, step: f64 },
    Boundaries { suited: usize },
    Markers { suited: usize },
    Stride { inner: Box<BandsDoc>, stride: i64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EndDoc {
    Plus,
    Minus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoxodromicDoc {
    pub map: usize,
    pub bands: BandsDoc,
    pub sink: EndDoc,
    pub source: EndDoc,
    pub dynamics: ReportDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FactorsDoc {
    Commutator { a: usize, b: usize },
    PowerWord { terms: Vec<TermDoc> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDoc {
    pub root: usize,
    pub exponent: i64,
    #[serde(with = "real")]
    pub displacement: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvidenceDoc {
    pub loxodromic: Vec<LoxodromicDoc>,
    pub conjugacies: Vec<ConjugacyDoc>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConjugacyDoc {
    pub conjugator: usize,
    pub sigma: usize,
    pub tau: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportDoc {
    pub window: [f64; 2],
    pub grid: [usize; 2],
    pub tolerance: f64,
    #[serde(with = "real")]
    pub max_error: f64,
    pub failures: Vec<WorstDoc>,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorstDoc {
    pub theta: f64,
    pub t: f64,
    #[serde(with = "real")]
    pub error: f64,
}

/// Errors may be infinite (an evaluation that failed); JSON has no infinity,
/// so non-finite values are written as strings.
mod real {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Real {
        Number(f64),
        Text(String),
    }

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        if x.is_finite() {
            s.serialize_f64(*x)
        } else if x.is_nan() {
            s.serialize_str("nan")
        } else if *x > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Real::deserialize(d)? {
            Real::Number(x) => Ok(x),
            Real::Text(t) => match t.as_str() {
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                other => Err(serde::de::Error::custom(format!("not a number: {other}"))),
            },
        }
    }
}

impl From<SuitedParams> for ParamsDoc {
    fn from(p: SuitedParams) -> Self {
        ParamsDoc {
            t0: p.t0,
            margin: p.margin,
            resolution: p.resolution,
            horizon: p.horizon,
            search_window: p.search_window,
        }
    }
}

impl From<ParamsDoc> for SuitedParams {
    fn from(p: ParamsDoc) -> Self {
        SuitedParams {
            t0: p.t0,
            margin: p.margin,
            resolution: p.resolution,
            horizon: p.horizon,
            search_window: p.search_window,
        }
    }
}

impl From<StraightenerShape> for ShapeDoc {
    fn from(s: StraightenerShape) -> Self {
        match s {
            StraightenerShape::Linear => ShapeDoc::Linear,
            StraightenerShape::Tangent => ShapeDoc::Tangent,
        }
    }
}

impl From<ShapeDoc> for StraightenerShape {
    fn from(s: ShapeDoc) -> Self {
        match s {
            ShapeDoc::Linear => StraightenerShape::Linear,
            ShapeDoc::Tangent => StraightenerShape::Tangent,
        }
    }
}

impl From<End> for EndDoc {
    fn from(e: End) -> Self {
        match e {
            End::Plus => EndDoc::Plus,
            End::Minus => EndDoc::Minus,
        }
    }
}

impl From<EndDoc> for End {
    fn from(e: EndDoc) -> Self {
        match e {
            EndDoc::Plus => End::Plus,
            EndDoc::Minus => End::Minus,
        }
    }
}

impl From<&Settings> for SettingsDoc {
    fn from(s: &Settings) -> Self {
        SettingsDoc {
            fiber: s.fiber.into(),
            window: [s.window.0, s.window.1],
            grid: [s.grid.0, s.grid.1],
            tolerance: s.tolerance,
            transport_tolerance: s.transport_tolerance,
            suited: s.suited.into(),
            straightener: s.straightener.into(),
            iterations: s.iterations,
            samples: s.samples,
        }
    }
}

impl From<&SettingsDoc> for Settings {
    fn from(s: &SettingsDoc) -> Self {
        Settings {
            fiber: s.fiber.into(),
            window: (s.window[0], s.window[1]),
            grid: (s.grid[0], s.grid[1]),
            tolerance: s.tolerance,
            transport_tolerance: s.transport_tolerance,
            suited: s.suited.into(),
            straightener: s.straightener.into(),
            iterations: s.iterations,
            samples: s.samples,
        }
    }
}

impl From<&VerificationReport> for ReportDoc {
    fn from(r: &VerificationReport) -> Self {
        ReportDoc {
            window: [r.window.0, r.window.1],
            grid: [r.grid.0, r.grid.1],
            tolerance: r.tolerance,
            max_error: r.max_error,
            failures: r
                .failures
                .iter()
                .map(|w| WorstDoc {
                    theta: w.theta,
                    t: w.t,
                    error: w.error,
                })
                .collect(),
            pass: r.pass,
        }
    }
}

impl From<&ReportDoc> for VerificationReport {
    fn from(r: &ReportDoc) -> Self {
        VerificationReport {
            window: (r.window[0], r.window[1]),
            grid: (r.grid[0], r.grid[1]),
            tolerance: r.tolerance,
            max_error: r.max_error,
            failures: r
                .failures
                .iter()
                .map(|w| WorstPoint {
                    theta: w.theta,
                    t: w.t,
                    error: w.error,
                })
                .collect(),
            pass: r.pass,
        }
    }
}

fn pairs_doc(it: impl Iterator<Item = (f64, f64)>) -> Vec<[f64; 2]> {
    it.map(|(a, b)| [a, b]).collect()
}

fn pairs(v: &[[f64; 2]]) -> Vec<(f64, f64)> {
    v.iter().map(|&[a, b]| (a, b)).collect()
}

#[derive(Default)]
struct Encoder {
    nodes: Vec<NodeDoc>,
    node_ids: HashMap<*const Node, usize>,
    suited: Vec<SuitedDoc>,
    suited_ids: HashMap<*const SuitedDecomposition, usize>,
}

impl Encoder {
    fn map(&mut self, m: &MapExpr) -> usize {
        if let Some(&id) = self.node_ids.get(&m.addr()) {
            return id;
        }
        let doc = match m.node() {
            Node::Identity => NodeDoc::Identity,
            Node::VerticalPl(pl) => NodeDoc::VerticalPl {
                breakpoints: pairs_doc(pl.breakpoints()),
            },
            Node::Twist(alpha) => NodeDoc::Twist {
                alpha: pairs_doc(alpha.knots()),
            },
            Node::FiberBump(b) => {
                let (lower, upper) = b.band();
                match b.profile() {
                    BumpProfile::Tracks(tracks) => NodeDoc::FiberBump {
                        lower,
                        upper,
                        tracks: tracks.iter().map(|t| pairs_doc(t.iter().copied())).collect(),
                    },
                    BumpProfile::Graph { curve, target, shape } => NodeDoc::GraphBump {
                        lower,
                        upper,
                        curve: curve.values().to_vec(),
                        target: *target,
                        knot: match *shape {
                            KnotShape::Linear => KnotDoc::Linear,
                            KnotShape::Rational { below, above } => KnotDoc::Rational { below, above },
                        },
                    },
                }
            }
            Node::MonotoneSmooth(c) => NodeDoc::MonotoneSmooth {
                knots: pairs_doc(c.knots()),
                c1_tails: c.c1_tails(),
            },
            Node::Compose(cs) => NodeDoc::Compose {
                children: cs.iter().map(|c| self.map(c)).collect(),
            },
            Node::Inverse(c) => NodeDoc::Inverse { child: self.map(c) },
            Node::BandShift(bands) => NodeDoc::BandShift {
                bands: self.bands(bands),
            },
            Node::StraightenerProduct(h) => NodeDoc::Straighteners {
                map: self.map(h.map()),
                suited: self.suited(h.suited()),
                shape: h.shape().into(),
            },
            Node::Conjugator(c) => NodeDoc::Conjugator {
                sigma: self.loxodromic(c.sigma()),
                tau: self.loxodromic(c.tau()),
                resolution: c.resolution(),
            },
        };
        let id = self.nodes.len();
        self.nodes.push(doc);
        self.node_ids.insert(m.addr(), id);
        id
    }

    fn suited(&mut self, s: &Arc<SuitedDecomposition>) -> usize {
        if let Some(&id) = self.suited_ids.get(&Arc::as_ptr(s)) {
            return id;
        }
        let map = self.map(s.map());
        let LatticeSnapshot {
            first,
            boundaries,
            markers,
        } = s.snapshot();
        let id = self.suited.len();
        self.suited.push(SuitedDoc {
            map,
            params: s.params().into(),
            first,
            boundaries,
            markers,
        });
        self.suited_ids.insert(Arc::as_ptr(s), id);
        id
    }

    fn bands(&mut self, b: &Bands) -> BandsDoc {
        match b {
            Bands::Arithmetic { origin, step } => BandsDoc::Arithmetic {
                origin: *origin,
                step: *step,
            },
            Bands::Boundaries(s) => BandsDoc::Boundaries { suited: self.suited(s) },
            Bands::Markers(s) => BandsDoc::Markers { suited: self.suited(s) },
            Bands::Stride { inner, stride } => BandsDoc::Stride {
                inner: Box::new(self.bands(inner)),
                stride: *stride,
            },
        }
    }

    fn loxodromic(&mut self, c: &LoxodromicCertificate) -> LoxodromicDoc {
        LoxodromicDoc {
            map: self.map(&c.map),
            bands: self.bands(&c.bands),
            sink: c.sink.into(),
            source: c.source.into(),
            dynamics: (&c.dynamics).into(),
        }
    }
}

impl CertificateDocument {
    pub fn encode(cert: &FactorizationCertificate, spec: &SpecDocument) -> Self {
        let mut enc = Encoder::default();
        let input = enc.map(&cert.input);
        let factors = match &cert.factors {
            Factors::Commutator { a, b } => FactorsDoc::Commutator {
                a: enc.map(a),
                b: enc.map(b),
            },
            Factors::PowerWord { terms } => FactorsDoc::PowerWord {
                terms: terms
                    .iter()
                    .map(|t| TermDoc {
                        root: enc.map(&t.root),
                        exponent: t.exponent,
                        displacement: t.displacement,
                    })
                    .collect(),
            },
        };
        let evidence = EvidenceDoc {
            loxodromic: cert.evidence.loxodromic.iter().map(|c| enc.loxodromic(c)).collect(),
            conjugacies: cert
                .evidence
                .conjugacies
                .iter()
                .map(|c| ConjugacyDoc {
                    conjugator: enc.map(&c.conjugator),
                    sigma: enc.map(&c.sigma),
                    tau: enc.map(&c.tau),
                })
                .collect(),
        };
        CertificateDocument {
            schema: SCHEMA.into(),
            spec: spec.clone(),
            settings: (&cert.settings).into(),
            suited: enc.suited,
            nodes: enc.nodes,
            input,
            factors,
            evidence,
            report: (&cert.report).into(),
        }
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let doc: CertificateDocument =
            serde_json::from_str(text).map_err(|e| CliError::Certificate(e.to_string()))?;
        if doc.schema != SCHEMA {
            return Err(CliError::Certificate(format!("unsupported schema {:?}", doc.schema)));
        }
        Ok(doc)
    }

    pub fn to_canonical(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("certificates serialize");
        s.push('\n');
        s
    }

    /// Rebuilds every map. Reports are taken as written; `verify` recomputes them.
    pub fn decode(&self) -> Result<FactorizationCertificate, CliError> {
        let settings = Settings::from(&self.settings);
        let mut dec = Decoder {
            doc: self,
            fiber: settings.fiber,
            maps: Vec::with_capacity(self.nodes.len()),
            suited: vec![None; self.suited.len()],
        };
        for node in &self.nodes {
            let m = dec.node(node).map_err(|e| match e {
                CliError::Core(e) => CliError::Certificate(e.to_string()),
                e => e,
            })?;
            dec.maps.push(m);
        }
        let factors = match &self.factors {
            FactorsDoc::Commutator { a, b } => Factors::Commutator {
                a: dec.map(*a)?,
                b: dec.map(*b)?,
            },
            FactorsDoc::PowerWord { terms } => Factors::PowerWord {
                terms: terms
                    .iter()
                    .map(|t| {
                        Ok(PowerTerm {
                            root: dec.map(t.root)?,
                            exponent: t.exponent,
                            displacement: t.displacement,
                        })
                    })
                    .collect::<Result<_, CliError>>()?,
            },
        };
        let evidence = Evidence {
            loxodromic: self
                .evidence
                .loxodromic
                .iter()
                .map(|c| dec.loxodromic(c))
                .collect::<Result<_, _>>()?,
            conjugacies: self
                .evidence
                .conjugacies
                .iter()
                .map(|c| {
                    Ok(Conjugacy {
                        conjugator: dec.map(c.conjugator)?,
                        sigma: dec.map(c.sigma)?,
                        tau: dec.map(c.tau)?,
                    })
                })
                .collect::<Result<_, CliError>>()?,
        };
        Ok(FactorizationCertificate {
            input: dec.map(self.input)?,
            fiber: settings.fiber,
            factors,
            settings,
            report: (&self.report).into(),
            evidence,
        })
    }

    /// The suited decomposition behind the first piece of loxodromic evidence.
    pub fn lattice(&self) -> Option<&SuitedDoc> {
        self.suited.first()
    }
}

struct Decoder<'a> {
    doc: &'a CertificateDocument,
    fiber: FiberKind,
    maps: Vec<MapExpr>,
    suited: Vec<Option<Arc<SuitedDecomposition>>>,
}

impl Decoder<'_> {
    /// Only already decoded nodes may be referenced, which rules out cycles.
    fn map(&self, id: usize) -> Result<MapExpr, CliError> {
        self.maps
            .get(id)
            .cloned()
            .ok_or_else(|| CliError::Certificate(format!("node {id} referenced before it is defined")))
    }

    fn suited(&mut self, id: usize) -> Result<Arc<SuitedDecomposition>, CliError> {
        let doc = self
            .doc
            .suited
            .get(id)
            .ok_or_else(|| CliError::Certificate(format!("no suited lattice {id}")))?;
        if let Some(s) = &self.suited[id] {
            return Ok(s.clone());
        }
        let snapshot = LatticeSnapshot {
            first: doc.first,
            boundaries: doc.boundaries.clone(),
            markers: doc.markers.clone(),
        };
        let s = SuitedDecomposition::from_lattice(&self.map(doc.map)?, self.fiber, doc.params.into(), &snapshot)?;
        self.suited[id] = Some(s.clone());
        Ok(s)
    }

    fn bands(&mut self, b: &BandsDoc) -> Result<Bands, CliError> {
        Ok(match b {
            BandsDoc::Arithmetic { origin, step } => Bands::arithmetic(*origin, *step)?,
            BandsDoc::Boundaries { suited } => Bands::Boundaries(self.suited(*suited)?),
            BandsDoc::Markers { suited } => Bands::Markers(self.suited(*suited)?),
            BandsDoc::Stride { inner, stride } => self.bands(inner)?.stride(*stride)?,
        })
    }

    fn loxodromic(&mut self, c: &LoxodromicDoc) -> Result<LoxodromicCertificate, CliError> {
        Ok(LoxodromicCertificate {
            map: self.map(c.map)?,
            bands: self.bands(&c.bands)?,
            fiber: self.fiber,
            sink: c.sink.into(),
            source: c.source.into(),
            dynamics: (&c.dynamics).into(),
        })
    }

    fn node(&mut self, node: &NodeDoc) -> Result<MapExpr, CliError> {
        Ok(match node {
            NodeDoc::Identity => MapExpr::identity(),
            NodeDoc::VerticalPl { breakpoints } => {
                MapExpr::from_node(Node::VerticalPl(PlMap::new(&pairs(breakpoints))?))
            }
            NodeDoc::Twist { alpha } => MapExpr::twist(PlFunction::new(&pairs(alpha))?),
            NodeDoc::FiberBump { lower, upper, tracks } => {
                let tracks = tracks.iter().map(|t| pairs(t)).collect();
                MapExpr::fiber_bump(FiberBump::new(*lower, *upper, tracks)?)
            }
            NodeDoc::GraphBump {
                lower,
                upper,
                curve,
                target,
                knot,
            } => {
                let curve = match (self.fiber, curve.as_slice()) {
                    (FiberKind::Point, [level]) => GraphCurve::constant(FiberKind::Point, *level),
                    _ => GraphCurve::from_samples(curve.clone())?,
                };
                let shape = match *knot {
                    KnotDoc::Linear => KnotShape::Linear,
                    KnotDoc::Rational { below, above } => KnotShape::Rational { below, above },
                };
                MapExpr::fiber_bump(FiberBump::graph(*lower, *upper, Arc::new(curve), *target, shape)?)
            }
            NodeDoc::MonotoneSmooth { knots, c1_tails } => {
                MapExpr::monotone_smooth(MonotoneCubic::new(&pairs(knots), *c1_tails)?)
            }
            NodeDoc::Compose { children } => MapExpr::from_node(Node::Compose(
                children.iter().map(|&c| self.map(c)).collect::<Result<_, _>>()?,
            )),
            NodeDoc::Inverse { child } => MapExpr::from_node(Node::Inverse(self.map(*child)?)),
            NodeDoc::BandShift { bands } => MapExpr::band_shift(self.bands(bands)?),
            NodeDoc::Straighteners { map, suited, shape } => {
                let family = StraightenerFamily::new(&self.map(*map)?, &self.suited(*suited)?, (*shape).into());
                MapExpr::from_node(Node::StraightenerProduct(Arc::new(family)))
            }
            NodeDoc::Conjugator { sigma, tau, resolution } => {
                let sigma = self.loxodromic(sigma)?;
                let tau = self.loxodromic(tau)?;
                conjugator(&sigma, &tau, *resolution)?
            }
        })
    }
}
