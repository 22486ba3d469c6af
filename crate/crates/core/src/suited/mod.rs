//! Suited decompositions: integer band boundaries `m_k` and marker levels
//! `t_k` with `m_k < t_k < m_{k+1}`, such that the marker level and its image
//! sit inside the band `[m_k, m_{k+1}]` with a margin to spare.
//!
//! The lattice is grown greedily from the marker `t_0` and extended lazily,
//! one band at a time, whenever a caller asks for an index or level outside
//! the materialized range. Extension always appends at the ends, so the
//! result does not depend on the order of requests.

mod bands;
mod loxodromic;

use std::collections::VecDeque;
use std::fmt;
use std::sync::{Arc, RwLock};

use crate::error::{Error, Result};
use crate::homeo::{FiberKind, MapExpr};
use crate::verify::marker_extent;

pub use bands::Bands;
pub use loxodromic::{certify_loxodromic, End, LoxodromicCertificate};

/// Levels beyond this are treated as an escape to infinity.
const LEVEL_LIMIT: f64 = (1u64 << 50) as f64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuitedParams {
    /// Marker level of band 0.
    pub t0: i64,
    /// Required gap between the curves and the band edges.
    pub margin: f64,
    /// Angle samples per curve on the cylinder.
    pub resolution: usize,
    /// Largest band index, in absolute value, that may be materialized.
    pub horizon: i64,
    /// How far past the frontier a marker level is searched for.
    pub search_window: i64,
}

impl Default for SuitedParams {
    fn default() -> Self {
        SuitedParams {
            t0: 0,
            margin: 0.25,
            resolution: 1024,
            horizon: 4096,
            search_window: 10_000,
        }
    }
}

/// The materialized part of the lattice. Band `k` is
/// `[boundaries[k - first], boundaries[k - first + 1]]` with marker `markers[k - first]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeSnapshot {
    pub first: i64,
    pub boundaries: Vec<i64>,
    pub markers: Vec<i64>,
}

#[derive(Debug)]
struct Lattice {
    first: i64,
    m: VecDeque<i64>,
    t: VecDeque<i64>,
}

impl Lattice {
    fn last_band(&self) -> i64 {
        self.first + self.t.len() as i64 - 1
    }

    fn boundary(&self, k: i64) -> Option<i64> {
        let i = k.checked_sub(self.first)?;
        usize::try_from(i).ok().and_then(|i| self.m.get(i).copied())
    }

    fn marker(&self, k: i64) -> Option<i64> {
        let i = k.checked_sub(self.first)?;
        usize::try_from(i).ok().and_then(|i| self.t.get(i).copied())
    }

    /// `k` with `seq[k] <= t < seq[k + 1]`, if inside the materialized range.
    fn locate(seq: &VecDeque<i64>, first: i64, t: f64) -> Option<i64> {
        let lo = *seq.front()? as f64;
        let hi = *seq.back()? as f64;
        if t < lo || t >= hi {
            return None;
        }
        let right = seq.partition_point(|&b| b as f64 <= t);
        Some(first + right as i64 - 1)
    }
}

pub struct SuitedDecomposition {
    map: MapExpr,
    fiber: FiberKind,
    params: SuitedParams,
    lattice: RwLock<Lattice>,
}

impl fmt::Debug for SuitedDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let snap = self.snapshot();
        f.debug_struct("SuitedDecomposition")
            .field("fiber", &self.fiber)
            .field("first", &snap.first)
            .field("boundaries", &snap.boundaries)
            .field("markers", &snap.markers)
            .finish()
    }
}

/// Greedy suited decomposition for `f`, with bands `-2..=2` materialized.
///
/// Band 0 is symmetric about `t0`: `[t0 - n, t0 + n]` with the smallest `n`
/// clearing the marker curve and its image by the margin. Moving up, the
/// next marker is the smallest integer whose curve clears the last boundary,
/// and the next boundary the smallest integer clearing that curve; moving
/// down mirrors this.
pub fn build_suited(f: &MapExpr, fiber: FiberKind, params: SuitedParams) -> Result<Arc<SuitedDecomposition>> {
    if !(params.margin >= 0.0 && params.margin.is_finite()) {
        return Err(Error::InvalidArgument(format!("margin {}", params.margin)));
    }
    if params.horizon < 2 || params.search_window < 1 {
        return Err(Error::InvalidArgument(
            "horizon must be at least 2 and the search window positive".into(),
        ));
    }
    let suited = SuitedDecomposition {
        map: f.clone(),
        fiber,
        params,
        lattice: RwLock::new(Lattice {
            first: 0,
            m: VecDeque::new(),
            t: VecDeque::new(),
        }),
    };
    let t0 = params.t0;
    let (lo, hi) = suited.extent(t0)?;
    let reach = (hi - t0 as f64).max(t0 as f64 - lo) + params.margin;
    let half = suited.integer_above(reach, t0)?;
    {
        let mut lattice = suited.lattice.write().expect("lattice lock");
        lattice.m.extend([t0 - half, t0 + half]);
        lattice.t.push_back(t0);
    }
    let suited = Arc::new(suited);
    suited.boundary(-2)?;
    suited.boundary(3)?;
    Ok(suited)
}

impl SuitedDecomposition {
    /// Rebuilds a decomposition from a stored lattice. Only the ordering of
    /// the boundaries is checked; use [`crate::verify_suitedness`] for the rest.
    pub fn from_lattice(
        f: &MapExpr,
        fiber: FiberKind,
        params: SuitedParams,
        snapshot: &LatticeSnapshot,
    ) -> Result<Arc<SuitedDecomposition>> {
        let LatticeSnapshot {
            first,
            boundaries,
            markers,
        } = snapshot;
        if markers.is_empty() || boundaries.len() != markers.len() + 1 {
            return Err(Error::InvalidArgument(
                "a lattice needs one more boundary than markers".into(),
            ));
        }
        if boundaries.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument("boundaries must increase".into()));
        }
        let last = first + markers.len() as i64 - 1;
        if first.abs() > params.horizon || last.abs() > params.horizon {
            return Err(Error::HorizonExceeded {
                index: if first.abs() > last.abs() { *first } else { last },
                horizon: params.horizon,
            });
        }
        Ok(Arc::new(SuitedDecomposition {
            map: f.clone(),
            fiber,
            params,
            lattice: RwLock::new(Lattice {
                first: *first,
                m: boundaries.iter().copied().collect(),
                t: markers.iter().copied().collect(),
            }),
        }))
    }

    pub fn map(&self) -> &MapExpr {
        &self.map
    }

    pub fn fiber(&self) -> FiberKind {
        self.fiber
    }

    pub fn params(&self) -> SuitedParams {
        self.params
    }

    pub fn snapshot(&self) -> LatticeSnapshot {
        let l = self.lattice.read().expect("lattice lock");
        LatticeSnapshot {
            first: l.first,
            boundaries: l.m.iter().copied().collect(),
            markers: l.t.iter().copied().collect(),
        }
    }

    /// Indices of the materialized bands.
    pub fn materialized(&self) -> std::ops::RangeInclusive<i64> {
        let l = self.lattice.read().expect("lattice lock");
        l.first..=l.last_band()
    }

    /// `m_k`, extending the lattice if needed.
    pub fn boundary(&self, k: i64) -> Result<f64> {
        self.lookup(k, Lattice::boundary, |l, k| {
            if k < l.first {
                Some(false)
            } else if k > l.first + l.m.len() as i64 - 1 {
                Some(true)
            } else {
                None
            }
        })
    }

    /// `t_k`, extending the lattice if needed.
    pub fn marker(&self, k: i64) -> Result<f64> {
        self.lookup(k, Lattice::marker, |l, k| {
            if k < l.first {
                Some(false)
            } else if k > l.last_band() {
                Some(true)
            } else {
                None
            }
        })
    }

    /// `k` with `m_k <= t < m_{k+1}`.
    pub fn locate_boundary(&self, t: f64) -> Result<i64> {
        self.locate_in(t, |l| (&l.m, l.first))
    }

    /// `k` with `t_k <= t < t_{k+1}`.
    pub fn locate_marker(&self, t: f64) -> Result<i64> {
        self.locate_in(t, |l| (&l.t, l.first))
    }

    fn lookup(
        &self,
        k: i64,
        get: fn(&Lattice, i64) -> Option<i64>,
        direction: fn(&Lattice, i64) -> Option<bool>,
    ) -> Result<f64> {
        if let Some(v) = get(&self.lattice.read().expect("lattice lock"), k) {
            return Ok(v as f64);
        }
        let mut l = self.lattice.write().expect("lattice lock");
        while let Some(up) = direction(&l, k) {
            self.grow(&mut l, up)?;
        }
        Ok(get(&l, k).expect("extended to cover the index") as f64)
    }

    fn locate_in(&self, t: f64, seq: fn(&Lattice) -> (&VecDeque<i64>, i64)) -> Result<i64> {
        if !t.is_finite() {
            return Err(Error::NonFinite);
        }
        {
            let l = self.lattice.read().expect("lattice lock");
            let (s, first) = seq(&l);
            if let Some(k) = Lattice::locate(s, first, t) {
                return Ok(k);
            }
        }
        let mut l = self.lattice.write().expect("lattice lock");
        loop {
            let (s, first) = seq(&l);
            if let Some(k) = Lattice::locate(s, first, t) {
                return Ok(k);
            }
            let up = t >= *s.back().expect("lattice is never empty") as f64;
            self.grow(&mut l, up)?;
        }
    }

    fn grow(&self, l: &mut Lattice, up: bool) -> Result<()> {
        let margin = self.params.margin;
        if up {
            let index = l.last_band() + 1;
            if index > self.params.horizon {
                return Err(Error::HorizonExceeded {
                    index,
                    horizon: self.params.horizon,
                });
            }
            let frontier = *l.m.back().expect("lattice is never empty");
            let limit = frontier as f64 + margin;
            let marker = self.search(frontier, true, |(lo, _)| lo > limit)?;
            let (_, hi) = self.extent(marker)?;
            let next = marker + self.integer_above(hi + margin - marker as f64, marker)?;
            l.t.push_back(marker);
            l.m.push_back(next);
        } else {
            let index = l.first - 1;
            if -index > self.params.horizon {
                return Err(Error::HorizonExceeded {
                    index,
                    horizon: self.params.horizon,
                });
            }
            let frontier = *l.m.front().expect("lattice is never empty");
            let limit = frontier as f64 - margin;
            let marker = self.search(frontier, false, |(_, hi)| hi < limit)?;
            let (lo, _) = self.extent(marker)?;
            let next = marker - self.integer_above(marker as f64 - (lo - margin), marker)?;
            l.t.push_front(marker);
            l.m.push_front(next);
            l.first = index;
        }
        Ok(())
    }

    /// Smallest integer `d >= 1` with `d > x`, guarding against escapes.
    fn integer_above(&self, x: f64, frontier: i64) -> Result<i64> {
        if !x.is_finite() || x.abs() > LEVEL_LIMIT {
            return Err(Error::NotProper {
                frontier,
                window: self.params.search_window,
            });
        }
        Ok((x.floor() as i64 + 1).max(1))
    }

    /// Extent of the marker curve at `t` and its image.
    fn extent(&self, t: i64) -> Result<(f64, f64)> {
        marker_extent(&self.map, self.fiber, t as f64, self.params.resolution)
    }

    /// Nearest admissible marker past `frontier`, searched by galloping then
    /// bisection. Admissibility is monotone in the level because images of
    /// levels are nested.
    fn search(&self, frontier: i64, up: bool, admissible: impl Fn((f64, f64)) -> bool) -> Result<i64> {
        let window = self.params.search_window;
        let at = |d: i64| if up { frontier + d } else { frontier - d };
        let test = |d: i64| -> Result<bool> { Ok(admissible(self.extent(at(d))?)) };
        let mut rejected = 0;
        let mut d = 1;
        let accepted = loop {
            if test(d)? {
                break d;
            }
            rejected = d;
            if d == window {
                return Err(Error::NotProper { frontier, window });
            }
            d = (2 * d).min(window);
        };
        let (mut lo, mut hi) = (rejected, accepted);
        while hi - lo > 1 {
            let mid = lo + (hi - lo) / 2;
            if test(mid)? {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(at(hi))
    }
}
