//! Piecewise-linear functions of one real variable.

use crate::error::{Error, Result};

/// Breakpoint list evaluated with affine extension past both ends.
///
/// Values are always computed as `y_i + ((x - x_i) * dy) / dx` anchored at the
/// breakpoint to the left of `x` (the first breakpoint below the domain), so a
/// breakpoint abscissa evaluates to its ordinate bit-exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct Segments {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl Segments {
    fn new(points: &[(f64, f64)]) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidMap("no breakpoints".into()));
        }
        if points.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
            return Err(Error::InvalidMap("non-finite breakpoint".into()));
        }
        if points.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::InvalidMap(
                "breakpoint abscissae must be strictly increasing".into(),
            ));
        }
        Ok(Segments {
            xs: points.iter().map(|p| p.0).collect(),
            ys: points.iter().map(|p| p.1).collect(),
        })
    }

    fn swapped(&self) -> Self {
        Segments {
            xs: self.ys.clone(),
            ys: self.xs.clone(),
        }
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.xs.iter().copied().zip(self.ys.iter().copied())
    }

    pub fn at(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if n == 1 {
            return self.ys[0];
        }
        // Number of breakpoints at or left of x.
        let right = self.xs.partition_point(|&b| b <= x);
        let (anchor, seg) = match right {
            0 => (0, 0),
            r if r == n => (n - 1, n - 2),
            r => (r - 1, r - 1),
        };
        let dx = self.xs[seg + 1] - self.xs[seg];
        let dy = self.ys[seg + 1] - self.ys[seg];
        self.ys[anchor] + ((x - self.xs[anchor]) * dy) / dx
    }
}

/// Strictly increasing piecewise-linear bijection of the real line.
///
/// The inverse is the same construction on swapped coordinates, built once.
#[derive(Debug, Clone, PartialEq)]
pub struct PlMap {
    forward: Segments,
    backward: Segments,
}

impl PlMap {
    /// Requires at least two breakpoints, strictly increasing in both coordinates.
    pub fn new(breakpoints: &[(f64, f64)]) -> Result<Self> {
        if breakpoints.len() < 2 {
            return Err(Error::InvalidMap(
                "a piecewise-linear map needs at least two breakpoints".into(),
            ));
        }
        if breakpoints.windows(2).any(|w| w[0].1 >= w[1].1) {
            return Err(Error::NotOrientationPreserving(
                "piecewise-linear map has a non-positive slope".into(),
            ));
        }
        let forward = Segments::new(breakpoints)?;
        let backward = forward.swapped();
        Ok(PlMap { forward, backward })
    }

    /// Skips the monotonicity check. The result may fail to be a bijection;
    /// orientation checks exist to catch exactly that.
    pub fn new_unchecked(breakpoints: &[(f64, f64)]) -> Result<Self> {
        if breakpoints.len() < 2 {
            return Err(Error::InvalidMap(
                "a piecewise-linear map needs at least two breakpoints".into(),
            ));
        }
        let forward = Segments::new(breakpoints)?;
        let mut swapped: Vec<(f64, f64)> = forward.points().map(|(x, y)| (y, x)).collect();
        swapped.sort_by(|a, b| a.0.total_cmp(&b.0));
        swapped.dedup_by(|a, b| a.0 == b.0);
        let backward = if swapped.len() >= 2 {
            Segments::new(&swapped)?
        } else {
            forward.swapped()
        };
        Ok(PlMap { forward, backward })
    }

    /// `t ↦ t + offset`.
    pub fn translation(offset: f64) -> Self {
        PlMap::new(&[(0.0, offset), (1.0, 1.0 + offset)]).expect("translation is monotone")
    }

    pub fn breakpoints(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.forward.points()
    }

    pub fn at(&self, t: f64) -> f64 {
        self.forward.at(t)
    }

    pub fn inverse_at(&self, t: f64) -> f64 {
        self.backward.at(t)
    }
}

/// Piecewise-linear function with no monotonicity requirement. A single knot
/// denotes a constant.
#[derive(Debug, Clone, PartialEq)]
pub struct PlFunction {
    segments: Segments,
}

impl PlFunction {
    pub fn new(knots: &[(f64, f64)]) -> Result<Self> {
        Ok(PlFunction {
            segments: Segments::new(knots)?,
        })
    }

    pub fn constant(value: f64) -> Self {
        PlFunction {
            segments: Segments {
                xs: vec![0.0],
                ys: vec![value],
            },
        }
    }

    pub fn knots(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.segments.points()
    }

    pub fn at(&self, t: f64) -> f64 {
        self.segments.at(t)
    }

    pub fn negated(&self) -> Self {
        PlFunction {
            segments: Segments {
                xs: self.segments.xs.clone(),
                ys: self.segments.ys.iter().map(|y| -y).collect(),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_interpolation() {
        let m = PlMap::new(&[(0.0, 0.0), (1.0, 2.0)]).unwrap();
        assert_eq!(m.at(0.5), 1.0);
    }

    #[test]
    fn affine_tails_use_terminal_slopes() {
        let m = PlMap::new(&[(0.0, 0.0), (1.0, 2.0), (2.0, 2.5)]).unwrap();
        assert_eq!(m.at(-1.0), -2.0);
        assert_eq!(m.at(4.0), 3.5);
    }

    #[test]
    fn inverse_swaps_coordinates() {
        let m = PlMap::new(&[(0.0, 0.0), (1.0, 3.0)]).unwrap();
        assert_eq!(m.inverse_at(1.5), 0.5);
        assert_eq!(PlMap::translation(1.0).inverse_at(5.0), 4.0);
    }

    #[test]
    fn breakpoints_are_exact() {
        let pts = [(-2.0, 2.0), (2.0, 5.0), (5.0, 8.0)];
        let m = PlMap::new(&pts).unwrap();
        for (x, y) in pts {
            assert_eq!(m.at(x), y);
            assert_eq!(m.inverse_at(y), x);
        }
    }

    #[test]
    fn rejects_decreasing_and_degenerate_lists() {
        assert!(matches!(
            PlMap::new(&[(0.0, 0.0), (1.0, -1.0)]),
            Err(Error::NotOrientationPreserving(_))
        ));
        assert!(PlMap::new(&[(0.0, 0.0)]).is_err());
        assert!(PlMap::new(&[(1.0, 0.0), (0.0, 1.0)]).is_err());
        assert!(PlMap::new(&[(0.0, 0.0), (f64::NAN, 1.0)]).is_err());
    }

    #[test]
    fn constant_function() {
        let a = PlFunction::constant(0.25);
        assert_eq!(a.at(-100.0), 0.25);
        assert_eq!(a.negated().at(3.0), -0.25);
    }
}
