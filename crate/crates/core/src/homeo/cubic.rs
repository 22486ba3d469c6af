//! Monotone cubic Hermite interpolation (Fritsch-Butland derivative choice).

use crate::error::{Error, Result};
use crate::roots::solve_increasing;

/// Strictly increasing C¹ interpolant through strictly increasing knots.
///
/// Interior derivatives are weighted harmonic means of neighbouring secants,
/// which keeps every cubic piece monotone. Beyond the end knots the map is
/// affine: with `c1_tails` the slope continues the end derivative, otherwise
/// the tails are unit-slope translations.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneCubic {
    xs: Vec<f64>,
    ys: Vec<f64>,
    ds: Vec<f64>,
    c1_tails: bool,
}

impl MonotoneCubic {
    pub fn new(knots: &[(f64, f64)], c1_tails: bool) -> Result<Self> {
        if knots.len() < 2 {
            return Err(Error::InvalidMap("monotone cubic needs two knots".into()));
        }
        if knots.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
            return Err(Error::InvalidMap("non-finite knot".into()));
        }
        if knots.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::InvalidMap("knot abscissae must increase".into()));
        }
        if knots.windows(2).any(|w| w[0].1 >= w[1].1) {
            return Err(Error::NotOrientationPreserving(
                "monotone cubic knots must increase".into(),
            ));
        }
        let xs: Vec<f64> = knots.iter().map(|k| k.0).collect();
        let ys: Vec<f64> = knots.iter().map(|k| k.1).collect();
        let n = xs.len();
        let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
        let delta: Vec<f64> = (0..n - 1).map(|i| (ys[i + 1] - ys[i]) / h[i]).collect();
        let mut ds = vec![0.0; n];
        ds[0] = delta[0];
        ds[n - 1] = delta[n - 2];
        for k in 1..n - 1 {
            let w1 = 2.0 * h[k] + h[k - 1];
            let w2 = h[k] + 2.0 * h[k - 1];
            ds[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
        }
        Ok(MonotoneCubic {
            xs,
            ys,
            ds,
            c1_tails,
        })
    }

    pub fn knots(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.xs.iter().copied().zip(self.ys.iter().copied())
    }

    pub fn c1_tails(&self) -> bool {
        self.c1_tails
    }

    fn tail_slope(&self, left: bool) -> f64 {
        match (self.c1_tails, left) {
            (false, _) => 1.0,
            (true, true) => self.ds[0],
            (true, false) => self.ds[self.ds.len() - 1],
        }
    }

    pub fn at(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if x <= self.xs[0] {
            return self.ys[0] + (x - self.xs[0]) * self.tail_slope(true);
        }
        if x >= self.xs[n - 1] {
            return self.ys[n - 1] + (x - self.xs[n - 1]) * self.tail_slope(false);
        }
        let i = self.xs.partition_point(|&b| b <= x) - 1;
        let h = self.xs[i + 1] - self.xs[i];
        let s = (x - self.xs[i]) / h;
        let s2 = s * s;
        let s3 = s2 * s;
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        h00 * self.ys[i] + h10 * h * self.ds[i] + h01 * self.ys[i + 1] + h11 * h * self.ds[i + 1]
    }

    /// Inverts by bracketed root finding; exact on the affine tails.
    pub fn inverse_at(&self, y: f64) -> Result<f64> {
        let n = self.xs.len();
        if y <= self.ys[0] {
            return Ok(self.xs[0] + (y - self.ys[0]) / self.tail_slope(true));
        }
        if y >= self.ys[n - 1] {
            return Ok(self.xs[n - 1] + (y - self.ys[n - 1]) / self.tail_slope(false));
        }
        let i = self.ys.partition_point(|&b| b <= y) - 1;
        let lo = self.xs[i];
        let hi = self.xs[i + 1];
        crate::roots::refine(|x| Ok(self.at(x)), y, lo, self.ys[i], hi, self.ys[i + 1])
            .or_else(|_| solve_increasing(|x| Ok(self.at(x)), y, lo, hi - lo))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> MonotoneCubic {
        MonotoneCubic::new(&[(-2.0, -3.0), (0.0, 0.5), (1.0, 0.7), (4.0, 6.0)], true).unwrap()
    }

    #[test]
    fn interpolates_knots() {
        let c = sample();
        for (x, y) in [(-2.0, -3.0), (0.0, 0.5), (1.0, 0.7), (4.0, 6.0)] {
            assert!((c.at(x) - y).abs() < 1e-15);
        }
    }

    #[test]
    fn strictly_increasing_on_dense_scan() {
        let c = sample();
        let mut prev = c.at(-5.0);
        for i in 1..=10_000 {
            let y = c.at(-5.0 + 12.0 * i as f64 / 10_000.0);
            assert!(y > prev);
            prev = y;
        }
    }

    #[test]
    fn inverse_roundtrip() {
        let c = sample();
        for i in 0..200 {
            let x = -6.0 + 12.0 * i as f64 / 199.0;
            let back = c.inverse_at(c.at(x)).unwrap();
            assert!((back - x).abs() < 1e-9, "{x} -> {back}");
        }
    }

    #[test]
    fn unit_tails_without_c1() {
        let c = MonotoneCubic::new(&[(0.0, 0.0), (1.0, 3.0)], false).unwrap();
        assert_eq!(c.at(3.0), 5.0);
        assert_eq!(c.at(-1.0), -1.0);
    }
}
