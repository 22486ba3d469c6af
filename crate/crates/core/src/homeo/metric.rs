//! Distances between points and maps.

use crate::homeo::{reduce_turns, CPoint, MapExpr};
use crate::verify::Grid;

/// Max of the circle distance in angle and the level difference.
pub fn distance(p: CPoint, q: CPoint) -> f64 {
    let d = reduce_turns(p.theta - q.theta);
    d.min(1.0 - d).max((p.t - q.t).abs())
}

/// Largest distance between `a(p)` and `b(p)` over the grid. Evaluation
/// failures count as infinitely far.
pub fn sup_distance(a: &MapExpr, b: &MapExpr, grid: &Grid) -> f64 {
    grid.points()
        .map(|p| match (a.eval(p), b.eval(p)) {
            (Ok(x), Ok(y)) => distance(x, y),
            _ => f64::INFINITY,
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homeo::FiberKind;

    #[test]
    fn same_map_is_at_distance_zero() {
        let m = MapExpr::vertical_pl(&[(0.0, 1.0), (1.0, 4.0), (2.0, 4.5)]).unwrap();
        let grid = Grid::new(FiberKind::Point, (-50.0, 50.0), 1, 1000);
        assert_eq!(sup_distance(&m, &m, &grid), 0.0);
    }

    #[test]
    fn translations_half_apart() {
        let grid = Grid::new(FiberKind::Point, (-50.0, 50.0), 1, 1000);
        let d = sup_distance(&MapExpr::translation(1.0), &MapExpr::translation(1.5), &grid);
        assert_eq!(d, 0.5);
    }

    #[test]
    fn angle_distance_wraps() {
        assert!((distance(CPoint::new(0.95, 0.0), CPoint::new(0.05, 0.0)) - 0.1).abs() < 1e-15);
    }
}
