//! Numerical knobs shared by construction and verification.

use crate::homeo::FiberKind;
use crate::suited::SuitedParams;
use crate::verify::Grid;

/// Fiber profile used by the straighteners inside `g`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum StraightenerShape {
    /// Piecewise linear through the knot.
    Linear,
    /// Tangent to the identity at the band edges, with knot slopes chosen so
    /// that `g ∘ f` is tangent to a band translation at the marker levels.
    /// Orbits then approach band edges polynomially instead of geometrically,
    /// which keeps the iterated conjugator well conditioned.
    #[default]
    Tangent,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Settings {
    pub fiber: FiberKind,
    /// Level interval checked by every report.
    pub window: (f64, f64),
    /// `(angle count, level count)`; the angle count is 1 on the line.
    pub grid: (usize, usize),
    /// Tolerance of the final identity check.
    pub tolerance: f64,
    /// Tolerance for boundary levels being carried to boundary levels.
    pub transport_tolerance: f64,
    pub suited: SuitedParams,
    /// Fiber profile of the straighteners inside `g`.
    pub straightener: StraightenerShape,
    /// Orbit length used as evidence of sink/source dynamics.
    pub iterations: usize,
    /// Orbit starting points, and angles probed per boundary level.
    pub samples: usize,
}

impl Settings {
    pub fn line() -> Self {
        Settings {
            fiber: FiberKind::Point,
            window: (-50.0, 50.0),
            grid: (1, 10_000),
            tolerance: 1e-9,
            transport_tolerance: 1e-9,
            suited: SuitedParams::default(),
            straightener: StraightenerShape::Tangent,
            iterations: 100,
            samples: 16,
        }
    }

    pub fn cylinder() -> Self {
        Settings {
            fiber: FiberKind::Circle,
            window: (-20.0, 20.0),
            grid: (200, 200),
            tolerance: 1e-6,
            transport_tolerance: 1e-9,
            suited: SuitedParams::default(),
            straightener: StraightenerShape::Tangent,
            iterations: 100,
            samples: 16,
        }
    }

    pub fn for_fiber(fiber: FiberKind) -> Self {
        match fiber {
            FiberKind::Point => Settings::line(),
            FiberKind::Circle => Settings::cylinder(),
        }
    }

    pub fn verification_grid(&self) -> Grid {
        Grid::new(self.fiber, self.window, self.grid.0, self.grid.1)
    }
}
