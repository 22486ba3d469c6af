//! Sampled membership test for the identity component.

use crate::homeo::curve::sample_image;
use crate::homeo::{CPoint, FiberKind, MapExpr};

/// Level used to probe where the ends go.
const FAR: f64 = 1e9;
/// Angle samples per level on the cylinder.
const ANGLES: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct OrientationReport {
    pub pass: bool,
    /// First few violations, human readable.
    pub failures: Vec<String>,
    /// Levels whose image could not be sampled as a graph. These fail the
    /// check without showing that the map reverses anything.
    pub graph_violations: Vec<f64>,
}

/// Checks on `samples` levels of `window` that `m` is increasing along the
/// line (or maps levels to nested degree-1 graphs on the cylinder) and keeps
/// each end in place.
pub fn check_orientation(
    m: &MapExpr,
    fiber: FiberKind,
    window: (f64, f64),
    samples: usize,
) -> OrientationReport {
    let mut failures = Vec::new();
    let mut graph_violations = Vec::new();
    let samples = samples.max(2);
    let levels: Vec<f64> = (0..samples)
        .map(|i| window.0 + (i as f64 * (window.1 - window.0)) / (samples - 1) as f64)
        .collect();

    for (t, sign) in [(FAR, 1.0), (-FAR, -1.0)] {
        let ends = (0..4).map(|j| m.eval(CPoint::new(j as f64 / 4.0, t)));
        for image in ends {
            match image {
                Ok(q) if q.t * sign > 0.0 => {}
                Ok(q) => failures.push(format!("end at level {t} is sent to level {}", q.t)),
                Err(e) => failures.push(format!("end at level {t}: {e}")),
            }
        }
    }

    match fiber {
        FiberKind::Point => {
            let mut prev: Option<(f64, f64)> = None;
            for &t in &levels {
                match m.level(t) {
                    Ok(y) => {
                        if let Some((s, x)) = prev {
                            if y <= x {
                                failures.push(format!("not increasing: f({s}) = {x}, f({t}) = {y}"));
                            }
                        }
                        prev = Some((t, y));
                    }
                    Err(e) => failures.push(format!("level {t}: {e}")),
                }
            }
        }
        FiberKind::Circle => {
            let mut prev: Option<(f64, Vec<f64>)> = None;
            for &t in &levels {
                let curve = match sample_image(m, t, ANGLES) {
                    Ok(source) => source,
                    Err(crate::Error::GraphViolation { .. }) => {
                        graph_violations.push(t);
                        prev = None;
                        continue;
                    }
                    Err(e) => {
                        failures.push(format!("level {t}: {e}"));
                        prev = None;
                        continue;
                    }
                };
                let heights = match (0..ANGLES)
                    .map(|j| curve.value_at(j as f64 / ANGLES as f64))
                    .collect::<crate::Result<Vec<f64>>>()
                {
                    Ok(h) => h,
                    Err(e) => {
                        failures.push(format!("level {t}: {e}"));
                        prev = None;
                        continue;
                    }
                };
                if let Some((s, below)) = &prev {
                    if below.iter().zip(&heights).any(|(a, b)| b <= a) {
                        failures.push(format!("images of levels {s} and {t} are not nested"));
                    }
                }
                prev = Some((t, heights));
            }
        }
    }

    failures.truncate(8);
    OrientationReport {
        pass: failures.is_empty() && graph_violations.is_empty(),
        failures,
        graph_violations,
    }
}
