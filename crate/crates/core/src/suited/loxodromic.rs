use std::fmt;

use crate::error::{Error, Result};
use crate::homeo::{CPoint, FiberKind, MapExpr};
use crate::settings::Settings;
use crate::suited::Bands;
use crate::verify::{verify_dynamics, VerificationReport};

/// An end of `fiber × ℝ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum End {
    Plus,
    Minus,
}

impl End {
    pub fn opposite(self) -> End {
        match self {
            End::Plus => End::Minus,
            End::Minus => End::Plus,
        }
    }

    /// Direction of travel in band index toward this end.
    pub fn sign(self) -> i64 {
        match self {
            End::Plus => 1,
            End::Minus => -1,
        }
    }
}

impl fmt::Display for End {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            End::Plus => "+inf",
            End::Minus => "-inf",
        })
    }
}

/// A map that carries each band of `bands` onto its neighbour toward `sink`,
/// with orbit evidence.
#[derive(Debug, Clone)]
pub struct LoxodromicCertificate {
    pub map: MapExpr,
    pub bands: Bands,
    pub fiber: FiberKind,
    pub sink: End,
    pub source: End,
    pub dynamics: VerificationReport,
}

impl LoxodromicCertificate {
    /// The same map seen through its inverse: sink and source swap.
    pub fn inverse(&self) -> LoxodromicCertificate {
        LoxodromicCertificate {
            map: self.map.inverse(),
            bands: self.bands.clone(),
            fiber: self.fiber,
            sink: self.source,
            source: self.sink,
            dynamics: self.dynamics.clone(),
        }
    }
}

/// Certifies that `map` translates `bands` by one step.
///
/// Every boundary level meeting the settings window must go to the next
/// boundary level (at the sampled angles), and orbits of the sample points
/// must cross at least one band per step, toward the sink going forward and
/// toward the source going backward.
pub fn certify_loxodromic(
    map: &MapExpr,
    bands: &Bands,
    fiber: FiberKind,
    settings: &Settings,
) -> Result<LoxodromicCertificate> {
    let tol = settings.transport_tolerance;
    let angles: Vec<f64> = match fiber {
        FiberKind::Point => vec![0.0],
        FiberKind::Circle => {
            let n = settings.samples.max(1);
            (0..n).map(|j| j as f64 / n as f64).collect()
        }
    };
    let first = bands.locate(settings.window.0)?;
    let last = bands.locate(settings.window.1)?;

    let b = bands.level(first)?;
    let probe = map.eval(CPoint::new(0.0, b))?.t;
    let sink = if (probe - bands.level(first + 1)?).abs() <= tol {
        End::Plus
    } else if (probe - bands.level(first - 1)?).abs() <= tol {
        End::Minus
    } else {
        return Err(Error::NotLoxodromic {
            condition: "iii",
            detail: format!("boundary level {b} is sent to level {probe}, not to a neighbouring boundary"),
        });
    };

    for k in first..=last {
        let level = bands.level(k)?;
        let expected = bands.level(k + sink.sign())?;
        for &theta in &angles {
            let image = map.eval(CPoint::new(theta, level))?.t;
            if (image - expected).abs() > tol {
                return Err(Error::NotLoxodromic {
                    condition: "iii",
                    detail: format!(
                        "boundary {k} at angle {theta}: level {level} goes to {image}, expected {expected}"
                    ),
                });
            }
        }
    }

    let mut cert = LoxodromicCertificate {
        map: map.clone(),
        bands: bands.clone(),
        fiber,
        sink,
        source: sink.opposite(),
        dynamics: VerificationReport {
            window: settings.window,
            grid: (0, 0),
            tolerance: 0.0,
            max_error: 0.0,
            failures: Vec::new(),
            pass: true,
        },
    };
    cert.dynamics = verify_dynamics(&cert, settings.iterations, settings.samples, settings.window);
    if !cert.dynamics.pass {
        if let Some(w) = cert.dynamics.failures.first().filter(|w| w.error.is_infinite()) {
            orbit_failure(&cert, CPoint::new(w.theta, w.t), settings.iterations)?;
        }
        let detail = match cert.dynamics.failures.first() {
            Some(w) => format!("orbit of ({}, {}) stalls", w.theta, w.t),
            None => "orbit evidence missing".into(),
        };
        return Err(Error::NotLoxodromic {
            condition: "iv",
            detail,
        });
    }
    Ok(cert)
}

/// Re-walks an orbit whose evidence could not be computed and returns the
/// error that stopped it, such as a lattice that cannot be extended.
fn orbit_failure(cert: &LoxodromicCertificate, p: CPoint, iterations: usize) -> Result<()> {
    for m in [cert.map.clone(), cert.map.inverse()] {
        let mut q = p;
        cert.bands.locate(q.t)?;
        for _ in 0..iterations {
            q = m.eval(q)?;
            cert.bands.locate(q.t)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn translation_by_three() {
        let bands = Bands::arithmetic(0.0, 3.0).unwrap();
        let cert = certify_loxodromic(&MapExpr::translation(3.0), &bands, FiberKind::Point, &Settings::line()).unwrap();
        assert_eq!(cert.sink, End::Plus);
        assert_eq!(cert.source, End::Minus);
        assert!(cert.dynamics.pass);
    }

    #[test]
    fn identity_fails_transport() {
        let bands = Bands::arithmetic(0.0, 3.0).unwrap();
        let err = certify_loxodromic(&MapExpr::identity(), &bands, FiberKind::Point, &Settings::line()).unwrap_err();
        assert!(matches!(err, Error::NotLoxodromic { condition: "iii", .. }));
    }

    #[test]
    fn inverse_has_opposite_sink() {
        let bands = Bands::arithmetic(0.0, 3.0).unwrap();
        let m = MapExpr::translation(3.0);
        let s = Settings::line();
        let fwd = certify_loxodromic(&m, &bands, FiberKind::Point, &s).unwrap();
        let back = certify_loxodromic(&m.inverse(), &bands, FiberKind::Point, &s).unwrap();
        assert_eq!(fwd.sink, End::Plus);
        assert_eq!(back.sink, End::Minus);
    }
}
