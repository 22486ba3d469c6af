//! SVG rendering of a certificate: band boundaries, marker levels, their
//! images under the input map, and short orbits of the loxodromic evidence.

use std::fmt::Write;

use homeocomm::verify::orbit_starts;
use homeocomm::{level_image, CPoint, FactorizationCertificate, FiberKind};

use crate::cert::CertificateDocument;
use crate::error::CliError;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const PAD: f64 = 40.0;
const ORBITS: usize = 4;
const STEPS: usize = 24;

struct Frame {
    lo: f64,
    hi: f64,
}

impl Frame {
    fn x(&self, u: f64) -> f64 {
        PAD + u * (WIDTH - 2.0 * PAD)
    }

    fn y(&self, t: f64) -> f64 {
        HEIGHT - PAD - (t - self.lo) / (self.hi - self.lo) * (HEIGHT - 2.0 * PAD)
    }

    fn contains(&self, t: f64) -> bool {
        (self.lo..=self.hi).contains(&t)
    }

    fn level_line(&self, out: &mut String, class: &str, t: f64) {
        let y = self.y(t);
        let _ = writeln!(
            out,
            r#"    <line class="{class}" data-level="{t}" x1="{:.3}" y1="{y:.3}" x2="{:.3}" y2="{y:.3}"/>"#,
            self.x(0.0),
            self.x(1.0),
        );
    }
}

/// Renders `doc`; `cert` is its decoded form. Curves use `resolution` samples.
pub fn render(doc: &CertificateDocument, cert: &FactorizationCertificate, resolution: usize) -> Result<String, CliError> {
    let (lo, hi) = cert.settings.window;
    let frame = Frame { lo, hi };
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(out, r#"  <rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);

    let _ = writeln!(out, r##"  <g id="bands" stroke="#999" stroke-width="1">"##);
    let mut markers = Vec::new();
    if let Some(lattice) = doc.lattice() {
        for &m in lattice.boundaries.iter().filter(|&&m| frame.contains(m as f64)) {
            frame.level_line(&mut out, "band", m as f64);
        }
        markers.extend(lattice.markers.iter().map(|&t| t as f64).filter(|&t| frame.contains(t)));
    }
    let _ = writeln!(out, "  </g>");

    let _ = writeln!(out, r##"  <g id="markers" stroke="#1f77b4" stroke-width="1.5">"##);
    for &t in &markers {
        frame.level_line(&mut out, "marker", t);
    }
    let _ = writeln!(out, "  </g>");

    let _ = writeln!(out, r##"  <g id="images" stroke="#d62728" stroke-width="1.5" fill="none">"##);
    for &t in &markers {
        match cert.fiber {
            FiberKind::Point => frame.level_line(&mut out, "image", cert.input.level(t)?),
            FiberKind::Circle => {
                let curve = level_image(&cert.input, t, FiberKind::Circle, resolution)?;
                let mut d = String::new();
                for (j, (theta, v)) in curve.samples().enumerate() {
                    let _ = write!(d, "{}{:.3},{:.3}", if j == 0 { "M" } else { " L" }, frame.x(theta), frame.y(v));
                }
                let _ = writeln!(
                    out,
                    r#"    <path class="image" data-level="{t}" data-samples="{}" d="{d}"/>"#,
                    curve.values().len()
                );
            }
        }
    }
    let _ = writeln!(out, "  </g>");

    let _ = writeln!(out, r##"  <g id="orbits" stroke-width="1" fill="none">"##);
    let colors = ["#2ca02c", "#9467bd"];
    for (index, lox) in cert.evidence.loxodromic.iter().take(2).enumerate() {
        for start in orbit_starts(cert.fiber, cert.settings.window, ORBITS) {
            let mut points = Vec::new();
            let mut p = start;
            for step in 0..=STEPS {
                if !frame.contains(p.t) {
                    break;
                }
                let u = match cert.fiber {
                    FiberKind::Point => step as f64 / STEPS as f64,
                    FiberKind::Circle => p.theta,
                };
                points.push(format!("{:.3},{:.3}", frame.x(u), frame.y(p.t)));
                p = match lox.map.eval(p) {
                    Ok(q) => q,
                    Err(_) => CPoint::new(0.0, f64::INFINITY),
                };
            }
            let _ = writeln!(
                out,
                r#"    <polyline class="orbit" data-map="{index}" stroke="{}" points="{}"/>"#,
                colors[index],
                points.join(" ")
            );
        }
    }
    let _ = writeln!(out, "  </g>");
    let _ = writeln!(out, "</svg>");
    Ok(out)
}
