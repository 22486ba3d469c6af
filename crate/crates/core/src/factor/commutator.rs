use crate::error::{Error, Result};
use crate::factor::{admit, assemble_g, conjugator, Conjugacy, Evidence, FactorizationCertificate, Factors};
use crate::homeo::{invert, MapExpr};
use crate::settings::Settings;
use crate::suited::build_suited;
use crate::verify::verify_identity;

/// Writes `f` as `a ∘ b ∘ a⁻¹ ∘ b⁻¹` with `a = g⁻¹` and `b = c`, where `c`
/// conjugates `g` to `g ∘ f`, and checks the identity on the settings grid.
pub fn commutator_factorization(f: &MapExpr, settings: &Settings) -> Result<FactorizationCertificate> {
    admit(f, settings)?;
    let grid = settings.verification_grid();
    if f.is_identity() {
        let factors = Factors::Commutator {
            a: MapExpr::identity(),
            b: MapExpr::identity(),
        };
        let report = verify_identity(f, &factors.product()?, &grid, settings.tolerance);
        return Ok(FactorizationCertificate {
            input: f.clone(),
            fiber: settings.fiber,
            factors,
            settings: *settings,
            report,
            evidence: Evidence::default(),
        });
    }

    let suited = build_suited(f, settings.fiber, settings.suited)?;
    let assembled = assemble_g(f, &suited, settings)?;
    let c = conjugator(&assembled.g_cert, &assembled.gf_cert, settings.suited.resolution)?;
    let factors = Factors::Commutator {
        a: invert(&assembled.g),
        b: c.clone(),
    };
    let report = verify_identity(f, &factors.product()?, &grid, settings.tolerance);
    let cert = FactorizationCertificate {
        input: f.clone(),
        fiber: settings.fiber,
        factors,
        settings: *settings,
        report,
        evidence: Evidence {
            conjugacies: vec![Conjugacy {
                conjugator: c,
                sigma: assembled.g_cert.map.clone(),
                tau: assembled.gf_cert.map.clone(),
            }],
            loxodromic: vec![assembled.g_cert, assembled.gf_cert],
        },
    };
    if cert.report.pass {
        Ok(cert)
    } else {
        Err(Error::ToleranceExceeded(Box::new(cert)))
    }
}
