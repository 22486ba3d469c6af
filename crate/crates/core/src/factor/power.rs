use crate::error::{Error, Result};
use crate::factor::{admit, assemble_g, conjugator, Conjugacy, Evidence, FactorizationCertificate, Factors, PowerTerm};
use crate::homeo::{compose, invert, sup_distance, MapExpr};
use crate::settings::Settings;
use crate::suited::{build_suited, certify_loxodromic, Bands, LoxodromicCertificate};
use crate::verify::verify_identity;

/// Splits `f` as `g⁻¹ ∘ (g ∘ f)` with both factors loxodromic: the first
/// toward `-∞` on the bands `A_k`, the second toward `+∞` on the marker bands.
pub fn split_loxodromic(f: &MapExpr, settings: &Settings) -> Result<(LoxodromicCertificate, LoxodromicCertificate)> {
    admit(f, settings)?;
    let suited = build_suited(f, settings.fiber, settings.suited)?;
    let assembled = assemble_g(f, &suited, settings)?;
    let first = certify_loxodromic(&invert(&assembled.g), &Bands::Boundaries(suited), settings.fiber, settings)?;
    Ok((first, assembled.gf_cert))
}

/// A `p`-th root of `fi` up to conjugacy: `h ∘ fi ∘ h⁻¹` where `h` conjugates
/// `fi^p` to `fi`, so the root's `p`-th power is `fi`.
pub fn power_root_conjugate(fi: &LoxodromicCertificate, p: u32, settings: &Settings) -> Result<MapExpr> {
    Ok(power_root(fi, p, settings)?.0)
}

fn power_root(
    fi: &LoxodromicCertificate,
    p: u32,
    settings: &Settings,
) -> Result<(MapExpr, Option<(Conjugacy, LoxodromicCertificate)>)> {
    match p {
        0 => Err(Error::InvalidArgument("root of order 0".into())),
        1 => Ok((fi.map.clone(), None)),
        p => {
            let power = fi.map.power(i64::from(p));
            let bands = fi.bands.stride(i64::from(p))?;
            let sigma = certify_loxodromic(&power, &bands, fi.fiber, settings)?;
            let h = conjugator(&sigma, fi, settings.suited.resolution)?;
            let root = compose(&[h.clone(), fi.map.clone(), invert(&h)])?;
            let conjugacy = Conjugacy {
                conjugator: h,
                sigma: power,
                tau: fi.map.clone(),
            };
            Ok((root, Some((conjugacy, sigma))))
        }
    }
}

/// Writes `g` as `root₁^p₁ ∘ … ∘ root_r^p_r` with every root different from
/// the identity.
///
/// `g` is split into `r` loxodromic factors by splitting the last factor
/// repeatedly; each factor then gets a root of order `|p_i|`, inverted when
/// `p_i < 0`.
pub fn power_word_decomposition(g: &MapExpr, exponents: &[i64], settings: &Settings) -> Result<FactorizationCertificate> {
    if exponents.len() < 2 {
        return Err(Error::InvalidArgument("a power word needs at least two exponents".into()));
    }
    if exponents.contains(&0) {
        return Err(Error::InvalidArgument("exponents must be nonzero".into()));
    }
    admit(g, settings)?;

    let mut evidence = Evidence::default();
    let mut factors = Vec::with_capacity(exponents.len());
    let mut rest = g.clone();
    for _ in 1..exponents.len() {
        let (first, second) = split_loxodromic(&rest, settings)?;
        rest = second.map.clone();
        factors.push(first);
        if factors.len() + 1 == exponents.len() {
            factors.push(second);
        }
    }

    let grid = settings.verification_grid();
    let identity = MapExpr::identity();
    let mut terms = Vec::with_capacity(exponents.len());
    for (index, (fi, &exponent)) in factors.iter().zip(exponents).enumerate() {
        let order = u32::try_from(exponent.unsigned_abs())
            .map_err(|_| Error::InvalidArgument(format!("exponent {exponent}")))?;
        let (root, extra) = power_root(fi, order, settings)?;
        let root = if exponent < 0 { invert(&root) } else { root };
        let displacement = sup_distance(&root, &identity, &grid);
        if displacement <= settings.tolerance {
            return Err(Error::TrivialFactor { index });
        }
        if let Some((conjugacy, sigma)) = extra {
            evidence.conjugacies.push(conjugacy);
            evidence.loxodromic.push(sigma);
        }
        terms.push(PowerTerm {
            root,
            exponent,
            displacement,
        });
    }
    evidence.loxodromic.splice(0..0, factors);

    let factors = Factors::PowerWord { terms };
    let report = verify_identity(g, &factors.product()?, &grid, settings.tolerance);
    let cert = FactorizationCertificate {
        input: g.clone(),
        fiber: settings.fiber,
        factors,
        settings: *settings,
        report,
        evidence,
    };
    if cert.report.pass {
        Ok(cert)
    } else {
        Err(Error::ToleranceExceeded(Box::new(cert)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homeo::FiberKind;
    use crate::suited::End;
    use crate::verify::Grid;

    fn line_grid() -> Grid {
        Grid::new(FiberKind::Point, (-50.0, 50.0), 1, 10_000)
    }

    #[test]
    fn split_of_identity_is_g_inverse_then_g() {
        let (a, b) = split_loxodromic(&MapExpr::identity(), &Settings::line()).unwrap();
        assert_eq!(a.sink, End::Minus);
        assert_eq!(b.sink, End::Plus);
        let r = verify_identity(&a.map.inverse(), &b.map, &line_grid(), 1e-12);
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn split_of_translation_multiplies_back() {
        let f = MapExpr::translation(3.0);
        let (a, b) = split_loxodromic(&f, &Settings::line()).unwrap();
        let product = compose(&[a.map, b.map]).unwrap();
        assert!(verify_identity(&f, &product, &line_grid(), 1e-9).pass);
    }

    #[test]
    fn square_root_of_translation() {
        let bands = Bands::arithmetic(0.0, 3.0).unwrap();
        let settings = Settings::line();
        let fi = certify_loxodromic(&MapExpr::translation(3.0), &bands, FiberKind::Point, &settings).unwrap();
        let root = power_root_conjugate(&fi, 2, &settings).unwrap();
        let r = verify_identity(&root.power(2), &fi.map, &line_grid(), 1e-9);
        assert!(r.pass, "{r:?}");
        assert!(power_root_conjugate(&fi, 1, &settings).unwrap().ptr_eq(&fi.map));
    }

    #[test]
    fn rejects_bad_exponents() {
        let g = MapExpr::translation(3.0);
        assert!(power_word_decomposition(&g, &[2], &Settings::line()).is_err());
        assert!(power_word_decomposition(&g, &[0, 2], &Settings::line()).is_err());
    }

    #[test]
    fn unit_exponents_use_the_split() {
        let g = MapExpr::translation(3.0);
        let cert = power_word_decomposition(&g, &[1, 1], &Settings::line()).unwrap();
        assert!(cert.report.max_error < 1e-9);
    }
}
