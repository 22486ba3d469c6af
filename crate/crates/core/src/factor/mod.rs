//! Factorizations of end-preserving homeomorphisms.
//!
//! The commutator comes from a map `g` for which `g` and `g ∘ f` are both
//! loxodromic toward `+∞`: a conjugator `c` with `c ∘ g ∘ c⁻¹ = g ∘ f` gives
//! `f = g⁻¹ ∘ c ∘ g ∘ c⁻¹`. The same `g` splits `f` into two loxodromic
//! factors `g⁻¹` and `g ∘ f`, and loxodromic maps have roots of every order
//! up to conjugacy, which yields power words.

pub mod commutator;
pub mod conjugate;
pub mod power;
pub mod straighten;

use crate::error::Result;
use crate::homeo::{commutator as bracket, compose, FiberKind, MapExpr};
use crate::settings::Settings;
use crate::suited::LoxodromicCertificate;
use crate::verify::VerificationReport;

pub use commutator::commutator_factorization;
pub use conjugate::{conjugator, Conjugator};
pub use power::{power_root_conjugate, power_word_decomposition, split_loxodromic};
pub use straighten::{assemble_g, build_shaped_straightener, build_straightener, build_vertical_shift, Assembled, StraightenerFamily};

/// One factor `root^exponent` of a power word.
#[derive(Debug, Clone)]
pub struct PowerTerm {
    pub root: MapExpr,
    pub exponent: i64,
    /// Largest displacement of `root` on the verification grid.
    pub displacement: f64,
}

#[derive(Debug, Clone)]
pub enum Factors {
    /// `f = a ∘ b ∘ a⁻¹ ∘ b⁻¹`.
    Commutator { a: MapExpr, b: MapExpr },
    /// `f = root₁^p₁ ∘ … ∘ root_r^p_r`.
    PowerWord { terms: Vec<PowerTerm> },
}

/// A conjugator together with the two maps it relates: `c ∘ σ ∘ c⁻¹ = τ`.
#[derive(Debug, Clone)]
pub struct Conjugacy {
    pub conjugator: MapExpr,
    pub sigma: MapExpr,
    pub tau: MapExpr,
}

/// Intermediate objects a certificate was built from.
#[derive(Debug, Clone, Default)]
pub struct Evidence {
    pub loxodromic: Vec<LoxodromicCertificate>,
    pub conjugacies: Vec<Conjugacy>,
}

#[derive(Debug, Clone)]
pub struct FactorizationCertificate {
    pub input: MapExpr,
    pub fiber: FiberKind,
    pub factors: Factors,
    pub settings: Settings,
    /// Grid comparison of `input` with [`FactorizationCertificate::product`].
    pub report: VerificationReport,
    pub evidence: Evidence,
}

impl Factors {
    /// The map the factors multiply out to.
    pub fn product(&self) -> Result<MapExpr> {
        match self {
            Factors::Commutator { a, b } => bracket(a, b),
            Factors::PowerWord { terms } => {
                let powers: Vec<MapExpr> = terms.iter().map(|t| t.root.power(t.exponent)).collect();
                compose(&powers)
            }
        }
    }
}

impl FactorizationCertificate {
    pub fn product(&self) -> Result<MapExpr> {
        self.factors.product()
    }
}

/// Rejects maps tied to the other fiber and maps failing the sampled
/// orientation check on the settings window.
pub(crate) fn admit(f: &MapExpr, settings: &Settings) -> Result<()> {
    if f.fiber_hint().is_some_and(|hint| hint != settings.fiber) {
        return Err(crate::Error::FiberMismatch);
    }
    let levels = match settings.fiber {
        FiberKind::Point => 201,
        FiberKind::Circle => 41,
    };
    let report = crate::homeo::check_orientation(f, settings.fiber, settings.window, levels);
    match (report.failures.is_empty(), report.graph_violations.first()) {
        (true, None) => Ok(()),
        (true, Some(&level)) => Err(crate::Error::GraphViolation {
            level,
            detail: format!("{} sampled levels have images that fold", report.graph_violations.len()),
        }),
        (false, _) => Err(crate::Error::NotOrientationPreserving(report.failures.join("; "))),
    }
}
