//! Commutator factorizations of end-preserving homeomorphisms of the line
//! `ℝ` and the cylinder `S¹ × ℝ`.
//!
//! Every such map `f` is written as `a ∘ b ∘ a⁻¹ ∘ b⁻¹` with explicit,
//! evaluable `a` and `b`, and the identity is checked on a grid. See
//! [`commutator_factorization`] and [`power_word_decomposition`].

pub mod corpus;
mod error;
pub mod factor;
pub mod homeo;
mod roots;
pub mod settings;
pub mod suited;
pub mod verify;

pub use error::{Error, Result};
pub use factor::{
    assemble_g, build_shaped_straightener, build_straightener, build_vertical_shift, commutator_factorization, conjugator,
    power_root_conjugate, power_word_decomposition, split_loxodromic, Assembled, Conjugacy, Evidence,
    FactorizationCertificate, Factors, PowerTerm,
};
pub use homeo::{
    check_orientation, commutator, compose, eval, invert, level_image, sup_distance, CPoint, FiberKind,
    GraphCurve, KnotShape, MapExpr, OrientationReport,
};
pub use settings::{Settings, StraightenerShape};
pub use suited::{
    build_suited, certify_loxodromic, Bands, End, LatticeSnapshot, LoxodromicCertificate, SuitedDecomposition,
    SuitedParams,
};
pub use verify::{verify_dynamics, verify_identity, verify_suitedness, Grid, VerificationReport, WorstPoint};
