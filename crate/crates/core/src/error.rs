use thiserror::Error;

use crate::factor::FactorizationCertificate;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Error, Debug, Clone)]
pub enum Error {
    #[error("evaluation left the representable range")]
    NonFinite,

    #[error("maps act on different fibers")]
    FiberMismatch,

    #[error("invalid map: {0}")]
    InvalidMap(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("not orientation preserving: {0}")]
    NotOrientationPreserving(String),

    #[error("image of level {level} is not a graph: {detail}")]
    GraphViolation { level: f64, detail: String },

    #[error("curve leaves the band ({lower}, {upper}): {detail}")]
    BandViolation {
        lower: f64,
        upper: f64,
        detail: String,
    },

    #[error("no admissible level within {window} of {frontier}")]
    NotProper { frontier: i64, window: i64 },

    #[error("band index {index} is beyond the horizon {horizon}")]
    HorizonExceeded { index: i64, horizon: i64 },

    #[error("not loxodromic, condition ({condition}) fails: {detail}")]
    NotLoxodromic {
        condition: &'static str,
        detail: String,
    },

    #[error("power word factor {index} does not move any grid point")]
    TrivialFactor { index: usize },

    #[error("loxodromic maps do not share a sink")]
    EndsMismatch,

    #[error("verification failed: max error {:e} is not below {:e}", .0.report.max_error, .0.report.tolerance)]
    ToleranceExceeded(Box<FactorizationCertificate>),
}
