use thiserror::Error;

use crate::isometry::Isometry;

#[derive(Debug, Error)]
pub enum Error {
    #[error("determinant {det} is not 1 (entries {entries:?})")]
    BadDeterminant { det: f64, entries: [f64; 4] },

    #[error("invalid point: {0}")]
    InvalidPoint(String),

    #[error("operation undefined for the identity element")]
    IdentityInput,

    #[error("coincident points have no perpendicular bisector")]
    CoincidentPoints,

    #[error("center is an elliptic point fixed by {stabilizer}")]
    EllipticCenter { stabilizer: Isometry },

    #[error("element ball is not certified to radius {needed:.6} (have {have})")]
    InsufficientCertificate { needed: f64, have: String },

    #[error("enumeration cap exceeded: {0}")]
    ResourceCap(String),

    #[error("could not certify the Dirichlet domain: {0}")]
    Uncertified(String),

    #[error("no horoball height in the schedule passed for cusp {cusp}")]
    NoHoroballHeight { cusp: String },

    #[error("polygon has no free sides; group is of the first kind")]
    NoFreeSides,

    #[error("cover is not verified for this domain")]
    UnverifiedCover,

    #[error("invalid input: {0}")]
    Input(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
