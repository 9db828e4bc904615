use thiserror::Error;

/// Failures reported by the geometric routines.
///
/// Variants fall into two families: precondition/validation failures on the
/// caller's input, and numerical degeneracies discovered while computing.
/// [`Error::is_degeneracy`] tells them apart.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("points are coincident up to scale")]
    CoincidentPoints,
    #[error("line lies in the plane")]
    LineInPlane,
    #[error("point lies on the line")]
    PointOnLine,
    #[error("point does not lie on the retinal plane")]
    OffPlane,
    #[error("retinal frame is rank deficient")]
    RankDeficientFrame,
    #[error("homogeneous vector is zero")]
    ZeroVector,
    #[error("coordinates violate the Plücker quadric")]
    NotALine,
    #[error("point lies in the focal locus of the congruence")]
    BasePoint,
    #[error("form degrees do not match the congruence class {beta}")]
    FormDegree { beta: usize },
    #[error("point lies on a slit")]
    PointOnSlit,
    #[error("slits intersect")]
    IntersectingSlits,
    #[error("projection is undefined at this point")]
    UndefinedProjection,
    #[error("degenerate retinal frame: {0}")]
    DegenerateFrame(&'static str),
    #[error("planes do not meet in a transversal to both slits")]
    NonTransversal,
    #[error("invalid two-slit camera: {0}")]
    InvalidCamera(&'static str),
    #[error("retinal plane does not contain the base line of the camera")]
    InvalidRetinalPlane,
    #[error("camera is not parallel")]
    NotParallel,
    #[error("slit direction vector is zero")]
    ZeroSlitDirection,
    #[error("camera does not have the pushbroom shape")]
    NotPushbroom,
    #[error("first and third direction vectors are not orthogonal (cosine {cosine:.3e})")]
    NonOrthogonal { cosine: f64 },
    #[error("singular transformation")]
    SingularTransform,
    #[error("need at least {need} correspondences, got {got}")]
    InsufficientCorrespondences { got: usize, need: usize },
    #[error("design matrix is rank deficient (degenerate configuration)")]
    RankDeficientDesign,
    #[error("tensor cannot be normalized: f2222 vanishes")]
    NormalizationFailure,
    #[error("no real minor-matrix candidates")]
    NoRealCandidates,
    #[error("transposed minor matrix cannot be renormalized")]
    TransposeRenormalization,
    #[error("singular calibration matrix")]
    SingularCalibration,
    #[error("need at least {need} constraints, got {got}")]
    InsufficientConstraints { got: usize, need: usize },
    #[error("constraint system has a null space of dimension > 1 (degenerate motion)")]
    DegenerateMotion,
    #[error("quadric is not rank 3 (eigenvalue ratio {ratio:.3e})")]
    RankTest { ratio: f64 },
    #[error("quadric is indefinite")]
    IndefiniteQuadric,
    #[error("only the zero-principal-point prior is supported")]
    UnsupportedPrior,
    #[error("invalid configuration: {0}")]
    Config(String),
}

impl Error {
    /// True for numerical degeneracies discovered during computation, false
    /// for violations of input validity or configuration.
    pub fn is_degeneracy(&self) -> bool {
        matches!(
            self,
            Error::RankDeficientDesign
                | Error::NormalizationFailure
                | Error::NoRealCandidates
                | Error::TransposeRenormalization
                | Error::DegenerateMotion
                | Error::RankTest { .. }
                | Error::IndefiniteQuadric
                | Error::BasePoint
                | Error::UndefinedProjection
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
