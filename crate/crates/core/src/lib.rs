//! Two-slit and pushbroom cameras as pairs of 2×4 matrices: Plücker line
//! geometry, linear camera models and their calibration, the 2×2×2×2
//! epipolar tensor with structure-from-motion, and self-calibration through
//! the dual absolute quadric.
//!
//! Everything is generic over [`Real`] (`f32`/`f64`); `f64` aliases are
//! exported at the crate root for the common case.

pub mod camera;
pub mod congruence;
pub mod epipolar;
pub mod error;
pub mod harness;
pub mod projective;
pub mod scalar;
pub mod selfcal;

pub use camera::{
    apply_space_transform, decompose_parallel, decompose_pushbroom, is_parallel, project, slits,
    to_quadratic, ParallelDecomposition, PushbroomDecomposition, TwoSlitCamera,
};
pub use congruence::{
    essential_map_general, inverse_project, quadratic_project, transversal_homography,
    transversal_homography_to, two_slit_essential, GeneralCongruence, QuadraticCamera,
    TwoSlitCongruence,
};
pub use epipolar::{
    cameras_from_minor_matrix, canonical_frame, epipolar_residual, essential_compose,
    essential_decompose, estimate_tensor_linear, recover_minor_matrices, refine_minor_matrix,
    tensor_from_cameras, two_configurations, CameraPair, Correspondence, EpipolarTensor,
    MinorMatrix,
};
pub use error::{Error, Result};
pub use projective::{
    build_line_to_image, frame_coords, join_line_point, join_points, meet_line_plane, proj_dist,
    proj_eq, LineToImageMap, PluckerLine, PluckerMatrix, ProjPlane, ProjPoint, RetinalFrame,
};
pub use scalar::Real;
pub use selfcal::{
    estimate_daq, extract_upgrade, similarity_check, Calibration, DualAbsoluteQuadric,
    SimilarityCheck, UpgradeOptions, UpgradeResult,
};

pub type Point = ProjPoint<f64>;
pub type Plane = ProjPlane<f64>;
pub type Line = PluckerLine<f64>;
pub type Frame = RetinalFrame<f64>;
pub type Camera = TwoSlitCamera<f64>;
