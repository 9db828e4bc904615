//! Synthetic experiments reproducing the worked examples: scene generation,
//! structure from motion, self-calibration, golden checks and JSON output.

pub mod calibration;
pub mod fixtures;
pub mod format;
pub mod golden;
pub mod random;
pub mod report;
pub mod scene;
pub mod sfm;

pub use calibration::{
    analyze_selfcal, generate_selfcal_input, run_selfcal_experiment, SelfcalConfig, SelfcalReport,
};
pub use report::{ExperimentReport, Failure, FailureKind, Outcome, Summary};
pub use scene::{generate_scene, SceneConfig, SyntheticScene, RNG_ALGORITHM};
pub use sfm::{
    analyze_sfm, refine_point, reprojection_rms, run_sfm_experiment, triangulate, SfmReport,
    SfmResult,
};
