//! Scalar abstraction shared by every geometric type in the crate.

use std::fmt::Debug;

use nalgebra::RealField;
use num_traits::{FromPrimitive, ToPrimitive};

/// Floating point scalar (`f32` or `f64`) together with the numeric
/// thresholds that make sense at its precision.
///
/// All thresholds are scale-invariant: they are compared against residuals
/// that have already been divided by the norms of their inputs.
pub trait Real: RealField + Copy + FromPrimitive + ToPrimitive + Debug {
    /// Incidence and degeneracy threshold (coincident points, point on line,
    /// line in plane, off-plane points, skew slits).
    const INCIDENCE_TOL: f64;
    /// Maximal angle (radians) between the direction parts of the second rows
    /// for a camera to count as parallel.
    const PARALLEL_TOL: f64;
    /// Singular-value ratio under which a matrix is treated as rank deficient.
    const RANK_TOL: f64;

    /// Converts an `f64` literal into this scalar type.
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal representable")
    }

    /// Lossy conversion to `f64` for reporting.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    #[inline]
    fn incidence_tol() -> Self {
        Self::lit(Self::INCIDENCE_TOL)
    }

    #[inline]
    fn parallel_tol() -> Self {
        Self::lit(Self::PARALLEL_TOL)
    }

    #[inline]
    fn rank_tol() -> Self {
        Self::lit(Self::RANK_TOL)
    }
}

impl Real for f64 {
    const INCIDENCE_TOL: f64 = 1e-9;
    const PARALLEL_TOL: f64 = 1e-8;
    const RANK_TOL: f64 = 1e-12;
}

impl Real for f32 {
    const INCIDENCE_TOL: f64 = 1e-4;
    const PARALLEL_TOL: f64 = 1e-3;
    const RANK_TOL: f64 = 1e-6;
}
