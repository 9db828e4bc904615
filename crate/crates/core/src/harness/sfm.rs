//! Two-view structure from motion on synthetic scenes: linear tensor
//! estimate, principal-minor recovery, both camera configurations, and
//! reprojection through triangulated points.

use nalgebra::{Matrix4, Vector3};
use serde::{Deserialize, Serialize};

use super::report::{ExperimentReport, Outcome, Summary};
use super::scene::{inhomogeneous, SyntheticScene};
use crate::camera::TwoSlitCamera;
use crate::epipolar::{
    canonical_frame, epipolar_residual, estimate_tensor_linear, recover_minor_matrices,
    refine_minor_matrix, two_configurations, Correspondence, EpipolarTensor, MinorMatrix,
};
use crate::error::{Error, Result};
use crate::projective::{PluckerLine, ProjPoint};

type Camera = TwoSlitCamera<f64>;

/// Closest point to the rays of `c.u` and `c.uprime`: the midpoint of their
/// common perpendicular, or, for parallel rays and rays at infinity, the
/// least-squares solution of the four back-projection planes.
pub fn triangulate(a: &Camera, b: &Camera, c: &Correspondence<f64>) -> Result<ProjPoint<f64>> {
    let ra = a.back_project(&c.u)?;
    let rb = b.back_project(&c.uprime)?;
    if let Some(x) = closest_point(&ra, &rb) {
        return Ok(x);
    }
    planes_least_squares(a, b, c)
}

fn closest_point(ra: &PluckerLine<f64>, rb: &PluckerLine<f64>) -> Option<ProjPoint<f64>> {
    let (p1, d1) = ra.affine()?;
    let (p2, d2) = rb.affine()?;
    let w0 = p1 - p2;
    let (a, b, c) = (d1.dot(&d1), d1.dot(&d2), d2.dot(&d2));
    let (d, e) = (d1.dot(&w0), d2.dot(&w0));
    let den = a * c - b * b;
    if den <= 1e-12 * a * c {
        return None;
    }
    let s = (b * e - c * d) / den;
    let t = (a * e - b * d) / den;
    let x: Vector3<f64> = (p1 + d1 * s + p2 + d2 * t) / 2.0;
    x.iter()
        .all(|v| v.is_finite())
        .then(|| ProjPoint::finite(x.x, x.y, x.z))
}

fn planes_least_squares(a: &Camera, b: &Camera, c: &Correspondence<f64>) -> Result<ProjPoint<f64>> {
    let planes = |cam: &Camera, u: &Vector3<f64>| {
        let (p, q) = (cam.a1(), cam.a2());
        [
            p.row(1) * u[0] - p.row(0) * u[2],
            q.row(1) * u[1] - q.row(0) * u[2],
        ]
    };
    let [w1, w2] = planes(a, &c.u);
    let [w3, w4] = planes(b, &c.uprime);
    let m = Matrix4::from_rows(&[
        w1.normalize(),
        w2.normalize(),
        w3.normalize(),
        w4.normalize(),
    ]);
    let svd = m.svd(false, true);
    let vt = svd.v_t.ok_or(Error::UndefinedProjection)?;
    let k = svd.singular_values.imin();
    ProjPoint::new(vt.row(k).transpose())
}

/// Gauss–Newton refinement of a homogeneous point against the four image
/// residuals `p1ᵀx / p2ᵀx − u1/u3`, `q1ᵀx / q2ᵀx − u2/u3` in both views,
/// with the step constrained orthogonal to `x` (the scale direction).
pub fn refine_point(
    a: &Camera,
    b: &Camera,
    c: &Correspondence<f64>,
    start: &ProjPoint<f64>,
) -> ProjPoint<f64> {
    let (Some(ua), Some(ub)) = (inhomogeneous(&c.u), inhomogeneous(&c.uprime)) else {
        return *start;
    };
    let rows = [
        (a.a1().row(0).transpose(), a.a1().row(1).transpose(), ua.0),
        (a.a2().row(0).transpose(), a.a2().row(1).transpose(), ua.1),
        (b.a1().row(0).transpose(), b.a1().row(1).transpose(), ub.0),
        (b.a2().row(0).transpose(), b.a2().row(1).transpose(), ub.1),
    ];
    let cost = |x: &nalgebra::Vector4<f64>| -> Option<f64> {
        let mut s = 0.0;
        for (n, d, o) in &rows {
            let den = d.dot(x);
            if den.abs() <= 1e-14 * d.norm() * x.norm() {
                return None;
            }
            s += (n.dot(x) / den - o).powi(2);
        }
        Some(s)
    };
    let mut x = start.coords().normalize();
    let Some(mut best) = cost(&x) else {
        return *start;
    };
    for _ in 0..20 {
        let mut j = nalgebra::Matrix5x4::zeros();
        let mut r = nalgebra::Vector5::zeros();
        for (k, (n, d, o)) in rows.iter().enumerate() {
            let (nx, dx) = (n.dot(&x), d.dot(&x));
            r[k] = nx / dx - o;
            j.set_row(k, &((n * dx - d * nx) / (dx * dx)).transpose());
        }
        j.set_row(4, &x.transpose());
        let Some(step) = j.svd(true, true).solve(&-r, 1e-15).ok() else {
            break;
        };
        let cand = (x + step).normalize();
        match cost(&cand) {
            Some(c) if c < best => {
                let done = best - c <= 1e-15 * best;
                x = cand;
                best = c;
                if done {
                    break;
                }
            }
            _ => break,
        }
    }
    ProjPoint::new(x).expect("unit vector")
}

/// Root mean square of the 2D reprojection error over both views, each point
/// triangulated by closest point and then refined on image error.
pub fn reprojection_rms(a: &Camera, b: &Camera, corrs: &[Correspondence<f64>]) -> Result<f64> {
    let mut sum = 0.0;
    for c in corrs {
        let x = refine_point(a, b, c, &triangulate(a, b, c)?);
        for (cam, obs) in [(a, &c.u), (b, &c.uprime)] {
            let proj = inhomogeneous(&cam.project(&x)?).ok_or(Error::UndefinedProjection)?;
            let obs = inhomogeneous(obs).ok_or(Error::UndefinedProjection)?;
            sum += (proj.0 - obs.0).powi(2) + (proj.1 - obs.1).powi(2);
        }
    }
    Ok((sum / (2 * corrs.len().max(1)) as f64).sqrt())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigurationReport {
    pub cameras: [Camera; 2],
    pub minor_matrix: MinorMatrix<f64>,
    /// Distance between this configuration's tensor and the estimate, both
    /// at unit norm.
    pub tensor_agreement: f64,
    pub reprojection_rms: f64,
    /// Largest entrywise difference from the ground-truth minor matrix.
    pub delta_to_truth: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SfmResult {
    /// Unit-norm linear estimate.
    pub estimated_tensor: EpipolarTensor<f64>,
    pub true_tensor: EpipolarTensor<f64>,
    pub tensor_delta: f64,
    /// Relative residual of the estimate on the observed correspondences.
    pub epipolar_residual: Summary,
    /// Residuals of the eight candidates, ascending.
    pub candidate_residuals: Vec<f64>,
    pub true_minor_matrix: MinorMatrix<f64>,
    pub configurations: [ConfigurationReport; 2],
    /// Index of the configuration closest to the ground truth.
    pub matching_configuration: usize,
}

impl SfmResult {
    pub fn matching(&self) -> &ConfigurationReport {
        &self.configurations[self.matching_configuration]
    }
}

pub type SfmReport = ExperimentReport<SyntheticScene, SfmResult>;

pub fn run_sfm_experiment(scene: &SyntheticScene) -> SfmReport {
    let outcome =
        estimate_tensor_linear(&scene.correspondences).and_then(|f| analyze_sfm(scene, &f));
    ExperimentReport::new(
        "sfm",
        scene.rng_seed,
        scene.noise_sigma,
        scene.clone(),
        Outcome::from_result(outcome),
    )
}

/// Everything downstream of the tensor estimate; re-running it on a stored
/// report reproduces the report exactly.
pub fn analyze_sfm(scene: &SyntheticScene, estimate: &EpipolarTensor<f64>) -> Result<SfmResult> {
    let [ca, cb] = &scene.cameras;
    let estimate = estimate.normalized();
    let true_tensor = crate::epipolar::tensor_from_cameras(ca, cb).normalized();
    let (_, truth) = canonical_frame(ca, cb)?;
    let cands = recover_minor_matrices(&estimate)?;
    let refined = refine_minor_matrix(&estimate, &cands[0].0)?;
    let (first, second) = two_configurations(&refined)?;
    let mut configurations = Vec::with_capacity(2);
    for (a, b) in [first, second] {
        let (_, minor) = canonical_frame(&a, &b)?;
        let tensor = crate::epipolar::tensor_from_cameras(&a, &b).normalized();
        configurations.push(ConfigurationReport {
            cameras: [a, b],
            minor_matrix: minor,
            tensor_agreement: tensor.distance(&estimate),
            reprojection_rms: reprojection_rms(&a, &b, &scene.correspondences)?,
            delta_to_truth: (minor.matrix() - truth.matrix()).amax(),
        });
    }
    let matching_configuration =
        usize::from(configurations[1].delta_to_truth < configurations[0].delta_to_truth);
    let configurations: [ConfigurationReport; 2] =
        configurations.try_into().expect("two configurations");
    Ok(SfmResult {
        estimated_tensor: estimate,
        true_tensor,
        tensor_delta: estimate.distance(&true_tensor),
        epipolar_residual: Summary::of(
            scene
                .correspondences
                .iter()
                .map(|c| epipolar_residual(&estimate, c).abs()),
        ),
        candidate_residuals: cands.iter().map(|c| c.1).collect(),
        true_minor_matrix: truth,
        configurations,
        matching_configuration,
    })
}
