//! Self-calibration of parallel two-slit cameras through the dual absolute
//! quadric `M = Q Ω* Qᵀ`, `Ω* = diag(1, 1, 1, 0)`.
//!
//! For a camera `A = K [R | t] Q⁻¹` with orthonormal rows in `R`,
//! `A M Aᵀ = K Kᵀ`; a known principal point makes `K Kᵀ` diagonal, so each
//! 2×4 matrix contributes the linear equation `(A M Aᵀ)₁₂ = 0`.

use nalgebra::{DMatrix, Matrix2, Matrix2x3, Matrix2x4, Matrix4, SymmetricEigen, Vector4};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::camera::{rows_2x2, rows_4x4, rq_2x3, TwoSlitCamera};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Number of independent entries of a symmetric 4×4 matrix.
const UNKNOWNS: usize = 10;
/// Singular-value ratio below which a second null direction is declared.
const NULL_RATIO: f64 = 1e-8;

/// Index pairs `(i, j)`, `i ≤ j`, in the order used for the unknown vector.
const PAIRS: [(usize, usize); UNKNOWNS] = [
    (0, 0),
    (0, 1),
    (0, 2),
    (0, 3),
    (1, 1),
    (1, 2),
    (1, 3),
    (2, 2),
    (2, 3),
    (3, 3),
];

/// Symmetric 4×4 matrix, defined up to scale. Estimates are stored at unit
/// Frobenius norm with a positive top-left entry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualAbsoluteQuadric<T: Real> {
    m: Matrix4<T>,
}

impl<T: Real> DualAbsoluteQuadric<T> {
    /// Symmetrizes and normalizes `m`.
    pub fn new(m: Matrix4<T>) -> Result<Self> {
        let s = (m + m.transpose()) * T::lit(0.5);
        let n = s.norm();
        if n == T::zero() || !n.is_finite() {
            return Err(Error::ZeroVector);
        }
        let s = s / n;
        Ok(Self {
            m: if s[(0, 0)] < T::zero() { -s } else { s },
        })
    }

    /// `Q Ω* Qᵀ`.
    pub fn from_transform(q: &Matrix4<T>) -> Result<Self> {
        Self::new(q * omega::<T>() * q.transpose())
    }

    pub fn matrix(&self) -> &Matrix4<T> {
        &self.m
    }

    /// Rescaled so that the top-left entry is one.
    pub fn unit_top_left(&self) -> Matrix4<T> {
        self.m / self.m[(0, 0)]
    }

    /// Eigenvalues and unit eigenvectors (as columns), sorted by decreasing
    /// eigenvalue.
    pub fn eigen(&self) -> ([T; 4], Matrix4<T>) {
        let eig = SymmetricEigen::new(self.m);
        let mut order = [0usize, 1, 2, 3];
        order.sort_by(|&a, &b| {
            eig.eigenvalues[b]
                .partial_cmp(&eig.eigenvalues[a])
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        let vals = order.map(|i| eig.eigenvalues[i]);
        let vecs = Matrix4::from_fn(|r, c| eig.eigenvectors[(r, order[c])]);
        (vals, vecs)
    }

    /// Largest entrywise difference, up to sign.
    pub fn distance(&self, other: &Self) -> T {
        (self.m - other.m).amax().min((self.m + other.m).amax())
    }
}

pub fn omega<T: Real>() -> Matrix4<T> {
    Matrix4::from_diagonal(&Vector4::new(T::one(), T::one(), T::one(), T::zero()))
}

/// Coefficients of `(A M Aᵀ)₁₂` in the unknowns [`PAIRS`], scaled to unit norm
/// (so the system does not depend on the scale of the rows of `A`).
pub fn constraint_row<T: Real>(a: &Matrix2x4<T>) -> [T; UNKNOWNS] {
    let mut row = PAIRS.map(|(i, j)| {
        if i == j {
            a[(0, i)] * a[(1, i)]
        } else {
            a[(0, i)] * a[(1, j)] + a[(0, j)] * a[(1, i)]
        }
    });
    let n = row.iter().fold(T::zero(), |acc, v| acc + *v * *v).sqrt();
    if n > T::zero() {
        row.iter_mut().for_each(|v| *v /= n);
    }
    row
}

/// Evaluates the constraint of `a` on `m`.
pub fn constraint_residual<T: Real>(a: &Matrix2x4<T>, m: &Matrix4<T>) -> T {
    let row = constraint_row(a);
    PAIRS
        .iter()
        .zip(row)
        .fold(T::zero(), |acc, (&(i, j), c)| acc + c * m[(i, j)])
}

/// Linear estimate of the dual absolute quadric from cameras whose principal
/// points are at the origin (diagonal `K1`, `K2`).
pub fn estimate_daq<T: Real>(
    cameras: &[TwoSlitCamera<T>],
    principal_point_at_origin: bool,
) -> Result<DualAbsoluteQuadric<T>> {
    if !principal_point_at_origin {
        return Err(Error::UnsupportedPrior);
    }
    let eqs = 2 * cameras.len();
    let need = UNKNOWNS - 1;
    if eqs < need {
        return Err(Error::InsufficientConstraints { got: eqs, need });
    }
    // pad with zero rows so the SVD always exposes all ten right singular vectors
    let mut design = DMatrix::<T>::zeros(eqs.max(UNKNOWNS), UNKNOWNS);
    for (k, a) in cameras.iter().flat_map(|c| [c.a1(), c.a2()]).enumerate() {
        for (j, v) in constraint_row(a).into_iter().enumerate() {
            design[(k, j)] = v;
        }
    }
    let svd = design.svd(false, true);
    let vt = svd.v_t.expect("v_t requested");
    let sv = &svd.singular_values;
    let mut order: Vec<usize> = (0..sv.len()).collect();
    order.sort_by(|&a, &b| {
        sv[b]
            .partial_cmp(&sv[a])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let s1 = sv[order[0]];
    if s1 == T::zero() || sv[order[UNKNOWNS - 2]] / s1 < T::lit(NULL_RATIO) {
        return Err(Error::DegenerateMotion);
    }
    let v = vt.row(order[UNKNOWNS - 1]);
    let mut m = Matrix4::zeros();
    for (k, &(i, j)) in PAIRS.iter().enumerate() {
        m[(i, j)] = v[k];
        m[(j, i)] = v[k];
    }
    DualAbsoluteQuadric::new(m)
}

/// Tuning of [`extract_upgrade`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UpgradeOptions {
    /// Upper bound on `|λ4| / λ1` for the quadric to count as rank 3.
    pub rank_ratio: f64,
    /// Eigenvalues in `[-clamp · λ1, 0)` are treated as zero; anything more
    /// negative makes the quadric indefinite.
    pub clamp: f64,
}

impl Default for UpgradeOptions {
    fn default() -> Self {
        Self {
            rank_ratio: 1e-3,
            clamp: 1e-10,
        }
    }
}

/// Analytic intrinsics of one upgraded camera: RQ factors of the direction
/// blocks of `A1 Q′` and `A2 Q′`, normalized to `K[1][1] = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Calibration<T: Real> {
    pub k1: Matrix2<T>,
    pub k2: Matrix2<T>,
}

impl<T: Real> Calibration<T> {
    /// Row-norm ratios of the direction blocks of `A1 Q′`, `A2 Q′`.
    pub fn magnifications(&self) -> (T, T) {
        let ratio = |k: &Matrix2<T>| (k[(0, 0)] * k[(0, 0)] + k[(0, 1)] * k[(0, 1)]).sqrt();
        (ratio(&self.k1), ratio(&self.k2))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct UpgradeResult<T: Real> {
    pub qprime: Matrix4<T>,
    /// Eigenvalues of `M`, decreasing.
    pub eigenvalues: [T; 4],
    pub upgraded: Vec<TwoSlitCamera<T>>,
    pub calibrations: Vec<Calibration<T>>,
}

/// `Q′` with `Q′ Ω* Q′ᵀ = M`, from the eigendecomposition of `M`, together
/// with the upgraded cameras `A Q′` and their calibration matrices.
pub fn extract_upgrade<T: Real>(
    m: &DualAbsoluteQuadric<T>,
    cameras: &[TwoSlitCamera<T>],
    opts: UpgradeOptions,
) -> Result<UpgradeResult<T>> {
    let (mut vals, vecs) = m.eigen();
    let l1 = vals[0];
    if l1 <= T::zero() {
        return Err(Error::IndefiniteQuadric);
    }
    // a significantly negative eigenvalue is indefiniteness, not rank excess
    if vals[3] <= -T::lit(opts.rank_ratio) * l1 {
        return Err(Error::IndefiniteQuadric);
    }
    let ratio = (vals[3] / l1).abs();
    if ratio >= T::lit(opts.rank_ratio) {
        return Err(Error::RankTest {
            ratio: ratio.as_f64(),
        });
    }
    for v in vals.iter_mut().take(3) {
        if *v < T::zero() {
            if *v < -T::lit(opts.clamp) * l1 {
                return Err(Error::IndefiniteQuadric);
            }
            *v = T::zero();
        }
    }
    if vals[2] / l1 < T::lit(opts.rank_ratio) {
        return Err(Error::RankTest {
            ratio: (vals[2] / l1).as_f64(),
        });
    }
    let scales = Vector4::new(vals[0].sqrt(), vals[1].sqrt(), vals[2].sqrt(), T::one());
    let qprime = vecs * Matrix4::from_diagonal(&scales);
    let mut upgraded = Vec::with_capacity(cameras.len());
    let mut calibrations = Vec::with_capacity(cameras.len());
    for cam in cameras {
        let (a1, a2) = (cam.a1() * qprime, cam.a2() * qprime);
        calibrations.push(Calibration {
            k1: direction_rq(&a1)?,
            k2: direction_rq(&a2)?,
        });
        upgraded.push(TwoSlitCamera::new(a1, a2)?);
    }
    Ok(UpgradeResult {
        qprime,
        eigenvalues: vals,
        upgraded,
        calibrations,
    })
}

fn direction_rq<T: Real>(a: &Matrix2x4<T>) -> Result<Matrix2<T>> {
    let m: Matrix2x3<T> = a.fixed_view::<2, 3>(0, 0).into_owned();
    Ok(rq_2x3(&m)?.0)
}

/// How far `H = Q⁻¹ Q′`, scaled to `H[3][3] = 1`, is from a similarity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimilarityCheck {
    /// `max |SᵀS / s² − I|` for the upper-left block `S`, `s² = tr(SᵀS) / 3`.
    pub orthogonality: f64,
    /// `max |H[3][0..3]|`.
    pub affine_row: f64,
    /// `s`.
    pub scale: f64,
}

impl SimilarityCheck {
    pub fn passes(&self, tol: f64) -> bool {
        self.orthogonality < tol && self.affine_row < tol
    }
}

pub fn similarity_check<T: Real>(q: &Matrix4<T>, qprime: &Matrix4<T>) -> Result<SimilarityCheck> {
    let qi = q.try_inverse().ok_or(Error::SingularTransform)?;
    let h = qi * qprime;
    if h[(3, 3)] == T::zero() {
        return Err(Error::SingularTransform);
    }
    let h = h / h[(3, 3)];
    let s = h.fixed_view::<3, 3>(0, 0).into_owned();
    let sts = s.transpose() * s;
    let s2 = sts.trace() / T::lit(3.0);
    let orth = (sts / s2 - nalgebra::Matrix3::identity()).amax();
    let row = h.fixed_view::<1, 3>(3, 0).amax();
    Ok(SimilarityCheck {
        orthogonality: orth.as_f64(),
        affine_row: row.as_f64(),
        scale: s2.sqrt().as_f64(),
    })
}

impl<T: Real + Serialize> Serialize for DualAbsoluteQuadric<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        rows_4x4(&self.m).serialize(s)
    }
}

impl<'de, T: Real + Deserialize<'de>> Deserialize<'de> for DualAbsoluteQuadric<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = <[[T; 4]; 4]>::deserialize(d)?;
        Self::new(Matrix4::from_fn(|r, c| rows[r][c])).map_err(serde::de::Error::custom)
    }
}

#[derive(Serialize)]
struct CalibrationRepr<T> {
    #[serde(rename = "K1")]
    k1: [[T; 2]; 2],
    #[serde(rename = "K2")]
    k2: [[T; 2]; 2],
}

impl<T: Real + Serialize> Serialize for Calibration<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CalibrationRepr {
            k1: rows_2x2(&self.k1),
            k2: rows_2x2(&self.k2),
        }
        .serialize(s)
    }
}

#[derive(Serialize)]
struct UpgradeRepr<'a, T: Real> {
    #[serde(rename = "Qprime")]
    qprime: [[T; 4]; 4],
    eigenvalues: [T; 4],
    calibrations: &'a [Calibration<T>],
}

impl<T: Real + Serialize> Serialize for UpgradeResult<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        UpgradeRepr {
            qprime: rows_4x4(&self.qprime),
            eigenvalues: self.eigenvalues,
            calibrations: &self.calibrations,
        }
        .serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{Matrix3, Rotation3, Vector3};

    /// The projective change of coordinates of the reference experiment.
    const REFERENCE_Q: [[f64; 4]; 4] = [
        [1.49, 0.60, -0.11, -1.15],
        [-1.43, 0.88, -0.93, 1.52],
        [-0.38, -0.21, 1.83, -0.55],
        [0.83, -0.95, -0.63, 0.93],
    ];

    fn reference_q() -> Matrix4<f64> {
        Matrix4::from_fn(|r, c| REFERENCE_Q[r][c])
    }

    /// Parallel camera `K1 [r1 t1; r3 t3]`, `K2 [r2 t2; r3 t4]` seen through `Q`.
    fn parallel_camera(i: usize, k1: f64, k2: f64, q: &Matrix4<f64>) -> TwoSlitCamera<f64> {
        let f = i as f64;
        let rot = Rotation3::from_euler_angles(0.3 + 0.7 * f, -0.2 + 0.45 * f, 1.1 * f + 0.1);
        let m = rot.matrix();
        let (e1, e2, e3): (Vector3<f64>, Vector3<f64>, Vector3<f64>) = (
            m.row(0).transpose(),
            m.row(1).transpose(),
            m.row(2).transpose(),
        );
        let th = 0.4 + 0.25 * f;
        let r2 = e1 * th.cos() + e2 * th.sin();
        let t = [0.3 * f - 1.0, 0.5 - 0.1 * f, 4.0 + 0.2 * f, 5.5 - 0.15 * f];
        let row = |r: &Vector3<f64>, t: f64| [r.x, r.y, r.z, t];
        let a1 = Matrix2x4::from_rows(&[row(&e1, t[0]).into(), row(&e3, t[2]).into()]);
        let a2 = Matrix2x4::from_rows(&[row(&r2, t[1]).into(), row(&e3, t[3]).into()]);
        let qi = q.try_inverse().unwrap();
        let k = |s: f64| Matrix2::new(s, 0.0, 0.0, 1.0);
        TwoSlitCamera::new(k(k1) * a1 * qi, k(k2) * a2 * qi).unwrap()
    }

    fn camera_set(q: &Matrix4<f64>) -> Vec<TwoSlitCamera<f64>> {
        (0..10)
            .map(|i| parallel_camera(i, 1.5 + 0.3 * i as f64, 0.8 + 0.17 * i as f64, q))
            .collect()
    }

    #[test]
    fn reference_quadric_matches_displayed_values() {
        let expected = [
            [1.0, -0.58, -0.34, 0.28],
            [-0.58, 1.42, -0.52, -0.55],
            [-0.34, -0.52, 1.36, -0.49],
            [0.28, -0.55, -0.49, 0.77],
        ];
        let m = DualAbsoluteQuadric::from_transform(&reference_q())
            .unwrap()
            .unit_top_left();
        for r in 0..4 {
            for c in 0..4 {
                assert!(
                    (m[(r, c)] - expected[r][c]).abs() < 0.01,
                    "({r},{c}) {}",
                    m[(r, c)]
                );
            }
        }
    }

    #[test]
    fn constraints_vanish_on_true_quadric() {
        let q = reference_q();
        let m = q * omega::<f64>() * q.transpose();
        for cam in camera_set(&q) {
            for a in [cam.a1(), cam.a2()] {
                assert!(constraint_residual(a, &m).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn noiseless_pipeline_recovers_quadric_and_magnifications() {
        let q = reference_q();
        let cams = camera_set(&q);
        let m = estimate_daq(&cams, true).unwrap();
        let truth = DualAbsoluteQuadric::from_transform(&q).unwrap();
        assert!(m.distance(&truth) < 1e-8);
        let up = extract_upgrade(&m, &cams, UpgradeOptions::default()).unwrap();
        let back = up.qprime * omega::<f64>() * up.qprime.transpose();
        assert!(DualAbsoluteQuadric::new(back).unwrap().distance(&m) < 1e-12);
        for (i, cal) in up.calibrations.iter().enumerate() {
            let (m1, m2) = cal.magnifications();
            let (t1, t2) = (1.5 + 0.3 * i as f64, 0.8 + 0.17 * i as f64);
            assert!((m1 - t1).abs() / t1 < 1e-6, "{m1} vs {t1}");
            assert!((m2 - t2).abs() / t2 < 1e-6, "{m2} vs {t2}");
            assert!(cal.k1[(0, 1)].abs() < 1e-6 && cal.k2[(0, 1)].abs() < 1e-6);
        }
        let check = similarity_check(&q, &up.qprime).unwrap();
        assert!(check.passes(1e-8), "{check:?}");
        for cam in &up.upgraded {
            cam.decompose_parallel().unwrap();
        }
    }

    #[test]
    fn euclidean_cameras_give_omega() {
        let cams = camera_set(&Matrix4::identity());
        let m = estimate_daq(&cams, true).unwrap();
        let truth = DualAbsoluteQuadric::new(omega()).unwrap();
        assert!(m.distance(&truth) < 1e-9);
    }

    #[test]
    fn omega_upgrade_is_identity_up_to_gauge() {
        let m = DualAbsoluteQuadric::new(omega::<f64>()).unwrap();
        let up = extract_upgrade(&m, &[], UpgradeOptions::default()).unwrap();
        let block: Matrix3<f64> = up.qprime.fixed_view::<3, 3>(0, 0).into_owned();
        let g = block.transpose() * block;
        assert!((g / g[(0, 0)] - Matrix3::identity()).amax() < 1e-12);
        assert!(up.qprime.fixed_view::<1, 3>(3, 0).amax() < 1e-12);
    }

    #[test]
    fn too_few_cameras() {
        let cams = camera_set(&reference_q());
        assert_eq!(
            estimate_daq(&cams[..2], true).unwrap_err(),
            Error::InsufficientConstraints { got: 4, need: 9 }
        );
        assert_eq!(
            estimate_daq(&cams, false).unwrap_err(),
            Error::UnsupportedPrior
        );
    }

    #[test]
    fn repeated_camera_is_degenerate_motion() {
        let cams = vec![parallel_camera(1, 2.0, 1.0, &reference_q()); 6];
        assert_eq!(
            estimate_daq(&cams, true).unwrap_err(),
            Error::DegenerateMotion
        );
    }

    #[test]
    fn full_rank_quadric_fails_rank_test() {
        let m = DualAbsoluteQuadric::new(Matrix4::<f64>::identity()).unwrap();
        assert!(matches!(
            extract_upgrade(&m, &[], UpgradeOptions::default()),
            Err(Error::RankTest { .. })
        ));
        let m =
            DualAbsoluteQuadric::new(Matrix4::from_diagonal(&Vector4::new(1.0, 1.0, -1.0, 0.0)))
                .unwrap();
        assert_eq!(
            extract_upgrade(&m, &[], UpgradeOptions::default()).unwrap_err(),
            Error::IndefiniteQuadric
        );
    }

    #[test]
    fn row_rescaling_does_not_change_estimate() {
        let q = reference_q();
        let cams = camera_set(&q);
        let scaled: Vec<_> = cams
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let s = Matrix2::new(3.0 + i as f64, 0.0, 0.0, -0.2);
                TwoSlitCamera::new(s * c.a1(), c.a2() * (-7.0)).unwrap()
            })
            .collect();
        let (a, b) = (
            estimate_daq(&cams, true).unwrap(),
            estimate_daq(&scaled, true).unwrap(),
        );
        assert!(a.distance(&b) < 1e-10);
    }

    #[test]
    fn json_shape() {
        let m = DualAbsoluteQuadric::from_transform(&reference_q()).unwrap();
        let v = serde_json::to_value(m).unwrap();
        assert_eq!(v.as_array().unwrap().len(), 4);
        let back: DualAbsoluteQuadric<f64> = serde_json::from_value(v).unwrap();
        assert!(back.distance(&m) < 1e-15);
        let up = extract_upgrade(
            &m,
            &camera_set(&reference_q())[..1],
            UpgradeOptions::default(),
        )
        .unwrap();
        let v = serde_json::to_value(&up).unwrap();
        assert!(v["Qprime"].is_array() && v["eigenvalues"].is_array());
        assert!(v["calibrations"][0]["K1"].is_array());
    }
}
