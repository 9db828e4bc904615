//! Projective two-slit cameras as pairs of 2×4 matrices, the parallel and
//! pushbroom affine models and their calibration decompositions.
//!
//! A camera `(A1, A2)` with rows `(p1; p2)` and `(q1; q2)` maps
//! `x ↦ (p1ᵀx · q2ᵀx, p2ᵀx · q1ᵀx, p2ᵀx · q2ᵀx)`; each matrix is defined up
//! to its own scale and the slits are the lines `p1 ∧ p2`, `q1 ∧ q2`.

use nalgebra::{Matrix2, Matrix2x3, Matrix2x4, Matrix4, RowVector3, Vector2, Vector3, Vector4};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::congruence::{QuadraticCamera, TwoSlitCongruence};
use crate::error::{Error, Result};
use crate::projective::{cross4, PluckerLine, ProjPlane, ProjPoint, RetinalFrame};
use crate::scalar::Real;

pub(crate) fn rows_2x4<T: Real>(m: &Matrix2x4<T>) -> [[T; 4]; 2] {
    std::array::from_fn(|r| std::array::from_fn(|c| m[(r, c)]))
}

pub(crate) fn rows_2x2<T: Real>(m: &Matrix2<T>) -> [[T; 2]; 2] {
    std::array::from_fn(|r| std::array::from_fn(|c| m[(r, c)]))
}

pub(crate) fn rows_4x4<T: Real>(m: &Matrix4<T>) -> [[T; 4]; 4] {
    std::array::from_fn(|r| std::array::from_fn(|c| m[(r, c)]))
}

pub(crate) fn from_rows_2x4<T: Real>(a: &[[T; 4]; 2]) -> Matrix2x4<T> {
    Matrix2x4::from_fn(|r, c| a[r][c])
}

/// Unit Frobenius norm, sign fixed by the first nonzero entry of the second
/// row (falling back to the first row).
fn normalize_pair<T: Real>(m: &Matrix2x4<T>) -> Matrix2x4<T> {
    let n = m / m.norm();
    let tiny = T::incidence_tol();
    let lead = n
        .row(1)
        .iter()
        .chain(n.row(0).iter())
        .copied()
        .find(|v| v.abs() > tiny)
        .unwrap_or(T::one());
    if lead < T::zero() {
        -n
    } else {
        n
    }
}

/// The projective two-slit camera. Matrices are stored exactly as given;
/// comparisons go through [`TwoSlitCamera::normalized`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoSlitCamera<T: Real> {
    a1: Matrix2x4<T>,
    a2: Matrix2x4<T>,
}

impl<T: Real> TwoSlitCamera<T> {
    /// Checks that each matrix has rank 2 and that the stacked 4×4 matrix of
    /// the normalized pair is nonsingular (disjoint null spaces).
    pub fn new(a1: Matrix2x4<T>, a2: Matrix2x4<T>) -> Result<Self> {
        if a1.iter().chain(a2.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidCamera("non-finite entry"));
        }
        for a in [&a1, &a2] {
            let sv = a.singular_values();
            let (hi, lo) = (sv.max(), sv.min());
            if hi == T::zero() || lo / hi < T::incidence_tol() {
                return Err(Error::InvalidCamera("matrix is not of rank 2"));
            }
        }
        let stacked = stack(&(a1 / a1.norm()), &(a2 / a2.norm()));
        let sv = stacked.singular_values();
        if sv.min() / sv.max() < T::incidence_tol() {
            return Err(Error::InvalidCamera("null spaces intersect"));
        }
        Ok(Self { a1, a2 })
    }

    pub fn from_rows(a1: [[T; 4]; 2], a2: [[T; 4]; 2]) -> Result<Self> {
        Self::new(from_rows_2x4(&a1), from_rows_2x4(&a2))
    }

    /// `A1 = [1 0 0 0; 0 0 1 0]`, `A2 = [2cosθ 2sinθ 0 0; 0 0 1 d]`: slits at
    /// angle `θ` and distance `d`, decomposing with `K1 = I`, `K2 = diag(2,1)`.
    pub fn canonical_parallel(theta: T, d: T) -> Result<Self> {
        let (o, z, two) = (T::one(), T::zero(), T::lit(2.0));
        Self::new(
            Matrix2x4::new(o, z, z, z, z, z, o, z),
            Matrix2x4::new(two * theta.cos(), two * theta.sin(), z, z, z, z, o, d),
        )
    }

    /// `A1 = [sinθ cosθ 0 0; 0 0 0 1]`, `A2 = [0 1 0 0; 0 0 1 0]`.
    pub fn canonical_pushbroom(theta: T) -> Result<Self> {
        let (o, z) = (T::one(), T::zero());
        Self::new(
            Matrix2x4::new(theta.sin(), theta.cos(), z, z, z, z, z, o),
            Matrix2x4::new(z, o, z, z, z, z, o, z),
        )
    }

    pub fn a1(&self) -> &Matrix2x4<T> {
        &self.a1
    }

    pub fn a2(&self) -> &Matrix2x4<T> {
        &self.a2
    }

    /// `[A1; A2]` as a 4×4 matrix.
    pub fn stacked(&self) -> Matrix4<T> {
        stack(&self.a1, &self.a2)
    }

    /// Both matrices at unit Frobenius norm with the sign convention of
    /// [`normalize_pair`].
    pub fn normalized(&self) -> Self {
        Self {
            a1: normalize_pair(&self.a1),
            a2: normalize_pair(&self.a2),
        }
    }

    /// Largest entrywise difference after normalization.
    pub fn distance(&self, other: &Self) -> T {
        let (a, b) = (self.normalized(), other.normalized());
        (a.a1 - b.a1).amax().max((a.a2 - b.a2).amax())
    }

    /// Equality up to independent scale of each matrix.
    pub fn approx_eq(&self, other: &Self, tol: T) -> bool {
        self.distance(other) < tol
    }

    /// Image of `x`: `u1/u3 = p1ᵀx / p2ᵀx`, `u2/u3 = q1ᵀx / q2ᵀx`.
    pub fn project(&self, x: &ProjPoint<T>) -> Result<Vector3<T>> {
        let p = self.a1 * x.coords();
        let q = self.a2 * x.coords();
        let u = Vector3::new(p[0] * q[1], p[1] * q[0], p[1] * q[1]);
        let scale = self.a1.norm() * self.a2.norm() * x.coords().norm_squared();
        if u.norm() <= T::incidence_tol() * scale {
            return Err(Error::UndefinedProjection);
        }
        Ok(u)
    }

    /// The ray of image point `u`: the meet of the planes
    /// `u1 p2 − u3 p1` and `u2 q2 − u3 q1`.
    pub fn back_project(&self, u: &Vector3<T>) -> Result<PluckerLine<T>> {
        let p = |i: usize| -> Vector4<T> { self.a1.row(i).transpose() };
        let q = |i: usize| -> Vector4<T> { self.a2.row(i).transpose() };
        let w1 = p(1) * u[0] - p(0) * u[2];
        let w2 = q(1) * u[1] - q(0) * u[2];
        if w1.norm() == T::zero() || w2.norm() == T::zero() {
            return Err(Error::UndefinedProjection);
        }
        PluckerLine::meet_planes(&ProjPlane::new_unchecked(w1), &ProjPlane::new_unchecked(w2))
            .map_err(|_| Error::UndefinedProjection)
    }

    /// The slits `p1 ∧ p2` and `q1 ∧ q2`: the lines spanned by the null
    /// spaces of `A1` and `A2`.
    pub fn slits(&self) -> (PluckerLine<T>, PluckerLine<T>) {
        let row = |m: &Matrix2x4<T>, i: usize| m.row(i).transpose();
        (
            PluckerLine::meet_planes_raw(&row(&self.a1, 0), &row(&self.a1, 1)),
            PluckerLine::meet_planes_raw(&row(&self.a2, 0), &row(&self.a2, 1)),
        )
    }

    pub fn congruence(&self) -> TwoSlitCongruence<T> {
        let (l1, l2) = self.slits();
        TwoSlitCongruence::new(l1, l2).expect("validated cameras have skew slits")
    }

    /// The base line `{p2ᵀx = q2ᵀx = 0}` where projection is undefined.
    pub fn base_line(&self) -> PluckerLine<T> {
        PluckerLine::meet_planes_raw(&self.a1.row(1).transpose(), &self.a2.row(1).transpose())
    }

    /// The plane `2 p2 − q2` of the pencil through the base line; it gives
    /// `x3 − x4 = 0` for `A1 = [1 0 0 0; 0 0 1 0]`, `A2 = [0 2 0 0; 0 0 1 1]`.
    pub fn default_retinal_plane(&self) -> ProjPlane<T> {
        let p2 = self.a1.row(1).transpose();
        let q2 = self.a2.row(1).transpose();
        ProjPlane::new_unchecked(p2 * T::lit(2.0) - q2)
    }

    /// Equivalent quadratic camera on `plane` (a plane through the base line
    /// other than `p2`, `q2`; defaults to [`Self::default_retinal_plane`]).
    ///
    /// The frame is `y1 = α1 (l2 ∧ π)`, `y2 = α2 (l1 ∧ π)`,
    /// `y3 = p1 ∧ q1 ∧ π`, with `α1`, `α2` chosen so that the planes of the
    /// adapted frame are exactly `p1, p2, q1, q2`.
    pub fn to_quadratic(&self, plane: Option<&ProjPlane<T>>) -> Result<QuadraticCamera<T>> {
        let pi = plane
            .copied()
            .unwrap_or_else(|| self.default_retinal_plane());
        let row = |m: &Matrix2x4<T>, i: usize| -> Vector4<T> { m.row(i).transpose() };
        let (p1, p2, q1, q2) = (
            row(&self.a1, 0),
            row(&self.a1, 1),
            row(&self.a2, 0),
            row(&self.a2, 1),
        );
        // π must lie in span(p2, q2)
        let basis = nalgebra::Matrix4x2::from_columns(&[p2, q2]);
        let gram = basis.transpose() * basis;
        let coef =
            gram.try_inverse().ok_or(Error::InvalidRetinalPlane)? * basis.transpose() * pi.coords();
        let resid = (basis * coef - pi.coords()).norm() / pi.coords().norm();
        if resid > T::incidence_tol() {
            return Err(Error::InvalidRetinalPlane);
        }
        let cong = self.congruence();
        let y1 = cong
            .l2()
            .meet_plane(&pi)
            .map_err(|_| Error::InvalidRetinalPlane)?;
        let y2 = cong
            .l1()
            .meet_plane(&pi)
            .map_err(|_| Error::InvalidRetinalPlane)?;
        let y3 = cross4(&p1, &q1, pi.coords());
        let ratio = |v: Vector4<T>, target: &Vector4<T>| v.dot(target) / target.norm_squared();
        let c1 = ratio(cong.p1_star() * y3, &p1);
        let c2 = ratio(-(cong.p1_star() * y1.coords()), &p2);
        let c3 = ratio(cong.p2_star() * y3, &q1);
        let c4 = ratio(-(cong.p2_star() * y2.coords()), &q2);
        let y = nalgebra::Matrix4x3::from_columns(&[
            y1.coords() * (c1 / c2),
            y2.coords() * (c3 / c4),
            y3,
        ]);
        let frame = RetinalFrame::new(y).map_err(|_| Error::InvalidRetinalPlane)?;
        Ok(QuadraticCamera::new(cong, frame))
    }

    /// Whether, after rescaling, the second rows differ only in their last
    /// entry: the angle between their direction parts is below 1e-8 rad.
    pub fn is_parallel(&self) -> bool {
        let m3 = self.a1.fixed_view::<1, 3>(1, 0).transpose();
        let m3p = self.a2.fixed_view::<1, 3>(1, 0).transpose();
        let (n, np) = (m3.norm(), m3p.norm());
        if n == T::zero() || np == T::zero() {
            return false;
        }
        m3.cross(&m3p).norm() / (n * np) < T::parallel_tol()
    }

    /// Parallel-camera calibration `A1 ∝ K1 [r1ᵀ t1; r3ᵀ t3]`,
    /// `A2 ∝ K2 [r2ᵀ t2; r3ᵀ t4]`.
    pub fn decompose_parallel(&self) -> Result<ParallelDecomposition<T>> {
        let m3 = self.a1.fixed_view::<1, 3>(1, 0).transpose();
        let m3p = self.a2.fixed_view::<1, 3>(1, 0).transpose();
        let tiny = T::incidence_tol();
        if m3.norm() <= tiny * self.a1.norm() || m3p.norm() <= tiny * self.a2.norm() {
            return Err(Error::ZeroSlitDirection);
        }
        if !self.is_parallel() {
            return Err(Error::NotParallel);
        }
        decompose_parallel_unchecked(&self.a1, &self.a2)
    }

    /// Pushbroom calibration `A1 ∝ diag(1/v, 1) [r1ᵀ t1; 0 1]`,
    /// `A2 ∝ [f u; 0 1] [r2ᵀ t2; r3ᵀ t3]`; requires `m1 ⊥ m3`.
    pub fn decompose_pushbroom(&self) -> Result<PushbroomDecomposition<T>> {
        let tiny = T::incidence_tol();
        let last = self.a1[(1, 3)];
        let dir = self.a1.fixed_view::<1, 3>(1, 0).norm();
        if last == T::zero() || dir > tiny * last.abs() {
            return Err(Error::NotPushbroom);
        }
        let a1 = self.a1 / last;
        let m1 = a1.fixed_view::<1, 3>(0, 0).transpose();
        let m3 = self.a2.fixed_view::<1, 3>(1, 0).transpose();
        if m1.norm() <= tiny * a1.norm() || m3.norm() <= tiny * self.a2.norm() {
            return Err(Error::ZeroSlitDirection);
        }
        let cosine = m1.dot(&m3) / (m1.norm() * m3.norm());
        if cosine.abs() >= tiny {
            return Err(Error::NonOrthogonal {
                cosine: cosine.as_f64(),
            });
        }
        let v = T::one() / m1.norm();
        let r1 = m1 * v;
        let t1 = a1[(0, 3)] * v;
        let (k2, r, t) = rq_with_translation(&self.a2)?;
        let theta = r1.dot(&r.0).max(-T::one()).min(T::one()).acos();
        Ok(PushbroomDecomposition {
            k1: Matrix2::new(T::one() / v, T::zero(), T::zero(), T::one()),
            k2,
            r1,
            r2: r.0,
            r3: r.1,
            t: [t1, t[0], t[1]],
            theta,
        })
    }

    /// The camera seen after the change of coordinates `x ↦ H x`:
    /// both matrices right-multiplied by `H⁻¹`.
    pub fn apply_space_transform(&self, h: &Matrix4<T>) -> Result<Self> {
        let sv = h.singular_values();
        if sv.max() == T::zero() || sv.min() / sv.max() < T::incidence_tol() {
            return Err(Error::SingularTransform);
        }
        let hi = h.try_inverse().ok_or(Error::SingularTransform)?;
        Self::new(self.a1 * hi, self.a2 * hi)
    }

    /// `H` with `apply_space_transform(self, H) == other` exactly:
    /// `H = [other]⁻¹ [self]` on the stacked matrices.
    pub fn projective_witness(&self, other: &Self) -> Result<Matrix4<T>> {
        let inv = other
            .stacked()
            .try_inverse()
            .ok_or(Error::SingularTransform)?;
        Ok(inv * self.stacked())
    }
}

fn stack<T: Real>(a1: &Matrix2x4<T>, a2: &Matrix2x4<T>) -> Matrix4<T> {
    Matrix4::from_fn(|r, c| if r < 2 { a1[(r, c)] } else { a2[(r - 2, c)] })
}

/// Two orthonormal rows of a rotation block.
type RowPair<T> = (Vector3<T>, Vector3<T>);

/// RQ factorization `M = K R` of a 2×3 block, computed bottom-up, with `K`
/// upper triangular, `K[1][1] = 1`, positive diagonal, and orthonormal rows
/// in `R`. Returns `(K, (r_top, r_bottom), scale)` with `M = scale K R`.
pub(crate) fn rq_2x3<T: Real>(m: &Matrix2x3<T>) -> Result<(Matrix2<T>, RowPair<T>, T)> {
    let top = m.row(0).transpose();
    let bottom = m.row(1).transpose();
    let s = bottom.norm();
    if s <= T::incidence_tol() * m.norm() {
        return Err(Error::ZeroSlitDirection);
    }
    let rb = bottom / s;
    let k01 = top.dot(&rb);
    let rem = top - rb * k01;
    let k00 = rem.norm();
    if k00 <= T::incidence_tol() * m.norm() {
        return Err(Error::InvalidCamera(
            "rows of the direction block are parallel",
        ));
    }
    let rt = rem / k00;
    Ok((
        Matrix2::new(k00 / s, k01 / s, T::zero(), T::one()),
        (rt, rb),
        s,
    ))
}

/// RQ of the direction block plus `[t_top; t_bottom] = K⁻¹ (last column)/scale`.
fn rq_with_translation<T: Real>(a: &Matrix2x4<T>) -> Result<(Matrix2<T>, RowPair<T>, Vector2<T>)> {
    let m: Matrix2x3<T> = a.fixed_view::<2, 3>(0, 0).into_owned();
    let (k, r, s) = rq_2x3(&m)?;
    let last = a.column(3) / s;
    let t = k.try_inverse().ok_or(Error::SingularCalibration)? * last;
    Ok((k, r, t))
}

pub(crate) fn decompose_parallel_unchecked<T: Real>(
    a1: &Matrix2x4<T>,
    a2: &Matrix2x4<T>,
) -> Result<ParallelDecomposition<T>> {
    let m3 = a1.fixed_view::<1, 3>(1, 0).transpose();
    let m3p = a2.fixed_view::<1, 3>(1, 0).transpose();
    // rescale A2 so that its second-row direction equals that of A1
    let a2 = a2 * (m3.norm_squared() / m3p.dot(&m3));
    let (k1, (r1, r3), t13) = rq_with_translation(a1)?;
    let (k2, (r2, _), t24) = rq_with_translation(&a2)?;
    let theta = r1.dot(&r2).max(-T::one()).min(T::one()).acos();
    Ok(ParallelDecomposition {
        k1,
        k2,
        r1,
        r2,
        r3,
        t: [t13[0], t24[0], t13[1], t24[1]],
        theta,
        d: (t24[1] - t13[1]).abs(),
    })
}

fn block<T: Real>(
    k: &Matrix2<T>,
    top: &Vector3<T>,
    tt: T,
    bottom: &Vector3<T>,
    tb: T,
) -> Matrix2x4<T> {
    let r = Matrix2x4::from_rows(&[
        RowVector3::from(top.transpose()).insert_column(3, tt),
        RowVector3::from(bottom.transpose()).insert_column(3, tb),
    ]);
    k * r
}

/// Intrinsics of a parallel two-slit camera. `K2` follows the convention
/// without the factor 2: the canonical camera has `K2 = diag(2, 1)` and the
/// magnification `f_v` of the displayed calibration form is `K2[0][0] / 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParallelDecomposition<T: Real> {
    pub k1: Matrix2<T>,
    pub k2: Matrix2<T>,
    pub r1: Vector3<T>,
    pub r2: Vector3<T>,
    pub r3: Vector3<T>,
    /// `(t1, t2, t3, t4)`.
    pub t: [T; 4],
    pub theta: T,
    pub d: T,
}

impl<T: Real> ParallelDecomposition<T> {
    pub fn f_u(&self) -> T {
        self.k1[(0, 0)]
    }

    pub fn f_v(&self) -> T {
        self.k2[(0, 0)] / T::lit(2.0)
    }

    pub fn principal_point(&self) -> (T, T) {
        (self.k1[(0, 1)], self.k2[(0, 1)])
    }

    pub fn rebuild(&self) -> Result<TwoSlitCamera<T>> {
        let [t1, t2, t3, t4] = self.t;
        TwoSlitCamera::new(
            block(&self.k1, &self.r1, t1, &self.r3, t3),
            block(&self.k2, &self.r2, t2, &self.r3, t4),
        )
    }
}

/// Intrinsics of a pushbroom camera: `K1 = diag(1/v, 1)`, `K2 = [f u; 0 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PushbroomDecomposition<T: Real> {
    pub k1: Matrix2<T>,
    pub k2: Matrix2<T>,
    pub r1: Vector3<T>,
    pub r2: Vector3<T>,
    pub r3: Vector3<T>,
    /// `(t1, t2, t3)`.
    pub t: [T; 3],
    pub theta: T,
}

impl<T: Real> PushbroomDecomposition<T> {
    /// Sensor speed.
    pub fn v(&self) -> T {
        T::one() / self.k1[(0, 0)]
    }

    pub fn f(&self) -> T {
        self.k2[(0, 0)]
    }

    pub fn u(&self) -> T {
        self.k2[(0, 1)]
    }

    pub fn rebuild(&self) -> Result<TwoSlitCamera<T>> {
        let [t1, t2, t3] = self.t;
        TwoSlitCamera::new(
            block(&self.k1, &self.r1, t1, &Vector3::zeros(), T::one()),
            block(&self.k2, &self.r2, t2, &self.r3, t3),
        )
    }
}

pub fn project<T: Real>(cam: &TwoSlitCamera<T>, x: &ProjPoint<T>) -> Result<Vector3<T>> {
    cam.project(x)
}

pub fn slits<T: Real>(cam: &TwoSlitCamera<T>) -> (PluckerLine<T>, PluckerLine<T>) {
    cam.slits()
}

pub fn to_quadratic<T: Real>(
    cam: &TwoSlitCamera<T>,
    plane: Option<&ProjPlane<T>>,
) -> Result<QuadraticCamera<T>> {
    cam.to_quadratic(plane)
}

pub fn is_parallel<T: Real>(cam: &TwoSlitCamera<T>) -> bool {
    cam.is_parallel()
}

pub fn decompose_parallel<T: Real>(cam: &TwoSlitCamera<T>) -> Result<ParallelDecomposition<T>> {
    cam.decompose_parallel()
}

pub fn decompose_pushbroom<T: Real>(cam: &TwoSlitCamera<T>) -> Result<PushbroomDecomposition<T>> {
    cam.decompose_pushbroom()
}

pub fn apply_space_transform<T: Real>(
    cam: &TwoSlitCamera<T>,
    h: &Matrix4<T>,
) -> Result<TwoSlitCamera<T>> {
    cam.apply_space_transform(h)
}

#[derive(Serialize, Deserialize)]
#[serde(bound(serialize = "T: Serialize", deserialize = "T: Deserialize<'de>"))]
struct CameraRepr<T> {
    #[serde(rename = "A1")]
    a1: [[T; 4]; 2],
    #[serde(rename = "A2")]
    a2: [[T; 4]; 2],
}

impl<T: Real + Serialize> Serialize for TwoSlitCamera<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CameraRepr {
            a1: rows_2x4(&self.a1),
            a2: rows_2x4(&self.a2),
        }
        .serialize(s)
    }
}

impl<'de, T: Real + Deserialize<'de>> Deserialize<'de> for TwoSlitCamera<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = CameraRepr::<T>::deserialize(d)?;
        TwoSlitCamera::from_rows(r.a1, r.a2).map_err(serde::de::Error::custom)
    }
}

#[derive(Serialize)]
struct DecompositionRepr<T> {
    #[serde(rename = "K1")]
    k1: [[T; 2]; 2],
    #[serde(rename = "K2")]
    k2: [[T; 2]; 2],
    r1: [T; 3],
    r2: [T; 3],
    r3: [T; 3],
    t: Vec<T>,
    theta: T,
    #[serde(skip_serializing_if = "Option::is_none")]
    d: Option<T>,
}

impl<T: Real + Serialize> Serialize for ParallelDecomposition<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DecompositionRepr {
            k1: rows_2x2(&self.k1),
            k2: rows_2x2(&self.k2),
            r1: self.r1.into(),
            r2: self.r2.into(),
            r3: self.r3.into(),
            t: self.t.to_vec(),
            theta: self.theta,
            d: Some(self.d),
        }
        .serialize(s)
    }
}

impl<T: Real + Serialize> Serialize for PushbroomDecomposition<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DecompositionRepr {
            k1: rows_2x2(&self.k1),
            k2: rows_2x2(&self.k2),
            r1: self.r1.into(),
            r2: self.r2.into(),
            r3: self.r3.into(),
            t: self.t.to_vec(),
            theta: self.theta,
            d: None,
        }
        .serialize(s)
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::projective::proj_eq;
    use nalgebra::Rotation3;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_PI_2;

    fn pt(a: [f64; 4]) -> ProjPoint<f64> {
        ProjPoint::from_array(a).unwrap()
    }

    pub(crate) fn example_camera() -> TwoSlitCamera<f64> {
        TwoSlitCamera::from_rows(
            [[1., 0., 0., 0.], [0., 0., 1., 0.]],
            [[0., 2., 0., 0.], [0., 0., 1., 1.]],
        )
        .unwrap()
    }

    fn rand_camera(rng: &mut ChaCha8Rng) -> TwoSlitCamera<f64> {
        TwoSlitCamera::new(
            Matrix2x4::from_fn(|_, _| rng.random_range(-1.0..1.0)),
            Matrix2x4::from_fn(|_, _| rng.random_range(-1.0..1.0)),
        )
        .unwrap()
    }

    fn unit_perp(rng: &mut ChaCha8Rng, n: &Vector3<f64>) -> Vector3<f64> {
        let v = Vector3::from_fn(|_, _| rng.random_range(-1.0..1.0));
        (v - n * n.dot(&v)).normalize()
    }

    /// Random parallel camera with known intrinsics.
    fn rand_parallel(rng: &mut ChaCha8Rng) -> (TwoSlitCamera<f64>, ParallelDecomposition<f64>) {
        let r3 = Vector3::from_fn(|_, _| rng.random_range(-1.0..1.0)).normalize();
        let truth = ParallelDecomposition {
            k1: Matrix2::new(
                rng.random_range(0.5..3.0),
                rng.random_range(-1.0..1.0),
                0.,
                1.,
            ),
            k2: Matrix2::new(
                rng.random_range(0.5..3.0),
                rng.random_range(-1.0..1.0),
                0.,
                1.,
            ),
            r1: unit_perp(rng, &r3),
            r2: unit_perp(rng, &r3),
            r3,
            t: std::array::from_fn(|_| rng.random_range(-2.0..2.0)),
            theta: 0.0,
            d: 0.0,
        };
        let truth = ParallelDecomposition {
            theta: truth.r1.dot(&truth.r2).acos(),
            d: (truth.t[3] - truth.t[2]).abs(),
            ..truth
        };
        let cam = truth.rebuild().unwrap();
        let (s1, s2) = (rng.random_range(0.2..5.0), -rng.random_range(0.2..5.0));
        (TwoSlitCamera::new(cam.a1 * s1, cam.a2 * s2).unwrap(), truth)
    }

    fn euclidean(rng: &mut ChaCha8Rng) -> Matrix4<f64> {
        let axis = Vector3::from_fn(|_, _| rng.random_range(-1.0..1.0));
        let rot = Rotation3::new(axis * rng.random_range(0.0..3.0));
        let mut h = rot.to_homogeneous();
        for i in 0..3 {
            h[(i, 3)] = rng.random_range(-3.0..3.0);
        }
        h
    }

    #[test]
    fn example_projection() {
        let cam = example_camera();
        for (a, b) in [(0.3, -2.0), (5.0, 1.5)] {
            let u = cam.project(&pt([a, b, 1., 1.])).unwrap();
            assert!(proj_eq(&u, &Vector3::new(a, b, 1.), 1e-14));
        }
        let u = cam.project(&pt([1., 1., 1., 1.])).unwrap();
        assert!(proj_eq(&u, &Vector3::new(2., 2., 2.), 1e-14));
        assert_eq!(
            cam.project(&pt([1., 2., 0., 0.])).unwrap_err(),
            Error::UndefinedProjection
        );
    }

    #[test]
    fn back_projection_contains_point_and_meets_slits() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let cam = rand_camera(&mut rng);
            let x = pt(std::array::from_fn(|_| rng.random_range(-1.0..1.0)));
            let ray = cam.back_project(&cam.project(&x).unwrap()).unwrap();
            assert!(ray.point_residual(&x) < 1e-9);
            let (l1, l2) = cam.slits();
            assert!(ray.relative_pairing(&l1).abs() < 1e-9);
            assert!(ray.relative_pairing(&l2).abs() < 1e-9);
        }
    }

    #[test]
    fn example_slits() {
        let (l1, l2) = example_camera().slits();
        let e1 = PluckerLine::meet_planes_raw(
            &Vector4::new(1., 0., 0., 0.),
            &Vector4::new(0., 0., 1., 0.),
        );
        let e2 = PluckerLine::meet_planes_raw(
            &Vector4::new(0., 1., 0., 0.),
            &Vector4::new(0., 0., 1., 1.),
        );
        assert!(l1.proj_eq(&e1) && l2.proj_eq(&e2));
        let (c1, c2) = TwoSlitCamera::canonical_parallel(FRAC_PI_2, 1.0)
            .unwrap()
            .slits();
        assert!(c1.proj_eq(&e1) && c2.proj_eq(&e2));
    }

    #[test]
    fn random_slits_are_null_spaces() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let cam = rand_camera(&mut rng);
            let (l1, l2) = cam.slits();
            for (l, a) in [(l1, cam.a1), (l2, cam.a2)] {
                let (x, y) = l.point_basis();
                assert!((a * x).norm() < 1e-12 && (a * y).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn invalid_cameras_rejected() {
        let rank1 = TwoSlitCamera::from_rows(
            [[1., 0., 0., 0.], [2., 0., 0., 0.]],
            [[0., 1., 0., 0.], [0., 0., 1., 0.]],
        );
        assert!(matches!(rank1, Err(Error::InvalidCamera(_))));
        let shared = TwoSlitCamera::from_rows(
            [[1., 0., 0., 0.], [0., 1., 0., 0.]],
            [[1., 1., 0., 0.], [0., 0., 1., 0.]],
        );
        assert!(matches!(shared, Err(Error::InvalidCamera(_))));
    }

    #[test]
    fn example_quadratic_camera() {
        let q = example_camera().to_quadratic(None).unwrap();
        assert!(q
            .frame()
            .plane()
            .proj_eq(&ProjPlane::from_array([0., 0., 1., -1.]).unwrap()));
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..100 {
            let x: [f64; 4] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
            let expected =
                Vector3::new(x[0] * (x[2] + x[3]), 2. * x[1] * x[2], x[2] * (x[2] + x[3]));
            assert!(proj_eq(&q.project(&pt(x)).unwrap(), &expected, 1e-12));
        }
    }

    #[test]
    fn quadratic_agrees_for_any_plane_in_pencil() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let cam = rand_camera(&mut rng);
            let (s, t) = (rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
            let plane =
                ProjPlane::new(cam.a1.row(1).transpose() * s + cam.a2.row(1).transpose() * t)
                    .unwrap();
            let qa = cam.to_quadratic(None).unwrap();
            let qb = cam.to_quadratic(Some(&plane)).unwrap();
            for _ in 0..100 {
                let x = pt(std::array::from_fn(|_| rng.random_range(-1.0..1.0)));
                let u = cam.project(&x).unwrap();
                assert!(proj_eq(&qa.project(&x).unwrap(), &u, 1e-9));
                assert!(proj_eq(&qb.project(&x).unwrap(), &u, 1e-9));
            }
        }
    }

    #[test]
    fn quadratic_rejects_plane_off_base_line() {
        let plane = ProjPlane::from_array([1., 0., 0., 1.]).unwrap();
        assert_eq!(
            example_camera().to_quadratic(Some(&plane)).unwrap_err(),
            Error::InvalidRetinalPlane
        );
    }

    #[test]
    fn parallel_detection() {
        assert!(example_camera().is_parallel());
        assert!(!TwoSlitCamera::canonical_pushbroom(0.7)
            .unwrap()
            .is_parallel());
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        assert!((0..100).all(|_| !rand_camera(&mut rng).is_parallel()));
    }

    #[test]
    fn example_decomposition() {
        let d = example_camera().decompose_parallel().unwrap();
        assert!((d.theta - FRAC_PI_2).abs() < 1e-12);
        assert!((d.d - 1.0).abs() < 1e-12);
        assert!((d.k1 - Matrix2::identity()).amax() < 1e-12);
        assert!((d.k2 - Matrix2::new(2., 0., 0., 1.)).amax() < 1e-12);
        assert!((d.f_v() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn canonical_parallel_decomposes_to_its_parameters() {
        for (theta, dist) in [(0.3f64, 2.0f64), (1.2, 0.5), (2.9, 7.0)] {
            let d = TwoSlitCamera::canonical_parallel(theta, dist)
                .unwrap()
                .decompose_parallel()
                .unwrap();
            assert!((d.theta - theta).abs() < 1e-12 && (d.d - dist).abs() < 1e-12);
            assert!((d.k1 - Matrix2::identity()).amax() < 1e-12);
            assert!((d.k2 - Matrix2::new(2., 0., 0., 1.)).amax() < 1e-12);
        }
    }

    #[test]
    fn parallel_recovers_applied_calibration() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let (_, base) = rand_parallel(&mut rng);
        let truth = ParallelDecomposition {
            k1: Matrix2::new(2., 1., 0., 1.),
            k2: Matrix2::new(3., -1., 0., 1.),
            ..base
        };
        let d = truth.rebuild().unwrap().decompose_parallel().unwrap();
        assert!((d.k1 - truth.k1).amax() < 1e-9 && (d.k2 - truth.k2).amax() < 1e-9);
    }

    #[test]
    fn parallel_round_trip_and_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..200 {
            let (cam, truth) = rand_parallel(&mut rng);
            let d = cam.decompose_parallel().unwrap();
            assert!((d.k1 - truth.k1).amax() < 1e-9 && (d.k2 - truth.k2).amax() < 1e-9);
            assert!((d.theta - truth.theta).abs() < 1e-9 && (d.d - truth.d).abs() < 1e-9);
            assert!(d.rebuild().unwrap().approx_eq(&cam, 1e-9));
            let moved = cam
                .apply_space_transform(&euclidean(&mut rng))
                .unwrap()
                .decompose_parallel()
                .unwrap();
            assert!((moved.theta - d.theta).abs() < 1e-8 && (moved.d - d.d).abs() < 1e-8);
            assert!((moved.k1 - d.k1).amax() < 1e-8 && (moved.k2 - d.k2).amax() < 1e-8);
            let s = rng.random_range(0.2..5.0);
            let scaled = cam
                .apply_space_transform(&Matrix4::from_diagonal(&Vector4::new(s, s, s, 1.)))
                .unwrap()
                .decompose_parallel()
                .unwrap();
            assert!((scaled.d - s * d.d).abs() < 1e-8 && (scaled.theta - d.theta).abs() < 1e-8);
        }
    }

    #[test]
    fn parallel_errors() {
        let pb = TwoSlitCamera::canonical_pushbroom(0.7).unwrap();
        assert_eq!(
            pb.decompose_parallel().unwrap_err(),
            Error::ZeroSlitDirection
        );
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        assert_eq!(
            rand_camera(&mut rng).decompose_parallel().unwrap_err(),
            Error::NotParallel
        );
    }

    #[test]
    fn canonical_pushbroom_decomposes_to_identity() {
        for theta in [0.4f64, 1.0, 2.5] {
            let d = TwoSlitCamera::canonical_pushbroom(theta)
                .unwrap()
                .decompose_pushbroom()
                .unwrap();
            assert!((d.k1 - Matrix2::identity()).amax() < 1e-12);
            assert!((d.k2 - Matrix2::identity()).amax() < 1e-12);
            assert!((d.theta - theta).abs() < 1e-12);
        }
    }

    #[test]
    fn pushbroom_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..100 {
            let base = TwoSlitCamera::canonical_pushbroom(rng.random_range(0.2..3.0)).unwrap();
            let moved = base.apply_space_transform(&euclidean(&mut rng)).unwrap();
            let (v, f, u) = (
                rng.random_range(0.2..4.0),
                rng.random_range(0.2..4.0),
                rng.random_range(-2.0..2.0),
            );
            let k1 = Matrix2::new(1. / v, 0., 0., 1.);
            let k2 = Matrix2::new(f, u, 0., 1.);
            let cam = TwoSlitCamera::new(k1 * moved.a1 * 3.0, k2 * moved.a2 * -0.5).unwrap();
            let d = cam.decompose_pushbroom().unwrap();
            assert!(
                (d.v() - v).abs() < 1e-9 && (d.f() - f).abs() < 1e-9 && (d.u() - u).abs() < 1e-9
            );
            assert!(d.rebuild().unwrap().approx_eq(&cam, 1e-9));
        }
    }

    #[test]
    fn pushbroom_errors() {
        let skew = TwoSlitCamera::from_rows(
            [[1., 0., 0., 0.], [0., 0., 0., 1.]],
            [[0., 1., 0., 0.], [0.5, 0., 0.75f64.sqrt(), 0.]],
        )
        .unwrap();
        assert!(
            matches!(skew.decompose_pushbroom(), Err(Error::NonOrthogonal { cosine }) if (cosine - 0.5).abs() < 1e-12)
        );
        assert_eq!(
            example_camera().decompose_pushbroom().unwrap_err(),
            Error::NotPushbroom
        );
    }

    #[test]
    fn space_transforms() {
        let cam = example_camera();
        assert_eq!(
            cam.apply_space_transform(&Matrix4::identity()).unwrap(),
            cam
        );
        assert_eq!(
            cam.apply_space_transform(&Matrix4::zeros()).unwrap_err(),
            Error::SingularTransform
        );
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..100 {
            let h = Matrix4::from_fn(|_, _| rng.random_range(-1.0..1.0));
            let c = rand_camera(&mut rng);
            let moved = c.apply_space_transform(&h).unwrap();
            let x = Vector4::from_fn(|_, _| rng.random_range(-1.0..1.0));
            let a = c.project(&pt(x.into())).unwrap();
            let b = moved.project(&pt((h * x).into())).unwrap();
            assert!(proj_eq(&a, &b, 1e-9));
            let other = rand_camera(&mut rng);
            let w = c.projective_witness(&other).unwrap();
            // two inversions of random 4×4 matrices: allow for their conditioning
            assert!(c.apply_space_transform(&w).unwrap().approx_eq(&other, 1e-7));
        }
    }

    #[test]
    fn inverse_rays_meet_extracted_slits() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..50 {
            let cam = rand_camera(&mut rng);
            let q = cam.to_quadratic(None).unwrap();
            let (l1, l2) = cam.slits();
            let x = pt(std::array::from_fn(|_| rng.random_range(-1.0..1.0)));
            let ray = q.inverse_project(&cam.project(&x).unwrap()).unwrap();
            assert!(ray.meets(&l1) && ray.meets(&l2) && ray.contains(&x));
        }
    }

    #[test]
    fn json_formats() {
        let cam = example_camera();
        let s = serde_json::to_string(&cam).unwrap();
        assert_eq!(
            s,
            r#"{"A1":[[1.0,0.0,0.0,0.0],[0.0,0.0,1.0,0.0]],"A2":[[0.0,2.0,0.0,0.0],[0.0,0.0,1.0,1.0]]}"#
        );
        assert_eq!(serde_json::from_str::<TwoSlitCamera<f64>>(&s).unwrap(), cam);
        let v: serde_json::Value = serde_json::to_value(cam.decompose_parallel().unwrap()).unwrap();
        for key in ["K1", "K2", "r1", "r2", "r3", "t", "theta", "d"] {
            assert!(v.get(key).is_some(), "{key}");
        }
    }
}
