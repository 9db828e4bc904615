//! Essential maps of order-one line congruences, the two-slit specialization,
//! quadratic cameras `ψ = N ∘ λ`, inverse projection and the transversal
//! homography between retinal planes.

use nalgebra::{Matrix3, Matrix4, Matrix4x3, Vector3, Vector4};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::projective::{LineToImageMap, PluckerLine, ProjPlane, ProjPoint, RetinalFrame};
use crate::scalar::Real;

/// Homogeneous bivariate form `Σ c[k] x1^k x2^(d−k)` evaluated Horner-style.
fn eval_form<T: Real>(c: &[T], x1: T, x2: T) -> T {
    let Some((&last, rest)) = c.split_last() else {
        return T::zero();
    };
    let mut acc = last;
    let mut pw = T::one();
    for &ck in rest.iter().rev() {
        pw *= x2;
        acc = acc * x1 + ck * pw;
    }
    acc
}

/// Congruence of class `β` in normal form: the ray through `x` is
/// `x ∨ (x1 f, x2 f, g, h)` with `f`, `g`, `h` forms in `(x1, x2)` of degrees
/// `β−1`, `β`, `β`. Coefficient `k` of a form multiplies `x1^k x2^(d−k)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(
    try_from = "GeneralRepr<T>",
    bound(deserialize = "T: Real + Deserialize<'de>")
)]
pub struct GeneralCongruence<T: Real> {
    pub beta: usize,
    pub f: Vec<T>,
    pub g: Vec<T>,
    pub h: Vec<T>,
}

#[derive(Deserialize)]
struct GeneralRepr<T> {
    beta: usize,
    #[serde(default = "Vec::new")]
    f: Vec<T>,
    g: Vec<T>,
    h: Vec<T>,
}

impl<T: Real> TryFrom<GeneralRepr<T>> for GeneralCongruence<T> {
    type Error = Error;
    fn try_from(r: GeneralRepr<T>) -> Result<Self> {
        Self::new(r.beta, r.f, r.g, r.h)
    }
}

impl<T: Real> GeneralCongruence<T> {
    pub fn new(beta: usize, f: Vec<T>, g: Vec<T>, h: Vec<T>) -> Result<Self> {
        if f.len() != beta || g.len() != beta + 1 || h.len() != beta + 1 {
            return Err(Error::FormDegree { beta });
        }
        Ok(Self { beta, f, g, h })
    }

    /// Second point `(x1 f, x2 f, g, h)` of the ray through `x`.
    pub fn companion(&self, x: &ProjPoint<T>) -> Vector4<T> {
        let c = x.coords();
        let (x1, x2) = (c[0], c[1]);
        let f = eval_form(&self.f, x1, x2);
        Vector4::new(
            x1 * f,
            x2 * f,
            eval_form(&self.g, x1, x2),
            eval_form(&self.h, x1, x2),
        )
    }

    /// The congruence ray `λ(x)`; its coordinates are forms of degree `β+1`.
    pub fn essential_map(&self, x: &ProjPoint<T>) -> Result<PluckerLine<T>> {
        let w = self.companion(x);
        let l = PluckerLine::join_raw(x.coords(), &w);
        if l.coords().norm() <= T::incidence_tol() * x.coords().norm().powi(self.beta as i32 + 1) {
            return Err(Error::BasePoint);
        }
        Ok(l)
    }
}

/// Congruence of common transversals to two skew lines (the slits).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoSlitCongruence<T: Real> {
    l1: PluckerLine<T>,
    l2: PluckerLine<T>,
    p1_star: Matrix4<T>,
    p2_star: Matrix4<T>,
}

impl<T: Real> TwoSlitCongruence<T> {
    /// Rejects intersecting slits: the determinant of two orthonormal points
    /// of each slit, stacked, must exceed the incidence tolerance.
    pub fn new(l1: PluckerLine<T>, l2: PluckerLine<T>) -> Result<Self> {
        let (a, b) = l1.point_basis();
        let (c, d) = l2.point_basis();
        let det = Matrix4::from_columns(&[a, b, c, d]).determinant();
        if det.abs() < T::incidence_tol() {
            return Err(Error::IntersectingSlits);
        }
        Ok(Self {
            l1,
            l2,
            p1_star: l1.dual_matrix(),
            p2_star: l2.dual_matrix(),
        })
    }

    pub fn l1(&self) -> &PluckerLine<T> {
        &self.l1
    }

    pub fn l2(&self) -> &PluckerLine<T> {
        &self.l2
    }

    /// Dual Plücker matrix `P₁*` of the first slit.
    pub fn p1_star(&self) -> &Matrix4<T> {
        &self.p1_star
    }

    pub fn p2_star(&self) -> &Matrix4<T> {
        &self.p2_star
    }

    /// The ray `(x ∨ l1) ∧ (x ∨ l2)` through `x`.
    pub fn essential_map(&self, x: &ProjPoint<T>) -> Result<PluckerLine<T>> {
        if self.l1.contains(x) || self.l2.contains(x) {
            return Err(Error::PointOnSlit);
        }
        Ok(self.ray_raw(x.coords()))
    }

    /// Line with dual matrix `P₁*x xᵀP₂* − P₂*x xᵀP₁*` (up to sign).
    pub(crate) fn ray_raw(&self, x: &Vector4<T>) -> PluckerLine<T> {
        PluckerLine::meet_planes_raw(&(self.p1_star * x), &(self.p2_star * x))
    }

    /// The unique congruence line lying in plane `w`: `(l1 ∧ w) ∨ (l2 ∧ w)`.
    pub fn line_in_plane(&self, w: &ProjPlane<T>) -> Result<PluckerLine<T>> {
        let a = self.l1.meet_plane(w)?;
        let b = self.l2.meet_plane(w)?;
        PluckerLine::join(&a, &b)
    }
}

impl<T: Real + Serialize> Serialize for TwoSlitCongruence<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a, T: Real + Serialize> {
            l1: &'a PluckerLine<T>,
            l2: &'a PluckerLine<T>,
        }
        Repr {
            l1: &self.l1,
            l2: &self.l2,
        }
        .serialize(s)
    }
}

impl<'de, T: Real + Deserialize<'de>> Deserialize<'de> for TwoSlitCongruence<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(bound(deserialize = "T: Real + Deserialize<'de>"))]
        struct Repr<T: Real> {
            l1: PluckerLine<T>,
            l2: PluckerLine<T>,
        }
        let r = Repr::<T>::deserialize(d)?;
        TwoSlitCongruence::new(r.l1, r.l2).map_err(serde::de::Error::custom)
    }
}

/// A two-slit congruence imaged on a retinal frame; each image coordinate is
/// the quadratic form `xᵀ P₁* Sᵢ P₂* x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticCamera<T: Real> {
    congruence: TwoSlitCongruence<T>,
    frame: RetinalFrame<T>,
    s: [Matrix4<T>; 3],
    n: LineToImageMap<T>,
}

impl<T: Real> QuadraticCamera<T> {
    pub fn new(congruence: TwoSlitCongruence<T>, frame: RetinalFrame<T>) -> Self {
        let y = |i: usize| frame.matrix().column(i).into_owned();
        let s = [
            PluckerLine::join_raw(&y(1), &y(2)).primal_matrix(),
            PluckerLine::join_raw(&y(2), &y(0)).primal_matrix(),
            PluckerLine::join_raw(&y(0), &y(1)).primal_matrix(),
        ];
        Self {
            congruence,
            frame,
            s,
            n: LineToImageMap::new(&frame),
        }
    }

    pub fn congruence(&self) -> &TwoSlitCongruence<T> {
        &self.congruence
    }

    pub fn frame(&self) -> &RetinalFrame<T> {
        &self.frame
    }

    /// Primal Plücker matrices of `y2 ∨ y3`, `y3 ∨ y1`, `y1 ∨ y2`.
    pub fn s_matrices(&self) -> &[Matrix4<T>; 3] {
        &self.s
    }

    pub fn line_to_image(&self) -> &LineToImageMap<T> {
        &self.n
    }

    /// Image coordinates of `x`.
    pub fn project(&self, x: &ProjPoint<T>) -> Result<Vector3<T>> {
        if self.congruence.l1.contains(x) || self.congruence.l2.contains(x) {
            return Err(Error::PointOnSlit);
        }
        let xv = x.coords();
        let a = self.congruence.p1_star.transpose() * xv;
        let b = self.congruence.p2_star * xv;
        let u = Vector3::from_fn(|i, _| a.dot(&(self.s[i] * b)));
        let smax = self
            .s
            .iter()
            .map(|m| m.norm())
            .fold(T::zero(), |a, b| a.max(b));
        let scale = xv.norm_squared()
            * self.congruence.p1_star.norm()
            * self.congruence.p2_star.norm()
            * smax;
        if u.norm() <= T::incidence_tol() * scale {
            return Err(Error::UndefinedProjection);
        }
        Ok(u)
    }

    /// Whether the frame is adapted to the slits: `y1 = l2 ∧ π`, `y2 = l1 ∧ π`.
    pub fn is_intrinsic(&self) -> bool {
        self.congruence.l2.contains(&self.frame.basis_point(0))
            && self.congruence.l1.contains(&self.frame.basis_point(1))
    }

    /// The viewing ray of image point `u`.
    ///
    /// Images of the slits (the epipoles, `Y u ∈ l1` or `Y u ∈ l2`) return
    /// the slit itself. In an adapted frame the ray is expanded in the planes
    /// `p1 = P₁*y3`, `p2 = −P₁*y1`, `q1 = P₂*y3`, `q2 = −P₂*y2`:
    /// `u1u2 (p2∧q2) − u1u3 (p2∧q1) − u2u3 (p1∧q2) + u3² (p1∧q1)`.
    pub fn inverse_project(&self, u: &Vector3<T>) -> Result<PluckerLine<T>> {
        if u.iter().all(|v| *v == T::zero()) {
            return Err(Error::ZeroVector);
        }
        let y = self.frame.point(u)?;
        if self.congruence.l2.contains(&y) {
            return Ok(self.congruence.l2);
        }
        if self.congruence.l1.contains(&y) {
            return Ok(self.congruence.l1);
        }
        let line = if self.is_intrinsic() {
            let col = |i: usize| self.frame.matrix().column(i).into_owned();
            let (p1s, p2s) = (&self.congruence.p1_star, &self.congruence.p2_star);
            let p1 = p1s * col(2);
            let p2 = -(p1s * col(0));
            let q1 = p2s * col(2);
            let q2 = -(p2s * col(1));
            let m = |a: &Vector4<T>, b: &Vector4<T>| *PluckerLine::meet_planes_raw(a, b).coords();
            let (u1, u2, u3) = (u[0], u[1], u[2]);
            m(&p2, &q2) * (u1 * u2) - m(&p2, &q1) * (u1 * u3) - m(&p1, &q2) * (u2 * u3)
                + m(&p1, &q1) * (u3 * u3)
        } else {
            *self.congruence.ray_raw(y.coords()).coords()
        };
        if line.norm() <= T::incidence_tol() * u.norm_squared() * self.frame.matrix().norm_squared()
        {
            return Err(Error::DegenerateFrame("inverse projection vanishes"));
        }
        Ok(PluckerLine::new_unchecked(line))
    }
}

/// Composite camera `N · λ(x)`; agrees with [`QuadraticCamera::project`] up
/// to scale.
pub fn compose_project<T: Real>(cam: &QuadraticCamera<T>, x: &ProjPoint<T>) -> Result<Vector3<T>> {
    let l = cam.congruence.essential_map(x)?;
    Ok(cam.n.apply(&l))
}

pub fn essential_map_general<T: Real>(
    c: &GeneralCongruence<T>,
    x: &ProjPoint<T>,
) -> Result<PluckerLine<T>> {
    c.essential_map(x)
}

pub fn two_slit_essential<T: Real>(
    c: &TwoSlitCongruence<T>,
    x: &ProjPoint<T>,
) -> Result<PluckerLine<T>> {
    c.essential_map(x)
}

pub fn quadratic_project<T: Real>(
    cam: &QuadraticCamera<T>,
    x: &ProjPoint<T>,
) -> Result<Vector3<T>> {
    cam.project(x)
}

pub fn inverse_project<T: Real>(
    cam: &QuadraticCamera<T>,
    u: &Vector3<T>,
) -> Result<PluckerLine<T>> {
    cam.inverse_project(u)
}

/// Frame on `target` making the map `y ↦ λ(y) ∧ target` the identity in
/// coordinates, together with that identity matrix.
///
/// With `δ = π ∧ π'` transversal to both slits, let `Z = [l2∧π, l1∧π, z3]`
/// be the adapted frame of `π` and `p1, p2, q1, q2` its planes. The frame
/// `Y' = [−(p2∧q1)∧π', −(p1∧q2)∧π', (p1∧q1)∧π']` represents the map as the
/// identity in `Z`-coordinates; re-expressing in the given frame gives
/// `Y'' = Y' Z† Y`.
pub fn transversal_homography<T: Real>(
    c: &TwoSlitCongruence<T>,
    frame: &RetinalFrame<T>,
    target: &ProjPlane<T>,
) -> Result<(Matrix3<T>, RetinalFrame<T>)> {
    let pi = frame.plane();
    if pi.proj_eq(target) {
        return Ok((Matrix3::identity(), *frame));
    }
    let delta = PluckerLine::meet_planes(pi, target)?;
    if !delta.meets(c.l1()) || !delta.meets(c.l2()) {
        return Err(Error::NonTransversal);
    }
    let z1 = c.l2().meet_plane(pi)?;
    let z2 = c.l1().meet_plane(pi)?;
    // third basis point: the frame column farthest from δ
    let z3 = (0..3)
        .map(|i| frame.basis_point(i))
        .max_by(|a, b| {
            delta
                .point_residual(a)
                .partial_cmp(&delta.point_residual(b))
                .unwrap_or(std::cmp::Ordering::Equal)
        })
        .expect("three columns");
    let z = RetinalFrame::from_points(&z1, &z2, &z3)?;
    let p1 = c.p1_star() * z3.coords();
    let p2 = -(c.p1_star() * z1.coords());
    let q1 = c.p2_star() * z3.coords();
    let q2 = -(c.p2_star() * z2.coords());
    let t = target.coords();
    let cut =
        |a: &Vector4<T>, b: &Vector4<T>| PluckerLine::meet_planes_raw(a, b).primal_matrix() * t;
    let y_prime = Matrix4x3::from_columns(&[-cut(&p2, &q1), -cut(&p1, &q2), cut(&p1, &q1)]);
    let tmat = Matrix3::from_columns(&[
        z.coords_of(&frame.basis_point(0))?,
        z.coords_of(&frame.basis_point(1))?,
        z.coords_of(&frame.basis_point(2))?,
    ]);
    let canonical = RetinalFrame::new(y_prime * tmat)?;
    Ok((Matrix3::identity(), canonical))
}

/// Homography from `frame` coordinates to `target_frame` coordinates induced
/// by `y ↦ λ(y) ∧ π'`.
pub fn transversal_homography_to<T: Real>(
    c: &TwoSlitCongruence<T>,
    frame: &RetinalFrame<T>,
    target_frame: &RetinalFrame<T>,
) -> Result<Matrix3<T>> {
    let (_, canonical) = transversal_homography(c, frame, target_frame.plane())?;
    let cols: Result<Vec<Vector3<T>>> = (0..3)
        .map(|i| target_frame.coords_of(&canonical.basis_point(i)))
        .collect();
    Ok(Matrix3::from_columns(&cols?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projective::proj_eq;
    use nalgebra::Vector6;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn pt(a: [f64; 4]) -> ProjPoint<f64> {
        ProjPoint::from_array(a).unwrap()
    }

    fn pl(a: [f64; 4]) -> ProjPlane<f64> {
        ProjPlane::from_array(a).unwrap()
    }

    /// Slits {x1 = x3 = 0} and {x2 = x3 + x4 = 0}.
    fn example_congruence() -> TwoSlitCongruence<f64> {
        let l1 = PluckerLine::meet_planes(&pl([1., 0., 0., 0.]), &pl([0., 0., 1., 0.])).unwrap();
        let l2 = PluckerLine::meet_planes(&pl([0., 1., 0., 0.]), &pl([0., 0., 1., 1.])).unwrap();
        TwoSlitCongruence::new(l1, l2).unwrap()
    }

    fn example_frame() -> RetinalFrame<f64> {
        RetinalFrame::from_points(
            &pt([1., 0., 0., 0.]),
            &pt([0., 1., 0., 0.]),
            &pt([0., 0., 1., 1.]),
        )
        .unwrap()
    }

    fn example_camera() -> QuadraticCamera<f64> {
        QuadraticCamera::new(example_congruence(), example_frame())
    }

    fn rand_vec(rng: &mut ChaCha8Rng) -> Vector4<f64> {
        Vector4::from_fn(|_, _| rng.random_range(-1.0..1.0))
    }

    fn rand_congruence(rng: &mut ChaCha8Rng) -> TwoSlitCongruence<f64> {
        let l1 = PluckerLine::join_raw(&rand_vec(rng), &rand_vec(rng));
        let l2 = PluckerLine::join_raw(&rand_vec(rng), &rand_vec(rng));
        TwoSlitCongruence::new(l1, l2).unwrap()
    }

    #[test]
    fn horner_matches_direct_sum() {
        let c = [2.0, -1.0, 0.5, 3.0];
        let (a, b): (f64, f64) = (1.3, -0.7);
        let direct: f64 = (0..4)
            .map(|k| c[k] * a.powi(k as i32) * b.powi(3 - k as i32))
            .sum();
        assert!((eval_form(&c, a, b) - direct).abs() < 1e-14);
        assert_eq!(eval_form::<f64>(&[], a, b), 0.0);
    }

    #[test]
    fn pinhole_bundle() {
        let c = GeneralCongruence::new(0, vec![], vec![0.0], vec![1.0]).unwrap();
        let l = essential_map_general(&c, &pt([1., 2., 3., 4.])).unwrap();
        assert!(proj_eq(
            l.coords(),
            &Vector6::new(1., 2., 3., 0., 0., 0.),
            1e-12
        ));
        assert_eq!(
            essential_map_general(&c, &pt([0., 0., 0., 1.])).unwrap_err(),
            Error::BasePoint
        );
    }

    #[test]
    fn form_degrees_validated() {
        let err = GeneralCongruence::<f64>::new(1, vec![], vec![0., 0.], vec![1., 0.]).unwrap_err();
        assert_eq!(err, Error::FormDegree { beta: 1 });
    }

    // swapping x2 and x3 sends the example slits to {x1 = x2 = 0} and
    // {x3 = x2 + x4 = 0}, the class-one normal form with f = 1, g = 0, h = −x2
    #[test]
    fn general_map_agrees_with_two_slit_map() {
        let gen = GeneralCongruence::new(1, vec![1.0], vec![0.0, 0.0], vec![-1.0, 0.0]).unwrap();
        let c = example_congruence();
        let perm = Matrix4::new(
            1., 0., 0., 0., 0., 0., 1., 0., 0., 1., 0., 0., 0., 0., 0., 1.,
        );
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let x = rand_vec(&mut rng);
            let l = c.essential_map(&pt(x.into())).unwrap();
            let lg = gen.essential_map(&pt((perm * x).into())).unwrap();
            let (a, b) = lg.point_basis();
            let back = PluckerLine::join_raw(&(perm * a), &(perm * b));
            assert!(l.proj_eq(&back));
        }
    }

    #[test]
    fn example_ray_through_unit_point() {
        let l = two_slit_essential(&example_congruence(), &pt([1., 1., 1., 1.])).unwrap();
        assert!(proj_eq(
            l.coords(),
            &Vector6::new(2., 1., 2., 1., 0., -1.),
            1e-12
        ));
        assert!(l.quadric_residual() < 1e-15);
    }

    #[test]
    fn point_on_slit_rejected() {
        let c = example_congruence();
        assert_eq!(
            c.essential_map(&pt([0., 1., 0., 1.])).unwrap_err(),
            Error::PointOnSlit
        );
        assert_eq!(
            c.essential_map(&pt([1., 0., 1., -1.])).unwrap_err(),
            Error::PointOnSlit
        );
    }

    #[test]
    fn intersecting_slits_rejected() {
        let l1 = PluckerLine::join(&pt([0., 0., 0., 1.]), &pt([1., 0., 0., 1.])).unwrap();
        let l2 = PluckerLine::join(&pt([0., 0., 0., 1.]), &pt([0., 1., 0., 1.])).unwrap();
        assert_eq!(
            TwoSlitCongruence::new(l1, l2).unwrap_err(),
            Error::IntersectingSlits
        );
    }

    #[test]
    fn random_rays_meet_both_slits() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..100 {
            let c = rand_congruence(&mut rng);
            let x = pt(rand_vec(&mut rng).into());
            let l = c.essential_map(&x).unwrap();
            assert!(l.meets(c.l1()) && l.meets(c.l2()) && l.contains(&x));
        }
    }

    // ψ(x) = (x1(x3 + x4), 2 x2 x3, x3(x3 + x4))
    #[test]
    fn example_quadratic_camera() {
        let cam = example_camera();
        let u = quadratic_project(&cam, &pt([1., 1., 1., 1.])).unwrap();
        assert!(proj_eq(&u, &Vector3::new(1., 1., 1.), 1e-12));
        let u = quadratic_project(&cam, &pt([1., 0., 1., 0.])).unwrap();
        assert!(proj_eq(&u, &Vector3::new(1., 0., 1.), 1e-12));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let x = rand_vec(&mut rng);
            let expected =
                Vector3::new(x[0] * (x[2] + x[3]), 2. * x[1] * x[2], x[2] * (x[2] + x[3]));
            let u = cam.project(&pt(x.into())).unwrap();
            assert!(proj_eq(&u, &expected, 1e-12));
        }
    }

    #[test]
    fn projection_undefined_on_base_line() {
        let cam = example_camera();
        assert_eq!(
            cam.project(&pt([1., 1., 0., 0.])).unwrap_err(),
            Error::UndefinedProjection
        );
    }

    #[test]
    fn quadratic_form_matches_composition() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..50 {
            let c = rand_congruence(&mut rng);
            let frame =
                RetinalFrame::new(Matrix4x3::from_fn(|_, _| rng.random_range(-1.0..1.0))).unwrap();
            let cam = QuadraticCamera::new(c, frame);
            let x = pt(rand_vec(&mut rng).into());
            let a = cam.project(&x).unwrap();
            let b = compose_project(&cam, &x).unwrap();
            assert!(proj_eq(&a, &b, 1e-12));
        }
    }

    #[test]
    fn inverse_projection_special_images() {
        let cam = example_camera();
        assert!(cam.is_intrinsic());
        let c = cam.congruence();
        assert!(cam
            .inverse_project(&Vector3::new(1., 0., 0.))
            .unwrap()
            .proj_eq(c.l2()));
        assert!(cam
            .inverse_project(&Vector3::new(0., 1., 0.))
            .unwrap()
            .proj_eq(c.l1()));
        // u = (0,0,1): p1 ∧ q1
        let y3 = cam.frame().basis_point(2);
        let expected = PluckerLine::meet_planes_raw(
            &(c.p1_star() * y3.coords()),
            &(c.p2_star() * y3.coords()),
        );
        assert!(cam
            .inverse_project(&Vector3::new(0., 0., 1.))
            .unwrap()
            .proj_eq(&expected));
        assert_eq!(
            cam.inverse_project(&Vector3::zeros()).unwrap_err(),
            Error::ZeroVector
        );
    }

    #[test]
    fn inverse_projection_adapted_frame_matches_ray() {
        let cam = example_camera();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let u = Vector3::from_fn(|_, _| rng.random_range(-1.0..1.0));
            let l = cam.inverse_project(&u).unwrap();
            let y = cam.frame().point(&u).unwrap();
            assert!(l.proj_eq(&cam.congruence().essential_map(&y).unwrap()));
            assert!(l.meets(cam.congruence().l1()) && l.meets(cam.congruence().l2()));
        }
    }

    #[test]
    fn transversal_homography_identity_on_same_plane() {
        let (h, f) = transversal_homography(
            &example_congruence(),
            &example_frame(),
            &pl([0., 0., 2., -2.]),
        )
        .unwrap();
        assert_eq!(h, Matrix3::identity());
        assert_eq!(f, example_frame());
    }

    #[test]
    fn transversal_homography_example_planes() {
        let c = example_congruence();
        let frame = example_frame();
        let target = pl([0., 0., 1., -2.]);
        let (_, canonical) = transversal_homography(&c, &frame, &target).unwrap();
        let other = RetinalFrame::from_points(
            &pt([1., 0., 0., 0.]),
            &pt([1., 1., 0., 0.]),
            &pt([0., 1., 2., 1.]),
        )
        .unwrap();
        let h = transversal_homography_to(&c, &frame, &other).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..100 {
            let u = Vector3::from_fn(|_, _| rng.random_range(-1.0..1.0));
            let y = frame.point(&u).unwrap();
            let image = c.essential_map(&y).unwrap().meet_plane(&target).unwrap();
            assert!(proj_eq(&canonical.coords_of(&image).unwrap(), &u, 1e-10));
            assert!(proj_eq(&other.coords_of(&image).unwrap(), &(h * u), 1e-10));
        }
    }

    #[test]
    fn non_transversal_planes_rejected() {
        let err = transversal_homography(
            &example_congruence(),
            &example_frame(),
            &pl([1., 2., 3., 5.]),
        )
        .unwrap_err();
        assert_eq!(err, Error::NonTransversal);
    }

    #[test]
    fn congruence_json_round_trip() {
        let c = example_congruence();
        let s = serde_json::to_string(&c).unwrap();
        assert!(s.starts_with("{\"l1\":["));
        let back: TwoSlitCongruence<f64> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
        let g: GeneralCongruence<f64> =
            serde_json::from_str(r#"{"beta":1,"f":[1],"g":[0,0],"h":[0,-1]}"#).unwrap();
        assert_eq!(g.beta, 1);
        assert!(serde_json::from_str::<GeneralCongruence<f64>>(
            r#"{"beta":2,"f":[1],"g":[0],"h":[0]}"#
        )
        .is_err());
    }
}
