//! Random geometric objects for experiments and property checks. Every
//! generator draws from the caller's seeded [`ExperimentRng`].

use nalgebra::{
    Matrix2, Matrix2x4, Matrix3, Matrix4, Quaternion, RowVector4, UnitQuaternion, Vector3, Vector4,
};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use super::scene::ExperimentRng;
use crate::camera::{ParallelDecomposition, PushbroomDecomposition, TwoSlitCamera};
use crate::projective::{PluckerLine, ProjPlane, ProjPoint};

type Camera = TwoSlitCamera<f64>;

pub fn vec4(rng: &mut ExperimentRng) -> Vector4<f64> {
    Vector4::from_fn(|_, _| rng.random_range(-1.0..1.0))
}

pub fn point(rng: &mut ExperimentRng) -> ProjPoint<f64> {
    ProjPoint::new(vec4(rng)).expect("nonzero with probability one")
}

pub fn plane(rng: &mut ExperimentRng) -> ProjPlane<f64> {
    ProjPlane::new(vec4(rng)).expect("nonzero with probability one")
}

/// Uniform rotation from a normalized Gaussian quaternion.
pub fn rotation(rng: &mut ExperimentRng) -> Matrix3<f64> {
    let q = Vector4::from_fn(|_, _| StandardNormal.sample(rng));
    UnitQuaternion::from_quaternion(Quaternion::from(q))
        .to_rotation_matrix()
        .into_inner()
}

fn unit_perp(rng: &mut ExperimentRng, n: &Vector3<f64>) -> Vector3<f64> {
    loop {
        let v = Vector3::from_fn(|_, _| rng.random_range(-1.0..1.0));
        let p = v - n * n.dot(&v);
        if p.norm() > 0.1 {
            return p.normalize();
        }
    }
}

/// Pair of lines whose Plücker pairing is bounded away from zero.
pub fn skew_lines(rng: &mut ExperimentRng) -> (PluckerLine<f64>, PluckerLine<f64>) {
    loop {
        let a = PluckerLine::join(&point(rng), &point(rng));
        let b = PluckerLine::join(&point(rng), &point(rng));
        if let (Ok(a), Ok(b)) = (a, b) {
            if a.relative_pairing(&b).abs() > 0.05 {
                return (a, b);
            }
        }
    }
}

/// Well-conditioned projective transformation.
pub fn transform(rng: &mut ExperimentRng) -> Matrix4<f64> {
    loop {
        let h = Matrix4::from_fn(|_, _| rng.random_range(-2.0..2.0));
        let sv = h.singular_values();
        if sv.min() / sv.max() > 0.05 {
            return h;
        }
    }
}

/// Generic projective camera with a well-conditioned stacked matrix.
pub fn camera(rng: &mut ExperimentRng) -> Camera {
    loop {
        let a1 = Matrix2x4::from_fn(|_, _| rng.random_range(-1.0..1.0));
        let a2 = Matrix2x4::from_fn(|_, _| rng.random_range(-1.0..1.0));
        let stacked = Matrix4::from_rows(&[a1.row(0), a1.row(1), a2.row(0), a2.row(1)]);
        let sv = stacked.singular_values();
        if sv.min() / sv.max() > 0.05 {
            if let Ok(c) = TwoSlitCamera::new(a1, a2) {
                return c;
            }
        }
    }
}

/// Similarity `x ↦ s R x + t` as a 4×4 matrix, with its scale.
pub fn similarity(rng: &mut ExperimentRng) -> (Matrix4<f64>, f64) {
    let s = rng.random_range(0.3..3.0);
    let mut h = Matrix4::identity();
    h.fixed_view_mut::<3, 3>(0, 0)
        .copy_from(&(rotation(rng) * s));
    for i in 0..3 {
        h[(i, 3)] = rng.random_range(-3.0..3.0);
    }
    (h, s)
}

/// Intrinsics of a parallel camera with upper-triangular `K1`, `K2`, slit
/// angle in `[0.2, π − 0.2]` and slit distance in `[0.3, 3]`.
pub fn parallel_intrinsics(rng: &mut ExperimentRng) -> ParallelDecomposition<f64> {
    let rot = rotation(rng);
    let e = |i: usize| -> Vector3<f64> { rot.row(i).transpose() };
    let theta = rng.random_range(0.2..std::f64::consts::PI - 0.2);
    let mut u = |lo: f64, hi: f64| rng.random_range(lo..hi);
    let k1 = Matrix2::new(u(0.5, 3.0), u(-1.0, 1.0), 0.0, 1.0);
    let k2 = Matrix2::new(u(0.5, 3.0), u(-1.0, 1.0), 0.0, 1.0);
    let (t1, t2, t3) = (u(-2.0, 2.0), u(-2.0, 2.0), u(-2.0, 2.0));
    let d = u(0.3, 3.0);
    let t4 = if u(0.0, 1.0) < 0.5 { t3 + d } else { t3 - d };
    ParallelDecomposition {
        k1,
        k2,
        r1: e(0),
        r2: e(0) * theta.cos() + e(1) * theta.sin(),
        r3: e(2),
        t: [t1, t2, t3, t4],
        theta,
        d,
    }
}

/// Intrinsics of a pushbroom camera (`r1 ⊥ r3`, `r2 ⊥ r3`).
pub fn pushbroom_intrinsics(rng: &mut ExperimentRng) -> PushbroomDecomposition<f64> {
    let r3 = Vector3::from_fn(|_, _| rng.random_range(-1.0..1.0)).normalize();
    let r1 = unit_perp(rng, &r3);
    let r2 = unit_perp(rng, &r3);
    let mut u = |lo: f64, hi: f64| rng.random_range(lo..hi);
    PushbroomDecomposition {
        k1: Matrix2::new(1.0 / u(0.3, 3.0), 0.0, 0.0, 1.0),
        k2: Matrix2::new(u(0.5, 3.0), u(-1.0, 1.0), 0.0, 1.0),
        r1,
        r2,
        r3,
        t: [u(-2.0, 2.0), u(-2.0, 2.0), u(-2.0, 2.0)],
        theta: r1.dot(&r2).clamp(-1.0, 1.0).acos(),
    }
}

/// `K1 [r1ᵀ t1; r3ᵀ t3]`, `K2 [r2ᵀ t2; r3ᵀ t4]` with `K = diag(k, 1)`, slit
/// angle in `[0.3, π − 0.3]` and slit distance in `[0.5, 2]`.
pub fn diagonal_parallel(
    rng: &mut ExperimentRng,
    k: (f64, f64),
) -> (Matrix2x4<f64>, Matrix2x4<f64>) {
    let rot = rotation(rng);
    let e = |i: usize| -> Vector3<f64> { rot.row(i).transpose() };
    let theta = rng.random_range(0.3..std::f64::consts::PI - 0.3);
    let r2 = e(0) * theta.cos() + e(1) * theta.sin();
    let mut t = || rng.random_range(-1.0..1.0);
    let (t1, t2, t3) = (t(), t(), t());
    let d = rng.random_range(0.5..2.0) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
    let row = |r: Vector3<f64>, t: f64| RowVector4::new(r.x, r.y, r.z, t);
    let a1 = Matrix2x4::from_rows(&[row(e(0), t1), row(e(2), t3)]);
    let a2 = Matrix2x4::from_rows(&[row(r2, t2), row(e(2), t3 + d)]);
    (
        Matrix2::new(k.0, 0.0, 0.0, 1.0) * a1,
        Matrix2::new(k.1, 0.0, 0.0, 1.0) * a2,
    )
}
