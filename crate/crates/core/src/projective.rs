//! Homogeneous points and planes of P³, lines in Plücker coordinates, the
//! join/meet operators, retinal frames and the 3×6 line-to-image map.
//!
//! Plücker coordinates are always ordered `(l41, l42, l43, l23, l31, l12)`
//! with `l_ij = x_i y_j − x_j y_i` for a line through points `x`, `y`. The
//! dual line `l*` swaps the two halves: `(l23, l31, l12, l41, l42, l43)`.
//! A 6-vector is a line iff `l · l* = 0`.

use nalgebra::{Matrix3, Matrix4, Matrix4x3, SMatrix, Vector3, Vector4, Vector6};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// `|a·b| / (|a| |b|)`, the absolute cosine between two vectors.
pub(crate) fn abs_cosine<T: Real, const N: usize>(a: &SMatrix<T, N, 1>, b: &SMatrix<T, N, 1>) -> T {
    let na = a.norm();
    let nb = b.norm();
    if na == T::zero() || nb == T::zero() {
        return T::zero();
    }
    (a.dot(b) / (na * nb)).abs()
}

/// Projective equality of two homogeneous vectors: cosine distance of the
/// normalized vectors (either sign) below `tol`.
pub fn proj_eq<T: Real, const N: usize>(
    a: &SMatrix<T, N, 1>,
    b: &SMatrix<T, N, 1>,
    tol: T,
) -> bool {
    T::one() - abs_cosine(a, b) < tol
}

/// Relative distance between two homogeneous vectors after aligning scale and
/// sign: `min_s |a/|a| − s b/|b||` for `s = ±1`.
pub fn proj_dist<T: Real, const N: usize>(a: &SMatrix<T, N, 1>, b: &SMatrix<T, N, 1>) -> T {
    let a = a.normalize();
    let b = b.normalize();
    (a - b).norm().min((a + b).norm())
}

/// `π` with `πᵀ x = det[a b c x]`: the plane through three points, or dually
/// the point common to three planes.
pub(crate) fn cross4<T: Real>(a: &Vector4<T>, b: &Vector4<T>, c: &Vector4<T>) -> Vector4<T> {
    let m = Matrix4x3::from_columns(&[*a, *b, *c]);
    let mut out = Vector4::zeros();
    for i in 0..4 {
        let rows: Vec<usize> = (0..4).filter(|&r| r != i).collect();
        let minor = Matrix3::from_fn(|r, k| m[(rows[r], k)]);
        // cofactor of entry (i, 3) in the 4×4 matrix [a b c x]
        let sign = if (i + 3) % 2 == 0 {
            T::one()
        } else {
            -T::one()
        };
        out[i] = sign * minor.determinant();
    }
    out
}

fn check_nonzero<T: Real, const N: usize>(v: &SMatrix<T, N, 1>) -> Result<()> {
    if v.iter().all(|x| *x == T::zero()) || v.iter().any(|x| !x.is_finite()) {
        Err(Error::ZeroVector)
    } else {
        Ok(())
    }
}

/// A point of P³.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjPoint<T: Real> {
    coords: Vector4<T>,
}

impl<T: Real> ProjPoint<T> {
    pub fn new(coords: Vector4<T>) -> Result<Self> {
        check_nonzero(&coords)?;
        Ok(Self { coords })
    }

    pub fn from_array(a: [T; 4]) -> Result<Self> {
        Self::new(Vector4::from(a))
    }

    /// Finite point `(x, y, z, 1)`.
    pub fn finite(x: T, y: T, z: T) -> Self {
        Self {
            coords: Vector4::new(x, y, z, T::one()),
        }
    }

    pub(crate) fn new_unchecked(coords: Vector4<T>) -> Self {
        Self { coords }
    }

    pub fn coords(&self) -> &Vector4<T> {
        &self.coords
    }

    /// Equality up to scale (cosine distance < 1e-9 for `f64`).
    pub fn proj_eq(&self, other: &Self) -> bool {
        proj_eq(&self.coords, &other.coords, T::incidence_tol())
    }

    /// Inhomogeneous coordinates, `None` for points at infinity.
    pub fn euclidean(&self) -> Option<Vector3<T>> {
        let w = self.coords[3];
        if w.abs() <= T::incidence_tol() * self.coords.norm() {
            None
        } else {
            Some(self.coords.xyz() / w)
        }
    }
}

/// A plane of P³, `{x : planeᵀ x = 0}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjPlane<T: Real> {
    coords: Vector4<T>,
}

impl<T: Real> ProjPlane<T> {
    pub fn new(coords: Vector4<T>) -> Result<Self> {
        check_nonzero(&coords)?;
        Ok(Self { coords })
    }

    pub fn from_array(a: [T; 4]) -> Result<Self> {
        Self::new(Vector4::from(a))
    }

    pub(crate) fn new_unchecked(coords: Vector4<T>) -> Self {
        Self { coords }
    }

    pub fn coords(&self) -> &Vector4<T> {
        &self.coords
    }

    pub fn proj_eq(&self, other: &Self) -> bool {
        proj_eq(&self.coords, &other.coords, T::incidence_tol())
    }

    /// Scale-invariant incidence residual `|πᵀx| / (|π| |x|)`.
    pub fn incidence(&self, x: &ProjPoint<T>) -> T {
        self.coords.dot(&x.coords).abs() / (self.coords.norm() * x.coords.norm())
    }

    pub fn contains(&self, x: &ProjPoint<T>) -> bool {
        self.incidence(x) < T::incidence_tol()
    }

    /// Plane through three points.
    pub fn through(a: &ProjPoint<T>, b: &ProjPoint<T>, c: &ProjPoint<T>) -> Result<Self> {
        let p = cross4(&a.coords, &b.coords, &c.coords);
        let scale = a.coords.norm() * b.coords.norm() * c.coords.norm();
        if p.norm() <= T::incidence_tol() * scale {
            return Err(Error::CoincidentPoints);
        }
        Ok(Self { coords: p })
    }

    /// Point common to three planes.
    pub fn meet3(a: &Self, b: &Self, c: &Self) -> Result<ProjPoint<T>> {
        let p = cross4(&a.coords, &b.coords, &c.coords);
        let scale = a.coords.norm() * b.coords.norm() * c.coords.norm();
        if p.norm() <= T::incidence_tol() * scale {
            return Err(Error::DegenerateFrame(
                "planes do not meet in a single point",
            ));
        }
        Ok(ProjPoint { coords: p })
    }
}

/// A line of P³ in Plücker coordinates `(l41, l42, l43, l23, l31, l12)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PluckerLine<T: Real> {
    coords: Vector6<T>,
}

/// Plücker coordinates `x_i y_j − x_j y_i` of two vectors in the fixed order.
fn wedge<T: Real>(x: &Vector4<T>, y: &Vector4<T>) -> Vector6<T> {
    let l = |i: usize, j: usize| x[i] * y[j] - x[j] * y[i];
    Vector6::new(l(3, 0), l(3, 1), l(3, 2), l(1, 2), l(2, 0), l(0, 1))
}

fn swap_halves<T: Real>(v: &Vector6<T>) -> Vector6<T> {
    Vector6::new(v[3], v[4], v[5], v[0], v[1], v[2])
}

/// Antisymmetric 4×4 matrix whose `(i, j)` entry is the `ij` coordinate.
fn antisym<T: Real>(v: &Vector6<T>) -> Matrix4<T> {
    let mut m = Matrix4::zeros();
    let mut put = |i: usize, j: usize, val: T| {
        m[(i, j)] = val;
        m[(j, i)] = -val;
    };
    put(3, 0, v[0]);
    put(3, 1, v[1]);
    put(3, 2, v[2]);
    put(1, 2, v[3]);
    put(2, 0, v[4]);
    put(0, 1, v[5]);
    m
}

impl<T: Real> PluckerLine<T> {
    /// Validates the Plücker quadric `l · l* = 0` (relative to `|l|²`).
    pub fn new(coords: Vector6<T>) -> Result<Self> {
        check_nonzero(&coords)?;
        let line = Self { coords };
        if line.quadric_residual() > T::incidence_tol() {
            return Err(Error::NotALine);
        }
        Ok(line)
    }

    pub fn from_array(a: [T; 6]) -> Result<Self> {
        Self::new(Vector6::from(a))
    }

    pub(crate) fn new_unchecked(coords: Vector6<T>) -> Self {
        Self { coords }
    }

    pub fn coords(&self) -> &Vector6<T> {
        &self.coords
    }

    /// The dual coordinates `l*`.
    pub fn dual(&self) -> Vector6<T> {
        swap_halves(&self.coords)
    }

    /// `|l · l*| / |l|²`, zero for a genuine line.
    pub fn quadric_residual(&self) -> T {
        self.coords.dot(&self.dual()).abs() / self.coords.norm_squared()
    }

    /// The Plücker pairing `l · m*`; proportional to `det[x y z w]` for
    /// `l = x ∨ y` and `m = z ∨ w`, zero iff the lines meet.
    pub fn pairing(&self, other: &Self) -> T {
        self.coords.dot(&other.dual())
    }

    /// Scale-invariant pairing `|l · m*| / (|l| |m|)`.
    pub fn relative_pairing(&self, other: &Self) -> T {
        self.pairing(other).abs() / (self.coords.norm() * other.coords.norm())
    }

    /// Whether the two lines are coplanar (meet in a point or coincide).
    pub fn meets(&self, other: &Self) -> bool {
        self.relative_pairing(other) < T::incidence_tol()
    }

    pub fn proj_eq(&self, other: &Self) -> bool {
        proj_eq(&self.coords, &other.coords, T::incidence_tol())
    }

    /// Primal matrix `L = x yᵀ − y xᵀ` for any two points `x`, `y` on the line.
    pub fn primal_matrix(&self) -> Matrix4<T> {
        antisym(&self.coords)
    }

    /// Dual matrix `L* = u vᵀ − v uᵀ` for planes `u`, `v` through the line.
    pub fn dual_matrix(&self) -> Matrix4<T> {
        antisym(&self.dual())
    }

    pub fn plucker_matrix(&self) -> PluckerMatrix<T> {
        PluckerMatrix {
            primal: self.primal_matrix(),
            dual: self.dual_matrix(),
        }
    }

    /// Join `x ∨ y` of two distinct points.
    pub fn join(x: &ProjPoint<T>, y: &ProjPoint<T>) -> Result<Self> {
        let l = wedge(&x.coords, &y.coords);
        if l.norm() <= T::incidence_tol() * x.coords.norm() * y.coords.norm() {
            return Err(Error::CoincidentPoints);
        }
        Ok(Self { coords: l })
    }

    /// Meet `u ∧ v` of two distinct planes.
    pub fn meet_planes(u: &ProjPlane<T>, v: &ProjPlane<T>) -> Result<Self> {
        let m = wedge(&u.coords, &v.coords);
        if m.norm() <= T::incidence_tol() * u.coords.norm() * v.coords.norm() {
            return Err(Error::CoincidentPoints);
        }
        Ok(Self {
            coords: swap_halves(&m),
        })
    }

    /// Line whose dual matrix is `u vᵀ − v uᵀ`; no degeneracy check.
    pub(crate) fn meet_planes_raw(u: &Vector4<T>, v: &Vector4<T>) -> Self {
        Self {
            coords: swap_halves(&wedge(u, v)),
        }
    }

    /// Line whose primal matrix is `x yᵀ − y xᵀ`; no degeneracy check.
    pub(crate) fn join_raw(x: &Vector4<T>, y: &Vector4<T>) -> Self {
        Self {
            coords: wedge(x, y),
        }
    }

    /// Meet `l ∧ w` with a plane: the point `L w`.
    pub fn meet_plane(&self, w: &ProjPlane<T>) -> Result<ProjPoint<T>> {
        let p = self.primal_matrix() * w.coords;
        if p.norm() <= T::incidence_tol() * self.coords.norm() * w.coords.norm() {
            return Err(Error::LineInPlane);
        }
        Ok(ProjPoint { coords: p })
    }

    /// Join `l ∨ z` with a point: the plane `L* z`.
    pub fn join_point(&self, z: &ProjPoint<T>) -> Result<ProjPlane<T>> {
        let p = self.dual_matrix() * z.coords;
        if p.norm() <= T::incidence_tol() * self.coords.norm() * z.coords.norm() {
            return Err(Error::PointOnLine);
        }
        Ok(ProjPlane { coords: p })
    }

    /// `|L* x| / (|l| |x|)`, zero iff `x` lies on the line.
    pub fn point_residual(&self, x: &ProjPoint<T>) -> T {
        (self.dual_matrix() * x.coords).norm() / (self.coords.norm() * x.coords.norm())
    }

    pub fn contains(&self, x: &ProjPoint<T>) -> bool {
        self.point_residual(x) < T::incidence_tol()
    }

    /// `|L w| / (|l| |w|)`, zero iff the line lies in the plane.
    pub fn plane_residual(&self, w: &ProjPlane<T>) -> T {
        (self.primal_matrix() * w.coords).norm() / (self.coords.norm() * w.coords.norm())
    }

    /// Two orthonormal vectors spanning the points of the line.
    pub fn point_basis(&self) -> (Vector4<T>, Vector4<T>) {
        top_two_left_singular(&self.primal_matrix())
    }

    /// Two orthonormal vectors spanning the planes through the line.
    pub fn plane_basis(&self) -> (Vector4<T>, Vector4<T>) {
        top_two_left_singular(&self.dual_matrix())
    }

    /// Affine description `(point closest to origin, direction)`, or `None`
    /// for a line at infinity.
    pub fn affine(&self) -> Option<(Vector3<T>, Vector3<T>)> {
        let d = Vector3::new(self.coords[0], self.coords[1], self.coords[2]);
        let m = Vector3::new(self.coords[3], self.coords[4], self.coords[5]);
        if d.norm() <= T::incidence_tol() * self.coords.norm() {
            return None;
        }
        // l4j = y_j − x_j (direction), (l23, l31, l12) = x × y (moment)
        Some((d.cross(&m) / d.norm_squared(), d))
    }
}

fn top_two_left_singular<T: Real>(m: &Matrix4<T>) -> (Vector4<T>, Vector4<T>) {
    let svd = m.svd(true, false);
    let u = svd.u.expect("u requested");
    let mut idx: Vec<usize> = (0..4).collect();
    idx.sort_by(|&a, &b| {
        svd.singular_values[b]
            .partial_cmp(&svd.singular_values[a])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    (u.column(idx[0]).into_owned(), u.column(idx[1]).into_owned())
}

/// Primal and dual Plücker matrices of a line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PluckerMatrix<T: Real> {
    pub primal: Matrix4<T>,
    pub dual: Matrix4<T>,
}

/// Coordinate frame `Y = [y1, y2, y3]` on a retinal plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RetinalFrame<T: Real> {
    y: Matrix4x3<T>,
    plane: ProjPlane<T>,
}

impl<T: Real> RetinalFrame<T> {
    pub fn new(y: Matrix4x3<T>) -> Result<Self> {
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::RankDeficientFrame);
        }
        let sv = y.singular_values();
        let (max, min) = sv
            .iter()
            .fold((T::zero(), T::max_value().unwrap()), |(mx, mn), &s| {
                (mx.max(s), mn.min(s))
            });
        if max == T::zero() || min / max < T::incidence_tol() {
            return Err(Error::RankDeficientFrame);
        }
        let plane = ProjPlane::new_unchecked(cross4(
            &y.column(0).into_owned(),
            &y.column(1).into_owned(),
            &y.column(2).into_owned(),
        ));
        Ok(Self { y, plane })
    }

    pub fn from_points(y1: &ProjPoint<T>, y2: &ProjPoint<T>, y3: &ProjPoint<T>) -> Result<Self> {
        Self::new(Matrix4x3::from_columns(&[y1.coords, y2.coords, y3.coords]))
    }

    pub fn matrix(&self) -> &Matrix4x3<T> {
        &self.y
    }

    pub fn plane(&self) -> &ProjPlane<T> {
        &self.plane
    }

    /// Basis point `y_i`, `i ∈ {0, 1, 2}`.
    pub fn basis_point(&self, i: usize) -> ProjPoint<T> {
        ProjPoint::new_unchecked(self.y.column(i).into_owned())
    }

    /// The point `Y u` on the retinal plane.
    pub fn point(&self, u: &Vector3<T>) -> Result<ProjPoint<T>> {
        ProjPoint::new(self.y * u)
    }

    /// Frame coordinates `u = Y† y` of an on-plane point, with
    /// `Y† = (YᵀY)⁻¹Yᵀ`.
    pub fn coords_of(&self, y: &ProjPoint<T>) -> Result<Vector3<T>> {
        if !self.plane.contains(y) {
            return Err(Error::OffPlane);
        }
        let yt = self.y.transpose();
        let gram = yt * self.y;
        let inv = gram.try_inverse().ok_or(Error::RankDeficientFrame)?;
        Ok(inv * yt * y.coords)
    }
}

/// The 3×6 matrix `N` mapping a line to the frame coordinates of its
/// intersection with the retinal plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineToImageMap<T: Real> {
    n: SMatrix<T, 3, 6>,
}

impl<T: Real> LineToImageMap<T> {
    /// Rows are the duals of `y2 ∨ y3`, `y3 ∨ y1`, `y1 ∨ y2`.
    pub fn new(frame: &RetinalFrame<T>) -> Self {
        let y = |i: usize| frame.y.column(i).into_owned();
        let rows = [
            swap_halves(&wedge(&y(1), &y(2))),
            swap_halves(&wedge(&y(2), &y(0))),
            swap_halves(&wedge(&y(0), &y(1))),
        ];
        let n = SMatrix::<T, 3, 6>::from_fn(|r, c| rows[r][c]);
        Self { n }
    }

    pub fn matrix(&self) -> &SMatrix<T, 3, 6> {
        &self.n
    }

    pub fn apply(&self, l: &PluckerLine<T>) -> Vector3<T> {
        self.n * l.coords
    }
}

/// Join `x ∨ y`.
pub fn join_points<T: Real>(x: &ProjPoint<T>, y: &ProjPoint<T>) -> Result<PluckerLine<T>> {
    PluckerLine::join(x, y)
}

/// Meet `l ∧ w`.
pub fn meet_line_plane<T: Real>(l: &PluckerLine<T>, w: &ProjPlane<T>) -> Result<ProjPoint<T>> {
    l.meet_plane(w)
}

/// Join `l ∨ z`.
pub fn join_line_point<T: Real>(l: &PluckerLine<T>, z: &ProjPoint<T>) -> Result<ProjPlane<T>> {
    l.join_point(z)
}

pub fn build_line_to_image<T: Real>(frame: &RetinalFrame<T>) -> LineToImageMap<T> {
    LineToImageMap::new(frame)
}

pub fn frame_coords<T: Real>(frame: &RetinalFrame<T>, y: &ProjPoint<T>) -> Result<Vector3<T>> {
    frame.coords_of(y)
}

// JSON: points/planes as 4-arrays, lines as 6-arrays, frames as 4×3 row-major.

macro_rules! array_serde {
    ($ty:ident, $n:literal, $vec:ident) => {
        impl<T: Real + Serialize> Serialize for $ty<T> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let a: [T; $n] = self.coords.into();
                a.serialize(s)
            }
        }

        impl<'de, T: Real + Deserialize<'de>> Deserialize<'de> for $ty<T> {
            fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
                let a = <[T; $n]>::deserialize(d)?;
                $ty::new($vec::from(a)).map_err(serde::de::Error::custom)
            }
        }
    };
}

array_serde!(ProjPoint, 4, Vector4);
array_serde!(ProjPlane, 4, Vector4);
array_serde!(PluckerLine, 6, Vector6);

impl<T: Real + Serialize> Serialize for RetinalFrame<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: [[T; 3]; 4] = std::array::from_fn(|r| std::array::from_fn(|c| self.y[(r, c)]));
        rows.serialize(s)
    }
}

impl<'de, T: Real + Deserialize<'de>> Deserialize<'de> for RetinalFrame<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = <[[T; 3]; 4]>::deserialize(d)?;
        RetinalFrame::new(Matrix4x3::from_fn(|r, c| rows[r][c])).map_err(serde::de::Error::custom)
    }
}
