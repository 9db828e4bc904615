//! The 2×2×2×2 epipolar tensor of a pair of two-slit cameras: construction,
//! linear estimation from correspondences, recovery of the two camera
//! configurations through principal minors, and the essential tensor.
//!
//! Entries are stored lexicographically: `f_ijkl` (indices in `{1, 2}`)
//! lives at `8(i−1) + 4(j−1) + 2(k−1) + (l−1)`. Index `1` of a mode selects
//! the *second* row of the corresponding 2×4 matrix.

use nalgebra::{DMatrix, Matrix2, Matrix2x4, Matrix4, RowVector4, Vector2, Vector3};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::camera::TwoSlitCamera;
use crate::error::{Error, Result};
use crate::scalar::Real;

#[inline]
fn idx(i: usize, j: usize, k: usize, l: usize) -> usize {
    8 * i + 4 * j + 2 * k + l
}

/// Exact-for-integers 4×4 determinant by Laplace expansion along row 0.
fn det4<T: Real>(m: &Matrix4<T>) -> T {
    let det3 = |c0: usize, c1: usize, c2: usize| {
        m[(1, c0)] * (m[(2, c1)] * m[(3, c2)] - m[(2, c2)] * m[(3, c1)])
            - m[(1, c1)] * (m[(2, c0)] * m[(3, c2)] - m[(2, c2)] * m[(3, c0)])
            + m[(1, c2)] * (m[(2, c0)] * m[(3, c1)] - m[(2, c1)] * m[(3, c0)])
    };
    m[(0, 0)] * det3(1, 2, 3) - m[(0, 1)] * det3(0, 2, 3) + m[(0, 2)] * det3(0, 1, 3)
        - m[(0, 3)] * det3(0, 1, 2)
}

/// Homogeneous 2×2×2×2 tensor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpipolarTensor<T: Real> {
    f: [T; 16],
}

impl<T: Real> EpipolarTensor<T> {
    pub fn new(f: [T; 16]) -> Result<Self> {
        if f.iter().all(|v| *v == T::zero()) || f.iter().any(|v| !v.is_finite()) {
            return Err(Error::ZeroVector);
        }
        Ok(Self { f })
    }

    pub(crate) fn new_unchecked(f: [T; 16]) -> Self {
        Self { f }
    }

    pub fn entries(&self) -> &[T; 16] {
        &self.f
    }

    /// `f_ijkl` with one-based indices in `{1, 2}`.
    pub fn at(&self, i: usize, j: usize, k: usize, l: usize) -> T {
        self.f[idx(i - 1, j - 1, k - 1, l - 1)]
    }

    pub fn norm(&self) -> T {
        self.f.iter().fold(T::zero(), |acc, v| acc + *v * *v).sqrt()
    }

    pub fn scaled(&self, s: T) -> Self {
        Self {
            f: self.f.map(|v| v * s),
        }
    }

    /// Unit Frobenius norm with the largest-magnitude entry positive.
    pub fn normalized(&self) -> Self {
        let n = self.norm();
        let lead = self
            .f
            .iter()
            .copied()
            .fold(T::zero(), |a, v| if v.abs() > a.abs() { v } else { a });
        let s = if lead < T::zero() {
            -T::one()
        } else {
            T::one()
        };
        self.scaled(s / n)
    }

    /// Relative distance up to scale and sign.
    pub fn distance(&self, other: &Self) -> T {
        let a = self.normalized();
        let b = other.normalized();
        let (mut dp, mut dm) = (T::zero(), T::zero());
        for (x, y) in a.f.iter().zip(b.f.iter()) {
            dp += (*x - *y) * (*x - *y);
            dm += (*x + *y) * (*x + *y);
        }
        dp.min(dm).sqrt()
    }

    /// Entry indexed by the set `S ⊆ {1,2,3,4}` of modes set to 1 (bit `m`
    /// of `mask` for mode `m+1`).
    pub fn by_mask(&self, mask: usize) -> T {
        let b = |m: usize| usize::from(mask & (1 << m) == 0);
        self.f[idx(b(0), b(1), b(2), b(3))]
    }

    /// The quadri-bilinear form evaluated on image points `u`, `u'`.
    pub fn evaluate(&self, u: &Vector3<T>, up: &Vector3<T>) -> T {
        let fac = factors(u, up);
        let mut s = T::zero();
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        s +=
                            self.f[idx(i, j, k, l)] * fac[0][i] * fac[1][j] * fac[2][k] * fac[3][l];
                    }
                }
            }
        }
        s
    }

    /// `R_{i'j'k'l'} = Σ F_ijkl M0_{ii'} M1_{jj'} M2_{kk'} M3_{ll'}`.
    pub fn contract(&self, m: &[Matrix2<T>; 4]) -> Self {
        let mut out = [T::zero(); 16];
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    for d in 0..2 {
                        let mut s = T::zero();
                        for i in 0..2 {
                            for j in 0..2 {
                                for k in 0..2 {
                                    for l in 0..2 {
                                        s += self.f[idx(i, j, k, l)]
                                            * m[0][(i, a)]
                                            * m[1][(j, b)]
                                            * m[2][(k, c)]
                                            * m[3][(l, d)];
                                    }
                                }
                            }
                        }
                        out[idx(a, b, c, d)] = s;
                    }
                }
            }
        }
        Self { f: out }
    }
}

/// The four 2-vectors `(u1,u3), (u2,u3), (u'1,u'3), (u'2,u'3)`.
fn factors<T: Real>(u: &Vector3<T>, up: &Vector3<T>) -> [Vector2<T>; 4] {
    [
        Vector2::new(u[0], u[2]),
        Vector2::new(u[1], u[2]),
        Vector2::new(up[0], up[2]),
        Vector2::new(up[1], up[2]),
    ]
}

impl<T: Real + Serialize> Serialize for EpipolarTensor<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.f.serialize(s)
    }
}

impl<'de, T: Real + Deserialize<'de>> Deserialize<'de> for EpipolarTensor<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let f = <[T; 16]>::deserialize(d)?;
        EpipolarTensor::new(f).map_err(serde::de::Error::custom)
    }
}

/// A pair of corresponding image points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Correspondence<T: Real> {
    pub u: Vector3<T>,
    pub uprime: Vector3<T>,
}

impl<T: Real> Correspondence<T> {
    pub fn new(u: Vector3<T>, uprime: Vector3<T>) -> Self {
        Self { u, uprime }
    }
}

#[derive(Serialize, Deserialize)]
struct CorrespondenceRepr<T> {
    u1: T,
    u2: T,
    u3: T,
    v1: T,
    v2: T,
    v3: T,
}

impl<T: Real + Serialize> Serialize for Correspondence<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CorrespondenceRepr {
            u1: self.u[0],
            u2: self.u[1],
            u3: self.u[2],
            v1: self.uprime[0],
            v2: self.uprime[1],
            v3: self.uprime[2],
        }
        .serialize(s)
    }
}

impl<'de, T: Real + Deserialize<'de>> Deserialize<'de> for Correspondence<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = CorrespondenceRepr::<T>::deserialize(d)?;
        Ok(Correspondence::new(
            Vector3::new(r.u1, r.u2, r.u3),
            Vector3::new(r.v1, r.v2, r.v3),
        ))
    }
}

/// `f_ijkl = (−1)^{i+j+k+l} det[(A1)_{3−i}; (A2)_{3−j}; (B1)_{3−k}; (B2)_{3−l}]`.
pub fn tensor_from_cameras<T: Real>(
    cam_a: &TwoSlitCamera<T>,
    cam_b: &TwoSlitCamera<T>,
) -> EpipolarTensor<T> {
    let mats: [&Matrix2x4<T>; 4] = [cam_a.a1(), cam_a.a2(), cam_b.a1(), cam_b.a2()];
    let mut f = [T::zero(); 16];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    let sel = [i, j, k, l];
                    // zero-based index 0 ↔ one-based 1 ↔ second row
                    let m = Matrix4::from_rows(&std::array::from_fn::<RowVector4<T>, 4, _>(|r| {
                        mats[r].row(1 - sel[r]).into_owned()
                    }));
                    let d = det4(&m);
                    f[idx(i, j, k, l)] = if (i + j + k + l) % 2 == 0 { d } else { -d };
                }
            }
        }
    }
    EpipolarTensor::new_unchecked(f)
}

/// Value of the constraint on a correspondence, divided by the norms of the
/// four 2-vector factors and of the tensor.
pub fn epipolar_residual<T: Real>(f: &EpipolarTensor<T>, c: &Correspondence<T>) -> T {
    let fac = factors(&c.u, &c.uprime);
    let scale = fac.iter().fold(f.norm(), |acc, v| acc * v.norm());
    if scale == T::zero() {
        return T::zero();
    }
    f.evaluate(&c.u, &c.uprime) / scale
}

/// Centering and isotropic scaling of one inhomogeneous coordinate,
/// `T = [s, −s c; 0, 1]` acting on `(u_k, u3)`.
fn conditioning<T: Real>(values: impl Iterator<Item = Vector2<T>>) -> Matrix2<T> {
    let xs: Vec<T> = values
        .filter(|v| v[1].abs() > T::incidence_tol() * v.norm())
        .map(|v| v[0] / v[1])
        .collect();
    if xs.is_empty() {
        return Matrix2::identity();
    }
    let n = T::from_usize(xs.len()).unwrap();
    let c = xs.iter().copied().fold(T::zero(), |a, b| a + b) / n;
    let rms = (xs.iter().fold(T::zero(), |a, x| a + (*x - c) * (*x - c)) / n).sqrt();
    let s = if rms > T::zero() {
        T::one() / rms
    } else {
        T::one()
    };
    Matrix2::new(s, -s * c, T::zero(), T::one())
}

/// Least-squares tensor from at least 15 correspondences: the smallest right
/// singular vector of the design matrix, computed on conditioned
/// coordinates and mapped back; unit norm on return.
pub fn estimate_tensor_linear<T: Real>(corrs: &[Correspondence<T>]) -> Result<EpipolarTensor<T>> {
    const NEED: usize = 15;
    if corrs.len() < NEED {
        return Err(Error::InsufficientCorrespondences {
            got: corrs.len(),
            need: NEED,
        });
    }
    let all: Vec<[Vector2<T>; 4]> = corrs.iter().map(|c| factors(&c.u, &c.uprime)).collect();
    let t: [Matrix2<T>; 4] = std::array::from_fn(|m| conditioning(all.iter().map(|f| f[m])));
    let rows = corrs.len().max(16);
    let mut design = DMatrix::<T>::zeros(rows, 16);
    for (r, fac) in all.iter().enumerate() {
        let g: [Vector2<T>; 4] = std::array::from_fn(|m| {
            let v = t[m] * fac[m];
            v / v.norm()
        });
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        design[(r, idx(i, j, k, l))] = g[0][i] * g[1][j] * g[2][k] * g[3][l];
                    }
                }
            }
        }
    }
    let svd = design.svd(false, true);
    let vt = svd.v_t.expect("v_t requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| {
        svd.singular_values[b]
            .partial_cmp(&svd.singular_values[a])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let s1 = svd.singular_values[order[0]];
    let s15 = svd.singular_values[order[14]];
    if s1 == T::zero() || s15 / s1 < T::lit(1e-8) {
        return Err(Error::RankDeficientDesign);
    }
    let v = vt.row(order[15]);
    let fp = EpipolarTensor::new_unchecked(std::array::from_fn(|i| v[i]));
    Ok(fp.contract(&t).normalized())
}

/// 4×4 matrix `C` with `c12 = c13 = c14 = 1`; its principal minors are the
/// entries of a tensor normalized to `f2222 = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinorMatrix<T: Real> {
    c: Matrix4<T>,
}

/// Signed principal minor `(−1)^|S| det C_S`.
fn signed_minor<T: Real>(c: &Matrix4<T>, mask: usize) -> T {
    let sel: Vec<usize> = (0..4).filter(|m| mask & (1 << m) != 0).collect();
    let n = sel.len();
    let d = match n {
        0 => T::one(),
        1 => c[(sel[0], sel[0])],
        _ => DMatrix::from_fn(n, n, |r, k| c[(sel[r], sel[k])]).determinant(),
    };
    if n.is_multiple_of(2) {
        d
    } else {
        -d
    }
}

impl<T: Real> MinorMatrix<T> {
    /// Requires `c12 = c13 = c14 = 1` (to the incidence tolerance).
    pub fn new(c: Matrix4<T>) -> Result<Self> {
        let tol = T::incidence_tol();
        if (1..4).any(|j| (c[(0, j)] - T::one()).abs() > tol) {
            return Err(Error::DegenerateFrame(
                "first row of C must be (c11, 1, 1, 1)",
            ));
        }
        Ok(Self { c })
    }

    /// `D⁻¹ C D` with `D = diag(1, 1/c12, 1/c13, 1/c14)`, which pins the
    /// first row to ones.
    pub fn renormalized(c: &Matrix4<T>) -> Result<Self> {
        let scale = c.amax();
        if (1..4).any(|j| c[(0, j)].abs() <= T::incidence_tol() * scale) {
            return Err(Error::TransposeRenormalization);
        }
        let d = [
            T::one(),
            T::one() / c[(0, 1)],
            T::one() / c[(0, 2)],
            T::one() / c[(0, 3)],
        ];
        let mut out = Matrix4::from_fn(|i, j| c[(i, j)] * d[j] / d[i]);
        for j in 1..4 {
            out[(0, j)] = T::one();
        }
        Ok(Self { c: out })
    }

    pub fn matrix(&self) -> &Matrix4<T> {
        &self.c
    }

    /// Tensor of signed principal minors, `f2222 = 1`.
    pub fn tensor(&self) -> EpipolarTensor<T> {
        let mut f = [T::zero(); 16];
        for mask in 0..16 {
            let b = |m: usize| usize::from(mask & (1 << m) == 0);
            f[idx(b(0), b(1), b(2), b(3))] = signed_minor(&self.c, mask);
        }
        EpipolarTensor::new_unchecked(f)
    }

    /// Deviation of the two entries not used by the recovery:
    /// `(f1111 − det C)² + (f2111 + det C_{234})²` for a tensor with `f2222 = 1`.
    pub fn residual(&self, normalized: &EpipolarTensor<T>) -> T {
        let a = normalized.at(1, 1, 1, 1) - signed_minor(&self.c, 0b1111);
        let b = normalized.at(2, 1, 1, 1) - signed_minor(&self.c, 0b1110);
        a * a + b * b
    }
}

impl<T: Real + Serialize> Serialize for MinorMatrix<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        crate::camera::rows_4x4(&self.c).serialize(s)
    }
}

impl<'de, T: Real + Deserialize<'de>> Deserialize<'de> for MinorMatrix<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = <[[T; 4]; 4]>::deserialize(d)?;
        Self::new(Matrix4::from_fn(|r, c| rows[r][c])).map_err(serde::de::Error::custom)
    }
}

/// Real roots of `a x² + b x + c = 0` with the branch rules: linear fallback
/// for negligible `a`, pruning of clearly negative discriminants, clamping
/// of slightly negative ones.
fn quadratic_roots<T: Real>(a: T, b: T, c: T) -> Vec<T> {
    let scale = a.abs().max(b.abs()).max(c.abs());
    if scale == T::zero() {
        return vec![];
    }
    if a.abs() < T::lit(1e-12) * scale {
        if b.abs() < T::lit(1e-12) * scale {
            return vec![];
        }
        return vec![-c / b];
    }
    let mut disc = b * b - T::lit(4.0) * a * c;
    let disc_scale = b * b + (T::lit(4.0) * a * c).abs();
    if disc < T::zero() {
        if disc < -T::lit(1e-10) * disc_scale {
            return vec![];
        }
        disc = T::zero();
    }
    let sq = disc.sqrt();
    let q = if b >= T::zero() {
        -(b + sq) / T::lit(2.0)
    } else {
        (sq - b) / T::lit(2.0)
    };
    if q == T::zero() {
        return vec![T::zero(), T::zero()];
    }
    vec![q / a, c / q]
}

/// All candidate minor matrices of `f` (normalized to `f2222 = 1`), sorted
/// by ascending residual on the two unused entries `f1111`, `f2111`.
pub fn recover_minor_matrices<T: Real>(f: &EpipolarTensor<T>) -> Result<Vec<(MinorMatrix<T>, T)>> {
    let f22 = f.at(2, 2, 2, 2);
    if f22.abs() <= T::incidence_tol() * f.norm() {
        return Err(Error::NormalizationFailure);
    }
    let fn_ = f.scaled(T::one() / f22);
    // entry for the set of modes S (one-based mode numbers)
    let fs = |s: &[usize]| fn_.by_mask(s.iter().fold(0, |m, &i| m | (1 << (i - 1))));
    let mut c = Matrix4::<T>::zeros();
    for j in 1..4 {
        c[(0, j)] = T::one();
    }
    for m in 0..4 {
        c[(m, m)] = -fs(&[m + 1]);
    }
    for m in 1..4 {
        c[(m, 0)] = (c[(0, 0)] * c[(m, m)] - fs(&[1, m + 1])) / c[(0, m)];
    }
    // for each pair (p, q): solve for x = c_qp, then c_pq = P / x
    let pairs = [(1usize, 2usize), (1, 3), (2, 3)];
    let mut branches: Vec<Vec<(T, T)>> = Vec::with_capacity(3);
    for &(p, q) in &pairs {
        let fpq = fs(&[p + 1, q + 1]);
        let pp = c[(p, p)] * c[(q, q)] - fpq;
        let a = c[(0, q)] * c[(p, 0)];
        let b = fs(&[1, p + 1, q + 1]) + c[(0, 0)] * fpq
            - c[(0, p)] * c[(p, 0)] * c[(q, q)]
            - c[(0, q)] * c[(q, 0)] * c[(p, p)];
        let cc = c[(0, p)] * c[(q, 0)] * pp;
        let tiny = T::lit(1e-12) * (pp.abs() + T::one());
        let roots: Vec<(T, T)> = quadratic_roots(a, b, cc)
            .into_iter()
            .filter(|x| x.is_finite() && x.abs() > tiny)
            .map(|x| (x, pp / x))
            .collect();
        if roots.is_empty() {
            return Err(Error::NoRealCandidates);
        }
        branches.push(roots);
    }
    let mut out = Vec::with_capacity(8);
    for r0 in &branches[0] {
        for r1 in &branches[1] {
            for r2 in &branches[2] {
                let mut m = c;
                for (&(p, q), &(x, y)) in pairs.iter().zip([r0, r1, r2]) {
                    m[(q, p)] = x;
                    m[(p, q)] = y;
                }
                let mm = MinorMatrix { c: m };
                let res = mm.residual(&fn_);
                out.push((mm, res));
            }
        }
    }
    out.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
    Ok(out)
}

/// Gauss–Newton polish of a recovered `C` against all fifteen non-trivial
/// entries of `f` (scaled to `f2222 = 1`), starting from the closed-form
/// candidate. The closed form fits thirteen entries exactly and ignores
/// the other two, which matters once `f` is estimated from noisy data.
/// Only steps that decrease the residual are taken; the start is returned
/// unchanged when `f` is already consistent.
pub fn refine_minor_matrix<T: Real>(
    f: &EpipolarTensor<T>,
    start: &MinorMatrix<T>,
) -> Result<MinorMatrix<T>> {
    let f22 = f.at(2, 2, 2, 2);
    if f22.abs() <= T::incidence_tol() * f.norm() {
        return Err(Error::NormalizationFailure);
    }
    let target = f.scaled(T::one() / f22);
    // free entries: everything except c12, c13, c14
    let free: Vec<(usize, usize)> = (0..4)
        .flat_map(|i| (0..4).map(move |j| (i, j)))
        .filter(|&(i, j)| i > 0 || j == 0)
        .collect();
    let residual = |c: &Matrix4<T>| -> [T; 16] {
        let t = MinorMatrix { c: *c }.tensor();
        std::array::from_fn(|k| t.entries()[k] - target.entries()[k])
    };
    let cost = |r: &[T; 16]| r.iter().fold(T::zero(), |a, x| a + *x * *x);
    let h = T::default_epsilon().cbrt();
    let mut c = start.c;
    let mut r = residual(&c);
    let mut best = cost(&r);
    for _ in 0..20 {
        let mut j = DMatrix::<T>::zeros(16, free.len());
        for (col, &(a, b)) in free.iter().enumerate() {
            let step = h * (T::one() + c[(a, b)].abs());
            let (mut cp, mut cm) = (c, c);
            cp[(a, b)] += step;
            cm[(a, b)] -= step;
            let (rp, rm) = (residual(&cp), residual(&cm));
            for k in 0..16 {
                j[(k, col)] = (rp[k] - rm[k]) / (step + step);
            }
        }
        let rv = nalgebra::DVector::from_iterator(16, r.iter().map(|x| -*x));
        let Ok(delta) = j.svd(true, true).solve(&rv, T::rank_tol()) else {
            break;
        };
        let mut cand = c;
        for (col, &(a, b)) in free.iter().enumerate() {
            cand[(a, b)] += delta[col];
        }
        let rc = residual(&cand);
        let next = cost(&rc);
        if next.partial_cmp(&best) != Some(std::cmp::Ordering::Less) {
            break;
        }
        let done = best - next <= T::default_epsilon() * best;
        c = cand;
        r = rc;
        best = next;
        if done {
            break;
        }
    }
    Ok(MinorMatrix { c })
}

/// Cameras with first rows `e1..e4` and second rows the rows of `C`.
pub fn cameras_from_minor_matrix<T: Real>(
    c: &MinorMatrix<T>,
) -> Result<(TwoSlitCamera<T>, TwoSlitCamera<T>)> {
    let m = c.matrix();
    let mat = |r: usize| {
        Matrix2x4::from_fn(|i, j| {
            if i == 0 {
                if j == r {
                    T::one()
                } else {
                    T::zero()
                }
            } else {
                m[(r, j)]
            }
        })
    };
    Ok((
        TwoSlitCamera::new(mat(0), mat(1))?,
        TwoSlitCamera::new(mat(2), mat(3))?,
    ))
}

pub type CameraPair<T> = (TwoSlitCamera<T>, TwoSlitCamera<T>);

/// The configurations of `C` and of the renormalized `Cᵀ`; both have the
/// same epipolar tensor.
pub fn two_configurations<T: Real>(c: &MinorMatrix<T>) -> Result<(CameraPair<T>, CameraPair<T>)> {
    let first = cameras_from_minor_matrix(c)?;
    let t = MinorMatrix::renormalized(&c.matrix().transpose())?;
    let second = cameras_from_minor_matrix(&t)?;
    Ok((first, second))
}

/// Change of coordinates `H` bringing a camera pair to the normal form with
/// first rows `e1..e4` and `c12 = c13 = c14 = 1`, together with the
/// resulting minor matrix. Requires the four first rows to be independent.
pub fn canonical_frame<T: Real>(
    cam_a: &TwoSlitCamera<T>,
    cam_b: &TwoSlitCamera<T>,
) -> Result<(Matrix4<T>, MinorMatrix<T>)> {
    let mats = [cam_a.a1(), cam_a.a2(), cam_b.a1(), cam_b.a2()];
    let g = Matrix4::from_rows(&std::array::from_fn::<RowVector4<T>, 4, _>(|r| {
        mats[r].row(0).into_owned()
    }));
    let sv = g.singular_values();
    if sv.min() / sv.max() < T::incidence_tol() {
        return Err(Error::DegenerateFrame("first rows are dependent"));
    }
    let gi = g
        .try_inverse()
        .ok_or(Error::DegenerateFrame("first rows are dependent"))?;
    let c0 = Matrix4::from_rows(&std::array::from_fn::<RowVector4<T>, 4, _>(|r| {
        mats[r].row(1) * gi
    }));
    let c = MinorMatrix::renormalized(&c0)
        .map_err(|_| Error::DegenerateFrame("zero entry in first row of C"))?;
    let d = Matrix4::from_diagonal(&nalgebra::Vector4::new(
        T::one(),
        T::one() / c0[(0, 1)],
        T::one() / c0[(0, 2)],
        T::one() / c0[(0, 3)],
    ));
    let h = d.try_inverse().ok_or(Error::SingularTransform)? * g;
    Ok((h, c))
}

/// `E_{i'j'k'l'} = Σ F_ijkl (K1A)_{ii'} (K2A)_{jj'} (K1B)_{kk'} (K2B)_{ll'}`:
/// each mode contracts with the row index of its calibration matrix, the
/// way `(u1, u3)` transforms when `A1 = K1A Â1`.
pub fn essential_decompose<T: Real>(
    f: &EpipolarTensor<T>,
    k: &[Matrix2<T>; 4],
) -> Result<EpipolarTensor<T>> {
    for m in k {
        if m.determinant().abs() <= T::incidence_tol() * m.norm_squared() {
            return Err(Error::SingularCalibration);
        }
    }
    Ok(f.contract(k))
}

/// Inverse of [`essential_decompose`].
pub fn essential_compose<T: Real>(
    e: &EpipolarTensor<T>,
    k: &[Matrix2<T>; 4],
) -> Result<EpipolarTensor<T>> {
    let inv: Result<Vec<Matrix2<T>>> = k
        .iter()
        .map(|m| m.try_inverse().ok_or(Error::SingularCalibration))
        .collect();
    let inv = inv?;
    Ok(e.contract(&[inv[0], inv[1], inv[2], inv[3]]))
}
