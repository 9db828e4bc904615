//! Reference numbers of the worked two-view and self-calibration examples.

use crate::camera::TwoSlitCamera;

/// A parallel finite two-slit camera (`A1`, `A2`) and a pushbroom camera
/// (`B1`, `B2`) with integer entries.
pub const REFERENCE_CAMERAS: [[[[f64; 4]; 2]; 2]; 2] = [
    [
        [[-1., 7., 4., 0.], [8., -1., 13., 4.]],
        [[11., 6., -2., 4.], [8., -1., 13., -5.]],
    ],
    [
        [[14., 9., -3., 8.], [0., 0., 0., 1.]],
        [[-3., 8., 10., 3.], [6., 13., 5., 13.]],
    ],
];

/// Epipolar tensor of [`REFERENCE_CAMERAS`], lexicographic `f1111 … f2222`.
pub const REFERENCE_TENSOR: [f64; 16] = [
    0., 0., 21816., -25650., 1906., -2090., -3642., 5510., 880., 475., 18600., -11875., 97., -380.,
    -1259., 1425.,
];

/// The two minor matrices recovered from [`REFERENCE_TENSOR`], to two
/// decimals. The second is the configuration of the original cameras.
pub const REFERENCE_MINORS: [[[f64; 4]; 4]; 2] = [
    [
        [-3.87, 1., 1., 1.],
        [-14.22, 8.33, -6.67, -22.17],
        [0.44, -0.28, 0.27, 1.14],
        [-0.86, 0.26, 0.15, 0.88],
    ],
    [
        [-3.87, 1., 1., 1.],
        [-14.22, 8.33, 9.25, 4.24],
        [0.44, 0.20, 0.27, -0.07],
        [-0.86, -1.34, -2.26, 0.88],
    ],
];

/// Projective change of coordinates of the self-calibration example.
pub const REFERENCE_Q: [[f64; 4]; 4] = [
    [1.49, 0.60, -0.11, -1.15],
    [-1.43, 0.88, -0.93, 1.52],
    [-0.38, -0.21, 1.83, -0.55],
    [0.83, -0.95, -0.63, 0.93],
];

/// `Q Ω* Qᵀ` for [`REFERENCE_Q`], scaled to a unit top-left entry, to two
/// decimals.
pub const REFERENCE_DAQ: [[f64; 4]; 4] = [
    [1.0, -0.58, -0.34, 0.28],
    [-0.58, 1.42, -0.52, -0.55],
    [-0.34, -0.52, 1.36, -0.49],
    [0.28, -0.55, -0.49, 0.77],
];

/// Magnifications of the first self-calibration camera (`K1 = diag(4.04, 1)`,
/// `K2 = diag(1.37, 1)`) and the values recovered in the reference run.
pub const REFERENCE_MAGNIFICATIONS: (f64, f64) = (4.04, 1.37);
pub const REFERENCE_RECOVERED_MAGNIFICATIONS: (f64, f64) = (4.05, 1.38);

pub fn reference_cameras() -> [TwoSlitCamera<f64>; 2] {
    REFERENCE_CAMERAS
        .map(|[a1, a2]| TwoSlitCamera::from_rows(a1, a2).expect("reference cameras are valid"))
}

pub fn reference_q() -> nalgebra::Matrix4<f64> {
    nalgebra::Matrix4::from_fn(|r, c| REFERENCE_Q[r][c])
}
