//! Seeded synthetic two-view scenes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::fixtures::reference_cameras;
use crate::camera::TwoSlitCamera;
use crate::epipolar::Correspondence;
use crate::error::{Error, Result};
use crate::projective::ProjPoint;

/// The generator behind every experiment; its name is recorded in reports.
pub type ExperimentRng = ChaCha8Rng;
pub const RNG_ALGORITHM: &str = "ChaCha8";

pub fn rng(seed: u64) -> ExperimentRng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SceneConfig {
    pub points: usize,
    /// Standard deviation of the noise on inhomogeneous image coordinates.
    pub sigma: f64,
    pub seed: u64,
    /// Points are drawn uniformly in `[-half_box, half_box]³`.
    pub half_box: f64,
    /// Points whose images leave `[-e, e]²` in either view are redrawn.
    pub image_half_extent: f64,
    /// Draw all points on the plane `z = 0` (a degenerate configuration).
    pub coplanar: bool,
    pub cameras: [TwoSlitCamera<f64>; 2],
}

impl Default for SceneConfig {
    fn default() -> Self {
        Self {
            points: 70,
            sigma: 1e-5,
            seed: 0,
            half_box: 5.0,
            image_half_extent: 50.0,
            coplanar: false,
            cameras: reference_cameras(),
        }
    }
}

impl SceneConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.sigma >= 0.0 && self.sigma.is_finite()) {
            return Err(Error::Config(format!(
                "sigma must be finite and non-negative, got {}",
                self.sigma
            )));
        }
        if self.points == 0 {
            return Err(Error::Config("need at least one point".into()));
        }
        if !(self.half_box > 0.0 && self.half_box.is_finite()) {
            return Err(Error::Config(format!(
                "half_box must be positive, got {}",
                self.half_box
            )));
        }
        if !(self.image_half_extent > 0.0 && self.image_half_extent.is_finite()) {
            return Err(Error::Config(format!(
                "image_half_extent must be positive, got {}",
                self.image_half_extent
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticScene {
    pub points: Vec<ProjPoint<f64>>,
    pub cameras: [TwoSlitCamera<f64>; 2],
    /// Noisy images `(x, y, 1)` of `points` in both views.
    pub correspondences: Vec<Correspondence<f64>>,
    pub noise_sigma: f64,
    pub rng_seed: u64,
    pub rng: String,
}

/// Inhomogeneous image coordinates, or `None` near the line at infinity.
pub fn inhomogeneous(u: &nalgebra::Vector3<f64>) -> Option<(f64, f64)> {
    (u[2].abs() > 1e-12 * u.norm()).then(|| (u[0] / u[2], u[1] / u[2]))
}

/// Draws the points first and the noise afterwards, so that scenes sharing
/// a seed share their points whatever the noise level.
pub fn generate_scene(config: &SceneConfig) -> Result<SyntheticScene> {
    config.validate()?;
    let mut rng = rng(config.seed);
    let [ca, cb] = &config.cameras;
    let max_draws = 1000 * config.points;
    let mut points = Vec::with_capacity(config.points);
    let mut clean = Vec::with_capacity(config.points);
    let mut draws = 0;
    while points.len() < config.points {
        draws += 1;
        if draws > max_draws {
            return Err(Error::Config(format!(
                "could not place {} points with images inside ±{}",
                config.points, config.image_half_extent
            )));
        }
        let b = config.half_box;
        let mut coord = || rng.random_range(-b..b);
        let (x, y) = (coord(), coord());
        let z = if config.coplanar { 0.0 } else { coord() };
        let p = ProjPoint::finite(x, y, z);
        let (Ok(u), Ok(v)) = (ca.project(&p), cb.project(&p)) else {
            continue;
        };
        let (Some(u), Some(v)) = (inhomogeneous(&u), inhomogeneous(&v)) else {
            continue;
        };
        let e = config.image_half_extent;
        if [u.0, u.1, v.0, v.1].iter().any(|c| c.abs() > e) {
            continue;
        }
        points.push(p);
        clean.push([u, v]);
    }
    let noise = Normal::new(0.0, config.sigma).map_err(|e| Error::Config(e.to_string()))?;
    let correspondences = clean
        .into_iter()
        .map(|[u, v]| {
            let mut n = || {
                if config.sigma > 0.0 {
                    noise.sample(&mut rng)
                } else {
                    0.0
                }
            };
            let u = nalgebra::Vector3::new(u.0 + n(), u.1 + n(), 1.0);
            let v = nalgebra::Vector3::new(v.0 + n(), v.1 + n(), 1.0);
            Correspondence::new(u, v)
        })
        .collect();
    Ok(SyntheticScene {
        points,
        cameras: config.cameras,
        correspondences,
        noise_sigma: config.sigma,
        rng_seed: config.seed,
        rng: RNG_ALGORITHM.into(),
    })
}
