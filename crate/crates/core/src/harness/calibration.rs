//! Self-calibration experiment: random calibrated parallel cameras seen
//! through a projective change of coordinates `Q`.

use nalgebra::{Matrix2x4, Matrix4};
use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::report::{ExperimentReport, Outcome};
use super::scene::rng;
use crate::camera::{rows_4x4, TwoSlitCamera};
use crate::error::{Error, Result};
use crate::selfcal::{
    estimate_daq, extract_upgrade, similarity_check, DualAbsoluteQuadric, SimilarityCheck,
    UpgradeOptions, UpgradeResult,
};

type Camera = TwoSlitCamera<f64>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelfcalConfig {
    pub cameras: usize,
    /// Standard deviation of the noise added to the entries of each 2×4
    /// matrix after scaling it to unit Frobenius norm.
    pub sigma: f64,
    pub seed: u64,
    /// Fixed `Q`; drawn at random when absent.
    pub q: Option<[[f64; 4]; 4]>,
    /// Magnifications `(K1[0][0], K2[0][0])` of the first camera; drawn at
    /// random when absent.
    pub first_magnifications: Option<(f64, f64)>,
    pub magnification_range: (f64, f64),
    pub rank_ratio: f64,
}

impl Default for SelfcalConfig {
    fn default() -> Self {
        Self {
            cameras: 10,
            sigma: 0.0,
            seed: 0,
            q: None,
            first_magnifications: None,
            magnification_range: (0.5, 5.0),
            rank_ratio: UpgradeOptions::default().rank_ratio,
        }
    }
}

impl SelfcalConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.sigma >= 0.0 && self.sigma.is_finite()) {
            return Err(Error::Config(format!(
                "sigma must be finite and non-negative, got {}",
                self.sigma
            )));
        }
        if self.cameras == 0 {
            return Err(Error::Config("need at least one camera".into()));
        }
        let (lo, hi) = self.magnification_range;
        if !(lo > 0.0 && hi > lo && hi.is_finite()) {
            return Err(Error::Config(format!(
                "bad magnification range ({lo}, {hi})"
            )));
        }
        if self.rank_ratio.is_nan() || self.rank_ratio <= 0.0 {
            return Err(Error::Config("rank_ratio must be positive".into()));
        }
        Ok(())
    }
}

/// Ground truth and the projective cameras handed to the estimator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelfcalInput {
    #[serde(rename = "Q")]
    pub q: [[f64; 4]; 4],
    pub cameras: Vec<Camera>,
    /// True `(K1[0][0], K2[0][0])` per camera (`K1[1][1] = K2[1][1] = 1`).
    pub magnifications: Vec<(f64, f64)>,
    pub rank_ratio: f64,
}

impl SelfcalInput {
    pub fn q_matrix(&self) -> Matrix4<f64> {
        Matrix4::from_fn(|r, c| self.q[r][c])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelfcalResult {
    #[serde(rename = "M")]
    pub m: DualAbsoluteQuadric<f64>,
    pub true_m: DualAbsoluteQuadric<f64>,
    /// Largest entrywise difference between the estimate and the truth, both
    /// at unit Frobenius norm.
    pub m_delta: f64,
    pub upgrade: UpgradeResult<f64>,
    pub similarity: SimilarityCheck,
    pub recovered_magnifications: Vec<(f64, f64)>,
    /// Largest relative magnification error over all cameras.
    pub max_magnification_error: f64,
}

pub type SelfcalReport = ExperimentReport<SelfcalInput, SelfcalResult>;

pub fn generate_selfcal_input(config: &SelfcalConfig) -> Result<SelfcalInput> {
    config.validate()?;
    let mut rng = rng(config.seed);
    let q = match config.q {
        Some(q) => Matrix4::from_fn(|r, c| q[r][c]),
        None => super::random::transform(&mut rng),
    };
    let qi = q.try_inverse().ok_or(Error::SingularTransform)?;
    let (lo, hi) = config.magnification_range;
    let noise = Normal::new(0.0, config.sigma).map_err(|e| Error::Config(e.to_string()))?;
    let mut cameras = Vec::with_capacity(config.cameras);
    let mut magnifications = Vec::with_capacity(config.cameras);
    for i in 0..config.cameras {
        let k = match (i, config.first_magnifications) {
            (0, Some(k)) => k,
            _ => (rng.random_range(lo..hi), rng.random_range(lo..hi)),
        };
        let (a1, a2) = super::random::diagonal_parallel(&mut rng, k);
        let mut perturb = |a: Matrix2x4<f64>| {
            let a = a * qi;
            let a = a / a.norm();
            if config.sigma > 0.0 {
                a + Matrix2x4::from_fn(|_, _| noise.sample(&mut rng))
            } else {
                a
            }
        };
        let (a1, a2) = (perturb(a1), perturb(a2));
        cameras.push(TwoSlitCamera::new(a1, a2)?);
        magnifications.push(k);
    }
    Ok(SelfcalInput {
        q: rows_4x4(&q),
        cameras,
        magnifications,
        rank_ratio: config.rank_ratio,
    })
}

pub fn run_selfcal_experiment(config: &SelfcalConfig) -> SelfcalReport {
    match generate_selfcal_input(config) {
        Ok(input) => {
            let outcome = Outcome::from_result(analyze_selfcal(&input));
            ExperimentReport::new("selfcal", config.seed, config.sigma, input, outcome)
        }
        Err(e) => {
            let empty = SelfcalInput {
                q: [[0.0; 4]; 4],
                cameras: vec![],
                magnifications: vec![],
                rank_ratio: 0.0,
            };
            ExperimentReport::new(
                "selfcal",
                config.seed,
                config.sigma,
                empty,
                Outcome::from_result(Err(e)),
            )
        }
    }
}

/// Estimation, upgrade and comparison with the ground truth of `input`.
pub fn analyze_selfcal(input: &SelfcalInput) -> Result<SelfcalResult> {
    let q = input.q_matrix();
    let m = estimate_daq(&input.cameras, true)?;
    let true_m = DualAbsoluteQuadric::from_transform(&q)?;
    let opts = UpgradeOptions {
        rank_ratio: input.rank_ratio,
        ..UpgradeOptions::default()
    };
    let upgrade = extract_upgrade(&m, &input.cameras, opts)?;
    let similarity = similarity_check(&q, &upgrade.qprime)?;
    let recovered: Vec<(f64, f64)> = upgrade
        .calibrations
        .iter()
        .map(|c| c.magnifications())
        .collect();
    let max_err = recovered
        .iter()
        .zip(&input.magnifications)
        .flat_map(|(r, t)| [(r.0 - t.0).abs() / t.0, (r.1 - t.1).abs() / t.1])
        .fold(0.0, f64::max);
    Ok(SelfcalResult {
        m,
        true_m,
        m_delta: m.distance(&true_m),
        upgrade,
        similarity,
        recovered_magnifications: recovered,
        max_magnification_error: max_err,
    })
}
