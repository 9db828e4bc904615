//! Report envelope shared by the experiments.

use serde::{Deserialize, Serialize};

use super::scene::RNG_ALGORITHM;
use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FailureKind {
    /// Invalid input or configuration.
    Validation,
    /// A numerical degeneracy discovered while computing.
    Degeneracy,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub kind: FailureKind,
    pub message: String,
}

impl From<&Error> for Failure {
    fn from(e: &Error) -> Self {
        let kind = if e.is_degeneracy() {
            FailureKind::Degeneracy
        } else {
            FailureKind::Validation
        };
        Self {
            kind,
            message: e.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Outcome<R> {
    Ok(R),
    Failed(Failure),
}

impl<R> Outcome<R> {
    pub fn from_result(r: crate::error::Result<R>) -> Self {
        match r {
            Ok(v) => Outcome::Ok(v),
            Err(e) => Outcome::Failed(Failure::from(&e)),
        }
    }

    pub fn ok(&self) -> Option<&R> {
        match self {
            Outcome::Ok(r) => Some(r),
            Outcome::Failed(_) => None,
        }
    }

    pub fn failure(&self) -> Option<&Failure> {
        match self {
            Outcome::Ok(_) => None,
            Outcome::Failed(f) => Some(f),
        }
    }
}

/// An experiment's input artifacts together with its outcome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport<I, R> {
    pub experiment: String,
    pub rng: String,
    pub seed: u64,
    pub sigma: f64,
    pub input: I,
    pub outcome: Outcome<R>,
}

impl<I, R> ExperimentReport<I, R> {
    pub fn new(experiment: &str, seed: u64, sigma: f64, input: I, outcome: Outcome<R>) -> Self {
        Self {
            experiment: experiment.into(),
            rng: RNG_ALGORITHM.into(),
            seed,
            sigma,
            input,
            outcome,
        }
    }
}

/// Mean and maximum of a list of non-negative numbers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub mean: f64,
    pub max: f64,
}

impl Summary {
    pub fn of(values: impl IntoIterator<Item = f64>) -> Self {
        let (mut sum, mut max, mut n) = (0.0, 0.0f64, 0usize);
        for v in values {
            sum += v;
            max = max.max(v);
            n += 1;
        }
        Self {
            mean: if n == 0 { 0.0 } else { sum / n as f64 },
            max,
        }
    }
}
