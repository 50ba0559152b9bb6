use serde::{Deserialize, Serialize};
use std::num::NonZeroUsize;

use crate::error::{Error, Result};

/// One subject: a test score (higher = more disease-like) and its true class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LabeledSample {
    pub score: f64,
    /// `true` for class 1 (diseased), `false` for class 0 (control).
    pub positive: bool,
}

impl LabeledSample {
    pub fn new(score: f64, positive: bool) -> Result<Self> {
        if !score.is_finite() {
            return Err(Error::NonFiniteScore { score });
        }
        Ok(Self { score, positive })
    }

    /// Builds a sample from a raw integer label, which must be 0 or 1.
    pub fn from_raw(score: f64, label: i64) -> Result<Self> {
        let positive = match label {
            0 => false,
            1 => true,
            other => return Err(Error::NonBinaryLabel { label: other }),
        };
        Self::new(score, positive)
    }
}

/// Zips parallel score and label slices into samples.
pub fn samples_from_raw(scores: &[f64], labels: &[i64]) -> Result<Vec<LabeledSample>> {
    if scores.len() != labels.len() {
        return Err(Error::InvalidTable(format!(
            "{} scores but {} labels",
            scores.len(),
            labels.len()
        )));
    }
    scores
        .iter()
        .zip(labels)
        .map(|(&s, &l)| LabeledSample::from_raw(s, l))
        .collect()
}

/// Replicates every control `factor` times (the original plus `factor - 1`
/// copies at the same score). Cases are left untouched.
pub fn inflate_controls(samples: &[LabeledSample], factor: NonZeroUsize) -> Vec<LabeledSample> {
    let m = factor.get();
    let mut out = Vec::with_capacity(samples.len() * m);
    for s in samples {
        let copies = if s.positive { 1 } else { m };
        out.extend(std::iter::repeat_n(*s, copies));
    }
    out
}
