//! Grouped representation of a scored dataset.
//!
//! Subjects sharing a score form one group; groups are ordered by strictly
//! decreasing score. Every metric in this crate is a function of the
//! per-group class counts only.

use serde::{Deserialize, Serialize};
use std::num::NonZeroUsize;

use crate::error::{Error, Result};
use crate::sample::LabeledSample;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionTable {
    scores: Vec<f64>,
    positives: Vec<u64>,
    negatives: Vec<u64>,
    n1: u64,
    n0: u64,
}

impl PartitionTable {
    /// Groups samples by exact score equality.
    pub fn from_samples(samples: &[LabeledSample]) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptyDataset);
        }
        if let Some(bad) = samples.iter().find(|s| !s.score.is_finite()) {
            return Err(Error::NonFiniteScore { score: bad.score });
        }
        let mut sorted: Vec<&LabeledSample> = samples.iter().collect();
        sorted.sort_by(|a, b| b.score.total_cmp(&a.score));

        let mut scores = Vec::new();
        let mut positives = Vec::new();
        let mut negatives = Vec::new();
        for s in sorted {
            // -0.0 and 0.0 are the same score
            if scores.last() != Some(&s.score) {
                scores.push(s.score);
                positives.push(0);
                negatives.push(0);
            }
            let k = scores.len() - 1;
            if s.positive {
                positives[k] += 1;
            } else {
                negatives[k] += 1;
            }
        }
        Ok(Self::assemble(scores, positives, negatives))
    }

    /// Builds a table from per-group counts. Groups with no subjects are
    /// dropped; the remaining scores must be finite and strictly decreasing.
    pub fn from_counts(scores: Vec<f64>, positives: Vec<u64>, negatives: Vec<u64>) -> Result<Self> {
        if scores.len() != positives.len() || scores.len() != negatives.len() {
            return Err(Error::InvalidTable("group vectors differ in length".into()));
        }
        let mut s = Vec::with_capacity(scores.len());
        let mut z = Vec::with_capacity(scores.len());
        let mut zbar = Vec::with_capacity(scores.len());
        for ((score, pos), neg) in scores.into_iter().zip(positives).zip(negatives) {
            if pos + neg == 0 {
                continue;
            }
            if !score.is_finite() {
                return Err(Error::NonFiniteScore { score });
            }
            if let Some(&prev) = s.last() {
                if score >= prev {
                    return Err(Error::InvalidTable(format!(
                        "scores not strictly decreasing ({prev} then {score})"
                    )));
                }
            }
            s.push(score);
            z.push(pos);
            zbar.push(neg);
        }
        if s.is_empty() {
            return Err(Error::EmptyDataset);
        }
        Ok(Self::assemble(s, z, zbar))
    }

    fn assemble(scores: Vec<f64>, positives: Vec<u64>, negatives: Vec<u64>) -> Self {
        let n1 = positives.iter().sum();
        let n0 = negatives.iter().sum();
        Self {
            scores,
            positives,
            negatives,
            n1,
            n0,
        }
    }

    /// Number of distinct scores, K.
    pub fn groups(&self) -> usize {
        self.scores.len()
    }

    pub fn scores(&self) -> &[f64] {
        &self.scores
    }

    /// Class-1 counts per group (Z_k).
    pub fn positives(&self) -> &[u64] {
        &self.positives
    }

    /// Class-0 counts per group.
    pub fn negatives(&self) -> &[u64] {
        &self.negatives
    }

    /// Group sizes S_k.
    pub fn totals(&self) -> Vec<u64> {
        self.positives
            .iter()
            .zip(&self.negatives)
            .map(|(z, zb)| z + zb)
            .collect()
    }

    pub fn n(&self) -> u64 {
        self.n1 + self.n0
    }

    pub fn n1(&self) -> u64 {
        self.n1
    }

    pub fn n0(&self) -> u64 {
        self.n0
    }

    pub fn prevalence(&self) -> f64 {
        self.n1 as f64 / self.n() as f64
    }

    /// Cumulative (declared positive, true positive) counts `(d(k), h(k))`
    /// after thresholding at each group's score.
    pub fn cumulative(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.positives
            .iter()
            .zip(&self.negatives)
            .scan((0u64, 0u64), |(d, h), (z, zb)| {
                *d += z + zb;
                *h += z;
                Some((*d, *h))
            })
    }

    pub(crate) fn require_both_classes(&self) -> Result<()> {
        if self.n1 == 0 || self.n0 == 0 {
            return Err(Error::DegenerateClass {
                n1: self.n1,
                n0: self.n0,
            });
        }
        Ok(())
    }

    pub(crate) fn require_cases(&self) -> Result<()> {
        if self.n1 == 0 {
            return Err(Error::DegenerateClass {
                n1: self.n1,
                n0: self.n0,
            });
        }
        Ok(())
    }

    /// Same effect as [`crate::inflate_controls`] on the underlying samples,
    /// applied directly to the counts.
    pub fn inflate_controls(&self, factor: NonZeroUsize) -> Self {
        let m = factor.get() as u64;
        Self::assemble(
            self.scores.clone(),
            self.positives.clone(),
            self.negatives.iter().map(|c| c * m).collect(),
        )
    }
}
