//! Parametric and nonparametric bootstrap standard errors for AP and AUC.

use rand::Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::inference::{fit_multinomial, MultinomialFit};
use crate::metrics::{auc, average_precision, AucMode};
use crate::partition::PartitionTable;
use crate::rng::{substream, StreamRng};

pub const DEFAULT_REPLICATES: usize = 5000;

/// Consecutive degenerate draws tolerated for one replicate before giving up.
const MAX_REDRAWS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BootstrapMetric {
    Ap,
    Auc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BootstrapScheme {
    /// Redraw n1 ~ Binomial(n, pi_hat), then class-1 and class-0 group
    /// counts from multinomials at the fitted frequencies.
    Parametric,
    /// Resample n subjects with replacement.
    Nonparametric,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BootstrapResult {
    /// Sample standard deviation of `replicates`.
    pub se: f64,
    pub replicates: Vec<f64>,
    /// Draws rejected because one class was empty.
    pub redraws: usize,
}

pub fn bootstrap_se(
    table: &PartitionTable,
    metric: BootstrapMetric,
    scheme: BootstrapScheme,
    replicates: usize,
    seed: u64,
) -> Result<BootstrapResult> {
    if replicates < 2 {
        return Err(Error::TooFewReplicates { replicates });
    }
    let fit = fit_multinomial(table)?;
    let subjects = expand_subjects(table);

    let draws: Vec<(f64, usize)> = (0..replicates as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = substream(seed, i);
            for attempt in 0..MAX_REDRAWS {
                let resampled = match scheme {
                    BootstrapScheme::Parametric => parametric_draw(table, &fit, &mut rng),
                    BootstrapScheme::Nonparametric => {
                        nonparametric_draw(table, &subjects, &mut rng)
                    }
                };
                if resampled.n1() == 0 || resampled.n0() == 0 {
                    continue;
                }
                let value = match metric {
                    BootstrapMetric::Ap => average_precision(&resampled)?,
                    BootstrapMetric::Auc => auc(&resampled, AucMode::Exact)?,
                };
                return Ok((value, attempt));
            }
            Err(Error::DegenerateReplicate {
                attempts: MAX_REDRAWS,
            })
        })
        .collect::<Result<_>>()?;

    let redraws = draws.iter().map(|d| d.1).sum();
    let replicates: Vec<f64> = draws.into_iter().map(|d| d.0).collect();
    Ok(BootstrapResult {
        se: sample_sd(&replicates),
        replicates,
        redraws,
    })
}

pub(crate) fn sample_sd(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    (ss / (n - 1.0)).sqrt()
}

/// Group index and class for every subject, in table order.
fn expand_subjects(table: &PartitionTable) -> Vec<(usize, bool)> {
    let mut out = Vec::with_capacity(table.n() as usize);
    for (k, (&z, &zb)) in table.positives().iter().zip(table.negatives()).enumerate() {
        out.extend(std::iter::repeat_n((k, true), z as usize));
        out.extend(std::iter::repeat_n((k, false), zb as usize));
    }
    out
}

fn binomial(rng: &mut StreamRng, trials: u64, p: f64) -> u64 {
    if trials == 0 || p <= 0.0 {
        return 0;
    }
    if p >= 1.0 {
        return trials;
    }
    Binomial::new(trials, p)
        .expect("probability checked to lie in (0, 1)")
        .sample(rng)
}

/// Multinomial counts by sequential conditional binomials.
fn multinomial(rng: &mut StreamRng, trials: u64, probs: &[f64]) -> Vec<u64> {
    let mut remaining = trials;
    let mut mass = 1.0;
    let mut counts = Vec::with_capacity(probs.len());
    for (k, &p) in probs.iter().enumerate() {
        let c = if k + 1 == probs.len() {
            remaining
        } else if mass <= 0.0 {
            0
        } else {
            binomial(rng, remaining, p / mass)
        };
        counts.push(c);
        remaining -= c;
        mass -= p;
    }
    counts
}

fn parametric_draw(
    table: &PartitionTable,
    fit: &MultinomialFit,
    rng: &mut StreamRng,
) -> PartitionTable {
    let n = table.n();
    let n1 = binomial(rng, n, fit.pi_hat);
    let positives = multinomial(rng, n1, &fit.p_hat);
    let negatives = multinomial(rng, n - n1, &fit.q_hat);
    rebuild(table, positives, negatives)
}

fn nonparametric_draw(
    table: &PartitionTable,
    subjects: &[(usize, bool)],
    rng: &mut StreamRng,
) -> PartitionTable {
    let k = table.groups();
    let mut positives = vec![0u64; k];
    let mut negatives = vec![0u64; k];
    for _ in 0..subjects.len() {
        let (group, positive) = subjects[rng.random_range(0..subjects.len())];
        if positive {
            positives[group] += 1;
        } else {
            negatives[group] += 1;
        }
    }
    rebuild(table, positives, negatives)
}

fn rebuild(table: &PartitionTable, positives: Vec<u64>, negatives: Vec<u64>) -> PartitionTable {
    PartitionTable::from_counts(table.scores().to_vec(), positives, negatives)
        .expect("resampled counts keep the original score order and total n")
}
