//! Binormal score simulation: controls ~ N(0, 1), cases ~ N(delta, 1).

use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bootstrap::sample_sd;
use crate::curve::{hit_curve, Curve};
use crate::error::{Error, Result};
use crate::inference::ap_asymptotic_se;
use crate::metrics::{auc, average_precision, beta_hat, AucMode, BetaHat};
use crate::partition::PartitionTable;
use crate::rng::substream;
use crate::sample::LabeledSample;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BinormalScenario {
    n: usize,
    pi: f64,
    delta: f64,
    seed: u64,
}

impl BinormalScenario {
    pub fn new(n: usize, pi: f64, delta: f64, seed: u64) -> Result<Self> {
        if !(pi > 0.0 && pi < 1.0) {
            return Err(Error::InvalidPrevalence { pi });
        }
        if !(delta >= 0.0 && delta.is_finite()) {
            return Err(Error::DegenerateScenario(format!(
                "delta must be finite and nonnegative, got {delta}"
            )));
        }
        let scenario = Self { n, pi, delta, seed };
        let cases = scenario.cases();
        if cases == 0 || cases >= n {
            return Err(Error::DegenerateScenario(format!(
                "n = {n}, pi = {pi} gives {cases} cases and {} controls",
                n.saturating_sub(cases)
            )));
        }
        Ok(scenario)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pi(&self) -> f64 {
        self.pi
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Number of class-1 subjects, `round(n * pi)`.
    pub fn cases(&self) -> usize {
        (self.n as f64 * self.pi).round() as usize
    }

    pub fn controls(&self) -> usize {
        self.n - self.cases()
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }

    /// Draws the dataset for stream `index` of this scenario's seed; cases
    /// first, then controls.
    fn generate_stream(&self, index: u64) -> Vec<LabeledSample> {
        let mut rng = substream(self.seed, index);
        let cases = self.cases();
        (0..self.n)
            .map(|i| {
                let z: f64 = StandardNormal.sample(&mut rng);
                let positive = i < cases;
                LabeledSample {
                    score: if positive { z + self.delta } else { z },
                    positive,
                }
            })
            .collect()
    }
}

pub fn generate(scenario: &BinormalScenario) -> Vec<LabeledSample> {
    scenario.generate_stream(0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSummary {
    pub prevalence: f64,
    pub ap: f64,
    pub auc_exact: f64,
    pub beta_hat: BetaHat,
    pub hit_curve: Curve,
    /// Slope of the overlay line `f(t) = beta_hat * t`.
    pub overlay_slope: f64,
}

pub fn run_scenario(scenario: &BinormalScenario) -> Result<ScenarioSummary> {
    let table = PartitionTable::from_samples(&generate(scenario))?;
    let ap = average_precision(&table)?;
    let auc_exact = auc(&table, AucMode::Exact)?;
    let prevalence = table.prevalence();
    let b = beta_hat(ap, auc_exact, prevalence)?;
    Ok(ScenarioSummary {
        prevalence,
        ap,
        auc_exact,
        beta_hat: b,
        hit_curve: hit_curve(&table),
        overlay_slope: b.value,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReplicateMetrics {
    pub ap: f64,
    pub auc_exact: f64,
    /// `None` when the replicate's AUC is exactly 1/2.
    pub beta_hat: Option<BetaHat>,
    pub ap_se_asymptotic: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanSd {
    pub mean: f64,
    pub sd: f64,
    pub count: usize,
}

impl MeanSd {
    fn of(values: &[f64]) -> Self {
        let count = values.len();
        let mean = if count == 0 {
            f64::NAN
        } else {
            values.iter().sum::<f64>() / count as f64
        };
        let sd = if count < 2 {
            f64::NAN
        } else {
            sample_sd(values)
        };
        Self { mean, sd, count }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudySummary {
    pub replicates: Vec<ReplicateMetrics>,
    pub ap: MeanSd,
    pub auc_exact: MeanSd,
    /// Over replicates where the estimate is defined.
    pub beta_hat: MeanSd,
    pub ap_se_asymptotic: MeanSd,
    pub beta_hat_undefined: usize,
    pub beta_hat_out_of_range: usize,
}

/// Runs `replicates` independent datasets; dataset `r` uses substream `r`
/// of the scenario seed (replicate 0 is the dataset [`generate`] returns).
pub fn replicate_study(scenario: &BinormalScenario, replicates: usize) -> Result<StudySummary> {
    if replicates < 2 {
        return Err(Error::TooFewReplicates { replicates });
    }
    let runs: Vec<ReplicateMetrics> = (0..replicates as u64)
        .into_par_iter()
        .map(|r| {
            let table = PartitionTable::from_samples(&scenario.generate_stream(r))?;
            let ap = average_precision(&table)?;
            let auc_exact = auc(&table, AucMode::Exact)?;
            let beta_hat = match beta_hat(ap, auc_exact, table.prevalence()) {
                Ok(b) => Some(b),
                Err(Error::RandomDenominator) => None,
                Err(e) => return Err(e),
            };
            Ok(ReplicateMetrics {
                ap,
                auc_exact,
                beta_hat,
                ap_se_asymptotic: ap_asymptotic_se(&table)?,
            })
        })
        .collect::<Result<_>>()?;

    let column = |f: fn(&ReplicateMetrics) -> f64| runs.iter().map(f).collect::<Vec<_>>();
    let betas: Vec<f64> = runs
        .iter()
        .filter_map(|r| r.beta_hat.map(|b| b.value))
        .collect();
    Ok(StudySummary {
        ap: MeanSd::of(&column(|r| r.ap)),
        auc_exact: MeanSd::of(&column(|r| r.auc_exact)),
        beta_hat: MeanSd::of(&betas),
        ap_se_asymptotic: MeanSd::of(&column(|r| r.ap_se_asymptotic)),
        beta_hat_undefined: runs.iter().filter(|r| r.beta_hat.is_none()).count(),
        beta_hat_out_of_range: runs
            .iter()
            .filter(|r| r.beta_hat.is_some_and(|b| b.out_of_range()))
            .count(),
        replicates: runs,
    })
}
