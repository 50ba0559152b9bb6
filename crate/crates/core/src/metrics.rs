//! AUC and average precision on grouped data, plus the rescaled metrics and
//! the momentum estimator built from them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::PartitionTable;

/// How AUC treats the staircase between thresholds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AucMode {
    /// Trapezoidal area, identical to the Mann-Whitney pair statistic with
    /// ties counted as one half. Always in [0, 1].
    #[default]
    Exact,
    /// Right-endpoint Riemann sum of the hit-curve integral. Converges to
    /// `Exact` as n grows, but overshoots at small n and under coarse ties.
    Paper,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeMethod {
    Asymptotic,
    ParametricBootstrap,
    NonparametricBootstrap,
    None,
}

/// A metric value with an optional standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricEstimate {
    pub value: f64,
    pub se: Option<f64>,
    pub method: SeMethod,
}

impl MetricEstimate {
    pub fn point(value: f64) -> Self {
        Self {
            value,
            se: None,
            method: SeMethod::None,
        }
    }

    pub fn with_se(value: f64, se: f64, method: SeMethod) -> Self {
        debug_assert!(se >= 0.0);
        Self {
            value,
            se: Some(se),
            method,
        }
    }
}

pub fn auc(table: &PartitionTable, mode: AucMode) -> Result<f64> {
    table.require_both_classes()?;
    let (n1, n0) = (table.n1() as u128, table.n0() as u128);
    match mode {
        AucMode::Exact => {
            // 2 * (concordant + tied / 2), kept integral until the final division
            let mut negatives_above = 0u128;
            let mut twice_score = 0u128;
            for (&z, &zb) in table.positives().iter().zip(table.negatives()) {
                let (z, zb) = (z as u128, zb as u128);
                let negatives_below = n0 - negatives_above - zb;
                twice_score += z * (2 * negatives_below + zb);
                negatives_above += zb;
            }
            Ok(twice_score as f64 / (2 * n1 * n0) as f64)
        }
        AucMode::Paper => {
            // (n/n0) sum_k [h(k)/n1][S_k/n] - n1/(2 n0)
            let sum: u128 = table
                .cumulative()
                .zip(table.totals())
                .map(|((_, h), s)| h as u128 * s as u128)
                .sum();
            let numerator = 2 * sum as i128 - (n1 * n1) as i128;
            Ok(numerator as f64 / (2 * n1 * n0) as f64)
        }
    }
}

/// Average precision: sum over groups of cumulative precision h(k)/d(k)
/// weighted by the group's share Z_k/n1 of class-1 subjects. Positives tied
/// within a group all receive the end-of-group precision.
///
/// With no controls every precision is 1, so AP = 1.
pub fn average_precision(table: &PartitionTable) -> Result<f64> {
    table.require_cases()?;
    let n1 = table.n1();
    Ok(table
        .cumulative()
        .zip(table.positives())
        .filter(|(_, &z)| z > 0)
        .map(|((d, h), &z)| (h as u128 * z as u128) as f64 / (d as u128 * n1 as u128) as f64)
        .sum())
}

/// Convenience: prevalence n1/n of a table.
pub fn prevalence(table: &PartitionTable) -> f64 {
    table.prevalence()
}

fn check_prevalence(pi: f64) -> Result<()> {
    if pi > 0.0 && pi < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidPrevalence { pi })
    }
}

/// Maps AP and AUC onto a common scale where a random test scores 0 and a
/// perfect test scores 1. Returns `(ap_tilde, auc_tilde)`.
pub fn rescale(ap: f64, auc: f64, pi: f64) -> Result<(f64, f64)> {
    check_prevalence(pi)?;
    Ok(((ap - pi) / (1.0 - pi), 2.0 * auc - 1.0))
}

/// Momentum estimate: ratio of rescaled AP to rescaled AUC.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BetaHat {
    /// Raw ratio, never clamped.
    pub value: f64,
    /// Whether `value` lies in [pi, 1].
    pub in_range: bool,
}

impl BetaHat {
    pub fn out_of_range(&self) -> bool {
        !self.in_range
    }
}

pub fn beta_hat(ap: f64, auc: f64, pi: f64) -> Result<BetaHat> {
    let (ap_tilde, auc_tilde) = rescale(ap, auc, pi)?;
    if auc_tilde == 0.0 {
        return Err(Error::RandomDenominator);
    }
    let value = ap_tilde / auc_tilde;
    Ok(BetaHat {
        value,
        in_range: (pi..=1.0).contains(&value),
    })
}

/// AP, exact AUC, and the derived quantities for one table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricSummary {
    pub prevalence: f64,
    pub ap: f64,
    pub auc_exact: f64,
    pub auc_paper: f64,
    /// `None` when exact AUC is 1/2.
    pub beta_hat: Option<BetaHat>,
}

pub fn summarize(table: &PartitionTable) -> Result<MetricSummary> {
    let ap = average_precision(table)?;
    let auc_exact = auc(table, AucMode::Exact)?;
    let auc_paper = auc(table, AucMode::Paper)?;
    let prevalence = table.prevalence();
    let beta_hat = match beta_hat(ap, auc_exact, prevalence) {
        Ok(b) => Some(b),
        Err(Error::RandomDenominator) => None,
        Err(e) => return Err(e),
    };
    Ok(MetricSummary {
        prevalence,
        ap,
        auc_exact,
        auc_paper,
        beta_hat,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::samples_from_raw;

    fn table(scores: &[f64], labels: &[i64]) -> PartitionTable {
        PartitionTable::from_samples(&samples_from_raw(scores, labels).unwrap()).unwrap()
    }

    fn alternating() -> PartitionTable {
        table(&[4.0, 3.0, 2.0, 1.0], &[1, 0, 1, 0])
    }

    fn tied() -> PartitionTable {
        table(&[1.0; 4], &[1, 0, 1, 0])
    }

    fn perfect() -> PartitionTable {
        table(&[4.0, 3.0, 2.0, 1.0], &[1, 1, 0, 0])
    }

    #[test]
    fn auc_examples() {
        assert_eq!(auc(&alternating(), AucMode::Exact).unwrap(), 0.75);
        assert_eq!(auc(&alternating(), AucMode::Paper).unwrap(), 1.0);
        assert_eq!(auc(&tied(), AucMode::Exact).unwrap(), 0.5);
        assert_eq!(auc(&perfect(), AucMode::Exact).unwrap(), 1.0);
    }

    #[test]
    fn paper_auc_overshoots_under_ties() {
        // all tied: (2 n - n1) / (2 n0) = 1 + n1 / (2 n0)
        assert_eq!(auc(&tied(), AucMode::Paper).unwrap(), 1.5);
    }

    #[test]
    fn ap_examples() {
        let ap = average_precision(&alternating()).unwrap();
        assert!((ap - 5.0 / 6.0).abs() < 1e-15);
        assert_eq!(average_precision(&tied()).unwrap(), 0.5);
        assert_eq!(average_precision(&perfect()).unwrap(), 1.0);
    }

    #[test]
    fn degenerate_classes() {
        let cases_only = table(&[2.0, 1.0], &[1, 1]);
        let controls_only = table(&[2.0, 1.0], &[0, 0]);
        assert_eq!(average_precision(&cases_only).unwrap(), 1.0);
        assert!(matches!(
            auc(&cases_only, AucMode::Exact),
            Err(Error::DegenerateClass { n1: 2, n0: 0 })
        ));
        assert!(matches!(
            average_precision(&controls_only),
            Err(Error::DegenerateClass { n1: 0, n0: 2 })
        ));
    }

    #[test]
    fn rescale_examples() {
        assert_eq!(rescale(0.3, 0.5, 0.3).unwrap(), (0.0, 0.0));
        assert_eq!(rescale(1.0, 1.0, 0.3).unwrap(), (1.0, 1.0));
        let (a, b) = rescale(0.7104, 0.875, 0.2).unwrap();
        assert!((a - 0.638).abs() < 1e-12);
        assert!((b - 0.75).abs() < 1e-12);
        assert!(matches!(
            rescale(0.5, 0.5, 1.0),
            Err(Error::InvalidPrevalence { .. })
        ));
        assert!(matches!(
            rescale(0.5, 0.5, 0.0),
            Err(Error::InvalidPrevalence { .. })
        ));
    }

    #[test]
    fn beta_hat_examples() {
        let b = beta_hat(0.7104, 0.875, 0.2).unwrap();
        assert!((b.value - 0.638 / 0.75).abs() < 1e-12);
        assert!(b.in_range);

        let b = beta_hat(1.0, 1.0, 0.5).unwrap();
        assert_eq!(b.value, 1.0);
        assert!(b.in_range);

        let b = beta_hat(5.0 / 6.0, 0.75, 0.5).unwrap();
        assert!((b.value - 4.0 / 3.0).abs() < 1e-12);
        assert!(b.out_of_range());

        assert_eq!(beta_hat(0.6, 0.5, 0.5), Err(Error::RandomDenominator));
    }

    #[test]
    fn summary_on_tied_table_has_no_beta_hat() {
        let s = summarize(&tied()).unwrap();
        assert_eq!(s.beta_hat, None);
        assert_eq!(s.ap, 0.5);
        assert_eq!(s.auc_exact, 0.5);
    }
}
