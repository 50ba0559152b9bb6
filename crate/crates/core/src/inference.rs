//! Delta-method standard error for average precision.
//!
//! Under the grouped model, class-1 group counts are multinomial with
//! probabilities `p`, class-0 counts multinomial with `q`, and n1 binomial
//! with `pi`. AP is a smooth function `g(p, q, pi)` of these, so its
//! variance follows from the gradient of `g` and the inverse Fisher
//! information at the MLE.
//!
//! The last group absorbs the sum-to-one constraints, giving `K - 1` free
//! coordinates for each of `p` and `q`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::PartitionTable;

/// Maximum likelihood estimates of the grouped model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultinomialFit {
    pub p_hat: Vec<f64>,
    pub q_hat: Vec<f64>,
    pub pi_hat: f64,
    pub n1: u64,
    pub n0: u64,
}

const SUM_TOLERANCE: f64 = 1e-9;

impl MultinomialFit {
    /// Validated constructor for arbitrary parameter values.
    pub fn new(p_hat: Vec<f64>, q_hat: Vec<f64>, pi_hat: f64, n1: u64, n0: u64) -> Result<Self> {
        if p_hat.is_empty() || p_hat.len() != q_hat.len() {
            return Err(Error::InvalidFit(format!(
                "p has {} groups, q has {}",
                p_hat.len(),
                q_hat.len()
            )));
        }
        for (name, v) in [("p", &p_hat), ("q", &q_hat)] {
            if v.iter().any(|x| !(0.0..=1.0).contains(x)) {
                return Err(Error::InvalidFit(format!(
                    "{name} has an entry outside [0, 1]"
                )));
            }
            let total: f64 = v.iter().sum();
            if (total - 1.0).abs() > SUM_TOLERANCE {
                return Err(Error::InvalidFit(format!("{name} sums to {total}")));
            }
        }
        if !(pi_hat > 0.0 && pi_hat < 1.0) {
            return Err(Error::InvalidPrevalence { pi: pi_hat });
        }
        Ok(Self {
            p_hat,
            q_hat,
            pi_hat,
            n1,
            n0,
        })
    }

    pub fn groups(&self) -> usize {
        self.p_hat.len()
    }

    pub fn n(&self) -> u64 {
        self.n1 + self.n0
    }
}

pub fn fit_multinomial(table: &PartitionTable) -> Result<MultinomialFit> {
    table.require_both_classes()?;
    let (n1, n0) = (table.n1(), table.n0());
    Ok(MultinomialFit {
        p_hat: table
            .positives()
            .iter()
            .map(|&z| z as f64 / n1 as f64)
            .collect(),
        q_hat: table
            .negatives()
            .iter()
            .map(|&z| z as f64 / n0 as f64)
            .collect(),
        pi_hat: n1 as f64 / table.n() as f64,
        n1,
        n0,
    })
}

/// Cumulative sums and mixture weights `(P_k, Q_k, C_k)`.
fn cumulants(p: &[f64], q: &[f64], pi: f64) -> Vec<(f64, f64, f64)> {
    let (mut big_p, mut big_q) = (0.0, 0.0);
    p.iter()
        .zip(q)
        .map(|(pk, qk)| {
            big_p += pk;
            big_q += qk;
            (big_p, big_q, pi * big_p + (1.0 - pi) * big_q)
        })
        .collect()
}

/// `x / c`, treating groups with no mass so far as contributing nothing.
fn ratio(x: f64, c: f64) -> f64 {
    if c == 0.0 {
        0.0
    } else {
        x / c
    }
}

/// AP as a function of the model parameters. Inputs are not validated so
/// that the function can be evaluated off the probability simplex.
pub fn ap_functional(p: &[f64], q: &[f64], pi: f64) -> f64 {
    cumulants(p, q, pi)
        .iter()
        .zip(p)
        .map(|(&(big_p, _, c), pk)| pk * ratio(pi * big_p, c))
        .sum()
}

pub fn ap_from_fit(fit: &MultinomialFit) -> f64 {
    ap_functional(&fit.p_hat, &fit.q_hat, fit.pi_hat)
}

/// Gradient of AP in the reduced coordinates (first `K - 1` entries of
/// `p` and `q`, then `pi`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GradientVector {
    pub d_p: Vec<f64>,
    pub d_q: Vec<f64>,
    pub d_pi: f64,
}

impl GradientVector {
    /// Flattened as `[d_p, d_q, d_pi]`.
    pub fn to_vec(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(self.d_p.len() + self.d_q.len() + 1);
        v.extend_from_slice(&self.d_p);
        v.extend_from_slice(&self.d_q);
        v.push(self.d_pi);
        v
    }
}

pub fn ap_gradient(fit: &MultinomialFit) -> GradientVector {
    let (p, pi) = (&fit.p_hat, fit.pi_hat);
    let k = fit.groups();
    let cum = cumulants(p, &fit.q_hat, pi);
    let spread = pi * (1.0 - pi);

    // tails[j] = sum_{k' = j}^{K-2} p_k' * [term_k'], accumulated backwards
    let mut tail_p = vec![0.0; k];
    let mut tail_q = vec![0.0; k];
    for j in (0..k.saturating_sub(1)).rev() {
        let (big_p, big_q, c) = cum[j];
        let c2 = c * c;
        tail_p[j] = tail_p[j + 1] + p[j] * ratio(spread * big_q, c2);
        tail_q[j] = tail_q[j + 1] - p[j] * ratio(spread * big_p, c2);
    }

    let d_p = (0..k - 1)
        .map(|j| ratio(pi * cum[j].0, cum[j].2) + tail_p[j] - pi)
        .collect();
    let d_q = tail_q[..k - 1].to_vec();
    GradientVector {
        d_p,
        d_q,
        d_pi: ap_gradient_pi(fit),
    }
}

/// Derivatives of `g` treating every `p_k`, `q_k` as free.
fn unconstrained_gradient(fit: &MultinomialFit) -> (Vec<f64>, Vec<f64>) {
    let (p, pi) = (&fit.p_hat, fit.pi_hat);
    let k = fit.groups();
    let cum = cumulants(p, &fit.q_hat, pi);
    let spread = pi * (1.0 - pi);
    let mut d_p = vec![0.0; k];
    let mut d_q = vec![0.0; k];
    let (mut tail_p, mut tail_q) = (0.0, 0.0);
    for j in (0..k).rev() {
        let (big_p, big_q, c) = cum[j];
        tail_p += p[j] * ratio(spread * big_q, c * c);
        tail_q -= p[j] * ratio(spread * big_p, c * c);
        d_p[j] = ratio(pi * big_p, c) + tail_p;
        d_q[j] = tail_q;
    }
    (d_p, d_q)
}

/// `v^T (diag(w) - w w^T) v / count`, the multinomial covariance quadratic
/// form over the coordinates other than `reference`.
fn multinomial_quadratic(v: &[f64], w: &[f64], count: u64, reference: usize) -> f64 {
    let (mut first, mut second) = (0.0, 0.0);
    for (j, (vj, wj)) in v.iter().zip(w).enumerate() {
        if j == reference {
            continue;
        }
        first += wj * vj * vj;
        second += wj * vj;
    }
    ((first - second * second) / count as f64).max(0.0)
}

/// Delta-method variance of AP with the constraint absorbed by group
/// `reference` (0-based).
pub fn ap_asymptotic_variance_with_reference(
    table: &PartitionTable,
    reference: usize,
) -> Result<f64> {
    let fit = fit_multinomial(table)?;
    if reference >= fit.groups() {
        return Err(Error::InvalidFit(format!(
            "reference group {reference} out of range for {} groups",
            fit.groups()
        )));
    }
    let (full_p, full_q) = unconstrained_gradient(&fit);
    let d_p: Vec<f64> = full_p.iter().map(|d| d - full_p[reference]).collect();
    let d_q: Vec<f64> = full_q.iter().map(|d| d - full_q[reference]).collect();
    let d_pi = ap_gradient_pi(&fit);
    let pi = fit.pi_hat;
    Ok(multinomial_quadratic(&d_p, &fit.p_hat, fit.n1, reference)
        + multinomial_quadratic(&d_q, &fit.q_hat, fit.n0, reference)
        + d_pi * d_pi * pi * (1.0 - pi) / fit.n() as f64)
}

fn ap_gradient_pi(fit: &MultinomialFit) -> f64 {
    cumulants(&fit.p_hat, &fit.q_hat, fit.pi_hat)
        .iter()
        .zip(&fit.p_hat)
        .map(|(&(big_p, big_q, c), pk)| pk * ratio(big_p * big_q, c * c))
        .sum()
}

/// Delta-method variance of AP, `grad^T J^-1 grad`.
///
/// The inverse information is used in its closed multinomial-covariance
/// form, so groups with a zero count contribute zero variance instead of
/// making the information matrix singular.
pub fn ap_asymptotic_variance(table: &PartitionTable) -> Result<f64> {
    ap_asymptotic_variance_with_reference(table, table.groups() - 1)
}

pub fn ap_asymptotic_se(table: &PartitionTable) -> Result<f64> {
    ap_asymptotic_variance(table).map(f64::sqrt)
}

/// Observed Fisher information in the reduced coordinates, block diagonal
/// in `(p, q, pi)`. Fails when any group count is zero, since the
/// information is then singular.
pub fn observed_information(fit: &MultinomialFit) -> Result<DMatrix<f64>> {
    let k = fit.groups();
    if fit.p_hat.iter().chain(&fit.q_hat).any(|&x| x == 0.0) {
        return Err(Error::InvalidFit(
            "information is singular when a group count is zero".into(),
        ));
    }
    let m = k - 1;
    let mut j = DMatrix::zeros(2 * m + 1, 2 * m + 1);
    for (offset, probs, count) in [(0, &fit.p_hat, fit.n1), (m, &fit.q_hat, fit.n0)] {
        let count = count as f64;
        let z = |i: usize| probs[i] * count;
        let last = z(k - 1) / (probs[k - 1] * probs[k - 1]);
        for r in 0..m {
            for c in 0..m {
                j[(offset + r, offset + c)] = last;
            }
            j[(offset + r, offset + r)] += z(r) / (probs[r] * probs[r]);
        }
    }
    let pi = fit.pi_hat;
    j[(2 * m, 2 * m)] = fit.n1 as f64 / (pi * pi) + fit.n0 as f64 / ((1.0 - pi) * (1.0 - pi));
    Ok(j)
}

/// Closed-form inverse of [`observed_information`]: the multinomial
/// covariances `(diag(p) - p p^T) / n1`, `(diag(q) - q q^T) / n0` and the
/// binomial variance `pi (1 - pi) / n`. Defined for zero counts as well.
pub fn information_inverse(fit: &MultinomialFit) -> DMatrix<f64> {
    let m = fit.groups() - 1;
    let mut inv = DMatrix::zeros(2 * m + 1, 2 * m + 1);
    for (offset, probs, count) in [(0, &fit.p_hat, fit.n1), (m, &fit.q_hat, fit.n0)] {
        let count = count as f64;
        for r in 0..m {
            for c in 0..m {
                let diag = if r == c { probs[r] } else { 0.0 };
                inv[(offset + r, offset + c)] = (diag - probs[r] * probs[c]) / count;
            }
        }
    }
    let pi = fit.pi_hat;
    inv[(2 * m, 2 * m)] = pi * (1.0 - pi) / fit.n() as f64;
    inv
}

/// Standard error of a difference between two correlated estimates.
pub fn difference_se(se1: f64, se2: f64, rho: f64) -> Result<f64> {
    for se in [se1, se2] {
        if !(se >= 0.0 && se.is_finite()) {
            return Err(Error::InvalidStandardError { se });
        }
    }
    if !(-1.0..=1.0).contains(&rho) {
        return Err(Error::InvalidCorrelation { rho });
    }
    Ok((se1 * se1 + se2 * se2 - 2.0 * rho * se1 * se2)
        .max(0.0)
        .sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::average_precision;
    use crate::sample::samples_from_raw;

    fn table(scores: &[f64], labels: &[i64]) -> PartitionTable {
        PartitionTable::from_samples(&samples_from_raw(scores, labels).unwrap()).unwrap()
    }

    fn counts(pos: &[u64], neg: &[u64]) -> PartitionTable {
        let scores = (0..pos.len()).rev().map(|i| i as f64).collect();
        PartitionTable::from_counts(scores, pos.to_vec(), neg.to_vec()).unwrap()
    }

    #[test]
    fn fit_examples() {
        let f = fit_multinomial(&table(&[2.0, 2.0, 1.0, 1.0], &[1, 0, 1, 0])).unwrap();
        assert_eq!(
            (f.p_hat.as_slice(), f.q_hat.as_slice(), f.pi_hat),
            (&[0.5, 0.5][..], &[0.5, 0.5][..], 0.5)
        );

        let f = fit_multinomial(&table(&[4.0, 3.0, 2.0, 1.0], &[1, 1, 0, 0])).unwrap();
        assert_eq!(f.p_hat, vec![0.5, 0.5, 0.0, 0.0]);
        assert_eq!(f.q_hat, vec![0.0, 0.0, 0.5, 0.5]);

        let f = fit_multinomial(&table(&[1.0; 4], &[1, 0, 1, 0])).unwrap();
        assert_eq!((f.p_hat, f.q_hat, f.pi_hat), (vec![1.0], vec![1.0], 0.5));

        assert!(matches!(
            fit_multinomial(&table(&[1.0, 2.0], &[1, 1])),
            Err(Error::DegenerateClass { .. })
        ));
    }

    #[test]
    fn fit_validation() {
        assert!(MultinomialFit::new(vec![0.5, 0.6], vec![0.5, 0.5], 0.5, 1, 1).is_err());
        assert!(MultinomialFit::new(vec![1.0], vec![1.0], 1.0, 1, 1).is_err());
        assert!(MultinomialFit::new(vec![1.0], vec![0.5, 0.5], 0.5, 1, 1).is_err());
        assert!(MultinomialFit::new(vec![0.3, 0.7], vec![1.0, 0.0], 0.2, 4, 16).is_ok());
    }

    #[test]
    fn g_examples() {
        let single = MultinomialFit::new(vec![1.0], vec![1.0], 0.37, 37, 63).unwrap();
        assert!((ap_from_fit(&single) - 0.37).abs() < 1e-15);

        let separated = MultinomialFit::new(vec![1.0, 0.0], vec![0.0, 1.0], 0.5, 2, 2).unwrap();
        assert_eq!(ap_from_fit(&separated), 1.0);

        let t = table(&[2.0, 2.0, 1.0, 1.0], &[1, 0, 1, 0]);
        assert_eq!(ap_from_fit(&fit_multinomial(&t).unwrap()), 0.5);
    }

    #[test]
    fn g_matches_grouped_ap() {
        let t = table(
            &[5.0, 4.0, 4.0, 3.0, 2.0, 2.0, 2.0, 1.0],
            &[1, 0, 1, 1, 0, 1, 0, 0],
        );
        let g = ap_from_fit(&fit_multinomial(&t).unwrap());
        assert!((g - average_precision(&t).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn gradient_examples() {
        let single = MultinomialFit::new(vec![1.0], vec![1.0], 0.5, 50, 50).unwrap();
        let g = ap_gradient(&single);
        assert!(g.d_p.is_empty() && g.d_q.is_empty());
        assert!((g.d_pi - 1.0).abs() < 1e-15);

        // g(q1) = pi / (pi + (1 - pi) q1) near q1 = 0, so dg/dq1 = -(1 - pi) / pi
        let separated = MultinomialFit::new(vec![1.0, 0.0], vec![0.0, 1.0], 0.5, 2, 2).unwrap();
        let g = ap_gradient(&separated);
        assert!((g.d_q[0] + 1.0).abs() < 1e-15);
        assert_eq!(g.d_pi, 0.0);
        assert!((g.d_p[0] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn reduced_gradient_matches_unconstrained_difference() {
        let fit = MultinomialFit::new(
            vec![0.4, 0.1, 0.3, 0.2],
            vec![0.05, 0.25, 0.3, 0.4],
            0.3,
            30,
            70,
        )
        .unwrap();
        let g = ap_gradient(&fit);
        let (fp, fq) = unconstrained_gradient(&fit);
        for j in 0..3 {
            assert!((g.d_p[j] - (fp[j] - fp[3])).abs() < 1e-14);
            assert!((g.d_q[j] - (fq[j] - fq[3])).abs() < 1e-14);
        }
    }

    #[test]
    fn variance_examples() {
        let t = counts(&[50], &[50]);
        let v = ap_asymptotic_variance(&t).unwrap();
        assert!((v - 0.0025).abs() < 1e-15);

        for (n1, n0) in [(1, 1), (2, 2), (7, 3), (40, 125)] {
            let t = counts(&[n1, 0], &[0, n0]);
            assert_eq!(ap_asymptotic_variance(&t).unwrap(), 0.0);
        }
        let t = table(&[4.0, 3.0, 2.0, 1.0], &[1, 1, 0, 0]);
        assert_eq!(ap_asymptotic_se(&t).unwrap(), 0.0);
    }

    #[test]
    fn variance_matches_matrix_route() {
        let t = counts(&[3, 5, 1, 2, 4], &[1, 2, 6, 3, 2]);
        let fit = fit_multinomial(&t).unwrap();
        let grad = nalgebra::DVector::from_vec(ap_gradient(&fit).to_vec());
        let quad = (grad.transpose() * information_inverse(&fit) * &grad)[(0, 0)];
        let closed = ap_asymptotic_variance(&t).unwrap();
        assert!((quad - closed).abs() < 1e-14, "{quad} vs {closed}");
    }

    #[test]
    fn information_inverse_is_inverse() {
        let t = counts(&[3, 5, 1, 2, 4], &[1, 2, 6, 3, 2]);
        let fit = fit_multinomial(&t).unwrap();
        let product = observed_information(&fit).unwrap() * information_inverse(&fit);
        let eye = DMatrix::<f64>::identity(product.nrows(), product.ncols());
        assert!((product - eye).abs().max() < 1e-8);
    }

    #[test]
    fn observed_information_rejects_zero_counts() {
        let fit = fit_multinomial(&counts(&[1, 0], &[1, 1])).unwrap();
        assert!(observed_information(&fit).is_err());
    }

    #[test]
    fn difference_se_examples() {
        assert!((difference_se(0.02, 0.02, 0.5).unwrap() - 0.02).abs() < 1e-15);
        assert!((difference_se(0.02, 0.02, 0.9).unwrap() - 0.008944271909999).abs() < 1e-12);
        assert_eq!(difference_se(0.37, 0.37, 1.0).unwrap(), 0.0);
        assert!((difference_se(0.02, 0.02, 0.0).unwrap() - 0.02 * 2f64.sqrt()).abs() < 1e-15);
        assert!(matches!(
            difference_se(0.02, 0.02, 1.5),
            Err(Error::InvalidCorrelation { .. })
        ));
        assert!(matches!(
            difference_se(-0.1, 0.02, 0.5),
            Err(Error::InvalidStandardError { .. })
        ));
    }
}
