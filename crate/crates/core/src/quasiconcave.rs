//! Two-segment hit-curve model.
//!
//! The curve rises with slope `beta` (momentum, the initial true positive
//! rate) up to the change point `alpha` (stamina), then runs straight to
//! `(1, pi)`. AUC depends only on the product `(beta - pi) * alpha`, while
//! AP weighs `beta` a second time.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Slack for the `alpha <= pi / beta` check, which is evaluated in floating
/// point.
const CONSTRAINT_SLACK: f64 = 1e-12;

/// Below this change point the exact AP takes its `alpha -> 0` limit.
const ALPHA_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuasiConcaveModel {
    alpha: f64,
    beta: f64,
    pi: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ApForm {
    #[default]
    Exact,
    /// First-order expansion `log(alpha) ~ alpha - 1`.
    Taylor,
}

impl QuasiConcaveModel {
    pub fn new(alpha: f64, beta: f64, pi: f64) -> Result<Self> {
        if !(pi > 0.0 && pi < 1.0) {
            return Err(Error::ModelConstraint(format!("0 < pi < 1 (pi = {pi})")));
        }
        if !(beta >= pi && beta <= 1.0) {
            return Err(Error::ModelConstraint(format!(
                "pi <= beta <= 1 (beta = {beta}, pi = {pi})"
            )));
        }
        let alpha_max = pi / beta;
        if !(alpha >= 0.0 && alpha <= alpha_max + CONSTRAINT_SLACK) {
            return Err(Error::ModelConstraint(format!(
                "0 <= alpha <= pi / beta (alpha = {alpha}, pi / beta = {alpha_max})"
            )));
        }
        Ok(Self {
            alpha: alpha.min(alpha_max),
            beta,
            pi,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn pi(&self) -> f64 {
        self.pi
    }

    /// Slope of the segment after the change point.
    pub fn tail_slope(&self) -> f64 {
        if self.alpha >= 1.0 {
            self.beta
        } else {
            (self.pi - self.alpha * self.beta) / (1.0 - self.alpha)
        }
    }

    /// `(beta - pi) * alpha`, the quantity AUC depends on.
    pub fn momentum_stamina_product(&self) -> f64 {
        (self.beta - self.pi) * self.alpha
    }

    pub fn hit(&self, t: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::DomainError { t });
        }
        Ok(if t <= self.alpha {
            self.beta * t
        } else {
            self.alpha * self.beta + (t - self.alpha) * self.tail_slope()
        })
    }

    pub fn auc(&self) -> f64 {
        self.momentum_stamina_product() / (2.0 * self.pi * (1.0 - self.pi)) + 0.5
    }

    pub fn ap(&self, form: ApForm) -> f64 {
        let (a, b, pi) = (self.alpha, self.beta, self.pi);
        match form {
            ApForm::Taylor => b / pi * self.momentum_stamina_product() + pi,
            ApForm::Exact => {
                if !(ALPHA_FLOOR..1.0).contains(&a) {
                    // alpha = 0 is the random line; alpha = 1 forces beta = pi
                    return pi;
                }
                let s = self.tail_slope();
                let log_term = s * ((b - pi) * a / (1.0 - a)) * a.ln();
                (b * b * a + (pi - a * b) * (pi - a * b) / (1.0 - a) - log_term) / pi
            }
        }
    }

    /// Rescaled `(ap_tilde, auc_tilde)`.
    pub fn rescaled(&self, form: ApForm) -> (f64, f64) {
        (
            (self.ap(form) - self.pi) / (1.0 - self.pi),
            2.0 * self.auc() - 1.0,
        )
    }
}

/// Products `(beta - pi) * alpha` within this tolerance count as equal.
pub const EQUAL_AUC_TOLERANCE: f64 = 1e-12;

/// Whether two models sharing a prevalence have equal AUC, decided from
/// their momentum-stamina products.
pub fn equal_auc(m1: &QuasiConcaveModel, m2: &QuasiConcaveModel) -> Result<bool> {
    if m1.pi != m2.pi {
        return Err(Error::PrevalenceMismatch {
            left: m1.pi,
            right: m2.pi,
        });
    }
    Ok((m1.momentum_stamina_product() - m2.momentum_stamina_product()).abs() < EQUAL_AUC_TOLERANCE)
}

/// Both sides of the relation `ap_tilde ~ beta * auc_tilde`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentumRelation {
    pub ap_tilde: f64,
    pub beta_times_auc_tilde: f64,
    /// `ap_tilde - beta_times_auc_tilde`.
    pub gap: f64,
}

pub fn momentum_relation(model: &QuasiConcaveModel, form: ApForm) -> MomentumRelation {
    let (ap_tilde, auc_tilde) = model.rescaled(form);
    let rhs = model.beta * auc_tilde;
    MomentumRelation {
        ap_tilde,
        beta_times_auc_tilde: rhs,
        gap: ap_tilde - rhs,
    }
}
