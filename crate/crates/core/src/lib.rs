//! Threshold-free evaluation of binary scores.
//!
//! Scores are grouped by distinct value ([`PartitionTable`]); AUC and
//! average precision are computed exactly from the group counts, with the
//! delta-method and bootstrap standard errors for AP built on the same
//! grouped multinomial model. [`quasiconcave`] holds the closed-form
//! two-segment hit-curve model and [`simulation`] a binormal generator.

pub mod bootstrap;
pub mod curve;
pub mod error;
pub mod inference;
pub mod metrics;
pub mod partition;
pub mod quasiconcave;
pub mod rng;
pub mod sample;
pub mod simulation;

pub use bootstrap::{bootstrap_se, BootstrapMetric, BootstrapResult, BootstrapScheme};
pub use curve::{hit_curve, pr_curve, roc_curve, Curve, CurveKind, CurvePoint};
pub use error::{Error, Result};
pub use inference::{
    ap_asymptotic_se, ap_asymptotic_variance, ap_from_fit, ap_gradient, difference_se,
    fit_multinomial, GradientVector, MultinomialFit,
};
pub use metrics::{
    auc, average_precision, beta_hat, rescale, summarize, AucMode, BetaHat, MetricEstimate,
    MetricSummary, SeMethod,
};
pub use partition::PartitionTable;
pub use quasiconcave::{equal_auc, momentum_relation, ApForm, MomentumRelation, QuasiConcaveModel};
pub use sample::{inflate_controls, samples_from_raw, LabeledSample};
pub use simulation::{generate, replicate_study, run_scenario, BinormalScenario};
