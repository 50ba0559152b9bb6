use std::num::NonZeroUsize;
use std::path::Path;

use apauc::bootstrap::{bootstrap_se, BootstrapMetric, BootstrapScheme};
use apauc::quasiconcave::{momentum_relation, ApForm, QuasiConcaveModel};
use apauc::simulation::{replicate_study, run_scenario, BinormalScenario, MeanSd};
use apauc::{
    ap_asymptotic_se, auc, average_precision, difference_se, hit_curve, pr_curve, roc_curve,
    summarize, AucMode, Curve, PartitionTable, SeMethod,
};
use serde::Serialize;

use crate::error::CliError;
use crate::input::Dataset;
use crate::output::{csv_rows, emit, json, Format};
use crate::{
    CurvesArgs, DiffSeArgs, InflateArgs, MetricsArgs, OutputArgs, QuasiArgs, RankArgs, SeArg,
    SeArgs, SimulateArgs,
};

#[derive(Serialize)]
struct SeEntry {
    metric: BootstrapMetric,
    method: SeMethod,
    se: f64,
}

/// One score column's metrics, flat so it doubles as a CSV row.
#[derive(Serialize, Clone)]
struct ColumnReport {
    column: String,
    n: u64,
    n1: u64,
    n0: u64,
    groups: usize,
    prevalence: f64,
    ap: f64,
    auc_exact: f64,
    auc_paper: f64,
    beta_hat: Option<f64>,
    beta_hat_out_of_range: bool,
    se_ap_asymptotic: Option<f64>,
    se_ap_pboot: Option<f64>,
    se_ap_npboot: Option<f64>,
    se_auc_pboot: Option<f64>,
    se_auc_npboot: Option<f64>,
    #[serde(skip)]
    redraws: usize,
}

impl ColumnReport {
    fn se_entries(&self) -> Vec<SeEntry> {
        use BootstrapMetric::{Ap, Auc};
        use SeMethod::*;
        [
            (Ap, Asymptotic, self.se_ap_asymptotic),
            (Ap, ParametricBootstrap, self.se_ap_pboot),
            (Ap, NonparametricBootstrap, self.se_ap_npboot),
            (Auc, ParametricBootstrap, self.se_auc_pboot),
            (Auc, NonparametricBootstrap, self.se_auc_npboot),
        ]
        .into_iter()
        .filter_map(|(metric, method, se)| se.map(|se| SeEntry { metric, method, se }))
        .collect()
    }
}

fn validate_se(se: &SeArgs) -> Result<(), CliError> {
    let boot = se.methods.iter().any(|m| *m != SeArg::Asymptotic);
    if boot && se.replicates < 2 {
        return Err(CliError::Input(format!(
            "--bootstrap must be at least 2, got {}",
            se.replicates
        )));
    }
    Ok(())
}

fn method_tags(se: &SeArgs) -> Vec<SeMethod> {
    let mut methods = se.methods.clone();
    methods.sort();
    methods.dedup();
    methods
        .into_iter()
        .map(|m| match m {
            SeArg::Asymptotic => SeMethod::Asymptotic,
            SeArg::Pboot => SeMethod::ParametricBootstrap,
            SeArg::Npboot => SeMethod::NonparametricBootstrap,
        })
        .collect()
}

fn column_report(
    name: &str,
    table: &PartitionTable,
    se: &SeArgs,
) -> Result<ColumnReport, CliError> {
    let summary = summarize(table)?;
    let mut report = ColumnReport {
        column: name.to_string(),
        n: table.n(),
        n1: table.n1(),
        n0: table.n0(),
        groups: table.groups(),
        prevalence: summary.prevalence,
        ap: summary.ap,
        auc_exact: summary.auc_exact,
        auc_paper: summary.auc_paper,
        beta_hat: summary.beta_hat.map(|b| b.value),
        beta_hat_out_of_range: summary.beta_hat.is_some_and(|b| b.out_of_range()),
        se_ap_asymptotic: None,
        se_ap_pboot: None,
        se_ap_npboot: None,
        se_auc_pboot: None,
        se_auc_npboot: None,
        redraws: 0,
    };
    for method in method_tags(se) {
        let scheme = match method {
            SeMethod::Asymptotic => {
                report.se_ap_asymptotic = Some(ap_asymptotic_se(table)?);
                continue;
            }
            SeMethod::ParametricBootstrap => BootstrapScheme::Parametric,
            _ => BootstrapScheme::Nonparametric,
        };
        let ap = bootstrap_se(table, BootstrapMetric::Ap, scheme, se.replicates, se.seed)?;
        let auc = bootstrap_se(table, BootstrapMetric::Auc, scheme, se.replicates, se.seed)?;
        report.redraws += ap.redraws + auc.redraws;
        match scheme {
            BootstrapScheme::Parametric => {
                report.se_ap_pboot = Some(ap.se);
                report.se_auc_pboot = Some(auc.se);
            }
            BootstrapScheme::Nonparametric => {
                report.se_ap_npboot = Some(ap.se);
                report.se_auc_npboot = Some(auc.se);
            }
        }
    }
    Ok(report)
}

fn single_score_column(data: &Dataset, requested: &Option<String>) -> Result<String, CliError> {
    if let Some(name) = requested {
        return Ok(name.clone());
    }
    match data.column_names().as_slice() {
        [only] => Ok(only.clone()),
        [] => Err(CliError::Input("no score column in input".into())),
        _ => Err(CliError::Input(
            "several score columns present; choose one with --score-col".into(),
        )),
    }
}

fn score_columns(data: &Dataset, requested: &[String]) -> Vec<String> {
    if requested.is_empty() {
        data.column_names()
    } else {
        requested.to_vec()
    }
}

#[derive(Serialize)]
struct Meta<'a> {
    command: &'a str,
    input: String,
    label_col: &'a str,
    seed: u64,
    bootstrap: Option<usize>,
    methods: Vec<SeMethod>,
}

fn meta<'a>(command: &'a str, input: &Path, label_col: &'a str, se: &SeArgs) -> Meta<'a> {
    let methods = method_tags(se);
    let boot = methods.iter().any(|m| *m != SeMethod::Asymptotic);
    Meta {
        command,
        input: input.display().to_string(),
        label_col,
        seed: se.seed,
        bootstrap: boot.then_some(se.replicates),
        methods,
    }
}

#[derive(Serialize)]
struct MetricValues {
    column: String,
    n: u64,
    n1: u64,
    n0: u64,
    groups: usize,
    prevalence: f64,
    ap: f64,
    auc_exact: f64,
    auc_paper: f64,
    beta_hat: Option<f64>,
}

#[derive(Serialize)]
struct MetricFlags {
    beta_hat_out_of_range: bool,
    beta_hat_undefined: bool,
    bootstrap_redraws: usize,
}

#[derive(Serialize)]
struct MetricsReport<'a> {
    metrics: MetricValues,
    se: Vec<SeEntry>,
    flags: MetricFlags,
    meta: Meta<'a>,
}

fn finish(text: String, out: &OutputArgs) -> Result<(), CliError> {
    emit(&text, out.output.as_deref())
}

pub fn metrics(args: &MetricsArgs) -> Result<(), CliError> {
    validate_se(&args.se)?;
    let data = Dataset::read(&args.input.input, &args.input.label_col)?;
    let column = single_score_column(&data, &args.score_col)?;
    let table = PartitionTable::from_samples(&data.samples(&column)?)?;
    let r = column_report(&column, &table, &args.se)?;
    let text = match args.output.format {
        Format::Csv => csv_rows(std::slice::from_ref(&r))?,
        Format::Json => json(&MetricsReport {
            se: r.se_entries(),
            flags: MetricFlags {
                beta_hat_out_of_range: r.beta_hat_out_of_range,
                beta_hat_undefined: r.beta_hat.is_none(),
                bootstrap_redraws: r.redraws,
            },
            metrics: MetricValues {
                column: r.column,
                n: r.n,
                n1: r.n1,
                n0: r.n0,
                groups: r.groups,
                prevalence: r.prevalence,
                ap: r.ap,
                auc_exact: r.auc_exact,
                auc_paper: r.auc_paper,
                beta_hat: r.beta_hat,
            },
            meta: meta(
                "metrics",
                &args.input.input,
                &args.input.label_col,
                &args.se,
            ),
        })?,
    };
    finish(text, &args.output)
}

#[derive(Serialize)]
struct Skipped {
    column: String,
    error: String,
}

#[derive(Serialize)]
struct RankReport<'a> {
    ranking: Vec<ColumnReport>,
    skipped: Vec<Skipped>,
    meta: Meta<'a>,
}

type NamedTable = (String, PartitionTable);

/// Parses every requested column, reporting and skipping bad ones. Fails
/// only when no column survives.
fn usable_columns(
    data: &Dataset,
    names: &[String],
) -> Result<(Vec<NamedTable>, Vec<Skipped>), CliError> {
    let mut good = Vec::new();
    let mut skipped = Vec::new();
    let mut first_error = None;
    for name in names {
        let parsed = data
            .samples(name)
            .and_then(|s| PartitionTable::from_samples(&s).map_err(CliError::from));
        match parsed {
            Ok(table) => good.push((name.clone(), table)),
            Err(e) => {
                eprintln!("warning: skipping column '{name}': {e}");
                skipped.push(Skipped {
                    column: name.clone(),
                    error: e.to_string(),
                });
                first_error.get_or_insert(e);
            }
        }
    }
    match (good.is_empty(), first_error) {
        (true, Some(e)) => Err(e),
        (true, None) => Err(CliError::Input("no score columns in input".into())),
        _ => Ok((good, skipped)),
    }
}

pub fn rank(args: &RankArgs) -> Result<(), CliError> {
    validate_se(&args.se)?;
    let data = Dataset::read(&args.input.input, &args.input.label_col)?;
    let names = score_columns(&data, &args.score_cols);
    let (tables, skipped) = usable_columns(&data, &names)?;
    let mut ranking = tables
        .iter()
        .map(|(name, table)| column_report(name, table, &args.se))
        .collect::<Result<Vec<_>, _>>()?;
    ranking.sort_by(|a, b| {
        b.ap.total_cmp(&a.ap)
            .then(b.auc_exact.total_cmp(&a.auc_exact))
            .then_with(|| a.column.cmp(&b.column))
    });
    let text = match args.output.format {
        Format::Csv => csv_rows(&ranking)?,
        Format::Json => json(&RankReport {
            ranking,
            skipped,
            meta: meta("rank", &args.input.input, &args.input.label_col, &args.se),
        })?,
    };
    finish(text, &args.output)
}

#[derive(Serialize)]
struct CurveRow {
    kind: String,
    x: f64,
    y: f64,
}

pub fn curves(args: &CurvesArgs) -> Result<(), CliError> {
    let data = Dataset::read(&args.input.input, &args.input.label_col)?;
    let column = single_score_column(&data, &args.score_col)?;
    let table = PartitionTable::from_samples(&data.samples(&column)?)?;
    let curves: Vec<Curve> = vec![hit_curve(&table), roc_curve(&table)?, pr_curve(&table)?];
    let text = match args.format {
        Format::Json => json(&curves)?,
        Format::Csv => {
            let rows: Vec<CurveRow> = curves
                .iter()
                .flat_map(|c| {
                    c.points.iter().map(|p| CurveRow {
                        kind: c.kind.to_string(),
                        x: p.x,
                        y: p.y,
                    })
                })
                .collect();
            csv_rows(&rows)?
        }
    };
    emit(&text, args.output.as_deref())
}

#[derive(Serialize)]
struct QuasiReport {
    alpha: f64,
    beta: f64,
    pi: f64,
    auc: f64,
    ap_exact: f64,
    ap_taylor: f64,
    auc_tilde: f64,
    ap_tilde_exact: f64,
    ap_tilde_taylor: f64,
    beta_times_auc_tilde: f64,
    gap_exact: f64,
    gap_taylor: f64,
}

pub fn quasi(args: &QuasiArgs) -> Result<(), CliError> {
    let model = QuasiConcaveModel::new(args.alpha, args.beta, args.pi)?;
    let exact = momentum_relation(&model, ApForm::Exact);
    let taylor = momentum_relation(&model, ApForm::Taylor);
    let report = QuasiReport {
        alpha: model.alpha(),
        beta: model.beta(),
        pi: model.pi(),
        auc: model.auc(),
        ap_exact: model.ap(ApForm::Exact),
        ap_taylor: model.ap(ApForm::Taylor),
        auc_tilde: model.rescaled(ApForm::Exact).1,
        ap_tilde_exact: exact.ap_tilde,
        ap_tilde_taylor: taylor.ap_tilde,
        beta_times_auc_tilde: exact.beta_times_auc_tilde,
        gap_exact: exact.gap,
        gap_taylor: taylor.gap,
    };
    let text = match args.output.format {
        Format::Json => json(&report)?,
        Format::Csv => csv_rows(&[report])?,
    };
    finish(text, &args.output)
}

#[derive(Serialize)]
struct ScenarioEcho {
    n: usize,
    pi: f64,
    delta: f64,
    seed: u64,
    cases: usize,
    controls: usize,
}

#[derive(Serialize)]
struct RunRow {
    prevalence: f64,
    ap: f64,
    auc_exact: f64,
    beta_hat: f64,
    beta_hat_out_of_range: bool,
    overlay_slope: f64,
}

#[derive(Serialize)]
struct RunReport {
    scenario: ScenarioEcho,
    summary: RunRow,
    hit_curve: Curve,
}

#[derive(Serialize)]
struct ReplicateRow {
    replicate: usize,
    ap: f64,
    auc_exact: f64,
    beta_hat: Option<f64>,
    beta_hat_out_of_range: bool,
    ap_se_asymptotic: f64,
}

#[derive(Serialize)]
struct Aggregate {
    ap: MeanSd,
    auc_exact: MeanSd,
    beta_hat: MeanSd,
    ap_se_asymptotic: MeanSd,
    beta_hat_undefined: usize,
    beta_hat_out_of_range: usize,
}

#[derive(Serialize)]
struct StudyReport {
    scenario: ScenarioEcho,
    aggregate: Aggregate,
    replicates: Vec<ReplicateRow>,
}

pub fn simulate(args: &SimulateArgs) -> Result<(), CliError> {
    if args.replicates == 0 {
        return Err(CliError::Input("--replicates must be at least 1".into()));
    }
    let scenario = BinormalScenario::new(args.n, args.pi, args.delta, args.seed)?;
    let echo = ScenarioEcho {
        n: scenario.n(),
        pi: scenario.pi(),
        delta: scenario.delta(),
        seed: scenario.seed(),
        cases: scenario.cases(),
        controls: scenario.controls(),
    };
    let text = if args.replicates == 1 {
        let s = run_scenario(&scenario)?;
        let summary = RunRow {
            prevalence: s.prevalence,
            ap: s.ap,
            auc_exact: s.auc_exact,
            beta_hat: s.beta_hat.value,
            beta_hat_out_of_range: s.beta_hat.out_of_range(),
            overlay_slope: s.overlay_slope,
        };
        match args.output.format {
            Format::Csv => csv_rows(&[summary])?,
            Format::Json => json(&RunReport {
                scenario: echo,
                summary,
                hit_curve: s.hit_curve,
            })?,
        }
    } else {
        let study = replicate_study(&scenario, args.replicates)?;
        let rows: Vec<ReplicateRow> = study
            .replicates
            .iter()
            .enumerate()
            .map(|(i, r)| ReplicateRow {
                replicate: i,
                ap: r.ap,
                auc_exact: r.auc_exact,
                beta_hat: r.beta_hat.map(|b| b.value),
                beta_hat_out_of_range: r.beta_hat.is_some_and(|b| b.out_of_range()),
                ap_se_asymptotic: r.ap_se_asymptotic,
            })
            .collect();
        match args.output.format {
            Format::Csv => csv_rows(&rows)?,
            Format::Json => json(&StudyReport {
                scenario: echo,
                aggregate: Aggregate {
                    ap: study.ap,
                    auc_exact: study.auc_exact,
                    beta_hat: study.beta_hat,
                    ap_se_asymptotic: study.ap_se_asymptotic,
                    beta_hat_undefined: study.beta_hat_undefined,
                    beta_hat_out_of_range: study.beta_hat_out_of_range,
                },
                replicates: rows,
            })?,
        }
    };
    finish(text, &args.output)
}

#[derive(Serialize)]
struct InflateRow {
    column: String,
    factor: usize,
    n1: u64,
    n0: u64,
    prevalence: f64,
    auc_exact: f64,
    ap: f64,
}

#[derive(Serialize)]
struct InflateReport {
    rows: Vec<InflateRow>,
    skipped: Vec<Skipped>,
}

pub fn inflate(args: &InflateArgs) -> Result<(), CliError> {
    let factors = args
        .inflate
        .iter()
        .map(|&m| {
            NonZeroUsize::new(m)
                .ok_or_else(|| CliError::Input("inflation factors must be at least 1".into()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let data = Dataset::read(&args.input.input, &args.input.label_col)?;
    let names = score_columns(&data, &args.score_cols);
    let (tables, skipped) = usable_columns(&data, &names)?;
    let mut rows = Vec::new();
    for (name, table) in &tables {
        for &m in &factors {
            let inflated = table.inflate_controls(m);
            rows.push(InflateRow {
                column: name.clone(),
                factor: m.get(),
                n1: inflated.n1(),
                n0: inflated.n0(),
                prevalence: inflated.prevalence(),
                auc_exact: auc(&inflated, AucMode::Exact)?,
                ap: average_precision(&inflated)?,
            });
        }
    }
    let text = match args.output.format {
        Format::Csv => csv_rows(&rows)?,
        Format::Json => json(&InflateReport { rows, skipped })?,
    };
    finish(text, &args.output)
}

#[derive(Serialize)]
struct DiffRow {
    se1: f64,
    se2: f64,
    rho: f64,
    se_difference: f64,
}

pub fn diff_se(args: &DiffSeArgs) -> Result<(), CliError> {
    let rows = args
        .rho
        .iter()
        .map(|&rho| {
            Ok(DiffRow {
                se1: args.se1,
                se2: args.se2,
                rho,
                se_difference: difference_se(args.se1, args.se2, rho)?,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let text = match args.output.format {
        Format::Csv => csv_rows(&rows)?,
        Format::Json => json(&rows)?,
    };
    finish(text, &args.output)
}
