use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::Result;
use crate::partition::PartitionTable;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CurveKind {
    Hit,
    Roc,
    Pr,
}

impl fmt::Display for CurveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CurveKind::Hit => "hit",
            CurveKind::Roc => "roc",
            CurveKind::Pr => "pr",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Curve {
    pub kind: CurveKind,
    pub points: Vec<CurvePoint>,
}

impl Curve {
    fn new(kind: CurveKind, points: Vec<CurvePoint>) -> Self {
        Self { kind, points }
    }
}

fn pt(x: f64, y: f64) -> CurvePoint {
    CurvePoint { x, y }
}

/// Hit curve: fraction of all subjects that are true positives, against the
/// fraction of subjects declared positive. Runs from (0, 0) to (1, n1/n).
pub fn hit_curve(table: &PartitionTable) -> Curve {
    let n = table.n() as f64;
    let mut points = vec![pt(0.0, 0.0)];
    points.extend(
        table
            .cumulative()
            .map(|(d, h)| pt(d as f64 / n, h as f64 / n)),
    );
    Curve::new(CurveKind::Hit, points)
}

/// ROC curve (FPF, TPF), starting at the origin.
pub fn roc_curve(table: &PartitionTable) -> Result<Curve> {
    table.require_both_classes()?;
    let (n1, n0) = (table.n1() as f64, table.n0() as f64);
    let mut points = vec![pt(0.0, 0.0)];
    points.extend(
        table
            .cumulative()
            .map(|(d, h)| pt((d - h) as f64 / n0, h as f64 / n1)),
    );
    Ok(Curve::new(CurveKind::Roc, points))
}

/// Precision-recall points (recall, precision), one per group.
pub fn pr_curve(table: &PartitionTable) -> Result<Curve> {
    table.require_both_classes()?;
    let n1 = table.n1() as f64;
    let points = table
        .cumulative()
        .map(|(d, h)| pt(h as f64 / n1, h as f64 / d as f64))
        .collect();
    Ok(Curve::new(CurveKind::Pr, points))
}
