//! CSV ingestion: a header row, a binary label column, numeric score columns.

use std::path::Path;

use apauc::LabeledSample;

use crate::error::CliError;

pub struct Dataset {
    pub labels: Vec<bool>,
    /// `(column name, values)` in header order, excluding the label column.
    pub columns: Vec<(String, Vec<String>)>,
    /// File line number of each data row.
    pub lines: Vec<u64>,
}

impl Dataset {
    pub fn read(path: &Path, label_col: &str) -> Result<Self, CliError> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_path(path)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        let headers = reader
            .headers()
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?
            .clone();
        let label_idx = headers
            .iter()
            .position(|h| h == label_col)
            .ok_or_else(|| CliError::Input(format!("missing label column '{label_col}'")))?;

        let mut labels = Vec::new();
        let mut lines = Vec::new();
        let mut columns: Vec<(String, Vec<String>)> = headers
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != label_idx)
            .map(|(_, h)| (h.to_string(), Vec::new()))
            .collect();

        for record in reader.records() {
            let record = record.map_err(|e| CliError::Input(e.to_string()))?;
            let line = record.position().map_or(0, |p| p.line());
            let label = match record.get(label_idx) {
                Some("0") => false,
                Some("1") => true,
                Some(other) => {
                    return Err(CliError::Input(format!(
                        "line {line}: label '{other}' is not 0 or 1"
                    )))
                }
                None => return Err(CliError::Input(format!("line {line}: missing label"))),
            };
            labels.push(label);
            lines.push(line);
            let mut target = columns.iter_mut();
            for (i, field) in record.iter().enumerate() {
                if i != label_idx {
                    if let Some((_, values)) = target.next() {
                        values.push(field.to_string());
                    }
                }
            }
        }
        if labels.is_empty() {
            return Err(CliError::Input(format!("{}: no data rows", path.display())));
        }
        Ok(Self {
            labels,
            columns,
            lines,
        })
    }

    pub fn column_names(&self) -> Vec<String> {
        self.columns.iter().map(|(name, _)| name.clone()).collect()
    }

    /// Parses one score column into samples. Empty, non-numeric, and
    /// non-finite cells are errors.
    pub fn samples(&self, name: &str) -> Result<Vec<LabeledSample>, CliError> {
        let (_, values) = self
            .columns
            .iter()
            .find(|(n, _)| n == name)
            .ok_or_else(|| CliError::Input(format!("missing score column '{name}'")))?;
        let mut out = Vec::with_capacity(values.len());
        for ((raw, &label), &line) in values.iter().zip(&self.labels).zip(&self.lines) {
            if raw.is_empty() {
                return Err(CliError::Input(format!(
                    "line {line}: empty score in column '{name}'"
                )));
            }
            let score: f64 = raw.parse().map_err(|_| {
                CliError::Input(format!(
                    "line {line}: score '{raw}' in column '{name}' is not numeric"
                ))
            })?;
            let sample = LabeledSample::new(score, label)
                .map_err(|e| CliError::Input(format!("line {line}: column '{name}': {e}")))?;
            out.push(sample);
        }
        if out.len() != self.labels.len() {
            return Err(CliError::Input(format!(
                "column '{name}' has {} values for {} rows",
                out.len(),
                self.labels.len()
            )));
        }
        Ok(out)
    }
}
