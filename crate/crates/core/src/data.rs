//! Dataset representation, CSV ingestion, out-of-sample bootstrap and
//! synthetic fixtures with planted correlation structure.

use std::collections::HashSet;
use std::fs;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Rectangular metric matrix with named columns and a binary outcome.
///
/// Storage is column-major since nearly every consumer works per metric.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    metric_names: Vec<String>,
    columns: Vec<Vec<f64>>,
    outcome: Vec<bool>,
}

impl Dataset {
    /// Builds a dataset from row-major values, enforcing every invariant:
    /// unique non-empty names, equal row widths, finite values, at least two
    /// rows, one metric and both outcome classes.
    pub fn from_rows(metric_names: Vec<String>, rows: Vec<Vec<f64>>, outcome: Vec<bool>) -> Result<Self> {
        let p = metric_names.len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != p {
                return Err(Error::InvalidDataset(format!(
                    "row {i} has {} values, expected {p}",
                    row.len()
                )));
            }
        }
        let columns = (0..p).map(|j| rows.iter().map(|r| r[j]).collect()).collect();
        Self::from_columns(metric_names, columns, outcome)
    }

    pub fn from_columns(metric_names: Vec<String>, columns: Vec<Vec<f64>>, outcome: Vec<bool>) -> Result<Self> {
        let d = Self::unchecked(metric_names, columns, outcome)?;
        if d.n_rows() < 2 {
            return Err(Error::InvalidDataset("at least 2 rows are required".into()));
        }
        let defective = d.defective_count();
        if defective == 0 || defective == d.n_rows() {
            return Err(Error::InvalidDataset(
                "both defective and clean modules are required".into(),
            ));
        }
        Ok(d)
    }

    /// Shape and value checks only; partitions produced by resampling may
    /// legitimately hold a single row or a single class.
    fn unchecked(metric_names: Vec<String>, columns: Vec<Vec<f64>>, outcome: Vec<bool>) -> Result<Self> {
        if metric_names.is_empty() {
            return Err(Error::InvalidDataset("at least 1 metric is required".into()));
        }
        if columns.len() != metric_names.len() {
            return Err(Error::InvalidDataset(format!(
                "{} columns for {} metric names",
                columns.len(),
                metric_names.len()
            )));
        }
        let mut seen = HashSet::new();
        for name in &metric_names {
            if name.is_empty() {
                return Err(Error::InvalidDataset("empty metric name".into()));
            }
            if !seen.insert(name.as_str()) {
                return Err(Error::InvalidDataset(format!("duplicate metric name `{name}`")));
            }
        }
        for (name, col) in metric_names.iter().zip(&columns) {
            if col.len() != outcome.len() {
                return Err(Error::InvalidDataset(format!(
                    "column `{name}` has {} values, outcome has {}",
                    col.len(),
                    outcome.len()
                )));
            }
            if let Some(i) = col.iter().position(|v| !v.is_finite()) {
                return Err(Error::InvalidDataset(format!(
                    "non-finite value in `{name}` at row {i}"
                )));
            }
        }
        Ok(Self {
            metric_names,
            columns,
            outcome,
        })
    }

    pub fn metric_names(&self) -> &[String] {
        &self.metric_names
    }

    pub fn n_rows(&self) -> usize {
        self.outcome.len()
    }

    pub fn n_metrics(&self) -> usize {
        self.metric_names.len()
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[Vec<f64>] {
        &self.columns
    }

    pub fn outcome(&self) -> &[bool] {
        &self.outcome
    }

    /// Outcome encoded as 0.0 / 1.0.
    pub fn outcome_f64(&self) -> Vec<f64> {
        self.outcome.iter().map(|&y| if y { 1.0 } else { 0.0 }).collect()
    }

    pub fn defective_count(&self) -> usize {
        self.outcome.iter().filter(|&&y| y).count()
    }

    pub fn has_both_classes(&self) -> bool {
        let k = self.defective_count();
        k > 0 && k < self.n_rows()
    }

    pub fn row(&self, i: usize) -> Vec<f64> {
        self.columns.iter().map(|c| c[i]).collect()
    }

    /// Row `i` restricted to the given column indices.
    pub fn row_at(&self, i: usize, cols: &[usize]) -> Vec<f64> {
        cols.iter().map(|&j| self.columns[j][i]).collect()
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.metric_names.iter().position(|m| m == name)
    }

    pub fn column_by_name(&self, name: &str) -> Result<&[f64]> {
        self.column_index(name)
            .map(|j| self.column(j))
            .ok_or_else(|| Error::UnknownMetric(name.to_string()))
    }

    /// Resolves subset names to column indices, in subset order.
    pub fn indices_of(&self, subset: &MetricSubset) -> Result<Vec<usize>> {
        subset
            .iter()
            .map(|m| self.column_index(m).ok_or_else(|| Error::UnknownMetric(m.clone())))
            .collect()
    }

    /// Every metric, in column order.
    pub fn all_metrics(&self) -> MetricSubset {
        MetricSubset(self.metric_names.clone())
    }

    /// Dataset restricted to the given metrics (subset order).
    pub fn project(&self, subset: &MetricSubset) -> Result<Dataset> {
        let idx = self.indices_of(subset)?;
        Self::unchecked(
            subset.names().to_vec(),
            idx.iter().map(|&j| self.columns[j].clone()).collect(),
            self.outcome.clone(),
        )
    }

    /// Rows selected by index (repeats allowed). The result may hold one class.
    pub fn select_rows(&self, rows: &[usize]) -> Dataset {
        Dataset {
            metric_names: self.metric_names.clone(),
            columns: self
                .columns
                .iter()
                .map(|c| rows.iter().map(|&i| c[i]).collect())
                .collect(),
            outcome: rows.iter().map(|&i| self.outcome[i]).collect(),
        }
    }

    /// Same metrics, new outcome vector.
    pub fn with_outcome(&self, outcome: Vec<bool>) -> Result<Dataset> {
        Self::from_columns(self.metric_names.clone(), self.columns.clone(), outcome)
    }

    /// Same shape with column `j` replaced.
    pub fn with_column(&self, j: usize, values: Vec<f64>) -> Result<Dataset> {
        let mut columns = self.columns.clone();
        columns[j] = values;
        Self::from_columns(self.metric_names.clone(), columns, self.outcome.clone())
    }
}

/// Ordered set of metric names produced by a selector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MetricSubset(Vec<String>);

impl MetricSubset {
    /// Rejects duplicate names.
    pub fn new(names: Vec<String>) -> Result<Self> {
        let mut seen = HashSet::new();
        for n in &names {
            if !seen.insert(n.as_str()) {
                return Err(Error::InvalidParameter(format!("duplicate metric `{n}` in subset")));
            }
        }
        Ok(Self(names))
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    /// Names of the given column indices, in the order given.
    pub fn from_indices(d: &Dataset, idx: &[usize]) -> Self {
        Self(idx.iter().map(|&j| d.metric_names()[j].clone()).collect())
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.0.iter().any(|n| n == name)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, String> {
        self.0.iter()
    }

    pub fn into_inner(self) -> Vec<String> {
        self.0
    }
}

impl<'a> IntoIterator for &'a MetricSubset {
    type Item = &'a String;
    type IntoIter = std::slice::Iter<'a, String>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

fn parse_outcome(raw: &str, row: usize) -> Result<bool> {
    let v = raw.trim();
    if v == "1" || v.eq_ignore_ascii_case("defective") {
        Ok(true)
    } else if v == "0" || v.eq_ignore_ascii_case("clean") {
        Ok(false)
    } else {
        Err(Error::InvalidOutcomeValue {
            row,
            value: raw.to_string(),
        })
    }
}

/// Reads a comma-delimited CSV with a header row. `outcome_column` is
/// removed from the metrics and mapped to booleans; column order is kept.
///
/// Data rows are numbered from 1 in error messages (the header is row 0).
pub fn load_csv(path: impl AsRef<Path>, outcome_column: &str) -> Result<Dataset> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_csv(&text, outcome_column)
}

pub fn parse_csv(text: &str, outcome_column: &str) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::Headers)
        .from_reader(text.as_bytes());
    let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    let outcome_idx = header
        .iter()
        .position(|h| h == outcome_column)
        .ok_or_else(|| Error::MissingColumn(outcome_column.to_string()))?;
    let metric_cols: Vec<usize> = (0..header.len()).filter(|&j| j != outcome_idx).collect();
    let metric_names: Vec<String> = metric_cols.iter().map(|&j| header[j].clone()).collect();

    let mut columns = vec![Vec::new(); metric_cols.len()];
    let mut outcome = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        let row = i + 1;
        if record.len() != header.len() {
            return Err(Error::InvalidDataset(format!(
                "data row {row} has {} fields, header has {}",
                record.len(),
                header.len()
            )));
        }
        outcome.push(parse_outcome(&record[outcome_idx], row)?);
        for (slot, &j) in columns.iter_mut().zip(&metric_cols) {
            let raw = &record[j];
            let value = raw
                .trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::NonNumericCell {
                    row,
                    column: header[j].clone(),
                    value: raw.to_string(),
                })?;
            slot.push(value);
        }
    }
    if outcome.is_empty() {
        return Err(Error::EmptyDataset);
    }
    Dataset::from_columns(metric_names, columns, outcome)
}

/// Serialises metrics followed by the outcome column (0/1). Floats use the
/// shortest representation that round-trips.
pub fn to_csv_string(d: &Dataset, outcome_column: &str) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<&str> = d.metric_names().iter().map(String::as_str).collect();
    header.push(outcome_column);
    w.write_record(&header)?;
    for i in 0..d.n_rows() {
        let mut rec: Vec<String> = d.columns().iter().map(|c| format!("{}", c[i])).collect();
        rec.push(if d.outcome()[i] { "1" } else { "0" }.to_string());
        w.write_record(&rec)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::InvalidDataset(format!("csv writer: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn write_csv(d: &Dataset, path: impl AsRef<Path>, outcome_column: &str) -> Result<()> {
    let path = path.as_ref();
    let text = to_csv_string(d, outcome_column)?;
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DatasetSummary {
    pub module_count: usize,
    pub metric_count: usize,
    pub defective_count: usize,
    /// Percentage in [0, 100].
    pub defective_ratio: f64,
    /// Events per variable: defective modules per metric.
    pub epv: f64,
}

pub fn summarize(d: &Dataset) -> DatasetSummary {
    summarize_counts(d.n_rows(), d.n_metrics(), d.defective_count())
}

/// Summary from raw counts; tolerates zero defects.
pub fn summarize_counts(module_count: usize, metric_count: usize, defective_count: usize) -> DatasetSummary {
    let defective_ratio = if module_count == 0 {
        0.0
    } else {
        100.0 * defective_count as f64 / module_count as f64
    };
    let epv = if metric_count == 0 {
        0.0
    } else {
        defective_count as f64 / metric_count as f64
    };
    DatasetSummary {
        module_count,
        metric_count,
        defective_count,
        defective_ratio,
        epv,
    }
}

/// Out-of-sample bootstrap partition. Row identity is the source index.
#[derive(Debug, Clone)]
pub struct BootstrapSplit {
    pub train: Dataset,
    pub test: Dataset,
    pub draw_indices: Vec<usize>,
    pub test_indices: Vec<usize>,
}

/// Draws N rows uniformly with replacement; the rows never drawn form the
/// test set, in original order.
pub fn bootstrap_sample(d: &Dataset, seed: u64) -> Result<BootstrapSplit> {
    let n = d.n_rows();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw_indices: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
    let mut drawn = vec![false; n];
    for &i in &draw_indices {
        drawn[i] = true;
    }
    let test_indices: Vec<usize> = (0..n).filter(|&i| !drawn[i]).collect();
    if test_indices.is_empty() {
        return Err(Error::EmptyTestSet);
    }
    Ok(BootstrapSplit {
        train: d.select_rows(&draw_indices),
        test: d.select_rows(&test_indices),
        draw_indices,
        test_indices,
    })
}

/// One group of noisy copies of a base metric.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CloneGroup {
    pub source: usize,
    pub count: usize,
    pub noise_sd: f64,
}

/// Recipe for a synthetic dataset with planted clone groups.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub base_metric_count: usize,
    #[serde(default)]
    pub clone_groups: Vec<CloneGroup>,
    pub module_count: usize,
    /// Log-odds weight per base metric; empty means all zero.
    #[serde(default)]
    pub signal_coefficients: Vec<f64>,
    pub seed: u64,
}

impl SyntheticSpec {
    pub fn validate(&self) -> Result<()> {
        if self.base_metric_count == 0 {
            return Err(Error::InvalidSpec("base_metric_count must be >= 1".into()));
        }
        if self.module_count < 10 {
            return Err(Error::InvalidSpec("module_count must be >= 10".into()));
        }
        for g in &self.clone_groups {
            if g.source >= self.base_metric_count {
                return Err(Error::InvalidSpec(format!(
                    "clone source {} out of range (base metrics: {})",
                    g.source, self.base_metric_count
                )));
            }
            if !(g.noise_sd >= 0.0 && g.noise_sd.is_finite()) {
                return Err(Error::InvalidSpec(format!("invalid noise sd {}", g.noise_sd)));
            }
        }
        if !self.signal_coefficients.is_empty()
            && self.signal_coefficients.len() != self.base_metric_count
        {
            return Err(Error::InvalidSpec(format!(
                "{} signal coefficients for {} base metrics",
                self.signal_coefficients.len(),
                self.base_metric_count
            )));
        }
        if self.signal_coefficients.iter().any(|w| !w.is_finite()) {
            return Err(Error::InvalidSpec("non-finite signal coefficient".into()));
        }
        Ok(())
    }

    /// Name of base metric `j`.
    pub fn base_name(j: usize) -> String {
        format!("m{j}")
    }

    /// Name of clone `k` of base metric `source`.
    pub fn clone_name(source: usize, k: usize) -> String {
        format!("m{source}_c{k}")
    }
}

fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

/// Base metrics are i.i.d. standard normal; each clone is its source plus
/// Gaussian noise; the outcome is Bernoulli(sigmoid(w · base)).
///
/// Columns: `m0..m{k-1}` then clones `m{src}_c{i}` in group order. Clone
/// indices count per source across groups.
pub fn generate_synthetic(spec: &SyntheticSpec) -> Result<Dataset> {
    spec.validate()?;
    let n = spec.module_count;
    let k = spec.base_metric_count;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);

    let mut base = vec![vec![0.0; n]; k];
    for i in 0..n {
        for col in base.iter_mut() {
            col[i] = StandardNormal.sample(&mut rng);
        }
    }

    let mut names: Vec<String> = (0..k).map(SyntheticSpec::base_name).collect();
    let mut columns = base.clone();
    let mut clone_counter = vec![0usize; k];
    for g in &spec.clone_groups {
        for _ in 0..g.count {
            let col: Vec<f64> = if g.noise_sd == 0.0 {
                base[g.source].clone()
            } else {
                let noise = Normal::new(0.0, g.noise_sd)
                    .map_err(|e| Error::InvalidSpec(e.to_string()))?;
                base[g.source].iter().map(|&v| v + noise.sample(&mut rng)).collect()
            };
            names.push(SyntheticSpec::clone_name(g.source, clone_counter[g.source]));
            clone_counter[g.source] += 1;
            columns.push(col);
        }
    }

    let outcome: Vec<bool> = (0..n)
        .map(|i| {
            let z: f64 = spec
                .signal_coefficients
                .iter()
                .zip(&base)
                .map(|(w, col)| w * col[i])
                .sum();
            rng.gen::<f64>() < sigmoid(z)
        })
        .collect();

    Dataset::from_columns(names, columns, outcome).map_err(|e| match e {
        Error::InvalidDataset(msg) => Error::InvalidSpec(format!("generated data invalid: {msg}")),
        other => other,
    })
}
