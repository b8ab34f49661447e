use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::autospearman::{AutoSpearmanParams, DEFAULT_SP_T, DEFAULT_VIF_T};
use crate::classifiers::ClassifierKind;
use crate::data::{generate_synthetic, load_csv, summarize, Dataset, DatasetSummary, SyntheticSpec};
use crate::error::{Error, Result};
use crate::harness::grid::{run_selection_grid, sample_split, CellOutcome, SubsetCollection};
use crate::harness::performance::{performance_deltas, FailureRecord, Measure, PerformanceDelta};
use crate::harness::{consistency, correlation_flags_at, quantile};
use crate::selectors::{SelectorConfig, SelectorId};

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_BOOTSTRAP_COUNT: usize = 30;
pub const DEFAULT_SEED: u64 = 20_180_301;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DatasetSource {
    Path(PathBuf),
    Synthetic(SyntheticSpec),
}

fn default_bootstrap() -> usize {
    DEFAULT_BOOTSTRAP_COUNT
}
fn default_seed() -> u64 {
    DEFAULT_SEED
}
fn default_sp_t() -> f64 {
    DEFAULT_SP_T
}
fn default_vif_t() -> f64 {
    DEFAULT_VIF_T
}
fn default_bins() -> usize {
    10
}
fn default_selectors() -> Vec<SelectorId> {
    SelectorId::ALL.to_vec()
}
fn default_classifiers() -> Vec<ClassifierKind> {
    ClassifierKind::ALL.to_vec()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub dataset: DatasetSource,
    /// Required when the dataset is a CSV path; synthetic data names it `bug`.
    #[serde(default)]
    pub outcome_column: Option<String>,
    #[serde(default = "default_selectors")]
    pub selectors: Vec<SelectorId>,
    #[serde(default = "default_bootstrap")]
    pub bootstrap_count: usize,
    #[serde(default = "default_seed")]
    pub base_seed: u64,
    #[serde(default = "default_sp_t")]
    pub sp_t: f64,
    #[serde(default = "default_vif_t")]
    pub vif_t: f64,
    #[serde(default = "default_bins")]
    pub bins: usize,
    #[serde(default = "default_classifiers")]
    pub classifiers: Vec<ClassifierKind>,
    pub output: PathBuf,
    #[serde(default)]
    pub csv_output: Option<PathBuf>,
    /// Further selector tuning; `sp_t`, `vif_t` and `bins` above take precedence.
    #[serde(default)]
    pub selector_options: Option<SelectorConfig>,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.bootstrap_count == 0 {
            return Err(Error::Config("bootstrap_count must be at least 1".into()));
        }
        if self.selectors.is_empty() {
            return Err(Error::Config("no selectors configured".into()));
        }
        self.selector_config()?.validate()
    }

    pub fn selector_config(&self) -> Result<SelectorConfig> {
        let mut c = self.selector_options.clone().unwrap_or_default();
        c.bins = self.bins;
        c.base_seed = self.base_seed;
        c.autospearman = AutoSpearmanParams {
            sp_t: self.sp_t,
            vif_t: self.vif_t,
            ..c.autospearman
        };
        Ok(c)
    }

    pub fn load_dataset(&self) -> Result<(String, Dataset)> {
        match &self.dataset {
            DatasetSource::Path(p) => {
                let outcome = self
                    .outcome_column
                    .as_deref()
                    .ok_or_else(|| Error::Config("outcome_column is required for a CSV dataset".into()))?;
                Ok((p.display().to_string(), load_csv(p, outcome)?))
            }
            DatasetSource::Synthetic(spec) => Ok((format!("synthetic(seed={})", spec.seed), generate_synthetic(spec)?)),
        }
    }
}

pub fn load_config(path: impl AsRef<Path>) -> Result<ExperimentConfig> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let config: ExperimentConfig = serde_json::from_str(&text).map_err(|e| Error::Config(e.to_string()))?;
    config.validate()?;
    Ok(config)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectorConsistency {
    pub selector: SelectorId,
    pub samples_used: usize,
    pub percentage: f64,
    pub intersection: usize,
    pub union: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleConsistency {
    pub sample: usize,
    pub percentage: f64,
    pub intersection: usize,
    pub union: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlagSummary {
    pub selector: SelectorId,
    pub samples_used: usize,
    pub collinearity_pct: f64,
    pub multicollinearity_pct: f64,
    pub collinearity_at_or_above_pct: f64,
    pub multicollinearity_at_or_above_pct: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeltaSummary {
    pub selector: SelectorId,
    pub classifier: ClassifierKind,
    pub measure: Measure,
    pub samples_used: usize,
    pub median: f64,
    pub q1: f64,
    pub q3: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionRules {
    pub ranking_cutoff: String,
    pub elimination_comparison: String,
    pub flag_comparison: String,
    pub cross_selector_scope: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub schema_version: u32,
    pub generated_at: String,
    pub config: ExperimentConfig,
    pub dataset_id: String,
    pub dataset_summary: DatasetSummary,
    pub rules: SelectionRules,
    pub base_seed: u64,
    pub sample_seeds: Vec<Option<u64>>,
    /// Per selector, the subset chosen on each sample (`null` on failure).
    pub subsets: BTreeMap<String, Vec<Option<Vec<String>>>>,
    pub consistency_across_samples: Vec<SelectorConsistency>,
    pub consistency_across_selectors: Vec<SampleConsistency>,
    pub correlation_flags: Vec<FlagSummary>,
    pub performance: Vec<DeltaSummary>,
    pub failures: Vec<FailureRecord>,
    pub warnings: Vec<String>,
}

fn pct(count: usize, total: usize) -> f64 {
    if total == 0 {
        0.0
    } else {
        100.0 * count as f64 / total as f64
    }
}

fn flag_summaries(
    d: &Dataset,
    collection: &SubsetCollection,
    config: &ExperimentConfig,
    failures: &mut Vec<FailureRecord>,
) -> Vec<FlagSummary> {
    let trains: Vec<Option<Dataset>> = (0..collection.sample_count)
        .map(|j| sample_split(d, config.base_seed, j).ok().map(|(_, s)| s.train))
        .collect();
    collection
        .selectors
        .iter()
        .map(|&selector| {
            let mut counts = [0usize; 4];
            let mut used = 0;
            for (j, train) in trains.iter().enumerate() {
                let (Some(train), Some(CellOutcome::Selected(subset))) = (train, collection.get(selector, j)) else {
                    continue;
                };
                match correlation_flags_at(subset, train, config.sp_t, config.vif_t) {
                    Ok(f) => {
                        used += 1;
                        for (c, hit) in counts.iter_mut().zip([
                            f.has_collinearity,
                            f.has_multicollinearity,
                            f.collinearity_at_or_above,
                            f.multicollinearity_at_or_above,
                        ]) {
                            *c += hit as usize;
                        }
                    }
                    Err(e) => failures.push(FailureRecord {
                        sample: j,
                        selector: Some(selector),
                        classifier: None,
                        stage: "flags".into(),
                        message: e.to_string(),
                    }),
                }
            }
            FlagSummary {
                selector,
                samples_used: used,
                collinearity_pct: pct(counts[0], used),
                multicollinearity_pct: pct(counts[1], used),
                collinearity_at_or_above_pct: pct(counts[2], used),
                multicollinearity_at_or_above_pct: pct(counts[3], used),
            }
        })
        .collect()
}

fn delta_summaries(config: &ExperimentConfig, deltas: &[PerformanceDelta]) -> Vec<DeltaSummary> {
    let mut groups: BTreeMap<(usize, ClassifierKind, Measure), Vec<f64>> = BTreeMap::new();
    for d in deltas {
        let pos = config.selectors.iter().position(|&s| s == d.selector).unwrap_or(usize::MAX);
        groups.entry((pos, d.classifier, d.measure)).or_default().push(d.delta_pts);
    }
    groups
        .into_iter()
        .filter(|((pos, _, _), _)| *pos < config.selectors.len())
        .map(|((pos, classifier, measure), mut v)| {
            v.sort_by(f64::total_cmp);
            DeltaSummary {
                selector: config.selectors[pos],
                classifier,
                measure,
                samples_used: v.len(),
                median: quantile(&v, 0.5),
                q1: quantile(&v, 0.25),
                q3: quantile(&v, 0.75),
            }
        })
        .collect()
}

/// Runs the whole experiment in memory. Everything but `generated_at` is a
/// pure function of the config and the dataset.
pub fn build_report(config: &ExperimentConfig, dataset_id: &str, d: &Dataset) -> Result<ExperimentReport> {
    config.validate()?;
    let sel_config = config.selector_config()?;
    let collection = run_selection_grid(d, dataset_id, &config.selectors, config.bootstrap_count, config.base_seed, &sel_config);
    let mut failures = Vec::new();
    let mut warnings = Vec::new();

    for ((selector, sample), cell) in &collection.cells {
        if let CellOutcome::Failed { error } = cell {
            failures.push(FailureRecord {
                sample: *sample,
                selector: Some(*selector),
                classifier: None,
                stage: "select".into(),
                message: error.clone(),
            });
        }
    }

    let consistency_across_samples: Vec<SelectorConsistency> = config
        .selectors
        .iter()
        .map(|&s| {
            let subsets = collection.subsets_of(s);
            let (percentage, intersection, union) = consistency(&subsets);
            if union == 0 && !subsets.is_empty() {
                warnings.push(format!("{s}: every subset is empty; consistency reported as 0"));
            }
            SelectorConsistency {
                selector: s,
                samples_used: subsets.len(),
                percentage,
                intersection,
                union,
            }
        })
        .collect();

    let baselines: Vec<SelectorId> = config.selectors.iter().copied().filter(|&s| s != SelectorId::AutoSpearman).collect();
    let consistency_across_selectors: Vec<SampleConsistency> = if baselines.len() >= 2 {
        (0..collection.sample_count)
            .filter_map(|j| {
                let subsets: Option<Vec<_>> =
                    baselines.iter().map(|&s| collection.get(s, j).and_then(CellOutcome::subset).cloned()).collect();
                let subsets = subsets?;
                let (percentage, intersection, union) = consistency(&subsets);
                Some(SampleConsistency {
                    sample: j,
                    percentage,
                    intersection,
                    union,
                })
            })
            .collect()
    } else {
        Vec::new()
    };

    let correlation_flags = flag_summaries(d, &collection, config, &mut failures);
    let perf = performance_deltas(d, &collection, &config.classifiers, config.base_seed);
    failures.extend(perf.failures.iter().cloned());
    let performance = delta_summaries(config, &perf.deltas);

    let mut subsets = BTreeMap::new();
    for &s in &config.selectors {
        let per_sample = (0..collection.sample_count)
            .map(|j| collection.get(s, j).and_then(CellOutcome::subset).map(|m| m.names().to_vec()))
            .collect();
        subsets.insert(s.abbreviation().to_string(), per_sample);
    }

    if let Some(path) = &config.csv_output {
        write_atomic(path, delta_csv(&perf.deltas)?.as_bytes())?;
    }

    Ok(ExperimentReport {
        schema_version: SCHEMA_VERSION,
        generated_at: timestamp(),
        config: config.clone(),
        dataset_id: dataset_id.to_string(),
        dataset_summary: summarize(d),
        rules: SelectionRules {
            ranking_cutoff: sel_config.ranking_cutoff.to_string(),
            elimination_comparison: ">=".into(),
            flag_comparison: ">".into(),
            cross_selector_scope: "configured selectors other than AutoSpearman".into(),
        },
        base_seed: config.base_seed,
        sample_seeds: collection.sample_seeds.clone(),
        subsets,
        consistency_across_samples,
        consistency_across_selectors,
        correlation_flags,
        performance,
        failures,
        warnings,
    })
}

fn timestamp() -> String {
    let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    format!("{secs}")
}

fn delta_csv(deltas: &[PerformanceDelta]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["sample", "selector", "classifier", "measure", "p_selected", "p_all", "delta_pts"])?;
    for d in deltas {
        w.write_record([
            d.sample.to_string(),
            d.selector.to_string(),
            d.classifier.to_string(),
            d.measure.to_string(),
            d.p_selected.to_string(),
            d.p_all.to_string(),
            d.delta_pts.to_string(),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| Error::InvalidParameter(e.to_string()))?;
    Ok(String::from_utf8_lossy(&bytes).into_owned())
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| Error::io(path, e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}

pub fn write_report(report: &ExperimentReport, path: impl AsRef<Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(report)?;
    write_atomic(path.as_ref(), text.as_bytes())
}

/// The report as JSON without `generated_at`, for comparing runs.
pub fn strip_timestamp(mut report_json: serde_json::Value) -> serde_json::Value {
    if let Some(obj) = report_json.as_object_mut() {
        obj.remove("generated_at");
    }
    report_json
}

/// Loads the dataset, builds the report and writes it to `config.output`.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let (id, d) = config.load_dataset()?;
    let report = build_report(config, &id, &d)?;
    write_report(&report, &config.output)?;
    Ok(report)
}
