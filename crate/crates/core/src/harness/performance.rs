use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classifiers::{ClassifierKind, FittedClassifier};
use crate::data::{BootstrapSplit, Dataset, MetricSubset};
use crate::error::Result;
use crate::evaluation::{evaluate, DEFAULT_THRESHOLD};
use crate::harness::grid::{sample_split, CellOutcome, SubsetCollection};
use crate::seed;
use crate::selectors::SelectorId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Measure {
    Auc,
    F,
    Mcc,
}

impl Measure {
    pub const ALL: [Measure; 3] = [Measure::Auc, Measure::F, Measure::Mcc];

    pub fn as_str(self) -> &'static str {
        match self {
            Measure::Auc => "auc",
            Measure::F => "f",
            Measure::Mcc => "mcc",
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Selected-subset model minus all-metrics model on one sample, in
/// percentage points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerformanceDelta {
    pub selector: SelectorId,
    pub classifier: ClassifierKind,
    pub measure: Measure,
    pub sample: usize,
    pub p_selected: f64,
    pub p_all: f64,
    pub delta_pts: f64,
}

/// A cell that produced no result, and why.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailureRecord {
    pub sample: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub selector: Option<SelectorId>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classifier: Option<ClassifierKind>,
    pub stage: String,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct PerformanceGrid {
    pub deltas: Vec<PerformanceDelta>,
    pub failures: Vec<FailureRecord>,
}

/// Seed for a model fitted on `sample`. It does not depend on the subset, so
/// a subset equal to all metrics reproduces the baseline model exactly.
fn model_seed(base_seed: u64, sample: usize, kind: ClassifierKind) -> u64 {
    let k = ClassifierKind::ALL.iter().position(|&c| c == kind).unwrap_or(0) as u64;
    seed::derive(base_seed, &[sample as u64, u64::MAX - k])
}

fn in_column_order(d: &Dataset, subset: &MetricSubset) -> Result<MetricSubset> {
    let mut idx = d.indices_of(subset)?;
    idx.sort_unstable();
    Ok(MetricSubset::from_indices(d, &idx))
}

type Scores = (Option<f64>, f64, f64);

fn fit_and_score(kind: ClassifierKind, split: &BootstrapSplit, subset: &MetricSubset, seed: u64) -> Result<Scores> {
    let ordered = in_column_order(&split.train, subset)?;
    let model = FittedClassifier::fit(kind, &split.train, &ordered, seed)?;
    let scores = model.predict_dataset(&split.test)?;
    evaluate(&scores, split.test.outcome(), DEFAULT_THRESHOLD)
}

fn measure_of(s: &Scores, m: Measure) -> Option<f64> {
    match m {
        Measure::Auc => s.0,
        Measure::F => Some(s.1),
        Measure::Mcc => Some(s.2),
    }
}

/// Deltas for every selector's subset on one sample. Selected and baseline
/// models share the training rows, the test rows and the model seed.
pub fn performance_for_sample(
    split: &BootstrapSplit,
    sample: usize,
    subsets: &[(SelectorId, MetricSubset)],
    classifiers: &[ClassifierKind],
    base_seed: u64,
) -> PerformanceGrid {
    let mut out = PerformanceGrid::default();
    for &kind in classifiers {
        let ms = model_seed(base_seed, sample, kind);
        let baseline = match fit_and_score(kind, split, &split.train.all_metrics(), ms) {
            Ok(b) => b,
            Err(e) => {
                out.failures.push(FailureRecord {
                    sample,
                    selector: None,
                    classifier: Some(kind),
                    stage: "baseline".into(),
                    message: e.to_string(),
                });
                continue;
            }
        };
        if baseline.0.is_none() {
            out.failures.push(FailureRecord {
                sample,
                selector: None,
                classifier: Some(kind),
                stage: "auc".into(),
                message: "test set holds a single class; AUC skipped".into(),
            });
        }
        for (selector, subset) in subsets {
            let selected = match fit_and_score(kind, split, subset, ms) {
                Ok(s) => s,
                Err(e) => {
                    out.failures.push(FailureRecord {
                        sample,
                        selector: Some(*selector),
                        classifier: Some(kind),
                        stage: "fit".into(),
                        message: e.to_string(),
                    });
                    continue;
                }
            };
            for m in Measure::ALL {
                if let (Some(p_selected), Some(p_all)) = (measure_of(&selected, m), measure_of(&baseline, m)) {
                    out.deltas.push(PerformanceDelta {
                        selector: *selector,
                        classifier: kind,
                        measure: m,
                        sample,
                        p_selected,
                        p_all,
                        delta_pts: 100.0 * (p_selected - p_all),
                    });
                }
            }
        }
    }
    out
}

/// Performance deltas over every sample of a selection run. The splits are
/// redrawn from the same seeds the selection run used.
pub fn performance_deltas(
    d: &Dataset,
    collection: &SubsetCollection,
    classifiers: &[ClassifierKind],
    base_seed: u64,
) -> PerformanceGrid {
    let per_sample: Vec<PerformanceGrid> = (0..collection.sample_count)
        .into_par_iter()
        .map(|j| {
            let split = match sample_split(d, base_seed, j) {
                Ok((_, split)) => split,
                Err(e) => {
                    return PerformanceGrid {
                        deltas: Vec::new(),
                        failures: vec![FailureRecord {
                            sample: j,
                            selector: None,
                            classifier: None,
                            stage: "bootstrap".into(),
                            message: e.to_string(),
                        }],
                    }
                }
            };
            let subsets: Vec<(SelectorId, MetricSubset)> = collection
                .selectors
                .iter()
                .filter_map(|&s| match collection.get(s, j) {
                    Some(CellOutcome::Selected(sub)) => Some((s, sub.clone())),
                    _ => None,
                })
                .collect();
            performance_for_sample(&split, j, &subsets, classifiers, base_seed)
        })
        .collect();
    let mut out = PerformanceGrid::default();
    for g in per_sample {
        out.deltas.extend(g.deltas);
        out.failures.extend(g.failures);
    }
    out
}
