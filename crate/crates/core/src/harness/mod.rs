//! Bootstrap experiments over selectors: subset consistency, residual
//! correlation in selected subsets, and performance impact against the
//! all-metrics baseline.

mod experiment;
mod grid;
mod performance;

pub use experiment::{
    build_report, load_config, run_experiment, strip_timestamp, write_report, DatasetSource, DeltaSummary,
    ExperimentConfig, ExperimentReport, FlagSummary, SampleConsistency, SelectorConsistency, DEFAULT_BOOTSTRAP_COUNT,
    DEFAULT_SEED, SCHEMA_VERSION,
};
pub use grid::{bootstrap_seed, run_selection_grid, sample_split, selector_seed, CellOutcome, SubsetCollection};
pub use performance::{
    performance_deltas, performance_for_sample, FailureRecord, Measure, PerformanceDelta, PerformanceGrid,
};

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::autospearman::{DEFAULT_SP_T, DEFAULT_VIF_T};
use crate::data::{Dataset, MetricSubset};
use crate::error::Result;
use crate::selectors::SelectorId;
use crate::stats::{spearman_matrix, vif_scores, VifScore};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConsistencyScope {
    AcrossSamples { selector: SelectorId },
    AcrossSelectors { sample: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyResult {
    pub scope: ConsistencyScope,
    /// 100 · |⋂| / |⋃|, or 0 when the union is empty.
    pub percentage: f64,
    pub intersection: usize,
    pub union: usize,
}

/// `(percentage, |⋂|, |⋃|)` over a family of subsets. An empty family or
/// an empty union gives 0.
pub fn consistency(subsets: &[MetricSubset]) -> (f64, usize, usize) {
    let Some(first) = subsets.first() else {
        return (0.0, 0, 0);
    };
    let mut inter: BTreeSet<&str> = first.iter().map(String::as_str).collect();
    let mut union: BTreeSet<&str> = BTreeSet::new();
    for s in subsets {
        let set: BTreeSet<&str> = s.iter().map(String::as_str).collect();
        inter = inter.intersection(&set).copied().collect();
        union.extend(set);
    }
    if union.is_empty() {
        return (0.0, 0, 0);
    }
    (100.0 * inter.len() as f64 / union.len() as f64, inter.len(), union.len())
}

/// Consistency of one selector's subsets over bootstrap samples.
pub fn consistency_across_samples(selector: SelectorId, subsets: &[MetricSubset]) -> ConsistencyResult {
    let (percentage, intersection, union) = consistency(subsets);
    ConsistencyResult {
        scope: ConsistencyScope::AcrossSamples { selector },
        percentage,
        intersection,
        union,
    }
}

/// Consistency of several selectors' subsets on one sample.
pub fn consistency_across_selectors(sample: usize, subsets_one_sample: &[MetricSubset]) -> ConsistencyResult {
    let (percentage, intersection, union) = consistency(subsets_one_sample);
    ConsistencyResult {
        scope: ConsistencyScope::AcrossSelectors { sample },
        percentage,
        intersection,
        union,
    }
}

/// Whether a subset still holds correlated metrics.
///
/// The `has_*` flags use strict `>` against the thresholds; the `*_at_or_above`
/// variants use `≥`, the comparison the elimination itself applies, so
/// boundary cases can be told apart.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationFlags {
    pub has_collinearity: bool,
    pub has_multicollinearity: bool,
    pub collinearity_at_or_above: bool,
    pub multicollinearity_at_or_above: bool,
    pub max_abs_spearman: f64,
    /// Largest VIF; `None` when unbounded.
    pub max_vif: Option<f64>,
}

/// Flags at the default thresholds (|ρ| > 0.7, VIF > 5).
pub fn correlation_flags(subset: &MetricSubset, train: &Dataset) -> Result<CorrelationFlags> {
    correlation_flags_at(subset, train, DEFAULT_SP_T, DEFAULT_VIF_T)
}

pub fn correlation_flags_at(subset: &MetricSubset, train: &Dataset, sp_t: f64, vif_t: f64) -> Result<CorrelationFlags> {
    train.indices_of(subset)?;
    if subset.len() < 2 {
        return Ok(CorrelationFlags {
            has_collinearity: false,
            has_multicollinearity: false,
            collinearity_at_or_above: false,
            multicollinearity_at_or_above: false,
            max_abs_spearman: 0.0,
            max_vif: Some(1.0),
        });
    }
    let proj = train.project(subset)?;
    let s = spearman_matrix(&proj);
    let mut max_rho = 0.0_f64;
    for i in 0..s.len() {
        for j in (i + 1)..s.len() {
            max_rho = max_rho.max(s.get(i, j).abs());
        }
    }
    let vifs = vif_scores(&proj, &proj.all_metrics())?;
    let max_vif = vifs
        .entries
        .iter()
        .map(|(_, v)| *v)
        .max_by(|a, b| a.total_cmp(b))
        .unwrap_or(VifScore::Finite(1.0));
    Ok(CorrelationFlags {
        has_collinearity: max_rho > sp_t,
        has_multicollinearity: max_vif.value() > vif_t,
        collinearity_at_or_above: max_rho >= sp_t,
        multicollinearity_at_or_above: max_vif.value() >= vif_t,
        max_abs_spearman: max_rho,
        max_vif: (!max_vif.is_unbounded()).then(|| max_vif.value()),
    })
}

/// Median and quartiles by linear interpolation between order statistics.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}
