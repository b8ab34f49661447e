use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::{bootstrap_sample, BootstrapSplit, Dataset, MetricSubset};
use crate::error::{Error, Result};
use crate::seed;
use crate::selectors::{select, SelectorConfig, SelectorId};

const MAX_SPLIT_RETRIES: u64 = 32;

/// Seed of bootstrap sample `sample` (before any retry offset).
pub fn bootstrap_seed(base_seed: u64, sample: usize) -> u64 {
    seed::derive(base_seed, &[sample as u64])
}

/// Seed handed to `selector` on sample `sample`. Keyed by the selector's
/// fixed position so adding or removing selectors leaves others unchanged.
pub fn selector_seed(base_seed: u64, sample: usize, selector: SelectorId) -> u64 {
    let index = SelectorId::ALL.iter().position(|&s| s == selector).unwrap_or(0);
    seed::derive(base_seed, &[sample as u64, 1 + index as u64])
}

/// Bootstrap split for `sample`; an empty test set is retried with an odd
/// seed offset. Returns the seed actually used.
pub fn sample_split(d: &Dataset, base_seed: u64, sample: usize) -> Result<(u64, BootstrapSplit)> {
    let first = bootstrap_seed(base_seed, sample);
    for k in 0..MAX_SPLIT_RETRIES {
        let s = first.wrapping_add(k.wrapping_mul(seed::RETRY_OFFSET));
        match bootstrap_sample(d, s) {
            Ok(split) => return Ok((s, split)),
            Err(Error::EmptyTestSet) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::EmptyTestSet)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CellOutcome {
    Selected(MetricSubset),
    Failed { error: String },
}

impl CellOutcome {
    pub fn subset(&self) -> Option<&MetricSubset> {
        match self {
            CellOutcome::Selected(s) => Some(s),
            CellOutcome::Failed { .. } => None,
        }
    }
}

/// Every (selector, sample) cell of a selection run.
#[derive(Debug, Clone, PartialEq)]
pub struct SubsetCollection {
    pub dataset_id: String,
    pub sample_count: usize,
    pub selectors: Vec<SelectorId>,
    /// Seed used for each sample's split, `None` if no split could be drawn.
    pub sample_seeds: Vec<Option<u64>>,
    pub cells: BTreeMap<(SelectorId, usize), CellOutcome>,
}

impl SubsetCollection {
    pub fn get(&self, selector: SelectorId, sample: usize) -> Option<&CellOutcome> {
        self.cells.get(&(selector, sample))
    }

    /// Successful subsets of one selector, in sample order.
    pub fn subsets_of(&self, selector: SelectorId) -> Vec<MetricSubset> {
        (0..self.sample_count)
            .filter_map(|j| self.get(selector, j).and_then(CellOutcome::subset).cloned())
            .collect()
    }
}

/// Applies each selector to the training part of `b` bootstrap samples.
/// Cell failures are recorded, never fatal.
pub fn run_selection_grid(
    d: &Dataset,
    dataset_id: &str,
    selectors: &[SelectorId],
    b: usize,
    base_seed: u64,
    config: &SelectorConfig,
) -> SubsetCollection {
    let splits: Vec<Result<(u64, BootstrapSplit)>> = (0..b).into_par_iter().map(|j| sample_split(d, base_seed, j)).collect();
    let jobs: Vec<(usize, SelectorId)> = (0..b).flat_map(|j| selectors.iter().map(move |&s| (j, s))).collect();
    let outcomes: Vec<((SelectorId, usize), CellOutcome)> = jobs
        .par_iter()
        .map(|&(j, id)| {
            let outcome = match &splits[j] {
                Err(e) => CellOutcome::Failed {
                    error: format!("bootstrap: {e}"),
                },
                Ok((_, split)) => match select(id, &split.train, config, selector_seed(base_seed, j, id)) {
                    Ok(subset) => CellOutcome::Selected(subset),
                    Err(e) => CellOutcome::Failed { error: e.to_string() },
                },
            };
            ((id, j), outcome)
        })
        .collect();
    SubsetCollection {
        dataset_id: dataset_id.to_string(),
        sample_count: b,
        selectors: selectors.to_vec(),
        sample_seeds: splits.iter().map(|s| s.as_ref().ok().map(|(seed, _)| *seed)).collect(),
        cells: outcomes.into_iter().collect(),
    }
}
