use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classifiers::{
    fit_logistic, fit_random_forest, forest_importance, logistic_importance, FittedClassifier, ImportanceScores,
    DEFAULT_MAX_ITER, DEFAULT_TOL,
};
use crate::data::{bootstrap_sample, BootstrapSplit, Dataset, MetricSubset};
use crate::error::{Error, Result};
use crate::evaluation::auc;
use crate::seed;
use crate::selectors::{require_both_classes, SelectorConfig};

const MAX_SPLIT_RETRIES: u64 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RfeBackend {
    Logistic,
    Forest,
}

/// Every candidate subset RFE scored, with its internal mean AUC (`None`
/// when no resample produced a usable split), and the chosen one.
#[derive(Debug, Clone)]
pub struct RfeOutcome {
    pub candidates: Vec<(MetricSubset, Option<f64>)>,
    pub selected: MetricSubset,
}

fn fit_backend(
    backend: RfeBackend,
    d: &Dataset,
    subset: &MetricSubset,
    trees: usize,
    seed: u64,
) -> Result<FittedClassifier> {
    match backend {
        RfeBackend::Logistic => fit_logistic(d, subset, DEFAULT_MAX_ITER, DEFAULT_TOL).map(FittedClassifier::Logistic),
        RfeBackend::Forest => fit_random_forest(d, subset, trees, seed).map(FittedClassifier::Forest),
    }
}

fn backend_importance(model: &FittedClassifier, d: &Dataset) -> Result<ImportanceScores> {
    match model {
        FittedClassifier::Logistic(m) => logistic_importance(m, d),
        FittedClassifier::Forest(m) => Ok(forest_importance(m)),
    }
}

/// Internal resamples, shared by every candidate size so comparisons are
/// paired. Splits lacking a class on either side are skipped.
fn internal_splits(train: &Dataset, resamples: usize, seed: u64) -> Vec<(u64, BootstrapSplit)> {
    (0..resamples as u64)
        .filter_map(|r| {
            let base = seed::derive(seed, &[r]);
            (0..MAX_SPLIT_RETRIES)
                .map(|k| base.wrapping_add(k.wrapping_mul(seed::RETRY_OFFSET)))
                .find_map(|s| bootstrap_sample(train, s).ok())
                .filter(|sp| sp.train.has_both_classes() && sp.test.has_both_classes())
                .map(|sp| (r, sp))
        })
        .collect()
}

fn mean_auc(
    backend: RfeBackend,
    splits: &[(u64, BootstrapSplit)],
    subset: &MetricSubset,
    trees: usize,
    seed: u64,
) -> Result<Option<f64>> {
    let aucs: Vec<f64> = splits
        .par_iter()
        .map(|(r, sp)| -> Result<f64> {
            let model_seed = seed::derive(seed, &[*r, subset.len() as u64, 1]);
            let model = if subset.is_empty() {
                FittedClassifier::fit(crate::classifiers::ClassifierKind::Logistic, &sp.train, subset, model_seed)?
            } else {
                fit_backend(backend, &sp.train, subset, trees, model_seed)?
            };
            auc(&model.predict_dataset(&sp.test)?, sp.test.outcome())
        })
        .collect::<Result<_>>()?;
    if aucs.is_empty() {
        return Ok(None);
    }
    Ok(Some(aucs.iter().sum::<f64>() / aucs.len() as f64))
}

/// Recursive feature elimination with AUC as the subset criterion.
///
/// Starting from every metric, the backend is fitted on the training sample
/// and the least important metric dropped, down to one metric. Each
/// candidate size is scored by the mean AUC over internal out-of-sample
/// bootstraps of the training sample; the best mean wins, the smaller subset
/// on ties.
pub fn select_rfe_detailed(train: &Dataset, backend: RfeBackend, config: &SelectorConfig, seed: u64) -> Result<RfeOutcome> {
    require_both_classes(train)?;
    let p = train.n_metrics();
    let sizes: Vec<usize> = match &config.rfe_sizes {
        Some(s) => s.iter().copied().filter(|&k| k <= p).chain(std::iter::once(p)).collect(),
        None => (1..=p).collect(),
    };
    let splits = internal_splits(train, config.rfe_resamples, seed);

    let mut current: Vec<usize> = (0..p).collect();
    let mut candidates = Vec::new();
    loop {
        let subset = MetricSubset::from_indices(train, &current);
        if sizes.contains(&current.len()) {
            let score = mean_auc(backend, &splits, &subset, config.rfe_forest_trees, seed)?;
            candidates.push((subset.clone(), score));
        }
        if current.len() == 1 {
            break;
        }
        let model_seed = seed::derive(seed, &[u64::MAX, current.len() as u64]);
        let model = fit_backend(backend, train, &subset, config.rfe_forest_trees, model_seed)?;
        let imp = backend_importance(&model, train)?;
        // lowest importance goes; ties drop the later column
        let (drop_pos, _) = imp
            .entries
            .iter()
            .enumerate()
            .min_by(|(ia, (_, a)), (ib, (_, b))| a.total_cmp(b).then(ib.cmp(ia)))
            .ok_or_else(|| Error::InvalidParameter("empty importance".into()))?;
        current.remove(drop_pos);
    }

    let selected = candidates
        .iter()
        .filter_map(|(s, a)| a.map(|a| (s, a)))
        .max_by(|(sa, a), (sb, b)| a.total_cmp(b).then(sb.len().cmp(&sa.len())))
        .map(|(s, _)| s.clone())
        .unwrap_or_else(|| train.all_metrics());
    let mut ordered: Vec<usize> = train.indices_of(&selected)?;
    ordered.sort_unstable();
    Ok(RfeOutcome {
        candidates,
        selected: MetricSubset::from_indices(train, &ordered),
    })
}

pub fn select_rfe(train: &Dataset, backend: RfeBackend, config: &SelectorConfig, seed: u64) -> Result<MetricSubset> {
    select_rfe_detailed(train, backend, config, seed).map(|o| o.selected)
}
