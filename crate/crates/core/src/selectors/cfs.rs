use std::collections::HashSet;

use crate::data::{Dataset, MetricSubset};
use crate::error::Result;
use crate::selectors::{require_both_classes, SelectorConfig};
use crate::stats::{rank_with_ties, pearson, spearman_matrix};

/// Correlation-based merit of a subset:
/// `k · r_cf / sqrt(k + k(k−1) · r_ff)` with `r_cf` the mean metric–class
/// |ρ| and `r_ff` the mean pairwise metric–metric |ρ|. The empty set scores 0.
pub fn cfs_merit(subset: &[usize], class_corr: &[f64], feature_corr: &[Vec<f64>]) -> f64 {
    let k = subset.len();
    if k == 0 {
        return 0.0;
    }
    let r_cf = subset.iter().map(|&j| class_corr[j]).sum::<f64>() / k as f64;
    let mut pair_sum = 0.0;
    for (a, &i) in subset.iter().enumerate() {
        for &j in &subset[a + 1..] {
            pair_sum += feature_corr[i][j];
        }
    }
    let pairs = k * (k - 1) / 2;
    let r_ff = if pairs == 0 { 0.0 } else { pair_sum / pairs as f64 };
    let kf = k as f64;
    kf * r_cf / (kf + kf * (kf - 1.0) * r_ff).sqrt()
}

/// Result of the CFS best-first search, including every subset it scored.
#[derive(Debug, Clone)]
pub struct CfsSearch {
    pub best: Vec<usize>,
    pub best_merit: f64,
    pub visited: Vec<(Vec<usize>, f64)>,
}

/// Association inputs for the merit: |ρ(metric, outcome)| and |ρ| between
/// metrics.
pub(crate) fn cfs_inputs(train: &Dataset) -> (Vec<f64>, Vec<Vec<f64>>) {
    let y_ranks = rank_with_ties(&train.outcome_f64());
    let class_corr = train
        .columns()
        .iter()
        .map(|c| pearson(&rank_with_ties(c), &y_ranks).abs())
        .collect();
    let feature_corr = spearman_matrix(train)
        .rows()
        .iter()
        .map(|r| r.iter().map(|v| v.abs()).collect())
        .collect();
    (class_corr, feature_corr)
}

/// Best-first forward search from the empty set. Stops after `stall_limit`
/// consecutive expansions that fail to raise the best merit.
pub fn cfs_search(class_corr: &[f64], feature_corr: &[Vec<f64>], stall_limit: usize) -> CfsSearch {
    let p = class_corr.len();
    let mut visited_set: HashSet<Vec<usize>> = HashSet::new();
    let mut visited = vec![(Vec::new(), 0.0)];
    visited_set.insert(Vec::new());
    let mut open: Vec<(f64, Vec<usize>)> = vec![(0.0, Vec::new())];
    let mut best = (Vec::new(), 0.0);
    let mut stall = 0;

    while stall < stall_limit {
        // highest merit, then smaller, then lexicographically first
        let Some(pos) = (0..open.len()).max_by(|&a, &b| {
            open[a]
                .0
                .total_cmp(&open[b].0)
                .then(open[b].1.len().cmp(&open[a].1.len()))
                .then(open[b].1.cmp(&open[a].1))
        }) else {
            break;
        };
        let (_, node) = open.swap_remove(pos);
        let mut improved = false;
        for j in 0..p {
            if node.contains(&j) {
                continue;
            }
            let mut child = node.clone();
            child.push(j);
            child.sort_unstable();
            if !visited_set.insert(child.clone()) {
                continue;
            }
            let merit = cfs_merit(&child, class_corr, feature_corr);
            visited.push((child.clone(), merit));
            if merit > best.1 {
                best = (child.clone(), merit);
                improved = true;
            }
            open.push((merit, child));
        }
        if improved {
            stall = 0;
        } else {
            stall += 1;
        }
    }
    CfsSearch {
        best: best.0,
        best_merit: best.1,
        visited,
    }
}

pub fn select_cfs(train: &Dataset, config: &SelectorConfig) -> Result<MetricSubset> {
    require_both_classes(train)?;
    let (class_corr, feature_corr) = cfs_inputs(train);
    let search = cfs_search(&class_corr, &feature_corr, config.stall_limit);
    Ok(MetricSubset::from_indices(train, &search.best))
}
