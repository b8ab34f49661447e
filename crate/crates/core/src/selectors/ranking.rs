use serde::{Deserialize, Serialize};

use crate::data::{Dataset, MetricSubset};
use crate::error::Result;
use crate::selectors::{require_both_classes, RankingCutoff, SelectorConfig};
use crate::stats::{chi_squared, discretize_capped, information_gain};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RankingScore {
    InformationGain,
    ChiSquared,
}

/// Per-metric score after discretising each column with `bins` bins.
pub fn ranking_scores(train: &Dataset, score: RankingScore, bins: usize) -> Result<Vec<f64>> {
    train
        .columns()
        .iter()
        .map(|c| {
            let col = discretize_capped(c, bins);
            match score {
                RankingScore::InformationGain => information_gain(&col, train.outcome()),
                RankingScore::ChiSquared => chi_squared(&col, train.outcome()),
            }
        })
        .collect()
}

fn select_ranked(train: &Dataset, score: RankingScore, config: &SelectorConfig) -> Result<MetricSubset> {
    require_both_classes(train)?;
    let scores = ranking_scores(train, score, config.bins)?;
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    let kept: Vec<usize> = match config.ranking_cutoff {
        RankingCutoff::Positive => order.into_iter().filter(|&j| scores[j] > 0.0).collect(),
        RankingCutoff::TopK(k) => order.into_iter().take(k).collect(),
    };
    Ok(MetricSubset::from_indices(train, &kept))
}

/// Information-gain ranking filter; output ordered by descending score.
pub fn select_ig(train: &Dataset, config: &SelectorConfig) -> Result<MetricSubset> {
    select_ranked(train, RankingScore::InformationGain, config)
}

/// χ² ranking filter; output ordered by descending score.
pub fn select_chisq(train: &Dataset, config: &SelectorConfig) -> Result<MetricSubset> {
    select_ranked(train, RankingScore::ChiSquared, config)
}
