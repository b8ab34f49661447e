use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::classifiers::{fit_logistic, DEFAULT_MAX_ITER, DEFAULT_TOL};
use crate::data::{Dataset, MetricSubset};
use crate::error::Result;
use crate::selectors::{require_both_classes, SelectorConfig};
use crate::stats::aic;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    Forward,
    Backward,
    Both,
}

struct AicCache<'a> {
    train: &'a Dataset,
    memo: HashMap<Vec<usize>, f64>,
}

impl AicCache<'_> {
    fn get(&mut self, subset: &[usize]) -> Result<f64> {
        if let Some(&v) = self.memo.get(subset) {
            return Ok(v);
        }
        let names = MetricSubset::from_indices(self.train, subset);
        let m = fit_logistic(self.train, &names, DEFAULT_MAX_ITER, DEFAULT_TOL)?;
        let v = aic(m.log_likelihood, subset.len() + 1);
        self.memo.insert(subset.to_vec(), v);
        Ok(v)
    }
}

/// AIC of the logistic model on `subset` (k = |subset| + 1).
pub fn stepwise_aic(train: &Dataset, subset: &MetricSubset) -> Result<f64> {
    let m = fit_logistic(train, subset, DEFAULT_MAX_ITER, DEFAULT_TOL)?;
    Ok(aic(m.log_likelihood, subset.len() + 1))
}

/// Greedy AIC stepwise logistic regression.
///
/// Forward and both-direction searches start from the intercept-only model,
/// backward from the full model. Each step takes the single move with the
/// lowest AIC if it is strictly lower than the current AIC. Candidate moves
/// are scanned additions first, then drops, each in column order; the first
/// minimum wins.
pub fn select_stepwise(train: &Dataset, direction: Direction, config: &SelectorConfig) -> Result<MetricSubset> {
    require_both_classes(train)?;
    let p = train.n_metrics();
    let max_steps = config.stepwise_max_steps.unwrap_or(2 * p + 1);
    let mut cache = AicCache {
        train,
        memo: HashMap::new(),
    };
    let mut current: Vec<usize> = match direction {
        Direction::Backward => (0..p).collect(),
        Direction::Forward | Direction::Both => Vec::new(),
    };
    let mut current_aic = cache.get(&current)?;

    for _ in 0..max_steps {
        let mut moves: Vec<Vec<usize>> = Vec::new();
        if direction != Direction::Backward {
            for j in (0..p).filter(|j| !current.contains(j)) {
                let mut next = current.clone();
                next.push(j);
                next.sort_unstable();
                moves.push(next);
            }
        }
        if direction != Direction::Forward {
            for &j in &current {
                moves.push(current.iter().copied().filter(|&k| k != j).collect());
            }
        }
        let mut best: Option<(Vec<usize>, f64)> = None;
        for m in moves {
            let a = cache.get(&m)?;
            if best.as_ref().map_or(true, |(_, b)| a < *b) {
                best = Some((m, a));
            }
        }
        match best {
            Some((next, a)) if a < current_aic => {
                current = next;
                current_aic = a;
            }
            _ => break,
        }
    }
    Ok(MetricSubset::from_indices(train, &current))
}
