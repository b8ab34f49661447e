//! Bagged classification trees with Gini splits and vote-fraction
//! probabilities.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::data::{Dataset, MetricSubset};
use crate::error::{Error, Result};
use crate::seed;

pub const DEFAULT_NTREE: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Node {
    Leaf {
        defective: bool,
    },
    Split {
        /// Index into the forest's `metric_names`.
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
}

/// A single tree; node 0 is the root. Rows with `value <= threshold` go left.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Tree {
    pub nodes: Vec<Node>,
    /// Training rows drawn for this tree (with repeats).
    #[serde(skip)]
    pub in_bag: Vec<usize>,
}

impl Tree {
    pub fn vote(&self, row: &[f64]) -> bool {
        let mut at = 0;
        loop {
            match &self.nodes[at] {
                Node::Leaf { defective } => return *defective,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => at = if row[*feature] <= *threshold { *left } else { *right },
            }
        }
    }

    pub fn depth(&self) -> usize {
        fn walk(nodes: &[Node], at: usize) -> usize {
            match &nodes[at] {
                Node::Leaf { .. } => 0,
                Node::Split { left, right, .. } => 1 + walk(nodes, *left).max(walk(nodes, *right)),
            }
        }
        walk(&self.nodes, 0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ForestModel {
    pub metric_names: Vec<String>,
    pub trees: Vec<Tree>,
    pub ntree: usize,
    pub mtry: usize,
    pub seed: u64,
    /// Gini impurity decrease per metric, summed over all trees and weighted
    /// by node size.
    pub impurity_decrease: Vec<f64>,
}

fn gini(pos: usize, total: usize) -> f64 {
    if total == 0 {
        return 0.0;
    }
    let p = pos as f64 / total as f64;
    2.0 * p * (1.0 - p)
}

struct SplitChoice {
    feature: usize,
    threshold: f64,
    /// `n · G(parent) − n_l · G(left) − n_r · G(right)`
    decrease: f64,
}

fn best_split_on(cols: &[&[f64]], y: &[bool], rows: &[usize], feature: usize, parent: f64) -> Option<SplitChoice> {
    let col = cols[feature];
    let mut sorted: Vec<usize> = rows.to_vec();
    sorted.sort_by(|&a, &b| col[a].total_cmp(&col[b]));
    let n = sorted.len();
    let total_pos = sorted.iter().filter(|&&i| y[i]).count();
    let mut left_pos = 0;
    let mut best: Option<SplitChoice> = None;
    for s in 0..n - 1 {
        if y[sorted[s]] {
            left_pos += 1;
        }
        let lo = col[sorted[s]];
        let hi = col[sorted[s + 1]];
        if lo == hi {
            continue;
        }
        let nl = s + 1;
        let nr = n - nl;
        let children = nl as f64 * gini(left_pos, nl) + nr as f64 * gini(total_pos - left_pos, nr);
        let decrease = parent - children;
        if best.as_ref().map_or(true, |b| decrease > b.decrease) {
            let mut threshold = lo + (hi - lo) / 2.0;
            if threshold >= hi {
                threshold = lo;
            }
            best = Some(SplitChoice {
                feature,
                threshold,
                decrease,
            });
        }
    }
    best
}

fn grow_tree(cols: &[&[f64]], y: &[bool], mtry: usize, rng: &mut ChaCha8Rng) -> (Tree, Vec<f64>) {
    let n = y.len();
    let p = cols.len();
    let mut importance = vec![0.0; p];
    let in_bag: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();

    let mut nodes = vec![Node::Leaf { defective: false }];
    let mut stack = vec![(0usize, in_bag.clone())];
    let mut features: Vec<usize> = (0..p).collect();
    while let Some((slot, rows)) = stack.pop() {
        let pos = rows.iter().filter(|&&i| y[i]).count();
        let size = rows.len();
        let leaf = |rng: &mut ChaCha8Rng| {
            let defective = match (2 * pos).cmp(&size) {
                std::cmp::Ordering::Greater => true,
                std::cmp::Ordering::Less => false,
                std::cmp::Ordering::Equal => rng.gen_bool(0.5),
            };
            Node::Leaf { defective }
        };
        if pos == 0 || pos == size || size <= 1 {
            nodes[slot] = leaf(rng);
            continue;
        }
        let parent = size as f64 * gini(pos, size);

        features.shuffle(rng);
        let mut best: Option<SplitChoice> = None;
        for (tried, &f) in features.iter().enumerate() {
            // Keep drawing past mtry only while no candidate is splittable.
            if tried >= mtry && best.is_some() {
                break;
            }
            if let Some(c) = best_split_on(cols, y, &rows, f, parent) {
                if best.as_ref().map_or(true, |b| c.decrease > b.decrease) {
                    best = Some(c);
                }
            }
        }
        let Some(split) = best else {
            nodes[slot] = leaf(rng);
            continue;
        };
        importance[split.feature] += split.decrease.max(0.0);
        let col = cols[split.feature];
        let (left_rows, right_rows): (Vec<usize>, Vec<usize>) =
            rows.iter().partition(|&&i| col[i] <= split.threshold);
        let left = nodes.len();
        nodes.push(Node::Leaf { defective: false });
        let right = nodes.len();
        nodes.push(Node::Leaf { defective: false });
        nodes[slot] = Node::Split {
            feature: split.feature,
            threshold: split.threshold,
            left,
            right,
        };
        stack.push((right, right_rows));
        stack.push((left, left_rows));
    }
    (Tree { nodes, in_bag }, importance)
}

/// Default number of candidate metrics per node: `floor(sqrt(p))`, at least 1.
pub fn default_mtry(p: usize) -> usize {
    ((p as f64).sqrt().floor() as usize).max(1)
}

/// Fits `ntree` trees, each on its own bootstrap of `d`'s rows. Tree `t`
/// draws from a generator seeded by `(seed, t)`, so the forest does not
/// depend on thread scheduling.
pub fn fit_random_forest(d: &Dataset, subset: &MetricSubset, ntree: usize, seed: u64) -> Result<ForestModel> {
    if subset.is_empty() {
        return Err(Error::InvalidParameter("random forest needs at least one metric".into()));
    }
    if ntree == 0 {
        return Err(Error::InvalidParameter("ntree must be >= 1".into()));
    }
    if !d.has_both_classes() {
        return Err(Error::DegenerateOutcome);
    }
    let idx = d.indices_of(subset)?;
    let cols: Vec<&[f64]> = idx.iter().map(|&j| d.column(j)).collect();
    let y = d.outcome();
    let mtry = default_mtry(cols.len());

    let grown: Vec<(Tree, Vec<f64>)> = (0..ntree)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed::derive(seed, &[t as u64]));
            grow_tree(&cols, y, mtry, &mut rng)
        })
        .collect();

    let mut impurity_decrease = vec![0.0; cols.len()];
    let mut trees = Vec::with_capacity(ntree);
    for (tree, imp) in grown {
        for (acc, v) in impurity_decrease.iter_mut().zip(imp) {
            *acc += v;
        }
        trees.push(tree);
    }
    Ok(ForestModel {
        metric_names: subset.names().to_vec(),
        trees,
        ntree,
        mtry,
        seed,
        impurity_decrease,
    })
}

/// Fraction of trees voting defective.
pub fn predict_forest(m: &ForestModel, row: &[f64]) -> Result<f64> {
    if row.len() != m.metric_names.len() {
        return Err(Error::DimensionMismatch {
            expected: m.metric_names.len(),
            got: row.len(),
        });
    }
    let votes = m.trees.iter().filter(|t| t.vote(row)).count();
    Ok(votes as f64 / m.trees.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn leaf(defective: bool) -> Tree {
        Tree {
            nodes: vec![Node::Leaf { defective }],
            in_bag: vec![],
        }
    }

    fn forest_of(trees: Vec<Tree>) -> ForestModel {
        ForestModel {
            metric_names: vec!["a".into()],
            ntree: trees.len(),
            trees,
            mtry: 1,
            seed: 0,
            impurity_decrease: vec![0.0],
        }
    }

    #[test]
    fn vote_fractions() {
        assert_eq!(predict_forest(&forest_of(vec![leaf(true); 3]), &[0.0]).unwrap(), 1.0);
        let f = forest_of(vec![leaf(true), leaf(true), leaf(false), leaf(true)]);
        assert_eq!(predict_forest(&f, &[0.0]).unwrap(), 0.75);
        let f = forest_of(vec![leaf(true), leaf(false)]);
        assert_eq!(predict_forest(&f, &[0.0]).unwrap(), 0.5);
        assert!(predict_forest(&f, &[0.0, 1.0]).is_err());
    }

    #[test]
    fn single_tree_separates_four_points() {
        let d = Dataset::from_columns(
            vec!["x".into()],
            vec![vec![1.0, 2.0, 3.0, 4.0]],
            vec![false, false, true, true],
        )
        .unwrap();
        for seed in 0..20 {
            let f = fit_random_forest(&d, &d.all_metrics(), 1, seed).unwrap();
            let tree = &f.trees[0];
            let bag = &tree.in_bag;
            let both = bag.iter().any(|&i| d.outcome()[i]) && bag.iter().any(|&i| !d.outcome()[i]);
            if both {
                // one split, placed between the largest clean and smallest
                // defective in-bag value
                assert_eq!(tree.depth(), 1);
                let max_clean = bag.iter().filter(|&&i| i < 2).map(|&i| d.column(0)[i]).fold(f64::MIN, f64::max);
                let min_def = bag.iter().filter(|&&i| i >= 2).map(|&i| d.column(0)[i]).fold(f64::MAX, f64::min);
                let Node::Split { threshold, .. } = tree.nodes[0] else { panic!("expected split") };
                assert!(threshold >= max_clean && threshold < min_def);
            }
            for &i in bag {
                let p = predict_forest(&f, &[d.column(0)[i]]).unwrap();
                assert_eq!(p == 1.0, d.outcome()[i]);
            }
        }
    }

    #[test]
    fn mtry_default() {
        assert_eq!(default_mtry(1), 1);
        assert_eq!(default_mtry(10), 3);
        assert_eq!(default_mtry(16), 4);
    }
}
