use std::cmp::Ordering;
use std::collections::HashSet;

use crate::data::{Dataset, MetricSubset};
use crate::error::Result;
use crate::selectors::{require_both_classes, SelectorConfig};
use crate::stats::{discretize_capped, inconsistency_of_columns, DiscreteColumn};

const RATE_SLACK: f64 = 1e-9;

#[derive(Debug, Clone)]
struct Scored {
    subset: Vec<usize>,
    rate: f64,
    feasible: bool,
}

/// Search objective: feasible beats infeasible; among feasible, smaller
/// then lower rate; among infeasible, lower rate; then lexicographic.
fn objective(a: &Scored, b: &Scored) -> Ordering {
    match (a.feasible, b.feasible) {
        (true, false) => Ordering::Less,
        (false, true) => Ordering::Greater,
        (true, true) => a
            .subset
            .len()
            .cmp(&b.subset.len())
            .then(a.rate.total_cmp(&b.rate))
            .then(a.subset.cmp(&b.subset)),
        (false, false) => a
            .rate
            .total_cmp(&b.rate)
            .then(a.subset.len().cmp(&b.subset.len()))
            .then(a.subset.cmp(&b.subset)),
    }
}

/// Best-first search for the smallest subset whose inconsistency rate is
/// within 1e−9 of the rate of the full metric set.
pub fn select_consistency(train: &Dataset, config: &SelectorConfig) -> Result<MetricSubset> {
    require_both_classes(train)?;
    let p = train.n_metrics();
    let discrete: Vec<DiscreteColumn> = train.columns().iter().map(|c| discretize_capped(c, config.bins)).collect();
    let y = train.outcome();
    let rate_of = |s: &[usize]| {
        let cols: Vec<&DiscreteColumn> = s.iter().map(|&j| &discrete[j]).collect();
        inconsistency_of_columns(&cols, y)
    };
    let target = rate_of(&(0..p).collect::<Vec<_>>()) + RATE_SLACK;
    let score = |s: Vec<usize>| {
        let rate = rate_of(&s);
        Scored {
            feasible: rate <= target,
            subset: s,
            rate,
        }
    };

    let start = score(Vec::new());
    let mut best = start.clone();
    let mut seen: HashSet<Vec<usize>> = HashSet::from([Vec::new()]);
    let mut open = vec![start];
    let mut stall = 0;
    while stall < config.stall_limit {
        // lowest rate first, then smaller, then lexicographic
        let Some(pos) = (0..open.len()).min_by(|&a, &b| {
            open[a]
                .rate
                .total_cmp(&open[b].rate)
                .then(open[a].subset.len().cmp(&open[b].subset.len()))
                .then(open[a].subset.cmp(&open[b].subset))
        }) else {
            break;
        };
        let node = open.swap_remove(pos);
        let mut improved = false;
        for j in 0..p {
            if node.subset.contains(&j) {
                continue;
            }
            let mut child = node.subset.clone();
            child.push(j);
            child.sort_unstable();
            if !seen.insert(child.clone()) {
                continue;
            }
            let scored = score(child);
            if objective(&scored, &best) == Ordering::Less {
                best = scored.clone();
                improved = true;
            }
            // a feasible node can only grow into larger feasible nodes
            if !scored.feasible {
                open.push(scored);
            }
        }
        if improved {
            stall = 0;
        } else {
            stall += 1;
        }
    }

    let chosen = if best.feasible { best.subset } else { (0..p).collect() };
    Ok(MetricSubset::from_indices(train, &chosen))
}
