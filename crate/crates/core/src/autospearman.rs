//! AutoSpearman: unsupervised elimination of correlated metrics.
//!
//! Phase 1 walks the metric pairs whose |ρ| reaches `sp_t`, strongest first,
//! and drops the member that is more correlated (on average) with the rest of
//! the metrics. Phase 2 repeatedly drops the metric with the largest VIF until
//! every VIF is below `vif_t`. The outcome column is never read.

use serde::{Deserialize, Serialize, Serializer};

use crate::data::{Dataset, MetricSubset};
use crate::error::{Error, Result};
use crate::stats::{is_constant, spearman_matrix, vif_scores, CorrelationMatrix, VifScore};

pub const DEFAULT_SP_T: f64 = 0.7;
pub const DEFAULT_VIF_T: f64 = 5.0;

/// Which metric set the phase-1 mean-|ρ| criterion is measured against.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeanReference {
    /// Every (non-constant) input metric except the pair.
    #[default]
    Original,
    /// Only the metrics still retained, except the pair.
    Remaining,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AutoSpearmanParams {
    pub sp_t: f64,
    pub vif_t: f64,
    #[serde(default)]
    pub mean_reference: MeanReference,
}

impl Default for AutoSpearmanParams {
    fn default() -> Self {
        Self {
            sp_t: DEFAULT_SP_T,
            vif_t: DEFAULT_VIF_T,
            mean_reference: MeanReference::Original,
        }
    }
}

impl AutoSpearmanParams {
    pub fn new(sp_t: f64, vif_t: f64) -> Result<Self> {
        let p = Self {
            sp_t,
            vif_t,
            ..Self::default()
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sp_t > 0.0 && self.sp_t <= 1.0) {
            return Err(Error::InvalidParameter(format!("sp_t must be in (0, 1], got {}", self.sp_t)));
        }
        if !(self.vif_t > 1.0) {
            return Err(Error::InvalidParameter(format!("vif_t must be > 1, got {}", self.vif_t)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Spearman,
    Vif,
}

fn serialize_statistic<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_infinite() {
        s.serialize_str("inf")
    } else {
        s.serialize_f64(*v)
    }
}

/// One removal. `statistic` is |ρ| of the pair (phase 1, 0 for a constant
/// column) or the removed metric's VIF (phase 2, `inf` when unbounded).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EliminationStep {
    pub phase: Phase,
    pub removed: String,
    pub kept: Option<String>,
    #[serde(serialize_with = "serialize_statistic")]
    pub statistic: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
#[serde(transparent)]
pub struct EliminationTrace {
    pub steps: Vec<EliminationStep>,
}

impl EliminationTrace {
    pub fn removed(&self) -> impl Iterator<Item = &str> {
        self.steps.iter().map(|s| s.removed.as_str())
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    fn extend(&mut self, other: EliminationTrace) {
        self.steps.extend(other.steps);
    }
}

fn mean_abs(s: &CorrelationMatrix, i: usize, others: &[usize]) -> f64 {
    if others.is_empty() {
        return 0.0;
    }
    others.iter().map(|&k| s.get(i, k).abs()).sum::<f64>() / others.len() as f64
}

/// Phase 1 with the default (original-set) mean reference.
pub fn spearman_phase(d: &Dataset, sp_t: f64) -> (MetricSubset, EliminationTrace) {
    spearman_phase_with(d, sp_t, MeanReference::Original)
}

/// Phase 1. Constant columns are dropped first (statistic 0, no partner).
/// The correlation matrix is computed once; qualifying pairs (|ρ| ≥ sp_t)
/// are visited by descending |ρ|, ties by column-index order, skipping any
/// pair that touches an already removed metric.
pub fn spearman_phase_with(d: &Dataset, sp_t: f64, reference: MeanReference) -> (MetricSubset, EliminationTrace) {
    let p = d.n_metrics();
    let names = d.metric_names();
    let mut trace = EliminationTrace::default();
    let mut alive = vec![true; p];
    for j in 0..p {
        if is_constant(d.column(j)) {
            alive[j] = false;
            trace.steps.push(EliminationStep {
                phase: Phase::Spearman,
                removed: names[j].clone(),
                kept: None,
                statistic: 0.0,
            });
        }
    }
    let base: Vec<usize> = (0..p).filter(|&j| alive[j]).collect();

    let s = spearman_matrix(d);
    let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
    for (a, &i) in base.iter().enumerate() {
        for &j in &base[a + 1..] {
            let r = s.get(i, j).abs();
            if r >= sp_t {
                pairs.push((r, i, j));
            }
        }
    }
    pairs.sort_by(|x, y| y.0.total_cmp(&x.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));

    for (r, i, j) in pairs {
        if !alive[i] || !alive[j] {
            continue;
        }
        let others: Vec<usize> = base
            .iter()
            .copied()
            .filter(|&k| k != i && k != j)
            .filter(|&k| reference == MeanReference::Original || alive[k])
            .collect();
        let mi = mean_abs(&s, i, &others);
        let mj = mean_abs(&s, j, &others);
        // i < j, so ties keep the earlier column.
        let (keep, drop) = if mj < mi { (j, i) } else { (i, j) };
        alive[drop] = false;
        trace.steps.push(EliminationStep {
            phase: Phase::Spearman,
            removed: names[drop].clone(),
            kept: Some(names[keep].clone()),
            statistic: r,
        });
    }

    let kept: Vec<usize> = (0..p).filter(|&j| alive[j]).collect();
    (MetricSubset::from_indices(d, &kept), trace)
}

/// Phase 2: one removal per VIF recomputation until no metric reaches
/// `vif_t`. The largest VIF goes first (unbounded beats finite); ties drop
/// the metric with the largest column index.
pub fn vif_phase(d: &Dataset, start: &MetricSubset, vif_t: f64) -> Result<(MetricSubset, EliminationTrace)> {
    let mut current = d.indices_of(start)?;
    current.sort_unstable();
    let mut trace = EliminationTrace::default();
    while current.len() > 1 {
        let subset = MetricSubset::from_indices(d, &current);
        let report = vif_scores(d, &subset)?;
        let worst = report
            .entries
            .iter()
            .zip(&current)
            .filter(|((_, v), _)| v.is_unbounded() || v.value() >= vif_t)
            .max_by(|((_, a), ia), ((_, b), ib)| a.total_cmp(b).then(ia.cmp(ib)));
        let Some(((name, score), &col)) = worst else {
            break;
        };
        trace.steps.push(EliminationStep {
            phase: Phase::Vif,
            removed: name.clone(),
            kept: None,
            statistic: score.value(),
        });
        current.retain(|&j| j != col);
    }
    Ok((MetricSubset::from_indices(d, &current), trace))
}

/// Both phases with traces concatenated.
pub fn auto_spearman(d: &Dataset, params: &AutoSpearmanParams) -> Result<(MetricSubset, EliminationTrace)> {
    params.validate()?;
    let (after_spearman, mut trace) = spearman_phase_with(d, params.sp_t, params.mean_reference);
    if after_spearman.is_empty() {
        return Ok((after_spearman, trace));
    }
    let (subset, vif_trace) = vif_phase(d, &after_spearman, params.vif_t)?;
    trace.extend(vif_trace);
    Ok((subset, trace))
}

/// Convenience check used by tests and the harness: every pairwise |ρ| is
/// below `sp_t` and every VIF is finite and below `vif_t`.
pub fn satisfies_thresholds(d: &Dataset, subset: &MetricSubset, sp_t: f64, vif_t: f64) -> Result<bool> {
    let proj = d.project(subset)?;
    let s = spearman_matrix(&proj);
    for i in 0..s.len() {
        for j in (i + 1)..s.len() {
            if s.get(i, j).abs() >= sp_t {
                return Ok(false);
            }
        }
    }
    let vifs = vif_scores(&proj, &proj.all_metrics())?;
    Ok(vifs
        .entries
        .iter()
        .all(|(_, v)| matches!(v, VifScore::Finite(x) if *x < vif_t)))
}
