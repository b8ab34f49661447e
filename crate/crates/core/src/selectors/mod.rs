//! Feature-selection techniques behind a single entry point, [`select`].
//!
//! Filters: CFS, information gain, χ², consistency. Wrappers: recursive
//! feature elimination (logistic or forest backend) and AIC-driven stepwise
//! logistic regression in three directions. AutoSpearman is included so the
//! harness can treat every technique uniformly.

mod cfs;
mod consistency;
mod ranking;
mod rfe;
mod stepwise;

pub use cfs::{cfs_merit, cfs_search, select_cfs, CfsSearch};
pub use consistency::select_consistency;
pub use ranking::{ranking_scores, select_chisq, select_ig, RankingScore};
pub use rfe::{select_rfe, select_rfe_detailed, RfeBackend, RfeOutcome};
pub use stepwise::{select_stepwise, stepwise_aic, Direction};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::autospearman::{auto_spearman, AutoSpearmanParams};
use crate::data::{Dataset, MetricSubset};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SelectorId {
    Cfs,
    Ig,
    Chisq,
    Con,
    RfeLr,
    RfeRf,
    StepFwd,
    StepBwd,
    StepBoth,
    AutoSpearman,
}

impl SelectorId {
    pub const ALL: [SelectorId; 10] = [
        SelectorId::Cfs,
        SelectorId::Ig,
        SelectorId::Chisq,
        SelectorId::Con,
        SelectorId::RfeLr,
        SelectorId::RfeRf,
        SelectorId::StepFwd,
        SelectorId::StepBwd,
        SelectorId::StepBoth,
        SelectorId::AutoSpearman,
    ];

    /// The nine baseline techniques.
    pub const BASELINES: [SelectorId; 9] = [
        SelectorId::Cfs,
        SelectorId::Ig,
        SelectorId::Chisq,
        SelectorId::Con,
        SelectorId::RfeLr,
        SelectorId::RfeRf,
        SelectorId::StepFwd,
        SelectorId::StepBwd,
        SelectorId::StepBoth,
    ];

    pub fn abbreviation(self) -> &'static str {
        match self {
            SelectorId::Cfs => "CFS",
            SelectorId::Ig => "IG",
            SelectorId::Chisq => "Chisq",
            SelectorId::Con => "CON",
            SelectorId::RfeLr => "RFE-LR",
            SelectorId::RfeRf => "RFE-RF",
            SelectorId::StepFwd => "Step-FWD",
            SelectorId::StepBwd => "Step-BWD",
            SelectorId::StepBoth => "Step-BOTH",
            SelectorId::AutoSpearman => "AutoSpearman",
        }
    }

    pub fn valid_list() -> String {
        Self::ALL.iter().map(|s| s.abbreviation()).collect::<Vec<_>>().join(", ")
    }

    pub fn is_supervised(self) -> bool {
        self != SelectorId::AutoSpearman
    }
}

impl fmt::Display for SelectorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.abbreviation())
    }
}

impl FromStr for SelectorId {
    type Err = Error;

    /// Case-insensitive; `_` is accepted in place of `-`.
    fn from_str(s: &str) -> Result<Self> {
        let wanted = s.trim().replace('_', "-");
        Self::ALL
            .into_iter()
            .find(|id| id.abbreviation().eq_ignore_ascii_case(&wanted))
            .ok_or_else(|| Error::UnsupportedSelector(s.to_string()))
    }
}

impl Serialize for SelectorId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.abbreviation())
    }
}

impl<'de> Deserialize<'de> for SelectorId {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Which metrics a score-ranking filter keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RankingCutoff {
    /// Every metric with a strictly positive score.
    Positive,
    /// The `k` best-scoring metrics (fewer if there are fewer metrics).
    TopK(usize),
}

impl Default for RankingCutoff {
    fn default() -> Self {
        RankingCutoff::Positive
    }
}

impl fmt::Display for RankingCutoff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RankingCutoff::Positive => f.write_str("score > 0"),
            RankingCutoff::TopK(k) => write!(f, "top {k}"),
        }
    }
}

fn default_bins() -> usize {
    10
}
fn default_resamples() -> usize {
    10
}
fn default_stall() -> usize {
    5
}
fn default_forest_trees() -> usize {
    crate::classifiers::DEFAULT_NTREE
}

/// Tuning knobs the selectors need but the techniques leave open.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectorConfig {
    #[serde(default = "default_bins")]
    pub bins: usize,
    #[serde(default)]
    pub ranking_cutoff: RankingCutoff,
    /// Internal bootstrap resamples per RFE candidate size.
    #[serde(default = "default_resamples")]
    pub rfe_resamples: usize,
    /// Candidate subset sizes for RFE; `None` means `1..=p`.
    #[serde(default)]
    pub rfe_sizes: Option<Vec<usize>>,
    #[serde(default = "default_forest_trees")]
    pub rfe_forest_trees: usize,
    /// Stepwise move cap; `None` means `2p + 1`.
    #[serde(default)]
    pub stepwise_max_steps: Option<usize>,
    /// Consecutive non-improving expansions before best-first search stops.
    #[serde(default = "default_stall")]
    pub stall_limit: usize,
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default)]
    pub autospearman: AutoSpearmanParams,
}

impl Default for SelectorConfig {
    fn default() -> Self {
        Self {
            bins: default_bins(),
            ranking_cutoff: RankingCutoff::Positive,
            rfe_resamples: default_resamples(),
            rfe_sizes: None,
            rfe_forest_trees: default_forest_trees(),
            stepwise_max_steps: None,
            stall_limit: default_stall(),
            base_seed: 0,
            autospearman: AutoSpearmanParams::default(),
        }
    }
}

impl SelectorConfig {
    pub fn validate(&self) -> Result<()> {
        let counts = [
            ("bins", self.bins),
            ("rfe_resamples", self.rfe_resamples),
            ("rfe_forest_trees", self.rfe_forest_trees),
            ("stall_limit", self.stall_limit),
        ];
        for (name, v) in counts {
            if v == 0 {
                return Err(Error::InvalidParameter(format!("{name} must be >= 1")));
            }
        }
        if self.bins < 2 {
            return Err(Error::InvalidParameter("bins must be >= 2".into()));
        }
        if let RankingCutoff::TopK(0) = self.ranking_cutoff {
            return Err(Error::InvalidParameter("top-k cutoff needs k >= 1".into()));
        }
        if matches!(self.stepwise_max_steps, Some(0)) {
            return Err(Error::InvalidParameter("stepwise_max_steps must be >= 1".into()));
        }
        if let Some(sizes) = &self.rfe_sizes {
            if sizes.is_empty() || sizes.contains(&0) {
                return Err(Error::InvalidParameter("rfe_sizes must be non-empty and >= 1".into()));
            }
        }
        self.autospearman.validate()
    }
}

pub(crate) fn require_both_classes(train: &Dataset) -> Result<()> {
    if train.has_both_classes() {
        Ok(())
    } else {
        Err(Error::DegenerateOutcome)
    }
}

/// Applies technique `id` to a training sample.
pub fn select(id: SelectorId, train: &Dataset, config: &SelectorConfig, seed: u64) -> Result<MetricSubset> {
    config.validate()?;
    match id {
        SelectorId::AutoSpearman => auto_spearman(train, &config.autospearman).map(|(s, _)| s),
        SelectorId::Cfs => select_cfs(train, config),
        SelectorId::Ig => select_ig(train, config),
        SelectorId::Chisq => select_chisq(train, config),
        SelectorId::Con => select_consistency(train, config),
        SelectorId::RfeLr => select_rfe(train, RfeBackend::Logistic, config, seed),
        SelectorId::RfeRf => select_rfe(train, RfeBackend::Forest, config, seed),
        SelectorId::StepFwd => select_stepwise(train, Direction::Forward, config),
        SelectorId::StepBwd => select_stepwise(train, Direction::Backward, config),
        SelectorId::StepBoth => select_stepwise(train, Direction::Both, config),
    }
}
