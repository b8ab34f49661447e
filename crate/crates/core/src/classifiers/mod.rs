//! The two classification techniques trained by the experiments and the
//! importance scores consumed by recursive feature elimination.

mod forest;
mod logistic;

pub use forest::{default_mtry, fit_random_forest, predict_forest, ForestModel, Node, Tree, DEFAULT_NTREE};
pub use logistic::{
    fit_logistic, log_likelihood, predict_logistic, score, LogisticModel, COEFFICIENT_BOUND, DEFAULT_MAX_ITER,
    DEFAULT_TOL,
};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::data::{Dataset, MetricSubset};
use crate::error::{Error, Result};

/// Which classifier to train.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassifierKind {
    Logistic,
    Forest,
}

impl ClassifierKind {
    pub const ALL: [ClassifierKind; 2] = [ClassifierKind::Logistic, ClassifierKind::Forest];

    pub fn as_str(self) -> &'static str {
        match self {
            ClassifierKind::Logistic => "logistic",
            ClassifierKind::Forest => "forest",
        }
    }
}

impl fmt::Display for ClassifierKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ClassifierKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "logistic" | "lr" | "glm" => Ok(ClassifierKind::Logistic),
            "forest" | "rf" | "randomforest" => Ok(ClassifierKind::Forest),
            _ => Err(Error::InvalidParameter(format!("unknown classifier `{s}`"))),
        }
    }
}

/// A fitted model of either kind.
#[derive(Debug, Clone, PartialEq)]
pub enum FittedClassifier {
    Logistic(LogisticModel),
    Forest(ForestModel),
}

impl FittedClassifier {
    /// Fits `kind` on `subset`. An empty subset always yields the
    /// intercept-only logistic model.
    pub fn fit(kind: ClassifierKind, d: &Dataset, subset: &MetricSubset, seed: u64) -> Result<Self> {
        match kind {
            ClassifierKind::Forest if !subset.is_empty() => {
                fit_random_forest(d, subset, DEFAULT_NTREE, seed).map(FittedClassifier::Forest)
            }
            _ => fit_logistic(d, subset, DEFAULT_MAX_ITER, DEFAULT_TOL).map(FittedClassifier::Logistic),
        }
    }

    pub fn metric_names(&self) -> &[String] {
        match self {
            FittedClassifier::Logistic(m) => &m.metric_names,
            FittedClassifier::Forest(m) => &m.metric_names,
        }
    }

    pub fn predict(&self, row: &[f64]) -> Result<f64> {
        match self {
            FittedClassifier::Logistic(m) => predict_logistic(m, row),
            FittedClassifier::Forest(m) => predict_forest(m, row),
        }
    }

    /// Defect probabilities for every row of `d` (resolved by metric name).
    pub fn predict_dataset(&self, d: &Dataset) -> Result<Vec<f64>> {
        let subset = MetricSubset::new(self.metric_names().to_vec())?;
        let idx = d.indices_of(&subset)?;
        (0..d.n_rows()).map(|i| self.predict(&d.row_at(i, &idx))).collect()
    }

    pub fn importance(&self, d: &Dataset) -> Result<ImportanceScores> {
        match self {
            FittedClassifier::Logistic(m) => logistic_importance(m, d),
            FittedClassifier::Forest(m) => Ok(forest_importance(m)),
        }
    }
}

/// Importance per metric, in model order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ImportanceScores {
    pub entries: Vec<(String, f64)>,
}

impl ImportanceScores {
    pub fn get(&self, name: &str) -> Option<f64> {
        self.entries.iter().find(|(m, _)| m == name).map(|(_, v)| *v)
    }
}

fn sample_sd(values: &[f64]) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
}

/// |coefficient| × sample standard deviation of the metric in `d`.
pub fn logistic_importance(m: &LogisticModel, d: &Dataset) -> Result<ImportanceScores> {
    let entries = m
        .metric_names
        .iter()
        .zip(&m.coefficients)
        .map(|(name, b)| Ok((name.clone(), b.abs() * sample_sd(d.column_by_name(name)?))))
        .collect::<Result<_>>()?;
    Ok(ImportanceScores { entries })
}

/// Mean decrease in Gini impurity, normalised to sum to 1. A forest that
/// never split spreads importance uniformly.
pub fn forest_importance(m: &ForestModel) -> ImportanceScores {
    let total: f64 = m.impurity_decrease.iter().sum();
    let p = m.metric_names.len();
    let entries = m
        .metric_names
        .iter()
        .zip(&m.impurity_decrease)
        .map(|(name, &v)| {
            let share = if total > 0.0 { v / total } else { 1.0 / p as f64 };
            (name.clone(), share)
        })
        .collect();
    ImportanceScores { entries }
}

/// Importance scores of a fitted model on `d`'s metric space.
pub fn importance(model: &FittedClassifier, d: &Dataset) -> Result<ImportanceScores> {
    model.importance(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_coefficient_scores_zero() {
        let d = Dataset::from_columns(
            vec!["a".into(), "b".into()],
            vec![vec![1.0, 2.0, 3.0, 5.0], vec![0.0, 4.0, 1.0, 1.0]],
            vec![false, true, false, true],
        )
        .unwrap();
        let m = LogisticModel {
            metric_names: vec!["a".into(), "b".into()],
            intercept: 0.1,
            coefficients: vec![0.0, -2.0],
            log_likelihood: -1.0,
            converged: true,
            iterations_used: 1,
            log_likelihood_trace: vec![],
        };
        let imp = logistic_importance(&m, &d).unwrap();
        assert_eq!(imp.get("a"), Some(0.0));
        assert!((imp.get("b").unwrap() - 2.0 * sample_sd(d.column(1))).abs() < 1e-12);
    }

    #[test]
    fn classifier_kind_parsing() {
        assert_eq!("RF".parse::<ClassifierKind>().unwrap(), ClassifierKind::Forest);
        assert_eq!("logistic".parse::<ClassifierKind>().unwrap(), ClassifierKind::Logistic);
        assert!("svm".parse::<ClassifierKind>().is_err());
    }
}
