//! Automated elimination of correlated software metrics and a benchmarking
//! harness for feature-selection consistency.
//!
//! The crate is organised bottom-up:
//!
//! - [`data`]: datasets, CSV I/O, out-of-sample bootstrap, synthetic fixtures.
//! - [`stats`]: ranks, Spearman, OLS/R², VIF, discretisation, entropy, χ², AIC.
//! - [`classifiers`]: IRLS logistic regression and a bagged random forest.
//! - [`evaluation`]: AUC, confusion matrix, F-measure, MCC.
//! - [`autospearman`]: the two-phase Spearman/VIF elimination.
//! - [`selectors`]: nine baseline feature-selection techniques plus AutoSpearman
//!   behind one interface.
//! - [`harness`]: bootstrap experiments measuring subset consistency,
//!   residual correlation and performance impact.

pub mod autospearman;
pub mod classifiers;
pub mod data;
pub mod error;
pub mod evaluation;
pub mod harness;
pub mod seed;
pub mod selectors;
pub mod stats;

pub use autospearman::{auto_spearman, AutoSpearmanParams, EliminationStep, EliminationTrace, Phase};
pub use data::{Dataset, MetricSubset};
pub use error::{Error, ErrorClass, Result};
pub use selectors::{SelectorConfig, SelectorId};
