//! Performance measures: AUC, confusion matrix at a probability cutoff,
//! F-measure and MCC.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stats::rank_with_ties;

/// Modules scored strictly above this are predicted defective.
pub const DEFAULT_THRESHOLD: f64 = 0.5;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub tp: u64,
    pub fp: u64,
    pub tn: u64,
    pub fn_: u64,
}

impl ConfusionMatrix {
    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.tn + self.fn_
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerformanceTriple {
    pub auc: f64,
    pub f_measure: f64,
    pub mcc: f64,
}

/// Mann–Whitney estimate of the AUC: the fraction of positive/negative pairs
/// where the positive scores higher, ties counting one half.
pub fn auc(scores: &[f64], labels: &[bool]) -> Result<f64> {
    if scores.len() != labels.len() {
        return Err(Error::LengthMismatch {
            left: scores.len(),
            right: labels.len(),
        });
    }
    let pos = labels.iter().filter(|&&l| l).count();
    let neg = labels.len() - pos;
    if pos == 0 || neg == 0 {
        return Err(Error::SingleClass);
    }
    let ranks = rank_with_ties(scores);
    let rank_sum: f64 = ranks.iter().zip(labels).filter(|(_, &l)| l).map(|(r, _)| r).sum();
    // U statistic; rank sums are multiples of 1/2, so this is exact.
    let u = rank_sum - (pos * (pos + 1)) as f64 / 2.0;
    Ok(u / (pos as f64 * neg as f64))
}

/// Predicted defective iff `score > threshold`.
pub fn confusion_at(scores: &[f64], labels: &[bool], threshold: f64) -> Result<ConfusionMatrix> {
    if scores.len() != labels.len() {
        return Err(Error::LengthMismatch {
            left: scores.len(),
            right: labels.len(),
        });
    }
    let mut cm = ConfusionMatrix::default();
    for (&s, &l) in scores.iter().zip(labels) {
        match (s > threshold, l) {
            (true, true) => cm.tp += 1,
            (true, false) => cm.fp += 1,
            (false, false) => cm.tn += 1,
            (false, true) => cm.fn_ += 1,
        }
    }
    Ok(cm)
}

/// Harmonic mean of precision and recall; 0 when `tp = 0`.
pub fn f_measure(cm: &ConfusionMatrix) -> f64 {
    if cm.tp == 0 {
        return 0.0;
    }
    let tp = cm.tp as f64;
    let precision = tp / (cm.tp + cm.fp) as f64;
    let recall = tp / (cm.tp + cm.fn_) as f64;
    2.0 * precision * recall / (precision + recall)
}

/// Matthews correlation coefficient; 0 when any marginal is empty.
pub fn mcc(cm: &ConfusionMatrix) -> f64 {
    let (tp, fp, tn, fn_) = (cm.tp as u128, cm.fp as u128, cm.tn as u128, cm.fn_ as u128);
    let margins = [tp + fp, tp + fn_, tn + fp, tn + fn_];
    if margins.iter().any(|&m| m == 0) {
        return 0.0;
    }
    let num = (tp * tn) as f64 - (fp * fn_) as f64;
    let den = ((margins[0] * margins[1]) as f64).sqrt() * ((margins[2] * margins[3]) as f64).sqrt();
    (num / den).clamp(-1.0, 1.0)
}

/// AUC plus F-measure and MCC at `threshold`. AUC is `None` for a
/// single-class label vector.
pub fn evaluate(scores: &[f64], labels: &[bool], threshold: f64) -> Result<(Option<f64>, f64, f64)> {
    let auc = match auc(scores, labels) {
        Ok(a) => Some(a),
        Err(Error::SingleClass) => None,
        Err(e) => return Err(e),
    };
    let cm = confusion_at(scores, labels, threshold)?;
    Ok((auc, f_measure(&cm), mcc(&cm)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cm(tp: u64, fp: u64, tn: u64, fn_: u64) -> ConfusionMatrix {
        ConfusionMatrix { tp, fp, tn, fn_ }
    }

    #[test]
    fn auc_examples() {
        assert_eq!(auc(&[0.9, 0.8, 0.1, 0.2], &[true, true, false, false]).unwrap(), 1.0);
        assert_eq!(auc(&[0.3; 5], &[true, false, true, false, false]).unwrap(), 0.5);
        assert_eq!(auc(&[0.9, 0.8, 0.3], &[true, false, true]).unwrap(), 0.5);
        assert!(matches!(auc(&[0.1, 0.2], &[true, true]), Err(Error::SingleClass)));
        assert!(matches!(auc(&[0.1], &[true, false]), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn confusion_examples() {
        assert_eq!(confusion_at(&[0.6, 0.4], &[true, false], 0.5).unwrap(), cm(1, 0, 1, 0));
        assert_eq!(confusion_at(&[0.5], &[true], 0.5).unwrap(), cm(0, 0, 0, 1));
        assert_eq!(confusion_at(&[], &[], 0.5).unwrap(), ConfusionMatrix::default());
    }

    #[test]
    fn f_measure_examples() {
        assert_eq!(f_measure(&cm(3, 1, 0, 1)), 0.75);
        assert_eq!(f_measure(&cm(0, 2, 5, 3)), 0.0);
        assert_eq!(f_measure(&cm(4, 0, 9, 0)), 1.0);
    }

    #[test]
    fn mcc_examples() {
        assert_eq!(mcc(&cm(5, 0, 5, 0)), 1.0);
        assert_eq!(mcc(&cm(0, 5, 0, 5)), -1.0);
        assert!((mcc(&cm(4, 1, 3, 2)) - 10.0 / 600f64.sqrt()).abs() < 1e-12);
        assert!((mcc(&cm(4, 1, 3, 2)) - 0.4082).abs() < 1e-4);
        assert_eq!(mcc(&cm(3, 2, 0, 0)), 0.0);
        let big = u64::MAX / 8;
        assert!(mcc(&cm(big, 1, big, 1)) > 0.999);
    }
}
