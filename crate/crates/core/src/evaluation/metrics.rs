use crate::error::{Error, Result};
use std::cmp::Ordering;

/// Default operating threshold.
pub const DEFAULT_THRESHOLD: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
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

    pub fn positives(&self) -> u64 {
        self.tp + self.fn_
    }

    pub fn negatives(&self) -> u64 {
        self.fp + self.tn
    }

    /// Record one prediction.
    pub fn record(&mut self, predicted: bool, actual: bool) {
        match (predicted, actual) {
            (true, true) => self.tp += 1,
            (true, false) => self.fp += 1,
            (false, false) => self.tn += 1,
            (false, true) => self.fn_ += 1,
        }
    }

    /// `fp / (fp + tn)`, `None` without negatives.
    pub fn fpr(&self) -> Option<f64> {
        let n = self.negatives();
        (n > 0).then(|| self.fp as f64 / n as f64)
    }

    pub fn add(&self, other: &ConfusionMatrix) -> ConfusionMatrix {
        ConfusionMatrix {
            tp: self.tp + other.tp,
            fp: self.fp + other.fp,
            tn: self.tn + other.tn,
            fn_: self.fn_ + other.fn_,
        }
    }
}

fn check_inputs(scores: &[f64], labels: &[bool]) -> Result<()> {
    if scores.len() != labels.len() {
        return Err(Error::shape(
            "metrics",
            format!("{} scores for {} labels", scores.len(), labels.len()),
        ));
    }
    if scores.is_empty() {
        return Err(Error::data("no scored examples"));
    }
    if let Some(s) = scores.iter().find(|s| !s.is_finite()) {
        return Err(Error::data(format!("non-finite score {s}")));
    }
    Ok(())
}

/// Counts with the strict rule: positive iff `score > threshold`.
pub fn confusion(scores: &[f64], labels: &[bool], threshold: f64) -> Result<ConfusionMatrix> {
    check_inputs(scores, labels)?;
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(Error::Usage(format!("threshold {threshold} outside (0, 1)")));
    }
    let mut cm = ConfusionMatrix::default();
    for (&s, &y) in scores.iter().zip(labels) {
        cm.record(s > threshold, y);
    }
    Ok(cm)
}

/// A ratio that may have had a zero denominator; `value` is 0 when `undefined`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Metric {
    pub value: f64,
    pub undefined: bool,
}

impl Metric {
    fn ratio(num: f64, den: f64) -> Self {
        if den > 0.0 {
            Self {
                value: num / den,
                undefined: false,
            }
        } else {
            Self::undefined()
        }
    }

    pub fn defined(value: f64) -> Self {
        Self {
            value,
            undefined: false,
        }
    }

    pub fn undefined() -> Self {
        Self {
            value: 0.0,
            undefined: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Prf {
    pub accuracy: f64,
    pub precision: Metric,
    pub recall: Metric,
    pub f1: Metric,
}

/// Accuracy, precision, recall and F1. F1 is flagged undefined (value 0)
/// when precision or recall is undefined or both are 0.
pub fn prf(cm: &ConfusionMatrix) -> Prf {
    let (tp, fp, fn_) = (cm.tp as f64, cm.fp as f64, cm.fn_ as f64);
    let total = cm.total();
    let accuracy = if total > 0 {
        (cm.tp + cm.tn) as f64 / total as f64
    } else {
        0.0
    };
    let precision = Metric::ratio(tp, tp + fp);
    let recall = Metric::ratio(tp, tp + fn_);
    let f1 = if precision.undefined || recall.undefined {
        Metric::undefined()
    } else {
        Metric::ratio(2.0 * precision.value * recall.value, precision.value + recall.value)
    };
    Prf {
        accuracy,
        precision,
        recall,
        f1,
    }
}

/// Mann–Whitney AUC: `(concordant + ½·tied) / (pos·neg)`, via average ranks.
pub fn auc(scores: &[f64], labels: &[bool]) -> Result<f64> {
    check_inputs(scores, labels)?;
    let pos = labels.iter().filter(|&&y| y).count();
    let neg = labels.len() - pos;
    if pos == 0 || neg == 0 {
        return Err(Error::data("AUC needs both positive and negative examples"));
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].partial_cmp(&scores[b]).unwrap_or(Ordering::Equal));
    // sum over positives of (#negatives below + ½·#negatives tied)
    let mut concordant = 0.0;
    let mut neg_below = 0u64;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j < order.len() && scores[order[j]] == scores[order[i]] {
            j += 1;
        }
        let (p, n) = order[i..j].iter().fold((0u64, 0u64), |(p, n), &k| {
            if labels[k] {
                (p + 1, n)
            } else {
                (p, n + 1)
            }
        });
        concordant += p as f64 * neg_below as f64 + 0.5 * (p * n) as f64;
        neg_below += n;
        i = j;
    }
    Ok(concordant / (pos as f64 * neg as f64))
}

/// Confusion and PRF at each threshold.
pub fn threshold_sweep(
    scores: &[f64],
    labels: &[bool],
    thresholds: &[f64],
) -> Result<Vec<(f64, ConfusionMatrix, Prf)>> {
    thresholds
        .iter()
        .map(|&t| {
            let cm = confusion(scores, labels, t)?;
            Ok((t, cm, prf(&cm)))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn confusion_examples() {
        let cm = confusion(&[0.9, 0.1], &[true, false], 0.5).unwrap();
        assert_eq!(cm, ConfusionMatrix { tp: 1, fp: 0, tn: 1, fn_: 0 });
        let cm = confusion(&[0.5], &[true], 0.5).unwrap();
        assert_eq!(cm.fn_, 1);
        let cm = confusion(&[1.0; 4], &[true, false, true, false], 0.5).unwrap();
        assert_eq!(cm.fp, 2);
        assert!(confusion(&[], &[], 0.5).is_err());
        assert!(confusion(&[0.2], &[true], 1.0).is_err());
    }

    #[test]
    fn prf_examples() {
        let m = prf(&ConfusionMatrix { tp: 9, fp: 1, fn_: 3, tn: 87 });
        assert!((m.precision.value - 0.9).abs() < 1e-15);
        assert!((m.recall.value - 0.75).abs() < 1e-15);
        assert!((m.accuracy - 0.96).abs() < 1e-15);

        let m = prf(&ConfusionMatrix { tp: 5, fp: 0, fn_: 0, tn: 3 });
        assert_eq!((m.precision.value, m.recall.value, m.f1.value), (1.0, 1.0, 1.0));

        let m = prf(&ConfusionMatrix { tp: 0, fp: 2, fn_: 4, tn: 3 });
        assert_eq!(m.precision, Metric::defined(0.0));
        assert_eq!(m.recall, Metric::defined(0.0));
        assert_eq!(m.f1, Metric::undefined());

        let m = prf(&ConfusionMatrix { tp: 0, fp: 0, fn_: 4, tn: 3 });
        assert!(m.precision.undefined && m.f1.undefined);
    }

    fn brute_auc(scores: &[f64], labels: &[bool]) -> f64 {
        let mut num = 0.0;
        let mut pairs = 0.0;
        for (i, &yi) in labels.iter().enumerate() {
            for (j, &yj) in labels.iter().enumerate() {
                if yi && !yj {
                    pairs += 1.0;
                    if scores[i] > scores[j] {
                        num += 1.0;
                    } else if scores[i] == scores[j] {
                        num += 0.5;
                    }
                }
            }
        }
        num / pairs
    }

    #[test]
    fn auc_examples() {
        assert_eq!(auc(&[0.9, 0.8, 0.1], &[true, true, false]).unwrap(), 1.0);
        assert_eq!(auc(&[0.3; 4], &[true, false, true, false]).unwrap(), 0.5);
        let s = [0.8, 0.6, 0.6, 0.2];
        let y = [true, false, true, false];
        // pairs: (0.8,0.6)=1 (0.8,0.2)=1 (0.6,0.6)=½ (0.6,0.2)=1
        assert_eq!(auc(&s, &y).unwrap(), 0.875);
        assert_eq!(auc(&s, &y).unwrap(), brute_auc(&s, &y));
        assert!(auc(&[0.1, 0.2], &[true, true]).is_err());
    }

    #[test]
    fn sweep_is_monotone_in_positives() {
        let s = [0.1, 0.4, 0.6, 0.9];
        let y = [false, true, false, true];
        let rows = threshold_sweep(&s, &y, &[0.2, 0.5, 0.8]).unwrap();
        let predicted: Vec<u64> = rows.iter().map(|(_, cm, _)| cm.tp + cm.fp).collect();
        assert_eq!(predicted, vec![3, 2, 1]);
    }
}
