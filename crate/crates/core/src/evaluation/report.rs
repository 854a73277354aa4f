//! Report documents: a fixed-width text table for people and `key=value`
//! lines for machines. Undefined metrics are written as `NA` together with a
//! `<key>.undefined=1` line; floats use the shortest round-trip form.

use super::fairness::FairnessReport;
use super::metrics::{auc, confusion, prf, ConfusionMatrix, Metric, Prf};
use super::predictions::{labeled_columns, Prediction};
use crate::error::{Error, Result};
use std::collections::BTreeMap;
use std::fmt::Write as _;

/// Ordered `key=value` document.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct KvDoc {
    pub entries: Vec<(String, String)>,
}

impl KvDoc {
    pub fn text(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.entries.push((key.into(), value.into()));
    }

    pub fn int(&mut self, key: impl Into<String>, value: u64) {
        self.text(key, value.to_string());
    }

    pub fn float(&mut self, key: impl Into<String>, value: f64) {
        self.text(key, value.to_string());
    }

    pub fn metric(&mut self, key: &str, m: Metric) {
        if m.undefined {
            self.text(key, "NA");
            self.text(format!("{key}.undefined"), "1");
        } else {
            self.float(key, m.value);
        }
    }

    pub fn optional(&mut self, key: &str, v: Option<f64>) {
        self.metric(key, v.map(Metric::defined).unwrap_or_else(Metric::undefined));
    }

    pub fn confusion(&mut self, prefix: &str, cm: &ConfusionMatrix) {
        self.int(format!("{prefix}.tp"), cm.tp);
        self.int(format!("{prefix}.fp"), cm.fp);
        self.int(format!("{prefix}.tn"), cm.tn);
        self.int(format!("{prefix}.fn"), cm.fn_);
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    /// Numeric value of `key`; `None` when absent or `NA`.
    pub fn get_f64(&self, key: &str) -> Option<f64> {
        self.get(key).and_then(|v| v.parse().ok())
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.entries {
            let _ = writeln!(s, "{k}={v}");
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::data(format!("report line {}: expected key=value", i + 1)))?;
            entries.push((k.to_string(), v.to_string()));
        }
        Ok(Self { entries })
    }

    pub fn to_map(&self) -> BTreeMap<String, String> {
        self.entries.iter().cloned().collect()
    }
}

/// Confusion, PRF and AUC (absent for single-class input) over one set of predictions.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricBlock {
    pub count: usize,
    pub confusion: ConfusionMatrix,
    pub prf: Prf,
    pub auc: Option<f64>,
}

pub fn metric_block(scores: &[f64], labels: &[bool], threshold: f64) -> Result<MetricBlock> {
    let cm = confusion(scores, labels, threshold)?;
    Ok(MetricBlock {
        count: scores.len(),
        confusion: cm,
        prf: prf(&cm),
        auc: auc(scores, labels).ok(),
    })
}

/// Mean over folds of each metric. Precision, recall and AUC skip folds where
/// they are undefined; F1 enters with its conventional 0 so that folds with
/// no true positives pull the mean down instead of vanishing from it.
#[derive(Debug, Clone, PartialEq)]
pub struct FoldMean {
    pub folds: usize,
    pub accuracy: f64,
    pub precision: Metric,
    pub recall: Metric,
    pub f1: Metric,
    pub auc: Metric,
}

fn mean_defined(values: impl Iterator<Item = Option<f64>>) -> Metric {
    let (sum, n) = values.flatten().fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    if n == 0 {
        Metric::undefined()
    } else {
        Metric::defined(sum / n as f64)
    }
}

fn defined(m: Metric) -> Option<f64> {
    (!m.undefined).then_some(m.value)
}

/// Metrics over pooled predictions and, when fold ids are present, the mean
/// of per-fold metrics.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub name: String,
    pub threshold: f64,
    pub pooled: MetricBlock,
    pub fold_mean: Option<FoldMean>,
}

pub fn evaluate_predictions(name: &str, preds: &[Prediction], threshold: f64) -> Result<EvalReport> {
    let (scores, labels, _) = labeled_columns(preds);
    let pooled = metric_block(&scores, &labels, threshold)?;
    let mut by_fold: BTreeMap<usize, Vec<&Prediction>> = BTreeMap::new();
    for p in preds.iter().filter(|p| p.label.is_some()) {
        if let Some(f) = p.fold {
            by_fold.entry(f).or_default().push(p);
        }
    }
    let fold_mean = if by_fold.is_empty() {
        None
    } else {
        let blocks = by_fold
            .values()
            .map(|ps| {
                let s: Vec<f64> = ps.iter().map(|p| p.score).collect();
                let y: Vec<bool> = ps.iter().map(|p| p.label == Some(true)).collect();
                metric_block(&s, &y, threshold)
            })
            .collect::<Result<Vec<_>>>()?;
        Some(FoldMean {
            folds: blocks.len(),
            accuracy: blocks.iter().map(|b| b.prf.accuracy).sum::<f64>() / blocks.len() as f64,
            precision: mean_defined(blocks.iter().map(|b| defined(b.prf.precision))),
            recall: mean_defined(blocks.iter().map(|b| defined(b.prf.recall))),
            f1: mean_defined(blocks.iter().map(|b| Some(b.prf.f1.value))),
            auc: mean_defined(blocks.iter().map(|b| b.auc)),
        })
    };
    Ok(EvalReport {
        name: name.to_string(),
        threshold,
        pooled,
        fold_mean,
    })
}

fn pct(m: Metric) -> String {
    if m.undefined {
        "NA".into()
    } else {
        format!("{:.1}", 100.0 * m.value)
    }
}

fn opt_pct(v: Option<f64>) -> String {
    pct(v.map(Metric::defined).unwrap_or_else(Metric::undefined))
}

impl EvalReport {
    pub fn to_kv(&self) -> KvDoc {
        let mut d = KvDoc::default();
        d.text("model", self.name.clone());
        d.float("threshold", self.threshold);
        let p = &self.pooled;
        d.int("pooled.count", p.count as u64);
        d.confusion("pooled", &p.confusion);
        d.float("pooled.accuracy", p.prf.accuracy);
        d.metric("pooled.precision", p.prf.precision);
        d.metric("pooled.recall", p.prf.recall);
        d.metric("pooled.f1", p.prf.f1);
        d.optional("pooled.auc", p.auc);
        if let Some(m) = &self.fold_mean {
            d.int("fold_mean.folds", m.folds as u64);
            d.float("fold_mean.accuracy", m.accuracy);
            d.metric("fold_mean.precision", m.precision);
            d.metric("fold_mean.recall", m.recall);
            d.metric("fold_mean.f1", m.f1);
            d.metric("fold_mean.auc", m.auc);
        }
        d
    }

    /// Accuracy-table layout, values in percent.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{:<28} {:>8} {:>9} {:>7} {:>6} {:>6}", "model", "accuracy", "precision", "recall", "f1", "auc");
        let p = &self.pooled;
        let _ = writeln!(
            s,
            "{:<28} {:>8} {:>9} {:>7} {:>6} {:>6}",
            format!("{} (pooled)", self.name),
            format!("{:.1}", 100.0 * p.prf.accuracy),
            pct(p.prf.precision),
            pct(p.prf.recall),
            pct(p.prf.f1),
            opt_pct(p.auc)
        );
        if let Some(m) = &self.fold_mean {
            let _ = writeln!(
                s,
                "{:<28} {:>8} {:>9} {:>7} {:>6} {:>6}",
                format!("{} (mean of {})", self.name, m.folds),
                format!("{:.1}", 100.0 * m.accuracy),
                pct(m.precision),
                pct(m.recall),
                pct(m.f1),
                pct(m.auc)
            );
        }
        let c = &p.confusion;
        let _ = writeln!(
            s,
            "threshold {}  n={}  tp={} fp={} tn={} fn={}",
            self.threshold, p.count, c.tp, c.fp, c.tn, c.fn_
        );
        s
    }
}

impl FairnessReport {
    pub fn to_kv(&self) -> KvDoc {
        let mut d = KvDoc::default();
        d.float("threshold", self.threshold);
        d.text("protected", self.protected.clone());
        d.confusion("protected", &self.protected_stats.confusion);
        d.optional("protected.fpr", self.protected_stats.fpr);
        d.confusion("rest", &self.rest.confusion);
        d.optional("rest.fpr", self.rest.fpr);
        d.optional("fpr_gap", self.fpr_gap);
        for (g, st) in &self.groups {
            d.confusion(&format!("group.{g}"), &st.confusion);
            d.optional(&format!("group.{g}.fpr"), st.fpr);
        }
        d.confusion("overall", &self.overall);
        d.float("overall.accuracy", self.overall_prf.accuracy);
        d.metric("overall.precision", self.overall_prf.precision);
        d.metric("overall.recall", self.overall_prf.recall);
        d.metric("overall.f1", self.overall_prf.f1);
        d.optional("overall.auc", self.overall_auc);
        d
    }

    /// Fairness-table layout: false positives, negatives and FPR per group.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{:<20} {:>9} {:>7} {:>7}", "group", "negatives", "fp", "fpr%");
        let mut row = |name: &str, st: &super::fairness::GroupStats| {
            let _ = writeln!(
                s,
                "{:<20} {:>9} {:>7} {:>7}",
                name,
                st.confusion.negatives(),
                st.confusion.fp,
                opt_pct(st.fpr)
            );
        };
        row(&format!("{} (protected)", self.protected), &self.protected_stats);
        row("rest", &self.rest);
        for (g, st) in &self.groups {
            if g != &self.protected {
                row(g, st);
            }
        }
        let _ = writeln!(s, "fpr gap (protected - rest): {}", opt_pct(self.fpr_gap));
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn preds() -> Vec<Prediction> {
        let mk = |id, label, score, fold| Prediction {
            node_id: id,
            label: Some(label),
            group: None,
            score,
            fold: Some(fold),
        };
        vec![
            mk(1, true, 0.9, 0),
            mk(2, false, 0.2, 0),
            mk(3, true, 0.4, 1),
            mk(4, false, 0.6, 1),
            mk(5, false, 1.0 / 3.0, 1),
        ]
    }

    #[test]
    fn pooled_and_fold_mean() {
        let r = evaluate_predictions("m", &preds(), 0.5).unwrap();
        assert_eq!(r.pooled.confusion, ConfusionMatrix { tp: 1, fp: 1, tn: 2, fn_: 1 });
        let m = r.fold_mean.unwrap();
        assert_eq!(m.folds, 2);
        // fold 0 perfect (acc 1), fold 1 acc 1/3
        assert!((m.accuracy - (1.0 + 1.0 / 3.0) / 2.0).abs() < 1e-15);
        // fold 1 has tp = 0, fp = 1 → precision 0; fold 0 precision 1
        assert_eq!(m.precision, Metric::defined(0.5));
        // fold 1 F1 is flagged but counts as 0 in the mean
        assert_eq!(m.f1, Metric::defined(0.5));
    }

    #[test]
    fn kv_round_trip_is_exact() {
        let r = evaluate_predictions("m", &preds(), 0.5).unwrap();
        let doc = r.to_kv();
        let back = KvDoc::parse(&doc.render()).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.get_f64("pooled.accuracy"), Some(r.pooled.prf.accuracy));
        assert_eq!(back.get_f64("pooled.auc"), r.pooled.auc);
        assert!(r.to_text().contains("m (pooled)"));
    }

    #[test]
    fn undefined_metric_is_flagged() {
        let p = vec![Prediction {
            node_id: 1,
            label: Some(false),
            group: None,
            score: 0.1,
            fold: None,
        }];
        let doc = evaluate_predictions("x", &p, 0.5).unwrap().to_kv();
        assert_eq!(doc.get("pooled.precision"), Some("NA"));
        assert_eq!(doc.get("pooled.precision.undefined"), Some("1"));
        assert_eq!(doc.get("pooled.auc"), Some("NA"));
        assert!(doc.get_f64("pooled.precision").is_none());
    }
}
