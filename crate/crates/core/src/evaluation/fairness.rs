use super::metrics::{auc, confusion, prf, ConfusionMatrix, Prf};
use crate::error::{Error, Result};
use std::collections::BTreeMap;

/// Group name used for rows without a group tag.
pub const UNASSIGNED: &str = "unassigned";

#[derive(Debug, Clone, PartialEq)]
pub struct GroupStats {
    pub confusion: ConfusionMatrix,
    pub fpr: Option<f64>,
}

/// Predictive-equality report: false positive rates per group and the gap
/// between the protected group and everyone else.
#[derive(Debug, Clone, PartialEq)]
pub struct FairnessReport {
    pub threshold: f64,
    pub protected: String,
    pub groups: BTreeMap<String, GroupStats>,
    pub protected_stats: GroupStats,
    pub rest: GroupStats,
    /// `FPR(protected) − FPR(rest)`; `None` when the rest has no negatives.
    pub fpr_gap: Option<f64>,
    pub overall: ConfusionMatrix,
    pub overall_prf: Prf,
    pub overall_auc: Option<f64>,
}

fn stats(cm: ConfusionMatrix) -> GroupStats {
    GroupStats {
        fpr: cm.fpr(),
        confusion: cm,
    }
}

pub fn fairness_report(
    scores: &[f64],
    labels: &[bool],
    groups: &[Option<String>],
    protected: &str,
    threshold: f64,
) -> Result<FairnessReport> {
    if groups.len() != labels.len() {
        return Err(Error::shape(
            "fairness_report",
            format!("{} group tags for {} labels", groups.len(), labels.len()),
        ));
    }
    let overall = confusion(scores, labels, threshold)?;
    let mut per: BTreeMap<String, ConfusionMatrix> = BTreeMap::new();
    for ((&s, &y), g) in scores.iter().zip(labels).zip(groups) {
        let name = g.as_deref().unwrap_or(UNASSIGNED);
        per.entry(name.to_string()).or_default().record(s > threshold, y);
    }
    let prot = *per
        .get(protected)
        .ok_or_else(|| Error::data(format!("protected group '{protected}' has no scored members")))?;
    if prot.negatives() == 0 {
        return Err(Error::data(format!(
            "protected group '{protected}' has no negative examples, so its FPR is undefined"
        )));
    }
    let rest = per
        .iter()
        .filter(|(g, _)| g.as_str() != protected)
        .fold(ConfusionMatrix::default(), |acc, (_, cm)| acc.add(cm));
    let (prot, rest) = (stats(prot), stats(rest));
    let fpr_gap = match (prot.fpr, rest.fpr) {
        (Some(a), Some(b)) => Some(a - b),
        _ => None,
    };
    Ok(FairnessReport {
        threshold,
        protected: protected.to_string(),
        groups: per.into_iter().map(|(g, cm)| (g, stats(cm))).collect(),
        protected_stats: prot,
        rest,
        fpr_gap,
        overall,
        overall_prf: prf(&overall),
        overall_auc: auc(scores, labels).ok(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// 128 negatives in the protected group, `fp` of them above threshold.
    fn aa_case(fp: usize) -> FairnessReport {
        let mut scores = Vec::new();
        let mut labels = Vec::new();
        let mut groups = Vec::new();
        for i in 0..128 {
            scores.push(if i < fp { 0.9 } else { 0.1 });
            labels.push(false);
            groups.push(Some("aa".to_string()));
        }
        for i in 0..8 {
            scores.push(if i < 4 { 0.8 } else { 0.3 });
            labels.push(true);
            groups.push(Some("aa".to_string()));
        }
        for i in 0..100 {
            scores.push(if i < 10 { 0.7 } else { 0.2 });
            labels.push(false);
            groups.push(Some("other".to_string()));
        }
        fairness_report(&scores, &labels, &groups, "aa", 0.5).unwrap()
    }

    #[test]
    fn protected_fpr_rows() {
        let pct = |r: &FairnessReport| (r.protected_stats.fpr.unwrap() * 1000.0).round() / 10.0;
        assert_eq!(pct(&aa_case(26)), 20.3);
        assert_eq!(pct(&aa_case(13)), 10.2);
        let zero = aa_case(0);
        assert_eq!(zero.protected_stats.fpr, Some(0.0));
        assert_eq!(zero.fpr_gap, Some(-zero.rest.fpr.unwrap()));
        assert_eq!(zero.rest.fpr, Some(0.1));
    }

    #[test]
    fn groups_sum_to_overall() {
        let r = aa_case(5);
        let sum = r
            .groups
            .values()
            .fold(ConfusionMatrix::default(), |a, g| a.add(&g.confusion));
        assert_eq!(sum, r.overall);
        assert_eq!(r.protected_stats.confusion.add(&r.rest.confusion), r.overall);
    }

    #[test]
    fn missing_protected_group() {
        let e = fairness_report(&[0.2], &[false], &[None], "aa", 0.5);
        assert!(e.is_err());
        let e = fairness_report(&[0.2], &[true], &[Some("aa".into())], "aa", 0.5);
        assert!(e.is_err());
    }
}
