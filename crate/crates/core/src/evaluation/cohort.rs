use crate::error::{Error, Result};
use crate::graph::{Direction, DirectedGraph, NodeId};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Cohort {
    TruePositive,
    FalsePositive,
    TrueNegative,
    FalseNegative,
}

impl Cohort {
    pub const ALL: [Cohort; 4] = [
        Cohort::TruePositive,
        Cohort::FalsePositive,
        Cohort::TrueNegative,
        Cohort::FalseNegative,
    ];

    pub fn of(predicted: bool, actual: bool) -> Self {
        match (predicted, actual) {
            (true, true) => Cohort::TruePositive,
            (true, false) => Cohort::FalsePositive,
            (false, false) => Cohort::TrueNegative,
            (false, true) => Cohort::FalseNegative,
        }
    }

    pub fn short(&self) -> &'static str {
        match self {
            Cohort::TruePositive => "tp",
            Cohort::FalsePositive => "fp",
            Cohort::TrueNegative => "tn",
            Cohort::FalseNegative => "fn",
        }
    }
}

impl fmt::Display for Cohort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CohortStats {
    pub size: usize,
    /// Share of members with at least one hateful-labeled neighbor (either direction).
    pub hateful_neighbor_fraction: f64,
    pub mean_lexicon: Option<f64>,
    pub mean_feature: Option<f64>,
}

/// Per-cohort statistics; empty cohorts are absent.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CohortTable {
    pub cohorts: BTreeMap<Cohort, CohortStats>,
}

impl CohortTable {
    pub fn get(&self, c: Cohort) -> Option<&CohortStats> {
        self.cohorts.get(&c)
    }

    /// Mean lexicon count of `a` divided by that of `b`.
    pub fn lexicon_ratio(&self, a: Cohort, b: Cohort) -> Option<f64> {
        let x = self.get(a)?.mean_lexicon?;
        let y = self.get(b)?.mean_lexicon?;
        (y != 0.0).then(|| x / y)
    }
}

/// Optional per-node columns summarized per cohort.
#[derive(Debug, Clone, Copy, Default)]
pub struct CohortColumns<'a> {
    pub lexicon_counts: Option<&'a [f64]>,
    pub feature: Option<&'a [f64]>,
}

/// Split scored nodes into TP/FP/TN/FN at `threshold` (strict) and summarize
/// each cohort. `annotations` gives the label of every graph node; unlabeled
/// neighbors never count as hateful.
pub fn error_cohort_stats(
    graph: &DirectedGraph,
    annotations: &[Option<bool>],
    nodes: &[NodeId],
    scores: &[f64],
    threshold: f64,
    columns: CohortColumns<'_>,
) -> Result<CohortTable> {
    let n = graph.node_count();
    if annotations.len() != n {
        return Err(Error::shape("cohort", format!("{} annotations for {n} nodes", annotations.len())));
    }
    if nodes.len() != scores.len() {
        return Err(Error::shape("cohort", format!("{} scores for {} nodes", scores.len(), nodes.len())));
    }
    for col in [columns.lexicon_counts, columns.feature].into_iter().flatten() {
        if col.len() != n {
            return Err(Error::shape("cohort", format!("column of length {} for {n} nodes", col.len())));
        }
    }
    #[derive(Default)]
    struct Acc {
        size: usize,
        hateful_nbr: usize,
        lexicon: f64,
        feature: f64,
    }
    let mut acc: BTreeMap<Cohort, Acc> = BTreeMap::new();
    for (&v, &s) in nodes.iter().zip(scores) {
        graph.check_node(v)?;
        let actual = annotations[v as usize]
            .ok_or_else(|| Error::data(format!("scored node {v} has no label")))?;
        let a = acc.entry(Cohort::of(s > threshold, actual)).or_default();
        a.size += 1;
        let nbrs = graph.neighbor_slice(v, Direction::Both);
        if nbrs.iter().any(|&u| u != v && annotations[u as usize] == Some(true)) {
            a.hateful_nbr += 1;
        }
        if let Some(c) = columns.lexicon_counts {
            a.lexicon += c[v as usize];
        }
        if let Some(c) = columns.feature {
            a.feature += c[v as usize];
        }
    }
    let cohorts = acc
        .into_iter()
        .map(|(c, a)| {
            let m = a.size as f64;
            let stats = CohortStats {
                size: a.size,
                hateful_neighbor_fraction: a.hateful_nbr as f64 / m,
                mean_lexicon: columns.lexicon_counts.map(|_| a.lexicon / m),
                mean_feature: columns.feature.map(|_| a.feature / m),
            };
            (c, stats)
        })
        .collect();
    Ok(CohortTable { cohorts })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fp_have_hateful_neighbors_tn_do_not() {
        // 0 hateful (TP); 1, 2 normal predicted positive and linked to 0; 3, 4 normal, isolated pair
        let g = DirectedGraph::from_edges(5, [(1, 0), (0, 2), (3, 4)]).unwrap().0;
        let ann = [Some(true), Some(false), Some(false), Some(false), Some(false)];
        let t = error_cohort_stats(
            &g,
            &ann,
            &[0, 1, 2, 3, 4],
            &[0.9, 0.8, 0.7, 0.1, 0.2],
            0.5,
            CohortColumns::default(),
        )
        .unwrap();
        assert_eq!(t.get(Cohort::FalsePositive).unwrap().hateful_neighbor_fraction, 1.0);
        assert_eq!(t.get(Cohort::TrueNegative).unwrap().hateful_neighbor_fraction, 0.0);
        assert!(t.get(Cohort::FalseNegative).is_none());
    }

    #[test]
    fn lexicon_ratio() {
        let g = DirectedGraph::empty(4);
        let ann = [Some(false); 4];
        let lex = [10.0, 10.0, 11.6, 11.6];
        let t = error_cohort_stats(
            &g,
            &ann,
            &[0, 1, 2, 3],
            &[0.1, 0.2, 0.9, 0.8],
            0.5,
            CohortColumns {
                lexicon_counts: Some(&lex),
                feature: None,
            },
        )
        .unwrap();
        let r = t.lexicon_ratio(Cohort::FalsePositive, Cohort::TrueNegative).unwrap();
        assert!((r - 1.16).abs() < 1e-12);
        assert!(t.get(Cohort::TrueNegative).unwrap().mean_feature.is_none());
    }

    #[test]
    fn six_node_hand_count() {
        // edges: 0→1, 2→0, 3→4, 5→3, 1→5; labels: 0 H, 1 N, 2 N, 3 H, 4 N, 5 unlabeled
        let g = DirectedGraph::from_edges(6, [(0, 1), (2, 0), (3, 4), (5, 3), (1, 5)]).unwrap().0;
        let ann = [Some(true), Some(false), Some(false), Some(true), Some(false), None];
        let nodes = [0, 1, 2, 3, 4];
        let scores = [0.9, 0.6, 0.2, 0.3, 0.7];
        let lex = [4.0, 2.0, 1.0, 6.0, 3.0, 100.0];
        let sentiment = [0.5, -0.5, 0.25, 0.0, 1.0, 9.0];
        let t = error_cohort_stats(
            &g,
            &ann,
            &nodes,
            &scores,
            0.5,
            CohortColumns {
                lexicon_counts: Some(&lex),
                feature: Some(&sentiment),
            },
        )
        .unwrap();
        // TP {0}: nbrs 1, 2 → none hateful
        let tp = t.get(Cohort::TruePositive).unwrap();
        assert_eq!((tp.size, tp.hateful_neighbor_fraction, tp.mean_lexicon), (1, 0.0, Some(4.0)));
        // FP {1, 4}: 1 ~ 0 (H), 4 ~ 3 (H)
        let fp = t.get(Cohort::FalsePositive).unwrap();
        assert_eq!((fp.size, fp.hateful_neighbor_fraction), (2, 1.0));
        assert_eq!(fp.mean_lexicon, Some(2.5));
        assert_eq!(fp.mean_feature, Some(0.25));
        // TN {2}: 2 ~ 0 (H)
        let tn = t.get(Cohort::TrueNegative).unwrap();
        assert_eq!((tn.size, tn.hateful_neighbor_fraction), (1, 1.0));
        // FN {3}: nbrs 4 (N), 5 (unlabeled)
        let f = t.get(Cohort::FalseNegative).unwrap();
        assert_eq!((f.size, f.hateful_neighbor_fraction, f.mean_feature), (1, 0.0, Some(0.0)));
    }
}
