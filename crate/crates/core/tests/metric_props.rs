use proptest::prelude::*;
use sagefair::demography::{label_group, Category, Overrides};
use sagefair::evaluation::{auc, confusion, fairness_report, ConfusionMatrix};
use std::collections::{BTreeMap, BTreeSet};

/// Scores on a coarse grid so ties are common, with both classes present.
fn instances() -> impl Strategy<Value = (Vec<f64>, Vec<bool>)> {
    (2usize..30)
        .prop_flat_map(|n| (prop::collection::vec(0u8..8, n), prop::collection::vec(any::<bool>(), n)))
        .prop_map(|(s, mut y)| {
            y[0] = true;
            y[1] = false;
            (s.into_iter().map(|k| k as f64 / 8.0).collect(), y)
        })
}

fn pair_count_auc(s: &[f64], y: &[bool]) -> f64 {
    let (mut hits, mut pairs) = (0.0, 0.0);
    for i in 0..s.len() {
        for j in 0..s.len() {
            if y[i] && !y[j] {
                pairs += 1.0;
                hits += if s[i] > s[j] { 1.0 } else if s[i] == s[j] { 0.5 } else { 0.0 };
            }
        }
    }
    hits / pairs
}

proptest! {
    #[test]
    fn auc_matches_pair_count((s, y) in instances()) {
        prop_assert!((auc(&s, &y).unwrap() - pair_count_auc(&s, &y)).abs() < 1e-12);
    }

    #[test]
    fn auc_is_invariant_under_monotone_maps((s, y) in instances(), a in 0.1f64..5.0, b in -3.0f64..3.0) {
        let t: Vec<f64> = s.iter().map(|x| (a * x).exp() + b).collect();
        prop_assert!((auc(&s, &y).unwrap() - auc(&t, &y).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn metrics_are_permutation_invariant((s, y) in instances(), seed in any::<u64>()) {
        let mut idx: Vec<usize> = (0..s.len()).collect();
        idx.sort_by_key(|&i| (i as u64).wrapping_mul(0x9e3779b97f4a7c15) ^ seed);
        let ps: Vec<f64> = idx.iter().map(|&i| s[i]).collect();
        let py: Vec<bool> = idx.iter().map(|&i| y[i]).collect();
        prop_assert_eq!(auc(&s, &y).unwrap(), auc(&ps, &py).unwrap());
        prop_assert_eq!(confusion(&s, &y, 0.5).unwrap(), confusion(&ps, &py, 0.5).unwrap());
    }

    #[test]
    fn group_confusions_sum_to_overall((s, y) in instances(), g in prop::collection::vec(0u8..4, 30), t in 0.0f64..1.0) {
        let mut groups: Vec<Option<String>> = g[..s.len()]
            .iter()
            .map(|&k| (k < 3).then(|| ["a", "b", "c"][k as usize].to_string()))
            .collect();
        groups[0] = Some("a".into());
        groups[1] = Some("a".into());
        let r = fairness_report(&s, &y, &groups, "a", t).unwrap();
        let sum = r.groups.values().fold(ConfusionMatrix::default(), |acc, x| acc.add(&x.confusion));
        prop_assert_eq!(sum, r.overall);
        prop_assert_eq!(r.protected_stats.confusion.add(&r.rest.confusion), r.overall);
        prop_assert_eq!(r.overall, confusion(&s, &y, t).unwrap());
    }

    #[test]
    fn raising_the_threshold_never_adds_members(
        p in prop::collection::vec(0.0f64..1.0, 1..40),
        t1 in 0.01f64..0.99,
        t2 in 0.01f64..0.99,
    ) {
        let means: BTreeMap<u64, [f64; 4]> = p.iter().enumerate().map(|(i, &b)| (i as u64, [1.0 - b, b, 0.0, 0.0])).collect();
        let (lo, hi) = (t1.min(t2), t1.max(t2));
        let black: Category = "black".parse().unwrap();
        let a = label_group(&means, black, lo, &Overrides::default()).unwrap();
        let b = label_group(&means, black, hi, &Overrides::default()).unwrap();
        let sa: BTreeSet<u64> = a.protected().collect();
        let sb: BTreeSet<u64> = b.protected().collect();
        prop_assert!(sb.is_subset(&sa));
    }

    #[test]
    fn overrides_apply_as_set_edits(
        p in prop::collection::vec(0.0f64..1.0, 1..40),
        rm in prop::collection::btree_set(0u64..40, 0..8),
        add in prop::collection::btree_set(0u64..40, 0..8),
    ) {
        let n = p.len() as u64;
        let means: BTreeMap<u64, [f64; 4]> = p.iter().enumerate().map(|(i, &b)| (i as u64, [1.0 - b, b, 0.0, 0.0])).collect();
        let ov = Overrides {
            removals: rm.into_iter().filter(|&u| u < n).collect(),
            additions: add.into_iter().filter(|&u| u < n).collect(),
        };
        let black: Category = "black".parse().unwrap();
        let got: BTreeSet<u64> = label_group(&means, black, 0.8, &ov).unwrap().protected().collect();
        let model: BTreeSet<u64> = means.iter().filter(|(_, m)| m[1] > 0.8).map(|(&u, _)| u).collect();
        let expect: BTreeSet<u64> = model.difference(&ov.removals).chain(&ov.additions).copied().collect();
        prop_assert_eq!(&got, &expect);
        // the same edits applied to an already-edited set change nothing
        let again: BTreeSet<u64> = got.difference(&ov.removals).chain(&ov.additions).copied().collect();
        prop_assert_eq!(got, again);
    }
}
