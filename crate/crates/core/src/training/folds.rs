use crate::error::{Error, Result};
use crate::graph::NodeId;
use crate::rng::RngStream;
use rand::seq::SliceRandom;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fold {
    pub train: Vec<NodeId>,
    pub test: Vec<NodeId>,
}

/// Label-stratified k-fold split of the labeled nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldPlan {
    pub k: usize,
    pub seed: u64,
    pub folds: Vec<Fold>,
}

impl FoldPlan {
    /// Fold in which `node` is tested.
    pub fn test_fold_of(&self, node: NodeId) -> Option<usize> {
        self.folds.iter().position(|f| f.test.binary_search(&node).is_ok())
    }
}

/// Shuffle each class, then deal positives followed by negatives round-robin
/// over the folds. Per-class counts per fold differ by at most one, and so
/// do total fold sizes.
pub fn stratified_kfold(labels: &[Option<bool>], k: usize, seed: u64) -> Result<FoldPlan> {
    if k < 2 {
        return Err(Error::Usage(format!("k-fold needs k >= 2, got {k}")));
    }
    let mut pos: Vec<NodeId> = Vec::new();
    let mut neg: Vec<NodeId> = Vec::new();
    for (i, l) in labels.iter().enumerate() {
        match l {
            Some(true) => pos.push(i as NodeId),
            Some(false) => neg.push(i as NodeId),
            None => {}
        }
    }
    if pos.len() < k || neg.len() < k {
        return Err(Error::data(format!(
            "{k}-fold split needs at least {k} nodes per class, got {} positive and {} negative",
            pos.len(),
            neg.len()
        )));
    }
    let mut rng = RngStream::new(seed, 0x6b66_6f6c_64).rng();
    pos.shuffle(&mut rng);
    neg.shuffle(&mut rng);
    let mut tests: Vec<Vec<NodeId>> = vec![Vec::new(); k];
    for (i, v) in pos.into_iter().chain(neg).enumerate() {
        tests[i % k].push(v);
    }
    let folds = (0..k)
        .map(|f| {
            tests[f].sort_unstable();
            let mut train: Vec<NodeId> = tests
                .iter()
                .enumerate()
                .filter(|&(g, _)| g != f)
                .flat_map(|(_, t)| t.iter().copied())
                .collect();
            train.sort_unstable();
            Fold {
                train,
                test: tests[f].clone(),
            }
        })
        .collect();
    Ok(FoldPlan { k, seed, folds })
}
