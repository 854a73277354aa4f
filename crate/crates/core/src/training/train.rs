use super::folds::{Fold, FoldPlan};
use super::optim::{adam_step, class_weight, AdamConfig, AdamState};
use crate::error::{Error, Result};
use crate::evaluation::Prediction;
use crate::graph::{Dataset, DirectedGraph, NodeId, Standardizer};
use crate::models::{build, parse_kv, InputFeatures, Model, ModelConfig, ModelKind};
use crate::ndiff::{ParamMap, ParamVars, Tape};
use crate::rng::RngStream;
use crate::samplers::sample_neighbors;
use rand::seq::SliceRandom;
use std::collections::BTreeMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

/// Optimizer and schedule settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainConfig {
    pub adam: AdamConfig,
    pub epochs: usize,
    /// Seeds (sage) or rows (baselines) per step; 0 means full batch.
    pub batch_size: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            adam: AdamConfig::default(),
            epochs: 30,
            batch_size: 512,
        }
    }
}

impl TrainConfig {
    pub fn to_kv(&self) -> Vec<(String, String)> {
        vec![
            ("lr".into(), self.adam.lr.to_string()),
            ("epochs".into(), self.epochs.to_string()),
            ("batch_size".into(), self.batch_size.to_string()),
        ]
    }

    /// Consume `lr`, `epochs` and `batch_size` from `map`, keeping defaults for absent keys.
    pub fn from_kv(map: &mut BTreeMap<String, String>) -> Result<Self> {
        let mut cfg = Self::default();
        if let Some(v) = map.remove("lr") {
            cfg.adam.lr = v
                .trim()
                .parse()
                .ok()
                .filter(|x: &f64| *x > 0.0 && x.is_finite())
                .ok_or_else(|| Error::Usage(format!("invalid learning rate '{v}'")))?;
        }
        let int = |k: &str, v: String| {
            v.trim()
                .parse::<usize>()
                .map_err(|_| Error::Usage(format!("{k}: expected a non-negative integer, got '{v}'")))
        };
        if let Some(v) = map.remove("epochs") {
            cfg.epochs = int("epochs", v)?;
        }
        if let Some(v) = map.remove("batch_size") {
            cfg.batch_size = int("batch_size", v)?;
        }
        Ok(cfg)
    }
}

/// Parse a run config file: model keys, training keys, and `seed`/`folds`.
pub fn parse_run_config(text: &str) -> Result<(ModelConfig, TrainConfig, BTreeMap<String, String>)> {
    let mut map = parse_kv(text)?;
    let model = ModelConfig::from_kv(&mut map)?;
    let train = TrainConfig::from_kv(&mut map)?;
    Ok((model, train, map))
}

/// One fold's training record.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainRun {
    pub fold: usize,
    pub train: TrainConfig,
    pub loss_trace: Vec<f64>,
    pub model: Model,
    pub pos_weight: f64,
    /// Feature statistics fitted on this fold's training nodes.
    pub standardizer: Standardizer,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FoldResult {
    pub run: TrainRun,
    /// Scores for the fold's test nodes.
    pub predictions: Vec<Prediction>,
}

// stream tags under a fold's RngStream
const TAG_INIT: u64 = 0;
const TAG_SHUFFLE: u64 = 1;
const TAG_SAMPLE: u64 = 2;
const TAG_DROPOUT: u64 = 3;
const TAG_PREDICT: u64 = 4;

/// Train a model on `nodes` with `labels` (one per node). Returns the model,
/// the per-epoch mean loss and the class weight used.
pub fn fit(
    config: &ModelConfig,
    train: &TrainConfig,
    graph: &DirectedGraph,
    features: &InputFeatures<'_>,
    nodes: &[NodeId],
    labels: &[bool],
    rng: RngStream,
) -> Result<(Model, Vec<f64>, f64)> {
    if nodes.len() != labels.len() {
        return Err(Error::shape("fit", format!("{} nodes for {} labels", nodes.len(), labels.len())));
    }
    let pos_weight = class_weight(labels)?;
    let mut model = Model::init(config.clone(), features.dim(), rng.derive(TAG_INIT))?;
    let label_of: BTreeMap<NodeId, f64> = nodes
        .iter()
        .zip(labels)
        .map(|(&v, &y)| (v, if y { 1.0 } else { 0.0 }))
        .collect();
    let batch = if train.batch_size == 0 { nodes.len() } else { train.batch_size };
    let mut order = nodes.to_vec();
    let mut shuffle = rng.derive(TAG_SHUFFLE).rng();
    let mut dropout = rng.derive(TAG_DROPOUT).rng();
    let mut state = AdamState::default();
    let mut trace = Vec::with_capacity(train.epochs);
    for epoch in 0..train.epochs {
        order.shuffle(&mut shuffle);
        let mut total = 0.0;
        for (b, chunk) in order.chunks(batch).enumerate() {
            let ys: Vec<f64> = chunk.iter().map(|v| label_of[v]).collect();
            let mut tape = Tape::new();
            let mut vars = ParamVars::new();
            for (name, t) in &model.params.tensors {
                vars.insert(name.clone(), tape.leaf(t.clone())?);
            }
            let (x, block) = match config.kind {
                ModelKind::Sage => {
                    let stream = rng.derive(TAG_SAMPLE).derive(epoch as u64).derive(b as u64);
                    let block = sample_neighbors(graph, chunk, &config.fanouts, config.direction, stream)?;
                    (features.gather(block.input_nodes())?, Some(block))
                }
                _ => (features.gather(chunk)?, None),
            };
            let x = tape.leaf(x)?;
            let (logits, _) = build(&mut tape, config, &vars, x, block.as_ref(), Some(&mut dropout))?;
            let loss = tape.weighted_bce(logits, &ys, pos_weight)?;
            total += tape.value(loss).data()[0] * chunk.len() as f64;
            let grads = tape.backward(loss)?;
            let grads: ParamMap = vars.iter().map(|(n, &v)| (n.clone(), grads.grad(v))).collect();
            adam_step(&mut model.params.tensors, &grads, &mut state, &train.adam)?;
        }
        let mean = total / nodes.len() as f64;
        if !mean.is_finite() {
            return Err(Error::Numerical(format!("epoch {epoch} loss is not finite")));
        }
        trace.push(mean);
    }
    Ok((model, trace, pos_weight))
}

/// Train on one fold and score its test nodes.
pub fn train_fold(
    config: &ModelConfig,
    train: &TrainConfig,
    data: &Dataset,
    index: usize,
    fold: &Fold,
    rng: RngStream,
) -> Result<FoldResult> {
    let table = &data.table;
    let rows: Vec<usize> = fold.train.iter().map(|&v| v as usize).collect();
    let features = InputFeatures::new(table, config.feature_set)?.fit_on(&rows);
    let labels: Vec<bool> = fold
        .train
        .iter()
        .map(|&v| {
            table.labels()[v as usize]
                .ok_or_else(|| Error::data(format!("training node {v} has no label")))
        })
        .collect::<Result<_>>()?;
    let (model, loss_trace, pos_weight) = fit(config, train, &data.graph, &features, &fold.train, &labels, rng)?;
    let batch = if train.batch_size == 0 { fold.test.len() } else { train.batch_size };
    let scores = model.predict(&data.graph, &features, &fold.test, batch, rng.derive(TAG_PREDICT))?;
    let predictions = fold
        .test
        .iter()
        .zip(scores)
        .map(|(&v, score)| Prediction {
            node_id: data.ids.raw(v),
            label: table.labels()[v as usize],
            group: table.groups()[v as usize].clone(),
            score,
            fold: Some(index),
        })
        .collect();
    Ok(FoldResult {
        run: TrainRun {
            fold: index,
            train: *train,
            loss_trace,
            model,
            pos_weight,
            standardizer: features.standardizer().cloned().unwrap_or_default(),
        },
        predictions,
    })
}

/// Train every fold of `plan`, using up to `threads` worker threads. Fold
/// `i` draws from `rng.derive(i)`, so results do not depend on `threads`.
pub fn train(
    config: &ModelConfig,
    train: &TrainConfig,
    data: &Dataset,
    plan: &FoldPlan,
    rng: RngStream,
    threads: usize,
) -> Result<Vec<FoldResult>> {
    config.validate()?;
    let k = plan.folds.len();
    let run = |i: usize| train_fold(config, train, data, i, &plan.folds[i], rng.derive(i as u64));
    if threads <= 1 || k <= 1 {
        return (0..k).map(run).collect();
    }
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<Result<FoldResult>>>> = Mutex::new((0..k).map(|_| None).collect());
    std::thread::scope(|s| {
        for _ in 0..threads.min(k) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= k {
                    break;
                }
                let r = run(i);
                slots.lock().expect("fold results lock")[i] = Some(r);
            });
        }
    });
    slots
        .into_inner()
        .expect("fold results lock")
        .into_iter()
        .map(|r| r.expect("every fold ran"))
        .collect()
}
