use super::{Aggregator, ModelConfig, ModelKind, ModelParams};
use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, FeatureSet, NodeId, NodeTable, Standardizer};
use crate::ndiff::{sigmoid, ParamVars, Tape, Tensor, Var, DEFAULT_LEAKY_ALPHA};
use crate::rng::RngStream;
use crate::samplers::{sample_neighbors, SampledBlock};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::rc::Rc;

/// Column view of a node table, optionally re-standardized (e.g. on a
/// training fold).
#[derive(Debug, Clone)]
pub struct InputFeatures<'a> {
    table: &'a NodeTable,
    columns: Vec<usize>,
    standardizer: Option<Standardizer>,
}

impl<'a> InputFeatures<'a> {
    pub fn new(table: &'a NodeTable, set: FeatureSet) -> Result<Self> {
        let columns = table.columns_for(set);
        if columns.is_empty() {
            return Err(Error::Schema(format!("node table has no {set} feature columns")));
        }
        Ok(Self {
            table,
            columns,
            standardizer: None,
        })
    }

    /// Refit standardization of the selected columns on `rows` only.
    pub fn fit_on(mut self, rows: &[usize]) -> Self {
        let mut st = Standardizer::fit(self.table.features(), self.table.feature_dim(), &self.columns, rows);
        st.names = self.column_names();
        self.standardizer = Some(st);
        self
    }

    /// Use previously fitted statistics (one entry per selected column).
    pub fn with_standardizer(mut self, st: Standardizer) -> Result<Self> {
        if st.len() != self.columns.len() {
            return Err(Error::shape(
                "features",
                format!("{} standardization entries for {} columns", st.len(), self.columns.len()),
            ));
        }
        self.standardizer = Some(st);
        Ok(self)
    }

    pub fn standardizer(&self) -> Option<&Standardizer> {
        self.standardizer.as_ref()
    }

    pub fn column_names(&self) -> Vec<String> {
        self.columns.iter().map(|&c| self.table.feature_names()[c].clone()).collect()
    }

    pub fn dim(&self) -> usize {
        self.columns.len()
    }

    pub fn table(&self) -> &NodeTable {
        self.table
    }

    pub fn columns(&self) -> &[usize] {
        &self.columns
    }

    /// Feature rows for `nodes`, as a `len × dim` matrix.
    pub fn gather(&self, nodes: &[NodeId]) -> Result<Tensor> {
        let mut data = Vec::with_capacity(nodes.len() * self.dim());
        for &v in nodes {
            let v = v as usize;
            if v >= self.table.len() {
                return Err(Error::shape("features", format!("node {v} out of {}", self.table.len())));
            }
            let row = self.table.row(v);
            match &self.standardizer {
                Some(st) => data.extend(self.columns.iter().enumerate().map(|(i, &c)| st.apply(i, row[c]))),
                None => data.extend(self.columns.iter().map(|&c| row[c])),
            }
        }
        Tensor::matrix(nodes.len(), self.dim(), data)
    }
}

/// Inverted dropout: zero with probability `rate`, scale survivors by `1/(1−rate)`.
fn dropout(tape: &mut Tape, x: Var, rate: f64, rng: Option<&mut ChaCha8Rng>) -> Result<Var> {
    let Some(rng) = rng else { return Ok(x) };
    if rate <= 0.0 {
        return Ok(x);
    }
    let v = tape.value(x);
    let keep = 1.0 / (1.0 - rate);
    let mask: Vec<f64> = (0..v.len())
        .map(|_| if rng.gen::<f64>() < rate { 0.0 } else { keep })
        .collect();
    let mask = tape.leaf(v.with_data(mask))?;
    tape.mul(x, mask)
}

fn var(vars: &ParamVars, name: &str) -> Result<Var> {
    vars.get(name)
        .copied()
        .ok_or_else(|| Error::shape("forward", format!("missing parameter '{name}'")))
}

fn affine(tape: &mut Tape, vars: &ParamVars, x: Var, prefix: &str) -> Result<Var> {
    let w = var(vars, &format!("{prefix}weight"))?;
    let b = var(vars, &format!("{prefix}bias"))?;
    let xw = tape.matmul(x, w)?;
    tape.add(xw, b)
}

/// Tape-level forward pass.
///
/// `x` holds the features of the batch nodes (lr, mlp) or of
/// `block.input_nodes()` (sage). Dropout is active when `rng` is given.
/// Returns `n × 1` logits and, for attention, one softmax node per layer.
pub(crate) fn build(
    tape: &mut Tape,
    config: &ModelConfig,
    vars: &ParamVars,
    x: Var,
    block: Option<&SampledBlock>,
    mut rng: Option<&mut ChaCha8Rng>,
) -> Result<(Var, Vec<Var>)> {
    let mut attention = Vec::new();
    let h = match config.kind {
        ModelKind::Lr => return Ok((affine(tape, vars, x, "")?, attention)),
        ModelKind::Mlp => {
            let mut h = x;
            for i in 0..config.layers {
                let z = affine(tape, vars, h, &format!("layer{i}."))?;
                let a = tape.relu(z)?;
                h = dropout(tape, a, config.dropout, rng.as_deref_mut())?;
            }
            h
        }
        ModelKind::Sage => {
            let block = block.ok_or_else(|| Error::Usage("sage forward needs a sampled block".into()))?;
            let l = config.layers;
            if block.layers() != l {
                return Err(Error::shape(
                    "sage_forward",
                    format!("block has {} layers, model has {l}", block.layers()),
                ));
            }
            let rows = tape.value(x).rows();
            if rows != block.input_nodes().len() {
                return Err(Error::shape(
                    "sage_forward",
                    format!("{rows} feature rows for {} block nodes", block.input_nodes().len()),
                ));
            }
            let mut h = x;
            for k in 0..l {
                let layer = l - 1 - k;
                let hop = &block.hops[layer];
                let n_out = block.layer_nodes[layer].len();
                h = dropout(tape, h, config.dropout, rng.as_deref_mut())?;
                let own: Rc<[usize]> = (0..n_out).collect();
                let own = tape.gather_rows(h, own)?;
                let nbrs: Rc<[usize]> = hop.neighbors.as_slice().into();
                let agg = match config.aggregator {
                    Aggregator::Mean => {
                        let rows = tape.gather_rows(h, nbrs)?;
                        tape.segment_mean(rows, &hop.offsets)?
                    }
                    Aggregator::MaxPool => {
                        let z = affine(tape, vars, h, &format!("sage{k}.pool."))?;
                        let z = tape.relu(z)?;
                        let rows = tape.gather_rows(z, nbrs)?;
                        tape.segment_max(rows, &hop.offsets)?
                    }
                    Aggregator::Attention => {
                        let w = var(vars, &format!("sage{k}.att.weight"))?;
                        let a = var(vars, &format!("sage{k}.att.vector"))?;
                        let z = tape.matmul(h, w)?;
                        let targets: Rc<[usize]> = (0..n_out)
                            .flat_map(|i| std::iter::repeat(i).take(hop.offsets[i + 1] - hop.offsets[i]))
                            .collect();
                        let zv = tape.gather_rows(z, targets)?;
                        let zu = tape.gather_rows(z, nbrs)?;
                        let pair = tape.concat_cols(zv, zu)?;
                        let e = tape.matmul(pair, a)?;
                        let e = tape.leaky_relu(e, DEFAULT_LEAKY_ALPHA)?;
                        let out = tape.segment_softmax_weighted_sum(e, zu, &hop.offsets)?;
                        attention.push(out);
                        out
                    }
                };
                let cat = tape.concat_cols(own, agg)?;
                let z = affine(tape, vars, cat, &format!("sage{k}."))?;
                h = tape.relu(z)?;
                if k + 1 < l {
                    h = tape.l2_normalize_rows(h)?;
                }
            }
            h
        }
    };
    Ok((affine(tape, vars, h, "head.")?, attention))
}

fn record(tape: &mut Tape, params: &ModelParams) -> Result<ParamVars> {
    let mut vars = ParamVars::new();
    for (name, t) in &params.tensors {
        vars.insert(name.clone(), tape.leaf(t.clone())?);
    }
    Ok(vars)
}

fn check_width(params: &ModelParams, features: &Tensor) -> Result<()> {
    if features.shape().len() != 2 || features.cols() != params.input_dim {
        return Err(Error::shape(
            "forward",
            format!("features {:?} for input width {}", features.shape(), params.input_dim),
        ));
    }
    Ok(())
}

fn run(
    config: &ModelConfig,
    params: &ModelParams,
    features: &Tensor,
    block: Option<&SampledBlock>,
    dropout: Option<RngStream>,
) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    params.check(config)?;
    check_width(params, features)?;
    let mut tape = Tape::new();
    let vars = record(&mut tape, params)?;
    let x = tape.leaf(features.clone())?;
    let mut rng = dropout.map(|s| s.rng());
    let (logits, att) = build(&mut tape, config, &vars, x, block, rng.as_mut())?;
    let weights = att
        .iter()
        .map(|&v| tape.softmax_weights(v).unwrap_or_default().to_vec())
        .collect();
    Ok((tape.value(logits).data().to_vec(), weights))
}

/// `features · W + b`.
pub fn lr_forward(params: &ModelParams, features: &Tensor) -> Result<Vec<f64>> {
    let mut config = ModelConfig::lr();
    config.hidden_dim = 1;
    Ok(run(&config, params, features, None, None)?.0)
}

/// Relu hidden layers then a linear head; `dropout` enables inverted dropout.
pub fn mlp_forward(
    config: &ModelConfig,
    params: &ModelParams,
    features: &Tensor,
    dropout: Option<RngStream>,
) -> Result<Vec<f64>> {
    if config.kind != ModelKind::Mlp {
        return Err(Error::Usage(format!("mlp_forward called with a {} config", config.name())));
    }
    Ok(run(config, params, features, None, dropout)?.0)
}

/// Seed logits of a sampled block, plus per-layer attention weights aligned
/// with the block's hop rows (empty for other aggregators). Index 0 of
/// `attention` is the layer applied first, i.e. the deepest hop.
#[derive(Debug, Clone, PartialEq)]
pub struct SageOutput {
    pub logits: Vec<f64>,
    pub attention: Vec<Vec<f64>>,
}

/// GraphSAGE forward over `block`; `features` are rows for `block.input_nodes()`.
pub fn sage_forward(
    config: &ModelConfig,
    params: &ModelParams,
    block: &SampledBlock,
    features: &Tensor,
    dropout: Option<RngStream>,
) -> Result<SageOutput> {
    if config.kind != ModelKind::Sage {
        return Err(Error::Usage(format!("sage_forward called with a {} config", config.name())));
    }
    let (logits, attention) = run(config, params, features, Some(block), dropout)?;
    Ok(SageOutput { logits, attention })
}

/// A configured model with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct Model {
    pub config: ModelConfig,
    pub params: ModelParams,
}

impl Model {
    pub fn init(config: ModelConfig, input_dim: usize, rng: RngStream) -> Result<Self> {
        let params = super::init_params(&config, input_dim, rng)?;
        Ok(Self { config, params })
    }

    /// Inference logits for `nodes`, in batches of `batch` seeds. Sage draws
    /// fresh neighbor samples per batch from streams derived from `rng`.
    pub fn logits(
        &self,
        graph: &DirectedGraph,
        features: &InputFeatures<'_>,
        nodes: &[NodeId],
        batch: usize,
        rng: RngStream,
    ) -> Result<Vec<f64>> {
        self.params.check(&self.config)?;
        if features.dim() != self.params.input_dim {
            return Err(Error::shape(
                "model",
                format!("{} feature columns for input width {}", features.dim(), self.params.input_dim),
            ));
        }
        let mut out = Vec::with_capacity(nodes.len());
        for (b, chunk) in nodes.chunks(batch.max(1)).enumerate() {
            let logits = match self.config.kind {
                ModelKind::Sage => {
                    let block = sample_neighbors(
                        graph,
                        chunk,
                        &self.config.fanouts,
                        self.config.direction,
                        rng.derive(b as u64),
                    )?;
                    let x = features.gather(block.input_nodes())?;
                    run(&self.config, &self.params, &x, Some(&block), None)?.0
                }
                _ => run(&self.config, &self.params, &features.gather(chunk)?, None, None)?.0,
            };
            out.extend(logits);
        }
        Ok(out)
    }

    /// Probabilities `σ(logit)` for `nodes`.
    pub fn predict(
        &self,
        graph: &DirectedGraph,
        features: &InputFeatures<'_>,
        nodes: &[NodeId],
        batch: usize,
        rng: RngStream,
    ) -> Result<Vec<f64>> {
        Ok(self
            .logits(graph, features, nodes, batch, rng)?
            .into_iter()
            .map(sigmoid)
            .collect())
    }
}
