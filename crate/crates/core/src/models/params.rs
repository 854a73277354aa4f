use super::{Aggregator, ModelConfig, ModelKind};
use crate::error::{Error, Result};
use crate::ndiff::{ParamMap, Tensor};
use crate::rng::RngStream;
use rand::Rng;

/// Name of the only initialization scheme currently produced.
pub const GLOROT_UNIFORM: &str = "glorot-uniform";

/// Named tensors for one model.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    pub tensors: ParamMap,
    pub input_dim: usize,
    pub init: String,
}

impl ModelParams {
    pub fn get(&self, name: &str) -> Result<&Tensor> {
        self.tensors
            .get(name)
            .ok_or_else(|| Error::shape("params", format!("missing parameter '{name}'")))
    }

    pub fn count(&self) -> usize {
        self.tensors.values().map(Tensor::len).sum()
    }

    /// Check names and shapes against `config`.
    pub fn check(&self, config: &ModelConfig) -> Result<()> {
        let expected = param_shapes(config, self.input_dim)?;
        if expected.len() != self.tensors.len() {
            return Err(Error::shape(
                "params",
                format!(
                    "{} tensors for a {} model that needs {}",
                    self.tensors.len(),
                    config.name(),
                    expected.len()
                ),
            ));
        }
        for (name, shape) in expected {
            let t = self.get(&name)?;
            if t.shape() != shape.as_slice() {
                return Err(Error::shape(
                    "params",
                    format!("'{name}' has shape {:?}, expected {shape:?}", t.shape()),
                ));
            }
        }
        Ok(())
    }
}

/// Parameter names and shapes in creation order.
///
/// Sage layer `k = 0` is the one applied first (to input features).
pub fn param_shapes(config: &ModelConfig, input_dim: usize) -> Result<Vec<(String, Vec<usize>)>> {
    config.validate()?;
    if input_dim == 0 {
        return Err(Error::Usage("input feature dimension must be positive".into()));
    }
    let h = config.hidden_dim;
    let mut out: Vec<(String, Vec<usize>)> = Vec::new();
    match config.kind {
        ModelKind::Lr => {
            out.push(("weight".into(), vec![input_dim, 1]));
            out.push(("bias".into(), vec![1]));
            return Ok(out);
        }
        ModelKind::Mlp => {
            let mut fan_in = input_dim;
            for i in 0..config.layers {
                out.push((format!("layer{i}.weight"), vec![fan_in, h]));
                out.push((format!("layer{i}.bias"), vec![h]));
                fan_in = h;
            }
        }
        ModelKind::Sage => {
            let mut fan_in = input_dim;
            for k in 0..config.layers {
                let agg_dim = match config.aggregator {
                    Aggregator::Mean => fan_in,
                    Aggregator::MaxPool => {
                        out.push((format!("sage{k}.pool.weight"), vec![fan_in, h]));
                        out.push((format!("sage{k}.pool.bias"), vec![h]));
                        h
                    }
                    Aggregator::Attention => {
                        out.push((format!("sage{k}.att.weight"), vec![fan_in, h]));
                        out.push((format!("sage{k}.att.vector"), vec![2 * h]));
                        h
                    }
                };
                out.push((format!("sage{k}.weight"), vec![fan_in + agg_dim, h]));
                out.push((format!("sage{k}.bias"), vec![h]));
                fan_in = h;
            }
        }
    }
    out.push(("head.weight".into(), vec![h, 1]));
    out.push(("head.bias".into(), vec![1]));
    Ok(out)
}

/// Glorot-uniform weights (`±√(6/(fan_in+fan_out))`), zero biases.
///
/// The attention vector is treated as a `2h × 1` matrix.
pub fn init_params(config: &ModelConfig, input_dim: usize, rng: RngStream) -> Result<ModelParams> {
    let shapes = param_shapes(config, input_dim)?;
    let mut rng = rng.rng();
    let mut tensors = ParamMap::new();
    for (name, shape) in shapes {
        let t = if name.ends_with("bias") {
            Tensor::zeros(&shape)
        } else {
            let (fan_in, fan_out) = match shape[..] {
                [n] => (n, 1),
                [r, c] => (r, c),
                _ => unreachable!("parameters are rank 1 or 2"),
            };
            let limit = (6.0 / (fan_in + fan_out) as f64).sqrt();
            let n: usize = shape.iter().product();
            let data = (0..n).map(|_| rng.gen_range(-limit..=limit)).collect();
            Tensor::new(shape, data)?
        };
        tensors.insert(name, t);
    }
    Ok(ModelParams {
        tensors,
        input_dim,
        init: GLOROT_UNIFORM.into(),
    })
}
