use crate::error::{Error, Result};
use crate::ndiff::{softplus, ParamMap, Tensor};

/// Adam hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdamConfig {
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
}

impl Default for AdamConfig {
    fn default() -> Self {
        Self {
            lr: 1e-3,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
        }
    }
}

/// First/second moment estimates and step count.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AdamState {
    pub m: ParamMap,
    pub v: ParamMap,
    pub t: u64,
}

/// One bias-corrected Adam update of every parameter that has a gradient.
pub fn adam_step(params: &mut ParamMap, grads: &ParamMap, state: &mut AdamState, cfg: &AdamConfig) -> Result<()> {
    for (name, g) in grads {
        let p = params
            .get(name)
            .ok_or_else(|| Error::shape("adam_step", format!("gradient for unknown parameter '{name}'")))?;
        if p.shape() != g.shape() {
            return Err(Error::shape(
                "adam_step",
                format!("'{name}': param {:?} vs grad {:?}", p.shape(), g.shape()),
            ));
        }
    }
    state.t += 1;
    let t = state.t as i32;
    let c1 = 1.0 - cfg.beta1.powi(t);
    let c2 = 1.0 - cfg.beta2.powi(t);
    for (name, g) in grads {
        let p = params.get_mut(name).expect("checked above");
        let m = state
            .m
            .entry(name.clone())
            .or_insert_with(|| Tensor::zeros(g.shape()));
        let v = state
            .v
            .entry(name.clone())
            .or_insert_with(|| Tensor::zeros(g.shape()));
        for (((x, &gi), mi), vi) in p
            .data_mut()
            .iter_mut()
            .zip(g.data())
            .zip(m.data_mut())
            .zip(v.data_mut())
        {
            *mi = cfg.beta1 * *mi + (1.0 - cfg.beta1) * gi;
            *vi = cfg.beta2 * *vi + (1.0 - cfg.beta2) * gi * gi;
            let mhat = *mi / c1;
            let vhat = *vi / c2;
            *x -= cfg.lr * mhat / (vhat.sqrt() + cfg.eps);
        }
    }
    Ok(())
}

/// `#negative / #positive` over training labels.
pub fn class_weight(labels: &[bool]) -> Result<f64> {
    let pos = labels.iter().filter(|&&y| y).count();
    let neg = labels.len() - pos;
    if pos == 0 || neg == 0 {
        return Err(Error::data(format!(
            "class weight needs both classes, got {pos} positive and {neg} negative"
        )));
    }
    Ok(neg as f64 / pos as f64)
}

/// Summed positive and negative terms of the weighted logistic loss
/// (before averaging): `Σ w·y·softplus(−z)` and `Σ (1−y)·softplus(z)`.
pub fn bce_terms(logits: &[f64], labels: &[f64], pos_weight: f64) -> Result<(f64, f64)> {
    if logits.len() != labels.len() || logits.is_empty() {
        return Err(Error::shape(
            "weighted_bce_loss",
            format!("{} logits vs {} labels", logits.len(), labels.len()),
        ));
    }
    if !(pos_weight > 0.0 && pos_weight.is_finite()) {
        return Err(Error::data(format!("pos_weight must be positive, got {pos_weight}")));
    }
    if let Some(z) = logits.iter().find(|z| !z.is_finite()) {
        return Err(Error::Numerical(format!("non-finite logit {z}")));
    }
    Ok(logits.iter().zip(labels).fold((0.0, 0.0), |(p, n), (&z, &y)| {
        (p + pos_weight * y * softplus(-z), n + (1.0 - y) * softplus(z))
    }))
}

/// Mean weighted logistic loss in the stable softplus form.
pub fn weighted_bce_loss(logits: &[f64], labels: &[f64], pos_weight: f64) -> Result<f64> {
    let (p, n) = bce_terms(logits, labels, pos_weight)?;
    Ok((p + n) / labels.len() as f64)
}
