use super::{ParamMap, ParamVars, Tape, Var};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct GradCheckReport {
    /// Max over entries of `|a − b| / max(|a|, |b|, 1e-8)`.
    pub max_rel_error: f64,
    /// Parameter name and flat index where the max occurred.
    pub worst: Option<(String, usize)>,
    pub analytic: f64,
    pub numeric: f64,
    pub entries: usize,
}

fn evaluate<F>(build: &F, params: &ParamMap, tape: &mut Tape) -> Result<(Var, ParamVars)>
where
    F: Fn(&mut Tape, &ParamVars) -> Result<Var>,
{
    let mut vars = ParamVars::new();
    for (name, t) in params {
        vars.insert(name.clone(), tape.leaf(t.clone())?);
    }
    let loss = build(tape, &vars)?;
    let v = tape.value(loss);
    match v.item() {
        Some(x) if x.is_finite() => Ok((loss, vars)),
        Some(x) => Err(Error::Numerical(format!("forward value {x} is not finite"))),
        None => Err(Error::shape("grad_check", format!("loss must be scalar, got {:?}", v.shape()))),
    }
}

fn loss_at<F>(build: &F, params: &ParamMap) -> Result<f64>
where
    F: Fn(&mut Tape, &ParamVars) -> Result<Var>,
{
    let mut tape = Tape::new();
    let (loss, _) = evaluate(build, params, &mut tape)?;
    Ok(tape.value(loss).data()[0])
}

/// Compare backward gradients with central differences
/// `(f(p+ε) − f(p−ε)) / 2ε` for every parameter entry.
///
/// `build` receives a tape with each parameter already recorded as a leaf and
/// returns the scalar loss.
pub fn grad_check<F>(build: F, params: &ParamMap, eps: f64) -> Result<GradCheckReport>
where
    F: Fn(&mut Tape, &ParamVars) -> Result<Var>,
{
    if !(eps > 0.0 && eps <= 1e-2) {
        return Err(Error::Usage(format!("grad_check step {eps} outside (0, 1e-2]")));
    }
    let mut tape = Tape::new();
    let (loss, vars) = evaluate(&build, params, &mut tape)?;
    let grads = tape.backward(loss)?;

    let mut report = GradCheckReport {
        max_rel_error: 0.0,
        worst: None,
        analytic: 0.0,
        numeric: 0.0,
        entries: 0,
    };
    let mut probe = params.clone();
    for (name, tensor) in params {
        let analytic = grads.grad(vars[name]);
        for i in 0..tensor.len() {
            let x = tensor.data()[i];
            probe.get_mut(name).unwrap().data_mut()[i] = x + eps;
            let up = loss_at(&build, &probe)?;
            probe.get_mut(name).unwrap().data_mut()[i] = x - eps;
            let down = loss_at(&build, &probe)?;
            probe.get_mut(name).unwrap().data_mut()[i] = x;

            let numeric = (up - down) / (2.0 * eps);
            let a = analytic.data()[i];
            let rel = (a - numeric).abs() / a.abs().max(numeric.abs()).max(1e-8);
            report.entries += 1;
            if report.worst.is_none() || rel > report.max_rel_error {
                report.max_rel_error = rel;
                report.worst = Some((name.clone(), i));
                report.analytic = a;
                report.numeric = numeric;
            }
        }
    }
    Ok(report)
}
