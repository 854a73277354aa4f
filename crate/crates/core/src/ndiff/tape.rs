use super::check_offsets;
use super::tensor::{matmul, matmul_at, matmul_bt, Tensor};
use crate::error::{Error, Result};
use std::rc::Rc;

/// Negative-side slope used for attention scoring unless overridden.
pub const DEFAULT_LEAKY_ALPHA: f64 = 0.2;

/// Handle to a value recorded on a [`Tape`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(usize);

impl Var {
    pub fn index(self) -> usize {
        self.0
    }
}

/// Operation selector for [`Tape::forward_op`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OpKind {
    MatMul,
    Add,
    ConcatCols,
    Relu,
    LeakyRelu(f64),
    Sigmoid,
    ElementwiseMul,
    L2NormalizeRows,
    SegmentMean,
    SegmentMax,
    SegmentSoftmaxWeightedSum,
}

#[derive(Debug)]
enum Op {
    Leaf,
    MatMul(Var, Var),
    /// `broadcast` is true when the right operand is a single row added to every row.
    Add(Var, Var, bool),
    ConcatCols(Var, Var),
    Relu(Var),
    LeakyRelu(Var, f64),
    Sigmoid(Var),
    Mul(Var, Var),
    L2NormalizeRows(Var, Vec<f64>),
    GatherRows(Var, Rc<[usize]>),
    SegmentMean(Var, Rc<[usize]>),
    /// `argmax[s * cols + c]` is the winning input row, `usize::MAX` for empty segments.
    SegmentMax(Var, Vec<usize>),
    SegmentSoftmaxSum {
        scores: Var,
        values: Var,
        offsets: Rc<[usize]>,
        weights: Vec<f64>,
    },
    Sum(Var),
    WeightedBce {
        logits: Var,
        labels: Rc<[f64]>,
        pos_weight: f64,
    },
}

#[derive(Debug)]
struct Node {
    op: Op,
    value: Tensor,
}

/// Reverse-mode record. Values are computed eagerly; inputs always precede
/// their consumers, so `backward` is a single reverse sweep.
#[derive(Debug, Default)]
pub struct Tape {
    nodes: Vec<Node>,
}

/// Gradients from one backward pass.
#[derive(Debug)]
pub struct Gradients {
    grads: Vec<Option<Tensor>>,
    shapes: Vec<Vec<usize>>,
}

impl Gradients {
    /// Gradient of the loss w.r.t. `v`, or `None` when `v` does not reach the loss.
    pub fn get(&self, v: Var) -> Option<&Tensor> {
        self.grads.get(v.0).and_then(Option::as_ref)
    }

    /// Gradient of the loss w.r.t. `v`; exact zeros when `v` does not reach the loss.
    pub fn grad(&self, v: Var) -> Tensor {
        self.get(v)
            .cloned()
            .unwrap_or_else(|| Tensor::zeros(&self.shapes[v.0]))
    }
}

/// `ln(1 + e^x)` without overflow.
pub fn softplus(x: f64) -> f64 {
    x.max(0.0) + (-x.abs()).exp().ln_1p()
}

/// Logistic function, stable for large `|x|`.
pub fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

impl Tape {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn value(&self, v: Var) -> &Tensor {
        &self.nodes[v.0].value
    }

    /// Record an input (parameter or constant).
    pub fn leaf(&mut self, value: Tensor) -> Result<Var> {
        self.push("leaf", Op::Leaf, value)
    }

    fn push(&mut self, op_name: &'static str, op: Op, value: Tensor) -> Result<Var> {
        if !value.all_finite() {
            return Err(Error::Numerical(format!("{op_name} produced a non-finite value")));
        }
        self.nodes.push(Node { op, value });
        Ok(Var(self.nodes.len() - 1))
    }

    fn dims(&self, v: Var) -> (usize, usize) {
        self.nodes[v.0].value.dims()
    }

    /// Generic entry point; `segments` is required by the segment operations
    /// and ignored by the rest.
    pub fn forward_op(&mut self, kind: OpKind, inputs: &[Var], segments: Option<&[usize]>) -> Result<Var> {
        let need = |n: usize| -> Result<()> {
            if inputs.len() == n {
                Ok(())
            } else {
                Err(Error::shape("forward_op", format!("{kind:?} takes {n} inputs, got {}", inputs.len())))
            }
        };
        let seg = || -> Result<&[usize]> {
            segments.ok_or_else(|| Error::shape("forward_op", format!("{kind:?} requires segment offsets")))
        };
        match kind {
            OpKind::MatMul => need(2).and_then(|_| self.matmul(inputs[0], inputs[1])),
            OpKind::Add => need(2).and_then(|_| self.add(inputs[0], inputs[1])),
            OpKind::ConcatCols => need(2).and_then(|_| self.concat_cols(inputs[0], inputs[1])),
            OpKind::Relu => need(1).and_then(|_| self.relu(inputs[0])),
            OpKind::LeakyRelu(a) => need(1).and_then(|_| self.leaky_relu(inputs[0], a)),
            OpKind::Sigmoid => need(1).and_then(|_| self.sigmoid(inputs[0])),
            OpKind::ElementwiseMul => need(2).and_then(|_| self.mul(inputs[0], inputs[1])),
            OpKind::L2NormalizeRows => need(1).and_then(|_| self.l2_normalize_rows(inputs[0])),
            OpKind::SegmentMean => {
                need(1)?;
                self.segment_mean(inputs[0], seg()?)
            }
            OpKind::SegmentMax => {
                need(1)?;
                self.segment_max(inputs[0], seg()?)
            }
            OpKind::SegmentSoftmaxWeightedSum => {
                need(2)?;
                self.segment_softmax_weighted_sum(inputs[0], inputs[1], seg()?)
            }
        }
    }

    /// `a (n×k) · b`, with `b` either `k×m` or a rank-1 length-`k` column.
    pub fn matmul(&mut self, a: Var, b: Var) -> Result<Var> {
        let av = &self.nodes[a.0].value;
        let bv = &self.nodes[b.0].value;
        if av.shape().len() != 2 {
            return Err(Error::shape("matmul", format!("left operand must be rank 2, got {:?}", av.shape())));
        }
        let (n, k) = av.dims();
        let (bk, m) = match bv.shape() {
            [k] => (*k, 1),
            [k, m] => (*k, *m),
            s => return Err(Error::shape("matmul", format!("right operand shape {s:?}"))),
        };
        if k != bk {
            return Err(Error::shape("matmul", format!("{:?} · {:?}", av.shape(), bv.shape())));
        }
        let out = Tensor::matrix(n, m, matmul(av.data(), bv.data(), n, k, m))?;
        self.push("matmul", Op::MatMul(a, b), out)
    }

    /// Elementwise sum; `b` may be a single row (rank-1 or `1×m`) broadcast over rows of `a`.
    pub fn add(&mut self, a: Var, b: Var) -> Result<Var> {
        let av = &self.nodes[a.0].value;
        let bv = &self.nodes[b.0].value;
        let out = if av.shape() == bv.shape() {
            let data = av.data().iter().zip(bv.data()).map(|(x, y)| x + y).collect();
            (av.with_data(data), false)
        } else if bv.rows() == 1 && bv.cols() == av.cols() && bv.shape().len() <= 2 {
            let bd = bv.data();
            let data = av
                .data()
                .chunks(av.cols().max(1))
                .flat_map(|row| row.iter().zip(bd).map(|(x, y)| x + y))
                .collect();
            (av.with_data(data), true)
        } else {
            return Err(Error::shape("add", format!("{:?} + {:?}", av.shape(), bv.shape())));
        };
        self.push("add", Op::Add(a, b, out.1), out.0)
    }

    pub fn concat_cols(&mut self, a: Var, b: Var) -> Result<Var> {
        let av = &self.nodes[a.0].value;
        let bv = &self.nodes[b.0].value;
        let ((n, ca), (nb, cb)) = (av.dims(), bv.dims());
        if n != nb || av.shape().len() != 2 || bv.shape().len() != 2 {
            return Err(Error::shape("concat_cols", format!("{:?} ‖ {:?}", av.shape(), bv.shape())));
        }
        let mut data = Vec::with_capacity(n * (ca + cb));
        for i in 0..n {
            data.extend_from_slice(av.row(i));
            data.extend_from_slice(bv.row(i));
        }
        let out = Tensor::matrix(n, ca + cb, data)?;
        self.push("concat_cols", Op::ConcatCols(a, b), out)
    }

    fn map(&mut self, a: Var, name: &'static str, op: Op, f: impl Fn(f64) -> f64) -> Result<Var> {
        let av = &self.nodes[a.0].value;
        let out = av.with_data(av.data().iter().map(|&x| f(x)).collect());
        self.push(name, op, out)
    }

    pub fn relu(&mut self, a: Var) -> Result<Var> {
        self.map(a, "relu", Op::Relu(a), |x| x.max(0.0))
    }

    pub fn leaky_relu(&mut self, a: Var, alpha: f64) -> Result<Var> {
        self.map(a, "leaky_relu", Op::LeakyRelu(a, alpha), move |x| if x > 0.0 { x } else { alpha * x })
    }

    pub fn sigmoid(&mut self, a: Var) -> Result<Var> {
        self.map(a, "sigmoid", Op::Sigmoid(a), sigmoid)
    }

    pub fn mul(&mut self, a: Var, b: Var) -> Result<Var> {
        let av = &self.nodes[a.0].value;
        let bv = &self.nodes[b.0].value;
        if av.shape() != bv.shape() {
            return Err(Error::shape("elementwise_mul", format!("{:?} ∘ {:?}", av.shape(), bv.shape())));
        }
        let out = av.with_data(av.data().iter().zip(bv.data()).map(|(x, y)| x * y).collect());
        self.push("elementwise_mul", Op::Mul(a, b), out)
    }

    /// Scale each row to unit L2 norm; all-zero rows stay zero.
    pub fn l2_normalize_rows(&mut self, a: Var) -> Result<Var> {
        let av = &self.nodes[a.0].value;
        let (n, c) = av.dims();
        let mut norms = Vec::with_capacity(n);
        let mut data = Vec::with_capacity(n * c);
        for i in 0..n {
            let row = av.row(i);
            let norm = row.iter().map(|x| x * x).sum::<f64>().sqrt();
            norms.push(norm);
            if norm > 0.0 {
                data.extend(row.iter().map(|x| x / norm));
            } else {
                data.extend(std::iter::repeat(0.0).take(c));
            }
        }
        let out = av.with_data(data);
        self.push("l2_normalize_rows", Op::L2NormalizeRows(a, norms), out)
    }

    /// Select rows of `a` by index (rows may repeat).
    pub fn gather_rows(&mut self, a: Var, index: impl Into<Rc<[usize]>>) -> Result<Var> {
        let index: Rc<[usize]> = index.into();
        let av = &self.nodes[a.0].value;
        let (n, c) = av.dims();
        if let Some(&bad) = index.iter().find(|&&i| i >= n) {
            return Err(Error::shape("gather_rows", format!("row {bad} out of {n}")));
        }
        let mut data = Vec::with_capacity(index.len() * c);
        for &i in index.iter() {
            data.extend_from_slice(av.row(i));
        }
        let out = Tensor::matrix(index.len(), c, data)?;
        self.push("gather_rows", Op::GatherRows(a, index), out)
    }

    /// Mean of the rows in each segment; empty segments give a zero row.
    pub fn segment_mean(&mut self, a: Var, offsets: &[usize]) -> Result<Var> {
        let (n, c) = self.dims(a);
        check_offsets("segment_mean", offsets, n)?;
        let av = &self.nodes[a.0].value;
        let segs = offsets.len() - 1;
        let mut data = vec![0.0; segs * c];
        for s in 0..segs {
            let (lo, hi) = (offsets[s], offsets[s + 1]);
            if lo == hi {
                continue;
            }
            // running mean: exact when all rows are equal
            let out = &mut data[s * c..(s + 1) * c];
            out.copy_from_slice(av.row(lo));
            for (k, r) in (lo + 1..hi).enumerate() {
                let w = (k + 2) as f64;
                for (o, x) in out.iter_mut().zip(av.row(r)) {
                    *o += (x - *o) / w;
                }
            }
        }
        let out = Tensor::matrix(segs, c, data)?;
        self.push("segment_mean", Op::SegmentMean(a, offsets.into()), out)
    }

    /// Columnwise max per segment; empty segments give a zero row. Ties go to
    /// the lowest row.
    pub fn segment_max(&mut self, a: Var, offsets: &[usize]) -> Result<Var> {
        let (n, c) = self.dims(a);
        check_offsets("segment_max", offsets, n)?;
        let av = &self.nodes[a.0].value;
        let segs = offsets.len() - 1;
        let mut data = vec![0.0; segs * c];
        let mut argmax = vec![usize::MAX; segs * c];
        for s in 0..segs {
            let (lo, hi) = (offsets[s], offsets[s + 1]);
            for j in 0..c {
                let mut best = usize::MAX;
                let mut best_v = f64::NEG_INFINITY;
                for r in lo..hi {
                    let v = av.row(r)[j];
                    if v > best_v {
                        best_v = v;
                        best = r;
                    }
                }
                if best != usize::MAX {
                    data[s * c + j] = best_v;
                    argmax[s * c + j] = best;
                }
            }
        }
        let out = Tensor::matrix(segs, c, data)?;
        self.push("segment_max", Op::SegmentMax(a, argmax), out)
    }

    /// Per segment: softmax of `scores` (`n×1` or length-`n`) weighting the
    /// rows of `values` (`n×d`). Empty segments give a zero row.
    pub fn segment_softmax_weighted_sum(&mut self, scores: Var, values: Var, offsets: &[usize]) -> Result<Var> {
        let sv = &self.nodes[scores.0].value;
        let vv = &self.nodes[values.0].value;
        let (n, d) = vv.dims();
        if sv.len() != n || !(sv.shape().len() == 1 || sv.cols() == 1) {
            return Err(Error::shape(
                "segment_softmax_weighted_sum",
                format!("scores {:?} vs values {:?}", sv.shape(), vv.shape()),
            ));
        }
        check_offsets("segment_softmax_weighted_sum", offsets, n)?;
        let segs = offsets.len() - 1;
        let s = sv.data();
        let mut weights = vec![0.0; n];
        let mut data = vec![0.0; segs * d];
        for g in 0..segs {
            let (lo, hi) = (offsets[g], offsets[g + 1]);
            if lo == hi {
                continue;
            }
            let m = s[lo..hi].iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let mut z = 0.0;
            for r in lo..hi {
                weights[r] = (s[r] - m).exp();
                z += weights[r];
            }
            let out = &mut data[g * d..(g + 1) * d];
            for r in lo..hi {
                weights[r] /= z;
                for (o, x) in out.iter_mut().zip(vv.row(r)) {
                    *o += weights[r] * x;
                }
            }
        }
        let out = Tensor::matrix(segs, d, data)?;
        let op = Op::SegmentSoftmaxSum {
            scores,
            values,
            offsets: offsets.into(),
            weights,
        };
        self.push("segment_softmax_weighted_sum", op, out)
    }

    /// Softmax weights computed by a `segment_softmax_weighted_sum` node.
    pub fn softmax_weights(&self, v: Var) -> Option<&[f64]> {
        match &self.nodes[v.0].op {
            Op::SegmentSoftmaxSum { weights, .. } => Some(weights),
            _ => None,
        }
    }

    /// Sum of all entries, as a scalar.
    pub fn sum(&mut self, a: Var) -> Result<Var> {
        let s = self.nodes[a.0].value.data().iter().sum();
        self.push("sum", Op::Sum(a), Tensor::scalar(s))
    }

    /// Mean over the batch of
    /// `−[w·y·log σ(z) + (1−y)·log(1−σ(z))]`, evaluated with softplus.
    /// Labels are constants; only the logits receive gradient.
    pub fn weighted_bce(&mut self, logits: Var, labels: &[f64], pos_weight: f64) -> Result<Var> {
        let z = &self.nodes[logits.0].value;
        if z.len() != labels.len() || labels.is_empty() {
            return Err(Error::shape(
                "weighted_bce",
                format!("{} logits vs {} labels", z.len(), labels.len()),
            ));
        }
        if !(pos_weight > 0.0 && pos_weight.is_finite()) {
            return Err(Error::data(format!("pos_weight must be positive, got {pos_weight}")));
        }
        let loss = bce_value(z.data(), labels, pos_weight);
        let op = Op::WeightedBce {
            logits,
            labels: labels.into(),
            pos_weight,
        };
        self.push("weighted_bce", op, Tensor::scalar(loss))
    }

    /// Reverse sweep from a scalar `loss`.
    pub fn backward(&self, loss: Var) -> Result<Gradients> {
        let lv = &self.nodes[loss.0].value;
        if !lv.is_scalar() {
            return Err(Error::shape("backward", format!("loss must be scalar, got {:?}", lv.shape())));
        }
        let mut grads: Vec<Option<Tensor>> = (0..self.nodes.len()).map(|_| None).collect();
        grads[loss.0] = Some(lv.with_data(vec![1.0]));

        for idx in (0..=loss.0).rev() {
            let Some(g) = grads[idx].take() else { continue };
            let node = &self.nodes[idx];
            let out = &node.value;
            match &node.op {
                Op::Leaf => {}
                Op::MatMul(a, b) => {
                    let av = self.value(*a);
                    let bv = self.value(*b);
                    let (n, k) = av.dims();
                    let m = out.cols();
                    let ga = matmul_bt(g.data(), bv.data(), n, k, m);
                    let gb = matmul_at(av.data(), g.data(), n, k, m);
                    accumulate(&mut grads, *a, av, ga);
                    accumulate(&mut grads, *b, bv, gb);
                }
                Op::Add(a, b, broadcast) => {
                    let bv = self.value(*b);
                    let gb = if *broadcast {
                        let c = bv.len();
                        let mut acc = vec![0.0; c];
                        for row in g.data().chunks(c) {
                            for (s, x) in acc.iter_mut().zip(row) {
                                *s += x;
                            }
                        }
                        acc
                    } else {
                        g.data().to_vec()
                    };
                    accumulate(&mut grads, *b, bv, gb);
                    accumulate(&mut grads, *a, self.value(*a), g.data().to_vec());
                }
                Op::ConcatCols(a, b) => {
                    let (ca, cb) = (self.value(*a).cols(), self.value(*b).cols());
                    let mut ga = Vec::with_capacity(out.rows() * ca);
                    let mut gb = Vec::with_capacity(out.rows() * cb);
                    for row in g.data().chunks(ca + cb) {
                        ga.extend_from_slice(&row[..ca]);
                        gb.extend_from_slice(&row[ca..]);
                    }
                    accumulate(&mut grads, *a, self.value(*a), ga);
                    accumulate(&mut grads, *b, self.value(*b), gb);
                }
                Op::Relu(a) => {
                    let x = self.value(*a);
                    let ga = g.data().iter().zip(x.data()).map(|(g, &x)| if x > 0.0 { *g } else { 0.0 }).collect();
                    accumulate(&mut grads, *a, x, ga);
                }
                Op::LeakyRelu(a, alpha) => {
                    let x = self.value(*a);
                    let ga = g
                        .data()
                        .iter()
                        .zip(x.data())
                        .map(|(g, &x)| if x > 0.0 { *g } else { alpha * g })
                        .collect();
                    accumulate(&mut grads, *a, x, ga);
                }
                Op::Sigmoid(a) => {
                    let ga = g.data().iter().zip(out.data()).map(|(g, y)| g * y * (1.0 - y)).collect();
                    accumulate(&mut grads, *a, self.value(*a), ga);
                }
                Op::Mul(a, b) => {
                    let (av, bv) = (self.value(*a), self.value(*b));
                    let ga = g.data().iter().zip(bv.data()).map(|(g, y)| g * y).collect();
                    let gb = g.data().iter().zip(av.data()).map(|(g, x)| g * x).collect();
                    accumulate(&mut grads, *a, av, ga);
                    accumulate(&mut grads, *b, bv, gb);
                }
                Op::L2NormalizeRows(a, norms) => {
                    let c = out.cols();
                    let mut ga = vec![0.0; out.len()];
                    for (i, &norm) in norms.iter().enumerate() {
                        if norm == 0.0 {
                            continue;
                        }
                        let y = out.row(i);
                        let gy = &g.data()[i * c..(i + 1) * c];
                        let dot: f64 = y.iter().zip(gy).map(|(a, b)| a * b).sum();
                        for j in 0..c {
                            ga[i * c + j] = (gy[j] - y[j] * dot) / norm;
                        }
                    }
                    accumulate(&mut grads, *a, self.value(*a), ga);
                }
                Op::GatherRows(a, index) => {
                    let av = self.value(*a);
                    let c = av.cols();
                    let mut ga = vec![0.0; av.len()];
                    for (k, &r) in index.iter().enumerate() {
                        for j in 0..c {
                            ga[r * c + j] += g.data()[k * c + j];
                        }
                    }
                    accumulate(&mut grads, *a, av, ga);
                }
                Op::SegmentMean(a, offsets) => {
                    let av = self.value(*a);
                    let c = av.cols();
                    let mut ga = vec![0.0; av.len()];
                    for s in 0..offsets.len() - 1 {
                        let (lo, hi) = (offsets[s], offsets[s + 1]);
                        let cnt = (hi - lo) as f64;
                        for r in lo..hi {
                            for j in 0..c {
                                ga[r * c + j] = g.data()[s * c + j] / cnt;
                            }
                        }
                    }
                    accumulate(&mut grads, *a, av, ga);
                }
                Op::SegmentMax(a, argmax) => {
                    let av = self.value(*a);
                    let c = av.cols();
                    let mut ga = vec![0.0; av.len()];
                    for (k, &r) in argmax.iter().enumerate() {
                        if r != usize::MAX {
                            ga[r * c + k % c] += g.data()[k];
                        }
                    }
                    accumulate(&mut grads, *a, av, ga);
                }
                Op::SegmentSoftmaxSum {
                    scores,
                    values,
                    offsets,
                    weights,
                } => {
                    let vv = self.value(*values);
                    let d = vv.cols();
                    let mut gv = vec![0.0; vv.len()];
                    let mut gs = vec![0.0; weights.len()];
                    for s in 0..offsets.len() - 1 {
                        let gout = &g.data()[s * d..(s + 1) * d];
                        let o = out.row(s);
                        let base: f64 = o.iter().zip(gout).map(|(a, b)| a * b).sum();
                        for r in offsets[s]..offsets[s + 1] {
                            let w = weights[r];
                            let vr = vv.row(r);
                            let dot: f64 = vr.iter().zip(gout).map(|(a, b)| a * b).sum();
                            gs[r] = w * (dot - base);
                            for j in 0..d {
                                gv[r * d + j] = w * gout[j];
                            }
                        }
                    }
                    accumulate(&mut grads, *values, vv, gv);
                    accumulate(&mut grads, *scores, self.value(*scores), gs);
                }
                Op::Sum(a) => {
                    let av = self.value(*a);
                    let ga = vec![g.data()[0]; av.len()];
                    accumulate(&mut grads, *a, av, ga);
                }
                Op::WeightedBce {
                    logits,
                    labels,
                    pos_weight,
                } => {
                    let z = self.value(*logits);
                    let n = labels.len() as f64;
                    let scale = g.data()[0] / n;
                    let ga = z
                        .data()
                        .iter()
                        .zip(labels.iter())
                        .map(|(&z, &y)| scale * (-pos_weight * y * sigmoid(-z) + (1.0 - y) * sigmoid(z)))
                        .collect();
                    accumulate(&mut grads, *logits, z, ga);
                }
            }
            grads[idx] = Some(g);
        }
        let shapes = self.nodes.iter().map(|n| n.value.shape().to_vec()).collect();
        Ok(Gradients { grads, shapes })
    }
}

/// Loss value used by [`Tape::weighted_bce`].
pub(crate) fn bce_value(logits: &[f64], labels: &[f64], pos_weight: f64) -> f64 {
    let total: f64 = logits
        .iter()
        .zip(labels)
        .map(|(&z, &y)| pos_weight * y * softplus(-z) + (1.0 - y) * softplus(z))
        .sum();
    total / labels.len() as f64
}

fn accumulate(grads: &mut [Option<Tensor>], v: Var, like: &Tensor, g: Vec<f64>) {
    match &mut grads[v.0] {
        Some(acc) => {
            for (a, b) in acc.data_mut().iter_mut().zip(g) {
                *a += b;
            }
        }
        slot @ None => *slot = Some(like.with_data(g)),
    }
}
