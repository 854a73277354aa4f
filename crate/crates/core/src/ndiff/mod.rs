//! Dense rank-≤2 tensors and a reverse-mode tape covering the operations the
//! classifiers need: matmul, broadcast add, column concat, relu/leaky relu,
//! sigmoid, elementwise product, row L2 normalization, row gather, segment
//! mean/max/softmax-weighted-sum, sum, and weighted logistic loss.

mod gradcheck;
mod tape;
mod tensor;

pub use gradcheck::{grad_check, GradCheckReport};
pub use tape::{sigmoid, softplus, Gradients, OpKind, Tape, Var, DEFAULT_LEAKY_ALPHA};
pub use tensor::Tensor;

use std::collections::BTreeMap;

/// Named parameter tensors.
pub type ParamMap = BTreeMap<String, Tensor>;

/// Tape handles for each named parameter.
pub type ParamVars = BTreeMap<String, Var>;

/// Validate segment offsets: starts at 0, monotone, ends at `rows`.
pub(crate) fn check_offsets(op: &'static str, offsets: &[usize], rows: usize) -> crate::Result<()> {
    let ok = !offsets.is_empty()
        && offsets[0] == 0
        && offsets.windows(2).all(|w| w[0] <= w[1])
        && *offsets.last().unwrap() == rows;
    if ok {
        Ok(())
    } else {
        Err(crate::Error::shape(
            op,
            format!("segment offsets must be monotone from 0 to {rows}"),
        ))
    }
}
