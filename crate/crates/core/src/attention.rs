//! Scaled dot-product self-attention over a batch of latent rows, and the
//! multiplicative-residual fusion `z + z * SA(z)`.

use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::autodiff::{Id, ParamId, ParamStore, Session};
use crate::autodiff::Value;
use crate::error::{Error, Result};

/// Query/key/value maps, all square in the latent dimension; the parameter
/// count does not depend on the batch size.
#[derive(Clone, Debug)]
pub struct AttentionParams {
    pub wq: ParamId, // [d, d]
    pub wk: ParamId,
    pub wv: ParamId,
    pub bq: ParamId, // [d]
    pub bk: ParamId,
    pub bv: ParamId,
    pub dim: usize,
}

impl AttentionParams {
    /// Weights ~ N(0, 0.01), biases zero, so the initial context is close to
    /// a uniform average of the values.
    pub fn new(store: &mut ParamStore, prefix: &str, dim: usize, rng: &mut impl Rng) -> Self {
        let normal = Normal::new(0.0, 0.1).expect("finite std");
        let mut mat = |name: &str, rng: &mut dyn rand::RngCore| {
            let data = (0..dim * dim).map(|_| normal.sample(rng)).collect();
            store.insert(format!("{prefix}.{name}"), Value { shape: vec![dim, dim], data })
        };
        let wq = mat("wq", rng);
        let wk = mat("wk", rng);
        let wv = mat("wv", rng);
        let bq = store.insert(format!("{prefix}.bq"), Value::zeros(vec![dim]));
        let bk = store.insert(format!("{prefix}.bk"), Value::zeros(vec![dim]));
        let bv = store.insert(format!("{prefix}.bv"), Value::zeros(vec![dim]));
        AttentionParams { wq, wk, wv, bq, bk, bv, dim }
    }

    pub fn param_ids(&self) -> Vec<ParamId> {
        vec![self.wq, self.wk, self.wv, self.bq, self.bk, self.bv]
    }
}

/// Self-attention over `x: [n, d]` rows.
///
/// Row m holds sample m; queries/keys/values are affine maps of each row,
/// logits are scaled by `1/sqrt(d)`, and each output row is the
/// attention-weighted sum of all value rows.
pub fn self_attention(s: &mut Session, x: Id, params: &AttentionParams) -> Result<Id> {
    let (n, d) = s.tape.value(x).dims2()?;
    if n == 0 {
        return Err(Error::EmptyBatch);
    }
    if d != params.dim {
        return Err(Error::Dimension {
            op: "self_attention",
            detail: format!("input dim {d} vs attention dim {}", params.dim),
        });
    }
    let affine = |s: &mut Session, w: ParamId, b: ParamId, x: Id| -> Result<Id> {
        let wi = s.param(w);
        let bi = s.param(b);
        let wt = s.tape.transpose(wi)?;
        let xw = s.tape.matmul(x, wt)?;
        s.tape.add_rowvec(xw, bi)
    };
    let q = affine(s, params.wq, params.bq, x)?;
    let k = affine(s, params.wk, params.bk, x)?;
    let v = affine(s, params.wv, params.bv, x)?;
    let kt = s.tape.transpose(k)?;
    let logits = s.tape.matmul(q, kt)?; // [n, n]; row i = query i against all keys
    let scaled = s.tape.scale(logits, 1.0 / (d as f64).sqrt())?;
    let weights = s.tape.softmax_lastdim(scaled)?;
    s.tape.matmul(weights, v)
}

/// Attentive fusion `z + z * z_att` (elementwise product).
pub fn attentive_fuse(s: &mut Session, z: Id, z_att: Id) -> Result<Id> {
    if s.tape.value(z).shape != s.tape.value(z_att).shape {
        return Err(Error::Dimension {
            op: "attentive_fuse",
            detail: format!(
                "latent {:?} vs context {:?}",
                s.tape.value(z).shape,
                s.tape.value(z_att).shape
            ),
        });
    }
    let prod = s.tape.mul(z, z_att)?;
    s.tape.add(z, prod)
}
