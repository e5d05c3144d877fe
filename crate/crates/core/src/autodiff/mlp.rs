use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::autodiff::params::{ParamId, ParamStore, Session};
use crate::autodiff::tape::Id;
use crate::autodiff::value::Value;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Activation {
    Tanh,
    Identity,
    Softplus,
}

#[derive(Clone, Debug)]
pub struct Layer {
    pub weight: ParamId, // [in, out]
    pub bias: ParamId,   // [out]
    pub activation: Activation,
}

/// Fully connected stack; weights stored `[in, out]` so a batch of row
/// vectors maps as `x @ W + b`.
#[derive(Clone, Debug, Default)]
pub struct Mlp {
    pub layers: Vec<Layer>,
}

impl Mlp {
    /// `dims = [in, h1, ..., out]`; hidden layers get `hidden`, the last
    /// layer gets `output`. Weights are Glorot-normal, biases zero.
    pub fn new(
        store: &mut ParamStore,
        prefix: &str,
        dims: &[usize],
        hidden: Activation,
        output: Activation,
        rng: &mut impl Rng,
    ) -> Result<Self> {
        if dims.len() < 2 {
            return Err(Error::Dimension {
                op: "mlp",
                detail: format!("need at least [in, out] dims, got {dims:?}"),
            });
        }
        let mut layers = Vec::with_capacity(dims.len() - 1);
        for l in 0..dims.len() - 1 {
            let (fan_in, fan_out) = (dims[l], dims[l + 1]);
            let std = (2.0 / (fan_in + fan_out) as f64).sqrt();
            let normal = Normal::new(0.0, std).expect("finite std");
            let wdata: Vec<f64> = (0..fan_in * fan_out).map(|_| normal.sample(rng)).collect();
            let weight =
                store.insert(format!("{prefix}.{l}.weight"), Value::new(vec![fan_in, fan_out], wdata)?);
            let bias = store.insert(format!("{prefix}.{l}.bias"), Value::zeros(vec![fan_out]));
            let activation = if l == dims.len() - 2 { output } else { hidden };
            layers.push(Layer { weight, bias, activation });
        }
        Ok(Mlp { layers })
    }

    pub fn in_dim(&self, store: &ParamStore) -> usize {
        store.get(self.layers[0].weight).value.shape[0]
    }

    pub fn out_dim(&self, store: &ParamStore) -> usize {
        let last = self.layers.last().expect("nonempty mlp");
        store.get(last.weight).value.shape[1]
    }

    /// Forward a batch `[n, in] -> [n, out]`.
    pub fn forward(&self, s: &mut Session, x: Id) -> Result<Id> {
        let mut h = x;
        for layer in &self.layers {
            let w = s.param(layer.weight);
            let b = s.param(layer.bias);
            let lin = s.tape.matmul(h, w)?;
            let aff = s.tape.add_rowvec(lin, b)?;
            h = match layer.activation {
                Activation::Tanh => s.tape.tanh(aff)?,
                Activation::Identity => aff,
                Activation::Softplus => s.tape.softplus(aff)?,
            };
        }
        Ok(h)
    }

    pub fn param_ids(&self) -> Vec<ParamId> {
        self.layers.iter().flat_map(|l| [l.weight, l.bias]).collect()
    }
}
