use serde::{Deserialize, Serialize};

use crate::autodiff::params::{ParamGrads, ParamId, ParamStore};
use crate::autodiff::value::Value;
use crate::error::{Error, Result};

/// Optimizer hyperparameters. Defaults follow the training settings used
/// throughout the experiments (note the unusually large epsilon, kept
/// verbatim from the reported configuration).
#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq)]
pub struct AdamConfig {
    pub lr: f64,
    pub weight_decay: f64,
    pub eps: f64,
    pub beta1: f64,
    pub beta2: f64,
}

impl Default for AdamConfig {
    fn default() -> Self {
        AdamConfig { lr: 1e-3, weight_decay: 1e-6, eps: 1e-3, beta1: 0.9, beta2: 0.999 }
    }
}

/// First/second moment accumulators, one pair per parameter tensor.
pub struct AdamState {
    pub cfg: AdamConfig,
    pub step: u64,
    m: Vec<Value>,
    v: Vec<Value>,
}

impl AdamState {
    pub fn new(store: &ParamStore, cfg: AdamConfig) -> Self {
        let m = store.iter().map(|(_, p)| Value::zeros(p.value.shape.clone())).collect();
        let v = store.iter().map(|(_, p)| Value::zeros(p.value.shape.clone())).collect();
        AdamState { cfg, step: 0, m, v }
    }

    /// One update. Weight decay couples additively into the gradient
    /// (classic L2). Parameters without a gradient entry are left untouched.
    pub fn step(&mut self, store: &mut ParamStore, grads: &ParamGrads) -> Result<()> {
        self.step += 1;
        let t = self.step as i32;
        let b1 = self.cfg.beta1;
        let b2 = self.cfg.beta2;
        let bc1 = 1.0 - b1.powi(t);
        let bc2 = 1.0 - b2.powi(t);
        let n = store.len();
        for idx in 0..n {
            let pid = ParamId(idx);
            let Some(grad) = grads.get(pid) else { continue };
            if grad.shape != store.get(pid).value.shape {
                return Err(Error::Dimension {
                    op: "adam_step",
                    detail: format!(
                        "grad shape {:?} vs param {:?} for {}",
                        grad.shape,
                        store.get(pid).value.shape,
                        store.get(pid).path
                    ),
                });
            }
            let grad = grad.clone();
            let mstate = &mut self.m[idx];
            let vstate = &mut self.v[idx];
            let theta = store.value_mut(pid);
            for k in 0..theta.data.len() {
                let g = grad.data[k] + self.cfg.weight_decay * theta.data[k];
                mstate.data[k] = b1 * mstate.data[k] + (1.0 - b1) * g;
                vstate.data[k] = b2 * vstate.data[k] + (1.0 - b2) * g * g;
                let mhat = mstate.data[k] / bc1;
                let vhat = vstate.data[k] / bc2;
                theta.data[k] -= self.cfg.lr * mhat / (vhat.sqrt() + self.cfg.eps);
            }
        }
        Ok(())
    }
}
