//! Planar normalizing flows with exact log-density accounting.
//!
//! Each bijection is `g(z) = z + u_hat * tanh(w'z + b)` with the direction
//! `u_hat` projected so that `w'u_hat >= -1`, which keeps the map invertible
//! and the determinant lemma applicable. A chain applies K such maps and
//! accumulates the per-sample sum of `ln|1 + u_hat'psi(z)|`.

use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::autodiff::{Id, ParamId, ParamStore, Session, Value};
use crate::error::{Error, Result};

/// Threshold below which `|1 + u'psi|` is treated as a singular Jacobian.
const SINGULAR_EPS: f64 = 1e-12;

/// Parameters of one planar bijection.
#[derive(Clone, Debug)]
pub struct PlanarFlow {
    pub u: ParamId, // [d]
    pub w: ParamId, // [d]
    pub b: ParamId, // [1]
}

/// Ordered chain of planar bijections over one latent dimension.
/// K = 0 is the identity chain.
#[derive(Clone, Debug, Default)]
pub struct FlowChain {
    pub flows: Vec<PlanarFlow>,
    pub dim: usize,
}

impl FlowChain {
    /// Near-identity initialization: u, w ~ N(0, 0.01), b = 0.
    pub fn new(
        store: &mut ParamStore,
        prefix: &str,
        dim: usize,
        k: usize,
        rng: &mut impl Rng,
    ) -> Self {
        let normal = Normal::new(0.0, 0.1).expect("finite std");
        let mut flows = Vec::with_capacity(k);
        for i in 0..k {
            let sample = |rng: &mut dyn rand::RngCore, n: usize| -> Vec<f64> {
                (0..n).map(|_| normal.sample(rng)).collect()
            };
            let u = store.insert(
                format!("{prefix}.{i}.u"),
                Value { shape: vec![dim], data: sample(rng, dim) },
            );
            let w = store.insert(
                format!("{prefix}.{i}.w"),
                Value { shape: vec![dim], data: sample(rng, dim) },
            );
            let b = store.insert(format!("{prefix}.{i}.b"), Value::zeros(vec![1]));
            flows.push(PlanarFlow { u, w, b });
        }
        FlowChain { flows, dim }
    }

    pub fn param_ids(&self) -> Vec<ParamId> {
        self.flows.iter().flat_map(|f| [f.u, f.w, f.b]).collect()
    }
}

/// Dot product of two `[d]` vectors as a `[1]` tensor.
fn vec_dot(s: &mut Session, a: Id, b: Id) -> Result<Id> {
    let d = s.tape.value(a).numel();
    let ar = s.tape.reshape(a, vec![1, d])?;
    let br = s.tape.reshape(b, vec![d, 1])?;
    let m = s.tape.matmul(ar, br)?;
    s.tape.reshape(m, vec![1])
}

/// Project `u` so the flow stays invertible:
/// `u_hat = u + (m(w'u) - w'u) * w / ||w||^2` with `m(a) = -1 + softplus(a)`.
/// The projection is differentiable and recorded.
pub fn constrain_u(s: &mut Session, u: Id, w: Id) -> Result<Id> {
    let wu = vec_dot(s, w, u)?;
    let ww = vec_dot(s, w, w)?;
    if s.tape.value(ww).data[0] == 0.0 {
        return Err(Error::DegenerateDirection);
    }
    let sp = s.tape.softplus(wu)?;
    let m = s.tape.add_scalar(sp, -1.0)?;
    let diff = s.tape.sub(m, wu)?;
    let coef = s.tape.div(diff, ww)?; // [1]
    let shift = s.tape.mul(w, coef)?; // scalar broadcast over [d]
    s.tape.add(u, shift)
}

/// One planar bijection applied to a batch of rows `[n, d]`.
///
/// Returns the transformed batch and the per-sample `ln|1 + u_hat'psi(z)|`
/// as an `[n, 1]` column.
pub fn planar_forward(s: &mut Session, z: Id, flow: &PlanarFlow) -> Result<(Id, Id)> {
    let (_, d) = s.tape.value(z).dims2()?;
    let u = s.param(flow.u);
    let w = s.param(flow.w);
    let b = s.param(flow.b);
    if s.tape.value(u).shape != [d] {
        return Err(Error::Dimension {
            op: "planar_forward",
            detail: format!("flow dim {:?} vs input [{d}]", s.tape.value(u).shape),
        });
    }
    let u_hat = constrain_u(s, u, w)?;

    let w_col = s.tape.reshape(w, vec![d, 1])?;
    let lin = s.tape.matmul(z, w_col)?; // [n, 1]
    let pre = s.tape.add(lin, b)?; // b broadcasts
    let t = s.tape.tanh(pre)?; // [n, 1]

    let u_row = s.tape.reshape(u_hat, vec![1, d])?;
    let bump = s.tape.matmul(t, u_row)?; // [n, d]
    let z_next = s.tape.add(z, bump)?;

    // log|det J| = ln|1 + (u_hat'w) tanh'(pre)|
    let uw = vec_dot(s, u_hat, w)?;
    let t2 = s.tape.square(t)?;
    let nt2 = s.tape.neg(t2)?;
    let dtanh = s.tape.add_scalar(nt2, 1.0)?; // [n, 1]
    let inner = s.tape.mul(dtanh, uw)?;
    let det = s.tape.add_scalar(inner, 1.0)?;
    let min_abs = s.tape.value(det).data.iter().fold(f64::INFINITY, |m, x| m.min(x.abs()));
    if min_abs < SINGULAR_EPS {
        return Err(Error::SingularJacobian { min_abs });
    }
    let det_abs = s.tape.abs(det)?;
    let log_det = s.tape.log(det_abs)?;
    Ok((z_next, log_det))
}

/// Apply a whole chain; returns `(z_K, sum of log-determinants)` with the
/// sum as an `[n, 1]` column (zeros for the empty chain).
pub fn chain_forward(s: &mut Session, z0: Id, chain: &FlowChain) -> Result<(Id, Id)> {
    let (n, _) = s.tape.value(z0).dims2()?;
    let mut z = z0;
    let mut sum_log_det = s.input(Value::zeros(vec![n, 1]));
    for flow in &chain.flows {
        let (z_next, log_det) = planar_forward(s, z, flow)?;
        z = z_next;
        sum_log_det = s.tape.add(sum_log_det, log_det)?;
    }
    Ok((z, sum_log_det))
}

/// Change-of-variables bookkeeping: `ln q_K(z_K) = ln q_0(z_0) - sum_log_det`.
pub fn flow_log_density(s: &mut Session, log_q0: Id, sum_log_det: Id) -> Result<Id> {
    s.tape.sub(log_q0, sum_log_det)
}
