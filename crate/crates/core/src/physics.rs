//! Physics decoder: a trainable Hamiltonian vector field integrated by
//! fixed-step RK4, bridged to observation channels by affine maps.
//!
//! The field `(-dH/dq, dH/dp)` is obtained by running a recorded backward
//! pass over the energy network inside the forward computation, so the
//! trajectory (and anything downstream) stays differentiable with respect to
//! the energy network's weights — training differentiates through a gradient.

use rand::Rng;

use crate::autodiff::{Activation, Id, Mlp, ParamId, ParamStore, Session, Value};
use crate::error::{Error, Result};

/// Scalar energy network `H(p, q, z) -> R`, tanh hidden layers.
#[derive(Clone, Debug)]
pub struct HamiltonianField {
    pub net: Mlp,
    pub dim_z: usize,
}

impl HamiltonianField {
    /// `hidden` are the hidden widths (two layers of 128 by default
    /// elsewhere); input is the 2-dimensional phase state concatenated with
    /// the physics latent.
    pub fn new(
        store: &mut ParamStore,
        prefix: &str,
        dim_z: usize,
        hidden: &[usize],
        rng: &mut impl Rng,
    ) -> Result<Self> {
        let mut dims = vec![2 + dim_z];
        dims.extend_from_slice(hidden);
        dims.push(1);
        let net = Mlp::new(store, prefix, &dims, Activation::Tanh, Activation::Identity, rng)?;
        Ok(HamiltonianField { net, dim_z })
    }

    /// Energy of a batch of states: `state [n, 2]`, `z [n, dim_z]` -> `[n, 1]`.
    pub fn energy(&self, s: &mut Session, state: Id, z: Id) -> Result<Id> {
        let inp = s.tape.concat_lastdim(&[state, z])?;
        self.net.forward(s, inp)
    }

    /// Hamiltonian vector field `(dp/dt, dq/dt) = (-dH/dq, dH/dp)`.
    ///
    /// Rows are independent samples, so seeding the summed energy gives each
    /// row its own state gradient. The backward pass stops at `state` and `z`;
    /// nothing upstream of them is pulled into the field computation.
    pub fn vector_field(&self, s: &mut Session, state: Id, z: Id) -> Result<Id> {
        let (n, two) = s.tape.value(state).dims2()?;
        if two != 2 {
            return Err(Error::Dimension {
                op: "vector_field",
                detail: format!("state must be [n, 2], got [{n}, {two}]"),
            });
        }
        // a constant state (standalone evaluation) still needs dH/dstate
        s.tape.force_requires_grad(state);
        let h = self.energy(s, state, z)?;
        if !s.tape.value(h).all_finite() {
            return Err(Error::NumericDomain { op: "hamiltonian", detail: "non-finite energy".into() });
        }
        let total = s.tape.sum(h)?;
        let gm = s.tape.backward_stopping(total, None, &[state, z])?;
        let dstate = match gm.get(state) {
            Some(id) => id,
            // energy disconnected from the state (frozen graph): zero field
            None => s.input(Value::zeros(vec![n, 2])),
        };
        let dp = s.tape.slice_lastdim(dstate, 0, 1)?; // dH/dp
        let dq = s.tape.slice_lastdim(dstate, 1, 2)?; // dH/dq
        let neg_dq = s.tape.neg(dq)?;
        s.tape.concat_lastdim(&[neg_dq, dp])
    }
}

/// Uniform output grid with fixed RK4 substeps per interval.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct IntegrationGrid {
    pub t0: f64,
    pub t1: f64,
    pub points: usize,
    pub substeps: usize,
}

impl IntegrationGrid {
    pub fn new(t0: f64, t1: f64, points: usize, substeps: usize) -> Result<Self> {
        if !(t0 < t1) || points < 2 || substeps < 1 {
            return Err(Error::Config(format!(
                "invalid integration grid: t0 {t0}, t1 {t1}, points {points}, substeps {substeps}"
            )));
        }
        Ok(IntegrationGrid { t0, t1, points, substeps })
    }

    pub fn step(&self) -> f64 {
        (self.t1 - self.t0) / ((self.points - 1) * self.substeps) as f64
    }
}

/// Classical fixed-step RK4 for a time-independent field. Returns the
/// `points` output states including the initial one; every stage is recorded
/// for backward.
pub fn rk4_integrate<F>(s: &mut Session, y0: Id, grid: &IntegrationGrid, mut field: F) -> Result<Vec<Id>>
where
    F: FnMut(&mut Session, Id) -> Result<Id>,
{
    let h = grid.step();
    let mut y = y0;
    let mut out = Vec::with_capacity(grid.points);
    out.push(y);
    let mut step_idx = 0usize;
    for _ in 1..grid.points {
        for _ in 0..grid.substeps {
            step_idx += 1;
            y = rk4_step(s, y, h, &mut field).map_err(|e| match e {
                Error::NumericDomain { .. } => Error::Diverged { step: step_idx },
                other => other,
            })?;
            if !s.tape.value(y).all_finite() {
                return Err(Error::Diverged { step: step_idx });
            }
        }
        out.push(y);
    }
    Ok(out)
}

fn rk4_step<F>(s: &mut Session, y: Id, h: f64, field: &mut F) -> Result<Id>
where
    F: FnMut(&mut Session, Id) -> Result<Id>,
{
    let k1 = field(s, y)?;
    let k1h = s.tape.scale(k1, h / 2.0)?;
    let y2 = s.tape.add(y, k1h)?;
    let k2 = field(s, y2)?;
    let k2h = s.tape.scale(k2, h / 2.0)?;
    let y3 = s.tape.add(y, k2h)?;
    let k3 = field(s, y3)?;
    let k3h = s.tape.scale(k3, h)?;
    let y4 = s.tape.add(y, k3h)?;
    let k4 = field(s, y4)?;

    let k2x2 = s.tape.scale(k2, 2.0)?;
    let k3x2 = s.tape.scale(k3, 2.0)?;
    let s12 = s.tape.add(k1, k2x2)?;
    let s123 = s.tape.add(s12, k3x2)?;
    let total = s.tape.add(s123, k4)?;
    let inc = s.tape.scale(total, h / 6.0)?;
    s.tape.add(y, inc)
}

/// Affine bridges around the 1-dof phase space: an initial-state encoder
/// `(x0, z) -> (p0, q0)` and a readout `(p, q) -> M channels`.
#[derive(Clone, Debug)]
pub struct ReadoutParams {
    pub init_w: ParamId,    // [m + dim_z, 2]
    pub init_b: ParamId,    // [2]
    pub readout_w: ParamId, // [2, m]
    pub readout_b: ParamId, // [m]
    pub channels: usize,
}

impl ReadoutParams {
    pub fn new(
        store: &mut ParamStore,
        prefix: &str,
        channels: usize,
        dim_z: usize,
        rng: &mut impl Rng,
    ) -> Self {
        use rand_distr::{Distribution, Normal};
        let normal = Normal::new(0.0, 0.1).expect("finite std");
        let iw = (0..(channels + dim_z) * 2).map(|_| normal.sample(rng)).collect();
        let rw = (0..2 * channels).map(|_| normal.sample(rng)).collect();
        let init_w = store.insert(
            format!("{prefix}.init.weight"),
            Value { shape: vec![channels + dim_z, 2], data: iw },
        );
        let init_b = store.insert(format!("{prefix}.init.bias"), Value::zeros(vec![2]));
        let readout_w = store.insert(
            format!("{prefix}.readout.weight"),
            Value { shape: vec![2, channels], data: rw },
        );
        let readout_b = store.insert(format!("{prefix}.readout.bias"), Value::zeros(vec![channels]));
        ReadoutParams { init_w, init_b, readout_w, readout_b, channels }
    }

    pub fn param_ids(&self) -> Vec<ParamId> {
        vec![self.init_w, self.init_b, self.readout_w, self.readout_b]
    }
}

/// Full physics branch: encode `(x0, z)` to a phase point, integrate the
/// Hamiltonian field, read every state out to observation channels and stack
/// them time-major into `[n, m * points]`.
pub fn physics_decode(
    s: &mut Session,
    z: Id,
    x0: Id,
    field: &HamiltonianField,
    readout: &ReadoutParams,
    grid: &IntegrationGrid,
) -> Result<Id> {
    let inp = s.tape.concat_lastdim(&[x0, z])?;
    let iw = s.param(readout.init_w);
    let ib = s.param(readout.init_b);
    let lin = s.tape.matmul(inp, iw)?;
    let state0 = s.tape.add_rowvec(lin, ib)?;
    let traj = rk4_integrate(s, state0, grid, |s, y| field.vector_field(s, y, z))?;
    let rw = s.param(readout.readout_w);
    let rb = s.param(readout.readout_b);
    let mut frames = Vec::with_capacity(traj.len());
    for y in traj {
        let m = s.tape.matmul(y, rw)?;
        frames.push(s.tape.add_rowvec(m, rb)?);
    }
    s.tape.concat_lastdim(&frames)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    /// Analytic harmonic oscillator field (-q, p) built from tape ops.
    fn oscillator_field(s: &mut Session, y: Id) -> Result<Id> {
        let p = s.tape.slice_lastdim(y, 0, 1)?;
        let q = s.tape.slice_lastdim(y, 1, 2)?;
        let nq = s.tape.neg(q)?;
        s.tape.concat_lastdim(&[nq, p])
    }

    #[test]
    fn zero_field_constant_trajectory() {
        let store = ParamStore::new();
        let mut s = Session::new(&store);
        let y0 = s.input(Value::new(vec![1, 2], vec![0.3, -0.7]).unwrap());
        let grid = IntegrationGrid::new(0.0, 1.0, 5, 2).unwrap();
        let traj = rk4_integrate(&mut s, y0, &grid, |s, y| {
            let z = s.tape.scale(y, 0.0)?;
            Ok(z)
        })
        .unwrap();
        assert_eq!(traj.len(), 5);
        for y in traj {
            assert_eq!(s.tape.value(y).data, vec![0.3, -0.7]);
        }
    }

    #[test]
    fn exponential_growth_reaches_e() {
        // dy/dt = y over [0,1] with 100 steps: y(1) = e to 1e-8.
        let store = ParamStore::new();
        let mut s = Session::new(&store);
        let y0 = s.input(Value::new(vec![1, 1], vec![1.0]).unwrap());
        let grid = IntegrationGrid::new(0.0, 1.0, 101, 1).unwrap();
        let traj = rk4_integrate(&mut s, y0, &grid, |s, y| s.tape.scale(y, 1.0)).unwrap();
        let last = s.tape.value(*traj.last().unwrap()).data[0];
        assert!((last - std::f64::consts::E).abs() < 1e-8, "{last}");
    }

    #[test]
    fn oscillator_one_period_returns_and_conserves_energy() {
        let store = ParamStore::new();
        let mut s = Session::new(&store);
        let y0 = s.input(Value::new(vec![1, 2], vec![1.0, 0.0]).unwrap());
        let period = 2.0 * std::f64::consts::PI;
        let grid = IntegrationGrid::new(0.0, period, 101, 1).unwrap();
        let traj = rk4_integrate(&mut s, y0, &grid, oscillator_field).unwrap();
        let last = s.tape.value(*traj.last().unwrap()).data.clone();
        assert!((last[0] - 1.0).abs() < 1e-5 && last[1].abs() < 1e-5, "{last:?}");
        let h0 = 0.5 * (1.0f64);
        let mut max_drift = 0.0f64;
        for y in &traj {
            let v = s.tape.value(*y);
            let h = 0.5 * (v.data[0] * v.data[0] + v.data[1] * v.data[1]);
            max_drift = max_drift.max((h - h0).abs());
        }
        assert!(max_drift < 1e-6, "energy drift {max_drift}");
    }

    #[test]
    fn rk4_is_fourth_order() {
        // halving the step cuts the endpoint error by ~16x
        let endpoint_err = |steps: usize| -> f64 {
            let store = ParamStore::new();
            let mut s = Session::new(&store);
            let y0 = s.input(Value::new(vec![1, 2], vec![1.0, 0.0]).unwrap());
            let grid = IntegrationGrid::new(0.0, 2.0 * std::f64::consts::PI, steps + 1, 1).unwrap();
            let traj = rk4_integrate(&mut s, y0, &grid, oscillator_field).unwrap();
            let last = s.tape.value(*traj.last().unwrap()).data.clone();
            ((last[0] - 1.0).powi(2) + last[1].powi(2)).sqrt()
        };
        let e1 = endpoint_err(50);
        let e2 = endpoint_err(100);
        let ratio = e1 / e2;
        assert!((12.0..=20.0).contains(&ratio), "order ratio {ratio}");
    }

    #[test]
    fn field_matches_finite_differences_of_energy() {
        let mut rng = ChaCha20Rng::seed_from_u64(4);
        let mut store = ParamStore::new();
        let field = HamiltonianField::new(&mut store, "h", 2, &[16, 16], &mut rng).unwrap();
        for _ in 0..20 {
            let state: Vec<f64> = (0..2).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let z: Vec<f64> = (0..2).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let mut s = Session::new(&store);
            let st = s.input(Value::new(vec![1, 2], state.clone()).unwrap());
            let zi = s.input(Value::new(vec![1, 2], z.clone()).unwrap());
            let f = field.vector_field(&mut s, st, zi).unwrap();
            let fv = s.tape.value(f).data.clone();

            let energy_at = |p: f64, q: f64| -> f64 {
                let mut s = Session::new(&store);
                let st = s.input(Value::new(vec![1, 2], vec![p, q]).unwrap());
                let zi = s.input(Value::new(vec![1, 2], z.clone()).unwrap());
                let h = field.energy(&mut s, st, zi).unwrap();
                s.tape.value(h).data[0]
            };
            let hstep = 1e-5;
            let dhdp = (energy_at(state[0] + hstep, state[1]) - energy_at(state[0] - hstep, state[1]))
                / (2.0 * hstep);
            let dhdq = (energy_at(state[0], state[1] + hstep) - energy_at(state[0], state[1] - hstep))
                / (2.0 * hstep);
            let rel = |a: f64, b: f64| (a - b).abs() / a.abs().max(b.abs()).max(1e-8);
            assert!(rel(fv[0], -dhdq) < 1e-6, "dp/dt {} vs {}", fv[0], -dhdq);
            assert!(rel(fv[1], dhdp) < 1e-6, "dq/dt {} vs {}", fv[1], dhdp);
        }
    }

    #[test]
    fn dead_q_inputs_zero_dp() {
        // Zero the first-layer weights that read q: H independent of q -> dp/dt = 0.
        let mut rng = ChaCha20Rng::seed_from_u64(9);
        let mut store = ParamStore::new();
        let field = HamiltonianField::new(&mut store, "h", 1, &[8], &mut rng).unwrap();
        let w0 = field.net.layers[0].weight;
        let (in_dim, out_dim) = {
            let v = &store.get(w0).value;
            (v.shape[0], v.shape[1])
        };
        // input order is (p, q, z...): row 1 of the weight matrix reads q
        for j in 0..out_dim {
            store.value_mut(w0).data[1 * out_dim + j] = 0.0;
        }
        assert_eq!(in_dim, 3);
        let mut s = Session::new(&store);
        let st = s.input(Value::new(vec![2, 2], vec![0.4, -0.3, -1.0, 0.8]).unwrap());
        let z = s.input(Value::new(vec![2, 1], vec![0.2, -0.5]).unwrap());
        let f = field.vector_field(&mut s, st, z).unwrap();
        let v = s.tape.value(f);
        assert!(v.data[0].abs() < 1e-14 && v.data[2].abs() < 1e-14, "{:?}", v.data);
    }

    #[test]
    fn constant_energy_zero_field_and_zero_second_order() {
        let mut rng = ChaCha20Rng::seed_from_u64(14);
        let mut store = ParamStore::new();
        let field = HamiltonianField::new(&mut store, "h", 1, &[8], &mut rng).unwrap();
        for pid in field.net.param_ids() {
            store.value_mut(pid).data.iter_mut().for_each(|x| *x = 0.0);
        }
        let mut s = Session::new(&store);
        let st = s.input(Value::new(vec![1, 2], vec![0.7, -0.1]).unwrap());
        let z = s.input(Value::new(vec![1, 1], vec![0.3]).unwrap());
        let f = field.vector_field(&mut s, st, z).unwrap();
        assert!(s.tape.value(f).data.iter().all(|x| *x == 0.0));
        let sq = s.tape.square(f).unwrap();
        let loss = s.tape.sum(sq).unwrap();
        let grads = s.grads(loss).unwrap();
        for pid in field.net.param_ids() {
            if let Some(g) = grads.get(pid) {
                assert!(g.data.iter().all(|x| *x == 0.0));
            }
        }
    }

    #[test]
    fn divergence_free_field() {
        // d(dp/dt)/dp + d(dq/dt)/dq = -H_qp + H_pq = 0; check numerically.
        let mut rng = ChaCha20Rng::seed_from_u64(21);
        let mut store = ParamStore::new();
        let field = HamiltonianField::new(&mut store, "h", 1, &[12, 12], &mut rng).unwrap();
        let field_at = |p: f64, q: f64| -> Vec<f64> {
            let mut s = Session::new(&store);
            let st = s.input(Value::new(vec![1, 2], vec![p, q]).unwrap());
            let z = s.input(Value::new(vec![1, 1], vec![0.4]).unwrap());
            let f = field.vector_field(&mut s, st, z).unwrap();
            s.tape.value(f).data.clone()
        };
        for _ in 0..20 {
            let p = rng.gen_range(-1.0..1.0);
            let q = rng.gen_range(-1.0..1.0);
            let h = 1e-5;
            let div = (field_at(p + h, q)[0] - field_at(p - h, q)[0]) / (2.0 * h)
                + (field_at(p, q + h)[1] - field_at(p, q - h)[1]) / (2.0 * h);
            assert!(div.abs() < 1e-6, "divergence {div} at ({p}, {q})");
        }
    }

    #[test]
    fn energy_conserved_along_hamiltonian_trajectory() {
        // any H net: 100 steps at h = 0.05, max |H(t) - H(0)| < 1e-5
        let mut rng = ChaCha20Rng::seed_from_u64(31);
        let mut store = ParamStore::new();
        let field = HamiltonianField::new(&mut store, "h", 1, &[16, 16], &mut rng).unwrap();
        let zval = vec![0.6];
        let mut s = Session::new(&store);
        let y0 = s.input(Value::new(vec![1, 2], vec![0.8, -0.4]).unwrap());
        let z = s.input(Value::new(vec![1, 1], zval).unwrap());
        let grid = IntegrationGrid::new(0.0, 5.0, 101, 1).unwrap();
        assert!((grid.step() - 0.05).abs() < 1e-12);
        let traj = rk4_integrate(&mut s, y0, &grid, |s, y| field.vector_field(s, y, z)).unwrap();
        let mut h_vals = Vec::new();
        for y in &traj {
            let h = field.energy(&mut s, *y, z).unwrap();
            h_vals.push(s.tape.value(h).data[0]);
        }
        let h0 = h_vals[0];
        let drift = h_vals.iter().map(|h| (h - h0).abs()).fold(0.0, f64::max);
        assert!(drift < 1e-5, "drift {drift}");
    }

    #[test]
    fn initial_state_exact_and_zero_readout_bias_pattern() {
        let mut rng = ChaCha20Rng::seed_from_u64(41);
        let mut store = ParamStore::new();
        let field = HamiltonianField::new(&mut store, "h", 2, &[8], &mut rng).unwrap();
        let readout = ReadoutParams::new(&mut store, "r", 3, 2, &mut rng);
        store.value_mut(readout.readout_w).data.iter_mut().for_each(|x| *x = 0.0);
        store.value_mut(readout.readout_b).data.copy_from_slice(&[1.0, -2.0, 0.5]);
        let grid = IntegrationGrid::new(0.0, 1.0, 4, 1).unwrap();
        let mut s = Session::new(&store);
        let z = s.input(Value::new(vec![2, 2], vec![0.1, 0.2, -0.3, 0.4]).unwrap());
        let x0 = s.input(Value::new(vec![2, 3], vec![0.5, 1.0, -1.0, 0.0, 0.3, 0.9]).unwrap());
        let f = physics_decode(&mut s, z, x0, &field, &readout, &grid).unwrap();
        let v = s.tape.value(f);
        assert_eq!(v.shape, vec![2, 12]);
        for row in 0..2 {
            for t in 0..4 {
                let frame = &v.data[row * 12 + t * 3..row * 12 + t * 3 + 3];
                assert_eq!(frame, &[1.0, -2.0, 0.5]);
            }
        }
    }

    #[test]
    fn second_order_gradients_through_rk4_match_fd() {
        let mut rng = ChaCha20Rng::seed_from_u64(51);
        let mut store = ParamStore::new();
        let field = HamiltonianField::new(&mut store, "h", 1, &[6], &mut rng).unwrap();
        let readout = ReadoutParams::new(&mut store, "r", 2, 1, &mut rng);
        let grid = IntegrationGrid::new(0.0, 1.0, 6, 1).unwrap();
        let zval = vec![0.5, -0.2];
        let x0val = vec![0.4, -0.6, 0.1, 0.8];
        let eval = |store: &ParamStore| -> f64 {
            let mut s = Session::new(store);
            let z = s.input(Value::new(vec![2, 1], zval[..2].to_vec()).unwrap());
            let x0 = s.input(Value::new(vec![2, 2], x0val.clone()).unwrap());
            let f = physics_decode(&mut s, z, x0, &field, &readout, &grid).unwrap();
            let sq = s.tape.square(f).unwrap();
            let loss = s.tape.sum(sq).unwrap();
            s.tape.value(loss).data[0]
        };
        let mut s = Session::new(&store);
        let z = s.input(Value::new(vec![2, 1], zval[..2].to_vec()).unwrap());
        let x0 = s.input(Value::new(vec![2, 2], x0val.clone()).unwrap());
        let f = physics_decode(&mut s, z, x0, &field, &readout, &grid).unwrap();
        let sq = s.tape.square(f).unwrap();
        let loss = s.tape.sum(sq).unwrap();
        let grads = s.grads(loss).unwrap();
        for pid in field.net.param_ids() {
            // the field is invariant to the energy offset, so the last bias
            // can be legitimately disconnected: treat a missing grad as zero
            let g = grads
                .get(pid)
                .cloned()
                .unwrap_or_else(|| Value::zeros(store.get(pid).value.shape.clone()));
            for k in 0..g.data.len() {
                let h = 1e-5;
                let orig = store.get(pid).value.data[k];
                store.value_mut(pid).data[k] = orig + h;
                let fp = eval(&store);
                store.value_mut(pid).data[k] = orig - h;
                let fm = eval(&store);
                store.value_mut(pid).data[k] = orig;
                let fd = (fp - fm) / (2.0 * h);
                let rel = (g.data[k] - fd).abs() / g.data[k].abs().max(fd.abs()).max(1e-6);
                assert!(rel < 1e-3, "{pid:?}[{k}]: ad {} vs fd {}", g.data[k], fd);
            }
        }
    }

    #[test]
    fn harmonic_readout_is_sinusoidal() {
        // analytic oscillator field with near-identity readout gives
        // sinusoidal channels matching the closed-form rotation
        let mut rng = ChaCha20Rng::seed_from_u64(61);
        let mut store = ParamStore::new();
        let readout = ReadoutParams::new(&mut store, "r", 2, 1, &mut rng);
        store.value_mut(readout.readout_w).data.copy_from_slice(&[1.0, 0.0, 0.0, 1.0]);
        store.value_mut(readout.readout_b).data.copy_from_slice(&[0.0, 0.0]);
        let grid = IntegrationGrid::new(0.0, 2.0 * std::f64::consts::PI, 51, 2).unwrap();
        let mut s = Session::new(&store);
        let y0 = s.input(Value::new(vec![1, 2], vec![0.0, 1.0]).unwrap());
        let traj = rk4_integrate(&mut s, y0, &grid, oscillator_field).unwrap();
        let rw = s.param(readout.readout_w);
        let rb = s.param(readout.readout_b);
        for (i, y) in traj.iter().enumerate() {
            let m = s.tape.matmul(*y, rw).unwrap();
            let frame = s.tape.add_rowvec(m, rb).unwrap();
            let v = s.tape.value(frame).data.clone();
            let t = 2.0 * std::f64::consts::PI * i as f64 / 50.0;
            // p(t) = -sin t, q(t) = cos t for (p0, q0) = (0, 1) under (-q, p)
            assert!((v[0] + t.sin()).abs() < 1e-4, "p at {i}: {} vs {}", v[0], -t.sin());
            assert!((v[1] - t.cos()).abs() < 1e-4, "q at {i}: {} vs {}", v[1], t.cos());
        }
    }
}
