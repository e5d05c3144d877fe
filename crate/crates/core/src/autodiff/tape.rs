//! Recording tape for reverse-mode differentiation.
//!
//! Every operation appends a node and eagerly evaluates it. `backward`
//! propagates adjoints in reverse id order and emits the adjoint arithmetic
//! as ordinary tape operations, so a gradient is itself differentiable —
//! calling `backward` on an expression built from gradients yields exact
//! second-order derivatives. This matters for the Hamiltonian decoder, whose
//! forward pass contains a gradient of the energy network.

use std::collections::{BinaryHeap, HashMap, HashSet};

use crate::autodiff::value::Value;
use crate::error::{Error, Result};

/// Handle to a tensor on the tape.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Id(pub(crate) u32);

impl Id {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Debug)]
enum Op {
    Leaf,
    Matmul,
    Transpose,
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Recip,
    Scale(f64),
    AddScalar,
    Tanh,
    Sigmoid,
    Softplus,
    Exp,
    Log,
    Abs,
    Square,
    Sum,
    SumLast,
    SumRows,
    BroadcastScalar,
    BroadcastLast,
    BroadcastRows,
    AddRowVec,
    ConcatLast,
    SliceLast { start: usize, end: usize },
    PadLast { before: usize },
    Reshape,
}

struct Node {
    op: Op,
    inputs: Vec<Id>,
    requires_grad: bool,
}

/// Maps tape ids to the ids of their adjoints after a `backward` pass.
#[derive(Debug)]
pub struct GradMap {
    adj: HashMap<u32, Id>,
}

impl GradMap {
    pub fn get(&self, id: Id) -> Option<Id> {
        self.adj.get(&id.0).copied()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }
}

/// The computation record: one value per node, topologically ordered by id.
#[derive(Default)]
pub struct Tape {
    nodes: Vec<Node>,
    vals: Vec<Value>,
}

/// Primitive tags accepted by [`Tape::forward_primitive`].
#[derive(Clone, Copy, Debug)]
pub enum OpTag {
    Matmul,
    Add,
    Sub,
    ElementwiseMul,
    Tanh,
    Softplus,
    Exp,
    Log,
    Sum,
    Mean,
    SoftmaxLastdim,
    ConcatLastdim,
    Slice { start: usize, end: usize },
    Abs,
    Square,
}

fn dim_err(op: &'static str, detail: String) -> Error {
    Error::Dimension { op, detail }
}

impl Tape {
    pub fn new() -> Self {
        Tape::default()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn value(&self, id: Id) -> &Value {
        &self.vals[id.index()]
    }

    pub fn shape(&self, id: Id) -> &[usize] {
        &self.vals[id.index()].shape
    }

    pub fn requires_grad(&self, id: Id) -> bool {
        self.nodes[id.index()].requires_grad
    }

    /// Opt a tensor into gradient tracking after the fact. Only affects
    /// nodes recorded later; used when a gradient with respect to a
    /// constant input is wanted (e.g. a standalone field evaluation).
    pub fn force_requires_grad(&mut self, id: Id) {
        self.nodes[id.index()].requires_grad = true;
    }

    fn push(&mut self, op: Op, inputs: Vec<Id>, value: Value, op_name: &'static str) -> Result<Id> {
        if !value.all_finite() {
            return Err(Error::NumericDomain {
                op: op_name,
                detail: "non-finite output".to_string(),
            });
        }
        let requires_grad = inputs.iter().any(|i| self.nodes[i.index()].requires_grad);
        self.nodes.push(Node { op, inputs, requires_grad });
        self.vals.push(value);
        Ok(Id((self.nodes.len() - 1) as u32))
    }

    /// Leaf holding data; gradients flow into it iff `requires_grad`.
    pub fn leaf(&mut self, value: Value, requires_grad: bool) -> Id {
        self.nodes.push(Node { op: Op::Leaf, inputs: vec![], requires_grad });
        self.vals.push(value);
        Id((self.nodes.len() - 1) as u32)
    }

    pub fn constant(&mut self, value: Value) -> Id {
        self.leaf(value, false)
    }

    pub fn scalar(&mut self, x: f64) -> Id {
        self.constant(Value::scalar(x))
    }

    /// New constant leaf with the same value; cuts the tensor out of the
    /// gradient graph.
    pub fn detach(&mut self, x: Id) -> Id {
        let v = self.value(x).clone();
        self.constant(v)
    }

    // ── binary elementwise ───────────────────────────────────────────

    fn binary(
        &mut self,
        op: Op,
        a: Id,
        b: Id,
        f: fn(f64, f64) -> f64,
        name: &'static str,
    ) -> Result<Id> {
        let va = self.value(a);
        let vb = self.value(b);
        let out = if va.shape == vb.shape {
            let data = va.data.iter().zip(&vb.data).map(|(x, y)| f(*x, *y)).collect();
            Value { shape: va.shape.clone(), data }
        } else if va.is_scalar() && vb.is_scalar() {
            // both one-element: keep the higher-rank shape
            let shape =
                if va.shape.len() >= vb.shape.len() { va.shape.clone() } else { vb.shape.clone() };
            Value { shape, data: vec![f(va.data[0], vb.data[0])] }
        } else if va.is_scalar() {
            let x = va.data[0];
            Value { shape: vb.shape.clone(), data: vb.data.iter().map(|y| f(x, *y)).collect() }
        } else if vb.is_scalar() {
            let y = vb.data[0];
            Value { shape: va.shape.clone(), data: va.data.iter().map(|x| f(*x, y)).collect() }
        } else {
            return Err(dim_err(name, format!("shapes {:?} vs {:?}", va.shape, vb.shape)));
        };
        self.push(op, vec![a, b], out, name)
    }

    pub fn add(&mut self, a: Id, b: Id) -> Result<Id> {
        self.binary(Op::Add, a, b, |x, y| x + y, "add")
    }

    pub fn sub(&mut self, a: Id, b: Id) -> Result<Id> {
        self.binary(Op::Sub, a, b, |x, y| x - y, "sub")
    }

    pub fn mul(&mut self, a: Id, b: Id) -> Result<Id> {
        self.binary(Op::Mul, a, b, |x, y| x * y, "mul")
    }

    pub fn div(&mut self, a: Id, b: Id) -> Result<Id> {
        self.binary(Op::Div, a, b, |x, y| x / y, "div")
    }

    // ── unary elementwise ────────────────────────────────────────────

    fn unary(&mut self, op: Op, x: Id, f: impl Fn(f64) -> f64, name: &'static str) -> Result<Id> {
        let v = self.value(x);
        let out = Value { shape: v.shape.clone(), data: v.data.iter().map(|t| f(*t)).collect() };
        self.push(op, vec![x], out, name)
    }

    pub fn neg(&mut self, x: Id) -> Result<Id> {
        self.unary(Op::Neg, x, |t| -t, "neg")
    }

    pub fn recip(&mut self, x: Id) -> Result<Id> {
        self.unary(Op::Recip, x, |t| 1.0 / t, "recip")
    }

    pub fn scale(&mut self, x: Id, c: f64) -> Result<Id> {
        self.unary(Op::Scale(c), x, |t| c * t, "scale")
    }

    pub fn add_scalar(&mut self, x: Id, c: f64) -> Result<Id> {
        self.unary(Op::AddScalar, x, |t| t + c, "add_scalar")
    }

    pub fn tanh(&mut self, x: Id) -> Result<Id> {
        self.unary(Op::Tanh, x, f64::tanh, "tanh")
    }

    pub fn sigmoid(&mut self, x: Id) -> Result<Id> {
        self.unary(Op::Sigmoid, x, stable_sigmoid, "sigmoid")
    }

    pub fn softplus(&mut self, x: Id) -> Result<Id> {
        self.unary(Op::Softplus, x, stable_softplus, "softplus")
    }

    pub fn exp(&mut self, x: Id) -> Result<Id> {
        self.unary(Op::Exp, x, f64::exp, "exp")
    }

    pub fn log(&mut self, x: Id) -> Result<Id> {
        if self.value(x).data.iter().any(|t| *t <= 0.0) {
            return Err(Error::NumericDomain {
                op: "log",
                detail: "log of non-positive value".to_string(),
            });
        }
        self.unary(Op::Log, x, f64::ln, "log")
    }

    pub fn abs(&mut self, x: Id) -> Result<Id> {
        self.unary(Op::Abs, x, f64::abs, "abs")
    }

    pub fn square(&mut self, x: Id) -> Result<Id> {
        self.unary(Op::Square, x, |t| t * t, "square")
    }

    // ── linear algebra ───────────────────────────────────────────────

    pub fn matmul(&mut self, a: Id, b: Id) -> Result<Id> {
        let (m, k) = self.value(a).dims2()?;
        let (k2, n) = self.value(b).dims2()?;
        if k != k2 {
            return Err(dim_err(
                "matmul",
                format!("inner dims differ: [{m},{k}] x [{k2},{n}]"),
            ));
        }
        let mut data = vec![0.0; m * n];
        // SAFETY: pointers cover m*k, k*n, m*n row-major buffers sized above.
        unsafe {
            matrixmultiply::dgemm(
                m,
                k,
                n,
                1.0,
                self.value(a).data.as_ptr(),
                k as isize,
                1,
                self.value(b).data.as_ptr(),
                n as isize,
                1,
                0.0,
                data.as_mut_ptr(),
                n as isize,
                1,
            );
        }
        self.push(Op::Matmul, vec![a, b], Value { shape: vec![m, n], data }, "matmul")
    }

    pub fn transpose(&mut self, x: Id) -> Result<Id> {
        let (r, c) = self.value(x).dims2()?;
        let src = &self.value(x).data;
        let mut data = vec![0.0; r * c];
        for i in 0..r {
            for j in 0..c {
                data[j * r + i] = src[i * c + j];
            }
        }
        self.push(Op::Transpose, vec![x], Value { shape: vec![c, r], data }, "transpose")
    }

    // ── reductions and broadcasts ────────────────────────────────────

    pub fn sum(&mut self, x: Id) -> Result<Id> {
        let s: f64 = self.value(x).data.iter().sum();
        self.push(Op::Sum, vec![x], Value::scalar(s), "sum")
    }

    pub fn mean(&mut self, x: Id) -> Result<Id> {
        let n = self.value(x).numel();
        if n == 0 {
            return Err(dim_err("mean", "empty tensor".to_string()));
        }
        let s = self.sum(x)?;
        self.scale(s, 1.0 / n as f64)
    }

    /// `[.., d] -> [.., 1]`
    pub fn sum_lastdim(&mut self, x: Id) -> Result<Id> {
        let v = self.value(x);
        if v.shape.is_empty() {
            return Err(dim_err("sum_lastdim", "rank-0 input".to_string()));
        }
        let d = v.last_dim();
        let rows = v.numel() / d;
        let mut data = Vec::with_capacity(rows);
        for r in 0..rows {
            data.push(v.data[r * d..(r + 1) * d].iter().sum());
        }
        let mut shape = v.shape.clone();
        *shape.last_mut().unwrap() = 1;
        self.push(Op::SumLast, vec![x], Value { shape, data }, "sum_lastdim")
    }

    /// `[n, d] -> [d]`
    pub fn sum_rows(&mut self, x: Id) -> Result<Id> {
        let (n, d) = self.value(x).dims2()?;
        let src = &self.value(x).data;
        let mut data = vec![0.0; d];
        for i in 0..n {
            for j in 0..d {
                data[j] += src[i * d + j];
            }
        }
        self.push(Op::SumRows, vec![x], Value { shape: vec![d], data }, "sum_rows")
    }

    /// Broadcast a one-element tensor to an arbitrary shape.
    pub fn broadcast_scalar(&mut self, x: Id, shape: Vec<usize>) -> Result<Id> {
        let v = self.value(x);
        if !v.is_scalar() {
            return Err(dim_err("broadcast_scalar", format!("input shape {:?}", v.shape)));
        }
        let out = Value::full(shape, v.data[0]);
        self.push(Op::BroadcastScalar, vec![x], out, "broadcast_scalar")
    }

    /// `[.., 1] -> [.., d]`
    pub fn broadcast_lastdim(&mut self, x: Id, d: usize) -> Result<Id> {
        let v = self.value(x);
        if v.shape.is_empty() || v.last_dim() != 1 {
            return Err(dim_err(
                "broadcast_lastdim",
                format!("expected trailing dim 1, shape {:?}", v.shape),
            ));
        }
        let rows = v.numel();
        let mut data = Vec::with_capacity(rows * d);
        for r in 0..rows {
            data.extend(std::iter::repeat(v.data[r]).take(d));
        }
        let mut shape = v.shape.clone();
        *shape.last_mut().unwrap() = d;
        self.push(Op::BroadcastLast, vec![x], Value { shape, data }, "broadcast_lastdim")
    }

    /// `[d] -> [n, d]`
    pub fn broadcast_rows(&mut self, x: Id, n: usize) -> Result<Id> {
        let v = self.value(x);
        if v.shape.len() != 1 {
            return Err(dim_err("broadcast_rows", format!("expected rank 1, shape {:?}", v.shape)));
        }
        let d = v.shape[0];
        let mut data = Vec::with_capacity(n * d);
        for _ in 0..n {
            data.extend_from_slice(&v.data);
        }
        self.push(Op::BroadcastRows, vec![x], Value { shape: vec![n, d], data }, "broadcast_rows")
    }

    /// Row-broadcast bias add: `[n, d] + [d]`.
    pub fn add_rowvec(&mut self, a: Id, v: Id) -> Result<Id> {
        let (n, d) = self.value(a).dims2()?;
        let bv = self.value(v);
        if bv.shape != [d] {
            return Err(dim_err(
                "add_rowvec",
                format!("matrix [{n},{d}] with vector {:?}", bv.shape),
            ));
        }
        let am = &self.value(a).data;
        let bd = &self.value(v).data;
        let mut data = Vec::with_capacity(n * d);
        for i in 0..n {
            for j in 0..d {
                data.push(am[i * d + j] + bd[j]);
            }
        }
        self.push(Op::AddRowVec, vec![a, v], Value { shape: vec![n, d], data }, "add_rowvec")
    }

    /// Concatenate along the trailing dimension; leading dims must agree.
    pub fn concat_lastdim(&mut self, parts: &[Id]) -> Result<Id> {
        if parts.is_empty() {
            return Err(dim_err("concat_lastdim", "no inputs".to_string()));
        }
        let lead = {
            let s = &self.value(parts[0]).shape;
            if s.is_empty() {
                return Err(dim_err("concat_lastdim", "rank-0 input".to_string()));
            }
            s[..s.len() - 1].to_vec()
        };
        let mut total_d = 0usize;
        for p in parts {
            let s = &self.value(*p).shape;
            if s.is_empty() || s[..s.len() - 1] != lead[..] {
                return Err(dim_err(
                    "concat_lastdim",
                    format!("leading dims differ: {:?} vs {:?}", lead, s),
                ));
            }
            total_d += s[s.len() - 1];
        }
        let rows: usize = lead.iter().product();
        let mut data = Vec::with_capacity(rows * total_d);
        for r in 0..rows {
            for p in parts {
                let v = self.value(*p);
                let d = v.last_dim();
                data.extend_from_slice(&v.data[r * d..(r + 1) * d]);
            }
        }
        let mut shape = lead;
        shape.push(total_d);
        self.push(Op::ConcatLast, parts.to_vec(), Value { shape, data }, "concat_lastdim")
    }

    /// Slice `[start, end)` of the trailing dimension.
    pub fn slice_lastdim(&mut self, x: Id, start: usize, end: usize) -> Result<Id> {
        let v = self.value(x);
        let d = v.last_dim();
        if v.shape.is_empty() || start >= end || end > d {
            return Err(dim_err(
                "slice_lastdim",
                format!("range {start}..{end} of trailing dim {d}"),
            ));
        }
        let w = end - start;
        let rows = v.numel() / d;
        let mut data = Vec::with_capacity(rows * w);
        for r in 0..rows {
            data.extend_from_slice(&v.data[r * d + start..r * d + end]);
        }
        let mut shape = v.shape.clone();
        *shape.last_mut().unwrap() = w;
        self.push(Op::SliceLast { start, end }, vec![x], Value { shape, data }, "slice_lastdim")
    }

    /// Zero-pad the trailing dimension.
    pub fn pad_lastdim(&mut self, x: Id, before: usize, after: usize) -> Result<Id> {
        let v = self.value(x);
        if v.shape.is_empty() {
            return Err(dim_err("pad_lastdim", "rank-0 input".to_string()));
        }
        let d = v.last_dim();
        let out_d = before + d + after;
        let rows = v.numel() / d;
        let mut data = vec![0.0; rows * out_d];
        for r in 0..rows {
            data[r * out_d + before..r * out_d + before + d]
                .copy_from_slice(&v.data[r * d..(r + 1) * d]);
        }
        let mut shape = v.shape.clone();
        *shape.last_mut().unwrap() = out_d;
        self.push(Op::PadLast { before }, vec![x], Value { shape, data }, "pad_lastdim")
    }

    pub fn reshape(&mut self, x: Id, shape: Vec<usize>) -> Result<Id> {
        let v = self.value(x);
        let n: usize = shape.iter().product();
        if n != v.numel() {
            return Err(dim_err(
                "reshape",
                format!("cannot reshape {:?} to {:?}", v.shape, shape),
            ));
        }
        let data = v.data.clone();
        self.push(Op::Reshape, vec![x], Value { shape, data }, "reshape")
    }

    // ── composites ───────────────────────────────────────────────────

    /// Softmax over the trailing dimension, max-shifted for stability.
    ///
    /// The shift is a detached constant; softmax is invariant to it, so
    /// gradients are unaffected.
    pub fn softmax_lastdim(&mut self, x: Id) -> Result<Id> {
        let v = self.value(x);
        if v.shape.is_empty() {
            return Err(dim_err("softmax_lastdim", "rank-0 input".to_string()));
        }
        let d = v.last_dim();
        let rows = v.numel() / d;
        let mut mx = Vec::with_capacity(rows);
        for r in 0..rows {
            let m = v.data[r * d..(r + 1) * d].iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            mx.push(m);
        }
        let mut mshape = v.shape.clone();
        *mshape.last_mut().unwrap() = 1;
        let c = self.constant(Value { shape: mshape, data: mx });
        let cb = self.broadcast_lastdim(c, d)?;
        let shifted = self.sub(x, cb)?;
        let e = self.exp(shifted)?;
        let s = self.sum_lastdim(e)?;
        let sb = self.broadcast_lastdim(s, d)?;
        self.div(e, sb)
    }

    /// Dispatch by primitive tag; the named-method forms are preferred in
    /// library code.
    pub fn forward_primitive(&mut self, tag: OpTag, inputs: &[Id]) -> Result<Id> {
        let need = |n: usize| -> Result<()> {
            if inputs.len() == n {
                Ok(())
            } else {
                Err(dim_err("forward_primitive", format!("{tag:?} expects {n} inputs, got {}", inputs.len())))
            }
        };
        match tag {
            OpTag::Matmul => {
                need(2)?;
                self.matmul(inputs[0], inputs[1])
            }
            OpTag::Add => {
                need(2)?;
                self.add(inputs[0], inputs[1])
            }
            OpTag::Sub => {
                need(2)?;
                self.sub(inputs[0], inputs[1])
            }
            OpTag::ElementwiseMul => {
                need(2)?;
                self.mul(inputs[0], inputs[1])
            }
            OpTag::Tanh => {
                need(1)?;
                self.tanh(inputs[0])
            }
            OpTag::Softplus => {
                need(1)?;
                self.softplus(inputs[0])
            }
            OpTag::Exp => {
                need(1)?;
                self.exp(inputs[0])
            }
            OpTag::Log => {
                need(1)?;
                self.log(inputs[0])
            }
            OpTag::Sum => {
                need(1)?;
                self.sum(inputs[0])
            }
            OpTag::Mean => {
                need(1)?;
                self.mean(inputs[0])
            }
            OpTag::SoftmaxLastdim => {
                need(1)?;
                self.softmax_lastdim(inputs[0])
            }
            OpTag::ConcatLastdim => self.concat_lastdim(inputs),
            OpTag::Slice { start, end } => {
                need(1)?;
                self.slice_lastdim(inputs[0], start, end)
            }
            OpTag::Abs => {
                need(1)?;
                self.abs(inputs[0])
            }
            OpTag::Square => {
                need(1)?;
                self.square(inputs[0])
            }
        }
    }

    // ── backward ─────────────────────────────────────────────────────

    /// Reverse-mode pass from `root`, seeded with ones (or `seed`).
    ///
    /// Adjoints are recorded on the tape, so entries of the returned map can
    /// participate in further forward computation and be differentiated again.
    pub fn backward(&mut self, root: Id, seed: Option<Value>) -> Result<GradMap> {
        self.backward_stopping(root, seed, &[])
    }

    /// Like [`Tape::backward`], but treats every id in `stop` as a leaf:
    /// its adjoint is accumulated and not propagated further upstream. Used
    /// to take gradients with respect to an intermediate (e.g. an ODE state)
    /// without dragging the whole upstream graph into the pass.
    pub fn backward_stopping(&mut self, root: Id, seed: Option<Value>, stop: &[Id]) -> Result<GradMap> {
        if self.nodes.is_empty() {
            return Err(dim_err("backward", "empty record".to_string()));
        }
        let root_shape = self.value(root).shape.clone();
        let seed_id = match seed {
            Some(v) => {
                if v.shape != root_shape {
                    return Err(Error::SeedShape { expected: root_shape, got: v.shape });
                }
                self.constant(v)
            }
            None => self.constant(Value::full(root_shape, 1.0)),
        };
        let mut adj: HashMap<u32, Id> = HashMap::new();
        if !self.nodes[root.index()].requires_grad {
            return Ok(GradMap { adj });
        }
        let stopset: HashSet<u32> = stop.iter().map(|i| i.0).collect();
        let mut heap: BinaryHeap<u32> = BinaryHeap::new();
        adj.insert(root.0, seed_id);
        heap.push(root.0);
        while let Some(i) = heap.pop() {
            if stopset.contains(&i) {
                continue;
            }
            let g = adj[&i];
            let contribs = self.emit_vjp(Id(i), g)?;
            for (input, contrib) in contribs {
                match adj.get(&input.0).copied() {
                    None => {
                        adj.insert(input.0, contrib);
                        heap.push(input.0);
                    }
                    Some(prev) => {
                        let summed = self.add(prev, contrib)?;
                        adj.insert(input.0, summed);
                    }
                }
            }
        }
        Ok(GradMap { adj })
    }

    /// Sum-reduce an adjoint to a broadcast operand's shape (one-element target).
    fn reduce_to(&mut self, g: Id, target: &[usize]) -> Result<Id> {
        if self.value(g).shape == target {
            return Ok(g);
        }
        let s = self.sum(g)?;
        self.reshape(s, target.to_vec())
    }

    fn emit_vjp(&mut self, i: Id, g: Id) -> Result<Vec<(Id, Id)>> {
        let (op, inputs) = {
            let n = &self.nodes[i.index()];
            (n.op.clone(), n.inputs.clone())
        };
        let wants: Vec<bool> =
            inputs.iter().map(|x| self.nodes[x.index()].requires_grad).collect();
        let mut out = Vec::with_capacity(inputs.len());
        match op {
            Op::Leaf => {}
            Op::Matmul => {
                let (a, b) = (inputs[0], inputs[1]);
                if wants[0] {
                    let bt = self.transpose(b)?;
                    out.push((a, self.matmul(g, bt)?));
                }
                if wants[1] {
                    let at = self.transpose(a)?;
                    out.push((b, self.matmul(at, g)?));
                }
            }
            Op::Transpose => {
                if wants[0] {
                    out.push((inputs[0], self.transpose(g)?));
                }
            }
            Op::Add => {
                for k in 0..2 {
                    if wants[k] {
                        let shape = self.value(inputs[k]).shape.clone();
                        out.push((inputs[k], self.reduce_to(g, &shape)?));
                    }
                }
            }
            Op::Sub => {
                if wants[0] {
                    let shape = self.value(inputs[0]).shape.clone();
                    out.push((inputs[0], self.reduce_to(g, &shape)?));
                }
                if wants[1] {
                    let ng = self.neg(g)?;
                    let shape = self.value(inputs[1]).shape.clone();
                    out.push((inputs[1], self.reduce_to(ng, &shape)?));
                }
            }
            Op::Mul => {
                let (a, b) = (inputs[0], inputs[1]);
                if wants[0] {
                    let gb = self.mul(g, b)?;
                    let shape = self.value(a).shape.clone();
                    out.push((a, self.reduce_to(gb, &shape)?));
                }
                if wants[1] {
                    let ga = self.mul(g, a)?;
                    let shape = self.value(b).shape.clone();
                    out.push((b, self.reduce_to(ga, &shape)?));
                }
            }
            Op::Div => {
                let (a, b) = (inputs[0], inputs[1]);
                if wants[0] {
                    let da = self.div(g, b)?;
                    let shape = self.value(a).shape.clone();
                    out.push((a, self.reduce_to(da, &shape)?));
                }
                if wants[1] {
                    // d/db (a/b) = -out/b
                    let ob = self.div(i, b)?;
                    let gob = self.mul(g, ob)?;
                    let db = self.neg(gob)?;
                    let shape = self.value(b).shape.clone();
                    out.push((b, self.reduce_to(db, &shape)?));
                }
            }
            Op::Neg => {
                if wants[0] {
                    out.push((inputs[0], self.neg(g)?));
                }
            }
            Op::Recip => {
                if wants[0] {
                    let y2 = self.square(i)?;
                    let gy2 = self.mul(g, y2)?;
                    out.push((inputs[0], self.neg(gy2)?));
                }
            }
            Op::Scale(c) => {
                if wants[0] {
                    out.push((inputs[0], self.scale(g, c)?));
                }
            }
            Op::AddScalar => {
                if wants[0] {
                    out.push((inputs[0], g));
                }
            }
            Op::Tanh => {
                if wants[0] {
                    let t2 = self.square(i)?;
                    let nt2 = self.neg(t2)?;
                    let one_minus = self.add_scalar(nt2, 1.0)?;
                    out.push((inputs[0], self.mul(g, one_minus)?));
                }
            }
            Op::Sigmoid => {
                if wants[0] {
                    let ns = self.neg(i)?;
                    let one_minus = self.add_scalar(ns, 1.0)?;
                    let sp = self.mul(i, one_minus)?;
                    out.push((inputs[0], self.mul(g, sp)?));
                }
            }
            Op::Softplus => {
                if wants[0] {
                    let s = self.sigmoid(inputs[0])?;
                    out.push((inputs[0], self.mul(g, s)?));
                }
            }
            Op::Exp => {
                if wants[0] {
                    out.push((inputs[0], self.mul(g, i)?));
                }
            }
            Op::Log => {
                if wants[0] {
                    out.push((inputs[0], self.div(g, inputs[0])?));
                }
            }
            Op::Abs => {
                if wants[0] {
                    let sign = Value {
                        shape: self.value(inputs[0]).shape.clone(),
                        data: self
                            .value(inputs[0])
                            .data
                            .iter()
                            .map(|x| {
                                if *x > 0.0 {
                                    1.0
                                } else if *x < 0.0 {
                                    -1.0
                                } else {
                                    0.0
                                }
                            })
                            .collect(),
                    };
                    let s = self.constant(sign);
                    out.push((inputs[0], self.mul(g, s)?));
                }
            }
            Op::Square => {
                if wants[0] {
                    let gx = self.mul(g, inputs[0])?;
                    out.push((inputs[0], self.scale(gx, 2.0)?));
                }
            }
            Op::Sum => {
                if wants[0] {
                    let shape = self.value(inputs[0]).shape.clone();
                    out.push((inputs[0], self.broadcast_scalar(g, shape)?));
                }
            }
            Op::SumLast => {
                if wants[0] {
                    let d = self.value(inputs[0]).last_dim();
                    out.push((inputs[0], self.broadcast_lastdim(g, d)?));
                }
            }
            Op::SumRows => {
                if wants[0] {
                    let n = self.value(inputs[0]).shape[0];
                    out.push((inputs[0], self.broadcast_rows(g, n)?));
                }
            }
            Op::BroadcastScalar => {
                if wants[0] {
                    let shape = self.value(inputs[0]).shape.clone();
                    out.push((inputs[0], self.reduce_to(g, &shape)?));
                }
            }
            Op::BroadcastLast => {
                if wants[0] {
                    out.push((inputs[0], self.sum_lastdim(g)?));
                }
            }
            Op::BroadcastRows => {
                if wants[0] {
                    out.push((inputs[0], self.sum_rows(g)?));
                }
            }
            Op::AddRowVec => {
                if wants[0] {
                    out.push((inputs[0], g));
                }
                if wants[1] {
                    out.push((inputs[1], self.sum_rows(g)?));
                }
            }
            Op::ConcatLast => {
                let mut off = 0usize;
                for (k, input) in inputs.iter().enumerate() {
                    let d = self.value(*input).last_dim();
                    if wants[k] {
                        out.push((*input, self.slice_lastdim(g, off, off + d)?));
                    }
                    off += d;
                }
            }
            Op::SliceLast { start, end } => {
                if wants[0] {
                    let d = self.value(inputs[0]).last_dim();
                    out.push((inputs[0], self.pad_lastdim(g, start, d - end)?));
                }
            }
            Op::PadLast { before, .. } => {
                if wants[0] {
                    let d = self.value(inputs[0]).last_dim();
                    out.push((inputs[0], self.slice_lastdim(g, before, before + d)?));
                }
            }
            Op::Reshape => {
                if wants[0] {
                    let shape = self.value(inputs[0]).shape.clone();
                    out.push((inputs[0], self.reshape(g, shape)?));
                }
            }
        }
        Ok(out)
    }
}

fn stable_sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

fn stable_softplus(x: f64) -> f64 {
    x.max(0.0) + (-x.abs()).exp().ln_1p()
}
