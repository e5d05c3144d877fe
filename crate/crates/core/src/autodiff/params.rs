use crate::autodiff::tape::{GradMap, Id, Tape};
use crate::autodiff::value::Value;
use crate::error::Result;

/// Handle to a named parameter tensor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ParamId(pub(crate) usize);

pub struct Param {
    pub path: String,
    pub value: Value,
}

/// Ordered store of all trainable tensors; ordering is creation order and
/// is relied on for deterministic optimizer updates and checkpoints.
#[derive(Default)]
pub struct ParamStore {
    entries: Vec<Param>,
}

impl ParamStore {
    pub fn new() -> Self {
        ParamStore::default()
    }

    pub fn insert(&mut self, path: impl Into<String>, value: Value) -> ParamId {
        self.entries.push(Param { path: path.into(), value });
        ParamId(self.entries.len() - 1)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, id: ParamId) -> &Param {
        &self.entries[id.0]
    }

    pub fn value_mut(&mut self, id: ParamId) -> &mut Value {
        &mut self.entries[id.0].value
    }

    pub fn iter(&self) -> impl Iterator<Item = (ParamId, &Param)> {
        self.entries.iter().enumerate().map(|(i, p)| (ParamId(i), p))
    }

    pub fn total_scalars(&self) -> usize {
        self.entries.iter().map(|p| p.value.numel()).sum()
    }
}

/// One recording pass over a model: a tape plus lazy parameter binding.
///
/// Parameters are bound as grad-requiring leaves the first time they are
/// touched, so a step only records the tensors it actually uses.
pub struct Session<'s> {
    pub tape: Tape,
    store: &'s ParamStore,
    bound: Vec<Option<Id>>,
}

/// Per-parameter gradient values extracted after a backward pass.
pub struct ParamGrads {
    grads: Vec<Option<Value>>,
}

impl ParamGrads {
    pub fn get(&self, id: ParamId) -> Option<&Value> {
        self.grads[id.0].as_ref()
    }

    pub fn touched(&self) -> usize {
        self.grads.iter().filter(|g| g.is_some()).count()
    }
}

impl<'s> Session<'s> {
    pub fn new(store: &'s ParamStore) -> Self {
        Session { tape: Tape::new(), store, bound: vec![None; store.len()] }
    }

    pub fn store(&self) -> &ParamStore {
        self.store
    }

    /// Tape id of a parameter, binding it on first use.
    pub fn param(&mut self, p: ParamId) -> Id {
        if let Some(id) = self.bound[p.0] {
            return id;
        }
        let id = self.tape.leaf(self.store.get(p).value.clone(), true);
        self.bound[p.0] = Some(id);
        id
    }

    /// Constant input (no gradient).
    pub fn input(&mut self, v: Value) -> Id {
        self.tape.constant(v)
    }

    /// Backward from a scalar loss; returns per-parameter gradient values
    /// for every bound parameter the loss actually depends on.
    pub fn grads(&mut self, loss: Id) -> Result<ParamGrads> {
        let gm = self.tape.backward(loss, None)?;
        Ok(self.extract(&gm))
    }

    /// Collect parameter gradients out of an existing backward pass.
    pub fn extract(&self, gm: &GradMap) -> ParamGrads {
        let grads = self
            .bound
            .iter()
            .map(|slot| slot.and_then(|id| gm.get(id)).map(|gid| self.tape.value(gid).clone()))
            .collect();
        ParamGrads { grads }
    }
}
