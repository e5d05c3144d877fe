use crate::error::{Error, Result};

/// Dense tensor: row-major `f64` storage plus a shape.
///
/// Rank 0 (`shape == []`) is a scalar with one element.
#[derive(Clone, Debug, PartialEq)]
pub struct Value {
    pub shape: Vec<usize>,
    pub data: Vec<f64>,
}

impl Value {
    pub fn new(shape: Vec<usize>, data: Vec<f64>) -> Result<Self> {
        let numel: usize = shape.iter().product();
        if numel != data.len() {
            return Err(Error::Dimension {
                op: "value",
                detail: format!("shape {:?} implies {} elements, got {}", shape, numel, data.len()),
            });
        }
        Ok(Value { shape, data })
    }

    pub fn scalar(x: f64) -> Self {
        Value { shape: vec![], data: vec![x] }
    }

    pub fn zeros(shape: Vec<usize>) -> Self {
        let n = shape.iter().product();
        Value { shape, data: vec![0.0; n] }
    }

    pub fn full(shape: Vec<usize>, x: f64) -> Self {
        let n = shape.iter().product();
        Value { shape, data: vec![x; n] }
    }

    pub fn numel(&self) -> usize {
        self.data.len()
    }

    pub fn is_scalar(&self) -> bool {
        self.data.len() == 1
    }

    pub fn all_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    /// Rows/cols view of a rank-2 value.
    pub fn dims2(&self) -> Result<(usize, usize)> {
        match self.shape.as_slice() {
            [r, c] => Ok((*r, *c)),
            other => Err(Error::Dimension {
                op: "dims2",
                detail: format!("expected rank-2 shape, got {other:?}"),
            }),
        }
    }

    /// Size of the trailing dimension (1 for scalars).
    pub fn last_dim(&self) -> usize {
        self.shape.last().copied().unwrap_or(1)
    }
}
