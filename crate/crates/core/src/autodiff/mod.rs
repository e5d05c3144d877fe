//! Dense tensors, a recording tape with second-order reverse-mode
//! differentiation, MLP layers, and the Adam optimizer.

pub mod adam;
pub mod mlp;
pub mod params;
pub mod tape;
pub mod value;

pub use adam::{AdamConfig, AdamState};
pub use mlp::{Activation, Mlp};
pub use params::{ParamGrads, ParamId, ParamStore, Session};
pub use tape::{GradMap, Id, OpTag, Tape};
pub use value::Value;
