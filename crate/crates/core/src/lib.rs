//! Physics-integrated variational autoencoders for multichannel gait cycles.
//!
//! The model family pairs a trainable Hamiltonian ODE decoder with a neural
//! auxiliary decoder, approximates both latent posteriors with planar
//! normalizing flows, and can fuse each latent with scaled dot-product
//! attention context from the rest of the batch. Everything runs on a small
//! f64 tape engine with second-order reverse-mode differentiation, which the
//! Hamiltonian decoder needs (its forward pass contains a gradient).

pub mod attention;
pub mod autodiff;
pub mod data;
pub mod error;
pub mod flows;
pub mod physics;

pub use error::{Error, Result};
