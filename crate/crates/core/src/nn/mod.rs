//! Small dense-network toolkit: a ReLU multilayer perceptron with exact
//! reverse-mode gradients, Adam, and a masked categorical distribution.
//! All arithmetic is `f64`.

mod adam;
mod categorical;
mod checkpoint;
mod mlp;

pub use adam::{AdamConfig, AdamState};
pub use categorical::{masked_logits, Categorical};
pub use checkpoint::NetworkCheckpoint;
pub use mlp::{Activation, ForwardCache, Gradients, Layer, Mlp, MlpSpec};
