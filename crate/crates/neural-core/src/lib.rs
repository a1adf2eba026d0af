//! Minimal neural machinery for Q-learning agents: dense layers, one
//! optional LSTM layer, hand-written forward/backward passes in 64-bit
//! floats, plain SGD, and finite-difference gradient verification.
//!
//! No autodiff framework and no GPU: the point is a small, auditable
//! implementation whose gradients are checked numerically in the tests.

pub mod activation;
pub mod error;
pub mod gradcheck;
pub mod linalg;
pub mod network;
pub mod params;
pub mod spec;

pub use activation::Activation;
pub use error::NeuralError;
pub use gradcheck::check_gradients;
pub use network::{QNetwork, RecurrentState, SgdConfig};
pub use params::{LayerParams, QNetworkParams};
pub use spec::{LayerSpec, NetworkSpec};
