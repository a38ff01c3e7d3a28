pub mod branching;
pub mod error;
pub mod markov;
pub mod models;
pub mod numkernel;
pub mod propagate;
pub mod superop;
pub mod sweep;

pub use error::{Cardinality, Error, Result};
