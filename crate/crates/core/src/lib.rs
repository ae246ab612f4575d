//! Finite semigroupoids, relational functors and their hierarchical decomposition.

pub mod cli;
pub mod decomposition;
pub mod dot;
pub mod error;
pub mod fixtures;
pub mod format;
pub mod pipeline;
pub mod random;
pub mod relational;
pub mod semigroupoid;
pub mod transformation;
pub mod verify;

pub use error::{Error, Result};
