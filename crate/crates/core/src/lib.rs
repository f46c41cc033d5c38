//! Coarse-geometry diagnostics for subgroup patterns.

mod automaton;
pub mod boundary;
pub mod ccomplex;
pub mod cayley;
pub mod envelope;
pub mod error;
pub mod exact;
pub mod frozen;
pub mod metric;
pub mod patterns;
pub mod pipeline;
pub mod presentation;
pub mod rigidity;
pub mod stallings;
pub mod word;

pub use error::{Error, Result};

/// Library version recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
