//! Total search problems over Boolean circuits, the constructive reductions
//! between them, and brute-force oracles for checking those reductions on
//! small instances.

pub mod campaign;
pub mod circuit;
pub mod encoding;
pub mod error;
pub mod lattice;
pub mod number;
pub mod problems;
pub mod reductions;

pub use encoding::Bitstring;
pub use error::{Error, Result};
