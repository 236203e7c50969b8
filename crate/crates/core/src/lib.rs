//! Entanglement witnesses for graph states.
//!
//! Operators that are diagonal in the graph-state basis are stored as `2^n`
//! real entries, so witnesses, partial transposes and the linear programs
//! over them scale far beyond what dense matrices allow. The [`dense`]
//! module re-derives everything by brute force at small sizes.

pub mod catalog;
pub mod dense;
pub mod diagonal;
pub mod error;
pub mod graph;
pub mod io;
pub mod lp;
pub mod rational;
pub mod selftest;
pub mod stabilizer;
pub mod witness;

pub use diagonal::{white_noise_state, DiagonalOperator, GraphDiagonalState};
pub use error::{Error, Result};
pub use graph::{Bipartition, Family, Graph};
pub use witness::WitnessRecord;
