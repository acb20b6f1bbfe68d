//! Graph games on up to 64 players, decided exactly.
//!
//! The crate builds graph states' measurement games end to end: the losing
//! set of a game, the exhaustive classical optimum, the exact quantum-
//! strategy distribution by two independent methods (a GF(2) affine system
//! and a dense state-vector oracle), a strong non-signalling checker, and
//! the odd-domination / existential-closure certificates that bound how
//! many parties a non-signalling simulation of those distributions needs.

pub mod analyze;
pub mod bits;
pub mod format;
pub mod game;
pub mod graph;
pub mod quantum;

pub use bits::VertexSet;
pub use graph::Graph;
