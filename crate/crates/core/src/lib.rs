//! Sparsity order of graphs and low-rank decompositions of the cone of
//! positive semidefinite matrices with a prescribed zero pattern.
//!
//! Vertices are 0-based throughout the library; every textual or JSON output
//! produced by [`cli`] uses 1-based labels.

pub mod catalog;
pub mod cli;
pub mod cone;
pub mod graph;
pub mod recognize;
pub mod selftest;
pub mod witness;
