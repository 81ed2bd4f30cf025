//! Knowledge-graph engine organised into semantic units.
//!
//! A specification of knowledge graph building blocks (KGBBs) decides which statement
//! and compound units may be created, how they cascade into each other, how they are
//! labelled, exported and queried. The [`engine::Engine`] enforces that specification
//! over a [`model::Store`].

pub mod model;
pub mod spec;
pub mod backends;
pub mod engine;
pub mod fixtures;
pub mod query;
pub mod synth;
pub mod templates;

pub use model::*;
