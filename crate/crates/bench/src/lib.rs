//! Shared fixtures for the benchmarks.

use kgbb_core::engine::Engine;
use kgbb_core::query::QuestionDraft;
use kgbb_core::synth::{random_engine, Synth};

/// A reproducible engine over the demo specification with at least `units` units.
pub fn engine(units: usize) -> Engine {
    random_engine(0xbe7c4, units)
}

/// Questions drawn from the statements in `engine`.
pub fn questions(engine: &Engine, n: usize) -> Vec<QuestionDraft> {
    let mut synth = Synth::new(17);
    (0..n * 4).filter_map(|_| synth.question(engine.store(), engine.spec())).take(n).collect()
}
