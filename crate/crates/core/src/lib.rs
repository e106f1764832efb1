//! Two-agent naming game over `n` objects.
//!
//! Each agent keeps, for every object, a bounded inventory of integer words
//! with reinforcement weights. In every communication attempt the speaker
//! utters a word for a random object, the channel may distort it, and the
//! hearer guesses the object from a weighted inverse-distance similarity.
//! Success and failure reinforce or weaken the words involved.
//!
//! * [`lexicon`]: words, inventories and lexicons
//! * [`dynamics`]: one communication attempt and its building blocks
//! * [`metrics`]: success rates, homonymy, gap histograms, baselines
//! * [`engine`]: seeded runs, time units, sampling and aggregation
//! * [`harness`]: configuration files, sweeps and CSV artifacts
//!
//! The `examples/` directory has one runnable program per capability.

pub mod dynamics;
pub mod engine;
pub mod harness;
pub mod lexicon;
pub mod metrics;

pub use dynamics::{communication_round, ModelParams, RoundOutcome};
pub use engine::{run, RunArtifacts, SimConfig, SimState};
pub use lexicon::{AgentLexicon, Inventory, LexEntry, Word};
