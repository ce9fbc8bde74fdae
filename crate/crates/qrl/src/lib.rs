//! Quantum-inspired reinforcement learning at desk scale.
//!
//! `qrl` pairs an exact statevector simulator for small qubit registers with
//! tabular TD(0) learning. Its centerpiece agent keeps one amplitude register
//! per state as its policy memory: actions are sampled from the register's
//! Born probabilities, and the taken action is reinforced with Grover
//! iterations whose count scales with the TD target. A classical ε-greedy
//! TD(0) baseline, a 13×13 gridworld, and a deterministic experiment harness
//! round out the comparison experiment.
//!
//! The guide in `book/` walks through each concept with runnable snippets;
//! those snippets double as doctests of this crate.
//!
//! # Quick start
//!
//! ```
//! use qrl::grid::GridWorld;
//! use qrl::harness::{run_experiment, AgentKind};
//! use qrl::rl::ExperimentConfig;
//!
//! let grid = GridWorld::default_layout();
//! let config = ExperimentConfig { max_episodes: 60, ..ExperimentConfig::default() };
//! let result = run_experiment(AgentKind::Qla, &config, &grid).unwrap();
//! assert!(!result.records.is_empty());
//! ```

pub mod env;
pub mod grid;
pub mod harness;
pub mod quantum;
pub mod rl;

#[cfg(doctest)]
mod book_doctests;

pub use env::{EnvError, Environment, StepOutcome, TabularEnv};
pub use quantum::{closed_form_amplitude, AmplitudeRegister, PhaseShift, QuantumError};
pub use rl::{ExperimentConfig, RlError, StepsizeSchedule};
