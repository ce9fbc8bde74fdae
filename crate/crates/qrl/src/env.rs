//! The environment contract shared by the learners.
//!
//! Everything here is deterministic: `step` doubles as both the trajectory
//! sampler and the one-step model the lookahead baseline queries.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EnvError {
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("action index {action} out of range for {count} actions")]
    InvalidAction { action: usize, count: usize },
}

/// Result of one environment transition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepOutcome<S> {
    pub next_state: S,
    pub reward: f64,
    pub terminal: bool,
}

/// A finite, deterministic, episodic environment.
pub trait Environment {
    type State: Copy + Ord + std::fmt::Debug;

    /// Every state, in a stable order. Value and policy tables are
    /// initialized over exactly this set.
    fn states(&self) -> Vec<Self::State>;

    fn start_state(&self) -> Self::State;

    /// Size of the shared action set; actions are indices `0..action_count`.
    fn action_count(&self) -> usize;

    fn is_terminal(&self, state: Self::State) -> bool;

    /// Deterministic transition. Errs when stepping from a terminal or
    /// otherwise invalid state.
    fn step(&self, state: Self::State, action: usize) -> Result<StepOutcome<Self::State>, EnvError>;
}

/// An explicit transition-table environment over states `0..n`.
///
/// Useful for small hand-built chains in tests and documentation; the entry
/// `transitions[s][a]` is the full outcome of taking action `a` in state `s`.
#[derive(Debug, Clone)]
pub struct TabularEnv {
    start: usize,
    transitions: Vec<Vec<StepOutcome<usize>>>,
    terminal: Vec<bool>,
}

impl TabularEnv {
    /// Builds the environment from a per-state, per-action outcome table.
    /// `terminal[s]` marks absorbing states, which must not appear as rows
    /// with outgoing transitions at step time.
    pub fn new(
        start: usize,
        transitions: Vec<Vec<StepOutcome<usize>>>,
        terminal: Vec<bool>,
    ) -> Self {
        assert_eq!(transitions.len(), terminal.len());
        assert!(start < transitions.len());
        let action_count = transitions[0].len();
        assert!(transitions.iter().all(|row| row.len() == action_count));
        Self {
            start,
            transitions,
            terminal,
        }
    }
}

impl Environment for TabularEnv {
    type State = usize;

    fn states(&self) -> Vec<usize> {
        (0..self.transitions.len()).collect()
    }

    fn start_state(&self) -> usize {
        self.start
    }

    fn action_count(&self) -> usize {
        self.transitions[0].len()
    }

    fn is_terminal(&self, state: usize) -> bool {
        self.terminal[state]
    }

    fn step(&self, state: usize, action: usize) -> Result<StepOutcome<usize>, EnvError> {
        if state >= self.transitions.len() || self.terminal[state] {
            return Err(EnvError::InvalidState(format!("{state}")));
        }
        let row = &self.transitions[state];
        if action >= row.len() {
            return Err(EnvError::InvalidAction {
                action,
                count: row.len(),
            });
        }
        Ok(row[action])
    }
}
