//! Experiment configuration and its validation.

use super::schedule::StepsizeSchedule;
use super::RlError;
use thiserror::Error;

/// Everything a training run needs beyond the environment itself.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    /// Discount factor γ ∈ [0, 1].
    pub gamma: f64,
    /// Exploration rate of the ε-greedy baseline, in [0, 1].
    pub epsilon_greedy: f64,
    /// Stepsize schedule for the value updates.
    pub schedule: StepsizeSchedule,
    /// Gain mapping the TD target onto a Grover iteration count.
    pub grover_gain: f64,
    /// Hard cap on Grover iterations per reinforcement.
    pub l_max: usize,
    /// Convergence threshold: training halts once every per-state |ΔV| over
    /// a full episode is at most this.
    pub epsilon_v: f64,
    /// Episode budget.
    pub max_episodes: usize,
    /// Step cap per episode; keeps early random-walk episodes finite.
    pub max_steps_per_episode: usize,
    /// Seed for the run's random stream.
    pub seed: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            gamma: 0.99,
            epsilon_greedy: 0.01,
            schedule: StepsizeSchedule::Constant { base: 0.1 },
            grover_gain: 0.01,
            l_max: 1,
            epsilon_v: 0.01,
            max_episodes: 5000,
            max_steps_per_episode: 10_000,
            seed: 0,
        }
    }
}

impl ExperimentConfig {
    /// Checks every field range, collecting all violations by field name.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let mut problems = Vec::new();
        if !(0.0..=1.0).contains(&self.gamma) {
            problems.push(FieldProblem::new(
                "gamma",
                format!("must lie in [0, 1], got {}", self.gamma),
            ));
        }
        if !(0.0..=1.0).contains(&self.epsilon_greedy) {
            problems.push(FieldProblem::new(
                "epsilon_greedy",
                format!("must lie in [0, 1], got {}", self.epsilon_greedy),
            ));
        }
        if let Err(err) = self.schedule.validate() {
            problems.push(FieldProblem::new("schedule", err.to_string()));
        }
        if !(self.grover_gain >= 0.0 && self.grover_gain.is_finite()) {
            problems.push(FieldProblem::new(
                "grover_gain",
                format!("must be finite and non-negative, got {}", self.grover_gain),
            ));
        }
        if self.epsilon_v <= 0.0 || self.epsilon_v.is_nan() {
            problems.push(FieldProblem::new(
                "epsilon_v",
                format!("must be positive, got {}", self.epsilon_v),
            ));
        }
        if self.max_steps_per_episode == 0 {
            problems.push(FieldProblem::new(
                "max_steps_per_episode",
                "must be at least 1; an uncapped episode need not terminate".to_string(),
            ));
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(ConfigError { problems })
        }
    }

    /// Full validation for a given environment: additionally checks that
    /// `l_max` respects the overshoot guard for the action register width,
    /// (2·l_max + 1)·arcsin(2^(−n/2)) ≤ π/2.
    pub fn validate_for_actions(&self, action_count: usize) -> Result<(), RlError> {
        self.validate()?;
        let n_qubits = (usize::BITS - action_count.saturating_sub(1).leading_zeros()).max(1);
        let beta = (1.0 / (2f64.powi(n_qubits as i32)).sqrt()).asin();
        // The slack absorbs rounding at exact quarter-turn boundaries, e.g.
        // 3·arcsin(1/2) vs π/2.
        let allowed = ((std::f64::consts::FRAC_PI_2 / beta - 1.0) / 2.0 + 1e-9).floor() as usize;
        if self.l_max > allowed {
            return Err(RlError::Config(ConfigError {
                problems: vec![FieldProblem::new(
                    "l_max",
                    format!(
                        "{} overshoots the quarter turn for {} actions (max {})",
                        self.l_max, action_count, allowed
                    ),
                )],
            }));
        }
        Ok(())
    }
}

/// One or more configuration fields out of range.
#[derive(Debug, Error, Clone, PartialEq)]
pub struct ConfigError {
    pub problems: Vec<FieldProblem>,
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "invalid configuration: ")?;
        for (i, p) in self.problems.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{}: {}", p.field, p.message)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FieldProblem {
    pub field: &'static str,
    pub message: String,
}

impl FieldProblem {
    fn new(field: &'static str, message: String) -> Self {
        Self { field, message }
    }
}
