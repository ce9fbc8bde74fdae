//! Tabular learning: TD(0) value updates, stepsize schedules, the
//! amplitude-amplified agent, the ε-greedy baseline, and a linear-solve
//! policy-evaluation oracle for tests.

mod agent;
mod config;
mod policy;
mod schedule;
mod value;

pub use agent::{
    greedy_policy_path, qla_episode, qla_train, reward_to_iterations, td0_egreedy_train,
    td0_episode, EpisodeRecord, GreedyPath, GreedyPolicy, TrainOutput,
};
pub use config::{ConfigError, ExperimentConfig, FieldProblem};
pub use policy::ActionPolicyTable;
pub use schedule::StepsizeSchedule;
pub use value::{bellman_solve, check_convergence, td_update, PolicyChain, ValueTable};

use crate::env::EnvError;
use crate::quantum::QuantumError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RlError {
    #[error("state {0} is missing from the table")]
    MissingState(String),
    #[error("stepsize base must lie in (0, 1], got {0}")]
    InvalidStepsizeBase(f64),
    #[error("polynomial stepsize exponent must lie in (0.5, 1], got {0}")]
    InvalidStepsizeExponent(f64),
    #[error("the policy-evaluation system is singular and has no solution")]
    SingularSystem,
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Env(#[from] EnvError),
    #[error(transparent)]
    Quantum(#[from] QuantumError),
}
