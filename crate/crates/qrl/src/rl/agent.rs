//! The two learners.
//!
//! Both agents share the TD(0) value update; they differ only in how actions
//! are chosen. The amplitude-amplified agent samples from its per-state
//! action register and reinforces the taken action with Grover iterations
//! scaled by the TD target. The classical baseline is ε-greedy over a
//! one-step lookahead on the deterministic model.

use super::config::ExperimentConfig;
use super::policy::ActionPolicyTable;
use super::value::{check_convergence, td_update, ValueTable};
use super::RlError;
use crate::env::Environment;
use rand::Rng;
use std::collections::BTreeMap;

/// Per-episode learning-curve datum.
#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeRecord {
    /// Zero-based index of the episode within its run.
    pub episode: usize,
    /// Steps taken before reaching the goal or the step cap.
    pub steps: usize,
    /// Sum of rewards received, undiscounted.
    pub undiscounted_return: f64,
    /// Largest |ΔV(s)| applied during the episode.
    pub max_value_delta: f64,
    /// True when the step cap ended the episode before a terminal state.
    pub truncated: bool,
}

/// An episode's record plus the per-state maximum |ΔV| it produced, the
/// quantity the convergence halt inspects.
#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeOutcome<S: Copy + Ord + std::fmt::Debug> {
    pub record: EpisodeRecord,
    pub value_deltas: BTreeMap<S, f64>,
}

/// Final tables and the full learning curve of a training run.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainOutput<S: Copy + Ord + std::fmt::Debug> {
    pub records: Vec<EpisodeRecord>,
    pub values: ValueTable<S>,
    /// Present for the amplitude-amplified agent, absent for the baseline.
    pub policy: Option<ActionPolicyTable<S>>,
}

/// Maps a TD target onto a Grover iteration count:
/// L = clamp(⌊grover_gain · td_target⌉, 0, l_max), rounded to the nearest
/// integer. Negative targets yield L = 0 — punishment leaves the amplitudes
/// untouched rather than de-amplifying.
pub fn reward_to_iterations(td_target: f64, grover_gain: f64, l_max: usize) -> usize {
    let scaled = (grover_gain * td_target).round();
    if scaled <= 0.0 {
        0
    } else {
        (scaled as usize).min(l_max)
    }
}

/// One episode of the amplitude-amplified agent.
///
/// From the start state until a terminal state or the step cap: sample an
/// action from the state's register, step the environment, apply the TD(0)
/// value update with the scheduled stepsize, then reinforce the taken action
/// with `reward_to_iterations` Grover kicks. `step_counter` is the global
/// update count across the run and indexes the stepsize schedule.
pub fn qla_episode<E, R>(
    env: &E,
    policy: &mut ActionPolicyTable<E::State>,
    values: &mut ValueTable<E::State>,
    config: &ExperimentConfig,
    episode: usize,
    step_counter: &mut u64,
    rng: &mut R,
) -> Result<EpisodeOutcome<E::State>, RlError>
where
    E: Environment,
    R: Rng + ?Sized,
{
    let mut state = env.start_state();
    let mut record = EpisodeRecord {
        episode,
        steps: 0,
        undiscounted_return: 0.0,
        max_value_delta: 0.0,
        truncated: false,
    };
    let mut value_deltas = BTreeMap::new();

    while !env.is_terminal(state) {
        if record.steps >= config.max_steps_per_episode {
            record.truncated = true;
            break;
        }
        let action = policy.sample_action(state, rng)?;
        let out = env.step(state, action)?;
        *step_counter += 1;
        let alpha = config.schedule.stepsize(*step_counter);
        let delta = td_update(
            values,
            state,
            out.reward,
            out.next_state,
            out.terminal,
            alpha,
            config.gamma,
        )?;
        note_delta(&mut value_deltas, &mut record, state, delta);

        let bootstrap = if out.terminal {
            0.0
        } else {
            values.get(out.next_state)?
        };
        let td_target = out.reward + config.gamma * bootstrap;
        let l = reward_to_iterations(td_target, config.grover_gain, config.l_max);
        if l > 0 {
            policy.reinforce(state, action, l)?;
        }

        record.undiscounted_return += out.reward;
        record.steps += 1;
        state = out.next_state;
    }

    Ok(EpisodeOutcome {
        record,
        value_deltas,
    })
}

/// Trains the amplitude-amplified agent: V ≡ 0, all registers uniform, then
/// episodes until every per-state |ΔV| over a full episode is at most
/// `epsilon_v`, or the episode budget runs out.
pub fn qla_train<E, R>(
    env: &E,
    config: &ExperimentConfig,
    rng: &mut R,
) -> Result<TrainOutput<E::State>, RlError>
where
    E: Environment,
    R: Rng + ?Sized,
{
    config.validate_for_actions(env.action_count())?;
    let states = env.states();
    let mut values = ValueTable::zeros(states.iter().copied());
    let mut policy = ActionPolicyTable::uniform(states.iter().copied(), env.action_count())?;
    let mut records = Vec::new();
    let mut step_counter = 0u64;
    for episode in 0..config.max_episodes {
        let outcome = qla_episode(
            env,
            &mut policy,
            &mut values,
            config,
            episode,
            &mut step_counter,
            rng,
        )?;
        let converged =
            check_convergence(outcome.value_deltas.values().copied(), config.epsilon_v);
        records.push(outcome.record);
        if converged {
            break;
        }
    }
    Ok(TrainOutput {
        records,
        values,
        policy: Some(policy),
    })
}

/// One episode of the ε-greedy TD(0) baseline.
///
/// With probability ε the action is uniform random; otherwise it maximizes
/// r + γV(next) over the deterministic one-step model, ties to the lowest
/// action index. Value updates are identical to the other agent's.
pub fn td0_episode<E, R>(
    env: &E,
    values: &mut ValueTable<E::State>,
    config: &ExperimentConfig,
    episode: usize,
    step_counter: &mut u64,
    rng: &mut R,
) -> Result<EpisodeOutcome<E::State>, RlError>
where
    E: Environment,
    R: Rng + ?Sized,
{
    let mut state = env.start_state();
    let mut record = EpisodeRecord {
        episode,
        steps: 0,
        undiscounted_return: 0.0,
        max_value_delta: 0.0,
        truncated: false,
    };
    let mut value_deltas = BTreeMap::new();

    while !env.is_terminal(state) {
        if record.steps >= config.max_steps_per_episode {
            record.truncated = true;
            break;
        }
        let explore = rng.random::<f64>() < config.epsilon_greedy;
        let action = if explore {
            rng.random_range(0..env.action_count())
        } else {
            lookahead_greedy(env, values, state, config.gamma)?
        };
        let out = env.step(state, action)?;
        *step_counter += 1;
        let alpha = config.schedule.stepsize(*step_counter);
        let delta = td_update(
            values,
            state,
            out.reward,
            out.next_state,
            out.terminal,
            alpha,
            config.gamma,
        )?;
        note_delta(&mut value_deltas, &mut record, state, delta);

        record.undiscounted_return += out.reward;
        record.steps += 1;
        state = out.next_state;
    }

    Ok(EpisodeOutcome {
        record,
        value_deltas,
    })
}

/// Trains the ε-greedy TD(0) baseline under the same halting rule as the
/// amplitude-amplified agent.
pub fn td0_egreedy_train<E, R>(
    env: &E,
    config: &ExperimentConfig,
    rng: &mut R,
) -> Result<TrainOutput<E::State>, RlError>
where
    E: Environment,
    R: Rng + ?Sized,
{
    config.validate()?;
    let mut values = ValueTable::zeros(env.states());
    let mut records = Vec::new();
    let mut step_counter = 0u64;
    for episode in 0..config.max_episodes {
        let outcome = td0_episode(env, &mut values, config, episode, &mut step_counter, rng)?;
        let converged =
            check_convergence(outcome.value_deltas.values().copied(), config.epsilon_v);
        records.push(outcome.record);
        if converged {
            break;
        }
    }
    Ok(TrainOutput {
        records,
        values,
        policy: None,
    })
}

/// How the greedy path reads a trained agent.
#[derive(Debug, Clone, Copy)]
pub enum GreedyPolicy<'a, S: Copy + Ord + std::fmt::Debug> {
    /// Follow the most probable action of each state's register.
    Amplitude(&'a ActionPolicyTable<S>),
    /// Follow the one-step-lookahead argmax over a value table.
    ValueLookahead { values: &'a ValueTable<S>, gamma: f64 },
}

/// The state sequence a greedy walk visits, and whether it ended at a
/// terminal state. Cycles are cut off by the length cap.
#[derive(Debug, Clone, PartialEq)]
pub struct GreedyPath<S> {
    pub states: Vec<S>,
    pub reached_goal: bool,
}

impl<S> GreedyPath<S> {
    /// Number of moves taken.
    pub fn steps(&self) -> usize {
        self.states.len().saturating_sub(1)
    }
}

/// Walks the greedy policy from the start state for at most `max_len` moves.
pub fn greedy_policy_path<E>(
    env: &E,
    policy: GreedyPolicy<'_, E::State>,
    max_len: usize,
) -> Result<GreedyPath<E::State>, RlError>
where
    E: Environment,
{
    let mut state = env.start_state();
    let mut states = vec![state];
    while !env.is_terminal(state) && states.len() <= max_len {
        let action = match policy {
            GreedyPolicy::Amplitude(table) => table.greedy_action(state)?,
            GreedyPolicy::ValueLookahead { values, gamma } => {
                lookahead_greedy(env, values, state, gamma)?
            }
        };
        state = env.step(state, action)?.next_state;
        states.push(state);
    }
    Ok(GreedyPath {
        reached_goal: env.is_terminal(state),
        states,
    })
}

fn lookahead_greedy<E>(
    env: &E,
    values: &ValueTable<E::State>,
    state: E::State,
    gamma: f64,
) -> Result<usize, RlError>
where
    E: Environment,
{
    let mut best_action = 0usize;
    let mut best_target = f64::NEG_INFINITY;
    for action in 0..env.action_count() {
        let out = env.step(state, action)?;
        // The table value is read for terminal successors too (it stays at
        // its initial zero during training, since terminal states are never
        // updated); this keeps the argmax invariant under a constant shift
        // of the whole table.
        let target = out.reward + gamma * values.get(out.next_state)?;
        if target > best_target {
            best_target = target;
            best_action = action;
        }
    }
    Ok(best_action)
}

fn note_delta<S: Copy + Ord + std::fmt::Debug>(
    deltas: &mut BTreeMap<S, f64>,
    record: &mut EpisodeRecord,
    state: S,
    delta: f64,
) {
    let magnitude = delta.abs();
    let entry = deltas.entry(state).or_insert(0.0);
    if magnitude > *entry {
        *entry = magnitude;
    }
    if magnitude > record.max_value_delta {
        record.max_value_delta = magnitude;
    }
}
