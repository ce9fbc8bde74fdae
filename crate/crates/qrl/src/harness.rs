//! Experiment running: seeding, per-episode optimality tracking, learning
//! curves as CSV, paired agent comparisons, and the key=value config format.
//!
//! Reproducibility contract: (config, layout, seed) fully determines every
//! output byte. Each run derives its random stream from the seed and the
//! agent tag, so the two agents in a comparison never share randomness.

use crate::env::Environment;
use crate::grid::GridWorld;
use crate::rl::{
    check_convergence, greedy_policy_path, qla_episode, td0_episode, ActionPolicyTable,
    EpisodeRecord, ExperimentConfig, GreedyPolicy, RlError, StepsizeSchedule, ValueTable,
};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use std::fmt;
use std::io::{self, Write};
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;
use thiserror::Error;

/// Consecutive post-episode optimal greedy paths required before a run is
/// credited with having found the optimal policy.
pub const STABLE_CHECKS: usize = 50;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Rl(#[from] RlError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
    #[error("config file line {line}: {message}")]
    ConfigFile { line: usize, message: String },
    #[error("CSV line {line}: {message}")]
    Csv { line: usize, message: String },
    #[error("unknown agent {0:?}, expected \"qla\" or \"td0\"")]
    UnknownAgent(String),
    #[error("a comparison needs at least one seed")]
    NoSeeds,
}

/// Which learner a run drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AgentKind {
    Qla,
    Td0,
}

impl AgentKind {
    pub const BOTH: [AgentKind; 2] = [AgentKind::Qla, AgentKind::Td0];

    /// Stream id mixed into the run's random stream so the two agents never
    /// share randomness even under the same seed.
    fn stream_id(self) -> u64 {
        match self {
            AgentKind::Qla => 1,
            AgentKind::Td0 => 2,
        }
    }
}

impl fmt::Display for AgentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AgentKind::Qla => "qla",
            AgentKind::Td0 => "td0",
        })
    }
}

impl FromStr for AgentKind {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "qla" => Ok(AgentKind::Qla),
            "td0" => Ok(AgentKind::Td0),
            other => Err(HarnessError::UnknownAgent(other.to_string())),
        }
    }
}

/// One trained run: its learning curve, when (if ever) the greedy policy
/// became stably optimal, and the wall time spent.
#[derive(Debug, Clone)]
pub struct RunResult {
    pub agent: AgentKind,
    pub seed: u64,
    pub config: ExperimentConfig,
    pub records: Vec<EpisodeRecord>,
    /// 1-based index of the first episode after which the greedy path had
    /// the shortest possible length and stayed that way for
    /// [`STABLE_CHECKS`] consecutive checks (or until training ended, since
    /// the tables are frozen afterwards).
    pub episodes_to_optimal: Option<usize>,
    pub wall_time_secs: f64,
}

/// Runs one agent on one layout, checking the greedy path after every
/// episode. The run seed comes from `config.seed` combined with the agent
/// tag. Halts on the per-state |ΔV| convergence criterion or the episode
/// budget.
pub fn run_experiment(
    agent: AgentKind,
    config: &ExperimentConfig,
    grid: &GridWorld,
) -> Result<RunResult, HarnessError> {
    match agent {
        AgentKind::Qla => config.validate_for_actions(grid.action_count())?,
        AgentKind::Td0 => config.validate().map_err(RlError::from)?,
    }
    let started = Instant::now();
    let shortest = grid
        .shortest_path_len(grid.start(), grid.goal())
        .expect("layout validation guarantees reachability");
    let path_cap = 2 * grid.free_cells().len();

    let mut rng = ChaCha12Rng::seed_from_u64(config.seed);
    rng.set_stream(agent.stream_id());

    let states = grid.states();
    let mut values = ValueTable::zeros(states.iter().copied());
    let mut policy = match agent {
        AgentKind::Qla => Some(ActionPolicyTable::uniform(
            states.iter().copied(),
            grid.action_count(),
        )?),
        AgentKind::Td0 => None,
    };

    let mut records = Vec::new();
    let mut episodes_to_optimal = None;
    let mut streak_start = None;
    let mut step_counter = 0u64;

    for episode in 0..config.max_episodes {
        let outcome = match &mut policy {
            Some(policy) => qla_episode(
                grid,
                policy,
                &mut values,
                config,
                episode,
                &mut step_counter,
                &mut rng,
            )?,
            None => td0_episode(
                grid,
                &mut values,
                config,
                episode,
                &mut step_counter,
                &mut rng,
            )?,
        };
        let converged =
            check_convergence(outcome.value_deltas.values().copied(), config.epsilon_v);
        records.push(outcome.record);

        let greedy = match &policy {
            Some(table) => GreedyPolicy::Amplitude(table),
            None => GreedyPolicy::ValueLookahead {
                values: &values,
                gamma: config.gamma,
            },
        };
        let path = greedy_policy_path(grid, greedy, path_cap)?;
        let optimal = path.reached_goal && path.steps() == shortest;
        if optimal {
            let start = *streak_start.get_or_insert(episode);
            if episodes_to_optimal.is_none() && episode - start + 1 >= STABLE_CHECKS {
                episodes_to_optimal = Some(start + 1);
            }
        } else {
            streak_start = None;
        }
        if converged {
            break;
        }
    }
    // Tables freeze once training stops; a streak alive at the end stays
    // optimal forever.
    if episodes_to_optimal.is_none() {
        if let Some(start) = streak_start {
            episodes_to_optimal = Some(start + 1);
        }
    }

    Ok(RunResult {
        agent,
        seed: config.seed,
        config: config.clone(),
        records,
        episodes_to_optimal,
        wall_time_secs: started.elapsed().as_secs_f64(),
    })
}

/// Median and quartiles of episodes-to-optimal across seeds, with runs that
/// never became optimal ordered as larger than every finite count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AgentStats {
    pub median: Option<f64>,
    pub first_quartile: Option<f64>,
    pub third_quartile: Option<f64>,
    pub optimal_runs: usize,
    pub total_runs: usize,
}

/// Paired comparison of the two agents across a block of seeds.
#[derive(Debug, Clone)]
pub struct ComparisonSummary {
    pub runs: Vec<RunResult>,
    pub base_seed: u64,
    pub n_seeds: usize,
    pub qla: AgentStats,
    pub td0: AgentStats,
}

/// Runs both agents on seeds `config.seed .. config.seed + n_seeds` and
/// summarizes episodes-to-optimal per agent.
pub fn compare(
    config: &ExperimentConfig,
    grid: &GridWorld,
    n_seeds: usize,
) -> Result<ComparisonSummary, HarnessError> {
    if n_seeds == 0 {
        return Err(HarnessError::NoSeeds);
    }
    let mut runs = Vec::with_capacity(2 * n_seeds);
    for offset in 0..n_seeds {
        let seeded = ExperimentConfig {
            seed: config.seed + offset as u64,
            ..config.clone()
        };
        for agent in AgentKind::BOTH {
            runs.push(run_experiment(agent, &seeded, grid)?);
        }
    }
    let stats = |agent: AgentKind| {
        let outcomes: Vec<Option<usize>> = runs
            .iter()
            .filter(|r| r.agent == agent)
            .map(|r| r.episodes_to_optimal)
            .collect();
        agent_stats(&outcomes)
    };
    Ok(ComparisonSummary {
        base_seed: config.seed,
        n_seeds,
        qla: stats(AgentKind::Qla),
        td0: stats(AgentKind::Td0),
        runs,
    })
}

fn agent_stats(outcomes: &[Option<usize>]) -> AgentStats {
    // None sorts last: a run that never found the optimum outranks any
    // finite episode count.
    let mut sorted: Vec<Option<usize>> = outcomes.to_vec();
    sorted.sort_by_key(|o| o.map_or(usize::MAX, |v| v));
    let value_at = |lo: usize, hi: usize| -> Option<f64> {
        match (sorted[lo], sorted[hi]) {
            (Some(a), Some(b)) => Some((a + b) as f64 / 2.0),
            _ => None,
        }
    };
    let order_stat = |xs: std::ops::Range<usize>| -> Option<f64> {
        let n = xs.end - xs.start;
        if n == 0 {
            return None;
        }
        let mid = xs.start + n / 2;
        if n % 2 == 1 {
            value_at(mid, mid)
        } else {
            value_at(mid - 1, mid)
        }
    };
    let n = sorted.len();
    let half = n / 2;
    AgentStats {
        median: order_stat(0..n),
        // Tukey hinges: quartiles are medians of the two halves, the middle
        // element excluded when n is odd.
        first_quartile: order_stat(0..half),
        third_quartile: order_stat((n - half)..n),
        optimal_runs: outcomes.iter().filter(|o| o.is_some()).count(),
        total_runs: outcomes.len(),
    }
}

impl fmt::Display for ComparisonSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "comparison over {} seed(s) starting at {}",
            self.n_seeds, self.base_seed
        )?;
        writeln!(f, "agent  optimal  episodes_to_optimal median [q1, q3]")?;
        for (name, stats) in [("qla", &self.qla), ("td0", &self.td0)] {
            writeln!(
                f,
                "{name}    {}/{}    {} [{}, {}]",
                stats.optimal_runs,
                stats.total_runs,
                fmt_opt(stats.median),
                fmt_opt(stats.first_quartile),
                fmt_opt(stats.third_quartile),
            )?;
        }
        Ok(())
    }
}

fn fmt_opt(value: Option<f64>) -> String {
    match value {
        Some(v) => format!("{v}"),
        None => "none".to_string(),
    }
}

/// One parsed CSV row; the learning-curve file round-trips through this.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveRow {
    pub agent: String,
    pub seed: u64,
    pub episode: usize,
    pub steps: usize,
    pub undiscounted_return: f64,
    pub max_value_delta: f64,
}

pub const CSV_HEADER: &str = "agent,seed,episode,steps,return,max_value_delta";

/// Writes learning curves: the fixed header, then one row per episode per
/// run, UTF-8 with LF line endings.
pub fn write_curves<W: Write>(results: &[RunResult], out: &mut W) -> io::Result<()> {
    out.write_all(CSV_HEADER.as_bytes())?;
    out.write_all(b"\n")?;
    for run in results {
        for record in &run.records {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                run.agent,
                run.seed,
                record.episode,
                record.steps,
                record.undiscounted_return,
                record.max_value_delta
            )?;
        }
    }
    Ok(())
}

pub fn write_curves_to_path(results: &[RunResult], path: &Path) -> Result<(), HarnessError> {
    let wrap = |source: io::Error| HarnessError::Io {
        path: path.display().to_string(),
        source,
    };
    let mut file = io::BufWriter::new(std::fs::File::create(path).map_err(wrap)?);
    write_curves(results, &mut file).map_err(wrap)?;
    file.flush().map_err(wrap)
}

/// Parses a learning-curve CSV produced by [`write_curves`].
pub fn read_curves(text: &str) -> Result<Vec<CurveRow>, HarnessError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header == CSV_HEADER => {}
        Some((_, other)) => {
            return Err(HarnessError::Csv {
                line: 1,
                message: format!("unexpected header {other:?}"),
            })
        }
        None => {
            return Err(HarnessError::Csv {
                line: 1,
                message: "empty file".to_string(),
            })
        }
    }
    let mut rows = Vec::new();
    for (index, line) in lines {
        let line_no = index + 1;
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 6 {
            return Err(HarnessError::Csv {
                line: line_no,
                message: format!("expected 6 fields, found {}", fields.len()),
            });
        }
        let parse_err = |what: &str| HarnessError::Csv {
            line: line_no,
            message: format!("cannot parse {what}"),
        };
        rows.push(CurveRow {
            agent: fields[0].to_string(),
            seed: fields[1].parse().map_err(|_| parse_err("seed"))?,
            episode: fields[2].parse().map_err(|_| parse_err("episode"))?,
            steps: fields[3].parse().map_err(|_| parse_err("steps"))?,
            undiscounted_return: fields[4].parse().map_err(|_| parse_err("return"))?,
            max_value_delta: fields[5].parse().map_err(|_| parse_err("max_value_delta"))?,
        });
    }
    Ok(rows)
}

/// A gnuplot script for the steps-per-episode curves of a CSV file. Plotting
/// stays out of the library; this is a convenience for quick looks.
pub fn plot_script(csv_path: &str) -> String {
    format!(
        "set datafile separator ','\n\
         set key autotitle columnhead\n\
         set xlabel 'episode'\n\
         set ylabel 'steps'\n\
         set logscale y\n\
         plot '{csv_path}' using 3:($1 eq 'qla' ? $4 : 1/0) with lines title 'qla', \\\n\
         \x20    '{csv_path}' using 3:($1 eq 'td0' ? $4 : 1/0) with lines title 'td0'\n"
    )
}

/// Parsed key=value overrides from a config file; unset fields keep their
/// previous (flag or default) values.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigPatch {
    pub gamma: Option<f64>,
    pub epsilon_greedy: Option<f64>,
    pub schedule: Option<String>,
    pub schedule_base: Option<f64>,
    pub schedule_exponent: Option<f64>,
    pub grover_gain: Option<f64>,
    pub l_max: Option<usize>,
    pub epsilon_v: Option<f64>,
    pub max_episodes: Option<usize>,
    pub max_steps_per_episode: Option<usize>,
    pub seed: Option<u64>,
}

/// Parses the flat key=value config format. `#` starts a comment; blank
/// lines are ignored; keys are the snake_case configuration field names.
pub fn parse_config_file(text: &str) -> Result<ConfigPatch, HarnessError> {
    let mut patch = ConfigPatch::default();
    for (index, raw) in text.lines().enumerate() {
        let line_no = index + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| HarnessError::ConfigFile {
            line: line_no,
            message: format!("expected key=value, found {line:?}"),
        })?;
        let key = key.trim();
        let value = value.trim();
        let bad_value = |what: &str| HarnessError::ConfigFile {
            line: line_no,
            message: format!("cannot parse {value:?} as {what} for key {key}"),
        };
        match key {
            "gamma" => patch.gamma = Some(value.parse().map_err(|_| bad_value("a number"))?),
            "epsilon_greedy" => {
                patch.epsilon_greedy = Some(value.parse().map_err(|_| bad_value("a number"))?)
            }
            "schedule" => {
                if !["constant", "harmonic", "polynomial"].contains(&value) {
                    return Err(HarnessError::ConfigFile {
                        line: line_no,
                        message: format!(
                            "unknown schedule {value:?}, expected constant, harmonic or polynomial"
                        ),
                    });
                }
                patch.schedule = Some(value.to_string());
            }
            "schedule_base" => {
                patch.schedule_base = Some(value.parse().map_err(|_| bad_value("a number"))?)
            }
            "schedule_exponent" => {
                patch.schedule_exponent = Some(value.parse().map_err(|_| bad_value("a number"))?)
            }
            "grover_gain" => {
                patch.grover_gain = Some(value.parse().map_err(|_| bad_value("a number"))?)
            }
            "l_max" => patch.l_max = Some(value.parse().map_err(|_| bad_value("an integer"))?),
            "epsilon_v" => {
                patch.epsilon_v = Some(value.parse().map_err(|_| bad_value("a number"))?)
            }
            "max_episodes" => {
                patch.max_episodes = Some(value.parse().map_err(|_| bad_value("an integer"))?)
            }
            "max_steps_per_episode" => {
                patch.max_steps_per_episode =
                    Some(value.parse().map_err(|_| bad_value("an integer"))?)
            }
            "seed" => patch.seed = Some(value.parse().map_err(|_| bad_value("an integer"))?),
            other => {
                return Err(HarnessError::ConfigFile {
                    line: line_no,
                    message: format!("unknown key {other:?}"),
                })
            }
        }
    }
    Ok(patch)
}

impl ConfigPatch {
    /// Applies the patch on top of an existing configuration.
    pub fn apply(&self, config: &mut ExperimentConfig) {
        if let Some(v) = self.gamma {
            config.gamma = v;
        }
        if let Some(v) = self.epsilon_greedy {
            config.epsilon_greedy = v;
        }
        let (current_base, current_exponent) = match config.schedule {
            StepsizeSchedule::Constant { base } => (base, 1.0),
            StepsizeSchedule::Harmonic { base } => (base, 1.0),
            StepsizeSchedule::Polynomial { base, exponent } => (base, exponent),
        };
        let base = self.schedule_base.unwrap_or(current_base);
        let exponent = self.schedule_exponent.unwrap_or(current_exponent);
        let kind = self.schedule.as_deref().unwrap_or(match config.schedule {
            StepsizeSchedule::Constant { .. } => "constant",
            StepsizeSchedule::Harmonic { .. } => "harmonic",
            StepsizeSchedule::Polynomial { .. } => "polynomial",
        });
        config.schedule = match kind {
            "harmonic" => StepsizeSchedule::Harmonic { base },
            "polynomial" => StepsizeSchedule::Polynomial { base, exponent },
            _ => StepsizeSchedule::Constant { base },
        };
        if let Some(v) = self.grover_gain {
            config.grover_gain = v;
        }
        if let Some(v) = self.l_max {
            config.l_max = v;
        }
        if let Some(v) = self.epsilon_v {
            config.epsilon_v = v;
        }
        if let Some(v) = self.max_episodes {
            config.max_episodes = v;
        }
        if let Some(v) = self.max_steps_per_episode {
            config.max_steps_per_episode = v;
        }
        if let Some(v) = self.seed {
            config.seed = v;
        }
    }
}
