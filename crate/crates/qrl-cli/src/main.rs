//! Command-line experiment runner.
//!
//! Exit codes: 0 on success, 1 on validation errors (bad flags, unparsable
//! or invalid configuration, missing or malformed layout), 2 on runtime
//! errors.

use qrl::grid::GridWorld;
use qrl::harness::{
    compare, parse_config_file, plot_script, run_experiment, write_curves_to_path, AgentKind,
    HarnessError,
};
use qrl::rl::{ExperimentConfig, RlError};
use std::path::PathBuf;
use std::process::ExitCode;

const USAGE: &str = "\
qrl - amplitude-amplified vs classical TD(0) gridworld experiments

USAGE:
    qrl run [FLAGS]          train one agent, print a summary
    qrl compare [FLAGS]      run both agents across a block of seeds
    qrl oracle-check         verify the Grover rotation closed form

FLAGS:
    --agent <qla|td0>        agent for `run` (default qla)
    --config <path>          key=value config file (see docs for keys)
    --layout <path>          13x13 layout file ('#', '.', 'S', 'G')
    --seed <u64>             run seed / base seed for `compare`
    --episodes <n>           episode budget override
    --out <path>             write learning curves as CSV
    --seeds <n>              seed count for `compare` (default 10)
    --plot-script <path>     write a gnuplot script next to the CSV

Command-line flags override config-file values, which override defaults.
Exit codes: 0 success, 1 validation error, 2 runtime error.";

enum CliError {
    /// Wrong invocation: unknown flag or subcommand, missing value.
    Usage(String),
    /// Well-formed invocation with invalid inputs.
    Validation(String),
    /// The experiment itself failed.
    Runtime(String),
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    match dispatch(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(message)) => {
            eprintln!("error: {message}\n\n{USAGE}");
            ExitCode::from(1)
        }
        Err(CliError::Validation(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
        Err(CliError::Runtime(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(args: &[String]) -> Result<(), CliError> {
    match args.first().map(String::as_str) {
        Some("run") => cmd_run(&args[1..]),
        Some("compare") => cmd_compare(&args[1..]),
        Some("oracle-check") => cmd_oracle_check(&args[1..]),
        Some("--help") | Some("-h") | Some("help") => {
            println!("{USAGE}");
            Ok(())
        }
        Some(other) => Err(CliError::Usage(format!("unknown subcommand {other:?}"))),
        None => Err(CliError::Usage("missing subcommand".to_string())),
    }
}

#[derive(Default)]
struct Flags {
    agent: Option<String>,
    config: Option<PathBuf>,
    layout: Option<PathBuf>,
    seed: Option<u64>,
    episodes: Option<usize>,
    out: Option<PathBuf>,
    seeds: Option<usize>,
    plot_script: Option<PathBuf>,
}

fn parse_flags(args: &[String], allowed: &[&str]) -> Result<Flags, CliError> {
    let mut flags = Flags::default();
    let mut it = args.iter();
    while let Some(arg) = it.next() {
        let name = arg.as_str();
        if !allowed.contains(&name) {
            return Err(CliError::Usage(format!("unknown flag {name:?}")));
        }
        let value = it
            .next()
            .ok_or_else(|| CliError::Usage(format!("flag {name} needs a value")))?;
        match name {
            "--agent" => flags.agent = Some(value.clone()),
            "--config" => flags.config = Some(PathBuf::from(value)),
            "--layout" => flags.layout = Some(PathBuf::from(value)),
            "--seed" => flags.seed = Some(parse_int(name, value)?),
            "--episodes" => flags.episodes = Some(parse_int(name, value)?),
            "--out" => flags.out = Some(PathBuf::from(value)),
            "--seeds" => flags.seeds = Some(parse_int(name, value)?),
            "--plot-script" => flags.plot_script = Some(PathBuf::from(value)),
            _ => unreachable!("allowed list is exhaustive"),
        }
    }
    Ok(flags)
}

fn parse_int<T: std::str::FromStr>(name: &str, value: &str) -> Result<T, CliError> {
    value
        .parse::<T>()
        .map_err(|_| CliError::Usage(format!("{name} expects an integer, got {value:?}")))
}

/// Defaults, then config file, then flags.
fn build_config(flags: &Flags) -> Result<ExperimentConfig, CliError> {
    let mut config = ExperimentConfig::default();
    if let Some(path) = &flags.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
        let patch = parse_config_file(&text)
            .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
        patch.apply(&mut config);
    }
    if let Some(seed) = flags.seed {
        config.seed = seed;
    }
    if let Some(episodes) = flags.episodes {
        config.max_episodes = episodes;
    }
    Ok(config)
}

fn build_layout(flags: &Flags) -> Result<GridWorld, CliError> {
    match &flags.layout {
        None => Ok(GridWorld::default_layout()),
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
            GridWorld::parse_layout(&text)
                .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
        }
    }
}

fn classify(err: HarnessError) -> CliError {
    match err {
        HarnessError::Rl(RlError::Config(e)) => CliError::Validation(e.to_string()),
        HarnessError::NoSeeds => CliError::Validation(err.to_string()),
        other => CliError::Runtime(other.to_string()),
    }
}

fn cmd_run(args: &[String]) -> Result<(), CliError> {
    let flags = parse_flags(
        args,
        &[
            "--agent",
            "--config",
            "--layout",
            "--seed",
            "--episodes",
            "--out",
        ],
    )?;
    let agent: AgentKind = flags
        .agent
        .as_deref()
        .unwrap_or("qla")
        .parse()
        .map_err(|e: HarnessError| CliError::Usage(e.to_string()))?;
    let config = build_config(&flags)?;
    let grid = build_layout(&flags)?;

    let result = run_experiment(agent, &config, &grid).map_err(classify)?;
    let optimal = match result.episodes_to_optimal {
        Some(e) => format!("stable optimal greedy path from episode {e}"),
        None => "optimal greedy path not reached".to_string(),
    };
    let last_steps = result.records.last().map_or(0, |r| r.steps);
    println!(
        "agent {} seed {}: {} episode(s), last episode {} step(s), {optimal}, wall {:.2}s",
        result.agent,
        result.seed,
        result.records.len(),
        last_steps,
        result.wall_time_secs,
    );
    if let Some(path) = &flags.out {
        write_curves_to_path(std::slice::from_ref(&result), path).map_err(classify)?;
        println!("curves written to {}", path.display());
    }
    Ok(())
}

fn cmd_compare(args: &[String]) -> Result<(), CliError> {
    let flags = parse_flags(
        args,
        &[
            "--config",
            "--layout",
            "--seed",
            "--episodes",
            "--out",
            "--seeds",
            "--plot-script",
        ],
    )?;
    let config = build_config(&flags)?;
    let grid = build_layout(&flags)?;
    let n_seeds = flags.seeds.unwrap_or(10);

    let summary = compare(&config, &grid, n_seeds).map_err(classify)?;
    print!("{summary}");
    if let Some(path) = &flags.out {
        write_curves_to_path(&summary.runs, path).map_err(classify)?;
        println!("curves written to {}", path.display());
        if let Some(script_path) = &flags.plot_script {
            std::fs::write(script_path, plot_script(&path.display().to_string()))
                .map_err(|e| CliError::Runtime(format!("{}: {e}", script_path.display())))?;
            println!("plot script written to {}", script_path.display());
        }
    } else if flags.plot_script.is_some() {
        return Err(CliError::Validation(
            "--plot-script needs --out to know the CSV path".to_string(),
        ));
    }
    Ok(())
}

/// Checks the simulated Grover iteration against the analytic rotation law
/// on every register width up to six qubits, every target, and every
/// iteration count inside the quarter turn. One line per (n, L) pair.
fn cmd_oracle_check(args: &[String]) -> Result<(), CliError> {
    parse_flags(args, &[])?;
    let mut all_ok = true;
    for n_qubits in 1..=6usize {
        let dim = 1usize << n_qubits;
        let beta = (1.0 / (dim as f64).sqrt()).asin();
        let l_cap = ((std::f64::consts::FRAC_PI_2 / beta - 1.0) / 2.0 + 1e-9).floor() as usize;
        for l in 0..=l_cap {
            let (expected, _) = qrl::closed_form_amplitude(beta, l);
            let mut max_err = 0.0f64;
            for target in 0..dim {
                let register = qrl::AmplitudeRegister::uniform(n_qubits)
                    .and_then(|r| r.grover_update(target, l))
                    .map_err(|e| CliError::Runtime(e.to_string()))?;
                let err = (register.amplitude(target).re - expected).abs();
                max_err = max_err.max(err);
            }
            let ok = max_err <= 1e-10;
            all_ok &= ok;
            println!(
                "n={n_qubits} L={l}: {dim} targets, max |amplitude - sin((2L+1)beta)| = {max_err:.2e} ... {}",
                if ok { "ok" } else { "FAIL" }
            );
        }
    }
    if all_ok {
        Ok(())
    } else {
        Err(CliError::Runtime(
            "rotation-law oracle check failed".to_string(),
        ))
    }
}
