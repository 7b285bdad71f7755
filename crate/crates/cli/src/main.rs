//! Command-line front end for oblivious communication games: catalog
//! builders, classical bounds, quantum strategy evaluation, see-saw search,
//! and two-party scenario bridging. Machine-readable JSON goes to stdout,
//! a human summary to stderr; the exit code is 0 iff every check passed.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use prepctx_core::*;

/// Largest dimension the CGLMP Born-rule simulation will run at.
const SIMULATE_CAP: usize = 50;

#[derive(Parser)]
#[command(name = "prepctx", version, about = "Oblivious communication games")]
struct Cli {
    /// Override the command's default check tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Seed for randomized searches.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Directory for artifact files (game, strategy, convergence trace).
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Random access code: analytic bound, optional enumeration and see-saw.
    Rac {
        /// Number of input digits.
        #[arg(long)]
        n: usize,
        /// Digit base, also the outcome count.
        #[arg(long)]
        d: usize,
        /// Cross-check the analytic bound by exhaustive search.
        #[arg(long)]
        enumerate: bool,
        /// Run the see-saw search for a quantum strategy.
        #[arg(long)]
        seesaw: bool,
        /// See-saw restarts.
        #[arg(long)]
        restarts: Option<usize>,
        /// See-saw Hilbert dimension; defaults to the digit base.
        #[arg(long)]
        dim: Option<usize>,
        /// See-saw sweep cap per restart.
        #[arg(long)]
        max_iters: Option<usize>,
    },
    /// Two-setting d-outcome correlation game played on maximally mixed cells.
    Cglmp {
        /// Outcome count.
        #[arg(long)]
        d: usize,
        /// Cross-check the closed form against a full Born-rule simulation.
        #[arg(long)]
        simulate: bool,
    },
    /// Check a two-party scenario against its single-message game form.
    Bridge {
        /// Scenario file: settings, priors, task keys, payoffs.
        scenario: PathBuf,
        /// Shared state and both parties' measurements.
        setup: PathBuf,
        /// Also enumerate the classical bound of the bridged game.
        #[arg(long)]
        enumerate: bool,
    },
    /// Score a strategy file against a game file.
    Eval {
        game: PathBuf,
        strategy: PathBuf,
    },
    /// Enumerate the classical bound of a game file.
    Bound {
        game: PathBuf,
        /// Message alphabet cap; defaults to the first partition's cell count.
        #[arg(long)]
        alphabet: Option<usize>,
        /// Enumerate without pruning (budget-capped).
        #[arg(long)]
        exact: bool,
    },
    /// Optimize a quantum strategy for a game file.
    Seesaw {
        game: PathBuf,
        /// Hilbert dimension of the transmitted states.
        #[arg(long)]
        dim: usize,
        /// Independent restarts.
        #[arg(long)]
        restarts: Option<usize>,
        /// Stop a restart once a sweep improves by less than this.
        #[arg(long)]
        eps: Option<f64>,
        /// Sweep cap per restart.
        #[arg(long)]
        max_iters: Option<usize>,
    },
}

#[derive(Serialize)]
struct RunReport {
    command: String,
    seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    tolerance: Option<f64>,
    inputs: BTreeMap<String, String>,
    results: Map<String, Value>,
    checks: BTreeMap<String, bool>,
    pass: bool,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    artifacts: BTreeMap<String, String>,
}

#[derive(Default)]
struct Parts {
    tolerance: Option<f64>,
    inputs: BTreeMap<String, String>,
    results: Map<String, Value>,
    checks: BTreeMap<String, bool>,
    artifacts: BTreeMap<String, String>,
}

impl Parts {
    fn result(&mut self, key: &str, value: Value) {
        self.results.insert(key.to_string(), value);
    }

    fn check(&mut self, name: &str, ok: bool) {
        self.checks.insert(name.to_string(), ok);
    }

    fn digest(&mut self, name: &str, text: &str) {
        let hash = Sha256::digest(text.as_bytes());
        self.inputs.insert(name.to_string(), format!("sha256:{hash:x}"));
    }

    fn artifact(
        &mut self,
        dir: &Option<PathBuf>,
        name: &str,
        text: &str,
    ) -> anyhow::Result<()> {
        let Some(dir) = dir else { return Ok(()) };
        fs::create_dir_all(dir)
            .with_context(|| format!("creating output directory {}", dir.display()))?;
        let path = dir.join(name);
        fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
        let key = name.trim_end_matches(".json").trim_end_matches(".csv");
        self.artifacts.insert(key.to_string(), path.display().to_string());
        Ok(())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let echo = command_echo(&cli);
    match run(&cli) {
        Ok(parts) => {
            let pass = parts.checks.values().all(|&ok| ok);
            let report = RunReport {
                command: echo,
                seed: cli.seed,
                tolerance: parts.tolerance,
                inputs: parts.inputs,
                results: parts.results,
                checks: parts.checks,
                pass,
                artifacts: parts.artifacts,
            };
            println!(
                "{}",
                serde_json::to_string_pretty(&report).expect("report serializes")
            );
            summarize(&report, start);
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(err) => {
            let report = json!({
                "command": echo,
                "error": format!("{err:#}"),
                "pass": false,
            });
            println!(
                "{}",
                serde_json::to_string_pretty(&report).expect("report serializes")
            );
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}

/// Canonical reconstruction of the effective invocation; flag order is
/// fixed so identical configurations echo identically.
fn command_echo(cli: &Cli) -> String {
    let mut parts = vec!["prepctx".to_string()];
    match &cli.cmd {
        Cmd::Rac {
            n,
            d,
            enumerate,
            seesaw,
            restarts,
            dim,
            max_iters,
        } => {
            parts.push(format!("rac --n {n} --d {d}"));
            if *enumerate {
                parts.push("--enumerate".into());
            }
            if *seesaw {
                parts.push("--seesaw".into());
                if let Some(r) = restarts {
                    parts.push(format!("--restarts {r}"));
                }
                if let Some(m) = dim {
                    parts.push(format!("--dim {m}"));
                }
                if let Some(i) = max_iters {
                    parts.push(format!("--max-iters {i}"));
                }
            }
        }
        Cmd::Cglmp { d, simulate } => {
            parts.push(format!("cglmp --d {d}"));
            if *simulate {
                parts.push("--simulate".into());
            }
        }
        Cmd::Bridge {
            scenario,
            setup,
            enumerate,
        } => {
            parts.push(format!("bridge {} {}", scenario.display(), setup.display()));
            if *enumerate {
                parts.push("--enumerate".into());
            }
        }
        Cmd::Eval { game, strategy } => {
            parts.push(format!("eval {} {}", game.display(), strategy.display()));
        }
        Cmd::Bound {
            game,
            alphabet,
            exact,
        } => {
            parts.push(format!("bound {}", game.display()));
            if let Some(a) = alphabet {
                parts.push(format!("--alphabet {a}"));
            }
            if *exact {
                parts.push("--exact".into());
            }
        }
        Cmd::Seesaw {
            game,
            dim,
            restarts,
            eps,
            max_iters,
        } => {
            parts.push(format!("seesaw {} --dim {dim}", game.display()));
            if let Some(r) = restarts {
                parts.push(format!("--restarts {r}"));
            }
            if let Some(e) = eps {
                parts.push(format!("--eps {e}"));
            }
            if let Some(i) = max_iters {
                parts.push(format!("--max-iters {i}"));
            }
        }
    }
    if let Some(t) = cli.tol {
        parts.push(format!("--tol {t}"));
    }
    parts.push(format!("--seed {}", cli.seed));
    if let Some(out) = &cli.output {
        parts.push(format!("--output {}", out.display()));
    }
    parts.join(" ")
}

fn run(cli: &Cli) -> anyhow::Result<Parts> {
    match &cli.cmd {
        Cmd::Rac {
            n,
            d,
            enumerate,
            seesaw,
            restarts,
            dim,
            max_iters,
        } => cmd_rac(
            cli, *n, *d, *enumerate, *seesaw, *restarts, *dim, *max_iters,
        ),
        Cmd::Cglmp { d, simulate } => cmd_cglmp(cli, *d, *simulate),
        Cmd::Bridge {
            scenario,
            setup,
            enumerate,
        } => cmd_bridge(cli, scenario, setup, *enumerate),
        Cmd::Eval { game, strategy } => cmd_eval(cli, game, strategy),
        Cmd::Bound {
            game,
            alphabet,
            exact,
        } => cmd_bound(game, *alphabet, *exact),
        Cmd::Seesaw {
            game,
            dim,
            restarts,
            eps,
            max_iters,
        } => cmd_seesaw(cli, game, *dim, *restarts, *eps, *max_iters),
    }
}

fn read_input(path: &Path, what: &str) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {what} file {}", path.display()))
}

fn bound_json(outcome: &BoundOutcome) -> Value {
    json!({
        "value": outcome.value,
        "nodes": outcome.nodes,
        "alphabet_used": outcome.alphabet_used,
    })
}

fn witness_json(strategy: &ClassicalStrategy) -> Value {
    json!({
        "alphabet_size": strategy.alphabet_size(),
        "encoding": strategy.encoding(),
        "decoding": strategy.decoding(),
    })
}

fn trace_csv(trace: &[TracePoint]) -> String {
    let mut csv = String::from("iteration,objective\n");
    for point in trace {
        csv.push_str(&format!("{},{}\n", point.sweep, point.value));
    }
    csv
}

fn seesaw_json(outcome: &SeesawOutcome, cfg: &SeesawConfig) -> Value {
    json!({
        "value": outcome.value,
        "best_restart": outcome.best_restart,
        "restarts": cfg.restarts,
        "dim": cfg.dim,
        "sweeps": outcome.trace.len(),
        "failed_restarts": outcome.failures.len(),
    })
}

#[allow(clippy::too_many_arguments)]
fn cmd_rac(
    cli: &Cli,
    n: usize,
    d: usize,
    enumerate: bool,
    run_seesaw: bool,
    restarts: Option<usize>,
    dim: Option<usize>,
    max_iters: Option<usize>,
) -> anyhow::Result<Parts> {
    let mut parts = Parts::default();
    let spec = RacSpec::new(n, d)?;
    let game = build_rac(&spec)?;
    let game_text = save_game(&game);
    parts.digest("game", &game_text);
    parts.artifact(&cli.output, "game.json", &game_text)?;

    let formula = rac_pnc_bound(&spec);
    parts.result("rac_pnc_bound", json!(formula));

    if enumerate {
        let exact = match pnc_bound(&game, d, SearchMode::Exact) {
            Ok(outcome) => Some(outcome),
            Err(Error::NodeBudget { .. }) => None,
            Err(err) => return Err(err.into()),
        };
        let pruned = pnc_bound(&game, d, SearchMode::BranchAndBound)?;
        parts.result(
            "pnc_bound",
            json!({
                "exact": exact.as_ref().map(bound_json),
                "branch_and_bound": bound_json(&pruned),
            }),
        );
        if let Some(exact) = &exact {
            parts.check("exact_matches_formula", exact.value == formula);
        }
        parts.check("branch_and_bound_matches_formula", pruned.value == formula);
        parts.check(
            "witness_balanced",
            is_balanced(&game, &pruned.witness, tol::BALANCE),
        );
    }

    if run_seesaw {
        let mut cfg = SeesawConfig::new(dim.unwrap_or(d));
        if let Some(r) = restarts {
            cfg.restarts = r;
        }
        if let Some(i) = max_iters {
            cfg.max_iters = i;
        }
        cfg.rng_seed = cli.seed;
        let outcome = seesaw(&game, &cfg)?;
        parts.result("seesaw", seesaw_json(&outcome, &cfg));
        let tolerance = cli.tol.unwrap_or(tol::OBLIVIOUSNESS_LOOSE);
        parts.tolerance = Some(tolerance);
        let report = check_quantum_obliviousness(&game, &outcome.strategy, tolerance)?;
        parts.check("seesaw_oblivious", report.pass);
        parts.check(
            "seesaw_value_in_range",
            (0.0..=1.0 + tol::EXACT_ARITHMETIC).contains(&outcome.value),
        );
        parts.artifact(&cli.output, "strategy.json", &save_strategy(&outcome.strategy))?;
        parts.artifact(&cli.output, "trace.csv", &trace_csv(&outcome.trace))?;
    }
    Ok(parts)
}

fn cmd_cglmp(cli: &Cli, d: usize, simulate: bool) -> anyhow::Result<Parts> {
    let mut parts = Parts::default();
    let spec = CglmpSpec::new(d)?;
    let game = build_cglmp_game(&spec)?;
    let game_text = save_game(&game);
    parts.digest("game", &game_text);
    parts.artifact(&cli.output, "game.json", &game_text)?;

    let formula = cglmp_mixed_value(&spec);
    parts.result("cglmp_mixed_value", json!(formula));
    parts.check("exceeds_classical", formula > 0.5);

    match pnc_bound(&game, d, SearchMode::Exact) {
        Ok(outcome) => {
            parts.check("enumerated_is_half", outcome.value == 0.5);
            parts.result("pnc_bound", bound_json(&outcome));
        }
        Err(Error::NodeBudget { .. }) => parts.result("pnc_bound", Value::Null),
        Err(err) => return Err(err.into()),
    }
    match group_strategy_sweep(&cglmp_scenario(&spec)) {
        Ok(sweep) => {
            parts.check("sweep_is_half", sweep.best_value == 0.5);
            parts.result(
                "group_strategy_sweep",
                json!({
                    "best_value": sweep.best_value,
                    "assignments": sweep.assignments,
                }),
            );
        }
        Err(Error::SizeCap { .. }) => parts.result("group_strategy_sweep", Value::Null),
        Err(err) => return Err(err.into()),
    }

    if simulate {
        if d > SIMULATE_CAP {
            bail!("Born-rule simulation is capped at d = {SIMULATE_CAP}, got {d}");
        }
        let gamma = vec![1.0; d];
        let strategy = cglmp_quantum_strategy(&spec, &gamma)?;
        let played = game.performance(&born_distribution(&strategy)?)?;
        let report = check_quantum_obliviousness(&game, &strategy, tol::OBLIVIOUSNESS)?;
        parts.result(
            "born_simulation",
            json!({
                "performance": played,
                "check_quantum_obliviousness": {
                    "max_deviation": report.max_deviation,
                    "max_mixed_distance": report.max_mixed_distance,
                },
            }),
        );
        parts.check("simulation_matches_formula", (played - formula).abs() <= 1e-9);
        parts.check("oblivious", report.pass);
        parts.check(
            "cell_averages_maximally_mixed",
            report.max_mixed_distance <= tol::EXACT_ARITHMETIC,
        );
        parts.artifact(&cli.output, "strategy.json", &save_strategy(&strategy))?;
    }
    Ok(parts)
}

fn cmd_bridge(
    cli: &Cli,
    scenario_path: &Path,
    setup_path: &Path,
    enumerate: bool,
) -> anyhow::Result<Parts> {
    let mut parts = Parts::default();
    let scenario_text = read_input(scenario_path, "scenario")?;
    let setup_text = read_input(setup_path, "setup")?;
    parts.digest("scenario", &scenario_text);
    parts.digest("setup", &setup_text);
    let scenario = load_scenario(&scenario_text)?;
    let setup = load_setup(&setup_text)?;

    let functional = bell_value(&scenario, &setup)?;
    let game = bridge_game(&scenario)?;
    let steered = steer_states(&setup)?;
    parts.result(
        "steer_states",
        json!({
            "marginal_deviation": steered.marginal_deviation,
            "average_deviation": steered.average_deviation,
        }),
    );
    let strategy = QuantumStrategy::new(steered.states, setup.bob_measurements().to_vec())?;
    let played = game.performance(&born_distribution(&strategy)?)?;
    let difference = (functional - played).abs();
    parts.result("bell_value", json!(functional));
    parts.result("performance", json!(played));
    parts.result("difference", json!(difference));

    let tolerance = cli.tol.unwrap_or(tol::BRIDGE_EQUALITY);
    parts.tolerance = Some(tolerance);
    let report = check_quantum_obliviousness(&game, &strategy, tolerance)?;
    parts.result(
        "check_quantum_obliviousness",
        json!({ "max_deviation": report.max_deviation }),
    );
    parts.check("bridge_equality", difference <= tolerance);
    parts.check("steered_oblivious", report.pass);

    if enumerate {
        let outcome = pnc_bound(&game, game.num_outcomes(), SearchMode::BranchAndBound)?;
        parts.result("pnc_bound", bound_json(&outcome));
        parts.check(
            "witness_balanced",
            is_balanced(&game, &outcome.witness, tol::BALANCE),
        );
    }

    parts.artifact(&cli.output, "game.json", &save_game(&game))?;
    parts.artifact(&cli.output, "strategy.json", &save_strategy(&strategy))?;
    Ok(parts)
}

fn cmd_eval(cli: &Cli, game_path: &Path, strategy_path: &Path) -> anyhow::Result<Parts> {
    let mut parts = Parts::default();
    let game_text = read_input(game_path, "game")?;
    let strategy_text = read_input(strategy_path, "strategy")?;
    parts.digest("game", &game_text);
    parts.digest("strategy", &strategy_text);
    let game = load_game(&game_text)?;
    let strategy = load_strategy(&strategy_text)?;

    let played = game.performance(&born_distribution(&strategy)?)?;
    parts.result("performance", json!(played));
    let tolerance = cli.tol.unwrap_or(tol::OBLIVIOUSNESS);
    parts.tolerance = Some(tolerance);
    let report = check_quantum_obliviousness(&game, &strategy, tolerance)?;
    parts.result(
        "check_quantum_obliviousness",
        json!({
            "max_deviation": report.max_deviation,
            "max_mixed_distance": report.max_mixed_distance,
        }),
    );
    parts.check("oblivious", report.pass);
    Ok(parts)
}

fn cmd_bound(game_path: &Path, alphabet: Option<usize>, exact: bool) -> anyhow::Result<Parts> {
    let mut parts = Parts::default();
    let game_text = read_input(game_path, "game")?;
    parts.digest("game", &game_text);
    let game = load_game(&game_text)?;

    let alphabet = alphabet.unwrap_or_else(|| {
        if game.partitions().num_partitions() > 0 {
            game.partitions().cells(0).len()
        } else {
            game.alice_inputs()
        }
    });
    let mode = if exact {
        SearchMode::Exact
    } else {
        SearchMode::BranchAndBound
    };
    let outcome = pnc_bound(&game, alphabet, mode)?;
    let played = game.performance(&strategy_distribution(&game, &outcome.witness))?;
    let mut body = bound_json(&outcome);
    body["alphabet"] = json!(alphabet);
    body["mode"] = json!(if exact { "exact" } else { "branch_and_bound" });
    body["witness"] = witness_json(&outcome.witness);
    parts.result("pnc_bound", body);
    parts.check(
        "witness_balanced",
        is_balanced(&game, &outcome.witness, tol::BALANCE),
    );
    parts.check("witness_matches_value", played == outcome.value);
    Ok(parts)
}

fn cmd_seesaw(
    cli: &Cli,
    game_path: &Path,
    dim: usize,
    restarts: Option<usize>,
    eps: Option<f64>,
    max_iters: Option<usize>,
) -> anyhow::Result<Parts> {
    let mut parts = Parts::default();
    let game_text = read_input(game_path, "game")?;
    parts.digest("game", &game_text);
    let game = load_game(&game_text)?;

    let mut cfg = SeesawConfig::new(dim);
    if let Some(r) = restarts {
        cfg.restarts = r;
    }
    if let Some(e) = eps {
        cfg.convergence_eps = e;
    }
    if let Some(i) = max_iters {
        cfg.max_iters = i;
    }
    cfg.rng_seed = cli.seed;
    let outcome = seesaw(&game, &cfg)?;
    parts.result("seesaw", seesaw_json(&outcome, &cfg));

    let tolerance = cli.tol.unwrap_or(tol::OBLIVIOUSNESS_LOOSE);
    parts.tolerance = Some(tolerance);
    let report = check_quantum_obliviousness(&game, &outcome.strategy, tolerance)?;
    parts.check("strategy_oblivious", report.pass);
    parts.artifact(&cli.output, "strategy.json", &save_strategy(&outcome.strategy))?;
    parts.artifact(&cli.output, "trace.csv", &trace_csv(&outcome.trace))?;
    Ok(parts)
}

fn summarize(report: &RunReport, start: Instant) {
    eprintln!("{}", report.command);
    for (key, value) in &report.results {
        match value {
            Value::Number(n) => eprintln!("  {key} = {n}"),
            Value::Object(map) => {
                for (inner, v) in map {
                    if let Value::Number(n) = v {
                        eprintln!("  {key}.{inner} = {n}");
                    }
                }
            }
            Value::Null => eprintln!("  {key} skipped"),
            _ => {}
        }
    }
    for (name, ok) in &report.checks {
        eprintln!("  [{}] {name}", if *ok { " ok " } else { "FAIL" });
    }
    for (name, path) in &report.artifacts {
        eprintln!("  wrote {name} to {path}");
    }
    eprintln!(
        "{} in {:.3?}",
        if report.pass { "PASS" } else { "FAIL" },
        start.elapsed()
    );
}
