//! Alternating maximization of game performance over quantum strategies,
//! keeping the transmitted states oblivious.
//!
//! Each half-step is a linear objective over a convex set (states with the
//! cell-average constraint, or one POVM per Bob input). Both are handled the
//! same way: a line search along the fixed gradient, with every candidate
//! repaired by alternating projections onto the constraint sets. Candidates
//! are only accepted when they improve, so the objective trace never
//! decreases and any reported value is the performance of a strategy that
//! passed full validation.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::game::Game;
use crate::linalg::{clip_psd_in_place, mul_trace, ComplexMatrix, DensityMatrix, Povm};
use crate::quantum::{born_distribution, check_quantum_obliviousness, QuantumStrategy};
use crate::tol;

/// Knobs for one projected-ascent half-step.
#[derive(Debug, Clone, Copy)]
pub struct AscentParams {
    /// Line-search evaluations per half-step.
    pub iters: usize,
    /// First step size, in units of the largest gradient entry.
    pub step_init: f64,
    /// Constraint residual at which a repaired point counts as feasible.
    pub feas_tol: f64,
    /// Projection rounds before a repair attempt is abandoned.
    pub max_projection_rounds: usize,
}

impl Default for AscentParams {
    fn default() -> Self {
        Self {
            iters: 30,
            step_init: 0.5,
            feas_tol: 1e-11,
            max_projection_rounds: 500,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SeesawConfig {
    /// Hilbert dimension of the states being searched.
    pub dim: usize,
    pub restarts: usize,
    /// Outer alternation sweeps per restart.
    pub max_iters: usize,
    /// Stop a restart once one sweep improves by less than this.
    pub convergence_eps: f64,
    pub ascent: AscentParams,
    pub rng_seed: u64,
    /// Warm start for restart 0; the remaining restarts stay random.
    pub initial_strategy: Option<QuantumStrategy>,
}

impl SeesawConfig {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            restarts: 50,
            max_iters: 2000,
            convergence_eps: 1e-9,
            ascent: AscentParams::default(),
            rng_seed: 0,
            initial_strategy: None,
        }
    }
}

/// Objective value after one outer sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracePoint {
    pub sweep: usize,
    pub value: f64,
}

#[derive(Debug, Clone)]
pub struct RestartFailure {
    pub restart: usize,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct SeesawOutcome {
    /// Performance of `strategy`, recomputed after full validation.
    pub value: f64,
    pub strategy: QuantumStrategy,
    /// Objective trace of the winning restart.
    pub trace: Vec<TracePoint>,
    /// None when every restart failed and the flat fallback was used.
    pub best_restart: Option<usize>,
    /// Validated value per restart, None where the restart failed.
    pub restart_values: Vec<Option<f64>>,
    pub failures: Vec<RestartFailure>,
}

/// Orthogonal projector onto the subspace of state stacks whose cell
/// averages agree within every partition. The constraint acts identically on
/// each matrix entry, so one real `n x n` projector serves all of them.
struct ObliviousProjector {
    n: usize,
    nullspace: Option<Vec<f64>>,
}

impl ObliviousProjector {
    fn build(game: &Game) -> Self {
        let n = game.alice_inputs();
        let parts = game.partitions();
        let mut rows: Vec<Vec<f64>> = Vec::new();
        for j in 0..parts.num_partitions() {
            let cells = parts.cells(j);
            for r in 1..cells.len() {
                let mut row = vec![0.0; n];
                for &x in &cells[r] {
                    row[x] += game.prior_alice()[x] / parts.cell_weight(j, r);
                }
                for &x in &cells[0] {
                    row[x] -= game.prior_alice()[x] / parts.cell_weight(j, 0);
                }
                rows.push(row);
            }
        }
        if rows.is_empty() {
            return Self { n, nullspace: None };
        }
        let c = DMatrix::from_fn(rows.len(), n, |i, j| rows[i][j]);
        let svd = c.svd(false, true);
        let v_t = svd.v_t.expect("requested by svd call");
        let cutoff = svd.singular_values.iter().fold(0.0f64, |a, &b| a.max(b)) * 1e-12;
        let mut nullspace = vec![0.0f64; n * n];
        for i in 0..n {
            nullspace[i * n + i] = 1.0;
        }
        for (idx, &s) in svd.singular_values.iter().enumerate() {
            if s > cutoff {
                for a in 0..n {
                    for b in 0..n {
                        nullspace[a * n + b] -= v_t[(idx, a)] * v_t[(idx, b)];
                    }
                }
            }
        }
        Self {
            n,
            nullspace: Some(nullspace),
        }
    }

    fn apply(&self, states: &mut [ComplexMatrix]) {
        let Some(nullspace) = &self.nullspace else {
            return;
        };
        let dim = states[0].rows();
        let mut column = vec![Complex64::ZERO; self.n];
        for r in 0..dim {
            for c in 0..dim {
                for (x, slot) in column.iter_mut().enumerate() {
                    *slot = states[x].get(r, c);
                }
                for (x, state) in states.iter_mut().enumerate() {
                    let row = &nullspace[x * self.n..(x + 1) * self.n];
                    let mut acc = Complex64::ZERO;
                    for (w, v) in row.iter().zip(&column) {
                        acc += v * w;
                    }
                    state.set(r, c, acc);
                }
            }
        }
    }
}

/// Largest entrywise gap between a cell average and the prior average.
fn obliviousness_deviation(game: &Game, states: &[ComplexMatrix]) -> f64 {
    let dim = states[0].rows();
    let mut global = ComplexMatrix::zeros(dim, dim);
    for (x, rho) in states.iter().enumerate() {
        global.add_scaled_mut(game.prior_alice()[x], rho);
    }
    let parts = game.partitions();
    let mut dev = 0.0f64;
    for j in 0..parts.num_partitions() {
        for (r, cell) in parts.cells(j).iter().enumerate() {
            let q = parts.cell_weight(j, r);
            let mut avg = ComplexMatrix::zeros(dim, dim);
            for &x in cell {
                avg.add_scaled_mut(game.prior_alice()[x] / q, &states[x]);
            }
            dev = dev.max(avg.max_abs_diff(&global));
        }
    }
    dev
}

fn add_identity(m: &mut ComplexMatrix, c: f64) {
    let dim = m.rows();
    for i in 0..dim {
        let v = m.get(i, i) + Complex64::new(c, 0.0);
        m.set(i, i, v);
    }
}

fn projection_failed(history: Vec<f64>, target: f64, rounds: usize) -> Error {
    let residual = history.last().copied().unwrap_or(f64::INFINITY);
    let tail = history.len().saturating_sub(16);
    Error::ProjectionFailed {
        residual,
        target,
        rounds,
        trace: history[tail..].to_vec(),
    }
}

/// Repair a state stack: oblivious subspace, unit trace, PSD cone.
fn project_states(
    game: &Game,
    proj: &ObliviousProjector,
    states: &mut [ComplexMatrix],
    params: &AscentParams,
) -> Result<()> {
    let dim = states[0].rows();
    let mut history = Vec::new();
    for _ in 0..params.max_projection_rounds {
        proj.apply(states);
        let mut violation = 0.0f64;
        for rho in states.iter_mut() {
            add_identity(rho, (1.0 - rho.trace().re) / dim as f64);
            violation = violation.max(clip_psd_in_place(rho));
            add_identity(rho, (1.0 - rho.trace().re) / dim as f64);
        }
        let residual = violation.max(obliviousness_deviation(game, states));
        history.push(residual);
        if residual <= params.feas_tol {
            return Ok(());
        }
    }
    Err(projection_failed(
        history,
        params.feas_tol,
        params.max_projection_rounds,
    ))
}

/// Repair one POVM: PSD elements that resolve the identity. Each round ends
/// on the cone, so the residual is how far the clipped family is from
/// resolving the identity.
fn project_povm(elements: &mut [ComplexMatrix], params: &AscentParams) -> Result<()> {
    let dim = elements[0].rows();
    let nb = elements.len();
    let excess = |elements: &[ComplexMatrix]| {
        let mut sum = ComplexMatrix::zeros(dim, dim);
        for e in elements.iter() {
            sum.add_scaled_mut(1.0, e);
        }
        add_identity(&mut sum, -1.0);
        sum
    };
    let mut history = Vec::new();
    for _ in 0..params.max_projection_rounds {
        let gap = excess(elements);
        for e in elements.iter_mut() {
            e.add_scaled_mut(-1.0 / nb as f64, &gap);
            clip_psd_in_place(e);
        }
        let residual = excess(elements).max_abs_entry();
        history.push(residual);
        if residual <= params.feas_tol {
            return Ok(());
        }
    }
    Err(projection_failed(
        history,
        params.feas_tol,
        params.max_projection_rounds,
    ))
}

/// Score operator per state: `F_x = sum_y p(y) sum_b score(x,y,b) B^y_b`.
fn state_score_ops(game: &Game, povms: &[Vec<ComplexMatrix>]) -> Vec<ComplexMatrix> {
    let dim = povms[0][0].rows();
    (0..game.alice_inputs())
        .map(|x| {
            let mut f = ComplexMatrix::zeros(dim, dim);
            for (y, povm) in povms.iter().enumerate() {
                let py = game.prior_bob()[y];
                for (b, element) in povm.iter().enumerate() {
                    let s = game.score(x, y, b);
                    if s != 0.0 {
                        f.add_scaled_mut(py * s, element);
                    }
                }
            }
            f
        })
        .collect()
}

/// Score operator per outcome of Bob's input `y`:
/// `G_b = p(y) sum_x p(x) score(x,y,b) rho_x`.
fn measurement_score_ops(game: &Game, states: &[ComplexMatrix], y: usize) -> Vec<ComplexMatrix> {
    let dim = states[0].rows();
    (0..game.num_outcomes())
        .map(|b| {
            let mut g = ComplexMatrix::zeros(dim, dim);
            for (x, rho) in states.iter().enumerate() {
                let s = game.score(x, y, b);
                if s != 0.0 {
                    g.add_scaled_mut(game.prior_bob()[y] * game.prior_alice()[x] * s, rho);
                }
            }
            g
        })
        .collect()
}

fn states_objective(game: &Game, states: &[ComplexMatrix], f_ops: &[ComplexMatrix]) -> f64 {
    states
        .iter()
        .zip(f_ops)
        .enumerate()
        .map(|(x, (rho, f))| game.prior_alice()[x] * mul_trace(rho, f).re)
        .sum()
}

fn objective(game: &Game, states: &[ComplexMatrix], povms: &[Vec<ComplexMatrix>]) -> f64 {
    states_objective(game, states, &state_score_ops(game, povms))
}

const STEP_GROW: f64 = 1.8;
const STEP_SHRINK: f64 = 0.35;
const STEP_FLOOR: f64 = 1e-8;

/// Line search for the states along their fixed score operators. The stack
/// is first repaired, then candidates are accepted only on improvement, so
/// the result is feasible and scores at least as well as the repaired input.
fn half_step_states(
    game: &Game,
    proj: &ObliviousProjector,
    states: &mut Vec<ComplexMatrix>,
    povms: &[Vec<ComplexMatrix>],
    params: &AscentParams,
) -> Result<f64> {
    let f_ops = state_score_ops(game, povms);
    project_states(game, proj, states, params)?;
    let mut best = states_objective(game, states, &f_ops);
    let g_norm = f_ops
        .iter()
        .map(|f| f.max_abs_entry())
        .fold(0.0f64, f64::max);
    if g_norm <= 0.0 {
        return Ok(best);
    }
    let mut step = params.step_init;
    for _ in 0..params.iters {
        let mut candidate = states.clone();
        for (c, f) in candidate.iter_mut().zip(&f_ops) {
            c.add_scaled_mut(step / g_norm, f);
        }
        let feasible = project_states(game, proj, &mut candidate, params).is_ok();
        let improved = feasible && {
            let v = states_objective(game, &candidate, &f_ops);
            if v > best {
                best = v;
                *states = candidate;
                true
            } else {
                false
            }
        };
        if improved {
            step *= STEP_GROW;
        } else {
            step *= STEP_SHRINK;
            if step < STEP_FLOOR {
                break;
            }
        }
    }
    Ok(best)
}

/// Same line search for one POVM; returns `sum_b Tr(G_b B_b)`.
fn ascend_povm(
    g_ops: &[ComplexMatrix],
    elements: &mut Vec<ComplexMatrix>,
    params: &AscentParams,
) -> Result<f64> {
    let value = |povm: &[ComplexMatrix]| -> f64 {
        povm.iter()
            .zip(g_ops)
            .map(|(e, g)| mul_trace(e, g).re)
            .sum()
    };
    project_povm(elements, params)?;
    let mut best = value(elements);
    let g_norm = g_ops
        .iter()
        .map(|g| g.max_abs_entry())
        .fold(0.0f64, f64::max);
    if g_norm <= 0.0 {
        return Ok(best);
    }
    let mut step = params.step_init;
    for _ in 0..params.iters {
        let mut candidate = elements.clone();
        for (c, g) in candidate.iter_mut().zip(g_ops) {
            c.add_scaled_mut(step / g_norm, g);
        }
        let feasible = project_povm(&mut candidate, params).is_ok();
        let improved = feasible && {
            let v = value(&candidate);
            if v > best {
                best = v;
                *elements = candidate;
                true
            } else {
                false
            }
        };
        if improved {
            step *= STEP_GROW;
        } else {
            step *= STEP_SHRINK;
            if step < STEP_FLOOR {
                break;
            }
        }
    }
    Ok(best)
}

/// Optimize every POVM for fixed states; returns the full objective.
fn half_step_measurements(
    game: &Game,
    states: &[ComplexMatrix],
    povms: &mut [Vec<ComplexMatrix>],
    params: &AscentParams,
) -> Result<f64> {
    let mut total = 0.0;
    for (y, povm) in povms.iter_mut().enumerate() {
        let g_ops = measurement_score_ops(game, states, y);
        total += ascend_povm(&g_ops, povm, params)?;
    }
    Ok(total)
}

fn check_shape_against_game(game: &Game, states: usize, measurements: usize, outcomes: usize) -> Result<()> {
    if states != game.alice_inputs() {
        return Err(Error::DimensionMismatch(format!(
            "{states} states for {} Alice inputs",
            game.alice_inputs()
        )));
    }
    if measurements != game.bob_inputs() {
        return Err(Error::DimensionMismatch(format!(
            "{measurements} measurements for {} Bob inputs",
            game.bob_inputs()
        )));
    }
    if outcomes != game.num_outcomes() {
        return Err(Error::DimensionMismatch(format!(
            "measurements have {outcomes} outcomes, game has {}",
            game.num_outcomes()
        )));
    }
    Ok(())
}

/// Improve the states for fixed measurements. The result satisfies the
/// obliviousness constraint and scores at least as well as the input.
pub fn optimize_states(
    game: &Game,
    states: &[DensityMatrix],
    measurements: &[Povm],
    params: &AscentParams,
) -> Result<Vec<DensityMatrix>> {
    check_shape_against_game(
        game,
        states.len(),
        measurements.len(),
        measurements.first().map_or(0, |p| p.num_outcomes()),
    )?;
    let mut raw: Vec<ComplexMatrix> = states.iter().map(|d| d.matrix().clone()).collect();
    let povms: Vec<Vec<ComplexMatrix>> = measurements
        .iter()
        .map(|p| p.elements().to_vec())
        .collect();
    let proj = ObliviousProjector::build(game);
    half_step_states(game, &proj, &mut raw, &povms, params)?;
    raw.into_iter().map(DensityMatrix::new).collect()
}

/// Improve every POVM for fixed states, one Bob input at a time.
pub fn optimize_measurements(
    game: &Game,
    states: &[DensityMatrix],
    measurements: &[Povm],
    params: &AscentParams,
) -> Result<Vec<Povm>> {
    check_shape_against_game(
        game,
        states.len(),
        measurements.len(),
        measurements.first().map_or(0, |p| p.num_outcomes()),
    )?;
    let raw: Vec<ComplexMatrix> = states.iter().map(|d| d.matrix().clone()).collect();
    let mut povms: Vec<Vec<ComplexMatrix>> = measurements
        .iter()
        .map(|p| p.elements().to_vec())
        .collect();
    half_step_measurements(game, &raw, &mut povms, params)?;
    povms.into_iter().map(Povm::new).collect()
}

fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    let u: f64 = rng.random();
    let v: f64 = rng.random();
    (-2.0 * (1.0 - u).ln()).sqrt() * (2.0 * PI * v).cos()
}

fn random_density(dim: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(dim, dim, |_, _| {
        Complex64::new(gaussian(rng), gaussian(rng))
    });
    let mut w = &g * &g.dagger();
    let tr = w.trace().re;
    w.scale_mut(1.0 / tr);
    w
}

fn random_unitary_columns(dim: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<Complex64>> {
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut v: Vec<Complex64> = (0..dim)
            .map(|_| Complex64::new(gaussian(rng), gaussian(rng)))
            .collect();
        for _ in 0..2 {
            for c in &cols {
                let ip: Complex64 = c.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vb, cb) in v.iter_mut().zip(c) {
                    *vb -= ip * cb;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-8 {
            continue;
        }
        for z in v.iter_mut() {
            *z /= norm;
        }
        cols.push(v);
    }
    cols
}

/// Round-robin rank-1 grouping of a random orthonormal basis.
fn random_povm(dim: usize, nb: usize, rng: &mut ChaCha8Rng) -> Vec<ComplexMatrix> {
    let cols = random_unitary_columns(dim, rng);
    let mut elements = vec![ComplexMatrix::zeros(dim, dim); nb];
    for (i, col) in cols.iter().enumerate() {
        let target = &mut elements[i % nb];
        for r in 0..dim {
            for c in 0..dim {
                let v = target.get(r, c) + col[r] * col[c].conj();
                target.set(r, c, v);
            }
        }
    }
    elements
}

/// Identical flat states with basis readouts: feasible in any game, used
/// when every restart fails validation.
fn fallback_strategy(game: &Game, dim: usize) -> Result<QuantumStrategy> {
    let states = vec![DensityMatrix::maximally_mixed(dim); game.alice_inputs()];
    let nb = game.num_outcomes();
    let povm = {
        let mut elements = vec![ComplexMatrix::zeros(dim, dim); nb];
        for i in 0..dim {
            let e = &mut elements[i % nb];
            let v = e.get(i, i) + Complex64::ONE;
            e.set(i, i, v);
        }
        Povm::new(elements)?
    };
    QuantumStrategy::new(states, vec![povm; game.bob_inputs()])
}

struct RestartRun {
    states: Vec<ComplexMatrix>,
    povms: Vec<Vec<ComplexMatrix>>,
    trace: Vec<TracePoint>,
}

fn run_restart(
    game: &Game,
    cfg: &SeesawConfig,
    proj: &ObliviousProjector,
    restart: usize,
) -> Result<RestartRun> {
    let mut rng = ChaCha8Rng::seed_from_u64(
        cfg.rng_seed ^ (restart as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15),
    );
    let (mut states, mut povms) = match (&cfg.initial_strategy, restart) {
        (Some(start), 0) => (
            start.states().iter().map(|d| d.matrix().clone()).collect(),
            start
                .measurements()
                .iter()
                .map(|p| p.elements().to_vec())
                .collect::<Vec<_>>(),
        ),
        _ => {
            let states: Vec<ComplexMatrix> = (0..game.alice_inputs())
                .map(|_| random_density(cfg.dim, &mut rng))
                .collect();
            let povms: Vec<Vec<ComplexMatrix>> = (0..game.bob_inputs())
                .map(|_| random_povm(cfg.dim, game.num_outcomes(), &mut rng))
                .collect();
            (states, povms)
        }
    };
    project_states(game, proj, &mut states, &cfg.ascent)?;
    let mut value = objective(game, &states, &povms);
    let mut trace = vec![TracePoint { sweep: 0, value }];
    for sweep in 1..=cfg.max_iters {
        half_step_states(game, proj, &mut states, &povms, &cfg.ascent)?;
        let v = half_step_measurements(game, &states, &mut povms, &cfg.ascent)?;
        trace.push(TracePoint { sweep, value: v });
        let improvement = v - value;
        value = v;
        if improvement < cfg.convergence_eps {
            break;
        }
    }
    Ok(RestartRun {
        states,
        povms,
        trace,
    })
}

/// Validate a finished restart and price it by its actual performance.
fn certify(game: &Game, run: &RestartRun) -> Result<(f64, QuantumStrategy)> {
    let states = run
        .states
        .iter()
        .map(|m| DensityMatrix::new(m.clone()))
        .collect::<Result<Vec<_>>>()?;
    let povms = run
        .povms
        .iter()
        .map(|e| Povm::new(e.clone()))
        .collect::<Result<Vec<_>>>()?;
    let strategy = QuantumStrategy::new(states, povms)?;
    let report = check_quantum_obliviousness(game, &strategy, tol::OBLIVIOUSNESS_LOOSE)?;
    if !report.pass {
        return Err(Error::Invariant {
            field: "obliviousness",
            detail: format!(
                "deviation {} exceeds {}",
                report.max_deviation, report.tolerance
            ),
        });
    }
    let value = game.performance(&born_distribution(&strategy)?)?;
    Ok((value, strategy))
}

const POLISH_SWEEPS: usize = 40;

/// Extra sweeps on the winning restart with a finer line search.
fn polish(
    game: &Game,
    cfg: &SeesawConfig,
    proj: &ObliviousProjector,
    run: &RestartRun,
) -> Result<RestartRun> {
    let params = AscentParams {
        iters: cfg.ascent.iters * 4,
        ..cfg.ascent
    };
    let mut states = run.states.clone();
    let mut povms = run.povms.clone();
    let mut trace = run.trace.clone();
    let mut value = objective(game, &states, &povms);
    let base = trace.last().map_or(0, |t| t.sweep);
    for sweep in 1..=POLISH_SWEEPS {
        half_step_states(game, proj, &mut states, &povms, &params)?;
        let v = half_step_measurements(game, &states, &mut povms, &params)?;
        trace.push(TracePoint {
            sweep: base + sweep,
            value: v,
        });
        let improvement = v - value;
        value = v;
        if improvement < cfg.convergence_eps {
            break;
        }
    }
    Ok(RestartRun {
        states,
        povms,
        trace,
    })
}

fn validate_config(game: &Game, cfg: &SeesawConfig) -> Result<()> {
    if cfg.dim == 0 {
        return Err(Error::Config("dimension must be positive".into()));
    }
    if cfg.restarts == 0 {
        return Err(Error::Config("at least one restart is required".into()));
    }
    if !(cfg.convergence_eps > 0.0) {
        return Err(Error::Config(format!(
            "convergence threshold must be positive, got {}",
            cfg.convergence_eps
        )));
    }
    if cfg.ascent.iters == 0 || !(cfg.ascent.step_init > 0.0) || !(cfg.ascent.feas_tol > 0.0) {
        return Err(Error::Config(
            "ascent needs positive iters, step and feasibility tolerance".into(),
        ));
    }
    if let Some(start) = &cfg.initial_strategy {
        if start.dim() != cfg.dim {
            return Err(Error::Config(format!(
                "warm start has dimension {}, config says {}",
                start.dim(),
                cfg.dim
            )));
        }
        check_shape_against_game(
            game,
            start.states().len(),
            start.measurements().len(),
            start.num_outcomes(),
        )?;
    }
    Ok(())
}

/// Alternate the two half-steps from `restarts` starting points and return
/// the best validated strategy. Restart failures are collected, not fatal;
/// ties within `convergence_eps` keep the earliest restart. The winning
/// restart gets a short polishing run before the final validation.
pub fn seesaw(game: &Game, cfg: &SeesawConfig) -> Result<SeesawOutcome> {
    validate_config(game, cfg)?;
    let proj = ObliviousProjector::build(game);
    let runs: Vec<std::result::Result<RestartRun, String>> = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| run_restart(game, cfg, &proj, r).map_err(|e| e.to_string()))
        .collect();

    let mut failures = Vec::new();
    let mut restart_values = Vec::with_capacity(cfg.restarts);
    let mut best: Option<(usize, f64, RestartRun)> = None;
    for (r, outcome) in runs.into_iter().enumerate() {
        match outcome.and_then(|run| match certify(game, &run) {
            Ok((value, _)) => Ok((value, run)),
            Err(e) => Err(e.to_string()),
        }) {
            Ok((value, run)) => {
                restart_values.push(Some(value));
                let replace = match &best {
                    None => true,
                    Some((_, incumbent, _)) => value > incumbent + cfg.convergence_eps,
                };
                if replace {
                    best = Some((r, value, run));
                }
            }
            Err(detail) => {
                restart_values.push(None);
                failures.push(RestartFailure { restart: r, detail });
            }
        }
    }

    match best {
        Some((r, value, run)) => {
            let (value, strategy, trace) = match polish(game, cfg, &proj, &run) {
                Ok(polished) => match certify(game, &polished) {
                    Ok((pv, ps)) if pv >= value => (pv, ps, polished.trace),
                    _ => {
                        let (v, s) = certify(game, &run).expect("already certified");
                        (v, s, run.trace)
                    }
                },
                Err(e) => {
                    failures.push(RestartFailure {
                        restart: r,
                        detail: format!("polish: {e}"),
                    });
                    let (v, s) = certify(game, &run).expect("already certified");
                    (v, s, run.trace)
                }
            };
            restart_values[r] = Some(value);
            Ok(SeesawOutcome {
                value,
                strategy,
                trace,
                best_restart: Some(r),
                restart_values,
                failures,
            })
        }
        None => {
            let strategy = fallback_strategy(game, cfg.dim)?;
            let value = game.performance(&born_distribution(&strategy)?)?;
            Ok(SeesawOutcome {
                value,
                strategy,
                trace: Vec::new(),
                best_restart: None,
                restart_values,
                failures,
            })
        }
    }
}
