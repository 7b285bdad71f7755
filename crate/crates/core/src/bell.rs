//! Bridge from two-party correlation inequalities to oblivious games.
//!
//! A scenario fixes measurement settings `x` for Alice and `y` for Bob, a
//! common outcome alphabet `0..d`, and a functional built from terms that
//! pay `payoff` whenever `a + b = f_value (mod d)` on setting pair `(x, y)`.
//! The bridged game hands Alice the pair `(x0, x)` with `x0` uniform; her
//! message must hide `x` while Bob, given `y`, tries to output
//! `x0 + f_value (mod d)` for each term. Preparing the game states by
//! steering the shared state of the scenario reproduces the functional's
//! value exactly, term by term.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{CompensatedSum, ConditionalDistribution, Game};
use crate::linalg::{partial_trace_first, ComplexMatrix, DensityMatrix, Povm};
use crate::tol;

/// One coefficient of a correlation functional: on settings `(x, y)`,
/// winning condition `a + b = f_value (mod d)` with weight `payoff`, filed
/// under task slot `(i, k)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellTerm {
    pub x: usize,
    pub y: usize,
    pub i: usize,
    pub k: usize,
    pub payoff: f64,
    pub f_value: usize,
}

/// A correlation functional over `m_a x m_b` settings with outcomes mod `d`.
#[derive(Debug, Clone, PartialEq)]
pub struct BellScenario {
    m_a: usize,
    m_b: usize,
    d: usize,
    prior_alice: Vec<f64>,
    prior_bob: Vec<f64>,
    /// Sorted `(i, k)` pairs; each owns one full `(x, y)` grid.
    task_keys: Vec<(usize, usize)>,
    f: Vec<Vec<Vec<usize>>>,
    payoff: Vec<Vec<Vec<f64>>>,
}

fn check_prior(field: &'static str, prior: &[f64], len: usize) -> Result<()> {
    if prior.len() != len {
        return Err(Error::Invariant {
            field,
            detail: format!("has {} entries, expected {len}", prior.len()),
        });
    }
    if let Some(i) = prior.iter().position(|&p| !(p >= 0.0) || !p.is_finite()) {
        return Err(Error::Invariant {
            field,
            detail: format!("entry {i} is {}", prior[i]),
        });
    }
    let sum: f64 = prior.iter().sum();
    if (sum - 1.0).abs() > tol::EXACT_ARITHMETIC {
        return Err(Error::Invariant {
            field,
            detail: format!("sums to {sum}, not 1"),
        });
    }
    Ok(())
}

impl BellScenario {
    pub fn new(
        m_a: usize,
        m_b: usize,
        d: usize,
        prior_alice: Vec<f64>,
        prior_bob: Vec<f64>,
        terms: Vec<BellTerm>,
    ) -> Result<Self> {
        if m_a == 0 || m_b == 0 || d == 0 {
            return Err(Error::Invariant {
                field: "dimensions",
                detail: "m_a, m_b and d must be positive".into(),
            });
        }
        check_prior("prior_alice", &prior_alice, m_a)?;
        check_prior("prior_bob", &prior_bob, m_b)?;
        if terms.is_empty() {
            return Err(Error::Invariant {
                field: "terms",
                detail: "at least one term is required".into(),
            });
        }
        let mut task_keys: Vec<(usize, usize)> = Vec::new();
        for t in &terms {
            if t.x >= m_a || t.y >= m_b {
                return Err(Error::Invariant {
                    field: "terms",
                    detail: format!("term ({}, {}) addresses settings beyond {m_a}x{m_b}", t.x, t.y),
                });
            }
            if t.f_value >= d {
                return Err(Error::Invariant {
                    field: "terms",
                    detail: format!(
                        "term at ({}, {}) task ({}, {}) has f_value {} outside 0..{d}",
                        t.x, t.y, t.i, t.k, t.f_value
                    ),
                });
            }
            if !t.payoff.is_finite() || t.payoff.abs() > 1.0 + tol::EXACT_ARITHMETIC {
                return Err(Error::Invariant {
                    field: "terms",
                    detail: format!(
                        "term at ({}, {}) task ({}, {}) has payoff {} outside [-1, 1]",
                        t.x, t.y, t.i, t.k, t.payoff
                    ),
                });
            }
            if !task_keys.contains(&(t.i, t.k)) {
                task_keys.push((t.i, t.k));
            }
        }
        task_keys.sort_unstable();

        let slots = task_keys.len();
        let mut f = vec![vec![vec![0usize; m_b]; m_a]; slots];
        let mut payoff = vec![vec![vec![0.0f64; m_b]; m_a]; slots];
        let mut seen = vec![vec![vec![false; m_b]; m_a]; slots];
        for t in &terms {
            let s = task_keys.binary_search(&(t.i, t.k)).unwrap();
            if seen[s][t.x][t.y] {
                return Err(Error::Invariant {
                    field: "terms",
                    detail: format!(
                        "task ({}, {}) appears twice at settings ({}, {})",
                        t.i, t.k, t.x, t.y
                    ),
                });
            }
            seen[s][t.x][t.y] = true;
            f[s][t.x][t.y] = t.f_value;
            payoff[s][t.x][t.y] = t.payoff;
        }
        for (s, grid) in seen.iter().enumerate() {
            for (x, row) in grid.iter().enumerate() {
                for (y, &present) in row.iter().enumerate() {
                    if !present {
                        return Err(Error::Invariant {
                            field: "terms",
                            detail: format!(
                                "task ({}, {}) is missing at settings ({x}, {y})",
                                task_keys[s].0, task_keys[s].1
                            ),
                        });
                    }
                }
            }
        }
        // The bridged game needs distinct targets per input pair, which
        // requires distinct f-values across task slots at every (x, y).
        for x in 0..m_a {
            for y in 0..m_b {
                for s in 0..slots {
                    for s2 in (s + 1)..slots {
                        if f[s][x][y] == f[s2][x][y] {
                            return Err(Error::Invariant {
                                field: "terms",
                                detail: format!(
                                    "tasks ({}, {}) and ({}, {}) share f_value {} at ({x}, {y})",
                                    task_keys[s].0,
                                    task_keys[s].1,
                                    task_keys[s2].0,
                                    task_keys[s2].1,
                                    f[s][x][y]
                                ),
                            });
                        }
                    }
                }
            }
        }
        Ok(Self {
            m_a,
            m_b,
            d,
            prior_alice,
            prior_bob,
            task_keys,
            f,
            payoff,
        })
    }

    pub fn alice_settings(&self) -> usize {
        self.m_a
    }

    pub fn bob_settings(&self) -> usize {
        self.m_b
    }

    pub fn outcomes(&self) -> usize {
        self.d
    }

    pub fn prior_alice(&self) -> &[f64] {
        &self.prior_alice
    }

    pub fn prior_bob(&self) -> &[f64] {
        &self.prior_bob
    }

    pub fn task_keys(&self) -> &[(usize, usize)] {
        &self.task_keys
    }

    pub fn f_value(&self, slot: usize, x: usize, y: usize) -> usize {
        self.f[slot][x][y]
    }

    pub fn payoff(&self, slot: usize, x: usize, y: usize) -> f64 {
        self.payoff[slot][x][y]
    }

    fn terms(&self) -> Vec<BellTerm> {
        let mut out = Vec::new();
        for x in 0..self.m_a {
            for y in 0..self.m_b {
                for (s, &(i, k)) in self.task_keys.iter().enumerate() {
                    out.push(BellTerm {
                        x,
                        y,
                        i,
                        k,
                        payoff: self.payoff[s][x][y],
                        f_value: self.f[s][x][y],
                    });
                }
            }
        }
        out
    }
}

/// Expand a scenario into its oblivious game: Alice's inputs are the pairs
/// `(x0, x)` (flattened as `x0 * m_a + x`) with `x0` uniform, the target for
/// task `(i, k)` is `x0 + f_value (mod d)`, and the single partition groups
/// inputs by the setting `x`, which the message must hide.
pub fn bridge_game(scenario: &BellScenario) -> Result<Game> {
    let m_a = scenario.m_a;
    let d = scenario.d;
    let alice_inputs = d * m_a;
    let prior_alice: Vec<f64> = (0..alice_inputs)
        .map(|idx| scenario.prior_alice[idx % m_a] / d as f64)
        .collect();
    let slots = scenario.task_keys.len();
    let mut tasks = vec![vec![vec![0usize; scenario.m_b]; alice_inputs]; slots];
    let mut payoffs = vec![vec![vec![0.0f64; scenario.m_b]; alice_inputs]; slots];
    for s in 0..slots {
        for x0 in 0..d {
            for x in 0..m_a {
                let idx = x0 * m_a + x;
                for y in 0..scenario.m_b {
                    tasks[s][idx][y] = (x0 + scenario.f[s][x][y]) % d;
                    payoffs[s][idx][y] = scenario.payoff[s][x][y];
                }
            }
        }
    }
    let partition: Vec<Vec<usize>> = (0..m_a)
        .map(|x| (0..d).map(|x0| x0 * m_a + x).collect())
        .collect();
    Game::new(
        alice_inputs,
        scenario.m_b,
        d,
        prior_alice,
        scenario.prior_bob.clone(),
        tasks,
        payoffs,
        vec![partition],
    )
}

/// Distribution induced on the bridged game by local deterministic outcome
/// shifts: Alice answers `a[x]`, Bob answers `b[y]`, so the game output is
/// `x0 + a[x] + b[y] (mod d)`.
pub fn group_strategy_distribution(
    scenario: &BellScenario,
    a: &[usize],
    b: &[usize],
) -> Result<ConditionalDistribution> {
    if a.len() != scenario.m_a || b.len() != scenario.m_b {
        return Err(Error::DimensionMismatch(format!(
            "assignment is {}x{}, scenario is {}x{}",
            a.len(),
            b.len(),
            scenario.m_a,
            scenario.m_b
        )));
    }
    let d = scenario.d;
    if a.iter().chain(b.iter()).any(|&v| v >= d) {
        return Err(Error::Invariant {
            field: "assignment",
            detail: format!("outcome shift outside 0..{d}"),
        });
    }
    ConditionalDistribution::deterministic(d * scenario.m_a, scenario.m_b, d, |idx, y| {
        let x0 = idx / scenario.m_a;
        let x = idx % scenario.m_a;
        (x0 + a[x] + b[y]) % d
    })
}

/// Best value of the functional over all local deterministic assignments.
#[derive(Debug, Clone)]
pub struct GroupSweep {
    pub best_value: f64,
    pub best_a: Vec<usize>,
    pub best_b: Vec<usize>,
    pub assignments: u64,
}

const SWEEP_CAP: u128 = 10_000_000;

/// Evaluate the functional directly on one local deterministic assignment.
fn assignment_value(scenario: &BellScenario, a: &[usize], b: &[usize]) -> f64 {
    let mut total = CompensatedSum::default();
    for x in 0..scenario.m_a {
        for y in 0..scenario.m_b {
            let w = scenario.prior_alice[x] * scenario.prior_bob[y];
            if w == 0.0 {
                continue;
            }
            let hit = (a[x] + b[y]) % scenario.d;
            for s in 0..scenario.task_keys.len() {
                if scenario.f[s][x][y] == hit {
                    total.add(w * scenario.payoff[s][x][y]);
                }
            }
        }
    }
    total.value()
}

fn next_assignment(digits: &mut [usize], base: usize) -> bool {
    for slot in digits.iter_mut().rev() {
        *slot += 1;
        if *slot < base {
            return true;
        }
        *slot = 0;
    }
    false
}

/// Exhaust all `d^(m_a + m_b)` local deterministic assignments.
pub fn group_strategy_sweep(scenario: &BellScenario) -> Result<GroupSweep> {
    let d = scenario.d as u128;
    let count = d
        .checked_pow((scenario.m_a + scenario.m_b) as u32)
        .unwrap_or(u128::MAX);
    if count > SWEEP_CAP {
        return Err(Error::SizeCap {
            what: "assignment sweep",
            requested: count.min(usize::MAX as u128) as usize,
            cap: SWEEP_CAP as usize,
        });
    }
    let mut a = vec![0usize; scenario.m_a];
    let mut best_value = f64::NEG_INFINITY;
    let mut best_a = a.clone();
    let mut best_b = vec![0usize; scenario.m_b];
    let mut assignments = 0u64;
    loop {
        let mut b = vec![0usize; scenario.m_b];
        loop {
            assignments += 1;
            let v = assignment_value(scenario, &a, &b);
            if v > best_value + tol::EXACT_ARITHMETIC {
                best_value = v;
                best_a = a.clone();
                best_b = b.clone();
            }
            if !next_assignment(&mut b, scenario.d) {
                break;
            }
        }
        if !next_assignment(&mut a, scenario.d) {
            break;
        }
    }
    Ok(GroupSweep {
        best_value,
        best_a,
        best_b,
        assignments,
    })
}

/// Shared state of a two-party setup: either a dense joint density matrix
/// (Alice's factor first) or the coefficients of a Schmidt-diagonal pure
/// state `sum_k gamma_k |kk>` (normalization handled internally).
#[derive(Debug, Clone, PartialEq)]
pub enum SharedState {
    Dense(DensityMatrix),
    Schmidt(Vec<f64>),
}

/// Measurement settings for both parties plus the shared state they act on.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteQuantumSetup {
    dim_a: usize,
    dim_b: usize,
    state: SharedState,
    alice: Vec<Povm>,
    bob: Vec<Povm>,
}

impl BipartiteQuantumSetup {
    pub fn new(
        dim_a: usize,
        dim_b: usize,
        state: SharedState,
        alice: Vec<Povm>,
        bob: Vec<Povm>,
    ) -> Result<Self> {
        if dim_a == 0 || dim_b == 0 {
            return Err(Error::Invariant {
                field: "state",
                detail: "dimensions must be positive".into(),
            });
        }
        match &state {
            SharedState::Dense(rho) => {
                if rho.dim() != dim_a * dim_b {
                    return Err(Error::DimensionMismatch(format!(
                        "joint state has dimension {}, expected {}",
                        rho.dim(),
                        dim_a * dim_b
                    )));
                }
            }
            SharedState::Schmidt(gamma) => {
                if dim_a != dim_b || gamma.len() != dim_a {
                    return Err(Error::DimensionMismatch(format!(
                        "schmidt form needs dim_a = dim_b = {} coefficients, got {dim_a}x{dim_b}",
                        gamma.len()
                    )));
                }
                if gamma.iter().any(|&g| !(g >= 0.0) || !g.is_finite()) {
                    return Err(Error::Invariant {
                        field: "state",
                        detail: "schmidt coefficients must be finite and nonnegative".into(),
                    });
                }
                if gamma.iter().map(|g| g * g).sum::<f64>() <= 0.0 {
                    return Err(Error::Invariant {
                        field: "state",
                        detail: "schmidt coefficients are all zero".into(),
                    });
                }
            }
        }
        if alice.is_empty() || bob.is_empty() {
            return Err(Error::Invariant {
                field: "measurements",
                detail: "both parties need at least one measurement".into(),
            });
        }
        for (label, povms, dim) in [("alice", &alice, dim_a), ("bob", &bob, dim_b)] {
            if let Some((i, p)) = povms.iter().enumerate().find(|(_, p)| p.dim() != dim) {
                return Err(Error::DimensionMismatch(format!(
                    "{label} measurement {i} acts on dimension {}, expected {dim}",
                    p.dim()
                )));
            }
            let outcomes = povms[0].num_outcomes();
            if let Some((i, p)) = povms
                .iter()
                .enumerate()
                .find(|(_, p)| p.num_outcomes() != outcomes)
            {
                return Err(Error::DimensionMismatch(format!(
                    "{label} measurement {i} has {} outcomes, expected {outcomes}",
                    p.num_outcomes()
                )));
            }
        }
        Ok(Self {
            dim_a,
            dim_b,
            state,
            alice,
            bob,
        })
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn state(&self) -> &SharedState {
        &self.state
    }

    pub fn alice_measurements(&self) -> &[Povm] {
        &self.alice
    }

    pub fn bob_measurements(&self) -> &[Povm] {
        &self.bob
    }
}

/// States steered onto Bob's side, indexed like the bridged game's inputs.
#[derive(Debug, Clone)]
pub struct SteeredStates {
    /// `states[x0 * m_a + x]` is Bob's state when Alice measures setting `x`
    /// and reports the outcome labeled `x0`.
    pub states: Vec<DensityMatrix>,
    pub alice_settings: usize,
    pub alphabet: usize,
    /// Largest deviation of an Alice outcome weight from `1/d`.
    pub marginal_deviation: f64,
    /// Largest entrywise deviation of a per-setting average from Bob's
    /// reduced state.
    pub average_deviation: f64,
}

/// `Tr((A (x) I) rho)` for a dense joint state.
fn steer_dense(joint: &ComplexMatrix, a: &ComplexMatrix, dim_a: usize, dim_b: usize) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(dim_b, dim_b);
    for m in 0..dim_a {
        for mp in 0..dim_a {
            let amp = a.get(m, mp);
            if amp == num_complex::Complex64::ZERO {
                continue;
            }
            for p in 0..dim_b {
                for q in 0..dim_b {
                    let v = out.get(p, q) + amp * joint.get(mp * dim_b + p, m * dim_b + q);
                    out.set(p, q, v);
                }
            }
        }
    }
    out
}

/// Prepare the bridged game's states by steering: the state filed under
/// `(x0, x)` is Bob's conditional state when Alice measures `x` and gets the
/// outcome labeled `-x0 (mod d)`, scaled by `d`. Requires every outcome
/// weight to be `1/d`, which also makes the per-setting averages equal Bob's
/// reduced state.
pub fn steer_states(setup: &BipartiteQuantumSetup) -> Result<SteeredStates> {
    let m_a = setup.alice.len();
    let d = setup.alice[0].num_outcomes();
    let dim_b = setup.dim_b;

    let bob_reduced = match &setup.state {
        SharedState::Dense(rho) => partial_trace_first(rho.matrix(), setup.dim_a, dim_b)?,
        SharedState::Schmidt(gamma) => {
            let norm: f64 = gamma.iter().map(|g| g * g).sum();
            ComplexMatrix::from_real_diag(
                &gamma.iter().map(|g| g * g / norm).collect::<Vec<_>>(),
            )
        }
    };

    let mut raw = Vec::with_capacity(m_a * d);
    let mut marginal_deviation = 0.0f64;
    for x0 in 0..d {
        for x in 0..m_a {
            let a_label = (d - x0 % d) % d;
            let a_op = setup.alice[x].element(a_label);
            let mut sigma = match &setup.state {
                SharedState::Dense(rho) => steer_dense(rho.matrix(), a_op, setup.dim_a, dim_b),
                SharedState::Schmidt(gamma) => {
                    let norm: f64 = gamma.iter().map(|g| g * g).sum();
                    ComplexMatrix::from_fn(dim_b, dim_b, |p, q| {
                        a_op.get(q, p) * (gamma[p] * gamma[q] / norm)
                    })
                }
            };
            let weight = sigma.trace().re;
            marginal_deviation = marginal_deviation.max((weight - 1.0 / d as f64).abs());
            sigma.scale_mut(d as f64);
            raw.push(sigma);
        }
    }
    if marginal_deviation > tol::MARGINAL_UNIFORMITY {
        return Err(Error::NonUniformMarginals {
            deviation: marginal_deviation,
            tolerance: tol::MARGINAL_UNIFORMITY,
        });
    }

    let mut average_deviation = 0.0f64;
    for x in 0..m_a {
        let mut avg = ComplexMatrix::zeros(dim_b, dim_b);
        for x0 in 0..d {
            avg.add_scaled_mut(1.0 / d as f64, &raw[x0 * m_a + x]);
        }
        average_deviation = average_deviation.max(avg.max_abs_diff(&bob_reduced));
    }

    let states = raw
        .into_iter()
        .map(|mut sigma| {
            // Float noise aside, the trace is exactly 1 once the marginals
            // passed the uniformity gate.
            let tr = sigma.trace().re;
            sigma.scale_mut(1.0 / tr);
            DensityMatrix::new(sigma)
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(SteeredStates {
        states,
        alice_settings: m_a,
        alphabet: d,
        marginal_deviation,
        average_deviation,
    })
}

/// `Tr((A (x) B) rho)` without forming the Kronecker product.
fn pair_expectation_dense(
    joint: &ComplexMatrix,
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    dim_a: usize,
    dim_b: usize,
) -> f64 {
    let mut acc = num_complex::Complex64::ZERO;
    for m in 0..dim_a {
        for mp in 0..dim_a {
            let amp = a.get(m, mp);
            if amp == num_complex::Complex64::ZERO {
                continue;
            }
            for p in 0..dim_b {
                for pp in 0..dim_b {
                    acc += amp * b.get(p, pp) * joint.get(mp * dim_b + pp, m * dim_b + p);
                }
            }
        }
    }
    acc.re
}

/// `<psi| A (x) B |psi>` for the Schmidt-diagonal state.
fn pair_expectation_schmidt(gamma: &[f64], a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    let norm: f64 = gamma.iter().map(|g| g * g).sum();
    let d = gamma.len();
    let mut acc = num_complex::Complex64::ZERO;
    for j in 0..d {
        if gamma[j] == 0.0 {
            continue;
        }
        for k in 0..d {
            acc += a.get(j, k) * b.get(j, k) * (gamma[j] * gamma[k]);
        }
    }
    acc.re / norm
}

/// Value of the correlation functional on a quantum setup.
pub fn bell_value(scenario: &BellScenario, setup: &BipartiteQuantumSetup) -> Result<f64> {
    if setup.alice.len() != scenario.m_a || setup.bob.len() != scenario.m_b {
        return Err(Error::DimensionMismatch(format!(
            "setup has {}x{} settings, scenario needs {}x{}",
            setup.alice.len(),
            setup.bob.len(),
            scenario.m_a,
            scenario.m_b
        )));
    }
    let d = scenario.d;
    if setup.alice[0].num_outcomes() != d || setup.bob[0].num_outcomes() != d {
        return Err(Error::DimensionMismatch(format!(
            "setup outcomes are {} (Alice) and {} (Bob), scenario needs {d}",
            setup.alice[0].num_outcomes(),
            setup.bob[0].num_outcomes()
        )));
    }
    let mut total = 0.0;
    for x in 0..scenario.m_a {
        for y in 0..scenario.m_b {
            let w = scenario.prior_alice[x] * scenario.prior_bob[y];
            if w == 0.0 {
                continue;
            }
            // P(a + b = f | x, y) for every f at once.
            let mut corr = vec![0.0f64; d];
            for a_out in 0..d {
                let a_op = setup.alice[x].element(a_out);
                for f in 0..d {
                    let b_out = (f + d - a_out % d) % d;
                    let b_op = setup.bob[y].element(b_out);
                    corr[f] += match &setup.state {
                        SharedState::Dense(rho) => pair_expectation_dense(
                            rho.matrix(),
                            a_op,
                            b_op,
                            setup.dim_a,
                            setup.dim_b,
                        ),
                        SharedState::Schmidt(gamma) => {
                            pair_expectation_schmidt(gamma, a_op, b_op)
                        }
                    };
                }
            }
            for s in 0..scenario.task_keys.len() {
                total += w * scenario.payoff[s][x][y] * corr[scenario.f[s][x][y]];
            }
        }
    }
    Ok(total)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermFile {
    x: usize,
    y: usize,
    i: usize,
    k: usize,
    payoff: f64,
    f_value: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    m_a: usize,
    m_b: usize,
    d: usize,
    prior_alice: Vec<f64>,
    prior_bob: Vec<f64>,
    terms: Vec<TermFile>,
}

pub fn save_scenario(scenario: &BellScenario) -> String {
    let file = ScenarioFile {
        m_a: scenario.m_a,
        m_b: scenario.m_b,
        d: scenario.d,
        prior_alice: scenario.prior_alice.clone(),
        prior_bob: scenario.prior_bob.clone(),
        terms: scenario
            .terms()
            .into_iter()
            .map(|t| TermFile {
                x: t.x,
                y: t.y,
                i: t.i,
                k: t.k,
                payoff: t.payoff,
                f_value: t.f_value,
            })
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&file).expect("scenario serialization");
    text.push('\n');
    text
}

pub fn load_scenario(text: &str) -> Result<BellScenario> {
    let file: ScenarioFile = serde_json::from_str(text)?;
    BellScenario::new(
        file.m_a,
        file.m_b,
        file.d,
        file.prior_alice,
        file.prior_bob,
        file.terms
            .into_iter()
            .map(|t| BellTerm {
                x: t.x,
                y: t.y,
                i: t.i,
                k: t.k,
                payoff: t.payoff,
                f_value: t.f_value,
            })
            .collect(),
    )
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum StateFile {
    Dense(Vec<[f64; 2]>),
    Schmidt(Vec<f64>),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SetupFile {
    dim_a: usize,
    dim_b: usize,
    state: StateFile,
    alice_measurements: Vec<Vec<Vec<[f64; 2]>>>,
    bob_measurements: Vec<Vec<Vec<[f64; 2]>>>,
}

pub fn save_setup(setup: &BipartiteQuantumSetup) -> String {
    let state = match &setup.state {
        SharedState::Dense(rho) => StateFile::Dense(rho.matrix().to_re_im_pairs()),
        SharedState::Schmidt(gamma) => StateFile::Schmidt(gamma.clone()),
    };
    let dump = |povms: &[Povm]| {
        povms
            .iter()
            .map(|p| p.elements().iter().map(|e| e.to_re_im_pairs()).collect())
            .collect()
    };
    let file = SetupFile {
        dim_a: setup.dim_a,
        dim_b: setup.dim_b,
        state,
        alice_measurements: dump(&setup.alice),
        bob_measurements: dump(&setup.bob),
    };
    let mut text = serde_json::to_string_pretty(&file).expect("setup serialization");
    text.push('\n');
    text
}

pub fn load_setup(text: &str) -> Result<BipartiteQuantumSetup> {
    let file: SetupFile = serde_json::from_str(text)?;
    let state = match file.state {
        StateFile::Dense(pairs) => {
            let dim = file.dim_a * file.dim_b;
            SharedState::Dense(DensityMatrix::new(ComplexMatrix::from_re_im_pairs(
                dim, dim, &pairs,
            )?)?)
        }
        StateFile::Schmidt(gamma) => SharedState::Schmidt(gamma),
    };
    let parse = |povms: Vec<Vec<Vec<[f64; 2]>>>, dim: usize| -> Result<Vec<Povm>> {
        povms
            .into_iter()
            .map(|elements| {
                Povm::new(
                    elements
                        .iter()
                        .map(|pairs| ComplexMatrix::from_re_im_pairs(dim, dim, pairs))
                        .collect::<Result<Vec<_>>>()?,
                )
            })
            .collect()
    };
    BipartiteQuantumSetup::new(
        file.dim_a,
        file.dim_b,
        state,
        parse(file.alice_measurements, file.dim_a)?,
        parse(file.bob_measurements, file.dim_b)?,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::{pnc_bound, SearchMode};
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;

    /// Single setting each, outcomes mod 2, one term paying on a + b = 0.
    fn trivial_scenario() -> BellScenario {
        BellScenario::new(
            1,
            1,
            2,
            vec![1.0],
            vec![1.0],
            vec![BellTerm {
                x: 0,
                y: 0,
                i: 0,
                k: 0,
                payoff: 1.0,
                f_value: 0,
            }],
        )
        .unwrap()
    }

    #[test]
    fn trivial_bridge_is_winnable() {
        let g = bridge_game(&trivial_scenario()).unwrap();
        assert_eq!(g.alice_inputs(), 2);
        assert_eq!(g.num_outcomes(), 2);
        // The only partition has a single cell, so nothing is hidden and
        // relaying x0 wins every round.
        let bound = pnc_bound(&g, 2, SearchMode::Exact).unwrap();
        assert_abs_diff_eq!(bound.value, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn trivial_sweep_attains_one() {
        let sweep = group_strategy_sweep(&trivial_scenario()).unwrap();
        assert_abs_diff_eq!(sweep.best_value, 1.0, epsilon = 1e-15);
        assert_eq!(sweep.assignments, 4);
    }

    #[test]
    fn group_distribution_matches_direct_value() {
        let scenario = trivial_scenario();
        let g = bridge_game(&scenario).unwrap();
        for a in 0..2 {
            for b in 0..2 {
                let dist = group_strategy_distribution(&scenario, &[a], &[b]).unwrap();
                let via_game = g.performance(&dist).unwrap();
                let direct = assignment_value(&scenario, &[a], &[b]);
                assert_abs_diff_eq!(via_game, direct, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn scenario_rejects_duplicate_terms() {
        let t = BellTerm {
            x: 0,
            y: 0,
            i: 0,
            k: 0,
            payoff: 1.0,
            f_value: 0,
        };
        let err = BellScenario::new(1, 1, 2, vec![1.0], vec![1.0], vec![t, t]).unwrap_err();
        assert!(err.to_string().contains("twice"));
    }

    #[test]
    fn scenario_rejects_incomplete_grid() {
        let err = BellScenario::new(
            2,
            1,
            2,
            vec![0.5, 0.5],
            vec![1.0],
            vec![BellTerm {
                x: 0,
                y: 0,
                i: 0,
                k: 0,
                payoff: 1.0,
                f_value: 0,
            }],
        )
        .unwrap_err();
        assert!(err.to_string().contains("missing"));
    }

    #[test]
    fn scenario_rejects_f_collision() {
        let terms = vec![
            BellTerm {
                x: 0,
                y: 0,
                i: 0,
                k: 0,
                payoff: 1.0,
                f_value: 0,
            },
            BellTerm {
                x: 0,
                y: 0,
                i: 1,
                k: 0,
                payoff: 0.5,
                f_value: 0,
            },
        ];
        let err = BellScenario::new(1, 1, 2, vec![1.0], vec![1.0], terms).unwrap_err();
        assert!(err.to_string().contains("share f_value"));
    }

    #[test]
    fn steering_a_product_state_gives_identical_states() {
        // gamma = (1, 0): the shared state is |00>, so Bob always holds |0>.
        let basis = Povm::computational_basis(2);
        let setup = BipartiteQuantumSetup::new(
            2,
            2,
            SharedState::Schmidt(vec![1.0, 0.0]),
            vec![flat_alice_povm()],
            vec![basis],
        )
        .unwrap();
        let steered = steer_states(&setup).unwrap();
        let expected = DensityMatrix::from_pure(&[Complex64::ONE, Complex64::ZERO]).unwrap();
        for sigma in &steered.states {
            assert!(sigma.matrix().max_abs_diff(expected.matrix()) < 1e-12);
        }
        assert!(steered.average_deviation < 1e-12);
    }

    /// A two-outcome measurement whose outcome weights are flat on any
    /// Schmidt-diagonal state: projectors onto |+> and |->.
    fn flat_alice_povm() -> Povm {
        let half = 0.5;
        let plus = ComplexMatrix::new(
            2,
            2,
            vec![
                Complex64::new(half, 0.0),
                Complex64::new(half, 0.0),
                Complex64::new(half, 0.0),
                Complex64::new(half, 0.0),
            ],
        )
        .unwrap();
        let minus = ComplexMatrix::new(
            2,
            2,
            vec![
                Complex64::new(half, 0.0),
                Complex64::new(-half, 0.0),
                Complex64::new(-half, 0.0),
                Complex64::new(half, 0.0),
            ],
        )
        .unwrap();
        Povm::new(vec![plus, minus]).unwrap()
    }

    #[test]
    fn steering_rejects_biased_outcome_weights() {
        // Computational-basis steering of a skewed Schmidt state has outcome
        // weights (0.9, 0.1).
        let setup = BipartiteQuantumSetup::new(
            2,
            2,
            SharedState::Schmidt(vec![0.9f64.sqrt(), 0.1f64.sqrt()]),
            vec![Povm::computational_basis(2)],
            vec![Povm::computational_basis(2)],
        )
        .unwrap();
        assert!(matches!(
            steer_states(&setup),
            Err(Error::NonUniformMarginals { .. })
        ));
    }

    #[test]
    fn dense_and_schmidt_forms_steer_identically() {
        let gamma = vec![1.0, 1.0];
        let norm = 2.0f64;
        // |phi+><phi+| written out densely.
        let mut joint = ComplexMatrix::zeros(4, 4);
        for &r in &[0usize, 3] {
            for &c in &[0usize, 3] {
                joint.set(r, c, Complex64::new(1.0 / norm, 0.0));
            }
        }
        let alice = vec![flat_alice_povm()];
        let bob = vec![Povm::computational_basis(2)];
        let dense_setup = BipartiteQuantumSetup::new(
            2,
            2,
            SharedState::Dense(DensityMatrix::new(joint).unwrap()),
            alice.clone(),
            bob.clone(),
        )
        .unwrap();
        let schmidt_setup =
            BipartiteQuantumSetup::new(2, 2, SharedState::Schmidt(gamma), alice, bob).unwrap();
        let a = steer_states(&dense_setup).unwrap();
        let b = steer_states(&schmidt_setup).unwrap();
        for (sa, sb) in a.states.iter().zip(&b.states) {
            assert!(sa.matrix().max_abs_diff(sb.matrix()) < 1e-12);
        }
        let va = bell_value(&trivial_scenario(), &dense_setup).unwrap();
        let vb = bell_value(&trivial_scenario(), &schmidt_setup).unwrap();
        assert_abs_diff_eq!(va, vb, epsilon = 1e-12);
    }

    #[test]
    fn scenario_file_round_trip() {
        let s = trivial_scenario();
        let text = save_scenario(&s);
        assert_eq!(load_scenario(&text).unwrap(), s);
    }

    #[test]
    fn setup_file_round_trip() {
        let setup = BipartiteQuantumSetup::new(
            2,
            2,
            SharedState::Schmidt(vec![1.0, 1.0]),
            vec![flat_alice_povm()],
            vec![Povm::computational_basis(2)],
        )
        .unwrap();
        let text = save_setup(&setup);
        assert_eq!(load_setup(&text).unwrap(), setup);
    }
}
