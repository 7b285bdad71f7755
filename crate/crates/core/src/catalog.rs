//! Ready-made games, strategies and correlation scenarios.
//!
//! Two families are built here. Random access codes: Alice holds a string of
//! `n` digits base `d`, sends one message, and Bob must recover the digit he
//! is asked for while every parity class of two or more digit positions stays
//! hidden. The `d`-outcome chained functional: two settings per party with
//! winning conditions `a + b = f (mod d)`, bridged into an oblivious game
//! whose states prepared from a Schmidt-diagonal shared state average to the
//! maximally mixed preparation in every hidden cell.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::bell::{bridge_game, BellScenario, BellTerm, BipartiteQuantumSetup, SharedState};
use crate::error::{Error, Result};
use crate::game::Game;
use crate::linalg::{ComplexMatrix, DensityMatrix, Povm};
use crate::quantum::QuantumStrategy;

/// Random access code shape: `n` digits in base `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RacSpec {
    n: usize,
    d: usize,
}

const RAC_SPEC_INPUT_LIMIT: u128 = 1 << 30;

impl RacSpec {
    pub fn new(n: usize, d: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Invariant {
                field: "rac",
                detail: format!("need at least 2 digits, got {n}"),
            });
        }
        if d < 2 {
            return Err(Error::Invariant {
                field: "rac",
                detail: format!("need base at least 2, got {d}"),
            });
        }
        let inputs = (d as u128)
            .checked_pow(n as u32)
            .unwrap_or(u128::MAX);
        if inputs > RAC_SPEC_INPUT_LIMIT {
            return Err(Error::Invariant {
                field: "rac",
                detail: format!("{d}^{n} input strings cannot be represented"),
            });
        }
        Ok(Self { n, d })
    }

    pub fn digits(&self) -> usize {
        self.n
    }

    pub fn base(&self) -> usize {
        self.d
    }

    /// Number of input strings, `d^n`.
    pub fn num_inputs(&self) -> usize {
        self.d.pow(self.n as u32)
    }
}

const DEFAULT_RAC_INPUT_CAP: usize = 4096;

/// Digit `r` (most significant first) of the flattened string index.
fn digit(idx: usize, r: usize, n: usize, d: usize) -> usize {
    (idx / d.pow((n - 1 - r) as u32)) % d
}

/// Build the random access game with the default input cap of 4096 strings.
pub fn build_rac(spec: &RacSpec) -> Result<Game> {
    build_rac_capped(spec, DEFAULT_RAC_INPUT_CAP)
}

/// Build the random access game, refusing more than `cap` input strings.
///
/// Inputs are flattened most significant digit first. One partition per
/// subset of two or more digit positions (subsets ordered by their bitmask,
/// bit `r` marking digit `r`); its cells collect the strings whose selected
/// digits sum to each residue mod `d`.
pub fn build_rac_capped(spec: &RacSpec, cap: usize) -> Result<Game> {
    let n = spec.n;
    let d = spec.d;
    let inputs = spec.num_inputs();
    if inputs > cap {
        return Err(Error::SizeCap {
            what: "random access inputs",
            requested: inputs,
            cap,
        });
    }
    let tasks = vec![(0..inputs)
        .map(|idx| (0..n).map(|y| digit(idx, y, n, d)).collect())
        .collect()];
    let payoffs = vec![vec![vec![1.0; n]; inputs]];
    let mut partitions = Vec::new();
    for mask in 0u32..(1 << n) {
        if mask.count_ones() < 2 {
            continue;
        }
        let mut cells = vec![Vec::new(); d];
        for idx in 0..inputs {
            let sum: usize = (0..n)
                .filter(|&r| mask & (1 << r) != 0)
                .map(|r| digit(idx, r, n, d))
                .sum();
            cells[sum % d].push(idx);
        }
        partitions.push(cells);
    }
    Game::new(
        inputs,
        n,
        d,
        vec![1.0 / inputs as f64; inputs],
        vec![1.0 / n as f64; n],
        tasks,
        payoffs,
        partitions,
    )
}

/// Classical oblivious optimum of the random access game, `(n + d - 1)/(n d)`.
pub fn rac_pnc_bound(spec: &RacSpec) -> f64 {
    (spec.n + spec.d - 1) as f64 / (spec.n * spec.d) as f64
}

fn real_matrix(dim: usize, entries: &[f64]) -> ComplexMatrix {
    ComplexMatrix::new(
        dim,
        dim,
        entries.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
    )
    .expect("entry count matches dimension")
}

/// Projector onto the real unit vector `(c, s)`.
fn qubit_projector(c: f64, s: f64) -> ComplexMatrix {
    real_matrix(2, &[c * c, c * s, c * s, s * s])
}

/// The four-state qubit strategy for the 2-digit binary random access game:
/// Bloch vectors `((-1)^x2, 0, (-1)^x1)/sqrt(2)`, read out along the z and x
/// axes. Wins every round with probability `(1 + 1/sqrt(2))/2`.
pub fn rac22_bb84_strategy() -> QuantumStrategy {
    let r = 1.0 / 2f64.sqrt();
    let states = (0..4)
        .map(|idx| {
            let z = if idx & 2 == 0 { r } else { -r };
            let x = if idx & 1 == 0 { r } else { -r };
            DensityMatrix::new(real_matrix(
                2,
                &[(1.0 + z) / 2.0, x / 2.0, x / 2.0, (1.0 - z) / 2.0],
            ))
            .expect("unit Bloch vector")
        })
        .collect();
    let h = 1.0 / 2f64.sqrt();
    let measurements = vec![
        Povm::computational_basis(2),
        Povm::new(vec![qubit_projector(h, h), qubit_projector(h, -h)]).expect("conjugate basis"),
    ];
    QuantumStrategy::new(states, measurements).expect("valid by construction")
}

/// Chained `d`-outcome functional shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CglmpSpec {
    d: usize,
}

impl CglmpSpec {
    pub fn new(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::Invariant {
                field: "cglmp",
                detail: format!("need at least 2 outcomes, got {d}"),
            });
        }
        Ok(Self { d })
    }

    pub fn outcomes(&self) -> usize {
        self.d
    }
}

/// The chained functional with two settings per party: task `(q, k)` pays
/// `(-1)^q (1 - 2k/(d-1))` on the condition `a + b = f (mod d)` with
/// `f = -(-1)^(x+y+q) (k+q) - x y`.
pub fn cglmp_scenario(spec: &CglmpSpec) -> BellScenario {
    let d = spec.d;
    let mut terms = Vec::new();
    for k in 0..d / 2 {
        let weight = 1.0 - 2.0 * k as f64 / (d - 1) as f64;
        for q in 0..2usize {
            let payoff = if q == 0 { weight } else { -weight };
            for x in 0..2usize {
                for y in 0..2usize {
                    let sign: i64 = if (x + y + q) % 2 == 0 { 1 } else { -1 };
                    let f = (-sign * (k + q) as i64 - (x * y) as i64).rem_euclid(d as i64);
                    terms.push(BellTerm {
                        x,
                        y,
                        i: q,
                        k,
                        payoff,
                        f_value: f as usize,
                    });
                }
            }
        }
    }
    BellScenario::new(2, 2, d, vec![0.5, 0.5], vec![0.5, 0.5], terms)
        .expect("valid by construction")
}

/// Oblivious game obtained by bridging the chained functional: `2d` inputs
/// `(x0, x)`, two questions, targets `x0 + f (mod d)`, one partition whose
/// two cells must hide the setting `x`.
pub fn build_cglmp_game(spec: &CglmpSpec) -> Result<Game> {
    bridge_game(&cglmp_scenario(spec))
}

fn check_gamma(d: usize, gamma: &[f64]) -> Result<f64> {
    if gamma.len() != d {
        return Err(Error::DimensionMismatch(format!(
            "{} schmidt coefficients for dimension {d}",
            gamma.len()
        )));
    }
    if gamma.iter().any(|&g| !(g >= 0.0) || !g.is_finite()) {
        return Err(Error::Invariant {
            field: "gamma",
            detail: "schmidt coefficients must be finite and nonnegative".into(),
        });
    }
    let norm: f64 = gamma.iter().map(|g| g * g).sum();
    if norm <= 0.0 {
        return Err(Error::Invariant {
            field: "gamma",
            detail: "schmidt coefficients are all zero".into(),
        });
    }
    Ok(norm)
}

/// `exp(2 pi i num / (4 d))`: a power of the `4d`-th root of unity, so every
/// catalog phase is taken from an exact integer grid.
fn quarter_root(d: usize, num: i64) -> Complex64 {
    let grid = 4 * d as i64;
    let e = num.rem_euclid(grid);
    Complex64::from_polar(1.0, 2.0 * PI * e as f64 / grid as f64)
}

/// Fourier-type projector family: outcome `b` projects onto the vector with
/// components `omega^(m (-b + phase4/4)) / sqrt(d)`.
fn fourier_povm(d: usize, phase4: i64) -> Povm {
    let elements = (0..d)
        .map(|b| {
            ComplexMatrix::from_fn(d, d, |m, mp| {
                let delta = m as i64 - mp as i64;
                quarter_root(d, delta * (phase4 - 4 * b as i64)).scale(1.0 / d as f64)
            })
        })
        .collect();
    Povm::new(elements).expect("fourier family resolves the identity")
}

fn cglmp_states(d: usize, gamma: &[f64]) -> Vec<DensityMatrix> {
    let mut states = Vec::with_capacity(2 * d);
    for x0 in 0..d {
        for x in 0..2usize {
            // Phase x0 + alpha_x - [x = 1] with alpha = (0, 1/2), on the
            // quarter grid.
            let phase4 = 4 * x0 as i64 - 2 * x as i64;
            let v: Vec<Complex64> = (0..d)
                .map(|k| quarter_root(d, -(k as i64) * phase4) * gamma[k])
                .collect();
            states.push(DensityMatrix::from_pure(&v).expect("gamma has positive norm"));
        }
    }
    states
}

fn cglmp_bob_measurements(d: usize) -> Vec<Povm> {
    // beta_y = (-1)^y / 4.
    vec![fourier_povm(d, 1), fourier_povm(d, -1)]
}

/// States and measurements that win the bridged chained game beyond its
/// classical bound. `gamma` holds the Schmidt coefficients of the shared
/// state being emulated; the state filed under input `(x0, x)` is pure with
/// components `gamma_k omega^(-k (x0 + alpha_x - [x=1]))`, `alpha = (0, 1/2)`.
pub fn cglmp_quantum_strategy(spec: &CglmpSpec, gamma: &[f64]) -> Result<QuantumStrategy> {
    let d = spec.d;
    check_gamma(d, gamma)?;
    QuantumStrategy::new(cglmp_states(d, gamma), cglmp_bob_measurements(d))
}

/// Two-party realization of the same strategy: sharing `sum_k gamma_k |kk>`,
/// Alice measures the family with phases `-a + alpha''_x`,
/// `alpha'' = (0, -1/2)`, so that steering reproduces the catalog states.
pub fn cglmp_setup(spec: &CglmpSpec, gamma: &[f64]) -> Result<BipartiteQuantumSetup> {
    let d = spec.d;
    check_gamma(d, gamma)?;
    let alice = vec![fourier_povm(d, 0), fourier_povm(d, -2)];
    BipartiteQuantumSetup::new(
        d,
        d,
        SharedState::Schmidt(gamma.to_vec()),
        alice,
        cglmp_bob_measurements(d),
    )
}

/// Game value of the catalog strategy in closed form: all four setting pairs
/// contribute equally, leaving
/// `sum_k c_k (|z(k + 1/4)|^2 - |z(k + 3/4)|^2) / (N d)` with
/// `z(t) = sum_j gamma_j exp(2 pi i j t / d)` and `c_k = 1 - 2k/(d-1)`.
pub fn cglmp_value_formula(spec: &CglmpSpec, gamma: &[f64]) -> Result<f64> {
    let d = spec.d;
    let norm = check_gamma(d, gamma)?;
    let z_sq = |t: f64| -> f64 {
        let mut z = Complex64::ZERO;
        for (j, &g) in gamma.iter().enumerate() {
            if g != 0.0 {
                z += Complex64::from_polar(g, 2.0 * PI * j as f64 * t / d as f64);
            }
        }
        z.norm_sqr()
    };
    let mut acc = 0.0;
    for k in 0..d / 2 {
        let c = 1.0 - 2.0 * k as f64 / (d - 1) as f64;
        acc += c * (z_sq(k as f64 + 0.25) - z_sq(k as f64 + 0.75));
    }
    Ok(acc / (norm * d as f64))
}

/// Closed form of the game value for flat Schmidt coefficients, where every
/// preparation cell averages to the maximally mixed state:
/// `sum_k c_k (csc^2(pi (k + 1/4)/d) - csc^2(pi (k + 3/4)/d)) / (2 d^2)`.
pub fn cglmp_mixed_value(spec: &CglmpSpec) -> f64 {
    let d = spec.d;
    let csc_sq = |t: f64| {
        let s = (PI * t / d as f64).sin();
        1.0 / (s * s)
    };
    let mut acc = 0.0;
    for k in 0..d / 2 {
        let c = 1.0 - 2.0 * k as f64 / (d - 1) as f64;
        acc += c * (csc_sq(k as f64 + 0.25) - csc_sq(k as f64 + 0.75));
    }
    acc / (2.0 * (d * d) as f64)
}

/// The two-setting binary functional `P(a + b = x y)` with uniform settings.
pub fn chsh_scenario() -> BellScenario {
    let mut terms = Vec::new();
    for x in 0..2usize {
        for y in 0..2usize {
            terms.push(BellTerm {
                x,
                y,
                i: 0,
                k: 0,
                payoff: 1.0,
                f_value: x * y,
            });
        }
    }
    BellScenario::new(2, 2, 2, vec![0.5, 0.5], vec![0.5, 0.5], terms)
        .expect("valid by construction")
}

/// The optimal qubit setup for `chsh_scenario`: a maximally entangled pair,
/// Alice reading the z and x axes, Bob the two diagonals. Reaches the value
/// `(1 + 1/sqrt(2))/2` with outcome weights flat at `1/2`.
pub fn chsh_optimal_setup() -> BipartiteQuantumSetup {
    let h = 1.0 / 2f64.sqrt();
    let (c8, s8) = ((PI / 8.0).cos(), (PI / 8.0).sin());
    let alice = vec![
        Povm::computational_basis(2),
        Povm::new(vec![qubit_projector(h, h), qubit_projector(h, -h)]).expect("conjugate basis"),
    ];
    let bob = vec![
        Povm::new(vec![qubit_projector(c8, s8), qubit_projector(-s8, c8)])
            .expect("rotated basis"),
        Povm::new(vec![qubit_projector(c8, -s8), qubit_projector(s8, c8)])
            .expect("rotated basis"),
    ];
    BipartiteQuantumSetup::new(2, 2, SharedState::Schmidt(vec![1.0, 1.0]), alice, bob)
        .expect("valid by construction")
}
