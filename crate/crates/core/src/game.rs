//! Game model: inputs, priors, task tables, payoffs, and the input
//! partitions whose cells the message must not reveal.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tol;

/// Neumaier compensated accumulator. Scores are sums of many near-equal
/// prior products; plain left-to-right addition drifts by an ulp, which
/// breaks the exact-value contracts on rational games.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct CompensatedSum {
    total: f64,
    comp: f64,
}

impl CompensatedSum {
    pub(crate) fn add(&mut self, term: f64) {
        let t = self.total + term;
        self.comp += if self.total.abs() >= term.abs() {
            (self.total - t) + term
        } else {
            (term - t) + self.total
        };
        self.total = t;
    }

    pub(crate) fn value(self) -> f64 {
        self.total + self.comp
    }
}

/// One or more partitions of Alice's input set. Within each partition the
/// cells are disjoint, cover every input, and carry positive prior weight.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionFamily {
    partitions: Vec<Vec<Vec<usize>>>,
    cell_weights: Vec<Vec<f64>>,
}

impl PartitionFamily {
    pub fn new(partitions: Vec<Vec<Vec<usize>>>, prior_alice: &[f64]) -> Result<Self> {
        let n = prior_alice.len();
        let mut sorted = partitions;
        let mut cell_weights = Vec::with_capacity(sorted.len());
        for (j, partition) in sorted.iter_mut().enumerate() {
            if partition.is_empty() {
                return Err(Error::Invariant {
                    field: "partitions",
                    detail: format!("partition {j} has no cells"),
                });
            }
            let mut owner: Vec<Option<usize>> = vec![None; n];
            for (r, cell) in partition.iter_mut().enumerate() {
                if cell.is_empty() {
                    return Err(Error::Invariant {
                        field: "partitions",
                        detail: format!("partition {j} cell {r} is empty"),
                    });
                }
                cell.sort_unstable();
                for &x in cell.iter() {
                    if x >= n {
                        return Err(Error::Invariant {
                            field: "partitions",
                            detail: format!("partition {j} cell {r} names input {x}, beyond {n}"),
                        });
                    }
                    if let Some(prev) = owner[x] {
                        return Err(Error::Invariant {
                            field: "partitions",
                            detail: format!(
                                "partition {j}: input {x} appears in cells {prev} and {r}"
                            ),
                        });
                    }
                    owner[x] = Some(r);
                }
                if cell.windows(2).any(|w| w[0] == w[1]) {
                    return Err(Error::Invariant {
                        field: "partitions",
                        detail: format!("partition {j} cell {r} repeats an input"),
                    });
                }
            }
            if let Some(x) = owner.iter().position(|o| o.is_none()) {
                return Err(Error::Invariant {
                    field: "partitions",
                    detail: format!("partition {j} does not cover input {x}"),
                });
            }
            let weights: Vec<f64> = partition
                .iter()
                .map(|cell| cell.iter().map(|&x| prior_alice[x]).sum())
                .collect();
            if let Some(r) = weights.iter().position(|&q| q <= 0.0) {
                return Err(Error::Invariant {
                    field: "partitions",
                    detail: format!("partition {j} cell {r} has zero prior weight"),
                });
            }
            cell_weights.push(weights);
        }
        Ok(Self {
            partitions: sorted,
            cell_weights,
        })
    }

    pub fn num_partitions(&self) -> usize {
        self.partitions.len()
    }

    pub fn partitions(&self) -> &[Vec<Vec<usize>>] {
        &self.partitions
    }

    pub fn cells(&self, j: usize) -> &[Vec<usize>] {
        &self.partitions[j]
    }

    pub fn cell_weight(&self, j: usize, r: usize) -> f64 {
        self.cell_weights[j][r]
    }
}

/// A communication game: priors over both inputs, task tables with payoffs,
/// and the partitions the message must stay oblivious to.
#[derive(Debug, Clone, PartialEq)]
pub struct Game {
    alice_inputs: usize,
    bob_inputs: usize,
    num_outcomes: usize,
    prior_alice: Vec<f64>,
    prior_bob: Vec<f64>,
    tasks: Vec<Vec<Vec<usize>>>,
    payoffs: Vec<Vec<Vec<f64>>>,
    partitions: PartitionFamily,
    /// Payoff collected when Bob answers `b` on `(x, y)`: since task values
    /// are distinct per `(x, y)`, at most one task contributes.
    score: Vec<f64>,
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

impl Game {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        alice_inputs: usize,
        bob_inputs: usize,
        num_outcomes: usize,
        prior_alice: Vec<f64>,
        prior_bob: Vec<f64>,
        tasks: Vec<Vec<Vec<usize>>>,
        payoffs: Vec<Vec<Vec<f64>>>,
        partitions: Vec<Vec<Vec<usize>>>,
    ) -> Result<Self> {
        if alice_inputs == 0 || bob_inputs == 0 || num_outcomes == 0 {
            return Err(Error::Invariant {
                field: "dimensions",
                detail: "alice_inputs, bob_inputs and num_outcomes must be positive".into(),
            });
        }
        check_prior("prior_alice", &prior_alice, alice_inputs)?;
        check_prior("prior_bob", &prior_bob, bob_inputs)?;
        if tasks.is_empty() {
            return Err(Error::Invariant {
                field: "tasks",
                detail: "at least one task table is required".into(),
            });
        }
        if payoffs.len() != tasks.len() {
            return Err(Error::Invariant {
                field: "payoffs",
                detail: format!("{} tables for {} tasks", payoffs.len(), tasks.len()),
            });
        }
        for (k, table) in tasks.iter().enumerate() {
            if table.len() != alice_inputs || table.iter().any(|row| row.len() != bob_inputs) {
                return Err(Error::Invariant {
                    field: "tasks",
                    detail: format!("task {k} is not an {alice_inputs}x{bob_inputs} table"),
                });
            }
            for (x, row) in table.iter().enumerate() {
                for (y, &b) in row.iter().enumerate() {
                    if b >= num_outcomes {
                        return Err(Error::Invariant {
                            field: "tasks",
                            detail: format!(
                                "task {k} at ({x}, {y}) targets outcome {b}, beyond {num_outcomes}"
                            ),
                        });
                    }
                }
            }
        }
        for (k, table) in payoffs.iter().enumerate() {
            if table.len() != alice_inputs || table.iter().any(|row| row.len() != bob_inputs) {
                return Err(Error::Invariant {
                    field: "payoffs",
                    detail: format!("payoff {k} is not an {alice_inputs}x{bob_inputs} table"),
                });
            }
            for (x, row) in table.iter().enumerate() {
                for (y, &v) in row.iter().enumerate() {
                    if !v.is_finite() || v.abs() > 1.0 + tol::EXACT_ARITHMETIC {
                        return Err(Error::Invariant {
                            field: "payoffs",
                            detail: format!("payoff {k} at ({x}, {y}) is {v}, outside [-1, 1]"),
                        });
                    }
                }
            }
        }
        for x in 0..alice_inputs {
            for y in 0..bob_inputs {
                for k in 0..tasks.len() {
                    for k2 in (k + 1)..tasks.len() {
                        if tasks[k][x][y] == tasks[k2][x][y] {
                            return Err(Error::Invariant {
                                field: "tasks",
                                detail: format!(
                                    "tasks {k} and {k2} collide at ({x}, {y}): \
                                     both target outcome {}",
                                    tasks[k][x][y]
                                ),
                            });
                        }
                    }
                }
            }
        }
        let partitions = PartitionFamily::new(partitions, &prior_alice)?;

        let mut score = vec![0.0; alice_inputs * bob_inputs * num_outcomes];
        for k in 0..tasks.len() {
            for x in 0..alice_inputs {
                for y in 0..bob_inputs {
                    let b = tasks[k][x][y];
                    score[(x * bob_inputs + y) * num_outcomes + b] += payoffs[k][x][y];
                }
            }
        }

        Ok(Self {
            alice_inputs,
            bob_inputs,
            num_outcomes,
            prior_alice,
            prior_bob,
            tasks,
            payoffs,
            partitions,
            score,
        })
    }

    pub fn alice_inputs(&self) -> usize {
        self.alice_inputs
    }

    pub fn bob_inputs(&self) -> usize {
        self.bob_inputs
    }

    pub fn num_outcomes(&self) -> usize {
        self.num_outcomes
    }

    pub fn prior_alice(&self) -> &[f64] {
        &self.prior_alice
    }

    pub fn prior_bob(&self) -> &[f64] {
        &self.prior_bob
    }

    pub fn num_tasks(&self) -> usize {
        self.tasks.len()
    }

    pub fn task(&self, k: usize, x: usize, y: usize) -> usize {
        self.tasks[k][x][y]
    }

    pub fn payoff(&self, k: usize, x: usize, y: usize) -> f64 {
        self.payoffs[k][x][y]
    }

    pub fn tasks(&self) -> &[Vec<Vec<usize>>] {
        &self.tasks
    }

    pub fn payoffs(&self) -> &[Vec<Vec<f64>>] {
        &self.payoffs
    }

    pub fn partitions(&self) -> &PartitionFamily {
        &self.partitions
    }

    /// Payoff earned by answering `b` on inputs `(x, y)`.
    #[inline]
    pub fn score(&self, x: usize, y: usize, b: usize) -> f64 {
        self.score[(x * self.bob_inputs + y) * self.num_outcomes + b]
    }

    /// Expected payoff of a conditional outcome distribution under the
    /// input priors.
    pub fn performance(&self, dist: &ConditionalDistribution) -> Result<f64> {
        self.check_dist_shape(dist)?;
        let mut total = CompensatedSum::default();
        for x in 0..self.alice_inputs {
            let pa = self.prior_alice[x];
            if pa == 0.0 {
                continue;
            }
            for y in 0..self.bob_inputs {
                let w = pa * self.prior_bob[y];
                if w == 0.0 {
                    continue;
                }
                let mut inner = 0.0;
                for b in 0..self.num_outcomes {
                    inner += self.score(x, y, b) * dist.p(x, y, b);
                }
                total.add(w * inner);
            }
        }
        Ok(total.value())
    }

    /// Compares every cell-averaged outcome distribution against the prior
    /// average; obliviousness requires them to agree for every partition.
    pub fn check_obliviousness(
        &self,
        dist: &ConditionalDistribution,
        tolerance: f64,
    ) -> Result<OblivReport> {
        self.check_dist_shape(dist)?;
        let mut global = vec![0.0; self.bob_inputs * self.num_outcomes];
        for x in 0..self.alice_inputs {
            let pa = self.prior_alice[x];
            for y in 0..self.bob_inputs {
                for b in 0..self.num_outcomes {
                    global[y * self.num_outcomes + b] += pa * dist.p(x, y, b);
                }
            }
        }
        let mut max_deviation = 0.0f64;
        let mut worst = None;
        for j in 0..self.partitions.num_partitions() {
            for (r, cell) in self.partitions.cells(j).iter().enumerate() {
                let q = self.partitions.cell_weight(j, r);
                for y in 0..self.bob_inputs {
                    for b in 0..self.num_outcomes {
                        let avg: f64 = cell
                            .iter()
                            .map(|&x| self.prior_alice[x] * dist.p(x, y, b))
                            .sum::<f64>()
                            / q;
                        let dev = (avg - global[y * self.num_outcomes + b]).abs();
                        if dev > max_deviation {
                            max_deviation = dev;
                            worst = Some(OblivWorst {
                                partition: j,
                                cell: r,
                                bob_input: y,
                                outcome: b,
                            });
                        }
                    }
                }
            }
        }
        Ok(OblivReport {
            tolerance,
            max_deviation,
            pass: max_deviation <= tolerance,
            worst,
        })
    }

    fn check_dist_shape(&self, dist: &ConditionalDistribution) -> Result<()> {
        if dist.alice_inputs() != self.alice_inputs
            || dist.bob_inputs() != self.bob_inputs
            || dist.num_outcomes() != self.num_outcomes
        {
            return Err(Error::DimensionMismatch(format!(
                "distribution is {}x{}x{}, game is {}x{}x{}",
                dist.alice_inputs(),
                dist.bob_inputs(),
                dist.num_outcomes(),
                self.alice_inputs,
                self.bob_inputs,
                self.num_outcomes
            )));
        }
        Ok(())
    }
}

/// Location of the largest obliviousness deviation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OblivWorst {
    pub partition: usize,
    pub cell: usize,
    pub bob_input: usize,
    pub outcome: usize,
}

#[derive(Debug, Clone)]
pub struct OblivReport {
    pub tolerance: f64,
    pub max_deviation: f64,
    pub pass: bool,
    pub worst: Option<OblivWorst>,
}

/// `p(b | x, y)` as a dense table.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalDistribution {
    alice_inputs: usize,
    bob_inputs: usize,
    num_outcomes: usize,
    probs: Vec<f64>,
}

impl ConditionalDistribution {
    pub fn new(
        alice_inputs: usize,
        bob_inputs: usize,
        num_outcomes: usize,
        mut probs: Vec<f64>,
    ) -> Result<Self> {
        if probs.len() != alice_inputs * bob_inputs * num_outcomes {
            return Err(Error::DimensionMismatch(format!(
                "distribution table has {} entries, expected {}",
                probs.len(),
                alice_inputs * bob_inputs * num_outcomes
            )));
        }
        for (i, p) in probs.iter_mut().enumerate() {
            if !p.is_finite() || *p < -tol::EXACT_ARITHMETIC {
                return Err(Error::Invariant {
                    field: "distribution",
                    detail: format!("entry {i} is {p}"),
                });
            }
            if *p < 0.0 {
                *p = 0.0;
            }
        }
        for x in 0..alice_inputs {
            for y in 0..bob_inputs {
                let base = (x * bob_inputs + y) * num_outcomes;
                let sum: f64 = probs[base..base + num_outcomes].iter().sum();
                if (sum - 1.0).abs() > tol::STRUCTURAL {
                    return Err(Error::Invariant {
                        field: "distribution",
                        detail: format!("row ({x}, {y}) sums to {sum}, not 1"),
                    });
                }
            }
        }
        Ok(Self {
            alice_inputs,
            bob_inputs,
            num_outcomes,
            probs,
        })
    }

    pub fn from_fn(
        alice_inputs: usize,
        bob_inputs: usize,
        num_outcomes: usize,
        mut f: impl FnMut(usize, usize, usize) -> f64,
    ) -> Result<Self> {
        let mut probs = Vec::with_capacity(alice_inputs * bob_inputs * num_outcomes);
        for x in 0..alice_inputs {
            for y in 0..bob_inputs {
                for b in 0..num_outcomes {
                    probs.push(f(x, y, b));
                }
            }
        }
        Self::new(alice_inputs, bob_inputs, num_outcomes, probs)
    }

    /// Point distribution on `b = f(x, y)`.
    pub fn deterministic(
        alice_inputs: usize,
        bob_inputs: usize,
        num_outcomes: usize,
        mut f: impl FnMut(usize, usize) -> usize,
    ) -> Result<Self> {
        Self::from_fn(alice_inputs, bob_inputs, num_outcomes, |x, y, b| {
            if f(x, y) == b {
                1.0
            } else {
                0.0
            }
        })
    }

    pub fn uniform(alice_inputs: usize, bob_inputs: usize, num_outcomes: usize) -> Self {
        Self {
            alice_inputs,
            bob_inputs,
            num_outcomes,
            probs: vec![1.0 / num_outcomes as f64; alice_inputs * bob_inputs * num_outcomes],
        }
    }

    pub fn alice_inputs(&self) -> usize {
        self.alice_inputs
    }

    pub fn bob_inputs(&self) -> usize {
        self.bob_inputs
    }

    pub fn num_outcomes(&self) -> usize {
        self.num_outcomes
    }

    #[inline]
    pub fn p(&self, x: usize, y: usize, b: usize) -> f64 {
        self.probs[(x * self.bob_inputs + y) * self.num_outcomes + b]
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GameFile {
    alice_inputs: usize,
    bob_inputs: usize,
    num_outcomes: usize,
    prior_alice: Vec<f64>,
    prior_bob: Vec<f64>,
    tasks: Vec<Vec<Vec<usize>>>,
    payoffs: Vec<Vec<Vec<f64>>>,
    partitions: Vec<Vec<Vec<usize>>>,
}

pub fn save_game(game: &Game) -> String {
    let file = GameFile {
        alice_inputs: game.alice_inputs,
        bob_inputs: game.bob_inputs,
        num_outcomes: game.num_outcomes,
        prior_alice: game.prior_alice.clone(),
        prior_bob: game.prior_bob.clone(),
        tasks: game.tasks.clone(),
        payoffs: game.payoffs.clone(),
        partitions: game.partitions.partitions().to_vec(),
    };
    let mut text = serde_json::to_string_pretty(&file).expect("game serialization");
    text.push('\n');
    text
}

pub fn load_game(text: &str) -> Result<Game> {
    let file: GameFile = serde_json::from_str(text)?;
    Game::new(
        file.alice_inputs,
        file.bob_inputs,
        file.num_outcomes,
        file.prior_alice,
        file.prior_bob,
        file.tasks,
        file.payoffs,
        file.partitions,
    )
}
