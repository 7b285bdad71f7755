//! Optimal classical strategies under the obliviousness constraint.
//!
//! A deterministic strategy is an encoding of Alice's input into a bounded
//! message alphabet plus a decoding of (message, Bob input) into an outcome.
//! The encoding is admissible exactly when it is balanced: within every
//! partition, each message carries equal prior weight from every cell. The
//! best game value over balanced deterministic strategies is the bound that
//! any oblivious classical model must respect; decodings never affect
//! balance, so the searches below optimize them greedily per message.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::game::{ConditionalDistribution, Game};
use crate::tol;

/// Leaf cap for exact enumeration.
const EXACT_NODE_BUDGET: u64 = 20_000_000;
/// Node cap before the pigeonhole search falls back to random sampling.
const PIGEONHOLE_NODE_BUDGET: u64 = 5_000_000;
/// Random encodings drawn when the pigeonhole search is sampled.
const PIGEONHOLE_SAMPLES: u64 = 200_000;
const PIGEONHOLE_SEED: u64 = 0x2718_2818;
/// A candidate must beat the incumbent by this much to replace it.
const IMPROVE_EPS: f64 = 1e-12;

/// Deterministic encoding/decoding pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassicalStrategy {
    alphabet_size: usize,
    encoding: Vec<usize>,
    decoding: Vec<Vec<usize>>,
}

impl ClassicalStrategy {
    pub fn new(
        alphabet_size: usize,
        encoding: Vec<usize>,
        decoding: Vec<Vec<usize>>,
    ) -> Result<Self> {
        if alphabet_size == 0 {
            return Err(Error::Invariant {
                field: "alphabet_size",
                detail: "must be positive".into(),
            });
        }
        if encoding.is_empty() {
            return Err(Error::Invariant {
                field: "encoding",
                detail: "no inputs".into(),
            });
        }
        if let Some(&m) = encoding.iter().find(|&&m| m >= alphabet_size) {
            return Err(Error::Invariant {
                field: "encoding",
                detail: format!("message {m} outside alphabet of size {alphabet_size}"),
            });
        }
        if decoding.len() != alphabet_size {
            return Err(Error::Invariant {
                field: "decoding",
                detail: format!("{} rows for alphabet of size {alphabet_size}", decoding.len()),
            });
        }
        let width = decoding[0].len();
        if width == 0 || decoding.iter().any(|row| row.len() != width) {
            return Err(Error::Invariant {
                field: "decoding",
                detail: "rows must share one positive length".into(),
            });
        }
        Ok(Self {
            alphabet_size,
            encoding,
            decoding,
        })
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn encoding(&self) -> &[usize] {
        &self.encoding
    }

    pub fn decoding(&self) -> &[Vec<usize>] {
        &self.decoding
    }

    pub fn message(&self, x: usize) -> usize {
        self.encoding[x]
    }

    pub fn outcome(&self, x: usize, y: usize) -> usize {
        self.decoding[self.encoding[x]][y]
    }
}

/// The deterministic conditional distribution a strategy induces.
pub fn strategy_distribution(game: &Game, strategy: &ClassicalStrategy) -> ConditionalDistribution {
    assert_eq!(
        strategy.encoding.len(),
        game.alice_inputs(),
        "strategy encodes {} inputs, game has {}",
        strategy.encoding.len(),
        game.alice_inputs()
    );
    assert!(
        strategy.decoding.iter().all(|row| row.len() == game.bob_inputs()),
        "strategy decoding width differs from the game's Bob inputs"
    );
    assert!(
        strategy
            .decoding
            .iter()
            .all(|row| row.iter().all(|&b| b < game.num_outcomes())),
        "strategy decodes to an outcome the game does not have"
    );
    ConditionalDistribution::deterministic(
        game.alice_inputs(),
        game.bob_inputs(),
        game.num_outcomes(),
        |x, y| strategy.outcome(x, y),
    )
    .expect("deterministic distribution")
}

fn encoding_balanced(game: &Game, encoding: &[usize], alphabet: usize, tolerance: f64) -> bool {
    let parts = game.partitions();
    for m in 0..alphabet {
        for j in 0..parts.num_partitions() {
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for (r, cell) in parts.cells(j).iter().enumerate() {
                let w: f64 = cell
                    .iter()
                    .filter(|&&x| encoding[x] == m)
                    .map(|&x| game.prior_alice()[x])
                    .sum::<f64>()
                    / parts.cell_weight(j, r);
                lo = lo.min(w);
                hi = hi.max(w);
            }
            if hi - lo > tolerance {
                return false;
            }
        }
    }
    true
}

/// Whether every message carries equal prior weight from every cell of
/// every partition.
pub fn is_balanced(game: &Game, strategy: &ClassicalStrategy, tolerance: f64) -> bool {
    assert_eq!(
        strategy.encoding.len(),
        game.alice_inputs(),
        "strategy encodes {} inputs, game has {}",
        strategy.encoding.len(),
        game.alice_inputs()
    );
    encoding_balanced(game, &strategy.encoding, strategy.alphabet_size, tolerance)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    /// Enumerate every canonical encoding and test balance at the leaves.
    Exact,
    /// Prune by balance infeasibility and an optimistic payoff bound.
    BranchAndBound,
}

/// Result of a classical bound search.
#[derive(Debug, Clone)]
pub struct BoundOutcome {
    pub value: f64,
    pub witness: ClassicalStrategy,
    /// Search-tree nodes visited.
    pub nodes: u64,
    /// Distinct messages the witness actually uses.
    pub alphabet_used: usize,
}

struct SearchCtx {
    alphabet: usize,
    n: usize,
    ny: usize,
    nb: usize,
    num_cells: usize,
    /// One `(flat cell, prior/cell-weight)` entry per partition, per input.
    cells_of_x: Vec<Vec<(usize, f64)>>,
    /// Flat cell ids grouped by partition.
    partition_cells: Vec<Vec<usize>>,
    /// `prior_alice(x) * prior_bob(y) * score(x, y, b)`.
    contrib: Vec<f64>,
    /// Best achievable payoff from the inputs at positions `t..` of `order`.
    suffix_opt: Vec<f64>,
    /// Inputs by decreasing prior weight (stable on ties).
    order: Vec<usize>,
    prune: bool,
}

impl SearchCtx {
    fn build(game: &Game, alphabet: usize, prune: bool) -> Self {
        let n = game.alice_inputs();
        let ny = game.bob_inputs();
        let nb = game.num_outcomes();
        let parts = game.partitions();

        let mut cells_of_x = vec![Vec::new(); n];
        let mut partition_cells = Vec::new();
        let mut num_cells = 0;
        for j in 0..parts.num_partitions() {
            let mut flat = Vec::new();
            for (r, cell) in parts.cells(j).iter().enumerate() {
                let id = num_cells;
                num_cells += 1;
                flat.push(id);
                let q = parts.cell_weight(j, r);
                for &x in cell {
                    cells_of_x[x].push((id, game.prior_alice()[x] / q));
                }
            }
            partition_cells.push(flat);
        }

        let mut contrib = vec![0.0; n * ny * nb];
        for x in 0..n {
            for y in 0..ny {
                let w = game.prior_alice()[x] * game.prior_bob()[y];
                for b in 0..nb {
                    contrib[(x * ny + y) * nb + b] = w * game.score(x, y, b);
                }
            }
        }

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| {
            game.prior_alice()[b]
                .partial_cmp(&game.prior_alice()[a])
                .unwrap()
                .then(a.cmp(&b))
        });

        let optx: Vec<f64> = (0..n)
            .map(|x| {
                (0..ny)
                    .map(|y| {
                        let best = (0..nb)
                            .map(|b| contrib[(x * ny + y) * nb + b])
                            .fold(f64::NEG_INFINITY, f64::max);
                        best.max(0.0)
                    })
                    .sum()
            })
            .collect();
        let mut suffix_opt = vec![0.0; n + 1];
        for t in (0..n).rev() {
            suffix_opt[t] = suffix_opt[t + 1] + optx[order[t]];
        }

        Self {
            alphabet,
            n,
            ny,
            nb,
            num_cells,
            cells_of_x,
            partition_cells,
            contrib,
            suffix_opt,
            order,
            prune,
        }
    }
}

struct SearchState {
    /// Prior/cell weight assigned so far, per (message, flat cell).
    asg: Vec<f64>,
    /// Unassigned weight remaining per flat cell.
    rem: Vec<f64>,
    /// Accumulated payoff per (message, Bob input, outcome).
    sums: Vec<f64>,
    encoding: Vec<usize>,
    used: usize,
    nodes: u64,
    best_value: f64,
    best_encoding: Option<Vec<usize>>,
}

impl SearchState {
    fn new(ctx: &SearchCtx) -> Self {
        let mut rem = vec![0.0; ctx.num_cells];
        for x in 0..ctx.n {
            for &(cell, w) in &ctx.cells_of_x[x] {
                rem[cell] += w;
            }
        }
        Self {
            asg: vec![0.0; ctx.alphabet * ctx.num_cells],
            rem,
            sums: vec![0.0; ctx.alphabet * ctx.ny * ctx.nb],
            encoding: vec![usize::MAX; ctx.n],
            used: 0,
            nodes: 0,
            best_value: f64::NEG_INFINITY,
            best_encoding: None,
        }
    }

    fn assigned_value(&self, ctx: &SearchCtx) -> f64 {
        let mut total = 0.0;
        for m in 0..self.used {
            for y in 0..ctx.ny {
                let base = (m * ctx.ny + y) * ctx.nb;
                let best = self.sums[base..base + ctx.nb]
                    .iter()
                    .fold(f64::NEG_INFINITY, |acc, &v| acc.max(v));
                total += best;
            }
        }
        total
    }

    /// Can every used message still reach equal weight in every cell?
    fn intervals_feasible(&self, ctx: &SearchCtx) -> bool {
        for m in 0..self.used {
            let base = m * ctx.num_cells;
            for cells in &ctx.partition_cells {
                let mut lo = f64::NEG_INFINITY;
                let mut hi = f64::INFINITY;
                for &c in cells {
                    lo = lo.max(self.asg[base + c]);
                    hi = hi.min(self.asg[base + c] + self.rem[c]);
                }
                if lo > hi + tol::BALANCE {
                    return false;
                }
            }
        }
        true
    }

    fn leaf_balanced(&self, ctx: &SearchCtx) -> bool {
        for m in 0..self.used {
            let base = m * ctx.num_cells;
            for cells in &ctx.partition_cells {
                let mut lo = f64::INFINITY;
                let mut hi = f64::NEG_INFINITY;
                for &c in cells {
                    lo = lo.min(self.asg[base + c]);
                    hi = hi.max(self.asg[base + c]);
                }
                if hi - lo > tol::BALANCE {
                    return false;
                }
            }
        }
        true
    }
}

fn dfs(ctx: &SearchCtx, st: &mut SearchState, t: usize) {
    st.nodes += 1;
    if t == ctx.n {
        if st.leaf_balanced(ctx) {
            let value = st.assigned_value(ctx);
            if value > st.best_value + IMPROVE_EPS || st.best_encoding.is_none() {
                st.best_value = value;
                st.best_encoding = Some(st.encoding.clone());
            }
        }
        return;
    }
    let x = ctx.order[t];
    for &(cell, w) in &ctx.cells_of_x[x] {
        st.rem[cell] -= w;
    }
    let m_hi = st.used.min(ctx.alphabet - 1);
    for m in 0..=m_hi {
        let is_new = m == st.used;
        if is_new {
            st.used += 1;
        }
        st.encoding[x] = m;
        for &(cell, w) in &ctx.cells_of_x[x] {
            st.asg[m * ctx.num_cells + cell] += w;
        }
        let sums_base = m * ctx.ny * ctx.nb;
        for y in 0..ctx.ny {
            for b in 0..ctx.nb {
                st.sums[sums_base + y * ctx.nb + b] += ctx.contrib[(x * ctx.ny + y) * ctx.nb + b];
            }
        }

        let descend = if ctx.prune {
            st.intervals_feasible(ctx)
                && st.assigned_value(ctx) + ctx.suffix_opt[t + 1] > st.best_value + IMPROVE_EPS
        } else {
            true
        };
        if descend {
            dfs(ctx, st, t + 1);
        }

        for y in 0..ctx.ny {
            for b in 0..ctx.nb {
                st.sums[sums_base + y * ctx.nb + b] -= ctx.contrib[(x * ctx.ny + y) * ctx.nb + b];
            }
        }
        for &(cell, w) in &ctx.cells_of_x[x] {
            st.asg[m * ctx.num_cells + cell] -= w;
        }
        st.encoding[x] = usize::MAX;
        if is_new {
            st.used -= 1;
        }
    }
    for &(cell, w) in &ctx.cells_of_x[x] {
        st.rem[cell] += w;
    }
}

/// Greedy decoding for a fixed encoding: per message and Bob input, answer
/// the outcome with the largest accumulated payoff. This is exactly optimal
/// because the objective decouples over (message, Bob input) pairs.
fn greedy_decode(game: &Game, encoding: &[usize], alphabet: usize) -> Vec<Vec<usize>> {
    let ny = game.bob_inputs();
    let nb = game.num_outcomes();
    let mut sums = vec![0.0; alphabet * ny * nb];
    for (x, &m) in encoding.iter().enumerate() {
        for y in 0..ny {
            let w = game.prior_alice()[x] * game.prior_bob()[y];
            for b in 0..nb {
                sums[(m * ny + y) * nb + b] += w * game.score(x, y, b);
            }
        }
    }
    let mut decoding = vec![vec![0usize; ny]; alphabet];
    for m in 0..alphabet {
        for y in 0..ny {
            let base = (m * ny + y) * nb;
            let mut best_b = 0;
            let mut best = sums[base];
            for b in 1..nb {
                if sums[base + b] > best {
                    best = sums[base + b];
                    best_b = b;
                }
            }
            decoding[m][y] = best_b;
        }
    }
    decoding
}

/// Best value over balanced deterministic strategies with at most
/// `max_alphabet` messages.
pub fn pnc_bound(game: &Game, max_alphabet: usize, mode: SearchMode) -> Result<BoundOutcome> {
    if max_alphabet == 0 {
        return Err(Error::Config("alphabet cap must be positive".into()));
    }
    if mode == SearchMode::Exact {
        let needed = (max_alphabet as u128)
            .checked_pow(game.alice_inputs() as u32)
            .unwrap_or(u128::MAX);
        if needed > EXACT_NODE_BUDGET as u128 {
            return Err(Error::NodeBudget {
                needed,
                budget: EXACT_NODE_BUDGET,
            });
        }
    }
    let ctx = SearchCtx::build(game, max_alphabet, mode == SearchMode::BranchAndBound);
    let mut st = SearchState::new(&ctx);
    dfs(&ctx, &mut st, 0);
    let encoding = st.best_encoding.ok_or_else(|| {
        Error::Config("no balanced encoding exists within the alphabet cap".into())
    })?;
    let alphabet_used = encoding.iter().copied().max().unwrap_or(0) + 1;
    let decoding = greedy_decode(game, &encoding, max_alphabet);
    let witness = ClassicalStrategy::new(max_alphabet, encoding, decoding)?;
    // Report the witness's performance rather than the search incumbent so
    // the two agree bit for bit.
    let value = game.performance(&strategy_distribution(game, &witness))?;
    Ok(BoundOutcome {
        value,
        witness,
        nodes: st.nodes,
        alphabet_used,
    })
}

/// How a pigeonhole search was settled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMethod {
    Exhaustive,
    Randomized { samples: u64 },
}

/// Outcome of searching for a balanced encoding that uses a full alphabet
/// one larger than the outcome count.
#[derive(Debug, Clone)]
pub struct PigeonholeReport {
    /// Alphabet size the counterexample search ran at (`num_outcomes + 1`).
    pub tested_alphabet: usize,
    pub method: SearchMethod,
    pub nodes: u64,
    /// A balanced encoding using all `tested_alphabet` messages, if found.
    pub counterexample: Option<Vec<usize>>,
    /// True when the search was exhaustive and found nothing.
    pub confirmed: bool,
    /// A balanced encoding using all `num_outcomes` messages, if one exists.
    pub witness_full_alphabet: Option<Vec<usize>>,
}

struct AllUsedSearch {
    ctx: SearchCtx,
    nodes: u64,
    budget: u64,
    found: Option<Vec<usize>>,
    aborted: bool,
}

impl AllUsedSearch {
    fn dfs(&mut self, st: &mut SearchState, t: usize) {
        if self.found.is_some() || self.aborted {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            self.aborted = true;
            return;
        }
        let ctx = &self.ctx;
        if t == ctx.n {
            if st.used == ctx.alphabet && st.leaf_balanced(ctx) {
                self.found = Some(st.encoding.clone());
            }
            return;
        }
        // Not enough inputs left to introduce the missing messages.
        if st.used + (ctx.n - t) < ctx.alphabet {
            return;
        }
        let x = ctx.order[t];
        for &(cell, w) in &ctx.cells_of_x[x] {
            st.rem[cell] -= w;
        }
        let m_hi = st.used.min(ctx.alphabet - 1);
        for m in 0..=m_hi {
            let is_new = m == st.used;
            if is_new {
                st.used += 1;
            }
            st.encoding[x] = m;
            for &(cell, w) in &self.ctx.cells_of_x[x] {
                st.asg[m * self.ctx.num_cells + cell] += w;
            }
            if st.intervals_feasible(&self.ctx) {
                self.dfs(st, t + 1);
            }
            for &(cell, w) in &self.ctx.cells_of_x[x] {
                st.asg[m * self.ctx.num_cells + cell] -= w;
            }
            st.encoding[x] = usize::MAX;
            if is_new {
                st.used -= 1;
            }
            if self.found.is_some() || self.aborted {
                break;
            }
        }
        for &(cell, w) in &self.ctx.cells_of_x[x] {
            st.rem[cell] += w;
        }
    }
}

/// Search for a balanced encoding that uses every one of `alphabet` messages.
/// Falls back to random sampling if the exhaustive walk exceeds its budget.
fn all_used_balanced_search(
    game: &Game,
    alphabet: usize,
) -> (Option<Vec<usize>>, u64, SearchMethod) {
    let n = game.alice_inputs();
    if alphabet > n {
        // More messages than inputs: no encoding can use them all.
        return (None, 1, SearchMethod::Exhaustive);
    }
    let ctx = SearchCtx::build(game, alphabet, true);
    let mut st = SearchState::new(&ctx);
    let mut search = AllUsedSearch {
        ctx,
        nodes: 0,
        budget: PIGEONHOLE_NODE_BUDGET,
        found: None,
        aborted: false,
    };
    search.dfs(&mut st, 0);
    if !search.aborted {
        return (search.found, search.nodes, SearchMethod::Exhaustive);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(PIGEONHOLE_SEED);
    let mut encoding = vec![0usize; n];
    for _ in 0..PIGEONHOLE_SAMPLES {
        for slot in encoding.iter_mut() {
            *slot = rng.random_range(0..alphabet);
        }
        let mut seen = vec![false; alphabet];
        for &m in &encoding {
            seen[m] = true;
        }
        if seen.iter().all(|&s| s)
            && encoding_balanced(game, &encoding, alphabet, tol::BALANCE)
        {
            return (
                Some(encoding),
                search.nodes,
                SearchMethod::Randomized {
                    samples: PIGEONHOLE_SAMPLES,
                },
            );
        }
    }
    (
        None,
        search.nodes,
        SearchMethod::Randomized {
            samples: PIGEONHOLE_SAMPLES,
        },
    )
}

/// Test whether the message alphabet can grow past the outcome count while
/// staying balanced with every message in use. For games bridged from
/// correlation inequalities the answer is no, pinning the quantum message
/// dimension needed to reproduce them.
pub fn max_oblivious_alphabet_check(game: &Game) -> PigeonholeReport {
    let d = game.num_outcomes();
    let (counterexample, nodes, method) = all_used_balanced_search(game, d + 1);
    let confirmed = counterexample.is_none() && method == SearchMethod::Exhaustive;
    let (witness_full_alphabet, _, _) = all_used_balanced_search(game, d);
    PigeonholeReport {
        tested_alphabet: d + 1,
        method,
        nodes,
        counterexample,
        confirmed,
        witness_full_alphabet,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    /// Name `x` while the message must hide it completely.
    fn guess_x_game() -> Game {
        Game::new(
            2,
            1,
            2,
            vec![0.5, 0.5],
            vec![1.0],
            vec![vec![vec![0], vec![1]]],
            vec![vec![vec![1.0], vec![1.0]]],
            vec![vec![vec![0], vec![1]]],
        )
        .unwrap()
    }

    /// Two unconstrained inputs (single-cell partition), so the message may
    /// say everything.
    fn free_game() -> Game {
        Game::new(
            2,
            1,
            2,
            vec![0.5, 0.5],
            vec![1.0],
            vec![vec![vec![0], vec![1]]],
            vec![vec![vec![1.0], vec![1.0]]],
            vec![vec![vec![0, 1]]],
        )
        .unwrap()
    }

    #[test]
    fn constant_encoding_is_balanced() {
        let g = guess_x_game();
        let s = ClassicalStrategy::new(2, vec![0, 0], vec![vec![0], vec![0]]).unwrap();
        assert!(is_balanced(&g, &s, tol::BALANCE));
    }

    #[test]
    fn revealing_encoding_is_not_balanced() {
        let g = guess_x_game();
        let s = ClassicalStrategy::new(2, vec![0, 1], vec![vec![0], vec![1]]).unwrap();
        assert!(!is_balanced(&g, &s, tol::BALANCE));
    }

    #[test]
    fn distribution_follows_the_strategy() {
        let g = free_game();
        let s = ClassicalStrategy::new(2, vec![0, 1], vec![vec![0], vec![1]]).unwrap();
        let d = strategy_distribution(&g, &s);
        assert_eq!(d.p(0, 0, 0), 1.0);
        assert_eq!(d.p(1, 0, 1), 1.0);
        assert_abs_diff_eq!(g.performance(&d).unwrap(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn bound_is_half_when_the_message_must_hide_x() {
        for mode in [SearchMode::Exact, SearchMode::BranchAndBound] {
            let out = pnc_bound(&guess_x_game(), 2, mode).unwrap();
            assert_abs_diff_eq!(out.value, 0.5, epsilon = 1e-15);
            assert!(is_balanced(&guess_x_game(), &out.witness, tol::BALANCE));
        }
    }

    #[test]
    fn bound_is_one_without_constraints() {
        for mode in [SearchMode::Exact, SearchMode::BranchAndBound] {
            let out = pnc_bound(&free_game(), 2, mode).unwrap();
            assert_abs_diff_eq!(out.value, 1.0, epsilon = 1e-15);
            assert_eq!(out.alphabet_used, 2);
        }
    }

    #[test]
    fn bound_is_monotone_in_the_alphabet_cap() {
        let g = free_game();
        let v1 = pnc_bound(&g, 1, SearchMode::Exact).unwrap().value;
        let v2 = pnc_bound(&g, 2, SearchMode::Exact).unwrap().value;
        assert!(v1 <= v2 + 1e-15);
        assert_abs_diff_eq!(v1, 0.5, epsilon = 1e-15);
    }

    #[test]
    fn exact_mode_rejects_oversized_search_space() {
        let n = 40;
        let prior = vec![1.0 / n as f64; n];
        let tasks = vec![vec![vec![0]; n]];
        let payoffs = vec![vec![vec![1.0]; n]];
        let partition = vec![(0..n).collect::<Vec<_>>()];
        let g = Game::new(n, 1, 2, prior, vec![1.0], tasks, payoffs, vec![partition]).unwrap();
        let err = pnc_bound(&g, 3, SearchMode::Exact).unwrap_err();
        assert!(err.to_string().contains("branch-and-bound"));
    }

    #[test]
    fn both_modes_agree_on_an_asymmetric_game() {
        // Non-uniform prior, two partitions, mixed payoff signs.
        let g = Game::new(
            4,
            2,
            3,
            vec![0.4, 0.1, 0.3, 0.2],
            vec![0.5, 0.5],
            vec![
                vec![vec![0, 1], vec![1, 2], vec![2, 0], vec![0, 1]],
                vec![vec![1, 2], vec![2, 0], vec![0, 1], vec![1, 2]],
            ],
            vec![
                vec![vec![1.0, 0.5], vec![1.0, 0.5], vec![1.0, 0.5], vec![1.0, 0.5]],
                vec![
                    vec![-0.5, 0.25],
                    vec![-0.5, 0.25],
                    vec![-0.5, 0.25],
                    vec![-0.5, 0.25],
                ],
            ],
            vec![vec![vec![0, 1], vec![2, 3]], vec![vec![0, 2], vec![1, 3]]],
        )
        .unwrap();
        let exact = pnc_bound(&g, 3, SearchMode::Exact).unwrap();
        let bnb = pnc_bound(&g, 3, SearchMode::BranchAndBound).unwrap();
        assert_abs_diff_eq!(exact.value, bnb.value, epsilon = 1e-12);
        assert!(bnb.nodes <= exact.nodes);
    }

    #[test]
    fn pigeonhole_check_on_a_two_input_game() {
        // Three messages cannot all be used on two inputs.
        let report = max_oblivious_alphabet_check(&guess_x_game());
        assert_eq!(report.tested_alphabet, 3);
        assert!(report.confirmed);
        assert!(report.counterexample.is_none());
        // And no balanced two-message encoding uses both messages here.
        assert!(report.witness_full_alphabet.is_none());
    }

    #[test]
    fn witness_decoding_is_greedy_optimal() {
        let g = free_game();
        let out = pnc_bound(&g, 2, SearchMode::Exact).unwrap();
        let d = strategy_distribution(&g, &out.witness);
        assert_abs_diff_eq!(g.performance(&d).unwrap(), out.value, epsilon = 1e-12);
    }
}
