//! Quantum strategies: density-matrix encodings of Alice's input measured
//! by per-input POVMs on Bob's side.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{ConditionalDistribution, Game};
use crate::linalg::{mul_trace, ComplexMatrix, DensityMatrix, Povm};
use crate::tol;

/// One state per Alice input, one measurement per Bob input.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumStrategy {
    dim: usize,
    states: Vec<DensityMatrix>,
    measurements: Vec<Povm>,
}

impl QuantumStrategy {
    pub fn new(states: Vec<DensityMatrix>, measurements: Vec<Povm>) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::Invariant {
                field: "states",
                detail: "at least one state is required".into(),
            });
        }
        if measurements.is_empty() {
            return Err(Error::Invariant {
                field: "measurements",
                detail: "at least one measurement is required".into(),
            });
        }
        let dim = states[0].dim();
        if let Some((x, s)) = states.iter().enumerate().find(|(_, s)| s.dim() != dim) {
            return Err(Error::DimensionMismatch(format!(
                "state {x} has dimension {}, expected {dim}",
                s.dim()
            )));
        }
        if let Some((y, p)) = measurements.iter().enumerate().find(|(_, p)| p.dim() != dim) {
            return Err(Error::DimensionMismatch(format!(
                "measurement {y} acts on dimension {}, states have {dim}",
                p.dim()
            )));
        }
        let outcomes = measurements[0].num_outcomes();
        if let Some((y, p)) = measurements
            .iter()
            .enumerate()
            .find(|(_, p)| p.num_outcomes() != outcomes)
        {
            return Err(Error::DimensionMismatch(format!(
                "measurement {y} has {} outcomes, expected {outcomes}",
                p.num_outcomes()
            )));
        }
        Ok(Self {
            dim,
            states,
            measurements,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_outcomes(&self) -> usize {
        self.measurements[0].num_outcomes()
    }

    pub fn states(&self) -> &[DensityMatrix] {
        &self.states
    }

    pub fn measurements(&self) -> &[Povm] {
        &self.measurements
    }
}

/// Outcome probabilities `Tr(rho_x B_b^y)`. Small negative traces (above
/// `-1e-10`) are clipped to zero and each row is renormalized.
pub fn born_distribution(strategy: &QuantumStrategy) -> Result<ConditionalDistribution> {
    let nx = strategy.states.len();
    let ny = strategy.measurements.len();
    let nb = strategy.num_outcomes();
    let mut probs = Vec::with_capacity(nx * ny * nb);
    for (x, rho) in strategy.states.iter().enumerate() {
        for (y, povm) in strategy.measurements.iter().enumerate() {
            let base = probs.len();
            let mut sum = 0.0;
            for b in 0..nb {
                let p = mul_trace(rho.matrix(), povm.element(b)).re;
                if p < -tol::STRUCTURAL {
                    return Err(Error::Invariant {
                        field: "born",
                        detail: format!("p({b} | {x}, {y}) = {p:.3e} is negative"),
                    });
                }
                let p = p.max(0.0);
                sum += p;
                probs.push(p);
            }
            if (sum - 1.0).abs() > tol::STRUCTURAL {
                return Err(Error::Invariant {
                    field: "born",
                    detail: format!("outcomes of ({x}, {y}) sum to {sum}"),
                });
            }
            for p in &mut probs[base..] {
                *p /= sum;
            }
        }
    }
    ConditionalDistribution::new(nx, ny, nb, probs)
}

/// Cell-averaged states compared with the prior-averaged state, plus each
/// cell average's distance to the maximally mixed state.
#[derive(Debug, Clone)]
pub struct QuantumOblivReport {
    pub tolerance: f64,
    pub max_deviation: f64,
    pub pass: bool,
    /// Entrywise distance of each cell average to `I/dim`, indexed
    /// `[partition][cell]`.
    pub mixed_distances: Vec<Vec<f64>>,
    pub max_mixed_distance: f64,
}

/// The transmitted states are oblivious when every cell of every partition
/// averages (with prior/cell weights) to the same operator.
pub fn check_quantum_obliviousness(
    game: &Game,
    strategy: &QuantumStrategy,
    tolerance: f64,
) -> Result<QuantumOblivReport> {
    if strategy.states.len() != game.alice_inputs() {
        return Err(Error::DimensionMismatch(format!(
            "strategy has {} states, game has {} Alice inputs",
            strategy.states.len(),
            game.alice_inputs()
        )));
    }
    let dim = strategy.dim;
    let mut global = ComplexMatrix::zeros(dim, dim);
    for (x, rho) in strategy.states.iter().enumerate() {
        global.add_scaled_mut(game.prior_alice()[x], rho.matrix());
    }
    let mut mixed = ComplexMatrix::identity(dim);
    mixed.scale_mut(1.0 / dim as f64);

    let parts = game.partitions();
    let mut max_deviation = 0.0f64;
    let mut max_mixed_distance = 0.0f64;
    let mut mixed_distances = Vec::with_capacity(parts.num_partitions());
    for j in 0..parts.num_partitions() {
        let mut row = Vec::with_capacity(parts.cells(j).len());
        for (r, cell) in parts.cells(j).iter().enumerate() {
            let q = parts.cell_weight(j, r);
            let mut avg = ComplexMatrix::zeros(dim, dim);
            for &x in cell {
                avg.add_scaled_mut(game.prior_alice()[x] / q, strategy.states[x].matrix());
            }
            max_deviation = max_deviation.max(avg.max_abs_diff(&global));
            let dist = avg.max_abs_diff(&mixed);
            max_mixed_distance = max_mixed_distance.max(dist);
            row.push(dist);
        }
        mixed_distances.push(row);
    }
    Ok(QuantumOblivReport {
        tolerance,
        max_deviation,
        pass: max_deviation <= tolerance,
        mixed_distances,
        max_mixed_distance,
    })
}

/// Embed a deterministic strategy: messages become basis states and Bob
/// measures basis projectors grouped by his decoding. Basis directions
/// beyond the alphabet follow the decoding of `index mod alphabet`, so the
/// POVMs stay complete in any dimension at least the alphabet size.
pub fn classical_embedding(
    game: &Game,
    strategy: &crate::classical::ClassicalStrategy,
    dim: usize,
) -> Result<QuantumStrategy> {
    let alphabet = strategy.alphabet_size();
    if dim < alphabet {
        return Err(Error::Config(format!(
            "embedding dimension {dim} is below the alphabet size {alphabet}"
        )));
    }
    if strategy.encoding().len() != game.alice_inputs() {
        return Err(Error::DimensionMismatch(format!(
            "strategy encodes {} inputs, game has {}",
            strategy.encoding().len(),
            game.alice_inputs()
        )));
    }
    if strategy.decoding()[0].len() != game.bob_inputs() {
        return Err(Error::DimensionMismatch(format!(
            "strategy decodes {} Bob inputs, game has {}",
            strategy.decoding()[0].len(),
            game.bob_inputs()
        )));
    }
    if strategy
        .decoding()
        .iter()
        .any(|row| row.iter().any(|&b| b >= game.num_outcomes()))
    {
        return Err(Error::Invariant {
            field: "decoding",
            detail: "targets an outcome the game does not have".into(),
        });
    }
    let states = strategy
        .encoding()
        .iter()
        .map(|&m| {
            let mut mat = ComplexMatrix::zeros(dim, dim);
            mat.set(m, m, num_complex::Complex64::ONE);
            DensityMatrix::new(mat)
        })
        .collect::<Result<Vec<_>>>()?;
    let measurements = (0..game.bob_inputs())
        .map(|y| {
            let mut elements = vec![ComplexMatrix::zeros(dim, dim); game.num_outcomes()];
            for i in 0..dim {
                let b = strategy.decoding()[i % alphabet][y];
                let v = elements[b].get(i, i) + num_complex::Complex64::ONE;
                elements[b].set(i, i, v);
            }
            Povm::new(elements)
        })
        .collect::<Result<Vec<_>>>()?;
    QuantumStrategy::new(states, measurements)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StrategyFile {
    dim: usize,
    /// Row-major `[re, im]` pairs, one flat matrix per state.
    states: Vec<Vec<[f64; 2]>>,
    /// One POVM per Bob input, one flat matrix per outcome.
    measurements: Vec<Vec<Vec<[f64; 2]>>>,
}

pub fn save_strategy(strategy: &QuantumStrategy) -> String {
    let file = StrategyFile {
        dim: strategy.dim,
        states: strategy
            .states
            .iter()
            .map(|s| s.matrix().to_re_im_pairs())
            .collect(),
        measurements: strategy
            .measurements
            .iter()
            .map(|p| p.elements().iter().map(|e| e.to_re_im_pairs()).collect())
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&file).expect("strategy serialization");
    text.push('\n');
    text
}

pub fn load_strategy(text: &str) -> Result<QuantumStrategy> {
    let file: StrategyFile = serde_json::from_str(text)?;
    let dim = file.dim;
    let states = file
        .states
        .iter()
        .map(|pairs| {
            DensityMatrix::new(ComplexMatrix::from_re_im_pairs(dim, dim, pairs)?)
        })
        .collect::<Result<Vec<_>>>()?;
    let measurements = file
        .measurements
        .iter()
        .map(|povm| {
            let elements = povm
                .iter()
                .map(|pairs| ComplexMatrix::from_re_im_pairs(dim, dim, pairs))
                .collect::<Result<Vec<_>>>()?;
            Povm::new(elements)
        })
        .collect::<Result<Vec<_>>>()?;
    QuantumStrategy::new(states, measurements)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::ClassicalStrategy;
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;

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

    fn basis_state(dim: usize, i: usize) -> DensityMatrix {
        let mut m = ComplexMatrix::zeros(dim, dim);
        m.set(i, i, Complex64::ONE);
        DensityMatrix::new(m).unwrap()
    }

    #[test]
    fn born_rule_on_basis_states() {
        let qs = QuantumStrategy::new(
            vec![basis_state(2, 0), basis_state(2, 1)],
            vec![Povm::computational_basis(2)],
        )
        .unwrap();
        let d = born_distribution(&qs).unwrap();
        assert_eq!(d.p(0, 0, 0), 1.0);
        assert_eq!(d.p(1, 0, 1), 1.0);
    }

    #[test]
    fn born_rule_on_the_maximally_mixed_state() {
        let qs = QuantumStrategy::new(
            vec![DensityMatrix::maximally_mixed(3)],
            vec![Povm::computational_basis(3)],
        )
        .unwrap();
        let d = born_distribution(&qs).unwrap();
        for b in 0..3 {
            assert_abs_diff_eq!(d.p(0, 0, b), 1.0 / 3.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn born_rule_on_a_superposition() {
        let plus = DensityMatrix::from_pure(&[Complex64::ONE, Complex64::ONE]).unwrap();
        let qs =
            QuantumStrategy::new(vec![plus], vec![Povm::computational_basis(2)]).unwrap();
        let d = born_distribution(&qs).unwrap();
        assert_abs_diff_eq!(d.p(0, 0, 0), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(d.p(0, 0, 1), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn strategy_rejects_mismatched_dimensions() {
        let err = QuantumStrategy::new(
            vec![basis_state(2, 0), basis_state(3, 0)],
            vec![Povm::computational_basis(2)],
        )
        .unwrap_err();
        assert!(err.to_string().contains("dimension"));
    }

    #[test]
    fn obliviousness_of_identical_states_passes() {
        let g = guess_x_game();
        let qs = QuantumStrategy::new(
            vec![DensityMatrix::maximally_mixed(2); 2],
            vec![Povm::computational_basis(2)],
        )
        .unwrap();
        let report = check_quantum_obliviousness(&g, &qs, tol::OBLIVIOUSNESS).unwrap();
        assert!(report.pass);
        assert_abs_diff_eq!(report.max_deviation, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(report.max_mixed_distance, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn obliviousness_of_revealing_states_fails() {
        let g = guess_x_game();
        let qs = QuantumStrategy::new(
            vec![basis_state(2, 0), basis_state(2, 1)],
            vec![Povm::computational_basis(2)],
        )
        .unwrap();
        let report = check_quantum_obliviousness(&g, &qs, tol::OBLIVIOUSNESS).unwrap();
        assert!(!report.pass);
        assert_abs_diff_eq!(report.max_deviation, 0.5, epsilon = 1e-15);
    }

    #[test]
    fn embedding_reproduces_the_classical_distribution() {
        let g = guess_x_game();
        let s = ClassicalStrategy::new(2, vec![0, 1], vec![vec![0], vec![1]]).unwrap();
        for dim in [2, 4] {
            let qs = classical_embedding(&g, &s, dim).unwrap();
            let quantum = born_distribution(&qs).unwrap();
            let classical = crate::classical::strategy_distribution(&g, &s);
            for x in 0..2 {
                for b in 0..2 {
                    assert_eq!(quantum.p(x, 0, b), classical.p(x, 0, b));
                }
            }
        }
    }

    #[test]
    fn embedding_rejects_too_small_dimension() {
        let g = guess_x_game();
        let s = ClassicalStrategy::new(2, vec![0, 1], vec![vec![0], vec![1]]).unwrap();
        assert!(classical_embedding(&g, &s, 1).is_err());
    }

    #[test]
    fn strategy_file_round_trip() {
        let plus = DensityMatrix::from_pure(&[Complex64::ONE, Complex64::ONE]).unwrap();
        let qs = QuantumStrategy::new(
            vec![plus, basis_state(2, 1)],
            vec![Povm::computational_basis(2)],
        )
        .unwrap();
        let text = save_strategy(&qs);
        let back = load_strategy(&text).unwrap();
        assert_eq!(qs, back);
    }

    #[test]
    fn load_rejects_a_non_state() {
        let text = r#"{
            "dim": 2,
            "states": [[[1.5, 0.0], [0.0, 0.0], [0.0, 0.0], [-0.5, 0.0]]],
            "measurements": [[
                [[1.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.0, 0.0]],
                [[0.0, 0.0], [0.0, 0.0], [0.0, 0.0], [1.0, 0.0]]
            ]]
        }"#;
        let err = load_strategy(text).unwrap_err();
        assert!(err.to_string().contains("state"));
    }
}
