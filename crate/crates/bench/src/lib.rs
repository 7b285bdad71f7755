//! Deterministic fixtures shared by the benchmark targets.

use num_complex::Complex64;
use prepctx_core::*;

/// Dense Hermitian matrix with entries spread over the unit disc; index
/// arithmetic keeps the fill reproducible without an RNG.
pub fn dense_hermitian(n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |r, c| {
        Complex64::new(
            (0.7 * (r * 31 + c * 17) as f64).sin(),
            (0.4 * (r as f64 - c as f64)).cos() * 0.3,
        )
    })
    .hermitian_part()
}

pub fn rac22_game() -> Game {
    build_rac(&RacSpec::new(2, 2).expect("valid spec")).expect("buildable game")
}

pub fn rac23_game() -> Game {
    build_rac(&RacSpec::new(2, 3).expect("valid spec")).expect("buildable game")
}

pub fn cglmp_flat_strategy(d: usize) -> (Game, QuantumStrategy) {
    let spec = CglmpSpec::new(d).expect("valid spec");
    let game = build_cglmp_game(&spec).expect("buildable game");
    let strategy = cglmp_quantum_strategy(&spec, &vec![1.0; d]).expect("valid weights");
    (game, strategy)
}
