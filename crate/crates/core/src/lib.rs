//! Communication games with obliviousness constraints.
//!
//! A referee hands Alice an input `x` and Bob an input `y`. Alice sends a
//! single message, Bob outputs `b`, and the pair scores according to a set of
//! task tables. The twist is an obliviousness requirement: the message must
//! not reveal which cell of certain input partitions `x` belongs to. This
//! crate computes the best score reachable by classical (oblivious) encodings,
//! evaluates and optimizes quantum strategies under the matching constraint on
//! the transmitted states, and converts two-party correlation inequalities
//! into such games via steering of a shared entangled state.

pub mod bell;
pub mod catalog;
pub mod classical;
pub mod error;
pub mod game;
pub mod linalg;
pub mod quantum;
pub mod seesaw;
pub mod tol;

pub use bell::{
    bell_value, bridge_game, group_strategy_distribution, group_strategy_sweep, load_scenario,
    load_setup, save_scenario, save_setup, steer_states, BellScenario, BellTerm,
    BipartiteQuantumSetup, GroupSweep, SharedState, SteeredStates,
};
pub use catalog::{
    build_cglmp_game, build_rac, build_rac_capped, cglmp_mixed_value, cglmp_quantum_strategy,
    cglmp_scenario, cglmp_setup, cglmp_value_formula, chsh_optimal_setup, chsh_scenario,
    rac22_bb84_strategy, rac_pnc_bound, CglmpSpec, RacSpec,
};
pub use classical::{
    is_balanced, max_oblivious_alphabet_check, pnc_bound, strategy_distribution, BoundOutcome,
    ClassicalStrategy, PigeonholeReport, SearchMethod, SearchMode,
};
pub use error::{Error, Result};
pub use game::{
    load_game, save_game, ConditionalDistribution, Game, OblivReport, PartitionFamily,
};
pub use linalg::{
    hermitian_eigen, min_eigenvalue, partial_trace_first, psd_project, tensor, ComplexMatrix,
    DensityMatrix, HermitianEigen, Povm,
};
pub use quantum::{
    born_distribution, check_quantum_obliviousness, classical_embedding, load_strategy,
    save_strategy, QuantumOblivReport, QuantumStrategy,
};
pub use seesaw::{
    optimize_measurements, optimize_states, seesaw, AscentParams, SeesawConfig, SeesawOutcome,
    TracePoint,
};
