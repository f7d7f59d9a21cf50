//! Maximum-reachability edge temporalisation of directed graphs.
//!
//! * [`graph`]: digraphs with stable edge indices, schedules, time labels, file formats.
//! * [`engine`]: bit-parallel temporal reachability evaluation.
//! * [`scc`]: strong connectivity.
//! * [`solvers`]: exhaustive, local-search and arborescence-based schedule search.
//! * [`reduction`]: the 3-SAT gadget construction with exact bound arithmetic.
//! * [`astra`]: edge-disjoint common-root arborescence pairs and graph families.

pub mod astra;
pub mod engine;
pub mod graph;
pub mod reduction;
pub mod scc;
pub mod solvers;

pub use astra::{
    best_root, exact_pair, gen_fig3, gen_random_sc, greedy_pair, ArborescencePair, AstraError,
    AstraReport, PairMethod,
};
pub use engine::{
    evaluate_order, evaluate_schedule, evaluate_temporalisation, EvalError, ReachState,
    ReachabilityResult,
};
pub use graph::{Digraph, EdgeId, FormatError, NodeId, OrderError, Schedule, Temporalisation};
pub use reduction::{
    build_instance, certify, check_bounds, schedule_from_assignment, Assignment, BoundsReport,
    CnfFormula, ReductionError, ReductionInstance, ReductionParams,
};
pub use scc::is_strongly_connected;
pub use solvers::{
    solve_arborescence, solve_exact, solve_local, Method, RootChoice, SolveError, SolveResult,
};

/// Name of the pseudo-random generator behind every seeded operation.
pub const PRNG: &str = "ChaCha8 (rand_chacha 0.9, seed_from_u64, one stream per restart/root)";
