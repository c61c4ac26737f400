//! Exact linear programming and the game-theoretic programs built on it.

mod balanced;
mod least_core;
mod nucleolus;
mod simplex;

pub use balanced::{
    balanced_weights, is_balanced_collection, kohlberg_levels, satisfies_kohlberg, KohlbergLevel,
};
pub use least_core::{
    core_contains, core_nonempty, least_core, least_core_vertices, LeastCoreError, LeastCoreResult,
    DEFAULT_VERTEX_CAP,
};
pub use nucleolus::{
    prenucleolus_lp_oracle, prenucleolus_lp_run, reconstruct_from_tight, OracleLevel, OracleRun,
};
pub use simplex::{lp_solve, Constraint, LpOutcome, LpProblem, Relation};
