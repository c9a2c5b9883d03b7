//! Normalized bar cochains with U(1) values, cohomology, the cocycle catalog
//! and shuffle chains for tori.

mod catalog;
mod chain;
mod cochain;
mod cohomology;
mod solve;

pub use catalog::{catalog_cocycle, catalog_sigma, named_cocycle};
pub use chain::{evaluate, interval_pairing, shuffle_cross, shuffle_cross_embedded, torus_fundamental_cycle, FormalChain};
pub(crate) use cochain::{bar_faces, pullback_matrix, BarIndex};
pub use cochain::{coboundary, coboundary_matrix, pullback, Cochain};
pub use cohomology::{
    bar_work_estimate, cohomology, cohomology_with_budget, is_cohomologous_to_zero, CohomologyGroup, DEFAULT_BUDGET,
};
pub use solve::{bockstein_is_coboundary, default_working_modulus, solve_coboundary};
