//! Exact finite-group cohomology with U(1) coefficients, Dijkgraaf-Witten
//! invariants on tori, groupoid integration and 't Hooft anomaly obstruction
//! searches for group extensions.
//!
//! Everything is exact: phases are fractions in (1/M)Z/Z, linear algebra runs
//! over Z or Z/m, and sums of phases are kept as elements of Z[Z_M] until an
//! integrality claim is checked.

pub mod algebra;
pub mod anomalies;
pub mod cochains;
pub mod dw;
mod error;
pub mod format;
pub mod groupoids;

pub use algebra::{
    builtin_group, group_from_table, smith_normal_form, solve_linear, solve_linear_multi,
    CycloNumber, FiniteGroup, GroupHom, IntMatrix, LinearSolution, PhaseValue, Ring, SmithForm,
};
pub use anomalies::{
    anomaly_report, cocycle_from_extension, extension_from_cocycle, find_boundary_pair,
    find_closed_lift, is_first_obstruction_trivial, is_invariant_class, projective_state_cocycle,
    relative_partition_torus, Extension, NonAbelianCocycle, ObstructionReport, Verdict,
};
pub use cochains::{
    catalog_cocycle, coboundary, cohomology, evaluate, interval_pairing, pullback, shuffle_cross,
    solve_coboundary, torus_fundamental_cycle, Cochain, CohomologyGroup, FormalChain,
};
pub use dw::{
    drinfeld_double_simple_count, dw_partition_torus, state_space_torus, symmetry_action,
    transgress_circle, twisted_irrep_count, ActionCochain, LoopCochain, StateSpace,
};
pub use error::{Error, Result};
pub use groupoids::{cardinality, gauge_groupoid, homotopy_fiber, integrate, FinGroupoid, Functor, GaugeGroupoid};
