//! Dijkgraaf-Witten invariants: transgression, torus partition functions and
//! state spaces.

mod action;
mod states;
mod torus;

pub use action::{dpr_loop_cocycle, transgress_circle, transgress_iterated, ActionCochain, LoopCochain};
pub use states::{state_space_torus, symmetry_action, PhaseMatrix, StateSpace, SymmetryAction};
pub use torus::{
    drinfeld_double_simple_count, dw_partition_torus, dw_torus_count, torus_holonomy, twisted_irrep_count,
    untwisted_torus_count,
};
