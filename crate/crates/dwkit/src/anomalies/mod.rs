//! Group extensions, non-abelian 2-cocycles and the obstruction searches for
//! gauging a symmetry of a Dijkgraaf-Witten theory.

mod extension;
mod obstruction;
mod relative;
mod system;

pub use extension::{
    abelian_extension, abelian_square_extension, cocycle_from_extension, extension_from_cocycle, pauli_extension,
    Extension, NonAbelianCocycle,
};
pub use obstruction::{
    anomaly_report, coherence_defect, find_boundary_pair, find_closed_lift, fixed_point_family_from_lift,
    is_first_obstruction_trivial, is_invariant_class, lift_modulus, BoundaryPair, ObstructionReport, Verdict,
};
pub use relative::{projective_state_cocycle, relative_partition_torus, ProjectiveStateCocycle, StateSector};
