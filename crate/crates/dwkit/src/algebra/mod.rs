//! Finite groups, homomorphisms, phases and exact integer linear algebra.

mod builtin;
mod cyclo;
mod group;
mod hom;
mod matrix;
mod phase;
mod snf;
mod solve;

pub use builtin::{builtin_group, cyclic, dihedral, pauli, product, symmetric};
pub use cyclo::{cyclotomic_polynomial, CycloNumber};
pub use group::{group_from_table, FiniteGroup, GroupShape, FULL_ASSOCIATIVITY_LIMIT};
pub use hom::{find_isomorphism, GroupHom};
pub(crate) use hom::extend_on_generators;
pub use matrix::IntMatrix;
pub use phase::PhaseValue;
pub use snf::{smith_columns, smith_normal_form, ColumnSmith, SmithForm};
pub use solve::{solve_linear, solve_linear_multi, solve_particular, LinearSolution, MultiSolution, Ring};
