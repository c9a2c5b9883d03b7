//! Finite groupoids, cardinality, integration and homotopy fibres, plus the
//! gauge groupoids of commuting tuples.

mod gauge;
mod groupoid;

pub use gauge::{commuting_tuples, gauge_functor, gauge_groupoid, GaugeGroupoid, GAUGE_TUPLE_BUDGET};
pub use groupoid::{cardinality, fiber_object_parts, homotopy_fiber, integrate, FinGroupoid, Functor};
