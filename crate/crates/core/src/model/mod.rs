//! Finite partial-map systems `(Y, F, c)` and the extended index order.

mod cost;
mod index;
pub mod json;
mod set;
mod system;

pub use cost::{inf_f64, parse_cost, Cost};
pub use index::{compare_index, EpsIndex, Sign};
pub use set::{StateSet, TargetSet};
pub use system::{
    orbit, validate_system, CostModel, Metric, Peers, RawCostModel, State, SystemParts, SystemSpec, ValidationReport,
    Violation,
};

/// Dense index into a system's state table.
pub type StateId = usize;
