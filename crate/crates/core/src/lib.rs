//! Controlled attracting basins and their robustness counterparts for finite
//! dynamical systems given by partial maps on sets with cost functions.
//!
//! A step from a state `u` chooses a jump target `w ∈ dom F`, pays `cost(u, w)`
//! and lands at `F(w)`. Budgets are either a per-step bound
//! ([`BudgetMode::MaxPerStep`]) or a bound on the total spent
//! ([`BudgetMode::TotalSum`]).

pub mod basins;
pub mod ensemble;
mod error;
pub mod export;
pub mod model;
pub mod reachability;
pub mod timeext;

pub use error::{Error, Result};
pub use model::{Cost, EpsIndex, Sign, StateId, StateSet, SystemSpec, TargetSet};
pub use reachability::BudgetMode;
