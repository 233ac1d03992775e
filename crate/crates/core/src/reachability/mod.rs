//! Controlled-path relations.
//!
//! One step from a state `u` picks a jump target `w ∈ dom F`, pays
//! `cost(u, w)` and lands at `F(w)`. A path of length zero stays at its initial
//! state. Under [`BudgetMode::MaxPerStep`] a path is affordable when every jump
//! costs at most `eps`; under [`BudgetMode::TotalSum`] when the jumps cost at
//! most `eps` in total, every jump charged once.

mod horizon;
mod oracle;
pub(crate) mod search;

use serde::{Deserialize, Serialize};

use crate::model::{Cost, StateId, StateSet, SystemSpec, TargetSet};
use search::Direction;

pub use horizon::{
    exact_horizon_terminals, exists_reach_at_horizon, forall_reach_all_horizons, forall_reach_at_horizon, HorizonFrontiers,
};
pub use oracle::{brute_force_reach, brute_force_reach_bounded, DEFAULT_ORACLE_BOUND};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BudgetMode {
    /// Each jump costs at most the budget (bottleneck path weight).
    MaxPerStep,
    /// All jumps together cost at most the budget (additive path weight).
    TotalSum,
}

impl BudgetMode {
    pub const ALL: [BudgetMode; 2] = [BudgetMode::MaxPerStep, BudgetMode::TotalSum];

    /// Weight of a path extended by one jump.
    pub fn extend(self, acc: Cost, step: Cost) -> Cost {
        match self {
            BudgetMode::MaxPerStep => acc.max(step),
            BudgetMode::TotalSum => acc + step,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            BudgetMode::MaxPerStep => "max",
            BudgetMode::TotalSum => "sum",
        }
    }
}

impl std::str::FromStr for BudgetMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "max" => Ok(BudgetMode::MaxPerStep),
            "sum" => Ok(BudgetMode::TotalSum),
            other => Err(format!("unknown budget mode {other:?} (expected max or sum)")),
        }
    }
}

/// One jump of a controlled path.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Control {
    pub target: StateId,
    pub cost: Cost,
}

/// `(y; y₀, …, y_{n−1}; F(y_{n−1}))`. A path without controls is the
/// zero-length marker, whose terminal equals its initial state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ControlledPath {
    pub initial: StateId,
    pub controls: Vec<Control>,
    pub terminal: StateId,
}

impl ControlledPath {
    pub fn zero_length(y: StateId) -> Self {
        ControlledPath { initial: y, controls: Vec::new(), terminal: y }
    }

    pub fn len(&self) -> usize {
        self.controls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.controls.is_empty()
    }

    pub fn weight(&self, mode: BudgetMode) -> Cost {
        self.controls.iter().fold(Cost::ZERO, |acc, c| mode.extend(acc, c.cost))
    }

    /// Checks that every jump target is in `dom F`, that recorded costs match
    /// the system, and that the terminal is the image of the last jump.
    pub fn is_consistent(&self, spec: &SystemSpec) -> bool {
        let mut current = self.initial;
        for control in &self.controls {
            let Some(next) = spec.successor(control.target) else {
                return false;
            };
            if spec.cost(current, control.target) != control.cost {
                return false;
            }
            current = next;
        }
        current == self.terminal
    }
}

fn singleton(spec: &SystemSpec, y: StateId) -> StateSet {
    StateSet::from_ids(spec.len(), [y])
}

/// `y ⇀ A` under budget `eps`: either `y ∈ A` or some controlled path from `y`
/// of affordable weight terminates in `A`.
pub fn exists_reach(spec: &SystemSpec, y: StateId, target: &TargetSet, eps: Cost, mode: BudgetMode) -> bool {
    target.contains(y) || !reach_set(spec, y, eps, mode).is_disjoint(target)
}

/// Every state `y′` with `y ⇀ {y′}` under budget `eps`; always contains `y`.
pub fn reach_set(spec: &SystemSpec, y: StateId, eps: Cost, mode: BudgetMode) -> StateSet {
    search::budget_reach(spec, &singleton(spec, y), Direction::Forward, eps, mode)
}

/// The reachable dead ends: `reach_set ∩ (Y − dom F)`.
pub fn deadend_reach_set(spec: &SystemSpec, y: StateId, eps: Cost, mode: BudgetMode) -> StateSet {
    reach_set(spec, y, eps, mode).intersection(&spec.dead_ends())
}

/// Every state that reaches `target` under budget `eps`; the backward
/// counterpart of [`exists_reach`].
pub fn reaching_set(spec: &SystemSpec, target: &TargetSet, eps: Cost, mode: BudgetMode) -> StateSet {
    search::budget_reach(spec, target, Direction::Backward, eps, mode)
}

/// A cheapest controlled path from `y` into `target`, if one fits the budget.
///
/// Minimises the bottleneck (max mode) or total (sum mode) weight, then the
/// length, then the jump targets lexicographically. Returns the zero-length
/// marker when `y ∈ target`.
pub fn witness_path(spec: &SystemSpec, y: StateId, target: &TargetSet, eps: Cost, mode: BudgetMode) -> Option<ControlledPath> {
    if target.contains(y) {
        return Some(ControlledPath::zero_length(y));
    }
    let finite_best = match mode {
        BudgetMode::MaxPerStep => search::shortest(spec, target, Direction::Backward, mode, Cost::INFINITY)[y],
        BudgetMode::TotalSum => None,
    };
    match mode {
        BudgetMode::MaxPerStep => {
            let bound = match finite_best {
                Some(b) => b,
                None if eps.is_infinite() && reaching_set(spec, target, eps, mode).contains(y) => Cost::INFINITY,
                None => return None,
            };
            if bound > eps {
                return None;
            }
            let hops = search::threshold_hops(spec, target, Direction::Backward, bound);
            Some(greedy_path(spec, y, |cur, w, c| {
                let h = hops[cur].unwrap();
                c <= bound && hops[spec.successor(w).unwrap()] == Some(h - 1)
            }, |cur| hops[cur] == Some(0), bound.is_infinite()))
        }
        BudgetMode::TotalSum => {
            let labels = search::shortest_with_hops(spec, target, Direction::Backward);
            match labels[y] {
                Some((total, _)) => {
                    if total > eps {
                        return None;
                    }
                    Some(greedy_path(spec, y, |cur, w, c| {
                        let (s, h) = labels[cur].unwrap();
                        c.is_finite()
                            && labels[spec.successor(w).unwrap()].is_some_and(|(s2, h2)| c + s2 == s && h2 + 1 == h)
                    }, |cur| labels[cur].is_some_and(|(_, h)| h == 0), false))
                }
                None if eps.is_infinite() && reaching_set(spec, target, eps, mode).contains(y) => {
                    // every affordable path crosses an infinite edge; prefer the shortest
                    let hops = search::threshold_hops(spec, target, Direction::Backward, Cost::INFINITY);
                    Some(greedy_path(spec, y, |cur, w, _| {
                        hops[spec.successor(w).unwrap()] == Some(hops[cur].unwrap() - 1)
                    }, |cur| hops[cur] == Some(0), true))
                }
                None => None,
            }
        }
    }
}

/// Walks forward from `y`, always taking the smallest admissible jump target.
fn greedy_path(
    spec: &SystemSpec,
    y: StateId,
    admissible: impl Fn(StateId, StateId, Cost) -> bool,
    done: impl Fn(StateId) -> bool,
    with_infinite: bool,
) -> ControlledPath {
    let mut controls = Vec::new();
    let mut current = y;
    // the first step is mandatory: y itself is outside the target
    loop {
        let next = spec
            .jump_targets(current, !with_infinite)
            .map(|w| (w, spec.cost(current, w)))
            .find(|&(w, c)| admissible(current, w, c))
            .expect("witness labels admit a continuation");
        controls.push(Control { target: next.0, cost: next.1 });
        current = spec.successor(next.0).unwrap();
        if done(current) {
            break;
        }
    }
    ControlledPath { initial: y, controls, terminal: current }
}
