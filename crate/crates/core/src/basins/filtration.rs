use std::fmt;

use super::{basin_at, debut_field, BasinResult, Semantics};
use crate::model::{Cost, EpsIndex, StateId, StateSet, SystemSpec, TargetSet};
use crate::reachability::BudgetMode;

/// Signed indices at which basins can change in max mode:
/// `(neg,∞), (neg,c)… descending, (neg,0), (pos,0), (pos,c)… ascending, (pos,∞)`.
pub fn full_grid(spec: &SystemSpec) -> Vec<EpsIndex> {
    let costs = auto_grid(spec);
    let mut grid = vec![EpsIndex::neg(Cost::INFINITY)];
    grid.extend(costs.iter().rev().map(|&c| EpsIndex::neg(c)));
    grid.extend(costs.iter().map(|&c| EpsIndex::pos(c)));
    grid.push(EpsIndex::pos(Cost::INFINITY));
    grid
}

/// Distinct finite pairwise costs plus `0`, ascending.
pub fn auto_grid(spec: &SystemSpec) -> Vec<Cost> {
    spec.finite_pairwise_costs()
}

/// The auto grid plus every finite debut magnitude of the targets in both
/// modes, ascending. Sum-mode basins change only at these values.
pub fn transition_grid(spec: &SystemSpec, targets: &[&TargetSet]) -> Vec<Cost> {
    let mut grid = auto_grid(spec);
    for target in targets {
        for mode in BudgetMode::ALL {
            grid.extend(debut_field(spec, target, mode).iter().map(|v| v.magnitude()).filter(|m| m.is_finite()));
        }
    }
    grid.sort();
    grid.dedup();
    grid
}

/// `grid` with the midpoint of every consecutive pair inserted.
pub fn with_midpoints(grid: &[Cost]) -> Vec<Cost> {
    let mut out = Vec::with_capacity(2 * grid.len());
    for (i, &c) in grid.iter().enumerate() {
        out.push(c);
        if let Some(&next) = grid.get(i + 1) {
            if c.is_finite() && next.is_finite() {
                out.push(Cost::of((c.value() + next.value()) / 2.0));
            }
        }
    }
    out
}

/// Basins at every grid index, dead-end semantics on the negative side.
pub fn assemble_filtration(spec: &SystemSpec, target: &TargetSet, grid: &[EpsIndex], mode: BudgetMode) -> Vec<BasinResult> {
    debug_assert!(grid.windows(2).all(|w| w[0] <= w[1]), "grid must be sorted");
    grid.iter().map(|&index| basin_at(spec, target, index, mode, Semantics::DeadEnd)).collect()
}

/// First failure of the filtration property.
#[derive(Clone, Debug, PartialEq)]
pub enum FiltrationViolation {
    /// A basin at `lower` has members missing from the basin at `upper`.
    NotNested { lower: EpsIndex, upper: EpsIndex, witnesses: Vec<StateId> },
    /// The union of all basins misses these states.
    Uncovered(Vec<StateId>),
}

impl fmt::Display for FiltrationViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiltrationViolation::NotNested { lower, upper, witnesses } => {
                write!(f, "basin at {lower} is not contained in basin at {upper}: states {witnesses:?}")
            }
            FiltrationViolation::Uncovered(states) => write!(f, "union of basins misses states {states:?}"),
        }
    }
}

/// Checks that consecutive basins are nested and that they cover `universe`.
pub fn check_filtration(results: &[BasinResult], universe: &StateSet) -> Result<(), FiltrationViolation> {
    for pair in results.windows(2) {
        let extra = pair[0].members.difference(&pair[1].members);
        if !extra.is_empty() {
            return Err(FiltrationViolation::NotNested { lower: pair[0].index, upper: pair[1].index, witnesses: extra.to_vec() });
        }
    }
    let mut union = StateSet::empty(universe.universe());
    for r in results {
        union.union_with(&r.members);
    }
    let missing = universe.difference(&union);
    if missing.is_empty() {
        Ok(())
    } else {
        Err(FiltrationViolation::Uncovered(missing.to_vec()))
    }
}

/// Whether the basins over the full grid form a filtration. They always do
/// when `A` meets `Im F`; otherwise every basin lies inside `A`, so they do
/// exactly when `A = Y`.
pub fn predicted_filtration(spec: &SystemSpec, target: &TargetSet) -> bool {
    !target.is_disjoint(&spec.image()) || target.len() == spec.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abs_system(successor: Vec<Option<usize>>) -> SystemSpec {
        SystemSpec::with_cost_fn(successor, |x, y| Cost::of((x as f64 - y as f64).abs())).unwrap()
    }

    #[test]
    fn grid_layout() {
        let spec = abs_system(vec![Some(0), Some(1), Some(1)]);
        let text: Vec<String> = full_grid(&spec).iter().map(|i| i.to_string()).collect();
        assert_eq!(text, ["-inf", "-2", "-1", "-0", "0", "1", "2", "inf"]);
    }

    #[test]
    fn target_meeting_image_gives_filtration() {
        let spec = abs_system(vec![Some(0), Some(1), Some(1)]);
        let g = StateSet::from_ids(3, [1]);
        assert!(predicted_filtration(&spec, &g));
        for mode in BudgetMode::ALL {
            let results = assemble_filtration(&spec, &g, &full_grid(&spec), mode);
            assert_eq!(check_filtration(&results, &spec.all_states()), Ok(()));
        }
    }

    #[test]
    fn target_outside_image_is_not_a_filtration() {
        let spec = abs_system(vec![Some(0), Some(0), Some(1)]);
        let a = StateSet::from_ids(3, [2]);
        assert!(!predicted_filtration(&spec, &a));
        for mode in BudgetMode::ALL {
            let results = assemble_filtration(&spec, &a, &full_grid(&spec), mode);
            assert_eq!(check_filtration(&results, &spec.all_states()), Err(FiltrationViolation::Uncovered(vec![0, 1])));
        }
    }

    #[test]
    fn swapped_order_is_reported() {
        let spec = abs_system(vec![Some(0), Some(1), Some(1)]);
        let g = StateSet::from_ids(3, [1]);
        let grid = [EpsIndex::pos(Cost::ZERO), EpsIndex::pos(Cost::of(1.0))];
        let mut results = assemble_filtration(&spec, &g, &grid, BudgetMode::MaxPerStep);
        results.swap(0, 1);
        match check_filtration(&results, &spec.all_states()) {
            Err(FiltrationViolation::NotNested { lower, witnesses, .. }) => {
                assert_eq!(lower, EpsIndex::pos(Cost::of(1.0)));
                assert_eq!(witnesses, vec![0]);
            }
            other => panic!("unexpected {other:?}"),
        }
        let single = assemble_filtration(&spec, &g, &grid[..1], BudgetMode::MaxPerStep);
        assert!(matches!(check_filtration(&single, &spec.all_states()), Err(FiltrationViolation::Uncovered(_))));
    }

    #[test]
    fn transition_grid_adds_sum_debuts() {
        let xs: [f64; 5] = [0.0, 1.0, 1.5, 2.5, 9.0];
        let spec = SystemSpec::with_cost_fn(vec![None, Some(2), None, Some(4), None], |a, b| Cost::of((xs[a] - xs[b]).abs())).unwrap();
        let a = StateSet::from_ids(5, [4]);
        let auto = auto_grid(&spec);
        let grid = transition_grid(&spec, &[&a]);
        assert!(!auto.contains(&Cost::of(2.0)));
        assert!(grid.contains(&Cost::of(2.0)));
        assert!(auto.iter().all(|c| grid.contains(c)));
    }

    #[test]
    fn midpoints_between_finite_values() {
        let grid = [Cost::ZERO, Cost::of(1.0), Cost::of(3.0), Cost::INFINITY];
        let expected = [0.0, 0.5, 1.0, 2.0, 3.0].map(Cost::of).into_iter().chain([Cost::INFINITY]).collect::<Vec<_>>();
        assert_eq!(with_midpoints(&grid), expected);
    }
}
