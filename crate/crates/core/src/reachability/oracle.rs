//! Exhaustive reachability oracle for small systems.

use super::BudgetMode;
use crate::error::{Error, Result};
use crate::model::{Cost, StateId, SystemSpec, TargetSet};

pub const DEFAULT_ORACLE_BOUND: usize = 12;

/// Expands controlled paths depth by depth up to `horizon_cap` jumps (default
/// `|Y|`), keeping the least weight per terminal state at each depth. Every
/// pair `(u, w)` is evaluated directly from the cost function.
pub fn brute_force_reach(
    spec: &SystemSpec,
    y: StateId,
    target: &TargetSet,
    eps: Cost,
    mode: BudgetMode,
    horizon_cap: Option<usize>,
) -> Result<bool> {
    brute_force_reach_bounded(spec, y, target, eps, mode, horizon_cap, DEFAULT_ORACLE_BOUND)
}

pub fn brute_force_reach_bounded(
    spec: &SystemSpec,
    y: StateId,
    target: &TargetSet,
    eps: Cost,
    mode: BudgetMode,
    horizon_cap: Option<usize>,
    bound: usize,
) -> Result<bool> {
    let n = spec.len();
    if n > bound {
        return Err(Error::TooLarge { states: n, bound });
    }
    let cap = horizon_cap.unwrap_or(n);
    if cap < n {
        return Err(Error::Precondition(format!("horizon cap {cap} below state count {n}")));
    }
    let mut layer: Vec<Option<Cost>> = vec![None; n];
    layer[y] = Some(Cost::ZERO);
    for depth in 0..=cap {
        if (0..n).any(|s| layer[s].is_some() && target.contains(s)) {
            return Ok(true);
        }
        if depth == cap {
            break;
        }
        let mut next: Vec<Option<Cost>> = vec![None; n];
        for (u, spent) in layer.iter().enumerate() {
            let Some(spent) = *spent else { continue };
            for w in 0..n {
                let Some(v) = spec.successor(w) else { continue };
                let total = mode.extend(spent, spec.cost(u, w));
                if total <= eps && next[v].is_none_or(|old| total < old) {
                    next[v] = Some(total);
                }
            }
        }
        layer = next;
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::StateSet;

    #[test]
    fn trivial_cases() {
        let single = SystemSpec::with_cost_fn(vec![None], |_, _| Cost::ZERO).unwrap();
        let a = StateSet::from_ids(1, [0]);
        assert!(brute_force_reach(&single, 0, &a, Cost::ZERO, BudgetMode::MaxPerStep, None).unwrap());
        assert!(!brute_force_reach(&single, 0, &StateSet::empty(1), Cost::INFINITY, BudgetMode::TotalSum, None).unwrap());
    }

    #[test]
    fn rejects_large_systems() {
        let spec = SystemSpec::with_cost_fn(vec![None; 13], |x, y| Cost::of((x as f64 - y as f64).abs())).unwrap();
        let a = StateSet::from_ids(13, [1]);
        assert!(matches!(
            brute_force_reach(&spec, 0, &a, Cost::ZERO, BudgetMode::MaxPerStep, None),
            Err(Error::TooLarge { states: 13, bound: 12 })
        ));
        assert!(brute_force_reach_bounded(&spec, 0, &a, Cost::ZERO, BudgetMode::MaxPerStep, None, 20).is_ok());
    }
}
