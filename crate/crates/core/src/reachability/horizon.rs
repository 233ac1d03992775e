//! Exact-horizon relations: terminal states of controlled paths of length
//! exactly `n`, whether or not they are dead ends.

use std::collections::HashSet;

use super::BudgetMode;
use crate::model::{Cost, StateId, StateSet, SystemSpec, TargetSet};

/// The sequence `R_0(y), R_1(y), …` of exact-horizon terminal sets.
///
/// Each frontier records, per state, the least weight spent reaching it in
/// exactly `n` jumps. In max mode only membership matters, so spent weights are
/// flattened to zero.
pub struct HorizonFrontiers<'a> {
    spec: &'a SystemSpec,
    eps: Cost,
    mode: BudgetMode,
    current: Vec<Option<Cost>>,
}

impl<'a> HorizonFrontiers<'a> {
    pub fn new(spec: &'a SystemSpec, y: StateId, eps: Cost, mode: BudgetMode) -> Self {
        let mut current = vec![None; spec.len()];
        current[y] = Some(Cost::ZERO);
        HorizonFrontiers { spec, eps, mode, current }
    }

    /// The current frontier `R_n` as a set.
    pub fn terminals(&self) -> StateSet {
        StateSet::from_predicate(self.spec.len(), |s| self.current[s].is_some())
    }

    fn key(&self) -> &[Option<Cost>] {
        &self.current
    }

    /// Advances from `R_n` to `R_{n+1}`.
    pub fn advance(&mut self) {
        let spec = self.spec;
        let with_infinite = self.eps.is_infinite();
        let mut next: Vec<Option<Cost>> = vec![None; spec.len()];
        for (u, spent) in self.current.iter().enumerate() {
            let Some(spent) = *spent else { continue };
            for w in spec.jump_targets(u, !with_infinite) {
                let total = self.mode.extend(spent, spec.cost(u, w));
                if total > self.eps {
                    continue;
                }
                let total = match self.mode {
                    BudgetMode::MaxPerStep => Cost::ZERO,
                    BudgetMode::TotalSum => total,
                };
                let v = spec.successor(w).unwrap();
                if next[v].is_none_or(|old| total < old) {
                    next[v] = Some(total);
                }
            }
        }
        self.current = next;
    }
}

/// `R_n(y, eps)`: terminal states of affordable controlled paths of length
/// exactly `n`. `R_0 = {y}`.
pub fn exact_horizon_terminals(spec: &SystemSpec, y: StateId, n: usize, eps: Cost, mode: BudgetMode) -> StateSet {
    let mut frontiers = HorizonFrontiers::new(spec, y, eps, mode);
    for _ in 0..n {
        frontiers.advance();
    }
    frontiers.terminals()
}

/// `∅ ≠ R_n(y, eps) ⊆ A`.
pub fn forall_reach_at_horizon(spec: &SystemSpec, y: StateId, target: &TargetSet, eps: Cost, n: usize, mode: BudgetMode) -> bool {
    let terminals = exact_horizon_terminals(spec, y, n, eps, mode);
    !terminals.is_empty() && terminals.is_subset(target)
}

/// `R_n(y, eps) ∩ A ≠ ∅`.
pub fn exists_reach_at_horizon(spec: &SystemSpec, y: StateId, target: &TargetSet, eps: Cost, n: usize, mode: BudgetMode) -> bool {
    !exact_horizon_terminals(spec, y, n, eps, mode).is_disjoint(target)
}

/// `R_n(y, eps) ⊆ A` for every `n` with `R_n` nonempty.
///
/// Iterates frontiers until one repeats; the sequence is eventually periodic
/// because spent weights are bounded sums of finitely many edge costs.
pub fn forall_reach_all_horizons(spec: &SystemSpec, y: StateId, target: &TargetSet, eps: Cost, mode: BudgetMode) -> bool {
    let mut frontiers = HorizonFrontiers::new(spec, y, eps, mode);
    let mut seen: HashSet<Vec<Option<Cost>>> = HashSet::new();
    loop {
        let terminals = frontiers.terminals();
        if terminals.is_empty() {
            return true;
        }
        if !terminals.is_subset(target) {
            return false;
        }
        if !seen.insert(frontiers.key().to_vec()) {
            return true;
        }
        frontiers.advance();
    }
}
