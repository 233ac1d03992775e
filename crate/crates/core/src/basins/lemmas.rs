//! Runtime checks of the inclusion and debut inequalities between basins.

use std::fmt;

use super::{basin_neg, basin_pos, basin_zero_robust, debut_field, DebutValue, Semantics};
use crate::model::{Cost, StateId, StateSet, SystemSpec, TargetSet};
use crate::reachability::BudgetMode;

#[derive(Clone, Debug, PartialEq)]
pub struct LemmaViolation {
    pub lemma: &'static str,
    pub detail: String,
    pub witnesses: Vec<StateId>,
}

impl fmt::Display for LemmaViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} (states {:?})", self.lemma, self.detail, self.witnesses)
    }
}

/// Outcome of a batch of lemma instances.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LemmaReport {
    pub checked: usize,
    pub violations: Vec<LemmaViolation>,
    /// Lemma instances not checked, with the reason.
    pub skipped: Vec<String>,
}

impl LemmaReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }

    fn subset(&mut self, lemma: &'static str, detail: impl FnOnce() -> String, small: &StateSet, large: &StateSet) {
        self.checked += 1;
        let extra = small.difference(large);
        if !extra.is_empty() {
            self.violations.push(LemmaViolation { lemma, detail: detail(), witnesses: extra.to_vec() });
        }
    }

    fn equal(&mut self, lemma: &'static str, detail: impl Fn() -> String, a: &StateSet, b: &StateSet) {
        self.subset(lemma, &detail, a, b);
        self.subset(lemma, &detail, b, a);
        self.checked -= 1;
    }
}

/// Checks, at every sampled budget:
/// sum basins inside max basins; `A_{F,−ε} ⊆ A_{F,−ε_Σ} ⊆ A_{F,−0} ⊆ A_{F,0} = A_{F,0_Σ}`;
/// equality of the zero-level basins when `A` holds only dead ends; and
/// monotonicity in the budget on both sides.
pub fn check_inclusion_lemmas(spec: &SystemSpec, target: &TargetSet, eps_samples: &[Cost]) -> LemmaReport {
    let mut report = LemmaReport::default();
    let robust = basin_zero_robust(spec, target).members;
    let zero_max = basin_pos(spec, target, Cost::ZERO, BudgetMode::MaxPerStep).members;
    let zero_sum = basin_pos(spec, target, Cost::ZERO, BudgetMode::TotalSum).members;
    report.equal("zero-level basins", || "A_{F,0} = A_{F,0_Σ}".into(), &zero_max, &zero_sum);
    report.subset("zero-level basins", || "A_{F,−0} ⊆ A_{F,0}".into(), &robust, &zero_max);
    if target.is_subset(&spec.dead_ends()) {
        report.equal("dead-end target", || "A_{F,−0} = A_{F,0}".into(), &robust, &zero_max);
    }

    let mut samples: Vec<Cost> = eps_samples.to_vec();
    samples.sort();
    samples.dedup();
    let mut previous: Option<(Cost, [StateSet; 4])> = None;
    for &eps in &samples {
        let pos_max = basin_pos(spec, target, eps, BudgetMode::MaxPerStep).members;
        let pos_sum = basin_pos(spec, target, eps, BudgetMode::TotalSum).members;
        let neg_max = basin_neg(spec, target, eps, BudgetMode::MaxPerStep, Semantics::DeadEnd).members;
        let neg_sum = basin_neg(spec, target, eps, BudgetMode::TotalSum, Semantics::DeadEnd).members;
        report.subset("sum inside max", || format!("A_{{F,{eps}_Σ}} ⊆ A_{{F,{eps}}}"), &pos_sum, &pos_max);
        report.subset("negative chain", || format!("A_{{F,−{eps}}} ⊆ A_{{F,−{eps}_Σ}}"), &neg_max, &neg_sum);
        report.subset("negative chain", || format!("A_{{F,−{eps}_Σ}} ⊆ A_{{F,−0}}"), &neg_sum, &robust);
        if let Some((low, [pm, ps, nm, ns])) = &previous {
            report.subset("monotonicity", || format!("A_{{F,{low}}} ⊆ A_{{F,{eps}}}"), pm, &pos_max);
            report.subset("monotonicity", || format!("A_{{F,{low}_Σ}} ⊆ A_{{F,{eps}_Σ}}"), ps, &pos_sum);
            report.subset("monotonicity", || format!("A_{{F,−{eps}}} ⊆ A_{{F,−{low}}}"), &neg_max, nm);
            report.subset("monotonicity", || format!("A_{{F,−{eps}_Σ}} ⊆ A_{{F,−{low}_Σ}}"), &neg_sum, ns);
        }
        previous = Some((eps, [pos_max, pos_sum, neg_max, neg_sum]));
    }
    report
}

/// Checks the debut inequalities at every state:
/// `0 ≤ ε̲ ≤ ε̲_Σ` outside `A_{F,0}`, `0 ≥ ε̲ ≥ ε̲_Σ` inside it, and the
/// corresponding comparisons between `y` and `F(y)`.
///
/// The comparison with `F(y)` when `F(y) ∈ A_{F,0}` assumes that distinct
/// states are never at cost zero from each other; on systems with such pairs
/// it is skipped and listed in the report.
pub fn check_debut_lemmas(spec: &SystemSpec, target: &TargetSet) -> LemmaReport {
    let mut report = LemmaReport::default();
    let max = debut_field(spec, target, BudgetMode::MaxPerStep);
    let sum = debut_field(spec, target, BudgetMode::TotalSum);
    let zero = basin_pos(spec, target, Cost::ZERO, BudgetMode::MaxPerStep).members;
    let zero_pairs = spec.has_distinct_zero_cost_pair();
    if zero_pairs {
        report.skipped.push("debut along orbits into A_{F,0}: the cost has distinct states at distance zero".into());
    }
    let show = |v: DebutValue| v.to_string();
    let fail = |report: &mut LemmaReport, lemma: &'static str, ok: bool, y: StateId, detail: String| {
        report.checked += 1;
        if !ok {
            report.violations.push(LemmaViolation { lemma, detail, witnesses: vec![y] });
        }
    };
    for y in 0..spec.len() {
        let (m, s) = (max[y].signed(), sum[y].signed());
        if zero.contains(y) {
            fail(&mut report, "debut sign", 0.0 >= m && m >= s, y, format!("0 ≥ {} ≥ {}", show(max[y]), show(sum[y])));
        } else {
            fail(&mut report, "debut sign", 0.0 <= m && m <= s, y, format!("0 ≤ {} ≤ {}", show(max[y]), show(sum[y])));
        }
        let Some(fy) = spec.successor(y) else { continue };
        let (fm, fs) = (max[fy].signed(), sum[fy].signed());
        if !zero.contains(fy) {
            fail(&mut report, "debut along orbits", m <= fm, y, format!("{} ≤ {} at F(y) = {fy}", show(max[y]), show(max[fy])));
            fail(&mut report, "debut along orbits", s <= fs, y, format!("{} ≤ {} at F(y) = {fy} (sum)", show(sum[y]), show(sum[fy])));
        } else if !zero_pairs {
            fail(&mut report, "debut along orbits", 0.0 >= m && m >= fm, y, format!("0 ≥ {} ≥ {} at F(y) = {fy}", show(max[y]), show(max[fy])));
            fail(&mut report, "debut along orbits", 0.0 >= s && s >= fs, y, format!("0 ≥ {} ≥ {} at F(y) = {fy} (sum)", show(sum[y]), show(sum[fy])));
        }
    }
    report
}
