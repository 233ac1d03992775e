//! Time extensions of partial maps.
//!
//! For a partial map `f` on `X` and a window `[a, b]`, the extension lives on
//! `D_F = {(b−n, x) : f^n(x) defined}` with `F(t, x) = (t+1, f(x))` for `t < b`.
//! Cost is the base metric within a layer and `∞` across layers, so the dead
//! ends are exactly the final layer `{b} × X`.

use std::collections::HashMap;

use crate::basins::{basin_neg, basin_pos, Semantics};
use crate::error::{Error, Result};
use crate::model::{Cost, CostModel, Metric, State, StateId, StateSet, SystemSpec, TargetSet};
use crate::reachability::{exact_horizon_terminals, BudgetMode};

/// A partial map on finitely many points with coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct BaseSystem {
    pub labels: Vec<String>,
    pub coords: Vec<Vec<f64>>,
    pub map: Vec<Option<usize>>,
    pub metric: Metric,
}

impl BaseSystem {
    pub fn new(coords: Vec<Vec<f64>>, map: Vec<Option<usize>>, metric: Metric) -> Self {
        let labels = (0..coords.len()).map(|i| i.to_string()).collect();
        BaseSystem { labels, coords, map, metric }
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn distance(&self, x: usize, y: usize) -> Cost {
        if x == y {
            return Cost::ZERO;
        }
        Cost::of(self.metric.distance(&self.coords[x], &self.coords[y]))
    }

    /// Largest `n ≤ cap` with `f^n(x)` defined.
    pub fn survival(&self, x: usize, cap: usize) -> usize {
        let mut current = x;
        for n in 0..cap {
            match self.map[current] {
                Some(next) => current = next,
                None => return n,
            }
        }
        cap
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TimeWindow {
    pub a: i64,
    pub b: i64,
}

impl TimeWindow {
    pub fn new(a: i64, b: i64) -> Result<Self> {
        if a >= b {
            return Err(Error::EmptyWindow { a, b });
        }
        Ok(TimeWindow { a, b })
    }

    pub fn span(&self) -> usize {
        (self.b - self.a) as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TimedState {
    pub t: i64,
    pub base: usize,
}

/// A built extension together with the correspondence to base points.
#[derive(Clone, Debug)]
pub struct TimeExtension {
    pub spec: SystemSpec,
    pub timed: Vec<TimedState>,
    pub window: TimeWindow,
    pub base: BaseSystem,
    index: HashMap<TimedState, StateId>,
}

impl TimeExtension {
    pub fn state_of(&self, t: i64, base: usize) -> Option<StateId> {
        self.index.get(&TimedState { t, base }).copied()
    }

    pub fn final_layer(&self) -> StateSet {
        self.spec.dead_ends()
    }

    /// `{b} × A₂`.
    pub fn final_states(&self, base_points: impl IntoIterator<Item = usize>) -> StateSet {
        StateSet::from_ids(self.spec.len(), base_points.into_iter().map(|x| self.state_of(self.window.b, x).expect("final layer holds all of X")))
    }
}

/// Builds `(D_F, F, c_d)`. States are ordered by time, then base point.
pub fn build_time_extension(base: &BaseSystem, window: TimeWindow) -> Result<TimeExtension> {
    if window.a >= window.b {
        return Err(Error::EmptyWindow { a: window.a, b: window.b });
    }
    if base.is_empty() || base.map.iter().all(Option::is_none) {
        return Err(Error::NoSurvivingOrbit);
    }
    let span = window.span();
    let survival: Vec<usize> = (0..base.len()).map(|x| base.survival(x, span)).collect();
    let mut timed = Vec::new();
    for t in window.a..=window.b {
        let remaining = (window.b - t) as usize;
        timed.extend((0..base.len()).filter(|&x| survival[x] >= remaining).map(|x| TimedState { t, base: x }));
    }
    let index: HashMap<TimedState, StateId> = timed.iter().enumerate().map(|(id, &s)| (s, id)).collect();
    let successor = timed
        .iter()
        .map(|s| (s.t < window.b).then(|| index[&TimedState { t: s.t + 1, base: base.map[s.base].unwrap() }]))
        .collect();
    let states = timed
        .iter()
        .map(|s| State {
            label: Some(format!("{}@{}", base.labels[s.base], s.t)),
            coords: Some(base.coords[s.base].clone()),
            layer: Some(s.t),
        })
        .collect();
    let spec = SystemSpec::new(states, successor, CostModel::Layered(base.metric)).map_err(Error::Invalid)?;
    Ok(TimeExtension { spec, timed, window, base: base.clone(), index })
}

/// Exact-horizon terminal base points of `n` jumps from `x` at time `b − n`.
///
/// With `survival_aware`, a jump at time `t` may only target points whose
/// orbit lasts until `b`, matching the states present in `D_F`. Without it,
/// every point of `dom f` is a jump target.
pub fn base_horizon_terminals(base: &BaseSystem, x: usize, n: usize, eps: Cost, mode: BudgetMode, survival_aware: bool) -> Vec<usize> {
    let with_infinite = eps.is_infinite();
    let mut frontier: Vec<Option<Cost>> = vec![None; base.len()];
    frontier[x] = Some(Cost::ZERO);
    for step in 0..n {
        let remaining = n - step;
        let mut next: Vec<Option<Cost>> = vec![None; base.len()];
        for (u, spent) in frontier.iter().enumerate() {
            let Some(spent) = *spent else { continue };
            for w in 0..base.len() {
                let Some(fw) = base.map[w] else { continue };
                if survival_aware && base.survival(w, remaining) < remaining {
                    continue;
                }
                let c = base.distance(u, w);
                if c.is_infinite() && !with_infinite {
                    continue;
                }
                let total = mode.extend(spent, c);
                if total <= eps && next[fw].is_none_or(|old| total < old) {
                    next[fw] = Some(total);
                }
            }
        }
        frontier = next;
    }
    (0..base.len()).filter(|&s| frontier[s].is_some()).collect()
}

/// One identity of the layer lemma that failed.
#[derive(Clone, Debug, PartialEq)]
pub struct LayerMismatch {
    pub identity: &'static str,
    pub states: Vec<StateId>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct LayerLemmaReport {
    pub checked: usize,
    pub mismatches: Vec<LayerMismatch>,
    pub skipped: Vec<String>,
}

impl LayerLemmaReport {
    pub fn holds(&self) -> bool {
        self.mismatches.is_empty()
    }

    fn compare(&mut self, identity: &'static str, a: &StateSet, b: &StateSet) {
        self.checked += 1;
        let diff = a.difference(b).union(&b.difference(a));
        if !diff.is_empty() {
            self.mismatches.push(LayerMismatch { identity, states: diff.to_vec() });
        }
    }
}

/// Compares the basins of `A = {b} × A₂` on the extension with per-layer
/// exact-horizon relations, both on the extension and on the base map.
///
/// The base-map side uses survival-aware jumps; see [`base_horizon_terminals`].
/// At `eps = 0` on data with coincident points the robust basin and the
/// universal horizon relation differ, so the negative identities are skipped.
pub fn check_layer_lemma(ext: &TimeExtension, a2: &[usize], eps: Cost, mode: BudgetMode) -> LayerLemmaReport {
    let spec = &ext.spec;
    let target = ext.final_states(a2.iter().copied());
    let in_a2 = |x: &usize| a2.contains(x);
    let n_of = |id: StateId| (ext.window.b - ext.timed[id].t) as usize;
    let mut report = LayerLemmaReport::default();

    let positive = basin_pos(spec, &target, eps, mode).members;
    let ext_exists = StateSet::from_predicate(spec.len(), |y| {
        !exact_horizon_terminals(spec, y, n_of(y), eps, mode).is_disjoint(&target)
    });
    let base_exists = StateSet::from_predicate(spec.len(), |y| {
        base_horizon_terminals(&ext.base, ext.timed[y].base, n_of(y), eps, mode, true).iter().any(in_a2)
    });
    report.compare("positive basin = extension horizon relation", &positive, &ext_exists);
    report.compare("positive basin = base horizon relation", &positive, &base_exists);

    if eps.is_zero() && spec.has_distinct_zero_cost_pair() {
        report.skipped.push("negative identities at eps = 0: coincident points make the cost a pseudometric".into());
        return report;
    }
    let negative = basin_neg(spec, &target, eps, mode, Semantics::DeadEnd).members;
    let ext_forall = StateSet::from_predicate(spec.len(), |y| {
        let r = exact_horizon_terminals(spec, y, n_of(y), eps, mode);
        !r.is_empty() && r.is_subset(&target)
    });
    let base_forall = StateSet::from_predicate(spec.len(), |y| {
        let r = base_horizon_terminals(&ext.base, ext.timed[y].base, n_of(y), eps, mode, true);
        !r.is_empty() && r.iter().all(in_a2)
    });
    report.compare("negative basin = extension horizon relation", &negative, &ext_forall);
    report.compare("negative basin = base horizon relation", &negative, &base_forall);
    report
}

/// `G_{F,ε}` against `B_{F,−ε}` for arbitrary disjoint targets.
#[derive(Clone, Debug, PartialEq)]
pub struct DichotomyComparison {
    pub good: StateSet,
    pub bad: StateSet,
    /// `G_{F,ε} ∩ B_{F,−ε}`.
    pub overlap: StateSet,
    /// `Y − (G_{F,ε} ∪ B_{F,−ε})`.
    pub uncovered: StateSet,
}

impl DichotomyComparison {
    pub fn is_partition(&self) -> bool {
        self.overlap.is_empty() && self.uncovered.is_empty()
    }
}

pub fn compare_dichotomy(
    spec: &SystemSpec,
    good: &TargetSet,
    bad: &TargetSet,
    eps: Cost,
    mode: BudgetMode,
    semantics: Semantics,
) -> DichotomyComparison {
    let g = basin_pos(spec, good, eps, mode).members;
    let b = basin_neg(spec, bad, eps, mode, semantics).members;
    let overlap = g.intersection(&b);
    let uncovered = g.union(&b).complement();
    DichotomyComparison { good: g, bad: b, overlap, uncovered }
}

/// Whether `G` and `B` partition the dead ends.
pub fn partitions_dead_ends(spec: &SystemSpec, good: &TargetSet, bad: &TargetSet) -> bool {
    good.is_disjoint(bad) && good.union(bad) == spec.dead_ends()
}

/// `G_{F,ε} ⊔ B_{F,−ε} = D_F` for a partition `G ⊔ B` of the final layer.
pub fn check_separation(spec: &SystemSpec, good: &TargetSet, bad: &TargetSet, eps: Cost, mode: BudgetMode) -> Result<DichotomyComparison> {
    if !partitions_dead_ends(spec, good, bad) {
        return Err(Error::Precondition("G and B must partition the dead ends".into()));
    }
    Ok(compare_dichotomy(spec, good, bad, eps, mode, Semantics::DeadEnd))
}

/// Outcome of one side of the covering check.
#[derive(Clone, Debug, PartialEq)]
pub enum CoveringVerdict {
    /// No orbit from `dom F` ends in the target.
    HypothesisNotMet,
    Holds,
    Fails { mode: BudgetMode, missing: Vec<StateId>, extra: Vec<StateId> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoveringReport {
    pub good: CoveringVerdict,
    pub bad: CoveringVerdict,
}

/// Union of positive basins of `target` over `grid` equals `Y − other`, in
/// both budget modes, whenever some orbit from `dom F` ends in `target`.
pub fn check_covering(spec: &SystemSpec, good: &TargetSet, bad: &TargetSet, grid: &[Cost]) -> Result<CoveringReport> {
    if !partitions_dead_ends(spec, good, bad) {
        return Err(Error::Precondition("G and B must partition the dead ends".into()));
    }
    let side = |target: &TargetSet, other: &TargetSet| {
        if !spec.domain().iter().any(|&w| orbit_ends_in(spec, w, target)) {
            return CoveringVerdict::HypothesisNotMet;
        }
        let expected = other.complement();
        for mode in BudgetMode::ALL {
            let mut union = StateSet::empty(spec.len());
            for &eps in grid {
                union.union_with(&basin_pos(spec, target, eps, mode).members);
            }
            if union != expected {
                return CoveringVerdict::Fails {
                    mode,
                    missing: expected.difference(&union).to_vec(),
                    extra: union.difference(&expected).to_vec(),
                };
            }
        }
        CoveringVerdict::Holds
    };
    Ok(CoveringReport { good: side(good, bad), bad: side(bad, good) })
}

fn orbit_ends_in(spec: &SystemSpec, w: StateId, target: &TargetSet) -> bool {
    let mut current = w;
    for _ in 0..=spec.len() {
        match spec.successor(current) {
            Some(next) => current = next,
            None => return target.contains(current),
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Tracks P: 0,0,0 and Q: 1,1,2 on a line; base point `3k + s` is step
    /// `s` of track `k`.
    fn two_tracks() -> TimeExtension {
        let xs = [0.0, 0.0, 0.0, 1.0, 1.0, 2.0];
        let coords = xs.iter().map(|&x| vec![x, 0.0]).collect();
        let map = vec![Some(1), Some(2), None, Some(4), Some(5), None];
        build_time_extension(&BaseSystem::new(coords, map, Metric::Euclidean), TimeWindow::new(0, 2).unwrap()).unwrap()
    }

    #[test]
    fn two_track_extension_shape() {
        let ext = two_tracks();
        assert_eq!(ext.spec.len(), 12);
        assert_eq!(ext.spec.dead_ends().len(), 6);
        assert_eq!(ext.final_layer(), ext.final_states(0..6));
        assert_eq!(ext.timed[0], TimedState { t: 0, base: 0 });
        assert_eq!(ext.timed[1], TimedState { t: 0, base: 3 });
        let start_p = ext.state_of(0, 0).unwrap();
        assert_eq!(ext.spec.successor(start_p), ext.state_of(1, 1));
        assert_eq!(ext.spec.cost(start_p, ext.state_of(0, 3).unwrap()), Cost::of(1.0));
        assert_eq!(ext.spec.cost(start_p, ext.state_of(1, 0).unwrap()), Cost::INFINITY);
    }

    #[test]
    fn fixed_point_extension() {
        let base = BaseSystem::new(vec![vec![0.0]], vec![Some(0)], Metric::Euclidean);
        let ext = build_time_extension(&base, TimeWindow::new(0, 1).unwrap()).unwrap();
        assert_eq!(ext.spec.len(), 2);
        assert_eq!(ext.spec.successor(0), Some(1));
        assert_eq!(ext.spec.successor(1), None);
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(TimeWindow::new(3, 3), Err(Error::EmptyWindow { a: 3, b: 3 })));
        let dead = BaseSystem::new(vec![vec![0.0], vec![1.0]], vec![None, None], Metric::Euclidean);
        assert!(matches!(build_time_extension(&dead, TimeWindow { a: 0, b: 2 }), Err(Error::NoSurvivingOrbit)));
        let base = BaseSystem::new(vec![vec![0.0]], vec![Some(0)], Metric::Euclidean);
        assert!(matches!(build_time_extension(&base, TimeWindow { a: 2, b: 1 }), Err(Error::EmptyWindow { .. })));
    }

    #[test]
    fn two_track_layer_lemma() {
        let ext = two_tracks();
        for mode in BudgetMode::ALL {
            for eps in [0.0, 0.5, 1.0, 1.5] {
                let report = check_layer_lemma(&ext, &[5], Cost::of(eps), mode);
                assert!(report.holds(), "eps {eps}: {:?}", report.mismatches);
            }
        }
        // zero budget: Q's orbit from time 0, plus the free jump between Q's
        // coincident first two points at time 1
        let zero = basin_pos(&ext.spec, &ext.final_states([5]), Cost::ZERO, BudgetMode::MaxPerStep).members;
        let expected = [(0, 3), (1, 3), (1, 4), (2, 5)].map(|(t, x)| ext.state_of(t, x).unwrap());
        assert_eq!(zero.to_vec(), expected.to_vec());
    }

    #[test]
    fn literal_base_relation_ignores_dying_orbits() {
        // p: (0,0) → (0,0) → (5,0); q: (100,0) → (5.05,0) → (200,0)
        let coords = vec![vec![0.0, 0.0], vec![0.0, 0.0], vec![5.0, 0.0], vec![100.0, 0.0], vec![5.05, 0.0], vec![200.0, 0.0]];
        let base = BaseSystem::new(coords, vec![Some(1), Some(2), None, Some(4), Some(5), None], Metric::Euclidean);
        let eps = Cost::of(0.05 + 1e-9);
        // from p0, two jumps; the jump from p2 to q1 at time 1 is not available
        // in the extension because p2 only exists at time 2
        let literal = base_horizon_terminals(&base, 0, 2, eps, BudgetMode::MaxPerStep, false);
        let aware = base_horizon_terminals(&base, 0, 2, eps, BudgetMode::MaxPerStep, true);
        assert!(literal.contains(&5));
        assert!(!aware.contains(&5));
        let ext = build_time_extension(&base, TimeWindow::new(0, 2).unwrap()).unwrap();
        let p0 = ext.state_of(0, 0).unwrap();
        let g = ext.final_states([5]);
        assert!(!basin_pos(&ext.spec, &g, eps, BudgetMode::MaxPerStep).members.contains(p0));
        assert!(check_layer_lemma(&ext, &[5], eps, BudgetMode::MaxPerStep).holds());
    }

    #[test]
    fn separation_on_two_tracks() {
        let ext = two_tracks();
        let g = ext.final_states([3, 4, 5]);
        let b = ext.final_states([0, 1, 2]);
        for mode in BudgetMode::ALL {
            for eps in [0.0, 0.5, 1.0, 1.5] {
                let d = check_separation(&ext.spec, &g, &b, Cost::of(eps), mode).unwrap();
                assert!(d.is_partition(), "eps {eps}");
            }
        }
        let only_g = ext.final_states([5]);
        assert!(check_separation(&ext.spec, &only_g, &ext.final_states([2]), Cost::ZERO, BudgetMode::MaxPerStep).is_err());
    }

    #[test]
    fn covering_on_two_tracks() {
        let ext = two_tracks();
        let g = ext.final_states([3, 4, 5]);
        let b = ext.final_states([0, 1, 2]);
        let grid = ext.spec.finite_pairwise_costs();
        let report = check_covering(&ext.spec, &g, &b, &grid).unwrap();
        assert_eq!(report, CoveringReport { good: CoveringVerdict::Holds, bad: CoveringVerdict::Holds });
        // starting points of the tracks are never orbit ends
        let g1 = ext.final_states([0, 3]);
        let b1 = ext.final_states([1, 2, 4, 5]);
        let report = check_covering(&ext.spec, &g1, &b1, &grid).unwrap();
        assert_eq!(report.good, CoveringVerdict::HypothesisNotMet);
        assert_eq!(report.bad, CoveringVerdict::Holds);
    }

    #[test]
    fn non_dead_end_targets_overlap_free_but_not_covering() {
        let spec = SystemSpec::with_cost_fn(vec![Some(0), Some(1), Some(1)], |x, y| Cost::of((x as f64 - y as f64).abs())).unwrap();
        let g = StateSet::from_ids(3, [2]);
        let b = StateSet::from_ids(3, [0]);
        for mode in BudgetMode::ALL {
            let d = compare_dichotomy(&spec, &g, &b, Cost::of(0.5), mode, Semantics::Horizon);
            assert_eq!(d.good.to_vec(), vec![2]);
            assert_eq!(d.bad.to_vec(), vec![0]);
            assert!(d.overlap.is_empty());
            assert_eq!(d.uncovered.to_vec(), vec![1]);
        }
    }
}
