//! Label-setting search over the step graph.
//!
//! The step graph has an edge `u → F(w)` of weight `cost(u, w)` for every state
//! `u` and every `w ∈ dom F`. It is never materialised: forward searches expand
//! `u` over `jump_targets(u)`, backward searches expand a settled `v` over
//! `F⁻¹(v)` and then over `jump_sources(w)`.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use super::BudgetMode;
use crate::model::{Cost, StateId, StateSet, SystemSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Direction {
    /// Distances from the seed set to every state.
    Forward,
    /// Distances from every state to the seed set.
    Backward,
}

/// Calls `visit(neighbour, edge_cost)` for every step-graph edge leaving
/// (forward) or entering (backward) `node`. Infinite edges are skipped unless
/// `with_infinite` is set.
fn for_each_edge(spec: &SystemSpec, node: StateId, dir: Direction, with_infinite: bool, mut visit: impl FnMut(StateId, Cost)) {
    match dir {
        Direction::Forward => {
            for w in spec.jump_targets(node, !with_infinite) {
                let c = spec.cost(node, w);
                if with_infinite || c.is_finite() {
                    visit(spec.successor(w).unwrap(), c);
                }
            }
        }
        Direction::Backward => {
            for &w in spec.preimage(node) {
                for u in spec.jump_sources(w, !with_infinite) {
                    let c = spec.cost(u, w);
                    if with_infinite || c.is_finite() {
                        visit(u, c);
                    }
                }
            }
        }
    }
}

/// Minimum path weight between the seed set and every state over finite edges,
/// keeping only weights `≤ limit`. Seeds have weight zero.
pub(crate) fn shortest(spec: &SystemSpec, seeds: &StateSet, dir: Direction, mode: BudgetMode, limit: Cost) -> Vec<Option<Cost>> {
    let mut dist: Vec<Option<Cost>> = vec![None; spec.len()];
    let mut settled = vec![false; spec.len()];
    let mut heap = BinaryHeap::new();
    for s in seeds.iter() {
        dist[s] = Some(Cost::ZERO);
        heap.push(Reverse((Cost::ZERO, s)));
    }
    while let Some(Reverse((d, node))) = heap.pop() {
        if settled[node] {
            continue;
        }
        settled[node] = true;
        for_each_edge(spec, node, dir, false, |next, c| {
            if settled[next] {
                return;
            }
            let candidate = mode.extend(d, c);
            if candidate > limit {
                return;
            }
            if dist[next].is_none_or(|old| candidate < old) {
                dist[next] = Some(candidate);
                heap.push(Reverse((candidate, next)));
            }
        });
    }
    dist
}

/// Like [`shortest`] in `TotalSum` mode, but labels are `(weight, hops)`
/// compared lexicographically. Used for witness reconstruction.
pub(crate) fn shortest_with_hops(spec: &SystemSpec, seeds: &StateSet, dir: Direction) -> Vec<Option<(Cost, usize)>> {
    let mut label: Vec<Option<(Cost, usize)>> = vec![None; spec.len()];
    let mut settled = vec![false; spec.len()];
    let mut heap = BinaryHeap::new();
    for s in seeds.iter() {
        label[s] = Some((Cost::ZERO, 0));
        heap.push(Reverse((Cost::ZERO, 0usize, s)));
    }
    while let Some(Reverse((d, hops, node))) = heap.pop() {
        if settled[node] {
            continue;
        }
        settled[node] = true;
        for_each_edge(spec, node, dir, false, |next, c| {
            if settled[next] {
                return;
            }
            let candidate = (d + c, hops + 1);
            if label[next].is_none_or(|old| candidate < old) {
                label[next] = Some(candidate);
                heap.push(Reverse((candidate.0, candidate.1, next)));
            }
        });
    }
    label
}

/// Breadth-first hop counts using only edges of cost `≤ eps`.
pub(crate) fn threshold_hops(spec: &SystemSpec, seeds: &StateSet, dir: Direction, eps: Cost) -> Vec<Option<usize>> {
    let mut hops = vec![None; spec.len()];
    let mut queue = VecDeque::new();
    for s in seeds.iter() {
        hops[s] = Some(0);
        queue.push_back(s);
    }
    let with_infinite = eps.is_infinite();
    while let Some(node) = queue.pop_front() {
        let h = hops[node].unwrap();
        for_each_edge(spec, node, dir, with_infinite, |next, c| {
            if c <= eps && hops[next].is_none() {
                hops[next] = Some(h + 1);
                queue.push_back(next);
            }
        });
    }
    hops
}

/// States connected to the seed set by a path whose every edge costs `≤ eps`.
pub(crate) fn threshold_reach(spec: &SystemSpec, seeds: &StateSet, dir: Direction, eps: Cost) -> StateSet {
    let mut reached = seeds.clone();
    let mut stack: Vec<StateId> = seeds.to_vec();
    let with_infinite = eps.is_infinite();
    while let Some(node) = stack.pop() {
        for_each_edge(spec, node, dir, with_infinite, |next, c| {
            if c <= eps && reached.insert(next) {
                stack.push(next);
            }
        });
    }
    reached
}

/// States connected to the seed set by a path of weight `≤ eps` under `mode`.
pub(crate) fn budget_reach(spec: &SystemSpec, seeds: &StateSet, dir: Direction, eps: Cost, mode: BudgetMode) -> StateSet {
    match mode {
        BudgetMode::MaxPerStep => threshold_reach(spec, seeds, dir, eps),
        // with an infinite budget every edge, infinite ones included, is affordable
        BudgetMode::TotalSum if eps.is_infinite() => threshold_reach(spec, seeds, dir, eps),
        BudgetMode::TotalSum => {
            let dist = shortest(spec, seeds, dir, mode, eps);
            StateSet::from_predicate(spec.len(), |s| dist[s].is_some())
        }
    }
}
