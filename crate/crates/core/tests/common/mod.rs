//! Random systems and independent oracles shared by the integration tests.
#![allow(dead_code)]

use basins::basins::DebutValue;
use basins::model::{CostModel, Metric, State};
use basins::timeext::{build_time_extension, BaseSystem, TimeExtension, TimeWindow};
use basins::{BudgetMode, Cost, EpsIndex, StateId, StateSet, SystemSpec, TargetSet};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Dyadic costs keep every path sum exact in floating point.
const COSTS: [f64; 9] = [0.0, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0, 4.5];

/// A random system with up to `max_states` states: partial or total map,
/// asymmetric dyadic costs, some infinite, some distinct pairs at zero cost.
pub fn random_system(rng: &mut ChaCha8Rng, max_states: usize) -> SystemSpec {
    let n = rng.gen_range(1..=max_states);
    let total = rng.gen_bool(0.3);
    let successor: Vec<Option<StateId>> =
        (0..n).map(|_| if total || rng.gen_bool(0.65) { Some(rng.gen_range(0..n)) } else { None }).collect();
    let inf_rate = [0.0, 0.1, 0.3][rng.gen_range(0..3)];
    let matrix: Vec<Vec<Cost>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        Cost::ZERO
                    } else if rng.gen_bool(inf_rate) {
                        Cost::INFINITY
                    } else {
                        Cost::of(*COSTS.choose(rng).unwrap())
                    }
                })
                .collect()
        })
        .collect();
    SystemSpec::with_matrix(successor, matrix).expect("generated system is valid")
}

pub fn random_target(rng: &mut ChaCha8Rng, n: usize) -> TargetSet {
    let mut set = StateSet::from_predicate(n, |_| rng.gen_bool(0.3));
    if set.is_empty() {
        set.insert(rng.gen_range(0..n));
    }
    set
}

/// A random time extension: up to `max_base` base states at distinct points
/// of a quarter-unit lattice in the plane, up to `max_layers` layers, and a
/// random partition of the final layer into good and bad.
pub fn random_time_extension(rng: &mut ChaCha8Rng, max_base: usize, max_layers: usize) -> (TimeExtension, TargetSet, TargetSet) {
    loop {
        let m = rng.gen_range(2..=max_base);
        let mut lattice: Vec<(i32, i32)> = (0..9).flat_map(|x| (0..3).map(move |y| (x, y))).collect();
        lattice.shuffle(rng);
        // collinear points keep distances exact; an off-axis point adds a true 2-D metric
        let coords: Vec<Vec<f64>> = lattice[..m]
            .iter()
            .map(|&(x, y)| if rng.gen_bool(0.8) { vec![x as f64 * 0.25, 0.0] } else { vec![x as f64 * 0.25, y as f64] })
            .collect();
        let mut seen = coords.clone();
        seen.sort_by(|a, b| a.partial_cmp(b).unwrap());
        seen.dedup();
        if seen.len() < m {
            continue;
        }
        let map: Vec<Option<usize>> = (0..m).map(|_| rng.gen_bool(0.8).then(|| rng.gen_range(0..m))).collect();
        let layers = rng.gen_range(2..=max_layers);
        let base = BaseSystem::new(coords, map, Metric::Euclidean);
        let Ok(ext) = build_time_extension(&base, TimeWindow::new(0, layers as i64 - 1).unwrap()) else {
            continue;
        };
        let finals = ext.final_layer();
        let good = StateSet::from_predicate(ext.spec.len(), |s| finals.contains(s) && rng.gen_bool(0.5));
        let bad = finals.difference(&good);
        return (ext, good, bad);
    }
}

/// Random tracks: `members` tracks of `steps` points on a coarse lattice.
pub fn random_tracks_csv(rng: &mut ChaCha8Rng, members: usize, steps: usize) -> String {
    let mut out = String::from("track_id,member,step,lon,lat\n");
    for k in 0..members {
        let (mut lon, mut lat) = (rng.gen_range(0..20) as f64 * 0.5, rng.gen_range(0..20) as f64 * 0.5);
        for s in 0..steps {
            out.push_str(&format!("m{k:02},{k},{s},{lon},{lat}\n"));
            lon += rng.gen_range(-2..=2) as f64 * 0.25;
            lat += rng.gen_range(-2..=2) as f64 * 0.25;
        }
    }
    out
}

fn combine(mode: BudgetMode, acc: f64, c: f64) -> f64 {
    match mode {
        BudgetMode::MaxPerStep => acc.max(c),
        BudgetMode::TotalSum => acc + c,
    }
}

/// Least weight of a controlled path from `y` into `target`, by dynamic
/// programming over path length up to `|Y|` jumps. Every pair `(u, w)` with
/// `w ∈ dom F` is one edge `u → F(w)`. `None` when no path exists at all.
pub fn least_weight(spec: &SystemSpec, y: StateId, target: &TargetSet, mode: BudgetMode) -> Option<f64> {
    let n = spec.len();
    let mut best: Vec<f64> = vec![f64::INFINITY; n];
    let mut reached = vec![false; n];
    best[y] = 0.0;
    reached[y] = true;
    let mut answer = target.contains(y).then_some(0.0);
    for _ in 0..n {
        let mut next_best = best.clone();
        let mut next_reached = reached.clone();
        for u in 0..n {
            if !reached[u] {
                continue;
            }
            for w in 0..n {
                let Some(v) = spec.successor(w) else { continue };
                let weight = combine(mode, best[u], spec.cost(u, w).value());
                if !next_reached[v] || weight < next_best[v] {
                    next_best[v] = weight;
                    next_reached[v] = true;
                }
            }
        }
        best = next_best;
        reached = next_reached;
        for v in target.iter() {
            if reached[v] {
                answer = Some(answer.map_or(best[v], |a: f64| a.min(best[v])));
            }
        }
    }
    answer
}

/// Reachability under `eps` from the least path weight.
pub fn oracle_reach(spec: &SystemSpec, y: StateId, target: &TargetSet, eps: Cost, mode: BudgetMode) -> bool {
    least_weight(spec, y, target, mode).is_some_and(|w| w <= eps.value())
}

/// Least budget reaching `target`, by sweeping the pairwise costs as
/// thresholds in max mode and taking the least path sum in sum mode.
/// `None` when only infinite budgets work or nothing works.
pub fn least_finite_budget(spec: &SystemSpec, y: StateId, target: &TargetSet, mode: BudgetMode) -> Option<f64> {
    match mode {
        BudgetMode::MaxPerStep => {
            let mut thresholds: Vec<f64> = (0..spec.len()).flat_map(|u| (0..spec.len()).map(move |w| (u, w))).map(|(u, w)| spec.cost(u, w).value()).filter(|c| c.is_finite()).collect();
            thresholds.push(0.0);
            thresholds.sort_by(|a, b| a.partial_cmp(b).unwrap());
            thresholds.dedup();
            thresholds.into_iter().find(|&t| oracle_reach(spec, y, target, Cost::of(t), mode))
        }
        BudgetMode::TotalSum => least_weight(spec, y, target, mode).filter(|w| w.is_finite()),
    }
}

/// Pointwise debut from the definitions: a state that reaches a dead end of
/// the target along zero-cost jumps has a negative debut whose magnitude is
/// the least budget reaching a dead end outside the target; any other state
/// has a positive debut equal to the least budget reaching the target.
pub fn oracle_debut(spec: &SystemSpec, y: StateId, target: &TargetSet, mode: BudgetMode) -> DebutValue {
    let inside = target.difference(&spec.domain_set());
    if oracle_reach(spec, y, &inside, Cost::ZERO, BudgetMode::MaxPerStep) {
        let escape = spec.dead_ends().difference(target);
        return match least_finite_budget(spec, y, &escape, mode) {
            Some(m) => DebutValue::At(EpsIndex::neg(Cost::of(m))),
            None => DebutValue::NegInfinity,
        };
    }
    match least_finite_budget(spec, y, target, mode) {
        Some(m) => DebutValue::At(EpsIndex::pos(Cost::of(m))),
        None => DebutValue::PosInfinity,
    }
}

/// Terminals of every controlled path of exactly `n` jumps from `y` with
/// weight at most `eps`, by enumerating the jump sequences.
pub fn literal_terminals(spec: &SystemSpec, y: StateId, n: usize, eps: Cost, mode: BudgetMode) -> StateSet {
    let mut out = StateSet::empty(spec.len());
    fn walk(spec: &SystemSpec, at: StateId, left: usize, spent: f64, eps: f64, mode: BudgetMode, out: &mut StateSet) {
        if left == 0 {
            out.insert(at);
            return;
        }
        for w in 0..spec.len() {
            let Some(v) = spec.successor(w) else { continue };
            let c = spec.cost(at, w).value();
            if c.is_infinite() && eps.is_finite() {
                continue;
            }
            let next = combine(mode, spent, c);
            if next <= eps {
                walk(spec, v, left - 1, next, eps, mode, out);
            }
        }
    }
    walk(spec, y, n, 0.0, eps.value(), mode, &mut out);
    out
}

/// The finite pairwise costs, zero, and every midpoint between them.
pub fn eps_samples(spec: &SystemSpec) -> Vec<Cost> {
    basins::basins::with_midpoints(&spec.finite_pairwise_costs())
}

/// A small hand-made system with coordinates, for ensemble-free checks.
pub fn points_on_line(xs: &[f64], successor: Vec<Option<StateId>>) -> SystemSpec {
    let states = xs.iter().map(|&x| State::at(vec![x, 0.0])).collect();
    SystemSpec::new(states, successor, CostModel::Coordinates(Metric::Euclidean)).unwrap()
}
