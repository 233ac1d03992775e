//! Debut functions: the least signed budget index at which a state enters the
//! basin of a target.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::basin_zero_robust;
use crate::model::{Cost, EpsIndex, Sign, StateId, StateSet, SystemSpec, TargetSet};
use crate::reachability::search::{shortest, threshold_reach, Direction};
use crate::reachability::BudgetMode;

/// Value of a debut function.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DebutValue {
    /// The state is robust under every finite budget: no dead end outside the
    /// target is reachable at finite cost.
    NegInfinity,
    At(EpsIndex),
    /// The target is unreachable under every finite budget.
    PosInfinity,
}

impl DebutValue {
    pub fn sign(self) -> Sign {
        match self {
            DebutValue::NegInfinity => Sign::Neg,
            DebutValue::At(i) => i.sign,
            DebutValue::PosInfinity => Sign::Pos,
        }
    }

    /// Magnitude, `∞` for the markers.
    pub fn magnitude(self) -> Cost {
        match self {
            DebutValue::At(i) => i.magnitude,
            _ => Cost::INFINITY,
        }
    }

    /// The debut as a signed real, identifying `−0` with `0`.
    pub fn signed(self) -> f64 {
        match self {
            DebutValue::NegInfinity => f64::NEG_INFINITY,
            DebutValue::At(i) => i.signed(),
            DebutValue::PosInfinity => f64::INFINITY,
        }
    }

    /// Basin membership at a finite index implied by this debut.
    ///
    /// Positive basins are closed at the debut, negative basins with a
    /// nonzero budget are open at it, and `A_{F,−0}` contains exactly the
    /// states with a negative debut. Returns `None` at infinite indices, where
    /// membership also depends on edges of infinite cost.
    pub fn admits(self, index: EpsIndex) -> Option<bool> {
        if index.magnitude.is_infinite() {
            return None;
        }
        Some(match index.sign {
            Sign::Pos => self <= DebutValue::At(index),
            Sign::Neg if index.magnitude.is_zero() => self.sign() == Sign::Neg,
            Sign::Neg => self < DebutValue::At(index),
        })
    }
}

impl Ord for DebutValue {
    fn cmp(&self, other: &Self) -> Ordering {
        fn rank(v: &DebutValue) -> u8 {
            match v {
                DebutValue::NegInfinity => 0,
                DebutValue::At(_) => 1,
                DebutValue::PosInfinity => 2,
            }
        }
        match (self, other) {
            (DebutValue::At(a), DebutValue::At(b)) => a.cmp(b),
            _ => rank(self).cmp(&rank(other)),
        }
    }
}

impl PartialOrd for DebutValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for DebutValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DebutValue::NegInfinity => f.write_str("-inf"),
            DebutValue::At(i) => write!(f, "{i}"),
            DebutValue::PosInfinity => f.write_str("+inf"),
        }
    }
}

fn assemble(robust: bool, escape: Option<Cost>, reach: Option<Cost>) -> DebutValue {
    if robust {
        match escape {
            Some(d) => DebutValue::At(EpsIndex::neg(d)),
            None => DebutValue::NegInfinity,
        }
    } else {
        match reach {
            Some(d) => DebutValue::At(EpsIndex::pos(d)),
            None => DebutValue::PosInfinity,
        }
    }
}

fn escapes(spec: &SystemSpec, target: &TargetSet) -> StateSet {
    spec.dead_ends().difference(target)
}

/// Debut of a single state, from forward searches rooted at `y`.
pub fn debut(spec: &SystemSpec, y: StateId, target: &TargetSet, mode: BudgetMode) -> DebutValue {
    let seed = StateSet::from_ids(spec.len(), [y]);
    let sinks = target.difference(&spec.domain_set());
    let robust = !threshold_reach(spec, &seed, Direction::Forward, Cost::ZERO).is_disjoint(&sinks);
    let dist = shortest(spec, &seed, Direction::Forward, mode, Cost::INFINITY);
    let nearest = |set: &StateSet| set.iter().filter_map(|s| dist[s]).min();
    if robust {
        assemble(true, nearest(&escapes(spec, target)), None)
    } else {
        assemble(false, None, nearest(target))
    }
}

/// Debuts of every state, from one backward sweep per side.
pub fn debut_field(spec: &SystemSpec, target: &TargetSet, mode: BudgetMode) -> Vec<DebutValue> {
    let robust = basin_zero_robust(spec, target).members;
    let escape = shortest(spec, &escapes(spec, target), Direction::Backward, mode, Cost::INFINITY);
    let reach = shortest(spec, target, Direction::Backward, mode, Cost::INFINITY);
    (0..spec.len()).map(|y| assemble(robust.contains(y), escape[y], reach[y])).collect()
}
