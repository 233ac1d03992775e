//! Positive and negative attracting basins, debut functions and filtration
//! checks.

mod debut;
mod filtration;
mod lemmas;

use serde::{Deserialize, Serialize};

use crate::model::{Cost, EpsIndex, Sign, StateSet, SystemSpec, TargetSet};
use crate::reachability::{forall_reach_all_horizons, reaching_set, BudgetMode};

pub use debut::{debut, debut_field, DebutValue};
pub use filtration::{
    assemble_filtration, auto_grid, check_filtration, full_grid, predicted_filtration, transition_grid, with_midpoints,
    FiltrationViolation,
};
pub use lemmas::{check_debut_lemmas, check_inclusion_lemmas, LemmaReport, LemmaViolation};

/// Which definition produced a negative basin.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Semantics {
    /// Every reachable dead end lies in the target.
    #[default]
    DeadEnd,
    /// Every nonempty exact-horizon terminal set lies in the target.
    Horizon,
}

impl Semantics {
    pub fn as_str(self) -> &'static str {
        match self {
            Semantics::DeadEnd => "deadend",
            Semantics::Horizon => "horizon",
        }
    }
}

impl std::str::FromStr for Semantics {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "deadend" => Ok(Semantics::DeadEnd),
            "horizon" => Ok(Semantics::Horizon),
            other => Err(format!("unknown semantics {other:?} (expected deadend or horizon)")),
        }
    }
}

/// One basin `A_{F,ε}` or `A_{F,−ε}`.
///
/// `semantics` is `None` for positive basins, where it plays no role.
#[derive(Clone, Debug, PartialEq)]
pub struct BasinResult {
    pub index: EpsIndex,
    pub mode: BudgetMode,
    pub members: StateSet,
    pub semantics: Option<Semantics>,
}

/// `A_{F,ε} = {y : y ⇀ A}` under budget `eps`.
pub fn basin_pos(spec: &SystemSpec, target: &TargetSet, eps: Cost, mode: BudgetMode) -> BasinResult {
    BasinResult { index: EpsIndex::pos(eps), mode, members: reaching_set(spec, target, eps, mode), semantics: None }
}

/// `A_{F,−0}`: states reaching a dead end inside `A` along zero-cost jumps.
pub fn basin_zero_robust(spec: &SystemSpec, target: &TargetSet) -> BasinResult {
    zero_robust_in_mode(spec, target, BudgetMode::MaxPerStep, Semantics::DeadEnd)
}

fn zero_robust_in_mode(spec: &SystemSpec, target: &TargetSet, mode: BudgetMode, semantics: Semantics) -> BasinResult {
    let sinks = target.difference(&spec.domain_set());
    BasinResult {
        index: EpsIndex::neg(Cost::ZERO),
        mode,
        members: reaching_set(spec, &sinks, Cost::ZERO, BudgetMode::MaxPerStep),
        semantics: Some(semantics),
    }
}

/// `A_{F,−ε}`. With `eps = 0` this is [`basin_zero_robust`] in either
/// semantics.
pub fn basin_neg(spec: &SystemSpec, target: &TargetSet, eps: Cost, mode: BudgetMode, semantics: Semantics) -> BasinResult {
    if eps.is_zero() {
        return zero_robust_in_mode(spec, target, mode, semantics);
    }
    let members = match semantics {
        Semantics::DeadEnd => {
            let robust = basin_zero_robust(spec, target).members;
            let escapes = spec.dead_ends().difference(target);
            robust.difference(&reaching_set(spec, &escapes, eps, mode))
        }
        Semantics::Horizon => {
            StateSet::from_predicate(spec.len(), |y| forall_reach_all_horizons(spec, y, target, eps, mode))
        }
    };
    BasinResult { index: EpsIndex::neg(eps), mode, members, semantics: Some(semantics) }
}

/// The basin at a signed index.
pub fn basin_at(spec: &SystemSpec, target: &TargetSet, index: EpsIndex, mode: BudgetMode, semantics: Semantics) -> BasinResult {
    match index.sign {
        Sign::Pos => basin_pos(spec, target, index.magnitude, mode),
        Sign::Neg => basin_neg(spec, target, index.magnitude, mode, semantics),
    }
}
