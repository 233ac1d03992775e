//! System interchange format.
//!
//! ```json
//! {"states": [{"label": "a", "coords": [0.0, 1.0], "layer": 0}, ...],
//!  "successor": [1, null, ...],
//!  "cost": {"kind": "matrix", "values": [[0, "inf"], [1.5, 0]]}}
//! ```
//!
//! Cost kinds: `matrix`, `euclidean`, `haversine`, `layered_euclidean`,
//! `layered_haversine`. Layered kinds read each state's `layer`.

use serde::{Deserialize, Serialize};

use super::cost::inf_f64;
use super::system::{Metric, RawCostModel, State, SystemParts, SystemSpec, ValidationReport};
use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
struct RawCost(#[serde(with = "inf_f64")] f64);

#[derive(Debug, Serialize, Deserialize)]
struct StateDef {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    coords: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    layer: Option<i64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum CostDef {
    Matrix { values: Vec<Vec<RawCost>> },
    Euclidean,
    Haversine,
    LayeredEuclidean,
    LayeredHaversine,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SystemDef {
    states: Vec<StateDef>,
    successor: Vec<Option<i64>>,
    cost: CostDef,
}

/// Parses the interchange JSON without validating invariants.
pub fn parts_from_json(text: &str) -> Result<SystemParts, Error> {
    let def: SystemDef = serde_json::from_str(text)?;
    let cost = match def.cost {
        CostDef::Matrix { values } => RawCostModel::Matrix(values.into_iter().map(|r| r.into_iter().map(|c| c.0).collect()).collect()),
        CostDef::Euclidean => RawCostModel::Coordinates(Metric::Euclidean),
        CostDef::Haversine => RawCostModel::Coordinates(Metric::HaversineKm),
        CostDef::LayeredEuclidean => RawCostModel::Layered(Metric::Euclidean),
        CostDef::LayeredHaversine => RawCostModel::Layered(Metric::HaversineKm),
    };
    Ok(SystemParts {
        states: def.states.into_iter().map(|s| State { label: s.label, coords: s.coords, layer: s.layer }).collect(),
        successor: def.successor,
        cost,
    })
}

/// Parses and validates the interchange JSON.
pub fn system_from_json(text: &str) -> Result<SystemSpec, Error> {
    let parts = parts_from_json(text)?;
    SystemSpec::from_parts(parts).map_err(|r: ValidationReport| Error::Invalid(r))
}

pub fn system_to_json(spec: &SystemSpec) -> String {
    let parts = spec.to_parts();
    let cost = match parts.cost {
        RawCostModel::Matrix(rows) => CostDef::Matrix { values: rows.into_iter().map(|r| r.into_iter().map(RawCost).collect()).collect() },
        RawCostModel::Coordinates(Metric::Euclidean) => CostDef::Euclidean,
        RawCostModel::Coordinates(Metric::HaversineKm) => CostDef::Haversine,
        RawCostModel::Layered(Metric::Euclidean) => CostDef::LayeredEuclidean,
        RawCostModel::Layered(Metric::HaversineKm) => CostDef::LayeredHaversine,
    };
    let def = SystemDef {
        states: parts.states.into_iter().map(|s| StateDef { label: s.label, coords: s.coords, layer: s.layer }).collect(),
        successor: parts.successor,
        cost,
    };
    serde_json::to_string_pretty(&def).expect("system serialization cannot fail")
}
