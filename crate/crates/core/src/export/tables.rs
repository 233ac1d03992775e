use serde::{Deserialize, Serialize};

use crate::basins::{BasinResult, DebutValue, Semantics};
use crate::ensemble::ClusterAssignment;
use crate::error::{Error, Result};
use crate::model::{parse_cost, EpsIndex, Sign, StateId, SystemSpec};
use crate::reachability::BudgetMode;

/// One row of a debut-field export.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DebutRecord {
    pub state_id: StateId,
    pub label: String,
    pub x: Option<f64>,
    pub y: Option<f64>,
    pub debut_sign: String,
    /// Decimal magnitude or `inf`.
    pub debut_magnitude: String,
    pub mode: String,
    pub semantics: String,
}

impl DebutRecord {
    pub fn value(&self) -> Result<DebutValue> {
        let sign = match self.debut_sign.as_str() {
            "neg" => Sign::Neg,
            "pos" => Sign::Pos,
            other => return Err(Error::Precondition(format!("state {}: unknown debut sign {other:?}", self.state_id))),
        };
        let magnitude = parse_cost(&self.debut_magnitude)
            .ok_or_else(|| Error::Precondition(format!("state {}: bad magnitude {:?}", self.state_id, self.debut_magnitude)))?;
        Ok(match (sign, magnitude.is_infinite()) {
            (Sign::Neg, true) => DebutValue::NegInfinity,
            (Sign::Pos, true) => DebutValue::PosInfinity,
            _ => DebutValue::At(EpsIndex { sign, magnitude }),
        })
    }
}

fn coord(spec: &SystemSpec, id: StateId, axis: usize) -> Option<f64> {
    spec.state(id).coords.as_ref().and_then(|c| c.get(axis).copied())
}

pub fn debut_records(spec: &SystemSpec, field: &[DebutValue], mode: BudgetMode, semantics: Semantics) -> Vec<DebutRecord> {
    field
        .iter()
        .enumerate()
        .map(|(id, v)| DebutRecord {
            state_id: id,
            label: spec.label(id),
            x: coord(spec, id, 0),
            y: coord(spec, id, 1),
            debut_sign: v.sign().as_str().to_string(),
            debut_magnitude: v.magnitude().to_string(),
            mode: mode.as_str().to_string(),
            semantics: semantics.as_str().to_string(),
        })
        .collect()
}

/// Debut values of records sorted by state id.
pub fn field_from_records(records: &[DebutRecord]) -> Result<Vec<DebutValue>> {
    let mut sorted: Vec<&DebutRecord> = records.iter().collect();
    sorted.sort_by_key(|r| r.state_id);
    for (i, r) in sorted.iter().enumerate() {
        if r.state_id != i {
            return Err(Error::Precondition(format!("debut records skip or repeat state {i}")));
        }
    }
    sorted.into_iter().map(DebutRecord::value).collect()
}

fn finish(writer: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = writer.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn records_to_csv(records: &[DebutRecord]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in records {
        w.serialize(r)?;
    }
    if records.is_empty() {
        w.write_record(["state_id", "label", "x", "y", "debut_sign", "debut_magnitude", "mode", "semantics"])?;
    }
    finish(w)
}

pub fn parse_debut_csv(text: &str) -> Result<Vec<DebutRecord>> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    reader.deserialize().map(|r| r.map_err(Error::from)).collect()
}

pub fn records_to_json(records: &[DebutRecord]) -> Result<String> {
    let mut text = serde_json::to_string_pretty(records)?;
    text.push('\n');
    Ok(text)
}

pub fn parse_debut_json(text: &str) -> Result<Vec<DebutRecord>> {
    Ok(serde_json::from_str(text)?)
}

/// Membership table: one 0/1 column per basin, headed by its index.
pub fn basin_table_csv(spec: &SystemSpec, basins: &[BasinResult]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["state_id".to_string(), "label".to_string()];
    header.extend(basins.iter().map(|b| b.index.to_string()));
    w.write_record(&header)?;
    for id in 0..spec.len() {
        let mut row = vec![id.to_string(), spec.label(id)];
        row.extend(basins.iter().map(|b| if b.members.contains(id) { "1" } else { "0" }.to_string()));
        w.write_record(&row)?;
    }
    finish(w)
}

/// Cluster of each clustered state; `states[i]` carries `ca.labels[i]`.
pub fn cluster_csv(spec: &SystemSpec, states: &[StateId], positions: &[[f64; 2]], ca: &ClusterAssignment) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["state_id", "label", "x", "y", "cluster"])?;
    for ((&id, p), l) in states.iter().zip(positions).zip(&ca.labels) {
        w.write_record([id.to_string(), spec.label(id), p[0].to_string(), p[1].to_string(), l.to_string()])?;
    }
    finish(w)
}

pub fn best_track_csv(series: &[(String, StateId, DebutValue)]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["timestamp", "sign", "magnitude"])?;
    for (t, _, v) in series {
        w.write_record([t.as_str(), v.sign().as_str(), &v.magnitude().to_string()])?;
    }
    finish(w)
}
