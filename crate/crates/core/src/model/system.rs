use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::cost::Cost;
use super::set::StateSet;
use super::StateId;

/// A point of the state set, optionally carrying a display label, a coordinate
/// vector and a time layer.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct State {
    pub label: Option<String>,
    pub coords: Option<Vec<f64>>,
    pub layer: Option<i64>,
}

impl State {
    pub fn labeled(label: impl Into<String>) -> Self {
        State { label: Some(label.into()), ..State::default() }
    }

    pub fn at(coords: Vec<f64>) -> Self {
        State { coords: Some(coords), ..State::default() }
    }
}

/// Distance used by coordinate-based cost models.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Metric {
    /// Euclidean distance on raw coordinates.
    Euclidean,
    /// Great-circle distance in kilometres on `(lon, lat)` degrees.
    HaversineKm,
}

const EARTH_RADIUS_KM: f64 = 6371.0088;

impl Metric {
    pub fn distance(self, a: &[f64], b: &[f64]) -> f64 {
        match self {
            Metric::Euclidean => a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt(),
            Metric::HaversineKm => {
                if a == b {
                    return 0.0;
                }
                let (lon1, lat1) = (a[0].to_radians(), a[1].to_radians());
                let (lon2, lat2) = (b[0].to_radians(), b[1].to_radians());
                let h = ((lat2 - lat1) / 2.0).sin().powi(2)
                    + lat1.cos() * lat2.cos() * ((lon2 - lon1) / 2.0).sin().powi(2);
                2.0 * EARTH_RADIUS_KM * h.sqrt().min(1.0).asin()
            }
        }
    }
}

/// How `cost(x, y)` is obtained.
#[derive(Clone, Debug, PartialEq)]
pub enum CostModel {
    /// Explicit row-major `n × n` matrix; `values[x * n + y] = cost(x, y)`.
    Matrix(Vec<Cost>),
    /// Metric on state coordinates.
    Coordinates(Metric),
    /// Metric on coordinates within a layer, `∞` across layers.
    Layered(Metric),
}

#[derive(Clone, Debug)]
struct LayerGroups {
    group_of: Vec<usize>,
    members: Vec<Vec<StateId>>,
    domain_members: Vec<Vec<StateId>>,
}

/// A finite partial-map dynamical system `(Y, F, c)`.
///
/// Immutable after construction. Construction validates every structural
/// invariant, so all algorithms may assume a well-formed system.
#[derive(Clone, Debug)]
pub struct SystemSpec {
    states: Vec<State>,
    successor: Vec<Option<StateId>>,
    cost: CostModel,
    domain: Vec<StateId>,
    preimage: Vec<Vec<StateId>>,
    groups: Option<LayerGroups>,
}

/// One broken invariant of a candidate system.
#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    SuccessorLength { states: usize, successors: usize },
    SuccessorOutOfRange { state: i64, successor: i64 },
    MatrixShape { expected: usize, row: Option<usize>, found: usize },
    NonZeroDiagonal { state: StateId, value: f64 },
    InvalidCost { from: StateId, to: StateId, value: f64 },
    MissingCoords { state: StateId },
    CoordDimension { state: StateId, expected: usize, found: usize },
    NonFiniteCoord { state: StateId },
    MissingLayer { state: StateId },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::SuccessorLength { states, successors } => {
                write!(f, "successor table has {successors} entries for {states} states")
            }
            Violation::SuccessorOutOfRange { state, successor } => {
                write!(f, "state {state}: successor {successor} is not a valid state id")
            }
            Violation::MatrixShape { expected, row: None, found } => {
                write!(f, "cost matrix has {found} rows, expected {expected}")
            }
            Violation::MatrixShape { expected, row: Some(r), found } => {
                write!(f, "cost matrix row {r} has {found} entries, expected {expected}")
            }
            Violation::NonZeroDiagonal { state, value } => {
                write!(f, "state {state}: cost({state},{state}) = {value}, must be 0")
            }
            Violation::InvalidCost { from, to, value } => {
                write!(f, "cost({from},{to}) = {value} is not in [0, inf]")
            }
            Violation::MissingCoords { state } => write!(f, "state {state}: coordinates required"),
            Violation::CoordDimension { state, expected, found } => {
                write!(f, "state {state}: {found} coordinates, expected {expected}")
            }
            Violation::NonFiniteCoord { state } => write!(f, "state {state}: non-finite coordinate"),
            Violation::MissingLayer { state } => write!(f, "state {state}: layer required"),
        }
    }
}

/// The list of violations found by [`validate_system`]; empty means valid.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return f.write_str("no violations");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ValidationReport {}

/// Unvalidated system parts, as read from the interchange format.
#[derive(Clone, Debug, PartialEq)]
pub struct SystemParts {
    pub states: Vec<State>,
    pub successor: Vec<Option<i64>>,
    pub cost: RawCostModel,
}

#[derive(Clone, Debug, PartialEq)]
pub enum RawCostModel {
    Matrix(Vec<Vec<f64>>),
    Coordinates(Metric),
    Layered(Metric),
}

/// Checks every structural invariant of a candidate system.
pub fn validate_system(parts: &SystemParts) -> ValidationReport {
    let n = parts.states.len();
    let mut violations = Vec::new();
    if parts.successor.len() != n {
        violations.push(Violation::SuccessorLength { states: n, successors: parts.successor.len() });
    }
    for (state, succ) in parts.successor.iter().enumerate() {
        if let Some(s) = *succ {
            if s < 0 || s as usize >= n {
                violations.push(Violation::SuccessorOutOfRange { state: state as i64, successor: s });
            }
        }
    }
    match &parts.cost {
        RawCostModel::Matrix(rows) => {
            if rows.len() != n {
                violations.push(Violation::MatrixShape { expected: n, row: None, found: rows.len() });
            }
            for (x, row) in rows.iter().enumerate() {
                if row.len() != n {
                    violations.push(Violation::MatrixShape { expected: n, row: Some(x), found: row.len() });
                    continue;
                }
                for (y, &value) in row.iter().enumerate() {
                    if value.is_nan() || value < 0.0 {
                        violations.push(Violation::InvalidCost { from: x, to: y, value });
                    } else if x == y && value != 0.0 {
                        violations.push(Violation::NonZeroDiagonal { state: x, value });
                    }
                }
            }
        }
        RawCostModel::Coordinates(_) | RawCostModel::Layered(_) => {
            let layered = matches!(parts.cost, RawCostModel::Layered(_));
            let dim = parts.states.iter().find_map(|s| s.coords.as_ref().map(Vec::len));
            for (id, state) in parts.states.iter().enumerate() {
                match (&state.coords, dim) {
                    (None, _) => violations.push(Violation::MissingCoords { state: id }),
                    (Some(c), Some(d)) if c.len() != d => {
                        violations.push(Violation::CoordDimension { state: id, expected: d, found: c.len() })
                    }
                    (Some(c), _) if c.iter().any(|v| !v.is_finite()) => {
                        violations.push(Violation::NonFiniteCoord { state: id })
                    }
                    _ => {}
                }
                if layered && state.layer.is_none() {
                    violations.push(Violation::MissingLayer { state: id });
                }
            }
            if matches!(parts.cost, RawCostModel::Coordinates(Metric::HaversineKm) | RawCostModel::Layered(Metric::HaversineKm))
                && dim.is_some_and(|d| d != 2)
            {
                violations.push(Violation::CoordDimension { state: 0, expected: 2, found: dim.unwrap_or(0) });
            }
        }
    }
    ValidationReport { violations }
}

impl SystemSpec {
    pub fn new(states: Vec<State>, successor: Vec<Option<StateId>>, cost: CostModel) -> Result<Self, ValidationReport> {
        let raw_cost = match &cost {
            CostModel::Matrix(values) => {
                let n = states.len();
                if values.len() != n * n {
                    return Err(ValidationReport {
                        violations: vec![Violation::MatrixShape { expected: n * n, row: None, found: values.len() }],
                    });
                }
                RawCostModel::Matrix(values.chunks(n.max(1)).take(n).map(|r| r.iter().map(|c| c.value()).collect()).collect())
            }
            CostModel::Coordinates(m) => RawCostModel::Coordinates(*m),
            CostModel::Layered(m) => RawCostModel::Layered(*m),
        };
        let parts = SystemParts {
            states,
            successor: successor.iter().map(|s| s.map(|v| v as i64)).collect(),
            cost: raw_cost,
        };
        let report = validate_system(&parts);
        if !report.is_clean() {
            return Err(report);
        }
        Ok(SystemSpec::assemble(parts.states, successor, cost))
    }

    pub fn from_parts(parts: SystemParts) -> Result<Self, ValidationReport> {
        let report = validate_system(&parts);
        if !report.is_clean() {
            return Err(report);
        }
        let successor = parts.successor.iter().map(|s| s.map(|v| v as usize)).collect();
        let cost = match parts.cost {
            RawCostModel::Matrix(rows) => CostModel::Matrix(rows.into_iter().flatten().map(Cost::of).collect()),
            RawCostModel::Coordinates(m) => CostModel::Coordinates(m),
            RawCostModel::Layered(m) => CostModel::Layered(m),
        };
        Ok(SystemSpec::assemble(parts.states, successor, cost))
    }

    /// Convenience constructor for an explicit cost matrix.
    pub fn with_matrix(successor: Vec<Option<StateId>>, matrix: Vec<Vec<Cost>>) -> Result<Self, ValidationReport> {
        let n = successor.len();
        let states = (0..n).map(|_| State::default()).collect();
        let parts = SystemParts {
            states,
            successor: successor.iter().map(|s| s.map(|v| v as i64)).collect(),
            cost: RawCostModel::Matrix(matrix.iter().map(|r| r.iter().map(|c| c.value()).collect()).collect()),
        };
        SystemSpec::from_parts(parts)
    }

    /// Convenience constructor with `cost(x, y) = f(x, y)`.
    pub fn with_cost_fn(successor: Vec<Option<StateId>>, f: impl Fn(StateId, StateId) -> Cost) -> Result<Self, ValidationReport> {
        let n = successor.len();
        let matrix = (0..n).map(|x| (0..n).map(|y| f(x, y)).collect()).collect();
        SystemSpec::with_matrix(successor, matrix)
    }

    fn assemble(states: Vec<State>, successor: Vec<Option<StateId>>, cost: CostModel) -> Self {
        let n = states.len();
        let domain: Vec<StateId> = (0..n).filter(|&x| successor[x].is_some()).collect();
        let mut preimage = vec![Vec::new(); n];
        for &w in &domain {
            preimage[successor[w].unwrap()].push(w);
        }
        let groups = match cost {
            CostModel::Layered(_) => {
                let mut index: BTreeMap<i64, usize> = BTreeMap::new();
                for s in &states {
                    let next = index.len();
                    index.entry(s.layer.unwrap()).or_insert(next);
                }
                let mut members = vec![Vec::new(); index.len()];
                let mut domain_members = vec![Vec::new(); index.len()];
                let group_of: Vec<usize> = states.iter().map(|s| index[&s.layer.unwrap()]).collect();
                for (id, &g) in group_of.iter().enumerate() {
                    members[g].push(id);
                    if successor[id].is_some() {
                        domain_members[g].push(id);
                    }
                }
                Some(LayerGroups { group_of, members, domain_members })
            }
            _ => None,
        };
        SystemSpec { states, successor, cost, domain, preimage, groups }
    }

    /// Re-runs validation on this system; always clean for constructed systems.
    pub fn validate(&self) -> ValidationReport {
        validate_system(&self.to_parts())
    }

    pub fn to_parts(&self) -> SystemParts {
        let n = self.len();
        SystemParts {
            states: self.states.clone(),
            successor: self.successor.iter().map(|s| s.map(|v| v as i64)).collect(),
            cost: match &self.cost {
                CostModel::Matrix(values) => {
                    RawCostModel::Matrix((0..n).map(|x| values[x * n..(x + 1) * n].iter().map(|c| c.value()).collect()).collect())
                }
                CostModel::Coordinates(m) => RawCostModel::Coordinates(*m),
                CostModel::Layered(m) => RawCostModel::Layered(*m),
            },
        }
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn state(&self, id: StateId) -> &State {
        &self.states[id]
    }

    pub fn cost_model(&self) -> &CostModel {
        &self.cost
    }

    pub fn successor(&self, id: StateId) -> Option<StateId> {
        self.successor[id]
    }

    pub fn in_domain(&self, id: StateId) -> bool {
        self.successor[id].is_some()
    }

    /// `dom F` in increasing id order.
    pub fn domain(&self) -> &[StateId] {
        &self.domain
    }

    /// `F⁻¹(v)` in increasing id order.
    pub fn preimage(&self, v: StateId) -> &[StateId] {
        &self.preimage[v]
    }

    pub fn domain_set(&self) -> StateSet {
        StateSet::from_ids(self.len(), self.domain.iter().copied())
    }

    /// `Y − dom F`.
    pub fn dead_ends(&self) -> StateSet {
        self.domain_set().complement()
    }

    /// `Im F`.
    pub fn image(&self) -> StateSet {
        StateSet::from_ids(self.len(), self.domain.iter().map(|&w| self.successor[w].unwrap()))
    }

    pub fn all_states(&self) -> StateSet {
        StateSet::full(self.len())
    }

    pub fn is_layered(&self) -> bool {
        self.groups.is_some()
    }

    pub fn cost(&self, from: StateId, to: StateId) -> Cost {
        match &self.cost {
            CostModel::Matrix(values) => values[from * self.len() + to],
            CostModel::Coordinates(metric) => self.coord_cost(*metric, from, to),
            CostModel::Layered(metric) => {
                if self.states[from].layer != self.states[to].layer {
                    Cost::INFINITY
                } else {
                    self.coord_cost(*metric, from, to)
                }
            }
        }
    }

    fn coord_cost(&self, metric: Metric, from: StateId, to: StateId) -> Cost {
        if from == to {
            return Cost::ZERO;
        }
        let a = self.states[from].coords.as_deref().unwrap();
        let b = self.states[to].coords.as_deref().unwrap();
        Cost::of(metric.distance(a, b))
    }

    /// States `u` that can jump to `w`. With `finite_only`, states whose cost
    /// to `w` is known to be infinite may be skipped.
    pub fn jump_sources(&self, w: StateId, finite_only: bool) -> Peers<'_> {
        match (&self.groups, finite_only) {
            (Some(g), true) => Peers::Listed(g.members[g.group_of[w]].iter()),
            _ => Peers::Range(0..self.len()),
        }
    }

    /// Jump targets `w ∈ dom F` available from `u`, filtered as in
    /// [`SystemSpec::jump_sources`].
    pub fn jump_targets(&self, u: StateId, finite_only: bool) -> Peers<'_> {
        match (&self.groups, finite_only) {
            (Some(g), true) => Peers::Listed(g.domain_members[g.group_of[u]].iter()),
            _ => Peers::Listed(self.domain.iter()),
        }
    }

    /// All distinct finite values `cost(x, y)` over ordered pairs, plus `0`.
    pub fn finite_pairwise_costs(&self) -> Vec<Cost> {
        let mut values = BTreeSet::from([Cost::ZERO]);
        for x in 0..self.len() {
            for y in self.jump_sources(x, true) {
                let c = self.cost(y, x);
                if c.is_finite() {
                    values.insert(c);
                }
            }
        }
        values.into_iter().collect()
    }

    /// Whether two distinct states are joined by a zero-cost pair, i.e. the
    /// cost fails to separate points the way a metric does.
    pub fn has_distinct_zero_cost_pair(&self) -> bool {
        (0..self.len()).any(|x| self.jump_sources(x, true).any(|y| y != x && (self.cost(x, y).is_zero() || self.cost(y, x).is_zero())))
    }

    pub fn label(&self, id: StateId) -> String {
        self.states[id].label.clone().unwrap_or_else(|| id.to_string())
    }
}

/// Iterator over candidate peers of a state.
pub enum Peers<'a> {
    Range(std::ops::Range<usize>),
    Listed(std::slice::Iter<'a, StateId>),
}

impl Iterator for Peers<'_> {
    type Item = StateId;

    fn next(&mut self) -> Option<StateId> {
        match self {
            Peers::Range(r) => r.next(),
            Peers::Listed(it) => it.next().copied(),
        }
    }
}

/// `(y, F(y), F²(y), …)` truncated after `horizon` steps or at the first dead end.
pub fn orbit(spec: &SystemSpec, y: StateId, horizon: usize) -> Vec<StateId> {
    let mut out = vec![y];
    let mut current = y;
    for _ in 0..horizon {
        match spec.successor(current) {
            Some(next) => {
                out.push(next);
                current = next;
            }
            None => break,
        }
    }
    out
}
