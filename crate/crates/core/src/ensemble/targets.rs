use std::str::FromStr;

use super::build::{EnsembleSystem, SystemKind};
use super::kmeans::ClusterAssignment;
use super::tracks::TrackDataset;
use crate::error::{Error, Result};
use crate::model::{StateId, StateSet, TargetSet};

/// How a target set is named on the command line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TargetSpec {
    /// `states:1,2` or bare `1,2`.
    States(Vec<StateId>),
    /// `members:0,3`: the final states of those ensemble members' tracks.
    Members(Vec<i64>),
    /// `cluster:6`.
    Cluster(usize),
}

fn parse_list<T: FromStr>(text: &str) -> std::result::Result<Vec<T>, String> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<T>().map_err(|_| format!("invalid entry {s:?}")))
        .collect()
}

impl FromStr for TargetSpec {
    type Err = String;

    fn from_str(text: &str) -> std::result::Result<Self, String> {
        let text = text.trim();
        match text.split_once(':') {
            Some(("states", rest)) => parse_list(rest).map(TargetSpec::States),
            Some(("members", rest)) => parse_list(rest).map(TargetSpec::Members),
            Some(("cluster", rest)) => rest.trim().parse().map(TargetSpec::Cluster).map_err(|_| format!("invalid cluster id {rest:?}")),
            Some((kind, _)) => Err(format!("unknown target kind {kind:?} (expected states, members or cluster)")),
            None => parse_list(text).map(TargetSpec::States),
        }
    }
}

/// Resolves a target against a system built from `ds`. Cluster targets need
/// an assignment over [`EnsembleSystem::cluster_candidates`].
pub fn resolve_target(spec: &TargetSpec, sys: &EnsembleSystem, ds: &TrackDataset, clusters: Option<&ClusterAssignment>) -> Result<TargetSet> {
    let n = sys.spec.len();
    match spec {
        TargetSpec::States(ids) => {
            if let Some(&bad) = ids.iter().find(|&&id| id >= n) {
                return Err(Error::Precondition(format!("state {bad} out of range (system has {n} states)")));
            }
            Ok(StateSet::from_ids(n, ids.iter().copied()))
        }
        TargetSpec::Members(members) => {
            let tracks: Vec<usize> = (0..ds.tracks.len()).filter(|&k| members.contains(&ds.tracks[k].member)).collect();
            if tracks.is_empty() {
                return Err(Error::Precondition(format!("no track belongs to members {members:?}")));
            }
            Ok(sys.track_targets(&tracks))
        }
        TargetSpec::Cluster(id) => {
            let ca = clusters.ok_or_else(|| Error::Precondition("cluster targets need a clustering (pass --k)".into()))?;
            cluster_states(ca, *id, sys)
        }
    }
}

fn cluster_states(ca: &ClusterAssignment, id: usize, sys: &EnsembleSystem) -> Result<TargetSet> {
    if id >= ca.k {
        return Err(Error::Precondition(format!("cluster {id} out of range (k = {})", ca.k)));
    }
    let candidates = sys.cluster_candidates();
    if candidates.len() != ca.labels.len() {
        return Err(Error::Precondition("clustering was computed for a different system".into()));
    }
    Ok(StateSet::from_ids(sys.spec.len(), candidates.iter().zip(&ca.labels).filter(|(_, &l)| l == id).map(|(&s, _)| s)))
}

/// Good and bad targets from two clusters.
#[derive(Clone, Debug, PartialEq)]
pub struct GoodBad {
    pub good: TargetSet,
    pub bad: TargetSet,
    /// Set when a time-extended pair does not partition the final layer;
    /// separation checks refuse such pairs.
    pub warning: Option<String>,
}

pub fn assign_good_bad(ca: &ClusterAssignment, good_id: usize, bad_id: usize, sys: &EnsembleSystem) -> Result<GoodBad> {
    if good_id == bad_id {
        return Err(Error::Precondition(format!("good and bad clusters must differ (both {good_id})")));
    }
    let good = cluster_states(ca, good_id, sys)?;
    let bad = cluster_states(ca, bad_id, sys)?;
    let warning = (sys.kind == SystemKind::TimeExtended && good.union(&bad) != sys.spec.dead_ends())
        .then(|| format!("clusters {good_id} and {bad_id} do not partition the final layer"));
    Ok(GoodBad { good, bad, warning })
}

/// Positions of the clustering candidates, in candidate order.
pub fn candidate_positions(sys: &EnsembleSystem) -> Vec<[f64; 2]> {
    sys.cluster_candidates().iter().map(|&s| sys.position(s)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::build::{build_pointcloud_system, build_timeextended_system};
    use crate::ensemble::kmeans::kmeans;
    use crate::ensemble::tracks::parse_tracks;

    fn fixture() -> TrackDataset {
        parse_tracks("track_id,member,step,lon,lat\nP,0,0,0,0\nP,0,1,0,0\nP,0,2,0,0\nQ,1,0,1,0\nQ,1,1,1,0\nQ,1,2,2,0\n").unwrap()
    }

    #[test]
    fn parses_target_syntax() {
        assert_eq!("states:1,2".parse(), Ok(TargetSpec::States(vec![1, 2])));
        assert_eq!("4, 5".parse(), Ok(TargetSpec::States(vec![4, 5])));
        assert_eq!("members:3".parse(), Ok(TargetSpec::Members(vec![3])));
        assert_eq!("cluster:6".parse(), Ok(TargetSpec::Cluster(6)));
        assert!("colour:1".parse::<TargetSpec>().is_err());
        assert!("states:x".parse::<TargetSpec>().is_err());
    }

    #[test]
    fn final_positions_cluster_into_good_and_bad() {
        let ds = fixture();
        let sys = build_pointcloud_system(&ds, false).unwrap();
        let finals: Vec<[f64; 2]> = [2, 5].iter().map(|&s| sys.position(s)).collect();
        let ca = kmeans(&finals, 2, 1, 20).unwrap();
        let good_id = ca.labels[1];
        let bad_id = ca.labels[0];
        // cluster the final points only, via explicit state targets
        let good = StateSet::from_ids(6, [5]);
        assert_eq!(resolve_target(&TargetSpec::Members(vec![1]), &sys, &ds, None).unwrap(), good);
        assert_ne!(good_id, bad_id);
    }

    #[test]
    fn timeextended_clusters_partition_final_layer() {
        let ds = fixture();
        let sys = build_timeextended_system(&ds, false).unwrap();
        let ca = kmeans(&candidate_positions(&sys), 2, 3, 20).unwrap();
        let gb = assign_good_bad(&ca, 0, 1, &sys).unwrap();
        assert!(gb.warning.is_none());
        assert_eq!(gb.good.union(&gb.bad), sys.spec.dead_ends());
        assert!(assign_good_bad(&ca, 1, 1, &sys).is_err());
        let p = resolve_target(&TargetSpec::Members(vec![0]), &sys, &ds, None).unwrap();
        let q = resolve_target(&TargetSpec::Members(vec![1]), &sys, &ds, None).unwrap();
        assert_eq!(p.union(&q), sys.spec.dead_ends());
        assert!(p.is_disjoint(&q));
    }

    #[test]
    fn three_clusters_leave_a_warning() {
        let ds = fixture();
        let sys = build_timeextended_system(&ds, false).unwrap();
        let ca = kmeans(&candidate_positions(&sys), 3, 3, 20).unwrap();
        let gb = assign_good_bad(&ca, 0, 1, &sys).unwrap();
        assert!(gb.warning.is_some());
        assert!(resolve_target(&TargetSpec::Cluster(5), &sys, &ds, Some(&ca)).is_err());
    }
}
