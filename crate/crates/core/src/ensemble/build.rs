use super::tracks::TrackDataset;
use crate::error::{Error, Result};
use crate::model::{CostModel, Metric, State, StateId, StateSet, SystemSpec};
use crate::timeext::{build_time_extension, BaseSystem, TimeExtension, TimeWindow};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SystemKind {
    PointCloud,
    TimeExtended,
}

/// Every forecast point of a dataset, flattened track by track.
#[derive(Clone, Debug, PartialEq)]
pub struct FlatPoints {
    pub coords: Vec<[f64; 2]>,
    pub track: Vec<usize>,
    pub step: Vec<usize>,
}

impl FlatPoints {
    pub fn new(ds: &TrackDataset) -> Self {
        let mut flat = FlatPoints { coords: Vec::new(), track: Vec::new(), step: Vec::new() };
        for (k, track) in ds.tracks.iter().enumerate() {
            for (s, &p) in track.points.iter().enumerate() {
                flat.coords.push(p);
                flat.track.push(k);
                flat.step.push(s);
            }
        }
        flat
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// The next point of the same track.
    pub fn successor(&self, i: usize) -> Option<usize> {
        (i + 1 < self.len() && self.track[i + 1] == self.track[i]).then_some(i + 1)
    }

    pub fn label(&self, ds: &TrackDataset, i: usize) -> String {
        format!("{}:{}", ds.tracks[self.track[i]].id, self.step[i])
    }
}

/// A system built from track data, with the forecast point behind each state.
#[derive(Clone, Debug)]
pub struct EnsembleSystem {
    pub kind: SystemKind,
    pub spec: SystemSpec,
    pub points: FlatPoints,
    /// Forecast point index of every state.
    pub point_of: Vec<usize>,
    pub extension: Option<TimeExtension>,
}

impl EnsembleSystem {
    /// States whose positions are clustered when choosing targets: every
    /// state of a point cloud, the final layer of a time extension.
    pub fn cluster_candidates(&self) -> Vec<StateId> {
        match self.kind {
            SystemKind::PointCloud => (0..self.spec.len()).collect(),
            SystemKind::TimeExtended => self.spec.dead_ends().to_vec(),
        }
    }

    pub fn position(&self, state: StateId) -> [f64; 2] {
        self.points.coords[self.point_of[state]]
    }

    /// States whose forecast point belongs to one of the listed tracks. For a
    /// point cloud these are the last points of the tracks; for a time
    /// extension, the final-layer states at any point of the tracks.
    pub fn track_targets(&self, tracks: &[usize]) -> StateSet {
        let dead = self.spec.dead_ends();
        StateSet::from_predicate(self.spec.len(), |s| dead.contains(s) && tracks.contains(&self.points.track[self.point_of[s]]))
    }
}

fn metric_of(haversine: bool) -> Metric {
    if haversine {
        Metric::HaversineKm
    } else {
        Metric::Euclidean
    }
}

/// The flat base map: every forecast point mapped to the next point of its track.
pub fn base_system(ds: &TrackDataset, haversine: bool) -> BaseSystem {
    let points = FlatPoints::new(ds);
    BaseSystem {
        labels: (0..points.len()).map(|i| points.label(ds, i)).collect(),
        coords: points.coords.iter().map(|p| p.to_vec()).collect(),
        map: (0..points.len()).map(|i| points.successor(i)).collect(),
        metric: metric_of(haversine),
    }
}

/// One state per forecast point, successor the next point of the track, cost
/// the distance between positions.
pub fn build_pointcloud_system(ds: &TrackDataset, haversine: bool) -> Result<EnsembleSystem> {
    let points = FlatPoints::new(ds);
    if points.is_empty() {
        return Err(Error::Precondition("dataset has no forecast points".into()));
    }
    let states = (0..points.len())
        .map(|i| State { label: Some(points.label(ds, i)), coords: Some(points.coords[i].to_vec()), layer: None })
        .collect();
    let successor = (0..points.len()).map(|i| points.successor(i)).collect();
    let spec = SystemSpec::new(states, successor, CostModel::Coordinates(metric_of(haversine))).map_err(Error::Invalid)?;
    let point_of = (0..points.len()).collect();
    Ok(EnsembleSystem { kind: SystemKind::PointCloud, spec, points, point_of, extension: None })
}

/// The time extension of the flat base map over `[0, s]`, where every track
/// has `s + 1` steps.
pub fn build_timeextended_system(ds: &TrackDataset, haversine: bool) -> Result<EnsembleSystem> {
    let Some(first) = ds.tracks.first() else {
        return Err(Error::Precondition("dataset has no tracks".into()));
    };
    let len = first.points.len();
    let offending: Vec<String> =
        ds.tracks.iter().filter(|t| t.points.len() != len).map(|t| format!("{} ({} steps)", t.id, t.points.len())).collect();
    if !offending.is_empty() {
        return Err(Error::MixedTrackLengths(format!("expected {len} steps; {}", offending.join(", "))));
    }
    let window = TimeWindow::new(0, len as i64 - 1)?;
    let ext = build_time_extension(&base_system(ds, haversine), window)?;
    let point_of = ext.timed.iter().map(|s| s.base).collect();
    Ok(EnsembleSystem {
        kind: SystemKind::TimeExtended,
        spec: ext.spec.clone(),
        points: FlatPoints::new(ds),
        point_of,
        extension: Some(ext),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::tracks::parse_tracks;
    use crate::model::Cost;

    fn fixture() -> TrackDataset {
        parse_tracks("track_id,member,step,lon,lat\nP,0,0,0,0\nP,0,1,0,0\nP,0,2,0,0\nQ,1,0,1,0\nQ,1,1,1,0\nQ,1,2,2,0\n").unwrap()
    }

    #[test]
    fn pointcloud_of_fixture() {
        let sys = build_pointcloud_system(&fixture(), false).unwrap();
        assert_eq!(sys.spec.len(), 6);
        assert_eq!(sys.spec.dead_ends().to_vec(), vec![2, 5]);
        assert_eq!(sys.spec.successor(3), Some(4));
        assert_eq!(sys.spec.cost(2, 5), Cost::of(2.0));
        assert_eq!(sys.spec.label(4), "Q:1");
        assert_eq!(sys.track_targets(&[1]).to_vec(), vec![5]);
    }

    #[test]
    fn single_point_track() {
        let ds = parse_tracks("track_id,member,step,lon,lat\nA,0,0,3,4\n").unwrap();
        let sys = build_pointcloud_system(&ds, false).unwrap();
        assert_eq!(sys.spec.len(), 1);
        assert!(sys.spec.domain().is_empty());
        assert!(matches!(build_timeextended_system(&ds, false), Err(Error::EmptyWindow { .. })));
    }

    #[test]
    fn timeextended_matches_direct_construction() {
        let ds = fixture();
        let sys = build_timeextended_system(&ds, false).unwrap();
        let direct = build_time_extension(&base_system(&ds, false), TimeWindow::new(0, 2).unwrap()).unwrap();
        assert_eq!(sys.spec.to_parts(), direct.spec.to_parts());
        assert_eq!(sys.spec.len(), 12);
        assert_eq!(sys.cluster_candidates().len(), 6);
        assert_eq!(sys.track_targets(&[1]).len(), 3);
    }

    #[test]
    fn mixed_lengths_are_listed() {
        let ds = parse_tracks("track_id,member,step,lon,lat\nA,0,0,0,0\nA,0,1,0,0\nB,1,0,1,1\n").unwrap();
        let err = build_timeextended_system(&ds, false).unwrap_err();
        assert!(err.to_string().contains("B (1 steps)"), "{err}");
    }

    #[test]
    fn single_track_extension() {
        let ds = parse_tracks("track_id,member,step,lon,lat\nA,0,0,0,0\nA,0,1,1,0\nA,0,2,2,0\n").unwrap();
        let sys = build_timeextended_system(&ds, false).unwrap();
        // layer t holds the points of steps 0..=t
        assert_eq!(sys.spec.len(), 1 + 2 + 3);
    }
}
