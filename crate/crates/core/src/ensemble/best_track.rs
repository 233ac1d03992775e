use super::build::EnsembleSystem;
use super::tracks::BestTrackPoint;
use crate::basins::DebutValue;
use crate::error::{Error, Result};
use crate::model::{Metric, StateId, SystemSpec};

/// The candidate nearest to `p` in Euclidean distance, ties to the smallest id.
pub fn nearest_state(spec: &SystemSpec, candidates: impl IntoIterator<Item = StateId>, p: [f64; 2]) -> Result<StateId> {
    let mut best: Option<(f64, StateId)> = None;
    for id in candidates {
        let coords = spec.state(id).coords.as_deref().ok_or(Error::MissingCoordinates(id))?;
        let d = Metric::Euclidean.distance(coords, &p);
        if best.is_none_or(|(bd, bid)| d < bd || (d == bd && id < bid)) {
            best = Some((d, id));
        }
    }
    best.map(|b| b.1).ok_or_else(|| Error::Precondition("no candidate states".into()))
}

/// Debut values along a reference track, read off the nearest forecast state.
/// In a time extension the `i`-th reference point is matched within layer
/// `a + i`, clamped to the final layer.
pub fn best_track_debut(best: &[BestTrackPoint], sys: &EnsembleSystem, field: &[DebutValue]) -> Result<Vec<(String, StateId, DebutValue)>> {
    if best.is_empty() {
        return Err(Error::Precondition("best track is empty".into()));
    }
    best.iter()
        .enumerate()
        .map(|(i, point)| {
            let id = match &sys.extension {
                Some(ext) => {
                    let t = ext.window.a + i.min(ext.window.span()) as i64;
                    nearest_state(&sys.spec, (0..sys.spec.len()).filter(|&s| ext.timed[s].t == t), point.position())?
                }
                None => nearest_state(&sys.spec, 0..sys.spec.len(), point.position())?,
            };
            Ok((point.timestamp.clone(), id, field[id]))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basins::debut_field;
    use crate::ensemble::build::{build_pointcloud_system, build_timeextended_system};
    use crate::ensemble::tracks::parse_tracks;
    use crate::model::{Sign, StateSet};
    use crate::reachability::BudgetMode;

    fn point(t: &str, lon: f64, lat: f64) -> BestTrackPoint {
        BestTrackPoint { timestamp: t.into(), lon, lat }
    }

    #[test]
    fn along_the_committed_track() {
        let ds = parse_tracks("track_id,member,step,lon,lat\nP,0,0,0,0\nP,0,1,0,0\nP,0,2,0,0\nQ,1,0,1,0\nQ,1,1,1,0\nQ,1,2,2,0\n").unwrap();
        let sys = build_pointcloud_system(&ds, false).unwrap();
        let b = StateSet::from_ids(6, [2]);
        let field = debut_field(&sys.spec, &b, BudgetMode::MaxPerStep);
        let best = [point("t0", 0.0, 0.1), point("t1", 0.05, 0.0), point("t2", 0.0, 0.0)];
        let series = best_track_debut(&best, &sys, &field).unwrap();
        // P's three coincident points tie; the smallest id wins
        assert!(series.iter().all(|(_, id, _)| *id == 0));
        assert!(series.iter().all(|(_, _, v)| v.sign() == Sign::Neg));
        let exact = best_track_debut(&[point("x", 2.0, 0.0)], &sys, &field).unwrap();
        assert_eq!(exact[0].1, 5);
        assert_eq!(exact[0].2, field[5]);
        assert!(best_track_debut(&[], &sys, &field).is_err());
    }

    #[test]
    fn matched_layer_by_layer() {
        let ds = parse_tracks("track_id,member,step,lon,lat\nP,0,0,0,0\nP,0,1,0,0\nP,0,2,0,0\nQ,1,0,1,0\nQ,1,1,1,0\nQ,1,2,2,0\n").unwrap();
        let sys = build_timeextended_system(&ds, false).unwrap();
        let ext = sys.extension.as_ref().unwrap();
        let field = debut_field(&sys.spec, &ext.final_states([5]), BudgetMode::MaxPerStep);
        let best = [point("t0", 1.0, 0.0), point("t1", 1.0, 0.0), point("t2", 1.9, 0.0), point("t3", 1.9, 0.0)];
        let series = best_track_debut(&best, &sys, &field).unwrap();
        let ids: Vec<StateId> = series.iter().map(|r| r.1).collect();
        assert_eq!(ids, [(0, 3), (1, 3), (2, 5), (2, 5)].map(|(t, x)| ext.state_of(t, x).unwrap()));
    }
}
