//! Ensemble forecast tracks: parsing, system construction, clustering and
//! target selection.

mod best_track;
mod build;
mod kmeans;
mod targets;
mod tracks;

pub use best_track::{best_track_debut, nearest_state};
pub use build::{base_system, build_pointcloud_system, build_timeextended_system, EnsembleSystem, FlatPoints, SystemKind};
pub use kmeans::{kmeans, ClusterAssignment};
pub use targets::{assign_good_bad, candidate_positions, resolve_target, GoodBad, TargetSpec};
pub use tracks::{parse_best_track, parse_tracks, serialize_tracks, BestTrackPoint, Track, TrackDataset};
