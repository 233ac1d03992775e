use anyhow::{bail, Context, Result};
use basins::basins::auto_grid;
use basins::ensemble::{
    assign_good_bad, build_pointcloud_system, build_timeextended_system, candidate_positions, kmeans, parse_tracks,
    resolve_target, ClusterAssignment, EnsembleSystem, TargetSpec, TrackDataset,
};
use basins::model::json::system_from_json;
use basins::{Cost, StateSet, SystemSpec, TargetSet};

use crate::config::{Grid, InputMode, RunConfig};

pub const KMEANS_MAX_ITERS: usize = 100;

pub struct Ensemble {
    pub dataset: TrackDataset,
    pub system: EnsembleSystem,
}

/// The loaded system plus whatever track context it came with.
pub struct Loaded {
    pub spec: SystemSpec,
    pub ensemble: Option<Ensemble>,
    pub clusters: Option<ClusterAssignment>,
}

pub fn read_input(path: &std::path::Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

pub fn load(cfg: &RunConfig) -> Result<Loaded> {
    let text = read_input(&cfg.input)?;
    if cfg.is_json_input() {
        let spec = system_from_json(&text).with_context(|| format!("loading {}", cfg.input.display()))?;
        if cfg.k.is_some() {
            log::warn!("--k ignored: clustering needs track input");
        }
        return Ok(Loaded { spec, ensemble: None, clusters: None });
    }
    let dataset = parse_tracks(&text).with_context(|| format!("parsing {}", cfg.input.display()))?;
    let system = match cfg.mode {
        InputMode::PointCloud => build_pointcloud_system(&dataset, cfg.haversine)?,
        InputMode::TimeExtended => build_timeextended_system(&dataset, cfg.haversine)?,
    };
    log::info!("{} tracks, {} points, {} states", dataset.tracks.len(), dataset.point_count(), system.spec.len());
    let clusters = cfg.k.map(|k| kmeans(&candidate_positions(&system), k, cfg.seed, KMEANS_MAX_ITERS)).transpose()?;
    Ok(Loaded { spec: system.spec.clone(), ensemble: Some(Ensemble { dataset, system }), clusters })
}

impl Loaded {
    pub fn resolve(&self, spec: &TargetSpec) -> Result<TargetSet> {
        match (&self.ensemble, spec) {
            (Some(e), _) => Ok(resolve_target(spec, &e.system, &e.dataset, self.clusters.as_ref())?),
            (None, TargetSpec::States(ids)) => {
                if let Some(&bad) = ids.iter().find(|&&id| id >= self.spec.len()) {
                    bail!("state {bad} out of range (system has {} states)", self.spec.len());
                }
                Ok(StateSet::from_ids(self.spec.len(), ids.iter().copied()))
            }
            (None, _) => bail!("member and cluster targets need track input"),
        }
    }

    /// Named targets in the order good, bad.
    pub fn targets(&self, cfg: &RunConfig) -> Result<Vec<(&'static str, TargetSet)>> {
        if let (Some(TargetSpec::Cluster(g)), Some(TargetSpec::Cluster(b)), Some(e), Some(ca)) =
            (&cfg.good, &cfg.bad, &self.ensemble, &self.clusters)
        {
            let pair = assign_good_bad(ca, *g, *b, &e.system)?;
            if let Some(w) = &pair.warning {
                log::warn!("{w}");
            }
        }
        let mut out = Vec::new();
        for (name, spec) in [("good", &cfg.good), ("bad", &cfg.bad)] {
            if let Some(spec) = spec {
                out.push((name, self.resolve(spec)?));
            }
        }
        if out.is_empty() {
            bail!("no target given (use --good and/or --bad)");
        }
        Ok(out)
    }

    pub fn grid(&self, cfg: &RunConfig) -> Vec<Cost> {
        match &cfg.grid {
            Grid::Auto => auto_grid(&self.spec),
            Grid::Values(v) => v.clone(),
        }
    }
}

/// `{1,2}` style listing.
pub fn fmt_set(set: &StateSet) -> String {
    let ids: Vec<String> = set.iter().map(|s| s.to_string()).collect();
    format!("{{{}}}", ids.join(","))
}
