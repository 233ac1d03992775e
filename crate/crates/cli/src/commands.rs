use std::path::Path;

use anyhow::{bail, Context, Result};
use basins::basins::{
    assemble_filtration, basin_neg, basin_pos, check_debut_lemmas, check_filtration, check_inclusion_lemmas, debut_field,
    full_grid, predicted_filtration, transition_grid, with_midpoints, BasinResult, Semantics,
};
use basins::ensemble::{best_track_debut, candidate_positions, parse_best_track, parse_tracks, SystemKind};
use basins::export::{basin_svg, basin_table_csv, best_track_csv, cluster_csv, debut_records, debut_svg, records_to_csv, records_to_json};
use basins::model::json::parts_from_json;
use basins::model::validate_system;
use basins::timeext::{check_covering, check_layer_lemma, check_separation, compare_dichotomy, partitions_dead_ends, CoveringVerdict};
use basins::{BudgetMode, Cost, Error, SystemSpec, TargetSet};
use rayon::prelude::*;

use crate::config::{InputMode, RunConfig};
use crate::load::{fmt_set, load, read_input, Loaded};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Ok,
    ChecksFailed,
}

type Files = Vec<(String, String)>;

fn write_files(out: &Path, files: &[(String, String)]) -> Result<()> {
    std::fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    for (name, contents) in files {
        let path = out.join(name);
        std::fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
        log::debug!("wrote {}", path.display());
    }
    println!("wrote {} files to {}", files.len(), out.display());
    Ok(())
}

/// Runs `job` for every (target, mode) pair in parallel, keeping input order.
fn per_target_mode<'a>(
    targets: &'a [(&'static str, TargetSet)],
    budgets: &[BudgetMode],
    job: impl Fn(&'static str, &'a TargetSet, BudgetMode) -> Result<Files> + Sync,
) -> Result<Files> {
    let jobs: Vec<(&'static str, &TargetSet, BudgetMode)> =
        targets.iter().flat_map(|(name, t)| budgets.iter().map(move |&m| (*name, t, m))).collect();
    let results: Vec<Files> = jobs.par_iter().map(|&(name, t, m)| job(name, t, m)).collect::<Result<_>>()?;
    Ok(results.into_iter().flatten().collect())
}

/// Negative basins on the grid descending, then positive basins ascending.
fn basin_family(spec: &SystemSpec, target: &TargetSet, grid: &[Cost], mode: BudgetMode, semantics: Semantics) -> Vec<BasinResult> {
    let mut family: Vec<BasinResult> = grid.iter().rev().map(|&eps| basin_neg(spec, target, eps, mode, semantics)).collect();
    family.extend(grid.iter().map(|&eps| basin_pos(spec, target, eps, mode)));
    family
}

fn basin_svgs(spec: &SystemSpec, family: &[BasinResult], name: &str, semantics: Semantics) -> Result<Files> {
    family
        .iter()
        .map(|b| {
            let stem = format!("basin_{name}_{}_{}_{}", b.mode.as_str(), semantics.as_str(), b.index);
            let title = format!("{name} basin at {} ({}, {})", b.index, b.mode.as_str(), semantics.as_str());
            Ok((format!("{stem}.svg"), basin_svg(spec, b, &title)?))
        })
        .collect()
}

pub fn validate(cfg: &RunConfig) -> Result<Outcome> {
    let text = read_input(&cfg.input)?;
    if cfg.is_json_input() {
        let parts = parts_from_json(&text).with_context(|| format!("parsing {}", cfg.input.display()))?;
        let report = validate_system(&parts);
        println!("{} states", parts.states.len());
        if report.is_clean() {
            println!("valid");
            return Ok(Outcome::Ok);
        }
        for v in &report.violations {
            println!("violation: {v}");
        }
        return Ok(Outcome::ChecksFailed);
    }
    let ds = parse_tracks(&text).with_context(|| format!("parsing {}", cfg.input.display()))?;
    println!("{} tracks, {} points", ds.tracks.len(), ds.point_count());
    let built = match cfg.mode {
        InputMode::PointCloud => basins::ensemble::build_pointcloud_system(&ds, cfg.haversine),
        InputMode::TimeExtended => basins::ensemble::build_timeextended_system(&ds, cfg.haversine),
    };
    match built {
        Ok(sys) => {
            let report = sys.spec.validate();
            println!("{} states", sys.spec.len());
            if report.is_clean() {
                println!("valid");
                Ok(Outcome::Ok)
            } else {
                println!("violation: {report}");
                Ok(Outcome::ChecksFailed)
            }
        }
        Err(e @ (Error::MixedTrackLengths(_) | Error::EmptyWindow { .. } | Error::NoSurvivingOrbit | Error::Precondition(_))) => {
            println!("violation: {e}");
            Ok(Outcome::ChecksFailed)
        }
        Err(e) => Err(e.into()),
    }
}

fn separation_summary(loaded: &Loaded, targets: &[(&'static str, TargetSet)], cfg: &RunConfig, grid: &[Cost]) -> Result<Files> {
    let [(_, good), (_, bad)] = targets else {
        return Ok(Vec::new());
    };
    let spec = &loaded.spec;
    if !partitions_dead_ends(spec, good, bad) {
        log::warn!("good and bad targets do not partition the dead ends; separation verdicts skipped");
        return Ok(Vec::new());
    }
    let mut files = Vec::new();
    for &mode in &cfg.budgets {
        let mut w = String::from("eps,partition,overlap,uncovered\n");
        for &eps in grid {
            let cmp = check_separation(spec, good, bad, eps, mode)?;
            w.push_str(&format!("{eps},{},{},{}\n", cmp.is_partition(), cmp.overlap.len(), cmp.uncovered.len()));
            println!(
                "separation {} eps={eps}: {}",
                mode.as_str(),
                if cmp.is_partition() { "G_{F,eps} and B_{F,-eps} partition the states".to_string() } else { format!("overlap {} uncovered {}", fmt_set(&cmp.overlap), fmt_set(&cmp.uncovered)) }
            );
        }
        files.push((format!("separation_{}.csv", mode.as_str()), w));
    }
    Ok(files)
}

pub fn basins(cfg: &RunConfig) -> Result<Outcome> {
    let loaded = load(cfg)?;
    let targets = loaded.targets(cfg)?;
    let grid = loaded.grid(cfg);
    let spec = &loaded.spec;
    if cfg.formats.json {
        log::warn!("basin tables are written as csv; json applies to debut fields");
    }
    let mut files = per_target_mode(&targets, &cfg.budgets, |name, target, mode| {
        let family = basin_family(spec, target, &grid, mode, cfg.semantics);
        let mut files = vec![(format!("basins_{name}_{}_{}.csv", mode.as_str(), cfg.semantics.as_str()), basin_table_csv(spec, &family)?)];
        if cfg.formats.svg {
            files.extend(basin_svgs(spec, &family, name, cfg.semantics)?);
        }
        Ok(files)
    })?;
    files.extend(separation_summary(&loaded, &targets, cfg, &grid)?);
    write_files(&cfg.out, &files)?;
    Ok(Outcome::Ok)
}

pub fn debut(cfg: &RunConfig) -> Result<Outcome> {
    let loaded = load(cfg)?;
    let targets = loaded.targets(cfg)?;
    let spec = &loaded.spec;
    if cfg.semantics == Semantics::Horizon {
        log::warn!("debut fields use dead-end semantics; --semantics horizon ignored");
    }
    let best = match &cfg.best_track {
        Some(path) => {
            if loaded.ensemble.is_none() {
                bail!("--best-track needs track input");
            }
            Some(parse_best_track(&read_input(path)?).with_context(|| format!("parsing {}", path.display()))?)
        }
        None => None,
    };
    let formats = cfg.formats;
    let files = per_target_mode(&targets, &cfg.budgets, |name, target, mode| {
        let field = debut_field(spec, target, mode);
        let records = debut_records(spec, &field, mode, Semantics::DeadEnd);
        let stem = format!("debut_{name}_{}", mode.as_str());
        let mut files = Vec::new();
        if formats.csv {
            files.push((format!("{stem}.csv"), records_to_csv(&records)?));
        }
        if formats.json {
            files.push((format!("{stem}.json"), records_to_json(&records)?));
        }
        if formats.svg {
            files.push((format!("{stem}.svg"), debut_svg(spec, &field, &format!("debut of {name} ({})", mode.as_str()))?));
        }
        if let (Some(best), Some(e)) = (&best, &loaded.ensemble) {
            let series = best_track_debut(best, &e.system, &field)?;
            files.push((format!("best_track_{name}_{}.csv", mode.as_str()), best_track_csv(&series)?));
        }
        Ok(files)
    })?;
    write_files(&cfg.out, &files)?;
    Ok(Outcome::Ok)
}

pub fn export_svg(cfg: &RunConfig) -> Result<Outcome> {
    let loaded = load(cfg)?;
    let targets = loaded.targets(cfg)?;
    let grid = loaded.grid(cfg);
    let spec = &loaded.spec;
    let files = per_target_mode(&targets, &cfg.budgets, |name, target, mode| {
        let field = debut_field(spec, target, mode);
        let mut files = vec![(format!("debut_{name}_{}.svg", mode.as_str()), debut_svg(spec, &field, &format!("debut of {name} ({})", mode.as_str()))?)];
        files.extend(basin_svgs(spec, &basin_family(spec, target, &grid, mode, cfg.semantics), name, cfg.semantics)?);
        Ok(files)
    })?;
    write_files(&cfg.out, &files)?;
    Ok(Outcome::Ok)
}

pub fn cluster(cfg: &RunConfig) -> Result<Outcome> {
    if cfg.k.is_none() {
        bail!("cluster needs --k");
    }
    let loaded = load(cfg)?;
    let (Some(e), Some(ca)) = (&loaded.ensemble, &loaded.clusters) else {
        bail!("cluster needs track input");
    };
    let states = e.system.cluster_candidates();
    let positions = candidate_positions(&e.system);
    let what = match e.system.kind {
        SystemKind::PointCloud => "all points",
        SystemKind::TimeExtended => "final layer",
    };
    println!("k-means on {} states ({what}), k = {}, seed = {}", states.len(), ca.k, ca.seed);
    for j in 0..ca.k {
        println!("cluster {j}: {} states", ca.labels.iter().filter(|&&l| l == j).count());
    }
    println!("objective {} after {} assignment steps", ca.objective_history.last().copied().unwrap_or(0.0), ca.objective_history.len());
    write_files(&cfg.out, &[("clusters.csv".to_string(), cluster_csv(&loaded.spec, &states, &positions, ca)?)])?;
    Ok(Outcome::Ok)
}

#[derive(Default)]
struct Tally {
    passed: usize,
    failed: usize,
    skipped: usize,
}

impl Tally {
    fn pass(&mut self, name: &str, detail: impl std::fmt::Display) {
        self.passed += 1;
        println!("PASS {name}: {detail}");
    }

    fn fail(&mut self, name: &str, detail: impl std::fmt::Display) {
        self.failed += 1;
        println!("FAIL {name}: {detail}");
    }

    fn skip(&mut self, name: &str, detail: impl std::fmt::Display) {
        self.skipped += 1;
        println!("SKIP {name}: {detail}");
    }

    fn verdict(&mut self, name: &str, ok: bool, detail: impl std::fmt::Display) {
        if ok {
            self.pass(name, detail)
        } else {
            self.fail(name, detail)
        }
    }
}

fn relation(small: &TargetSet, large: &TargetSet) -> &'static str {
    if small == large {
        "="
    } else if small.is_subset(large) {
        "⊊"
    } else {
        "⊄"
    }
}

pub fn check(cfg: &RunConfig) -> Result<Outcome> {
    let loaded = load(cfg)?;
    let targets = loaded.targets(cfg)?;
    let spec = &loaded.spec;
    let refs: Vec<&TargetSet> = targets.iter().map(|(_, t)| t).collect();
    let grid = match &cfg.grid {
        crate::config::Grid::Auto => transition_grid(spec, &refs),
        crate::config::Grid::Values(v) => v.clone(),
    };
    let samples = with_midpoints(&grid);
    let mut tally = Tally::default();

    for (name, target) in &targets {
        let predicted = predicted_filtration(spec, target);
        for &mode in &cfg.budgets {
            let label = format!("filtration[{name},{}]", mode.as_str());
            let verdict = check_filtration(&assemble_filtration(spec, target, &full_grid(spec), mode), &spec.all_states());
            match (&verdict, predicted) {
                (Ok(()), true) => tally.pass(&label, "basins over the full grid form a filtration"),
                (Err(v), false) => tally.pass(&label, format!("not a filtration, as predicted for a target outside the image ({v})")),
                (Ok(()), false) => tally.fail(&label, "predicted a non-filtration but the basins form one"),
                (Err(v), true) => tally.fail(&label, v),
            }
        }
        for (kind, report) in [("inclusions", check_inclusion_lemmas(spec, target, &samples)), ("debut", check_debut_lemmas(spec, target))] {
            let label = format!("{kind}[{name}]");
            for s in &report.skipped {
                tally.skip(&label, s);
            }
            let detail = match report.violations.first() {
                None => format!("{} instances hold", report.checked),
                Some(v) => format!("{} of {} instances violated, first: {v}", report.violations.len(), report.checked),
            };
            tally.verdict(&label, report.holds(), detail);
        }
    }

    if let [(_, good), (_, bad)] = targets.as_slice() {
        if partitions_dead_ends(spec, good, bad) {
            for &mode in &cfg.budgets {
                let label = format!("separation[{}]", mode.as_str());
                let broken: Vec<String> = samples
                    .iter()
                    .filter_map(|&eps| {
                        let cmp = check_separation(spec, good, bad, eps, mode).ok()?;
                        (!cmp.is_partition()).then(|| format!("eps={eps}: overlap {} uncovered {}", fmt_set(&cmp.overlap), fmt_set(&cmp.uncovered)))
                    })
                    .collect();
                match broken.first() {
                    None => tally.pass(&label, format!("G_{{F,eps}} and B_{{F,-eps}} partition the states at {} budgets", samples.len())),
                    Some(first) => tally.fail(&label, format!("{} budgets fail, first {first}", broken.len())),
                }
            }
            let report = check_covering(spec, good, bad, &grid)?;
            for (side, verdict) in [("good", &report.good), ("bad", &report.bad)] {
                let label = format!("covering[{side}]");
                match verdict {
                    CoveringVerdict::Holds => tally.pass(&label, "union of positive basins is the complement of the other target"),
                    CoveringVerdict::HypothesisNotMet => tally.skip(&label, "no orbit from the domain ends in the target"),
                    CoveringVerdict::Fails { mode, missing, extra } => {
                        tally.fail(&label, format!("{}: missing {missing:?}, extra {extra:?}", mode.as_str()))
                    }
                }
            }
        } else {
            for &mode in &cfg.budgets {
                for &eps in &grid {
                    let cmp = compare_dichotomy(spec, good, bad, eps, mode, cfg.semantics);
                    let rest = cmp.bad.complement();
                    tally.skip(
                        &format!("separation[{},eps={eps}]", mode.as_str()),
                        format!(
                            "targets do not partition the dead ends; observed G_{{F,eps}} = {} {} {} = Y - B_{{F,-eps}} ({})",
                            fmt_set(&cmp.good),
                            relation(&cmp.good, &rest),
                            fmt_set(&rest),
                            cfg.semantics.as_str()
                        ),
                    );
                }
            }
        }
    }

    if let Some(ext) = loaded.ensemble.as_ref().and_then(|e| e.system.extension.as_ref()) {
        for (name, target) in &targets {
            let base: Vec<usize> = target.iter().map(|s| ext.timed[s].base).collect();
            for &mode in &cfg.budgets {
                let label = format!("layers[{name},{}]", mode.as_str());
                let mut checked = 0;
                let mut first = None;
                for &eps in &samples {
                    let report = check_layer_lemma(ext, &base, eps, mode);
                    checked += report.checked;
                    if first.is_none() {
                        first = report.mismatches.first().map(|m| format!("eps={eps}: {} at states {:?}", m.identity, m.states));
                    }
                }
                match first {
                    None => tally.pass(&label, format!("{checked} layer identities hold")),
                    Some(f) => tally.fail(&label, f),
                }
            }
        }
    }

    println!("{} passed, {} failed, {} skipped", tally.passed, tally.failed, tally.skipped);
    Ok(if tally.failed == 0 { Outcome::Ok } else { Outcome::ChecksFailed })
}
