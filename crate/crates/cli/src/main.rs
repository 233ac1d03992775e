//! `basins` command-line tool.

mod commands;
mod config;
mod load;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::Outcome;
use config::{Opts, RunConfig};

#[derive(Parser, Debug)]
#[command(name = "basins", version, about = "Controlled attracting basins and debut fields of finite partial-map systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Check system invariants or track data
    Validate,
    /// Basin membership tables across the eps grid
    Basins,
    /// Debut fields per target and budget mode
    Debut,
    /// Run the lemma and theorem checks
    Check,
    /// k-means clustering of track positions
    Cluster,
    /// Best-track debut series (needs --best-track)
    BestTrack,
    /// SVG scatters of debut fields and basins
    ExportSvg,
}

fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    let cfg = RunConfig::resolve(&cli.opts)?;
    log::debug!("{cfg:?}");
    match cli.command {
        Command::Validate => commands::validate(&cfg),
        Command::Basins => commands::basins(&cfg),
        Command::Debut => commands::debut(&cfg),
        Command::Check => commands::check(&cfg),
        Command::Cluster => commands::cluster(&cfg),
        Command::BestTrack => {
            if cfg.best_track.is_none() {
                anyhow::bail!("best-track needs --best-track");
            }
            commands::debut(&RunConfig { formats: config::Formats::default(), ..cfg })
        }
        Command::ExportSvg => commands::export_svg(&cfg),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("BASIN_LOG", "warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::ChecksFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
