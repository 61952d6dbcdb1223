//! Command-line front end of the lab: configuration, subcommands, curve
//! tables, reports and figures.

pub mod cmd;
pub mod config;
pub mod error;
pub mod output;
pub mod svg;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use cmd::Context;
use config::{AtlasParams, BlowupParams, FlowParams, RunConfig, SolitonParams, SymmetryParams};
use error::CliResult;

#[derive(Debug, Parser)]
#[command(name = "lmcf", version, about = "Equivariant Lagrangian mean curvature flow lab")]
pub struct Cli {
    /// TOML run configuration; flags override its keys.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, short, global = true)]
    pub verbose: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample a classified soliton and check its equation.
    Soliton(SolitonParams),
    /// Evolve a profile curve.
    Flow(FlowParams),
    /// Type I and Type II blowups of a singular flow run.
    Blowup(BlowupParams),
    /// Moment map, orbit and cyclic-order checks for a group action.
    Symmetry(SymmetryParams),
    /// Every closed shrinker up to a bound on q.
    Atlas(AtlasParams),
}

pub fn run(cli: Cli) -> CliResult<()> {
    let file = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let config_dir = cli.config.as_ref().and_then(|p| p.parent().map(|d| d.to_path_buf()));
    let out = cli
        .out
        .clone()
        .or_else(|| file.out.as_ref().map(|o| config::resolve_path(config_dir.as_deref(), o)))
        .unwrap_or_else(|| PathBuf::from("lmcf-out"));
    let ctx = Context { out, seed: cli.seed.or(file.seed).unwrap_or(0), verbose: cli.verbose, config_dir };
    match cli.command {
        Command::Soliton(p) => cmd::soliton::run(&ctx, &file.soliton.overlay(p)),
        Command::Flow(p) => cmd::flow::run(&ctx, &file.flow.overlay(p)),
        Command::Blowup(p) => cmd::blowup::run(&ctx, &file.blowup.overlay(p)),
        Command::Symmetry(p) => cmd::symmetry::run(&ctx, &file.symmetry.overlay(p)),
        Command::Atlas(p) => cmd::atlas::run(&ctx, &file.atlas.overlay(p)),
    }
}
