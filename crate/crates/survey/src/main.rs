use clap::{Args, Parser, Subcommand};
use dvdp_survey::commands::{Command, Context, RunError};
use dvdp_survey::config::{parse_file, parse_override, ConfigError, ConfigLayers};
use dvdp_survey::output::Sink;
use dvdp_survey::pool::worker_count;
use dvdp_survey::presets;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

/// Cycle census, resonance zones, Melnikov thresholds and manifold
/// computations for the asymmetric Duffing–Van der Pol oscillator.
#[derive(Parser, Debug)]
#[command(name = "dvdp-survey", version, arg_required_else_help = true)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Option<Sub>,
}

#[derive(Args, Debug)]
struct Global {
    /// Config file of `key = value` lines.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Override one key (repeatable), e.g. --set p2=0.5.
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    set: Vec<String>,
    /// Start from a named reference parameter set (see `presets`).
    #[arg(long, global = true)]
    repro: Option<String>,
    /// Output directory (overrides the `out` key).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads; 0 lets the pool decide. Also DVDP_WORKERS.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Leave the generation time out of SVG files.
    #[arg(long, global = true)]
    no_timestamp: bool,
}

#[derive(Subcommand, Debug)]
enum Sub {
    /// Cycle census over a (p1, p2) grid.
    CensusPlane,
    /// Limit cycles at one (p1, p2).
    Cycles,
    /// Resonance zones and their classification.
    Resonance {
        /// Also integrate the averaged pendulum of each zone.
        #[arg(long)]
        portrait: bool,
    },
    /// Melnikov function of both loops.
    Melnikov,
    /// Orbits of the stroboscopic map.
    Poincare,
    /// Saddle, invariant manifolds and their splitting.
    Separatrix,
    /// Autonomous phase portrait of a census domain.
    Portrait,
    /// Tangency lines in the (p2, p3) plane.
    Diagram {
        /// Draw the first-order lines (on unless `analytic = false`).
        #[arg(long)]
        analytic: bool,
        /// Trace the tangency curves numerically.
        #[arg(long)]
        numeric: bool,
    },
    /// List the reference parameter sets.
    Presets,
}

fn command_by_name(name: &str) -> Option<Command> {
    Command::ALL.into_iter().find(|c| c.name() == name)
}

fn run(cli: Cli) -> Result<(Command, dvdp_survey::commands::Outcome, Sink), RunError> {
    let g = cli.global;
    let mut layers = ConfigLayers::default();
    let mut preset_cmd = None;
    if let Some(name) = &g.repro {
        let (cmd, kv) = presets::lookup(name)?;
        preset_cmd = command_by_name(cmd);
        layers.preset = kv;
    }
    let mut flags: Vec<(String, String)> = Vec::new();
    let cmd = match cli.command {
        Some(Sub::CensusPlane) => Command::CensusPlane,
        Some(Sub::Cycles) => Command::Cycles,
        Some(Sub::Resonance { portrait }) => {
            if portrait {
                flags.push(("portrait".into(), "true".into()));
            }
            Command::Resonance
        }
        Some(Sub::Melnikov) => Command::Melnikov,
        Some(Sub::Poincare) => Command::Poincare,
        Some(Sub::Separatrix) => Command::Separatrix,
        Some(Sub::Portrait) => Command::Portrait,
        Some(Sub::Diagram { analytic, numeric }) => {
            for (k, on) in [("analytic", analytic), ("numeric", numeric)] {
                if on {
                    flags.push((k.into(), "true".into()));
                }
            }
            Command::Diagram
        }
        Some(Sub::Presets) => unreachable!("handled before run"),
        None => preset_cmd.ok_or_else(|| ConfigError::Invalid("no command given".into()))?,
    };
    if let Some(path) = &g.config {
        layers.user = parse_file(path)?;
    }
    for s in &g.set {
        let (k, v) = parse_override(s)?;
        layers.user.insert(k, v);
    }
    for (k, v) in flags {
        layers.user.insert(k, v);
    }
    if let Some(out) = &g.out {
        layers.user.insert("out".into(), out.display().to_string());
    }
    let cfg = layers.resolve(cmd.name(), &cmd.keys())?;
    let workers = worker_count(g.workers, cfg.usize("workers")?);
    let sink = Sink::new(cfg.raw("out"), !g.no_timestamp)?;
    let mut ctx = Context { cfg, workers, sink };
    let outcome = cmd.run(&mut ctx)?;
    Ok((cmd, outcome, ctx.sink))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if matches!(cli.command, Some(Sub::Presets)) {
        for (name, cmd) in presets::names() {
            println!("{name:<8} {cmd}");
        }
        return ExitCode::SUCCESS;
    }
    let start = Instant::now();
    match run(cli) {
        Ok((cmd, outcome, sink)) => {
            for line in &outcome.summary {
                println!("{line}");
            }
            for p in &sink.written {
                println!("wrote {}", p.display());
            }
            // timing goes to the terminal only, never into the files
            println!("{} finished in {:.2} s", cmd.name(), start.elapsed().as_secs_f64());
            if outcome.failures > 0 {
                eprintln!("partial output: {} failed items", outcome.failures);
                ExitCode::from(3)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                RunError::Config(_) => 2,
                RunError::Numeric(_) => 3,
                RunError::Io(_) => 1,
            })
        }
    }
}
