//! Subcommands. Each declares its keys, reads a resolved config and writes
//! its files through a [`Sink`].

mod autonomous;
mod diagram;
mod flow;
mod forced;

use crate::config::{key, ConfigError, KeySpec, Resolved};
use crate::output::Sink;
use dvdp_core::Params;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    CensusPlane,
    Cycles,
    Resonance,
    Melnikov,
    Poincare,
    Separatrix,
    Portrait,
    Diagram,
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("numeric failure: {0}")]
    Numeric(#[from] dvdp_core::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

/// What a command reports back besides its files.
#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub summary: Vec<String>,
    /// Rows or items that failed; nonzero means partial output.
    pub failures: usize,
}

pub struct Context {
    pub cfg: Resolved,
    pub workers: usize,
    pub sink: Sink,
}

const PARAMS: [&str; 5] = ["eps", "p1", "p2", "p3", "p4"];

impl Command {
    pub const ALL: [Command; 8] = [
        Command::CensusPlane,
        Command::Cycles,
        Command::Resonance,
        Command::Melnikov,
        Command::Poincare,
        Command::Separatrix,
        Command::Portrait,
        Command::Diagram,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::CensusPlane => "census-plane",
            Command::Cycles => "cycles",
            Command::Resonance => "resonance",
            Command::Melnikov => "melnikov",
            Command::Poincare => "poincare",
            Command::Separatrix => "separatrix",
            Command::Portrait => "portrait",
            Command::Diagram => "diagram",
        }
    }

    pub fn keys(self) -> Vec<KeySpec> {
        let mut k = vec![key("out", "out"), key("workers", "0")];
        k.extend_from_slice(match self {
            Command::CensusPlane => autonomous::CENSUS_KEYS,
            Command::Cycles => autonomous::CYCLES_KEYS,
            Command::Resonance => forced::RESONANCE_KEYS,
            Command::Melnikov => forced::MELNIKOV_KEYS,
            Command::Poincare => flow::POINCARE_KEYS,
            Command::Separatrix => flow::SEPARATRIX_KEYS,
            Command::Portrait => flow::PORTRAIT_KEYS,
            Command::Diagram => diagram::DIAGRAM_KEYS,
        });
        k
    }

    pub fn run(self, ctx: &mut Context) -> Result<Outcome, RunError> {
        match self {
            Command::CensusPlane => autonomous::census_plane(ctx),
            Command::Cycles => autonomous::cycles(ctx),
            Command::Resonance => forced::resonance(ctx),
            Command::Melnikov => forced::melnikov(ctx),
            Command::Poincare => flow::poincare(ctx),
            Command::Separatrix => flow::separatrix(ctx),
            Command::Portrait => flow::portrait(ctx),
            Command::Diagram => diagram::diagram(ctx),
        }
    }
}

/// (ε, p1, p2, p3, p4) from the keys that exist in `cfg`; missing ones
/// default to 0 (1 for p4).
pub(crate) fn params(cfg: &Resolved) -> Result<Params, ConfigError> {
    let get = |k: &str, d: f64| if cfg.values.contains_key(k) { cfg.f64(k) } else { Ok(d) };
    let p = Params::new(get(PARAMS[0], 0.0)?, get(PARAMS[1], 0.0)?, get(PARAMS[2], 0.0)?, get(PARAMS[3], 0.0)?, get(PARAMS[4], 1.0)?);
    if p.eps < 0.0 {
        return Err(ConfigError::Value { key: "eps".into(), message: format!("must be >= 0, got {}", p.eps) });
    }
    Ok(p)
}

pub(crate) fn require_eps(p: &Params) -> Result<(), ConfigError> {
    if p.eps <= 0.0 {
        return Err(ConfigError::Value { key: "eps".into(), message: "must be > 0 for this command".into() });
    }
    Ok(())
}
