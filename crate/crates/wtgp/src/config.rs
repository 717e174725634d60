//! Run configuration: defaults, then the `--params` file, then flags.
//!
//! Defaults, all in one place:
//!
//! | key | default |
//! |---|---|
//! | `search.restarts` | 32 |
//! | `search.directions` | 64 |
//! | `search.tolerance` | 1e-9 |
//! | `search.max_passes` | 2000 |
//! | `search.u_size` | `|X|+1` (wiretap), `|X||Z|+1` (GP) |
//! | `search.grid_delta` | 0.05 |
//! | `search.grid_budget` | 1e7 |
//! | `search.oracle` | false |
//! | `sim.blocklengths` | [2] |
//! | `sim.rates` | [0.25, 0.25, 0.25, 0] as (R1, R2, R~1, R~2) |
//! | `sim.eps` | 64 (typicality reduces to support consistency at small n) |
//! | `sim.codebooks` | 4 |
//! | `sim.mode` | exact |
//! | `sim.trials` | 10000 (Monte Carlo total per blocklength) |
//! | `sim.budget` | 1e8 |
//! | `sim.p_ux` | constant `U`, uniform `X` |
//! | `compare.samples` | 8 |
//! | `seed` | 0 |
//! | `qz` | the channel file's `state_dist`, else induced |
//! | `format` | csv |

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use wtgp_core::lab::{Rates, SweepMode, DEFAULT_BUDGET};
use wtgp_core::regions::{Family, SearchParams};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Capacity,
    Region,
    Transform,
    Simulate,
    Compare,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Capacity => "capacity",
            Command::Region => "region",
            Command::Transform => "transform",
            Command::Simulate => "simulate",
            Command::Compare => "compare",
        }
    }
}

/// Target state distribution.
#[derive(Debug, Clone, PartialEq)]
pub enum QzChoice {
    Uniform,
    /// The `Z` marginal under the input distribution in play.
    Induced,
    /// A JSON array of probabilities.
    File(PathBuf),
}

impl QzChoice {
    pub fn parse(s: &str) -> Self {
        match s {
            "uniform" => QzChoice::Uniform,
            "induced" => QzChoice::Induced,
            p => QzChoice::File(PathBuf::from(p)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchFile {
    pub restarts: Option<usize>,
    pub directions: Option<usize>,
    pub tolerance: Option<f64>,
    pub max_passes: Option<usize>,
    pub u_size: Option<usize>,
    pub grid_delta: Option<f64>,
    pub grid_budget: Option<u64>,
    pub oracle: Option<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeTag {
    Exact,
    Mc,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimFile {
    pub blocklengths: Option<Vec<usize>>,
    pub rates: Option<[f64; 4]>,
    pub eps: Option<f64>,
    pub codebooks: Option<u64>,
    pub mode: Option<ModeTag>,
    pub trials: Option<u64>,
    pub budget: Option<u64>,
    /// `p(u, x)` as rows over `u`.
    pub p_ux: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompareFile {
    pub samples: Option<usize>,
}

/// Contents of a `--params` file. Unknown keys are rejected.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsFile {
    #[serde(default)]
    pub search: SearchFile,
    #[serde(default)]
    pub sim: SimFile,
    #[serde(default)]
    pub compare: CompareFile,
    pub family: Option<String>,
    pub qz: Option<String>,
    pub seed: Option<u64>,
    pub format: Option<Format>,
}

impl ParamsFile {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| CliError::Json {
            path: path.to_path_buf(),
            message: e.to_string(),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimParams {
    pub blocklengths: Vec<usize>,
    pub rates: Rates,
    pub eps: f64,
    pub codebooks: u64,
    pub mode: SweepMode,
    pub budget: u128,
    pub p_ux: Option<Vec<Vec<f64>>>,
}

/// Fully resolved configuration of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub channel: PathBuf,
    pub out: PathBuf,
    pub family: Option<Family>,
    /// `None` defers to the channel file's `state_dist`, then to induced.
    pub qz: Option<QzChoice>,
    pub seed: u64,
    pub format: Format,
    pub search: SearchParams,
    pub oracle: bool,
    pub sim: SimParams,
    pub compare_samples: usize,
}

/// Command-line values that override the params file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub family: Option<String>,
    pub qz: Option<String>,
    pub seed: Option<u64>,
    pub format: Option<Format>,
    pub exact: bool,
    pub mc: Option<u64>,
}

fn positive<T: PartialOrd + Default + std::fmt::Display>(name: &str, v: T) -> CliResult<T> {
    if v > T::default() {
        Ok(v)
    } else {
        Err(CliError::Config(format!("{name} must be positive, got {v}")))
    }
}

impl RunConfig {
    pub fn resolve(
        command: Command,
        channel: PathBuf,
        out: PathBuf,
        file: ParamsFile,
        flags: Overrides,
    ) -> CliResult<Self> {
        let d = SearchParams::default();
        let s = &file.search;
        let seed = flags.seed.or(file.seed).unwrap_or(0);
        let search = SearchParams {
            restarts: positive("search.restarts", s.restarts.unwrap_or(d.restarts))?,
            directions: positive("search.directions", s.directions.unwrap_or(d.directions))?,
            tolerance: positive("search.tolerance", s.tolerance.unwrap_or(d.tolerance))?,
            max_passes: positive("search.max_passes", s.max_passes.unwrap_or(d.max_passes))?,
            u_size: s.u_size.map(|u| positive("search.u_size", u)).transpose()?,
            seed,
            grid_delta: positive("search.grid_delta", s.grid_delta.unwrap_or(d.grid_delta))?,
            grid_budget: positive("search.grid_budget", s.grid_budget.map(u128::from).unwrap_or(d.grid_budget))?,
        };
        let f = &file.sim;
        let r = f.rates.unwrap_or([0.25, 0.25, 0.25, 0.0]);
        let rates = Rates::new(r[0], r[1], r[2], r[3]).map_err(|e| CliError::Config(e.to_string()))?;
        let trials = positive("sim.trials", flags.mc.or(f.trials).unwrap_or(10_000))?;
        let tag = if flags.mc.is_some() {
            ModeTag::Mc
        } else if flags.exact {
            ModeTag::Exact
        } else {
            f.mode.unwrap_or(ModeTag::Exact)
        };
        let blocklengths = f.blocklengths.clone().unwrap_or_else(|| vec![2]);
        if blocklengths.is_empty() || blocklengths.contains(&0) {
            return Err(CliError::Config("sim.blocklengths must be non-empty and positive".into()));
        }
        let sim = SimParams {
            blocklengths,
            rates,
            eps: positive("sim.eps", f.eps.unwrap_or(64.0))?,
            codebooks: positive("sim.codebooks", f.codebooks.unwrap_or(4))?,
            mode: match tag {
                ModeTag::Exact => SweepMode::Exact,
                ModeTag::Mc => SweepMode::MonteCarlo { trials },
            },
            budget: positive("sim.budget", f.budget.map(u128::from).unwrap_or(DEFAULT_BUDGET))?,
            p_ux: f.p_ux.clone(),
        };
        let family = flags
            .family
            .or(file.family)
            .map(|t| Family::parse(&t))
            .transpose()?;
        Ok(RunConfig {
            command,
            channel,
            out,
            family,
            qz: flags.qz.or(file.qz).as_deref().map(QzChoice::parse),
            seed,
            format: flags.format.or(file.format).unwrap_or(Format::Csv),
            search,
            oracle: s.oracle.unwrap_or(false),
            sim,
            compare_samples: positive("compare.samples", file.compare.samples.unwrap_or(8))?,
        })
    }
}
