//! Run configuration: flags merged over an optional JSON file, then validated.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

/// Flags shared by every command. All are optional so that a config file can
/// fill the gaps; flags take precedence.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Number of measurement outcomes.
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Monte Carlo sample count.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Trial counts, comma separated and strictly increasing.
    #[arg(long, value_delimiter = ',')]
    pub schedule: Option<Vec<u64>>,
    /// Histogram bins or uniformity cells.
    #[arg(long)]
    pub bins: Option<usize>,
    /// Output file (directory for `figures`); stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Prior: uniform, bloch, bump, ramp or orthant-uniform.
    #[arg(long)]
    pub prior: Option<String>,
    /// Probability rule for `induced`: polarization or bloch.
    #[arg(long)]
    pub rule: Option<String>,
    /// Angle multiplier m of the polarization rule.
    #[arg(long)]
    pub multiplier: Option<u32>,
    /// Show information values in bits in tables (JSON stays in nats).
    #[arg(long)]
    pub bits: bool,
    /// JSON file with any of the keys above.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    d: Option<usize>,
    seed: Option<u64>,
    samples: Option<usize>,
    schedule: Option<ScheduleValue>,
    bins: Option<usize>,
    out: Option<PathBuf>,
    format: Option<Format>,
    prior: Option<String>,
    rule: Option<String>,
    multiplier: Option<u32>,
    bits: Option<bool>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum ScheduleValue {
    List(Vec<u64>),
    Text(String),
}

impl ScheduleValue {
    fn into_list(self) -> Result<Vec<u64>, CliError> {
        match self {
            ScheduleValue::List(v) => Ok(v),
            ScheduleValue::Text(s) => s
                .split(',')
                .map(|x| x.trim().parse::<u64>().map_err(|e| CliError::usage(format!("schedule entry '{x}': {e}"))))
                .collect(),
        }
    }
}

/// Fully resolved configuration. Serialised into every artifact; its hash
/// excludes the output path.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub d: usize,
    pub seed: u64,
    pub samples: usize,
    pub schedule: Vec<u64>,
    pub bins: Option<usize>,
    pub format: Format,
    pub prior: Option<String>,
    pub rule: String,
    pub multiplier: u32,
    pub bits: bool,
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

/// Per-command defaults applied beneath the config file and flags.
pub struct Defaults {
    pub d: usize,
    pub samples: usize,
    pub format: Format,
}

pub const DEFAULT_SEED: u64 = 0x5eed;

impl RunConfig {
    pub fn resolve(command: &str, args: &CommonArgs, defaults: Defaults) -> Result<Self, CliError> {
        let file = match &args.config {
            Some(path) => read_config(path)?,
            None => FileConfig::default(),
        };
        let schedule = match (&args.schedule, file.schedule) {
            (Some(s), _) => s.clone(),
            (None, Some(s)) => s.into_list()?,
            (None, None) => rvq::inference::DEFAULT_SCHEDULE.to_vec(),
        };
        let config = RunConfig {
            command: command.to_string(),
            d: args.d.or(file.d).unwrap_or(defaults.d),
            seed: args.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
            samples: args.samples.or(file.samples).unwrap_or(defaults.samples),
            schedule,
            bins: args.bins.or(file.bins),
            format: args.format.or(file.format).unwrap_or(defaults.format),
            prior: args.prior.clone().or(file.prior),
            rule: args.rule.clone().or(file.rule).unwrap_or_else(|| "polarization".into()),
            multiplier: args.multiplier.or(file.multiplier).unwrap_or(1),
            bits: args.bits || file.bits.unwrap_or(false),
            out: args.out.clone().or(file.out),
        };
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.d == 0 {
            return Err(CliError::usage("--d must be positive"));
        }
        if self.samples == 0 {
            return Err(CliError::usage("--samples must be positive"));
        }
        if self.bins == Some(0) {
            return Err(CliError::usage("--bins must be positive"));
        }
        if self.multiplier == 0 {
            return Err(CliError::usage("--multiplier must be positive"));
        }
        if self.schedule.contains(&0) || self.schedule.windows(2).any(|w| w[1] <= w[0]) {
            return Err(CliError::usage(format!("schedule must be positive and strictly increasing: {:?}", self.schedule)));
        }
        Ok(())
    }

    /// SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        let json = serde_json::to_vec(self).expect("config serialises");
        hex::encode(Sha256::digest(&json))
    }

    pub fn seed(&self) -> rvq::RngSeed {
        rvq::RngSeed::new(self.seed, 0)
    }
}

fn read_config(path: &Path) -> Result<FileConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::usage(format!("reading {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::usage(format!("config {}: {e}", path.display())))
}
