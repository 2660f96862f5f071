use std::f64::consts::PI;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mmd_core::BasisKind;
use serde::Serialize;

use crate::config::RuleName;
use crate::error::{CliError, Result};

/// Quasiprobability decompositions of small-angle Z rotations over noisy
/// Clifford-hierarchy channels, and the resource estimates built on them.
#[derive(Parser, Debug)]
#[command(name = "mmd", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Optimal decomposition of one rotation
    Decompose(DecomposeArgs),
    /// Λ, γ or E over a θ grid for several levels
    Sweep(SweepArgs),
    /// Small-angle γ, γ_SE and ln Λ tables
    Tables(TablesArgs),
    /// Fermi-Hubbard resource estimates from a TOML config
    Fh(FhArgs),
    /// End-to-end checks: Monte Carlo estimation or teleportation noise
    Verify(VerifyArgs),
}

/// Where results go. Not part of the manifest.
#[derive(Args, Debug, Clone, Default)]
pub struct OutArgs {
    /// Write CSV here (atomically) instead of printing records
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write a JSON run manifest with the output checksum
    #[arg(long)]
    pub manifest: Option<PathBuf>,
    /// Worker threads; 0 uses every core
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
}

#[derive(Args, Debug, Clone, Serialize)]
#[group(required = true, multiple = false)]
pub struct ThetaArgs {
    /// Target angle in radians
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<f64>,
    /// Target angle as a fraction of π, e.g. 1/32
    #[arg(long, value_name = "A/B")]
    pub theta_pi_frac: Option<String>,
}

impl ThetaArgs {
    pub fn value(&self) -> Result<f64> {
        match (&self.theta, &self.theta_pi_frac) {
            (Some(t), None) => Ok(*t),
            (None, Some(f)) => parse_pi_frac(f),
            _ => Err(CliError::Usage("give exactly one of --theta, --theta-pi-frac".into())),
        }
    }
}

/// `a/b` → `aπ/b`; a bare `a` means `aπ`.
pub fn parse_pi_frac(s: &str) -> Result<f64> {
    let bad = || CliError::Usage(format!("--theta-pi-frac expects A/B, got {s:?}"));
    let (a, b) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s.trim(), "1"),
    };
    let a: f64 = a.parse().map_err(|_| bad())?;
    let b: f64 = b.parse().map_err(|_| bad())?;
    if b == 0.0 || !a.is_finite() || !b.is_finite() {
        return Err(bad());
    }
    Ok(a * PI / b)
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BasisArg {
    ThreeChannel,
    FullG,
    Clifford,
}

impl BasisArg {
    pub fn kind(self) -> BasisKind {
        match self {
            BasisArg::ThreeChannel => BasisKind::ThreeChannel,
            BasisArg::FullG => BasisKind::FullG,
            BasisArg::Clifford => BasisKind::CliffordC,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PeffArg {
    #[default]
    LinearBound,
    Exact,
}

impl PeffArg {
    pub fn rule(self) -> RuleName {
        match self {
            PeffArg::LinearBound => RuleName::LinearBound,
            PeffArg::Exact => RuleName::Exact,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RecordFormat {
    #[default]
    Json,
    Csv,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct DecomposeArgs {
    #[command(flatten)]
    pub theta: ThetaArgs,
    #[arg(long, value_enum, default_value = "three-channel")]
    pub basis: BasisArg,
    /// Hierarchy level n (0.5 for the Clifford S)
    #[arg(long, default_value_t = 1.0)]
    pub n: f64,
    /// Dephasing on |T> preparation
    #[arg(long, default_value_t = 0.0)]
    pub p: f64,
    #[arg(long, value_enum, default_value = "linear-bound")]
    pub peff_rule: PeffArg,
    #[arg(long, value_enum, default_value = "json")]
    #[serde(skip)]
    pub format: RecordFormat,
    #[command(flatten)]
    #[serde(skip)]
    pub out: OutArgs,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Metric {
    Lambda,
    Gamma,
    #[value(name = "e", alias = "E")]
    E,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::Lambda => "lambda",
            Metric::Gamma => "gamma",
            Metric::E => "E",
        }
    }
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub metric: Metric,
    #[arg(long, default_value_t = 0.0)]
    pub theta_start: f64,
    #[arg(long, default_value_t = PI / 4.0)]
    pub theta_stop: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub theta_step: f64,
    /// Comma-separated levels
    #[arg(long, value_delimiter = ',', default_values_t = [0.5, 1.0, 2.0, 4.0, 8.0])]
    pub n: Vec<f64>,
    #[arg(long, default_value_t = 0.001)]
    pub p: f64,
    #[arg(long, value_enum, default_value = "three-channel")]
    pub basis: BasisArg,
    #[arg(long, value_enum, default_value = "linear-bound")]
    pub peff_rule: PeffArg,
    #[command(flatten)]
    #[serde(skip)]
    pub out: OutArgs,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TableFormat {
    #[default]
    Text,
    Csv,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct TablesArgs {
    #[arg(long, value_enum, default_value = "text")]
    #[serde(skip)]
    pub format: TableFormat,
    #[arg(long, value_enum, default_value = "linear-bound")]
    pub peff_rule: PeffArg,
    #[command(flatten)]
    #[serde(skip)]
    pub out: OutArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct FhArgs {
    /// TOML sweep description
    #[arg(long)]
    pub config: PathBuf,
    /// Also print the level with the fewest total magic states per (L, t)
    #[arg(long)]
    pub best: bool,
    #[command(flatten)]
    #[serde(skip)]
    pub out: OutArgs,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(subcommand)]
    pub mode: VerifyMode,
}

#[derive(Subcommand, Debug)]
pub enum VerifyMode {
    /// Estimate <X> on |+> after decomposed rotations and compare with the exact value
    Mc(McArgs),
    /// Fit the channel of a teleported T^(1/n) chain
    Teleport(TeleportArgs),
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct McArgs {
    #[arg(long, default_value_t = 0.05, allow_hyphen_values = true)]
    pub theta: f64,
    #[arg(long, default_value_t = 2.0)]
    pub n: f64,
    #[arg(long, default_value_t = 0.001)]
    pub p: f64,
    #[arg(long, value_enum, default_value = "three-channel")]
    pub basis: BasisArg,
    #[arg(long, value_enum, default_value = "linear-bound")]
    pub peff_rule: PeffArg,
    /// Rotations applied in sequence
    #[arg(long, default_value_t = 1)]
    pub gates: usize,
    #[arg(long, default_value_t = 0.02)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 0.01)]
    pub delta: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Independent runs with seeds seed, seed+1, ...
    #[arg(long, default_value_t = 1)]
    pub trials: u64,
    /// Largest sample count allowed
    #[arg(long, default_value_t = mmd_core::sampler::DEFAULT_SAMPLE_CAP)]
    pub cap: u64,
    /// Sample ±1 measurement outcomes instead of exact expectation values
    #[arg(long)]
    pub measurement: bool,
    #[command(flatten)]
    #[serde(skip)]
    pub out: OutArgs,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct TeleportArgs {
    #[arg(long, default_value_t = 2.0)]
    pub n: f64,
    #[arg(long, default_value_t = 0.001)]
    pub p: f64,
    /// Angle error on every magic state
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub alpha: f64,
    /// Pre-rotate the top magic state to cancel the coherent deviation
    #[arg(long)]
    pub calibrate: bool,
    #[arg(long, value_enum, default_value = "json")]
    #[serde(skip)]
    pub format: RecordFormat,
    #[command(flatten)]
    #[serde(skip)]
    pub out: OutArgs,
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn pi_fractions() {
        assert_eq!(parse_pi_frac("1/32").unwrap(), PI / 32.0);
        assert_eq!(parse_pi_frac("1/4").unwrap(), std::f64::consts::FRAC_PI_4);
        assert_eq!(parse_pi_frac("1").unwrap(), PI);
        assert!(parse_pi_frac("1/0").is_err());
        assert!(parse_pi_frac("x").is_err());
    }

    #[test]
    fn theta_flags_exclusive() {
        assert!(Cli::try_parse_from(["mmd", "decompose", "--theta", "1", "--theta-pi-frac", "1/4"]).is_err());
        assert!(Cli::try_parse_from(["mmd", "decompose"]).is_err());
        assert!(Cli::try_parse_from(["mmd", "decompose", "--theta", "-0.2"]).is_ok());
    }
}
