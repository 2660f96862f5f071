//! TOML configuration for Fermi-Hubbard sweeps.
//!
//! ```toml
//! lattice_sides = [4, 6, 8]
//! t = { start = 0.0, stop = 0.4, step = 0.01 }   # or t = [0.1, 0.25]
//! n = [0.5, 1, 2, 4, 8]
//! p = 0.001
//! r = 1000000
//!
//! [w_fs]            # optional; enables the synthesis columns
//! 4 = 1.0
//! 6 = 1.0
//! 8 = 1.0
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use mmd_core::fermi_hubbard::{FhConfig, FhGrid};
use mmd_core::{HierarchyLevel, NoiseModel, PeffRule};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::output::read_to_string;

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(untagged)]
pub enum TimeSpec {
    List(Vec<f64>),
    Range { start: f64, stop: f64, step: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RuleName {
    #[default]
    LinearBound,
    Exact,
}

impl RuleName {
    pub fn rule(self) -> PeffRule {
        match self {
            RuleName::LinearBound => PeffRule::LinearBound,
            RuleName::Exact => PeffRule::Exact,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct FhFile {
    pub lattice_sides: Vec<u32>,
    pub t: TimeSpec,
    pub n: Vec<f64>,
    pub p: f64,
    #[serde(default = "default_r")]
    pub r: u64,
    #[serde(default = "one")]
    pub tau: f64,
    /// Defaults to `8 τ`.
    #[serde(default)]
    pub u: Option<f64>,
    #[serde(default = "default_delta")]
    pub delta: f64,
    #[serde(default = "default_eps_em")]
    pub eps_sample_em: f64,
    #[serde(default = "default_budget")]
    pub eps_budget: f64,
    #[serde(default = "default_budget")]
    pub eps_sample_rs: f64,
    #[serde(default)]
    pub peff_rule: RuleName,
    /// Keys are lattice sides.
    #[serde(default)]
    pub w_fs: Option<BTreeMap<String, f64>>,
    /// Precision for the stabilizer-extent runtime summary.
    #[serde(default)]
    pub classical_epsilon: Option<f64>,
    /// Seconds per unit extent; without it the runtime is scaling only.
    #[serde(default)]
    pub classical_const: Option<f64>,
}

fn default_r() -> u64 {
    1_000_000
}
fn one() -> f64 {
    1.0
}
fn default_delta() -> f64 {
    0.01
}
fn default_eps_em() -> f64 {
    0.02
}
fn default_budget() -> f64 {
    0.01
}

/// `start, start + step, ...` up to `stop` inclusive, without accumulating
/// round-off.
pub fn range(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if !(start.is_finite() && stop.is_finite() && step.is_finite()) || step <= 0.0 {
        return Err(CliError::Usage(format!(
            "bad range start={start} stop={stop} step={step}"
        )));
    }
    if stop < start {
        return Ok(Vec::new());
    }
    let count = ((stop - start) / step + 1e-9).floor() as u64 + 1;
    Ok((0..count).map(|i| start + i as f64 * step).collect())
}

impl FhFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = read_to_string(path)?;
        toml::from_str(&text).map_err(|e| CliError::Config {
            path: path.to_path_buf(),
            message: e.message().to_string(),
        })
    }

    pub fn times(&self) -> Result<Vec<f64>> {
        match &self.t {
            TimeSpec::List(v) => Ok(v.clone()),
            TimeSpec::Range { start, stop, step } => range(*start, *stop, *step),
        }
    }

    fn w_fs_table(&self, path: &Path) -> Result<Option<BTreeMap<u32, f64>>> {
        let Some(raw) = &self.w_fs else {
            return Ok(None);
        };
        let mut out = BTreeMap::new();
        for (k, &v) in raw {
            let l: u32 = k.trim().parse().map_err(|_| CliError::Config {
                path: path.to_path_buf(),
                message: format!("w_fs key {k:?} is not a lattice side"),
            })?;
            out.insert(l, v);
        }
        for l in &self.lattice_sides {
            if !out.contains_key(l) {
                return Err(CliError::Config {
                    path: path.to_path_buf(),
                    message: format!("missing field w_fs.{l} (Trotter-error constant W_FS for L = {l})"),
                });
            }
        }
        Ok(Some(out))
    }

    pub fn grid(&self, path: &Path) -> Result<FhGrid> {
        let levels = self
            .n
            .iter()
            .map(|&n| HierarchyLevel::from_n(n))
            .collect::<mmd_core::Result<Vec<_>>>()?;
        let noise = NoiseModel::new(self.p, self.peff_rule.rule())?;
        let base = FhConfig {
            tau: self.tau,
            u: self.u.unwrap_or(8.0 * self.tau),
            trotter_steps: self.r,
            delta: self.delta,
            eps_sample_em: self.eps_sample_em,
            eps_budget: self.eps_budget,
            eps_sample_rs: self.eps_sample_rs,
            ..FhConfig::new(1, 0.0, HierarchyLevel::T, noise)
        };
        Ok(FhGrid {
            lattice_sides: self.lattice_sides.clone(),
            times: self.times()?,
            levels,
            base,
            w_fs: self.w_fs_table(path)?,
        })
    }
}
