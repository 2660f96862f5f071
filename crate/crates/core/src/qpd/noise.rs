use alloc::collections::BTreeMap;

use crate::error::{in_range, Error, Result};
use crate::qpd::HierarchyLevel;

/// How the dephasing on a teleported `T^{1/n}` grows with `n`.
#[derive(Debug, Clone, PartialEq)]
pub enum PeffRule {
    /// `(2 − 1/n) p`, an upper bound on the exact value.
    LinearBound,
    /// Exact chain value for uniformly dephased magic states:
    /// `p_1 = p`, `p_n = p + (1 − 2p) p_{n/2} / 2`. Gives `3p/2 − p²` at `n = 2`.
    Exact,
    /// Caller-supplied `p_eff` per level (keyed by level index).
    Custom(BTreeMap<u8, f64>),
}

/// Base dephasing `p` on `|T⟩` preparation plus the rule that scales it.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseModel {
    p: f64,
    rule: PeffRule,
}

impl NoiseModel {
    pub fn new(p: f64, rule: PeffRule) -> Result<Self> {
        in_range("p", p, 0.0, 0.5)?;
        if p >= 0.5 {
            return Err(Error::OutOfRange {
                name: "p",
                value: p,
                lo: 0.0,
                hi: 0.5,
            });
        }
        if let PeffRule::Custom(table) = &rule {
            for (&i, &pe) in table {
                let n = HierarchyLevel::from_index(i)?.n();
                if !(0.0..0.5).contains(&pe) {
                    return Err(Error::EffectiveNoiseTooLarge { n, p_eff: pe });
                }
            }
        }
        Ok(Self { p, rule })
    }

    pub fn linear_bound(p: f64) -> Result<Self> {
        Self::new(p, PeffRule::LinearBound)
    }

    pub fn noiseless() -> Self {
        Self {
            p: 0.0,
            rule: PeffRule::LinearBound,
        }
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn rule(&self) -> &PeffRule {
        &self.rule
    }

    pub fn p_eff(&self, level: HierarchyLevel) -> Result<f64> {
        p_eff(level, self.p, &self.rule)
    }
}

/// Effective dephasing on a teleported `T^{1/n}`; zero for the Clifford `S`.
pub fn p_eff(level: HierarchyLevel, p: f64, rule: &PeffRule) -> Result<f64> {
    in_range("p", p, 0.0, 0.5)?;
    if level.is_clifford() {
        return Ok(0.0);
    }
    let pe = match rule {
        PeffRule::LinearBound => (2.0 - 1.0 / level.n()) * p,
        PeffRule::Exact => {
            let mut pe = p;
            for _ in 1..level.index() {
                pe = p + 0.5 * (1.0 - 2.0 * p) * pe;
            }
            pe
        }
        PeffRule::Custom(table) => *table
            .get(&level.index())
            .ok_or(Error::MissingCustomEntry(level.n()))?,
    };
    if pe >= 0.5 {
        return Err(Error::EffectiveNoiseTooLarge {
            n: level.n(),
            p_eff: pe,
        });
    }
    Ok(pe)
}
