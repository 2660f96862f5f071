//! Resource estimates for second-order Trotterised 2D Fermi-Hubbard evolution.
//!
//! Per Trotter step the fermionic swap network needs `8N` hopping rotations of
//! angle `τt/(4r)` and `N/2` interaction rotations of angle `ut/(4r)`, with
//! `N = 2L²` spin orbitals. Sample counts grow like `Λ^{2N_h}`, so everything
//! that can overflow is carried as a natural log.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::f64::consts::{LN_10, LN_2};

// unused once a dependency pulls std (and its inherent float methods) into the build
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{finite, in_range, Error, Result};
use crate::qpd::{expected_magic_states, ln_lambda_dephased, HierarchyLevel, NoiseModel};
use crate::sampler::ln_hoeffding_bound;

/// Coefficients of the mixed-fallback synthesis cost `a log₂(N_R/ε) + b`.
pub const SYNTH_LOG_COEFF: f64 = 0.53;
pub const SYNTH_OFFSET: f64 = 4.86;

#[derive(Debug, Clone, PartialEq)]
pub struct FhConfig {
    pub lattice_side: u32,
    pub tau: f64,
    pub u: f64,
    pub t: f64,
    pub trotter_steps: u64,
    pub level: HierarchyLevel,
    pub noise: NoiseModel,
    pub delta: f64,
    pub eps_sample_em: f64,
    /// `ε_synth + ε_trotter` for the synthesis comparison.
    pub eps_budget: f64,
    pub eps_sample_rs: f64,
    /// Trotter error constant of the swap network for this lattice; no default.
    pub w_fs: Option<f64>,
}

impl FhConfig {
    /// `τ = 1`, `u = 8τ`, `r = 10⁶`, `δ = 0.01`, `ε_EM = 0.02`, error budget
    /// `0.01`, `ε_RS = 0.01`, no `W_FS`.
    pub fn new(lattice_side: u32, t: f64, level: HierarchyLevel, noise: NoiseModel) -> Self {
        Self {
            lattice_side,
            tau: 1.0,
            u: 8.0,
            t,
            trotter_steps: 1_000_000,
            level,
            noise,
            delta: 0.01,
            eps_sample_em: 0.02,
            eps_budget: 0.01,
            eps_sample_rs: 0.01,
            w_fs: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.lattice_side == 0 {
            return Err(Error::Invalid {
                what: "lattice side",
                reason: "must be positive",
            });
        }
        if self.trotter_steps == 0 {
            return Err(Error::Invalid {
                what: "Trotter steps",
                reason: "must be positive",
            });
        }
        in_range("t", self.t, 0.0, f64::MAX)?;
        finite("tau", self.tau)?;
        finite("u", self.u)?;
        for (name, v) in [
            ("delta", self.delta),
            ("eps_sample_em", self.eps_sample_em),
            ("eps_budget", self.eps_budget),
            ("eps_sample_rs", self.eps_sample_rs),
        ] {
            in_range(name, v, f64::MIN_POSITIVE, 1.0)?;
        }
        if let Some(w) = self.w_fs {
            in_range("w_fs", w, 0.0, f64::MAX)?;
        }
        Ok(())
    }

    /// Spin orbitals `N = 2L²`.
    pub fn spin_orbitals(&self) -> u64 {
        2 * u64::from(self.lattice_side) * u64::from(self.lattice_side)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationCounts {
    pub n_h: u64,
    pub theta_h: f64,
    pub n_i: u64,
    pub theta_i: f64,
}

impl RotationCounts {
    pub fn total(&self) -> u64 {
        self.n_h + self.n_i
    }

    /// `N_h θ_h + N_i θ_i`.
    pub fn angle_sum(&self) -> f64 {
        self.n_h as f64 * self.theta_h + self.n_i as f64 * self.theta_i
    }
}

fn counts_for_steps(cfg: &FhConfig, r: u64) -> RotationCounts {
    let n = cfg.spin_orbitals();
    let rf = r as f64;
    RotationCounts {
        n_h: 8 * n * r,
        theta_h: cfg.tau * cfg.t / (4.0 * rf),
        n_i: n * r / 2,
        theta_i: cfg.u * cfg.t / (4.0 * rf),
    }
}

pub fn rotation_counts(cfg: &FhConfig) -> Result<RotationCounts> {
    cfg.validate()?;
    Ok(counts_for_steps(cfg, cfg.trotter_steps))
}

/// A positive quantity stored as its natural log; zero is `ln = −∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogCount {
    pub ln: f64,
}

impl LogCount {
    pub fn from_value(v: f64) -> Self {
        Self { ln: v.ln() }
    }

    pub fn log10(&self) -> f64 {
        self.ln / LN_10
    }

    /// Linear value; `inf` once it leaves double range.
    pub fn value(&self) -> f64 {
        self.ln.exp()
    }

    pub fn is_zero(&self) -> bool {
        self.ln == f64::NEG_INFINITY
    }

    /// Nearest integer when it fits in a `u64`.
    pub fn rounded(&self) -> Option<u64> {
        let v = self.value();
        (v.is_finite() && v < u64::MAX as f64).then(|| v.round() as u64)
    }
}

/// Mean magic states per sample: `N_h E_h + N_i E_i`.
pub fn magic_per_sample(cfg: &FhConfig) -> Result<f64> {
    let c = rotation_counts(cfg)?;
    let p_eff = cfg.noise.p_eff(cfg.level)?;
    let e_h = expected_magic_states(c.theta_h, cfg.level, p_eff)?;
    let e_i = expected_magic_states(c.theta_i, cfg.level, p_eff)?;
    Ok(c.n_h as f64 * e_h + c.n_i as f64 * e_i)
}

fn ln_lambda_pair(cfg: &FhConfig, c: &RotationCounts) -> Result<(f64, f64)> {
    let p_eff = cfg.noise.p_eff(cfg.level)?;
    let phi = cfg.level.phi();
    Ok((
        ln_lambda_dephased(c.theta_h, phi, p_eff)?,
        ln_lambda_dephased(c.theta_i, phi, p_eff)?,
    ))
}

/// `N_sample = (2 ln(2/δ)/ε²) Λ_h^{2N_h} Λ_i^{2N_i}`, before rounding up.
pub fn sample_budget(cfg: &FhConfig) -> Result<LogCount> {
    let c = rotation_counts(cfg)?;
    let (lh, li) = ln_lambda_pair(cfg, &c)?;
    let ln_lambda_total = c.n_h as f64 * lh + c.n_i as f64 * li;
    Ok(LogCount {
        ln: ln_hoeffding_bound(ln_lambda_total, cfg.eps_sample_em, cfg.delta),
    })
}

/// Best Trotter step count for direct synthesis and the resulting T count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SynthesisCost {
    pub s_opt: u64,
    pub n_r: u64,
    pub eps_synth: f64,
    /// T gates per rotation.
    pub t_synth: f64,
    /// `N_R T_synth`, one circuit.
    pub per_sample: f64,
    /// `2 ln(2/δ)/ε_RS²`.
    pub n_sample: LogCount,
    /// `N_R T_synth N_sample`.
    pub total: LogCount,
}

fn t_synth(n_r: u64, eps: f64) -> f64 {
    SYNTH_LOG_COEFF * ((n_r as f64 / eps).ln() / LN_2) + SYNTH_OFFSET
}

/// Sweep `s` upwards from the smallest step count that leaves synthesis
/// budget, keeping the minimum of `N_R(s) T_synth(s)`. The sweep stops once
/// `N_R(s)` times the cheapest possible `T_synth` exceeds the best so far.
pub fn synthesis_cost(cfg: &FhConfig) -> Result<SynthesisCost> {
    cfg.validate()?;
    let w = cfg.w_fs.ok_or(Error::MissingTrotterConstant(cfg.lattice_side))?;
    let trotter_scale = w * cfg.t * cfg.t * cfg.t;
    if !trotter_scale.is_finite() {
        return Err(Error::NonFinite("W_FS t^3"));
    }
    // ε_trotter(s) < budget  ⇔  s > sqrt(W t³ / budget)
    let mut s = ((trotter_scale / cfg.eps_budget).sqrt().floor() as u64).max(1);
    while trotter_scale / ((s as f64) * (s as f64)) >= cfg.eps_budget {
        s += 1;
    }
    let mut best: Option<(u64, u64, f64, f64)> = None;
    loop {
        let n_r = counts_for_steps(cfg, s).total();
        let eps_synth = cfg.eps_budget - trotter_scale / ((s as f64) * (s as f64));
        if let Some((_, _, _, cost)) = best {
            let floor = n_r as f64 * t_synth(n_r, cfg.eps_budget);
            if floor > cost {
                break;
            }
        }
        if eps_synth > 0.0 {
            let ts = t_synth(n_r, eps_synth);
            let cost = n_r as f64 * ts;
            if best.is_none_or(|(_, _, _, c)| cost < c) {
                best = Some((s, n_r, eps_synth, cost));
            }
        }
        s = s.checked_add(1).ok_or(Error::NoFeasibleTrotterSteps)?;
    }
    let (s_opt, n_r, eps_synth, per_sample) = best.ok_or(Error::NoFeasibleTrotterSteps)?;
    let n_sample = LogCount {
        ln: ln_hoeffding_bound(0.0, cfg.eps_sample_rs, cfg.delta),
    };
    Ok(SynthesisCost {
        s_opt,
        n_r,
        eps_synth,
        t_synth: per_sample / n_r as f64,
        per_sample,
        n_sample,
        total: LogCount {
            ln: per_sample.ln() + n_sample.ln,
        },
    })
}

/// Stabilizer-extent simulation time `c · Π ξ(θ) / ε⁴` in seconds, with
/// `ln ξ(θ) = tan(π/8) θ`. Without a calibrated `c` the result is the pure
/// scaling (`c = 1`).
pub fn classical_runtime(cfg: &FhConfig, epsilon: f64, const_factor: Option<f64>) -> Result<LogCount> {
    let c = rotation_counts(cfg)?;
    in_range("epsilon", epsilon, f64::MIN_POSITIVE, 1.0)?;
    let k = const_factor.unwrap_or(1.0);
    in_range("const_factor", k, f64::MIN_POSITIVE, f64::MAX)?;
    let tan_pi_8 = core::f64::consts::SQRT_2 - 1.0;
    Ok(LogCount {
        ln: k.ln() + tan_pi_8 * c.angle_sum() - 4.0 * epsilon.ln(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResourceEstimate {
    pub counts: RotationCounts,
    pub n_m: f64,
    pub n_sample: LogCount,
    /// `N_m · N_sample`.
    pub n_total: LogCount,
    pub synthesis: Option<SynthesisCost>,
}

/// Everything for one configuration; synthesis only when `W_FS` is set.
pub fn estimate(cfg: &FhConfig) -> Result<ResourceEstimate> {
    let counts = rotation_counts(cfg)?;
    let n_m = magic_per_sample(cfg)?;
    let n_sample = sample_budget(cfg)?;
    let synthesis = match cfg.w_fs {
        Some(_) => Some(synthesis_cost(cfg)?),
        None => None,
    };
    Ok(ResourceEstimate {
        counts,
        n_m,
        n_sample,
        n_total: LogCount {
            ln: n_m.ln() + n_sample.ln,
        },
        synthesis,
    })
}

/// Level with the fewest magic states over all samples; ties go to smaller `n`.
/// Clifford levels are skipped since they consume no magic states at all.
pub fn best_level(
    cfg: &FhConfig,
    levels: &[HierarchyLevel],
) -> Result<(HierarchyLevel, ResourceEstimate)> {
    let mut best: Option<(HierarchyLevel, ResourceEstimate)> = None;
    for &level in levels.iter().filter(|l| !l.is_clifford()) {
        let mut c = cfg.clone();
        c.level = level;
        let est = estimate(&c)?;
        let better = match &best {
            None => true,
            Some((bl, b)) => {
                est.n_total.ln < b.n_total.ln || (est.n_total.ln == b.n_total.ln && level < *bl)
            }
        };
        if better {
            best = Some((level, est));
        }
    }
    best.ok_or(Error::Invalid {
        what: "level list",
        reason: "no non-Clifford level to choose from",
    })
}

/// Smallest `W_FS` at which synthesis needs at least `ratio` times the magic
/// states of MMD. `Some(0.0)` when that already holds without Trotter error,
/// `None` when no finite `W_FS` below `w_max` does it.
pub fn break_even_w_fs(cfg: &FhConfig, ratio: f64, w_max: f64) -> Result<Option<f64>> {
    in_range("ratio", ratio, f64::MIN_POSITIVE, f64::MAX)?;
    let mmd = estimate(&FhConfig {
        w_fs: None,
        ..cfg.clone()
    })?;
    let target = ratio.ln() + mmd.n_total.ln;
    let synth_ln = |w: f64| -> Result<f64> {
        let c = FhConfig {
            w_fs: Some(w),
            ..cfg.clone()
        };
        Ok(synthesis_cost(&c)?.total.ln)
    };
    if synth_ln(0.0)? >= target {
        return Ok(Some(0.0));
    }
    if synth_ln(w_max)? < target {
        return Ok(None);
    }
    // synthesis cost is nondecreasing in W_FS; bisect in log space
    let (mut lo, mut hi) = (1e-12f64.max(w_max * 1e-30), w_max);
    if synth_ln(lo)? >= target {
        return Ok(Some(lo));
    }
    for _ in 0..200 {
        let mid = (lo * hi).sqrt();
        if synth_ln(mid)? >= target {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi / lo < 1.0 + 1e-9 {
            break;
        }
    }
    Ok(Some(hi))
}

/// One (L, t, n) point of a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FhPoint {
    pub lattice_side: u32,
    pub t: f64,
    pub level: HierarchyLevel,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FhGrid {
    pub lattice_sides: Vec<u32>,
    pub times: Vec<f64>,
    pub levels: Vec<HierarchyLevel>,
    /// Every field except `lattice_side`, `t`, `level` and `w_fs` is taken from here.
    pub base: FhConfig,
    /// `W_FS` per lattice side; synthesis columns appear only when this is set.
    pub w_fs: Option<BTreeMap<u32, f64>>,
}

impl FhGrid {
    /// Points in output order: L, then t, then n.
    pub fn points(&self) -> Vec<FhPoint> {
        let mut out = Vec::new();
        for &lattice_side in &self.lattice_sides {
            for &t in &self.times {
                for &level in &self.levels {
                    out.push(FhPoint {
                        lattice_side,
                        t,
                        level,
                    });
                }
            }
        }
        out
    }

    pub fn config(&self, pt: &FhPoint) -> Result<FhConfig> {
        let w_fs = match &self.w_fs {
            None => None,
            Some(table) => Some(
                *table
                    .get(&pt.lattice_side)
                    .ok_or(Error::MissingTrotterConstant(pt.lattice_side))?,
            ),
        };
        Ok(FhConfig {
            lattice_side: pt.lattice_side,
            t: pt.t,
            level: pt.level,
            w_fs,
            ..self.base.clone()
        })
    }

    pub fn row(&self, pt: &FhPoint) -> Result<FhRow> {
        let cfg = self.config(pt)?;
        let est = estimate(&cfg)?;
        Ok(FhRow {
            lattice_side: pt.lattice_side,
            t: pt.t,
            level: pt.level,
            p: cfg.noise.p(),
            r: cfg.trotter_steps,
            n_m: est.n_m,
            log10_n_sample: est.n_sample.log10(),
            log10_n_total: (!est.n_total.is_zero()).then(|| est.n_total.log10()),
            log10_synth_total: est.synthesis.map(|s| s.total.log10()),
            s_opt: est.synthesis.map(|s| s.s_opt),
        })
    }
}

/// One output row; `None` marks a quantity that is zero or not requested.
#[derive(Debug, Clone, PartialEq)]
pub struct FhRow {
    pub lattice_side: u32,
    pub t: f64,
    pub level: HierarchyLevel,
    pub p: f64,
    pub r: u64,
    pub n_m: f64,
    pub log10_n_sample: f64,
    pub log10_n_total: Option<f64>,
    pub log10_synth_total: Option<f64>,
    pub s_opt: Option<u64>,
}

/// All rows, sequentially, in [`FhGrid::points`] order.
pub fn sweep_rows(grid: &FhGrid) -> Result<Vec<FhRow>> {
    grid.points().iter().map(|pt| grid.row(pt)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn cfg(l: u32, t: f64, n: f64, p: f64) -> FhConfig {
        FhConfig::new(
            l,
            t,
            HierarchyLevel::from_n(n).unwrap(),
            NoiseModel::linear_bound(p).unwrap(),
        )
    }

    #[test]
    fn counts_example() {
        let c = rotation_counts(&cfg(6, 0.25, 8.0, 0.001)).unwrap();
        assert_eq!(c.n_h, 576_000_000);
        assert_eq!(c.n_i, 36_000_000);
        assert_abs_diff_eq!(c.theta_h, 6.25e-8, epsilon = 1e-22);
        assert_abs_diff_eq!(c.theta_i, 5e-7, epsilon = 1e-21);
        let small = rotation_counts(&cfg(4, 0.25, 8.0, 0.001)).unwrap();
        let big = rotation_counts(&cfg(8, 0.25, 8.0, 0.001)).unwrap();
        assert_eq!(big.n_h, 4 * small.n_h);
        assert_eq!(big.n_i, 4 * small.n_i);
    }

    #[test]
    fn zero_time() {
        let c = cfg(6, 0.0, 4.0, 0.001);
        assert_eq!(magic_per_sample(&c).unwrap(), 0.0);
        let n = sample_budget(&c).unwrap();
        assert_abs_diff_eq!(n.value(), 2.0 * 200f64.ln() / 4e-4, epsilon = 1e-6);
        assert_eq!(n.value().ceil(), 26492.0);
        let e = estimate(&c).unwrap();
        assert!(e.n_total.is_zero());
        assert_abs_diff_eq!(
            classical_runtime(&c, 0.01, Some(3.0)).unwrap().value(),
            3e8,
            epsilon = 1e-4
        );
    }

    #[test]
    fn log_space_matches_direct_product() {
        let c = FhConfig {
            trotter_steps: 10,
            ..cfg(2, 0.01, 2.0, 0.001)
        };
        let counts = rotation_counts(&c).unwrap();
        let pe = c.noise.p_eff(c.level).unwrap();
        let phi = c.level.phi();
        let lh = crate::qpd::lambda_dephased(counts.theta_h, phi, pe).unwrap();
        let li = crate::qpd::lambda_dephased(counts.theta_i, phi, pe).unwrap();
        let direct = 2.0 * 200f64.ln() / 4e-4
            * lh.powi(2 * counts.n_h as i32)
            * li.powi(2 * counts.n_i as i32);
        let got = sample_budget(&c).unwrap().value();
        assert!((got - direct).abs() <= 1e-10 * direct, "{got} {direct}");
    }

    #[test]
    fn halving_time_halves_magic() {
        let a = magic_per_sample(&cfg(6, 0.2, 4.0, 0.001)).unwrap();
        let b = magic_per_sample(&cfg(6, 0.1, 4.0, 0.001)).unwrap();
        assert!((a / b - 2.0).abs() < 1e-4);
    }

    #[test]
    fn headline_magic_count() {
        let (level, est) = best_level(
            &cfg(6, 0.25, 1.0, 0.001),
            &[0.5, 1.0, 2.0, 4.0, 8.0].map(|n| HierarchyLevel::from_n(n).unwrap()),
        )
        .unwrap();
        assert_eq!(level.n(), 8.0);
        assert!((est.n_m - 1037.0).abs() < 1.0, "{}", est.n_m);
    }

    #[test]
    fn clifford_curve_near_1e70() {
        let n = sample_budget(&cfg(6, 0.35, 0.5, 0.001)).unwrap();
        assert!((n.log10() - 70.0).abs() < 1.0, "{}", n.log10());
    }

    #[test]
    fn classical_runtime_scaling() {
        let c = cfg(6, 0.25, 8.0, 0.001);
        let a = classical_runtime(&c, 0.01, None).unwrap();
        let b = classical_runtime(&c, 0.005, None).unwrap();
        assert_abs_diff_eq!(b.ln - a.ln, 16f64.ln(), epsilon = 1e-12);
        assert!((a.value() / 5.18e17 - 1.0).abs() < 0.005, "{:e}", a.value());
    }

    #[test]
    fn synthesis_without_trotter_error() {
        let c = FhConfig {
            w_fs: Some(0.0),
            ..cfg(4, 0.5, 4.0, 0.001)
        };
        let s = synthesis_cost(&c).unwrap();
        assert_eq!(s.s_opt, 1);
        let n_r = rotation_counts(&FhConfig {
            trotter_steps: 1,
            ..c.clone()
        })
        .unwrap()
        .total();
        assert_eq!(s.n_r, n_r);
        assert_abs_diff_eq!(s.t_synth, t_synth(n_r, 0.01), epsilon = 1e-12);
    }

    #[test]
    fn synthesis_sweep_is_optimal() {
        let c = FhConfig {
            w_fs: Some(5.0),
            ..cfg(4, 0.5, 4.0, 0.001)
        };
        let s = synthesis_cost(&c).unwrap();
        let cost = |s: u64| {
            let n_r = counts_for_steps(&c, s).total();
            let eps = 0.01 - 5.0 * 0.125 / (s * s) as f64;
            (eps > 0.0).then(|| n_r as f64 * t_synth(n_r, eps))
        };
        for k in 1..2000 {
            if let Some(v) = cost(k) {
                assert!(v >= s.per_sample - 1e-6, "s={k}");
            }
        }
        assert!(t_synth(2 * 1000, 0.01) - t_synth(1000, 0.01) - 0.53 < 1e-12);
    }

    #[test]
    fn synthesis_needs_w_fs() {
        assert!(matches!(
            synthesis_cost(&cfg(6, 0.1, 4.0, 0.001)),
            Err(Error::MissingTrotterConstant(6))
        ));
    }

    #[test]
    fn break_even_is_a_threshold() {
        let c = cfg(4, 0.3, 8.0, 0.001);
        let w = break_even_w_fs(&c, 10.0, 1e12).unwrap();
        if let Some(w) = w.filter(|w| *w > 0.0) {
            let mmd = estimate(&c).unwrap().n_total.ln + 10f64.ln();
            let at = |w: f64| {
                synthesis_cost(&FhConfig {
                    w_fs: Some(w),
                    ..c.clone()
                })
                .unwrap()
                .total
                .ln
            };
            assert!(at(w * 1.001) >= mmd);
            assert!(at(w * 0.99) < mmd);
        }
    }

    #[test]
    fn grid_order_and_missing_constant() {
        let mut w = BTreeMap::new();
        w.insert(4, 1.0);
        let grid = FhGrid {
            lattice_sides: alloc::vec![4, 6],
            times: alloc::vec![0.0, 0.1],
            levels: alloc::vec![HierarchyLevel::T, HierarchyLevel::from_n(2.0).unwrap()],
            base: cfg(4, 0.0, 1.0, 0.001),
            w_fs: Some(w),
        };
        let pts = grid.points();
        assert_eq!(pts.len(), 8);
        assert_eq!((pts[1].lattice_side, pts[1].t, pts[1].level.n()), (4, 0.0, 2.0));
        assert!(matches!(
            sweep_rows(&grid),
            Err(Error::MissingTrotterConstant(6))
        ));
        let rows = sweep_rows(&FhGrid {
            lattice_sides: alloc::vec![4],
            ..grid
        })
        .unwrap();
        assert_eq!(rows[0].log10_n_total, None);
        assert_eq!(rows[0].n_m, 0.0);
        assert!(rows.iter().all(|r| r.s_opt.is_some()));
    }
}
