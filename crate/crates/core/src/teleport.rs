//! Exact simulation of generalised gate teleportation with mixed magic states.
//!
//! One step: CNOT from the data qubit onto the magic qubit, Z measurement of
//! the magic qubit, and on outcome 1 a correction `T^{2/n}` taken from one
//! level down. Both outcomes are summed with their Born weights, so the
//! result is the outcome-averaged channel with no sampling noise.

use alloc::vec::Vec;
use core::f64::consts::PI;

// unused once a dependency pulls std (and its inherent float methods) into the build
#[allow(unused_imports)]
use num_traits::Float;

use crate::channel::{DensityMatrix, DiagonalChannel};
use crate::error::{finite, Error, Result};
use crate::linalg::{CMatrix, C64, ONE, ZERO};
use crate::qpd::HierarchyLevel;
use crate::tol;

/// A single-qubit resource state for teleporting `T^{1/n}`.
#[derive(Debug, Clone, PartialEq)]
pub struct MagicState {
    level: HierarchyLevel,
    state: DensityMatrix,
}

impl MagicState {
    /// `(|0⟩ + e^{iφ}|1⟩)/√2`.
    pub fn ideal(level: HierarchyLevel) -> Result<Self> {
        Self::with_angle_error(level, 0.0, 0.0)
    }

    /// Ideal state followed by dephasing `(1 − p)σ + pZσZ`.
    pub fn dephased(level: HierarchyLevel, p: f64) -> Result<Self> {
        Self::with_angle_error(level, 0.0, p)
    }

    /// Phase `φ + alpha` instead of `φ`, then dephasing `p`.
    pub fn with_angle_error(level: HierarchyLevel, alpha: f64, p: f64) -> Result<Self> {
        finite("alpha", alpha)?;
        crate::error::in_range("p", p, 0.0, 1.0)?;
        let off = C64::from_polar(0.5 * (1.0 - 2.0 * p), level.phi() + alpha);
        let m = CMatrix::from_vec(
            2,
            alloc::vec![C64::new(0.5, 0.0), off.conj(), off, C64::new(0.5, 0.0)],
        )?;
        Self::from_state(level, DensityMatrix::new(m)?)
    }

    pub fn from_state(level: HierarchyLevel, state: DensityMatrix) -> Result<Self> {
        if level.is_clifford() {
            return Err(Error::Invalid {
                what: "magic state",
                reason: "the S level needs no magic state",
            });
        }
        if state.n_qubits() != 1 {
            return Err(Error::Dimension {
                expected: 2,
                got: state.dim(),
            });
        }
        Ok(Self { level, state })
    }

    pub fn level(&self) -> HierarchyLevel {
        self.level
    }

    pub fn state(&self) -> &DensityMatrix {
        &self.state
    }

    pub fn ideal_angle(&self) -> f64 {
        self.level.phi()
    }

    /// `⟨T^{1/n}|σ|T^{1/n}⟩`.
    pub fn fidelity(&self) -> f64 {
        let m = self.state.matrix();
        let phase = C64::from_polar(1.0, self.level.phi());
        (0.5 * (m[(0, 0)] + m[(1, 1)] + m[(1, 0)] * phase.conj() + m[(0, 1)] * phase)).re
    }

    /// The same state rotated by `R_z(gamma)`, used to calibrate out coherent errors.
    pub fn rotated(&self, gamma: f64) -> Result<Self> {
        let rz = DiagonalChannel::rz(gamma)?;
        Ok(Self {
            level: self.level,
            state: rz.apply(&self.state, 0)?,
        })
    }
}

/// What is applied to the data qubit on measurement outcome 1.
#[derive(Debug, Clone, PartialEq)]
pub enum Correction {
    /// Noiseless `T^{2/n}` (a Clifford `S` at the `T` level).
    Ideal,
    Channel(DiagonalChannel),
}

impl Correction {
    fn channel(&self, level: HierarchyLevel) -> DiagonalChannel {
        match self {
            Self::Ideal => DiagonalChannel::rz(2.0 * level.phi()).expect("finite angle"),
            Self::Channel(ch) => *ch,
        }
    }
}

fn cnot() -> CMatrix {
    // control qubit 0 (data), target qubit 1 (magic); basis |data, magic⟩
    let mut u = CMatrix::zeros(4);
    u[(0, 0)] = ONE;
    u[(1, 1)] = ONE;
    u[(2, 3)] = ONE;
    u[(3, 2)] = ONE;
    u
}

/// `⟨m|_magic X |m⟩_magic` for a two-qubit operator `X`.
fn project_magic(x: &CMatrix, m: usize) -> CMatrix {
    let mut out = CMatrix::zeros(2);
    for i in 0..2 {
        for k in 0..2 {
            out[(i, k)] = x[(2 * i + m, 2 * k + m)];
        }
    }
    out
}

/// One teleportation step applied after `input`.
pub fn teleport_step(
    input: &DiagonalChannel,
    magic: &MagicState,
    correction: &Correction,
) -> DiagonalChannel {
    let u = cnot();
    let corr = correction.channel(magic.level);
    let mut mult = [[ZERO; 2]; 2];
    for (i, row) in mult.iter_mut().enumerate() {
        for (k, entry) in row.iter_mut().enumerate() {
            let mut unit = CMatrix::zeros(2);
            unit[(i, k)] = ONE;
            let joint = unit.kron(magic.state.matrix()).conjugate_by(&u);
            let mut out = project_magic(&joint, 0);
            let mut flipped = project_magic(&joint, 1);
            corr.apply_in_place(&mut flipped, 1, 0);
            out = out.add(&flipped);
            // the output stays proportional to |i⟩⟨k|
            *entry = out[(i, k)];
        }
    }
    DiagonalChannel::from_multipliers(mult).compose(input)
}

/// Dephasing-plus-rotation fit `(1 − p) R_z(φ0) + p Z R_z(φ0) Z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DephasingFit {
    pub p: f64,
    /// In `(−π, π]`.
    pub phi0: f64,
    /// Frobenius distance between the Choi matrices of the channel and the fit.
    pub residual: f64,
}

/// Wrap to `(−π, π]`.
pub fn wrap_angle(x: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let mut y = x % two_pi;
    if y <= -PI {
        y += two_pi;
    } else if y > PI {
        y -= two_pi;
    }
    y
}

fn corner_eigenvalues(b: [[C64; 2]; 2]) -> [f64; 2] {
    let mean = 0.5 * (b[0][0].re + b[1][1].re);
    let half_gap = 0.5 * (b[0][0].re - b[1][1].re);
    let r = (half_gap * half_gap + b[0][1].norm_sqr()).sqrt();
    [mean - r, mean + r]
}

/// Read the dephasing strength and rotation angle off the Choi corner block.
/// A pure rotation reports `p = 0`; a Z flip is folded into `φ0`.
pub fn fit_dephasing_rotation(ch: &DiagonalChannel) -> Result<DephasingFit> {
    ch.validate()?;
    let choi = ch.choi();
    let [lo, _] = corner_eigenvalues(choi.corners());
    if lo < -tol::PSD {
        return Err(Error::NotCompletelyPositive(lo));
    }
    let m10 = ch.multipliers()[1][0];
    let p = (0.5 * (1.0 - m10.norm())).max(0.0);
    let phi0 = if m10.norm() == 0.0 { 0.0 } else { wrap_angle(m10.arg()) };
    let fitted = DiagonalChannel::rz(phi0)?.compose(&DiagonalChannel::dephasing(p)?);
    let residual = choi
        .matrix()
        .sub(fitted.choi().matrix())
        .frobenius_norm();
    Ok(DephasingFit { p, phi0, residual })
}

/// Diagonal Kraus operators `[K_major, K_minor]` from the Choi corner
/// eigenvectors, each stored as its diagonal.
pub fn kraus_pair(ch: &DiagonalChannel) -> [[C64; 2]; 2] {
    let b = ch.choi().corners();
    let eig = corner_eigenvalues(b);
    let mut out = [[ZERO; 2]; 2];
    for (slot, &lam) in [eig[1], eig[0]].iter().enumerate() {
        // (b01, λ − b00) and (λ − b11, b10) both solve (B − λ)v = 0; take the larger
        let v1 = [b[0][1], C64::new(lam, 0.0) - b[0][0]];
        let v2 = [C64::new(lam, 0.0) - b[1][1], b[1][0]];
        let n1 = v1[0].norm_sqr() + v1[1].norm_sqr();
        let n2 = v2[0].norm_sqr() + v2[1].norm_sqr();
        let (v, nrm) = if n1 >= n2 { (v1, n1) } else { (v2, n2) };
        let (v, nrm) = if nrm < 1e-30 {
            // degenerate block: any orthonormal pair works
            let e = if slot == 0 { [ONE, ZERO] } else { [ZERO, ONE] };
            (e, 1.0)
        } else {
            (v, nrm)
        };
        // Choi = ½ Σ |K⟩⟩⟨⟨K|, so K = √(2λ) · v/|v|
        let s = (2.0 * lam.max(0.0) / nrm).sqrt();
        out[slot] = [v[0] * s, v[1] * s];
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct TeleportResult {
    pub channel: DiagonalChannel,
    pub fitted_p: f64,
    pub fitted_angle: f64,
    /// `φ0 − φ`, wrapped to `(−π, π]`.
    pub coherent_deviation: f64,
    pub residual: f64,
}

fn check_chain(states: &[MagicState]) -> Result<()> {
    if states.is_empty() {
        return Err(Error::Invalid {
            what: "teleportation chain",
            reason: "no magic states",
        });
    }
    for pair in states.windows(2) {
        if pair[0].level.lower() != Some(pair[1].level) {
            return Err(Error::Invalid {
                what: "teleportation chain",
                reason: "levels must descend one at a time",
            });
        }
    }
    Ok(())
}

/// Channel of the full chain. `states` run top-down (`σ_n` first); the last
/// state's outcome-1 branch uses `base`.
pub fn teleport_chain_with(states: &[MagicState], base: &Correction) -> Result<TeleportResult> {
    check_chain(states)?;
    let mut correction = base.clone();
    let identity = DiagonalChannel::identity();
    let mut channel = identity;
    for s in states.iter().rev() {
        channel = teleport_step(&identity, s, &correction);
        correction = Correction::Channel(channel);
    }
    let fit = fit_dephasing_rotation(&channel)?;
    if fit.residual > tol::FIT_RESIDUAL {
        return Err(Error::FitResidual(fit.residual));
    }
    Ok(TeleportResult {
        channel,
        fitted_p: fit.p,
        fitted_angle: fit.phi0,
        coherent_deviation: wrap_angle(fit.phi0 - states[0].ideal_angle()),
        residual: fit.residual,
    })
}

/// Uniformly dephased states `σ_n, σ_{n/2}, ..., σ_1`.
pub fn uniform_chain(level: HierarchyLevel, p: f64) -> Result<Vec<MagicState>> {
    if level.is_clifford() {
        return Err(Error::Invalid {
            what: "teleportation chain",
            reason: "the S level needs no magic state",
        });
    }
    let mut states = Vec::new();
    let mut l = level;
    while !l.is_clifford() {
        states.push(MagicState::dephased(l, p)?);
        l = l.lower().expect("non-Clifford level has a lower one");
    }
    Ok(states)
}

/// `T^{1/n}` built from uniformly dephased states with an ideal final `S`.
pub fn teleport_chain(level: HierarchyLevel, p: f64) -> Result<TeleportResult> {
    teleport_chain_with(&uniform_chain(level, p)?, &Correction::Ideal)
}

/// Pre-rotation of the top state that removes the coherent deviation, and
/// the chain result after applying it.
///
/// With `u = σ_10 e^{−iφ} = |u| e^{iμ}` and the lower chain's multiplier
/// `c_10 e^{−2iφ} = r e^{iβ}`, the top multiplier rotated by `γ` is
/// `e^{iφ} |u| (e^{iψ} + r e^{i(β − ψ)})` with `ψ = γ + μ`, which is real
/// and positive for `ψ = atan2(−r sin β, 1 − r cos β)` (up to a flip by π).
pub fn calibrate_top_state(
    states: &[MagicState],
    base: &Correction,
) -> Result<(f64, TeleportResult)> {
    check_chain(states)?;
    let top = &states[0];
    let phi = top.ideal_angle();
    let lower = if states.len() > 1 {
        Correction::Channel(teleport_chain_with(&states[1..], base)?.channel)
    } else {
        base.clone()
    };
    let c10 = lower.channel(top.level).multipliers()[1][0];
    let u = top.state.matrix()[(1, 0)] * C64::from_polar(1.0, -phi);
    if u.norm() == 0.0 {
        return Err(Error::Invalid {
            what: "magic state",
            reason: "no coherence to calibrate",
        });
    }
    let w = c10 * C64::from_polar(1.0, -2.0 * phi);
    let (r, beta) = (w.norm(), w.arg());
    // atan2(−r sin β, 1 − r cos β) = arg(1 − w); for w ≈ 1 every ψ gives a
    // real multiplier and ψ = 0 maximises it
    let one_minus_w = C64::new(1.0, 0.0) - w;
    let mut psi = if one_minus_w.norm() < 1e-12 {
        0.0
    } else {
        one_minus_w.arg()
    };
    if psi.cos() + r * (beta - psi).cos() < 0.0 {
        psi += PI;
    }
    // with |w| = 1 the phase is stuck at β/2 and the solution has zero magnitude
    let magnitude = (C64::from_polar(1.0, psi) + w * C64::from_polar(1.0, -psi)).norm();
    if magnitude < 1e-9 {
        return Err(Error::Invalid {
            what: "calibration",
            reason: "the lower correction is unitary, so rotating the top state cannot remove its phase error",
        });
    }
    let gamma = wrap_angle(psi - u.arg());
    let mut calibrated = states.to_vec();
    calibrated[0] = top.rotated(gamma)?;
    Ok((gamma, teleport_chain_with(&calibrated, base)?))
}
