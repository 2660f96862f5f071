//! Closed-form three-channel decomposition `{I, ε(T^{1/n}), Z}` of `R_z(θ)`
//! for `0 ≤ θ ≤ φ`, and the overhead ratios built on it.
//!
//! Logs are taken as `ln_1p(λ − 1)` with `λ − 1 = 2 Σ max(−x, 0)` (the
//! coefficients sum to one), so small-angle values keep full precision.

use alloc::string::String;
use alloc::vec;
use core::f64::consts::FRAC_PI_2;

// unused once a dependency pulls std (and its inherent float methods) into the build
#[allow(unused_imports)]
use num_traits::Float;

use crate::channel::TransferVec;
use crate::error::{finite, in_range, Error, Result};
use crate::qpd::decompose::{Decomposition, Term};
use crate::qpd::HierarchyLevel;

fn check(theta: f64, phi: f64, p_eff: f64) -> Result<()> {
    in_range("phi", phi, 0.0, FRAC_PI_2)?;
    if phi == 0.0 {
        return Err(Error::OutOfRange {
            name: "phi",
            value: phi,
            lo: f64::MIN_POSITIVE,
            hi: FRAC_PI_2,
        });
    }
    finite("theta", theta)?;
    if theta < 0.0 || theta > phi {
        return Err(Error::AngleExceedsPhi { theta, phi });
    }
    in_range("p_eff", p_eff, 0.0, 0.5)?;
    if p_eff >= 0.5 {
        return Err(Error::OutOfRange {
            name: "p_eff",
            value: p_eff,
            lo: 0.0,
            hi: 0.5,
        });
    }
    Ok(())
}

/// `[x_I, x_{T^{1/n}}, x_Z]` with the rotation dephased by `p_eff`.
pub fn analytic_coefficients(theta: f64, phi: f64, p_eff: f64) -> Result<[f64; 3]> {
    check(theta, phi, p_eff)?;
    let (sh, ch) = (theta / 2.0).sin_cos();
    let (sp, cp) = (phi / 2.0).sin_cos();
    let x1 = theta.sin() / ((1.0 - 2.0 * p_eff) * phi.sin());
    let x0 = ch * ch - (cp * cp - p_eff * phi.cos()) * x1;
    let x2 = sh * sh - (sp * sp + p_eff * phi.cos()) * x1;
    Ok([x0, x1, x2])
}

fn ln_l1(x: &[f64]) -> f64 {
    let neg = x.iter().filter(|v| **v < 0.0).fold(0.0, |acc, v| acc - v);
    (2.0 * neg).ln_1p()
}

pub fn lambda_dephased(theta: f64, phi: f64, p_eff: f64) -> Result<f64> {
    Ok(analytic_coefficients(theta, phi, p_eff)?
        .iter()
        .map(|v| v.abs())
        .sum())
}

pub fn ln_lambda_dephased(theta: f64, phi: f64, p_eff: f64) -> Result<f64> {
    Ok(ln_l1(&analytic_coefficients(theta, phi, p_eff)?))
}

/// Optimal norm over the Clifford channels `{I, S, Z, ZS}`: `|sin θ| + |cos θ|`.
pub fn clifford_lambda(theta: f64) -> Result<f64> {
    finite("theta", theta)?;
    Ok(theta.sin().abs() + theta.cos().abs())
}

pub fn ln_clifford_lambda(theta: f64) -> Result<f64> {
    finite("theta", theta)?;
    let (s, c) = theta.sin_cos();
    let excess = if c >= 0.0 {
        // |cos θ| − 1 = −2 sin²(θ/2) without cancellation
        let h = (theta / 2.0).sin();
        s.abs() - 2.0 * h * h
    } else {
        s.abs() + c.abs() - 1.0
    };
    Ok(excess.ln_1p())
}

/// `ln Λ_C / ln Λ_G`. Undefined at `θ = 0`.
pub fn gamma(theta: f64, phi: f64, p_eff: f64) -> Result<f64> {
    positive_theta(theta)?;
    Ok(ln_clifford_lambda(theta)? / ln_lambda_dephased(theta, phi, p_eff)?)
}

/// `θ → 0` limit of [`gamma`]: `1 / (csc φ / (1 − 2p) − cot φ)`.
pub fn gamma_small_angle_limit(phi: f64, p_eff: f64) -> Result<f64> {
    check(0.0, phi, p_eff)?;
    let (s, c) = phi.sin_cos();
    Ok(1.0 / (1.0 / (s * (1.0 - 2.0 * p_eff)) - c / s))
}

/// Stabilizer extent of `R(θ)` in the small-angle regime: `exp(tan(π/8) θ)`.
pub fn stabilizer_extent(theta: f64) -> Result<f64> {
    Ok(ln_stabilizer_extent(theta)?.exp())
}

pub fn ln_stabilizer_extent(theta: f64) -> Result<f64> {
    finite("theta", theta)?;
    // tan(π/8) = √2 − 1
    Ok((core::f64::consts::SQRT_2 - 1.0) * theta.abs())
}

/// `ln ξ / (2 ln Λ_G)`.
pub fn gamma_se(theta: f64, phi: f64, p_eff: f64) -> Result<f64> {
    positive_theta(theta)?;
    Ok(ln_stabilizer_extent(theta)? / (2.0 * ln_lambda_dephased(theta, phi, p_eff)?))
}

/// Mean magic states per sample: `(2 − 1/n) |x_1| / Λ`.
pub fn expected_magic_states(theta: f64, level: HierarchyLevel, p_eff: f64) -> Result<f64> {
    if level.is_clifford() {
        check(theta, level.phi(), 0.0)?;
        return Ok(0.0);
    }
    let x = analytic_coefficients(theta, level.phi(), p_eff)?;
    let lambda: f64 = x.iter().map(|v| v.abs()).sum();
    Ok(level.magic_cost() * x[1].abs() / lambda)
}

/// Closed-form decomposition over `{I, ε(T^{1/n}), Z}`.
pub fn decompose_analytic(theta: f64, level: HierarchyLevel, p_eff: f64) -> Result<Decomposition> {
    let phi = level.phi();
    let p_eff = if level.is_clifford() { 0.0 } else { p_eff };
    let x = analytic_coefficients(theta, phi, p_eff)?;
    let transfers = [
        TransferVec::IDENTITY,
        TransferVec::rz(phi)?.dephase(p_eff)?,
        TransferVec::PAULI_Z,
    ];
    let labels = [String::from("I"), level.gate_label(), String::from("Z")];
    let costs = [0.0, level.magic_cost(), 0.0];
    let mut terms = vec![];
    for i in 0..3 {
        let coefficient = if x[i].abs() < crate::tol::ZERO_COEFF {
            0.0
        } else {
            x[i]
        };
        if coefficient != 0.0 {
            terms.push(Term {
                label: labels[i].clone(),
                coefficient,
                transfer: transfers[i],
                magic_cost: costs[i],
            });
        }
    }
    Ok(Decomposition::from_terms(
        terms,
        TransferVec::rz(theta)?,
        Some(theta),
        alloc::format!("three-channel:n={}:p_eff={}", level, p_eff),
    ))
}

fn positive_theta(theta: f64) -> Result<()> {
    finite("theta", theta)?;
    if theta <= 0.0 {
        return Err(Error::Invalid {
            what: "theta",
            reason: "overhead ratio is undefined at theta = 0",
        });
    }
    Ok(())
}
