use alloc::string::String;
use alloc::vec::Vec;

// unused once a dependency pulls std (and its inherent float methods) into the build
#[allow(unused_imports)]
use num_traits::Float;

use crate::channel::TransferVec;
use crate::error::{Error, Result};
use crate::qpd::analytic::decompose_analytic;
use crate::qpd::simplex::solve_l1;
use crate::qpd::{BasisKind, BasisSet, HierarchyLevel, NoiseModel};
use crate::tol;

/// One basis channel with its quasiprobability weight.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub label: String,
    pub coefficient: f64,
    pub transfer: TransferVec,
    pub magic_cost: f64,
}

/// `target = Σ x_i · basis_i`, holding only the nonzero terms.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub terms: Vec<Term>,
    /// `Σ |x_i|`.
    pub lambda: f64,
    pub target: TransferVec,
    /// Set when the target is a known rotation.
    pub target_theta: Option<f64>,
    pub basis_id: String,
}

impl Decomposition {
    pub fn from_terms(
        terms: Vec<Term>,
        target: TransferVec,
        target_theta: Option<f64>,
        basis_id: String,
    ) -> Self {
        let lambda = terms.iter().map(|t| t.coefficient.abs()).sum();
        Self {
            terms,
            lambda,
            target,
            target_theta,
            basis_id,
        }
    }

    pub fn support(&self) -> Vec<&str> {
        self.terms.iter().map(|t| t.label.as_str()).collect()
    }

    /// Zero for labels outside the support.
    pub fn coefficient(&self, label: &str) -> f64 {
        self.terms
            .iter()
            .find(|t| t.label == label)
            .map_or(0.0, |t| t.coefficient)
    }

    pub fn coefficient_sum(&self) -> f64 {
        self.terms.iter().map(|t| t.coefficient).sum()
    }

    pub fn reconstruct(&self) -> TransferVec {
        let mut out = [0.0; 3];
        for t in &self.terms {
            for (o, v) in out.iter_mut().zip(t.transfer.components()) {
                *o += t.coefficient * v;
            }
        }
        TransferVec::from_components(out)
    }

    /// `ln λ`, computed as `ln_1p(2 Σ negative parts)` when the weights sum to one.
    pub fn ln_lambda(&self) -> f64 {
        if (self.coefficient_sum() - 1.0).abs() <= tol::LP_FEAS {
            let neg = self
                .terms
                .iter()
                .filter(|t| t.coefficient < 0.0)
                .fold(0.0, |acc, t| acc - t.coefficient);
            (2.0 * neg).ln_1p()
        } else {
            self.lambda.ln()
        }
    }

    /// Mean magic states consumed per sample: `Σ cost_i |x_i| / λ`.
    pub fn expected_magic(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| t.magic_cost * t.coefficient.abs())
            .sum::<f64>()
            / self.lambda
    }
}

fn columns(basis: &BasisSet, idx: &[usize]) -> Vec<Vec<f64>> {
    idx.iter()
        .map(|&i| basis.elements[i].transfer.components().to_vec())
        .collect()
}

/// Next `k`-subset of `0..n` in lexicographic order.
fn next_subset(sub: &mut [usize], n: usize) -> bool {
    let k = sub.len();
    for i in (0..k).rev() {
        if sub[i] < n - k + i {
            sub[i] += 1;
            for j in i + 1..k {
                sub[j] = sub[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Minimum-L1 decomposition of `target` over `basis`, with the smallest
/// support among the optimal solutions.
pub fn decompose_lp(target: TransferVec, basis: &BasisSet) -> Result<Decomposition> {
    if basis.is_empty() {
        return Err(Error::Infeasible {
            residual: target.components().iter().fold(0.0, |m, v| m.max(v.abs())),
        });
    }
    let all: Vec<usize> = (0..basis.len()).collect();
    let b = target.components();
    let sol = solve_l1(&columns(basis, &all), &b)?;
    let mut best: Vec<(usize, f64)> = sol
        .x
        .iter()
        .enumerate()
        .filter(|(_, v)| v.abs() >= tol::ZERO_COEFF)
        .map(|(i, &v)| (i, v))
        .collect();
    let limit = sol.l1_norm * (1.0 + tol::LP_SUPPORT_SLACK);

    // look for an equally cheap solution on fewer channels
    'sizes: for k in 1..best.len() {
        if k > basis.len() {
            break;
        }
        let mut sub: Vec<usize> = (0..k).collect();
        loop {
            if let Ok(s) = solve_l1(&columns(basis, &sub), &b) {
                if s.l1_norm <= limit && s.x.iter().all(|v| v.abs() >= tol::ZERO_COEFF) {
                    best = sub.iter().copied().zip(s.x).collect();
                    break 'sizes;
                }
            }
            if !next_subset(&mut sub, basis.len()) {
                break;
            }
        }
    }

    let terms = best
        .into_iter()
        .map(|(i, x)| {
            let e = &basis.elements[i];
            Term {
                label: e.label.clone(),
                coefficient: x,
                transfer: e.transfer,
                magic_cost: e.magic_cost,
            }
        })
        .collect();
    Ok(Decomposition::from_terms(
        terms,
        target,
        None,
        basis.id.clone(),
    ))
}

/// Decompose `R_z(θ)` over the basis of the given kind. The three-channel
/// basis uses the closed form on `0 ≤ θ ≤ φ`; every other case goes through
/// the LP.
pub fn decompose(
    theta: f64,
    kind: BasisKind,
    level: HierarchyLevel,
    noise: &NoiseModel,
) -> Result<Decomposition> {
    let target = TransferVec::rz(theta)?;
    if kind == BasisKind::ThreeChannel && (0.0..=level.phi()).contains(&theta) {
        let mut d = decompose_analytic(theta, level, noise.p_eff(level)?)?;
        d.basis_id = BasisSet::build(kind, level, noise)?.id;
        return Ok(d);
    }
    let basis = BasisSet::build(kind, level, noise)?;
    let mut d = decompose_lp(target, &basis)?;
    d.target_theta = Some(theta);
    Ok(d)
}
