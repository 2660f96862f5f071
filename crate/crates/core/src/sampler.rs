//! Sign-weighted quasiprobability Monte Carlo.
//!
//! Each sample draws one basis channel per gate with probability `|x_i|/λ`,
//! applies the drawn channels exactly, and records
//! `Π sign(x_i) · Π λ · value`, where `value` is `Tr[Oρ]` or a ±1 measurement
//! outcome. Sample `k` uses its own ChaCha stream `k`, and samples are summed
//! in fixed blocks of [`BLOCK`], so the result does not depend on how blocks
//! are spread over workers.

use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

// unused once a dependency pulls std (and its inherent float methods) into the build
#[allow(unused_imports)]
use num_traits::Float;

use crate::channel::{pauli_x_matrix, pauli_y_matrix, pauli_z_matrix, DensityMatrix, DiagonalChannel};
use crate::error::{in_range, Error, Result};
use crate::linalg::{CMatrix, KahanSum};
use crate::qpd::Decomposition;
use crate::tol;

/// Samples per reduction block.
pub const BLOCK: u64 = 4096;
pub const DEFAULT_SAMPLE_CAP: u64 = 100_000_000;

/// A Hermitian observable with operator norm at most one.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    matrix: CMatrix,
    involutory: bool,
}

impl Observable {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if !matrix.dim().is_power_of_two() {
            return Err(Error::Invalid {
                what: "observable",
                reason: "dimension is not a power of two",
            });
        }
        if !matrix.is_hermitian(tol::EQ) {
            return Err(Error::Invalid {
                what: "observable",
                reason: "not Hermitian",
            });
        }
        let eig = matrix.hermitian_eigenvalues();
        if eig.iter().any(|e| e.abs() > 1.0 + tol::EQ) {
            return Err(Error::Invalid {
                what: "observable",
                reason: "operator norm exceeds one",
            });
        }
        let involutory = matrix
            .mul(&matrix)
            .max_abs_diff(&CMatrix::identity(matrix.dim()))
            <= tol::EQ;
        Ok(Self { matrix, involutory })
    }

    /// Tensor product of single-qubit Paulis, e.g. `"XIZ"` (qubit 0 first).
    pub fn pauli(word: &str) -> Result<Self> {
        let mut m = CMatrix::identity(1);
        for ch in word.chars() {
            let p = match ch {
                'I' => CMatrix::identity(2),
                'X' => pauli_x_matrix(),
                'Y' => pauli_y_matrix(),
                'Z' => pauli_z_matrix(),
                _ => {
                    return Err(Error::Invalid {
                        what: "Pauli word",
                        reason: "letters must be I, X, Y or Z",
                    })
                }
            };
            m = m.kron(&p);
        }
        if m.dim() < 2 {
            return Err(Error::Invalid {
                what: "Pauli word",
                reason: "empty",
            });
        }
        Self::new(m)
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// `O² = I`, so a measurement has outcomes ±1.
    pub fn is_involutory(&self) -> bool {
        self.involutory
    }
}

/// How a sample turns the final state into a number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EvalMode {
    /// `Tr[Oρ]` directly.
    #[default]
    Exact,
    /// One ±1 outcome with `P(+1) = (1 + Tr[Oρ])/2`; needs `O² = I`.
    Measurement,
}

/// A decomposed gate acting on one qubit.
#[derive(Debug, Clone, PartialEq)]
pub struct GateSlot {
    pub decomposition: Decomposition,
    pub target: usize,
}

#[derive(Debug, Clone, PartialEq)]
struct PreparedGate {
    target: usize,
    channels: Vec<DiagonalChannel>,
    negative: Vec<bool>,
    /// Cumulative `|x_i|/λ`, last entry forced to one.
    cumulative: Vec<f64>,
    ideal: DiagonalChannel,
}

impl PreparedGate {
    fn new(slot: &GateSlot) -> Result<Self> {
        let d = &slot.decomposition;
        if d.terms.is_empty() || !(d.lambda > 0.0) {
            return Err(Error::Invalid {
                what: "decomposition",
                reason: "no terms",
            });
        }
        let mut acc = 0.0;
        let mut cumulative = Vec::with_capacity(d.terms.len());
        for t in &d.terms {
            acc += t.coefficient.abs() / d.lambda;
            cumulative.push(acc);
        }
        *cumulative.last_mut().expect("nonempty") = 1.0;
        Ok(Self {
            target: slot.target,
            channels: d.terms.iter().map(|t| t.transfer.to_channel()).collect(),
            negative: d.terms.iter().map(|t| t.coefficient < 0.0).collect(),
            cumulative,
            ideal: d.target.to_channel(),
        })
    }

    fn draw(&self, u: f64) -> usize {
        self.cumulative
            .iter()
            .position(|&c| u < c)
            .unwrap_or(self.cumulative.len() - 1)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SamplingPlan {
    gates: Vec<PreparedGate>,
    pub total_lambda: f64,
    pub ln_total_lambda: f64,
    pub observable: Observable,
    pub epsilon: f64,
    pub delta: f64,
    pub n_samples: u64,
    pub mode: EvalMode,
}

impl SamplingPlan {
    pub fn n_blocks(&self) -> u64 {
        self.n_samples.div_ceil(BLOCK)
    }

    /// Ideal target channels, for the exact reference.
    pub fn ideal_gates(&self) -> Vec<(DiagonalChannel, usize)> {
        self.gates.iter().map(|g| (g.ideal, g.target)).collect()
    }
}

/// `(2/ε²) λ² ln(2/δ)` before rounding up.
pub fn hoeffding_bound(lambda: f64, epsilon: f64, delta: f64) -> f64 {
    2.0 / (epsilon * epsilon) * lambda * lambda * (2.0 / delta).ln()
}

/// Natural log of [`hoeffding_bound`], safe for huge `λ`.
pub fn ln_hoeffding_bound(ln_lambda: f64, epsilon: f64, delta: f64) -> f64 {
    (2.0 * (2.0 / delta).ln() / (epsilon * epsilon)).ln() + 2.0 * ln_lambda
}

/// Plan with the default cap and exact evaluation.
pub fn plan(
    gates: &[GateSlot],
    observable: Observable,
    epsilon: f64,
    delta: f64,
) -> Result<SamplingPlan> {
    plan_with(gates, observable, epsilon, delta, DEFAULT_SAMPLE_CAP, EvalMode::Exact)
}

pub fn plan_with(
    gates: &[GateSlot],
    observable: Observable,
    epsilon: f64,
    delta: f64,
    cap: u64,
    mode: EvalMode,
) -> Result<SamplingPlan> {
    in_range("epsilon", epsilon, f64::MIN_POSITIVE, 1.0)?;
    in_range("delta", delta, f64::MIN_POSITIVE, 1.0)?;
    if epsilon >= 1.0 || delta >= 1.0 {
        return Err(Error::Invalid {
            what: "epsilon/delta",
            reason: "must lie strictly inside (0, 1)",
        });
    }
    if mode == EvalMode::Measurement && !observable.is_involutory() {
        return Err(Error::Invalid {
            what: "observable",
            reason: "measurement mode needs O^2 = I",
        });
    }
    let prepared = gates
        .iter()
        .map(PreparedGate::new)
        .collect::<Result<Vec<_>>>()?;
    let ln_total_lambda: f64 = gates.iter().map(|g| g.decomposition.ln_lambda()).sum();
    let total_lambda = gates.iter().map(|g| g.decomposition.lambda).product();
    let ln_n = ln_hoeffding_bound(ln_total_lambda, epsilon, delta);
    let log10_required = ln_n / core::f64::consts::LN_10;
    if ln_n > (cap as f64).ln() {
        return Err(Error::BudgetExceeded {
            log10_required,
            cap,
        });
    }
    let n_samples = hoeffding_bound(total_lambda, epsilon, delta).ceil() as u64;
    if n_samples > cap {
        return Err(Error::BudgetExceeded {
            log10_required,
            cap,
        });
    }
    Ok(SamplingPlan {
        gates: prepared,
        total_lambda,
        ln_total_lambda,
        observable,
        epsilon,
        delta,
        n_samples,
        mode,
    })
}

fn check_state(plan: &SamplingPlan, state: &DensityMatrix) -> Result<()> {
    if plan.observable.matrix().dim() != state.dim() {
        return Err(Error::Dimension {
            expected: state.dim(),
            got: plan.observable.matrix().dim(),
        });
    }
    for g in &plan.gates {
        if g.target >= state.n_qubits() {
            return Err(Error::QubitIndex {
                index: g.target,
                n_qubits: state.n_qubits(),
            });
        }
    }
    Ok(())
}

fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn sample_value(plan: &SamplingPlan, state: &DensityMatrix, rng: &mut ChaCha8Rng) -> f64 {
    let n = state.n_qubits();
    let mut m = state.matrix().clone();
    let mut negative = false;
    for g in &plan.gates {
        let k = g.draw(uniform(rng));
        g.channels[k].apply_in_place(&mut m, n, g.target);
        negative ^= g.negative[k];
    }
    let expval = plan.observable.matrix().trace_product(&m).re;
    let value = match plan.mode {
        EvalMode::Exact => expval,
        EvalMode::Measurement => {
            if uniform(rng) < 0.5 * (1.0 + expval) {
                1.0
            } else {
                -1.0
            }
        }
    };
    let w = if negative { -plan.total_lambda } else { plan.total_lambda };
    w * value
}

/// Partial sums over one block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockSum {
    pub sum: f64,
    pub sum_sq: f64,
    pub count: u64,
}

/// Samples `[block·BLOCK, min((block+1)·BLOCK, n_samples))`.
pub fn evaluate_block(
    plan: &SamplingPlan,
    state: &DensityMatrix,
    seed: u64,
    block: u64,
) -> Result<BlockSum> {
    check_state(plan, state)?;
    let base = ChaCha8Rng::seed_from_u64(seed);
    let start = block * BLOCK;
    let end = (start + BLOCK).min(plan.n_samples);
    let mut sum = KahanSum::default();
    let mut sum_sq = KahanSum::default();
    for idx in start..end {
        let mut rng = base.clone();
        rng.set_stream(idx);
        rng.set_word_pos(0);
        let v = sample_value(plan, state, &mut rng);
        sum.add(v);
        sum_sq.add(v * v);
    }
    Ok(BlockSum {
        sum: sum.value(),
        sum_sq: sum_sq.value(),
        count: end.saturating_sub(start),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateReport {
    pub mean: f64,
    /// The target accuracy `ε`.
    pub half_width: f64,
    pub n_used: u64,
    pub exact_reference: f64,
    pub seed: u64,
    pub std_error: f64,
}

impl EstimateReport {
    pub fn within_tolerance(&self) -> bool {
        (self.mean - self.exact_reference).abs() <= self.half_width
    }
}

/// Combine blocks in index order.
pub fn reduce(
    plan: &SamplingPlan,
    state: &DensityMatrix,
    seed: u64,
    blocks: &[BlockSum],
) -> Result<EstimateReport> {
    let mut sum = KahanSum::default();
    let mut sum_sq = KahanSum::default();
    let mut count = 0u64;
    for b in blocks {
        sum.add(b.sum);
        sum_sq.add(b.sum_sq);
        count += b.count;
    }
    let n = count.max(1) as f64;
    let mean = sum.value() / n;
    let var = if count > 1 {
        ((sum_sq.value() - n * mean * mean) / (n - 1.0)).max(0.0)
    } else {
        0.0
    };
    Ok(EstimateReport {
        mean,
        half_width: plan.epsilon,
        n_used: count,
        exact_reference: exact_expectation(&plan.ideal_gates(), state, &plan.observable)?,
        seed,
        std_error: (var / n).sqrt(),
    })
}

/// Single-threaded estimate.
pub fn estimate(plan: &SamplingPlan, state: &DensityMatrix, seed: u64) -> Result<EstimateReport> {
    let blocks = (0..plan.n_blocks())
        .map(|b| evaluate_block(plan, state, seed, b))
        .collect::<Result<Vec<_>>>()?;
    reduce(plan, state, seed, &blocks)
}

/// `Tr[O · E_k ∘ ... ∘ E_1(ρ)]`.
pub fn exact_expectation(
    gates: &[(DiagonalChannel, usize)],
    state: &DensityMatrix,
    observable: &Observable,
) -> Result<f64> {
    if observable.matrix().dim() != state.dim() {
        return Err(Error::Dimension {
            expected: state.dim(),
            got: observable.matrix().dim(),
        });
    }
    let mut rho = state.clone();
    for (ch, target) in gates {
        rho = ch.apply(&rho, *target)?;
    }
    Ok(rho.expectation(observable.matrix()))
}
