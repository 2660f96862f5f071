use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite input for {0}")]
    NonFinite(&'static str),

    #[error("{name} = {value} outside [{lo}, {hi}]")]
    OutOfRange {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("qubit index {index} out of bounds for {n_qubits}-qubit state")]
    QubitIndex { index: usize, n_qubits: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("invalid {what}: {reason}")]
    Invalid {
        what: &'static str,
        reason: &'static str,
    },

    #[error("n = {0} is not a dyadic Clifford-hierarchy level (1/2, 1, 2, 4, ...)")]
    NotDyadic(f64),

    #[error("effective dephasing {p_eff} at n = {n} is not below 1/2")]
    EffectiveNoiseTooLarge { n: f64, p_eff: f64 },

    #[error("no custom p_eff entry for n = {0}")]
    MissingCustomEntry(f64),

    #[error("decomposition infeasible: basis does not span the target (residual {residual:.3e})")]
    Infeasible { residual: f64 },

    #[error("angle {theta} exceeds phi = {phi}; increase the Trotter steps or lower n")]
    AngleExceedsPhi { theta: f64, phi: f64 },

    #[error("sample budget exceeded: need 10^{log10_required:.3} samples, cap is {cap}")]
    BudgetExceeded { log10_required: f64, cap: u64 },

    #[error("no feasible Trotter step count: Trotter error alone exhausts the budget")]
    NoFeasibleTrotterSteps,

    #[error("missing W_FS Trotter-error constant for L = {0}")]
    MissingTrotterConstant(u32),

    #[error("dephasing-rotation fit residual {0:.3e} above tolerance")]
    FitResidual(f64),

    #[error("channel is not completely positive (Choi eigenvalue {0:.3e})")]
    NotCompletelyPositive(f64),
}

pub(crate) fn finite(name: &'static str, x: f64) -> Result<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::NonFinite(name))
    }
}

pub(crate) fn in_range(name: &'static str, value: f64, lo: f64, hi: f64) -> Result<f64> {
    finite(name, value)?;
    if value < lo || value > hi {
        Err(Error::OutOfRange {
            name,
            value,
            lo,
            hi,
        })
    } else {
        Ok(value)
    }
}
