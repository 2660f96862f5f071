//! Optimal quasiprobability decompositions of `R_z(θ)` over diagonal
//! Clifford-hierarchy channels, and the overhead metrics derived from them.

mod analytic;
mod basis;
mod decompose;
mod level;
mod noise;
mod simplex;

pub use analytic::{
    analytic_coefficients, clifford_lambda, decompose_analytic, expected_magic_states, gamma,
    gamma_se, gamma_small_angle_limit, lambda_dephased, ln_clifford_lambda, ln_lambda_dephased,
    ln_stabilizer_extent, stabilizer_extent,
};
pub use basis::{BasisElement, BasisKind, BasisSet};
pub use decompose::{decompose, decompose_lp, Decomposition, Term};
pub use level::HierarchyLevel;
pub use noise::{p_eff, NoiseModel, PeffRule};
pub use simplex::{solve_l1, L1Solution};
