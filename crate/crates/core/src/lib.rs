//! Mitigated magic dilution: quasiprobability decompositions of small-angle
//! Z rotations over noisy Clifford-hierarchy channels.
//!
//! The crate is `no_std` and only needs `alloc`. All floating point special
//! functions go through `libm`, so results are bit-identical across targets.
//!
//! Layout:
//! - [`channel`]: diagonal single-qubit channels, density matrices, Choi matrices.
//! - [`qpd`]: basis sets, the L1-minimising decomposition (simplex and closed form),
//!   and the derived overhead metrics (Λ, γ, γ_SE, expected magic states).
//! - [`teleport`]: exact outcome-averaged simulation of generalised gate teleportation.
//! - [`sampler`]: the sign-weighted Monte Carlo estimator with Hoeffding budgets.
//! - [`fermi_hubbard`]: resource estimates for Trotterised 2D Fermi-Hubbard evolution.
//! - [`tables`]: small-angle overhead tables over the (n, p) grid.
#![no_std]
#![deny(unsafe_code)]

extern crate alloc;

pub mod channel;
pub mod error;
pub mod fermi_hubbard;
pub mod linalg;
pub mod qpd;
pub mod sampler;
pub mod tables;
pub mod teleport;
pub mod tol;

pub use channel::{ChoiMatrix, DensityMatrix, DiagonalChannel, TransferVec};
pub use error::{Error, Result};
pub use qpd::{
    BasisElement, BasisKind, BasisSet, Decomposition, HierarchyLevel, NoiseModel, PeffRule,
};
