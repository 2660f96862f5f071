//! Diagonal single-qubit channels and the states they act on.
//!
//! Every channel here has Kraus operators diagonal in the Z basis, so it can
//! be written `E(ρ) = e00 ρ + e01 ρZ + e10 Zρ + e11 ZρZ`. Equivalently `E`
//! multiplies entry `(i, k)` of `ρ` by a fixed complex number (a Schur
//! multiplier); both views are used below.
//!
//! Unitary Z rotations and their dephased versions stay inside the real span
//! of `{ρ, i[ρZ − Zρ], ZρZ}`, which is what [`TransferVec`] stores.

use alloc::vec::Vec;
use core::f64::consts::FRAC_1_SQRT_2;

// unused once a dependency pulls std (and its inherent float methods) into the build
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{finite, in_range, Error, Result};
use crate::linalg::{CMatrix, C64, I, ONE, ZERO};
use crate::tol;

/// Coefficients of `ρ`, `i[ρZ − Zρ]` and `ZρZ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferVec {
    pub a: f64,
    pub c: f64,
    pub z: f64,
}

impl TransferVec {
    pub const IDENTITY: Self = Self {
        a: 1.0,
        c: 0.0,
        z: 0.0,
    };
    pub const PAULI_Z: Self = Self {
        a: 0.0,
        c: 0.0,
        z: 1.0,
    };

    pub fn new(a: f64, c: f64, z: f64) -> Self {
        Self { a, c, z }
    }

    /// `R_z(θ) = exp(−iθZ/2)` as `(cos²(θ/2), cos(θ/2)sin(θ/2), sin²(θ/2))`.
    pub fn rz(theta: f64) -> Result<Self> {
        finite("theta", theta)?;
        let (s, c) = (theta / 2.0).sin_cos();
        Ok(Self {
            a: c * c,
            c: c * s,
            z: s * s,
        })
    }

    /// Follow the channel with dephasing `(1 − p)ρ + pZρZ`, `0 ≤ p ≤ 1/2`.
    pub fn dephase(self, p: f64) -> Result<Self> {
        in_range("p", p, 0.0, 0.5)?;
        let shift = p * (self.a - self.z);
        Ok(Self {
            a: self.a - shift,
            c: (1.0 - 2.0 * p) * self.c,
            z: self.z + shift,
        })
    }

    pub fn components(&self) -> [f64; 3] {
        [self.a, self.c, self.z]
    }

    pub fn from_components([a, c, z]: [f64; 3]) -> Self {
        Self { a, c, z }
    }

    pub fn is_trace_preserving(&self) -> bool {
        (self.a + self.z - 1.0).abs() <= tol::EQ
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self.a - other.a)
            .abs()
            .max((self.c - other.c).abs())
            .max((self.z - other.z).abs())
    }

    pub fn to_channel(&self) -> DiagonalChannel {
        DiagonalChannel {
            e00: C64::new(self.a, 0.0),
            e01: C64::new(0.0, self.c),
            e10: C64::new(0.0, -self.c),
            e11: C64::new(self.z, 0.0),
        }
    }
}

/// `E(ρ) = e00 ρ + e01 ρZ + e10 Zρ + e11 ZρZ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagonalChannel {
    pub e00: C64,
    pub e01: C64,
    pub e10: C64,
    pub e11: C64,
}

fn sign(bit: usize) -> f64 {
    if bit == 0 {
        1.0
    } else {
        -1.0
    }
}

impl DiagonalChannel {
    /// Checked constructor: Hermiticity and trace preservation to [`tol::EQ`].
    pub fn new(e00: C64, e01: C64, e10: C64, e11: C64) -> Result<Self> {
        let ch = Self::new_unchecked(e00, e01, e10, e11);
        ch.validate()?;
        Ok(ch)
    }

    /// Unchecked constructor for intermediate, possibly trace-decreasing maps.
    pub const fn new_unchecked(e00: C64, e01: C64, e10: C64, e11: C64) -> Self {
        Self { e00, e01, e10, e11 }
    }

    pub fn identity() -> Self {
        TransferVec::IDENTITY.to_channel()
    }

    pub fn pauli_z() -> Self {
        TransferVec::PAULI_Z.to_channel()
    }

    pub fn rz(theta: f64) -> Result<Self> {
        Ok(TransferVec::rz(theta)?.to_channel())
    }

    pub fn dephasing(p: f64) -> Result<Self> {
        in_range("p", p, 0.0, 1.0)?;
        Ok(Self::new_unchecked(
            C64::new(1.0 - p, 0.0),
            ZERO,
            ZERO,
            C64::new(p, 0.0),
        ))
    }

    pub fn validate(&self) -> Result<()> {
        let herm = self.e00.im.abs() <= tol::EQ
            && self.e11.im.abs() <= tol::EQ
            && (self.e01 - self.e10.conj()).norm() <= tol::EQ;
        if !herm {
            return Err(Error::Invalid {
                what: "diagonal channel",
                reason: "not Hermiticity preserving",
            });
        }
        if (self.e00 + self.e11 - ONE).norm() > tol::EQ {
            return Err(Error::Invalid {
                what: "diagonal channel",
                reason: "not trace preserving",
            });
        }
        Ok(())
    }

    /// Schur multiplier: `E(ρ)[i][k] = m[i][k] · ρ[i][k]` for `i, k ∈ {0, 1}`.
    pub fn multipliers(&self) -> [[C64; 2]; 2] {
        let mut m = [[ZERO; 2]; 2];
        for (i, row) in m.iter_mut().enumerate() {
            for (k, entry) in row.iter_mut().enumerate() {
                let (si, sk) = (sign(i), sign(k));
                *entry = self.e00 + self.e01 * sk + self.e10 * si + self.e11 * (si * sk);
            }
        }
        m
    }

    /// Inverse of [`multipliers`](Self::multipliers) (a 2x2 Walsh-Hadamard transform).
    pub fn from_multipliers(m: [[C64; 2]; 2]) -> Self {
        let mut e = [ZERO; 4];
        for (i, row) in m.iter().enumerate() {
            for (k, &mik) in row.iter().enumerate() {
                let (si, sk) = (sign(i), sign(k));
                e[0] += mik;
                e[1] += mik * sk;
                e[2] += mik * si;
                e[3] += mik * (si * sk);
            }
        }
        Self::new_unchecked(e[0] * 0.25, e[1] * 0.25, e[2] * 0.25, e[3] * 0.25)
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn compose(&self, first: &Self) -> Self {
        compose(self, first)
    }

    /// Back to the real 3-vector form when the channel lies in that span.
    pub fn to_transfer(&self) -> Option<TransferVec> {
        let in_span = self.e00.im.abs() <= tol::EQ
            && self.e11.im.abs() <= tol::EQ
            && self.e01.re.abs() <= tol::EQ
            && (self.e01 + self.e10).norm() <= tol::EQ;
        in_span.then(|| TransferVec::new(self.e00.re, self.e01.im, self.e11.re))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        [
            self.e00 - other.e00,
            self.e01 - other.e01,
            self.e10 - other.e10,
            self.e11 - other.e11,
        ]
        .iter()
        .map(|d| d.norm())
        .fold(0.0, f64::max)
    }

    /// Apply to qubit `target` of `rho`, identity elsewhere.
    pub fn apply(&self, rho: &DensityMatrix, target: usize) -> Result<DensityMatrix> {
        let n = rho.n_qubits;
        if target >= n {
            return Err(Error::QubitIndex {
                index: target,
                n_qubits: n,
            });
        }
        let mut out = rho.matrix.clone();
        self.apply_in_place(&mut out, n, target);
        Ok(DensityMatrix {
            n_qubits: n,
            matrix: out,
        })
    }

    /// Raw action on any operator (not necessarily a state). Qubit 0 is the
    /// most significant bit of the basis index.
    pub fn apply_in_place(&self, m: &mut CMatrix, n_qubits: usize, target: usize) {
        let mult = self.multipliers();
        let shift = n_qubits - 1 - target;
        let dim = m.dim();
        for i in 0..dim {
            let bi = (i >> shift) & 1;
            for k in 0..dim {
                let bk = (k >> shift) & 1;
                m[(i, k)] *= mult[bi][bk];
            }
        }
    }

    /// `(E ⊗ I)(|Φ⟩⟨Φ|)` with `|Φ⟩ = (|00⟩ + |11⟩)/√2`.
    pub fn choi(&self) -> ChoiMatrix {
        let mult = self.multipliers();
        let mut m = CMatrix::zeros(4);
        for i in 0..2 {
            for k in 0..2 {
                m[(3 * i, 3 * k)] = mult[i][k] * 0.5;
            }
        }
        ChoiMatrix { matrix: m }
    }
}

/// `lhs ∘ rhs`. Products of `Z^a (·) Z^b` terms combine by XOR of exponents.
pub fn compose(lhs: &DiagonalChannel, rhs: &DiagonalChannel) -> DiagonalChannel {
    let l = [lhs.e00, lhs.e01, lhs.e10, lhs.e11];
    let r = [rhs.e00, rhs.e01, rhs.e10, rhs.e11];
    let mut out = [ZERO; 4];
    // index = 2*left_power + right_power
    for (li, &lv) in l.iter().enumerate() {
        for (ri, &rv) in r.iter().enumerate() {
            let left = (li >> 1) ^ (ri >> 1);
            let right = (li & 1) ^ (ri & 1);
            out[2 * left + right] += lv * rv;
        }
    }
    DiagonalChannel::new_unchecked(out[0], out[1], out[2], out[3])
}

/// A density matrix on `n_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    matrix: CMatrix,
}

impl DensityMatrix {
    /// Checked: Hermitian, unit trace, PSD.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let dim = matrix.dim();
        if dim == 0 || !dim.is_power_of_two() {
            return Err(Error::Invalid {
                what: "density matrix",
                reason: "dimension is not a power of two",
            });
        }
        if !matrix.is_hermitian(tol::EQ) {
            return Err(Error::Invalid {
                what: "density matrix",
                reason: "not Hermitian",
            });
        }
        if (matrix.trace() - ONE).norm() > tol::EQ {
            return Err(Error::Invalid {
                what: "density matrix",
                reason: "trace is not 1",
            });
        }
        let min_ev = matrix.hermitian_eigenvalues()[0];
        if min_ev < -tol::PSD {
            return Err(Error::Invalid {
                what: "density matrix",
                reason: "not positive semidefinite",
            });
        }
        Ok(Self {
            n_qubits: dim.trailing_zeros() as usize,
            matrix,
        })
    }

    /// `|ψ⟩⟨ψ|` after normalising `ψ`.
    pub fn from_pure(psi: &[C64]) -> Result<Self> {
        let norm = psi.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::Invalid {
                what: "state vector",
                reason: "zero or non-finite norm",
            });
        }
        let v: Vec<C64> = psi.iter().map(|a| a / norm).collect();
        Self::new(CMatrix::outer(&v))
    }

    pub fn zero_state(n_qubits: usize) -> Self {
        let mut m = CMatrix::zeros(1 << n_qubits);
        m[(0, 0)] = ONE;
        Self {
            n_qubits,
            matrix: m,
        }
    }

    /// `|+⟩⟨+|` on one qubit.
    pub fn plus() -> Self {
        let h = C64::new(0.5, 0.0);
        Self {
            n_qubits: 1,
            matrix: CMatrix::from_vec(2, alloc::vec![h, h, h, h]).expect("2x2"),
        }
    }

    /// `|+⟩^{⊗n}`.
    pub fn plus_state(n_qubits: usize) -> Self {
        let dim = 1usize << n_qubits;
        let v = C64::new(1.0 / dim as f64, 0.0);
        Self {
            n_qubits,
            matrix: CMatrix::from_vec(dim, alloc::vec![v; dim * dim]).expect("square"),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    /// `Tr[Oρ]`, real part (O Hermitian).
    pub fn expectation(&self, observable: &CMatrix) -> f64 {
        observable.trace_product(&self.matrix).re
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.matrix.hermitian_eigenvalues()[0]
    }
}

/// Choi matrix of a single-qubit channel, ordered `|out, ref⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiMatrix {
    matrix: CMatrix,
}

impl ChoiMatrix {
    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// The `(0,0), (0,3), (3,0), (3,3)` block as `[[a00, a01], [a10, a11]]`.
    pub fn corners(&self) -> [[C64; 2]; 2] {
        let m = &self.matrix;
        [[m[(0, 0)], m[(0, 3)]], [m[(3, 0)], m[(3, 3)]]]
    }

    /// Largest magnitude outside the corner block.
    pub fn off_corner_max(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..4 {
            for k in 0..4 {
                let corner = (i == 0 || i == 3) && (k == 0 || k == 3);
                if !corner {
                    worst = worst.max(self.matrix[(i, k)].norm());
                }
            }
        }
        worst
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.matrix.hermitian_eigenvalues()
    }

    pub fn is_hermitian(&self) -> bool {
        self.matrix.is_hermitian(tol::EQ)
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }
}

/// `|Φ⟩ = (|00⟩ + |11⟩)/√2` as a vector.
pub fn bell_state() -> [C64; 4] {
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    [h, ZERO, ZERO, h]
}

/// The 2x2 unitary `exp(−iθZ/2)`.
pub fn rz_unitary(theta: f64) -> CMatrix {
    let half = C64::new(0.0, -theta / 2.0).exp();
    let mut u = CMatrix::zeros(2);
    u[(0, 0)] = half;
    u[(1, 1)] = half.conj();
    u
}

pub fn pauli_z_matrix() -> CMatrix {
    let mut z = CMatrix::identity(2);
    z[(1, 1)] = -ONE;
    z
}

pub fn pauli_x_matrix() -> CMatrix {
    CMatrix::from_vec(2, alloc::vec![ZERO, ONE, ONE, ZERO]).expect("2x2")
}

pub fn pauli_y_matrix() -> CMatrix {
    CMatrix::from_vec(2, alloc::vec![ZERO, -I, I, ZERO]).expect("2x2")
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use core::f64::consts::PI;

    fn unitary_reference(theta: f64, rho: &CMatrix) -> CMatrix {
        rho.conjugate_by(&rz_unitary(theta))
    }

    // Oracle for the transfer vector: apply the 2x2 unitary to the matrix units
    // and read the coefficients back off the off-diagonal phase.
    fn transfer_by_conjugation(theta: f64) -> TransferVec {
        let mut e01 = CMatrix::zeros(2);
        e01[(0, 1)] = ONE;
        let out = unitary_reference(theta, &e01)[(0, 1)]; // = e^{-iθ}
        // multiplier(0,1) = a − z − 2ic  and a + z = 1
        let a_minus_z = out.re;
        TransferVec::new((1.0 + a_minus_z) / 2.0, -out.im / 2.0, (1.0 - a_minus_z) / 2.0)
    }

    #[test]
    fn rz_transfer_examples() {
        let id = TransferVec::rz(0.0).unwrap();
        assert_eq!(id, TransferVec::IDENTITY);
        let z = TransferVec::rz(PI).unwrap();
        assert_abs_diff_eq!(z.a, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(z.c, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(z.z, 1.0, epsilon = 1e-15);

        let t = TransferVec::rz(PI / 4.0).unwrap();
        let oracle = transfer_by_conjugation(PI / 4.0);
        assert!(t.max_abs_diff(&oracle) < 1e-15);
        assert_abs_diff_eq!(t.a, 0.853_553_390_593_273_8, epsilon = 1e-15);
        assert_abs_diff_eq!(t.c, 0.353_553_390_593_273_8, epsilon = 1e-15);
        assert_abs_diff_eq!(t.z, 0.146_446_609_406_726_24, epsilon = 1e-15);
        assert!(TransferVec::rz(f64::NAN).is_err());
        assert!(TransferVec::rz(f64::INFINITY).is_err());
    }

    #[test]
    fn dephase_examples() {
        let phi = 0.37;
        let v = TransferVec::rz(phi).unwrap();
        assert_eq!(v.dephase(0.0).unwrap(), v);
        let full = v.dephase(0.5).unwrap();
        assert_abs_diff_eq!(full.a, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(full.c, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(full.z, 0.5, epsilon = 1e-15);

        // term-by-term: [cos²(φ/2) − p cos φ] ρ + ...
        let p = 0.001;
        let d = TransferVec::rz(PI / 4.0).unwrap().dephase(p).unwrap();
        let (s, c) = (PI / 8.0).sin_cos();
        assert_abs_diff_eq!(d.a, c * c - p * (PI / 4.0).cos(), epsilon = 1e-15);
        assert_abs_diff_eq!(d.c, (1.0 - 2.0 * p) * c * s, epsilon = 1e-15);
        assert_abs_diff_eq!(d.z, s * s + p * (PI / 4.0).cos(), epsilon = 1e-15);

        assert!(v.dephase(-0.01).is_err());
        assert!(v.dephase(0.51).is_err());
    }

    #[test]
    fn compose_identity_and_additivity() {
        let x = DiagonalChannel::rz(0.3)
            .unwrap()
            .compose(&DiagonalChannel::dephasing(0.1).unwrap());
        assert!(compose(&DiagonalChannel::identity(), &x).max_abs_diff(&x) < 1e-15);
        let ab = compose(
            &DiagonalChannel::rz(0.4).unwrap(),
            &DiagonalChannel::rz(0.25).unwrap(),
        );
        assert!(ab.max_abs_diff(&DiagonalChannel::rz(0.65).unwrap()) < 1e-15);
    }

    // Brute-force oracle: 4x4 superoperator acting on vec(ρ).
    fn superop(ch: &DiagonalChannel) -> CMatrix {
        let mut s = CMatrix::zeros(4);
        for col in 0..4 {
            let mut unit = CMatrix::zeros(2);
            unit[(col / 2, col % 2)] = ONE;
            let z = pauli_z_matrix();
            let out = unit
                .scale(ch.e00)
                .add(&unit.mul(&z).scale(ch.e01))
                .add(&z.mul(&unit).scale(ch.e10))
                .add(&z.mul(&unit).mul(&z).scale(ch.e11));
            for row in 0..4 {
                s[(row, col)] = out[(row / 2, row % 2)];
            }
        }
        s
    }

    #[test]
    fn compose_dephased_rotations_matches_superoperator_product() {
        let (p1, p2, a, b) = (0.013, 0.2, 0.7, -0.45);
        let lhs = DiagonalChannel::dephasing(p1)
            .unwrap()
            .compose(&DiagonalChannel::rz(a).unwrap());
        let rhs = DiagonalChannel::dephasing(p2)
            .unwrap()
            .compose(&DiagonalChannel::rz(b).unwrap());
        let fast = compose(&lhs, &rhs);
        let brute = superop(&lhs).mul(&superop(&rhs));
        assert!(superop(&fast).max_abs_diff(&brute) < 1e-15);
        let expected = DiagonalChannel::dephasing(p1 + p2 - 2.0 * p1 * p2)
            .unwrap()
            .compose(&DiagonalChannel::rz(a + b).unwrap());
        assert!(fast.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn apply_examples() {
        let plus = DensityMatrix::plus();
        let same = DiagonalChannel::identity().apply(&plus, 0).unwrap();
        assert_eq!(same, plus);

        let minus = DiagonalChannel::pauli_z().apply(&plus, 0).unwrap();
        let m = minus.matrix();
        assert_abs_diff_eq!(m[(0, 1)].re, -0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(m[(1, 1)].re, 0.5, epsilon = 1e-15);

        let t = DiagonalChannel::rz(PI / 4.0).unwrap().apply(&plus, 0).unwrap();
        let want = C64::new(0.0, -PI / 4.0).exp() * 0.5;
        assert!((t.matrix()[(0, 1)] - want).norm() < 1e-15);

        assert!(matches!(
            DiagonalChannel::identity().apply(&plus, 1),
            Err(Error::QubitIndex { .. })
        ));
    }

    #[test]
    fn apply_acts_as_identity_on_other_qubits() {
        let rho = DensityMatrix::plus_state(3);
        let out = DiagonalChannel::rz(0.9).unwrap().apply(&rho, 1).unwrap();
        let u = CMatrix::identity(2)
            .kron(&rz_unitary(0.9))
            .kron(&CMatrix::identity(2));
        let reference = rho.matrix().conjugate_by(&u);
        assert!(out.matrix().max_abs_diff(&reference) < 1e-15);
        assert!(DensityMatrix::new(out.into_matrix()).is_ok());
    }

    #[test]
    fn choi_examples() {
        let id = DiagonalChannel::identity().choi();
        let expect_bell = CMatrix::outer(&bell_state());
        assert!(id.matrix().max_abs_diff(&expect_bell) < 1e-15);

        let z = DiagonalChannel::pauli_z().choi().corners();
        let want = [[0.5, -0.5], [-0.5, 0.5]];
        for i in 0..2 {
            for k in 0..2 {
                assert_abs_diff_eq!(z[i][k].re, want[i][k], epsilon = 1e-15);
            }
        }

        let p = 0.07;
        let ch = DiagonalChannel::dephasing(p)
            .unwrap()
            .compose(&DiagonalChannel::rz(0.8).unwrap());
        let ev = ch.choi().eigenvalues();
        assert!(ev[0].abs() < 1e-14 && ev[1].abs() < 1e-14);
        assert_abs_diff_eq!(ev[2], p, epsilon = 1e-14);
        assert_abs_diff_eq!(ev[3], 1.0 - p, epsilon = 1e-14);
    }

    #[test]
    fn choi_corner_formula() {
        let ch = DiagonalChannel::dephasing(0.2)
            .unwrap()
            .compose(&DiagonalChannel::rz(1.1).unwrap());
        let a11 = (ch.e00 - ch.e01 - ch.e10 + ch.e11) * 0.5;
        assert!((ch.choi().corners()[1][1] - a11).norm() < 1e-15);
    }

    #[test]
    fn multipliers_round_trip() {
        let ch = DiagonalChannel::new_unchecked(
            C64::new(0.3, 0.0),
            C64::new(0.1, 0.2),
            C64::new(0.1, -0.2),
            C64::new(0.7, 0.0),
        );
        let back = DiagonalChannel::from_multipliers(ch.multipliers());
        assert!(back.max_abs_diff(&ch) < 1e-16);
    }

    #[test]
    fn validation_rejects_bad_channels() {
        assert!(DiagonalChannel::new(ONE, ZERO, ZERO, ONE).is_err());
        assert!(DiagonalChannel::new(ONE, I, I, ZERO).is_err());
        assert!(DiagonalChannel::new(ONE, ZERO, ZERO, ZERO).is_ok());
    }

    #[test]
    fn density_matrix_validation() {
        let bad_trace = CMatrix::identity(2);
        assert!(DensityMatrix::new(bad_trace).is_err());
        let mut neg = CMatrix::zeros(2);
        neg[(0, 0)] = C64::new(1.5, 0.0);
        neg[(1, 1)] = C64::new(-0.5, 0.0);
        assert!(DensityMatrix::new(neg).is_err());
        assert!(DensityMatrix::new(CMatrix::identity(3).scale(C64::new(1.0 / 3.0, 0.0))).is_err());
        let psi = [ONE, I];
        let rho = DensityMatrix::from_pure(&psi).unwrap();
        assert_abs_diff_eq!(rho.expectation(&pauli_y_matrix()), 1.0, epsilon = 1e-15);
    }
}
