use std::f64::consts::{FRAC_PI_4, PI};

use mmd_core::channel::{pauli_x_matrix, pauli_y_matrix, pauli_z_matrix, rz_unitary};
use mmd_core::linalg::{CMatrix, C64};
use mmd_core::qpd::{decompose_lp, lambda_dephased, BasisElement};
use mmd_core::teleport::{
    calibrate_top_state, kraus_pair, teleport_chain, teleport_chain_with, uniform_chain,
    Correction, MagicState,
};
use mmd_core::{
    BasisKind, BasisSet, DensityMatrix, DiagonalChannel, Error, HierarchyLevel, NoiseModel,
    TransferVec,
};
use proptest::prelude::*;

fn level(n: f64) -> HierarchyLevel {
    HierarchyLevel::from_n(n).unwrap()
}

fn bloch_state(x: f64, y: f64, z: f64) -> DensityMatrix {
    let r = (x * x + y * y + z * z).sqrt().max(1.0);
    let (x, y, z) = (x / r, y / r, z / r);
    let m = CMatrix::identity(2)
        .add(&pauli_x_matrix().scale(C64::new(x, 0.0)))
        .add(&pauli_y_matrix().scale(C64::new(y, 0.0)))
        .add(&pauli_z_matrix().scale(C64::new(z, 0.0)))
        .scale(C64::new(0.5, 0.0));
    DensityMatrix::new(m).unwrap()
}

fn channel_strategy() -> impl Strategy<Value = DiagonalChannel> {
    (0.0..2.0 * PI, 0.0..0.5f64).prop_map(|(t, p)| {
        DiagonalChannel::dephasing(p)
            .unwrap()
            .compose(&DiagonalChannel::rz(t).unwrap())
    })
}

fn phi_strategy() -> impl Strategy<Value = f64> {
    prop::sample::select(vec![1.0, 2.0, 4.0, 8.0]).prop_map(|n: f64| FRAC_PI_4 / n)
}

fn p_strategy() -> impl Strategy<Value = f64> {
    prop::sample::select(vec![0.0, 1e-4, 1e-3, 5e-3, 1e-2])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn rotation_channel_matches_conjugation(
        t in 0.0..2.0 * PI,
        x in -1.0..1.0f64, y in -1.0..1.0f64, z in -1.0..1.0f64,
    ) {
        let rho = bloch_state(x, y, z);
        let got = DiagonalChannel::rz(t).unwrap().apply(&rho, 0).unwrap();
        let want = rho.matrix().conjugate_by(&rz_unitary(t));
        prop_assert!(got.matrix().max_abs_diff(&want) < 1e-12);
    }

    #[test]
    fn dephased_rotation_preserves_trace(t in -10.0..10.0f64, p in 0.0..=0.5f64) {
        let v = TransferVec::rz(t).unwrap().dephase(p).unwrap();
        prop_assert!((v.a + v.z - 1.0).abs() <= 1e-15);
    }

    #[test]
    fn choi_is_supported_on_corners(ch in channel_strategy()) {
        prop_assert!(ch.choi().off_corner_max() < 1e-14);
    }

    #[test]
    fn composition_is_associative(a in channel_strategy(), b in channel_strategy(), c in channel_strategy()) {
        let left = a.compose(&b).compose(&c);
        let right = a.compose(&b.compose(&c));
        prop_assert!(left.max_abs_diff(&right) < 1e-13);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn lp_matches_closed_form(phi in phi_strategy(), frac in 0.0..=1.0f64, p in p_strategy()) {
        let theta = frac * phi;
        let n = FRAC_PI_4 / phi;
        let pe = (2.0 - 1.0 / n) * p;
        let basis = BasisSet::build(BasisKind::ThreeChannel, level(n), &NoiseModel::linear_bound(p).unwrap()).unwrap();
        let lp = decompose_lp(TransferVec::rz(theta).unwrap(), &basis).unwrap();
        let want = lambda_dephased(theta, phi, pe).unwrap();
        prop_assert!((lp.lambda - want).abs() <= 1e-8, "{} vs {}", lp.lambda, want);
        let x = mmd_core::qpd::analytic_coefficients(theta, phi, pe).unwrap();
        for (e, xv) in basis.elements.iter().zip(x) {
            prop_assert!((lp.coefficient(&e.label) - xv).abs() <= 1e-7);
        }
        prop_assert!(lp.lambda >= 1.0 - 1e-12);
    }

    #[test]
    fn interior_angles_need_three_channels(phi in phi_strategy(), frac in 0.01..0.99f64, p in p_strategy()) {
        let n = FRAC_PI_4 / phi;
        let basis = BasisSet::build(BasisKind::ThreeChannel, level(n), &NoiseModel::linear_bound(p).unwrap()).unwrap();
        let lp = decompose_lp(TransferVec::rz(frac * phi).unwrap(), &basis).unwrap();
        prop_assert_eq!(lp.support().len(), 3);
        prop_assert!(lp.lambda > 1.0 + 1e-12);
    }

    #[test]
    fn noiseless_sign_pattern(phi in phi_strategy(), frac in 0.01..0.99f64) {
        let x = mmd_core::qpd::analytic_coefficients(frac * phi, phi, 0.0).unwrap();
        prop_assert!(x[0] >= 0.0 && x[1] >= 0.0 && x[2] <= 0.0);
    }

    #[test]
    fn lambda_grows_with_noise(phi in phi_strategy(), frac in 0.01..0.99f64, p1 in 0.0..0.2f64, dp in 1e-4..0.2f64) {
        let t = frac * phi;
        prop_assert!(lambda_dephased(t, phi, p1 + dp).unwrap() > lambda_dephased(t, phi, p1).unwrap());
    }
}

#[test]
fn lambda_is_one_exactly_for_basis_members() {
    let noise = NoiseModel::noiseless();
    let basis = BasisSet::build(BasisKind::FullG, level(2.0), &noise).unwrap();
    for e in &basis.elements {
        let d = decompose_lp(e.transfer, &basis).unwrap();
        assert!((d.lambda - 1.0).abs() < 1e-10, "{}", e.label);
    }
    let d = decompose_lp(TransferVec::rz(0.1).unwrap(), &basis).unwrap();
    assert!(d.lambda > 1.0 + 1e-10);
}

#[test]
fn two_channel_grid_is_infeasible() {
    let theta = 0.3;
    let mut checked = 0;
    for i in 0..10 {
        for j in 0..10 {
            let a = 0.05 + 0.6 * i as f64;
            let b = 0.11 + 0.6 * j as f64;
            if (a - b).abs() < 1e-9 {
                continue;
            }
            let els = vec![
                BasisElement::rotation("a", a, 0.0, HierarchyLevel::T).unwrap(),
                BasisElement::rotation("b", b, 0.0, HierarchyLevel::T).unwrap(),
            ];
            let r = decompose_lp(TransferVec::rz(theta).unwrap(), &BasisSet::custom("pair", els));
            assert!(matches!(r, Err(Error::Infeasible { .. })), "({a}, {b})");
            checked += 1;
        }
    }
    assert_eq!(checked, 100);
}

#[test]
fn chains_have_dephasing_structure() {
    for n in [1.0, 2.0, 4.0, 8.0] {
        for p in [0.0, 1e-4, 1e-3, 1e-2, 0.1] {
            let r = teleport_chain(level(n), p).unwrap();
            let choi = r.channel.choi();
            assert!(choi.off_corner_max() < 1e-13);
            let mut ev = choi.eigenvalues();
            ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
            assert!(ev[0].abs() < 1e-13 && ev[1].abs() < 1e-13, "{ev:?}");
            assert!(r.coherent_deviation.abs() < 1e-12);
            let [k0, k1] = kraus_pair(&r.channel);
            let overlap = k0[0].conj() * k1[0] + k0[1].conj() * k1[1];
            assert!(overlap.norm() < 1e-12);
        }
    }
}

#[test]
fn calibration_removes_coherent_error() {
    let skewed = Correction::Channel(DiagonalChannel::rz(2.0 * HierarchyLevel::T.phi() + 0.02).unwrap());
    for n in [2.0, 4.0, 8.0] {
        let mut states = uniform_chain(level(n), 0.002).unwrap();
        let top = states[0].level();
        states[0] = MagicState::with_angle_error(top, 0.03, 0.002).unwrap();
        let before = teleport_chain_with(&states, &skewed).unwrap();
        assert!(before.coherent_deviation.abs() > 1e-3);
        let (_, after) = calibrate_top_state(&states, &skewed).unwrap();
        assert!(after.coherent_deviation.abs() < 1e-10, "{}", after.coherent_deviation);
    }
    // a single state over a unitary but skewed correction cannot be fixed
    let single = [MagicState::dephased(HierarchyLevel::T, 0.002).unwrap()];
    assert!(calibrate_top_state(&single, &skewed).is_err());
    let (g, r) = calibrate_top_state(&single, &Correction::Ideal).unwrap();
    assert!(g.abs() < 1e-12 && r.coherent_deviation.abs() < 1e-12);
}
