use mmd_core::fermi_hubbard::{estimate, sample_budget, FhConfig};
use mmd_core::qpd::decompose;
use mmd_core::sampler::{self, GateSlot, Observable};
use mmd_core::{BasisKind, DensityMatrix, HierarchyLevel, NoiseModel};
use proptest::prelude::*;

fn level(n: f64) -> HierarchyLevel {
    HierarchyLevel::from_n(n).unwrap()
}

#[test]
fn estimator_is_unbiased() {
    let configs = [
        (0.05, 2.0, 0.001),
        (0.01, 1.0, 0.0),
        (0.2, 1.0, 0.005),
        (0.1, 2.0, 0.01),
        (0.03, 4.0, 0.001),
        (0.15, 2.0, 0.0001),
        (0.005, 8.0, 0.001),
        (0.6, 1.0, 0.002),
        (0.07, 4.0, 0.01),
        (0.3, 1.0, 0.0),
    ];
    let state = DensityMatrix::plus();
    for (theta, n, p) in configs {
        let d = decompose(theta, BasisKind::ThreeChannel, level(n), &NoiseModel::linear_bound(p).unwrap()).unwrap();
        let gates = [GateSlot { decomposition: d, target: 0 }];
        let mut plan = sampler::plan(&gates, Observable::pauli("X").unwrap(), 0.02, 0.01).unwrap();
        plan.n_samples = 100_000;
        let (mut sum, mut var) = (0.0, 0.0);
        let seeds = 30;
        let mut exact = 0.0;
        for seed in 0..seeds {
            let r = sampler::estimate(&plan, &state, seed).unwrap();
            sum += r.mean;
            var += r.std_error * r.std_error;
            exact = r.exact_reference;
        }
        let mean = sum / seeds as f64;
        let se = var.sqrt() / seeds as f64;
        assert!((mean - exact).abs() < 3.0 * se.max(1e-15), "θ={theta} n={n} p={p}: {mean} vs {exact} (se {se})");
        assert!((exact - theta.cos()).abs() < 1e-12);
    }
}

fn cfg(t: f64, n: f64, p: f64) -> FhConfig {
    FhConfig::new(6, t, level(n), NoiseModel::linear_bound(p).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sample_budget_is_monotone(t in 0.01..0.8f64, dt in 0.001..0.1f64, p in 0.0..0.01f64, dp in 1e-5..0.01f64) {
        let n = 4.0;
        let base = sample_budget(&cfg(t, n, p)).unwrap().ln;
        prop_assert!(sample_budget(&cfg(t + dt, n, p)).unwrap().ln > base);
        prop_assert!(sample_budget(&cfg(t, n, p + dp)).unwrap().ln > base);
        let bigger = FhConfig { lattice_side: 8, ..cfg(t, n, p) };
        prop_assert!(sample_budget(&bigger).unwrap().ln > base);
    }

    #[test]
    fn larger_n_needs_fewer_samples(t in 0.01..0.4f64) {
        let ln: Vec<f64> = [0.5, 1.0, 2.0, 4.0, 8.0]
            .iter()
            .map(|&n| sample_budget(&cfg(t, n, 0.001)).unwrap().ln)
            .collect();
        prop_assert!(ln.windows(2).all(|w| w[0] > w[1]), "{ln:?}");
    }

    #[test]
    fn estimate_invariants_hold(t in 0.0..0.8f64, n in prop::sample::select(vec![1.0, 2.0, 4.0, 8.0]), l in 2u32..9) {
        let c = FhConfig { lattice_side: l, ..cfg(t, n, 0.001) };
        let e = estimate(&c).unwrap();
        let big_n = 2 * u64::from(l) * u64::from(l);
        prop_assert_eq!(e.counts.n_h, 8 * big_n * c.trotter_steps);
        prop_assert_eq!(e.counts.n_i, big_n * c.trotter_steps / 2);
        prop_assert_eq!(e.counts.theta_h, c.tau * t / (4.0 * c.trotter_steps as f64));
        prop_assert_eq!(e.counts.theta_i, c.u * t / (4.0 * c.trotter_steps as f64));
        if e.n_m > 0.0 {
            prop_assert!((e.n_total.ln - (e.n_m.ln() + e.n_sample.ln)).abs() < 1e-12);
        }
    }
}

#[test]
fn trotter_limit_has_converged() {
    for t in [0.1, 0.25, 0.35] {
        let a = estimate(&cfg(t, 8.0, 0.001)).unwrap();
        let b = estimate(&FhConfig { trotter_steps: 2_000_000, ..cfg(t, 8.0, 0.001) }).unwrap();
        let rel = (b.n_total.ln - a.n_total.ln).abs() / a.n_total.ln;
        assert!(rel < 1e-3, "t={t}: {rel}");
    }
}
