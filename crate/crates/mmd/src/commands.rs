use std::collections::BTreeMap;
use std::fmt::Write as _;

use mmd_core::fermi_hubbard::{classical_runtime, FhRow};
use mmd_core::qpd::{self, gamma_small_angle_limit, ln_clifford_lambda, p_eff};
use mmd_core::sampler::{exact_expectation, plan_with, EvalMode, GateSlot, Observable};
use mmd_core::tables::{self, Table, TableKind, TABLE_P};
use mmd_core::teleport::{
    calibrate_top_state, teleport_chain_with, Correction, MagicState, TeleportResult,
};
use mmd_core::{
    BasisKind, DensityMatrix, HierarchyLevel, NoiseModel, PeffRule, TransferVec,
};
use serde::Serialize;
use serde_json::Value;

use crate::cli::{
    Command, DecomposeArgs, FhArgs, McArgs, Metric, OutArgs, RecordFormat, SweepArgs,
    TableFormat, TablesArgs, TeleportArgs, VerifyMode,
};
use crate::config::{range, FhFile};
use crate::error::Result;
use crate::output::{csv_bytes, num, opt_num, sci, write_atomic, RunManifest, SCHEMA_VERSION};
use crate::parallel::{self, par_map};

/// What a command produced, before anything is written.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub subcommand: &'static str,
    pub params: Value,
    pub seed: Option<u64>,
    /// Goes to `--out` when given.
    pub csv: Vec<u8>,
    /// Printed when there is no `--out`.
    pub stdout: String,
    /// Printed even with `--out`.
    pub report: String,
}

fn noise(p: f64, rule: PeffRule) -> Result<NoiseModel> {
    Ok(NoiseModel::new(p, rule)?)
}

#[derive(Debug, Serialize)]
struct CoefficientRecord<'a> {
    label: &'a str,
    x: f64,
}

#[derive(Debug, Serialize)]
struct DecomposeRecord<'a> {
    schema: u32,
    theta: f64,
    basis: &'static str,
    n: f64,
    p: f64,
    p_eff: f64,
    lambda: f64,
    ln_lambda: f64,
    gamma: Option<f64>,
    expected_magic: f64,
    support: Vec<&'a str>,
    coefficients: Vec<CoefficientRecord<'a>>,
    basis_id: &'a str,
}

const DECOMPOSE_HEADER: [&str; 12] = [
    "theta",
    "basis",
    "n",
    "p",
    "p_eff",
    "lambda",
    "ln_lambda",
    "gamma",
    "expected_magic",
    "support",
    "coefficients",
    "basis_id",
];

fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

pub fn decompose(a: &DecomposeArgs) -> Result<Outcome> {
    let theta = a.theta.value()?;
    let level = HierarchyLevel::from_n(a.n)?;
    let noise = noise(a.p, a.peff_rule.rule().rule())?;
    let kind = a.basis.kind();
    let d = qpd::decompose(theta, kind, level, &noise)?;
    let gamma = if theta != 0.0 {
        finite(ln_clifford_lambda(theta)? / d.ln_lambda())
    } else {
        None
    };
    let rec = DecomposeRecord {
        schema: SCHEMA_VERSION,
        theta,
        basis: kind.name(),
        n: level.n(),
        p: a.p,
        p_eff: noise.p_eff(level)?,
        lambda: d.lambda,
        ln_lambda: d.ln_lambda(),
        gamma,
        expected_magic: d.expected_magic(),
        support: d.support(),
        coefficients: d
            .terms
            .iter()
            .map(|t| CoefficientRecord {
                label: &t.label,
                x: t.coefficient,
            })
            .collect(),
        basis_id: &d.basis_id,
    };
    let row = vec![
        num(rec.theta),
        rec.basis.to_string(),
        num(rec.n),
        num(rec.p),
        num(rec.p_eff),
        num(rec.lambda),
        num(rec.ln_lambda),
        opt_num(rec.gamma),
        num(rec.expected_magic),
        rec.support.join(";"),
        rec.coefficients
            .iter()
            .map(|c| format!("{}={}", c.label, num(c.x)))
            .collect::<Vec<_>>()
            .join(";"),
        rec.basis_id.to_string(),
    ];
    let csv = csv_bytes(&DECOMPOSE_HEADER, &[row])?;
    let stdout = match a.format {
        RecordFormat::Json => serde_json::to_string(&rec)? + "\n",
        RecordFormat::Csv => String::from_utf8_lossy(&csv).into_owned(),
    };
    Ok(Outcome {
        subcommand: "decompose",
        params: serde_json::to_value(a)?,
        seed: None,
        csv,
        stdout,
        report: String::new(),
    })
}

fn sweep_value(
    metric: Metric,
    theta: f64,
    kind: BasisKind,
    level: HierarchyLevel,
    noise: &NoiseModel,
) -> mmd_core::Result<f64> {
    let d = qpd::decompose(theta, kind, level, noise)?;
    Ok(match metric {
        Metric::Lambda => d.lambda,
        Metric::E => d.expected_magic(),
        Metric::Gamma if theta == 0.0 => {
            if level.is_clifford() || kind == BasisKind::CliffordC {
                1.0
            } else {
                gamma_small_angle_limit(level.phi(), noise.p_eff(level)?)?
            }
        }
        Metric::Gamma => ln_clifford_lambda(theta)? / d.ln_lambda(),
    })
}

pub fn sweep(a: &SweepArgs) -> Result<Outcome> {
    let thetas = range(a.theta_start, a.theta_stop, a.theta_step)?;
    let levels = a
        .n
        .iter()
        .map(|&n| HierarchyLevel::from_n(n))
        .collect::<mmd_core::Result<Vec<_>>>()?;
    let noise = noise(a.p, a.peff_rule.rule().rule())?;
    let kind = a.basis.kind();
    let points: Vec<(HierarchyLevel, f64)> = levels
        .iter()
        .flat_map(|&l| thetas.iter().map(move |&t| (l, t)))
        .collect();
    let values = par_map(&points, a.out.workers, |&(l, t)| {
        sweep_value(a.metric, t, kind, l, &noise)
    });
    let mut rows = Vec::with_capacity(points.len());
    for ((level, theta), v) in points.iter().zip(values) {
        rows.push(vec![num(*theta), num(level.n()), num(a.p), num(v?)]);
    }
    let csv = csv_bytes(&["theta", "n", "p", "metric_value"], &rows)?;
    Ok(Outcome {
        subcommand: "sweep",
        params: serde_json::to_value(a)?,
        seed: None,
        stdout: String::from_utf8_lossy(&csv).into_owned(),
        csv,
        report: String::new(),
    })
}

fn p_label(p: f64) -> String {
    format!("p={:.2}%", p * 100.0)
}

fn cell_display(kind: TableKind, v: f64) -> String {
    match kind {
        TableKind::LnLambda => sci(v, 2),
        _ => format!("{v:.2}"),
    }
}

pub fn render_table(t: &Table) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{} (theta = {})", t.kind.name(), sci(t.theta, 2));
    let _ = write!(s, "{:<6}", "n");
    for &p in &t.p {
        let _ = write!(s, "{:>12}", p_label(p));
    }
    s.push('\n');
    for (i, r) in t.rows.iter().enumerate() {
        let _ = write!(s, "{:<6}", r.level.n());
        for (col, &v) in r.cells.iter().enumerate() {
            let mut cell = cell_display(t.kind, v);
            if t.bold[col] == Some(i) {
                cell = format!("*{cell}*");
            }
            let _ = write!(s, "{cell:>12}");
        }
        s.push('\n');
    }
    s
}

pub fn tables(a: &TablesArgs) -> Result<Outcome> {
    let rule = a.peff_rule.rule().rule();
    let built = TableKind::all()
        .iter()
        .map(|&k| tables::build(k, &rule))
        .collect::<mmd_core::Result<Vec<_>>>()?;
    let mut rows = Vec::new();
    let mut text = String::new();
    for t in &built {
        for (i, r) in t.rows.iter().enumerate() {
            for (col, &v) in r.cells.iter().enumerate() {
                rows.push(vec![
                    t.kind.name().to_string(),
                    num(r.level.n()),
                    num(TABLE_P[col]),
                    num(v),
                    cell_display(t.kind, v),
                    (t.bold[col] == Some(i)).to_string(),
                ]);
            }
        }
        if !text.is_empty() {
            text.push('\n');
        }
        text.push_str(&render_table(t));
    }
    let csv = csv_bytes(&["table", "n", "p", "value", "display", "bold"], &rows)?;
    let stdout = match a.format {
        TableFormat::Text => text,
        TableFormat::Csv => String::from_utf8_lossy(&csv).into_owned(),
    };
    Ok(Outcome {
        subcommand: "tables",
        params: serde_json::to_value(a)?,
        seed: None,
        csv,
        stdout,
        report: String::new(),
    })
}

pub const FH_HEADER: [&str; 10] = [
    "L",
    "t",
    "n",
    "p",
    "r",
    "N_m",
    "log10_N_sample",
    "log10_N_total",
    "log10_synth_total",
    "s_opt",
];

pub fn fh_row(r: &FhRow) -> Vec<String> {
    vec![
        r.lattice_side.to_string(),
        num(r.t),
        num(r.level.n()),
        num(r.p),
        r.r.to_string(),
        num(r.n_m),
        num(r.log10_n_sample),
        opt_num(r.log10_n_total),
        opt_num(r.log10_synth_total),
        r.s_opt.map(|s| s.to_string()).unwrap_or_default(),
    ]
}

/// Non-Clifford level with the fewest total magic states at each (L, t).
pub fn best_rows(rows: &[FhRow]) -> Vec<&FhRow> {
    let mut best: BTreeMap<(u32, u64), &FhRow> = BTreeMap::new();
    for r in rows.iter().filter(|r| !r.level.is_clifford()) {
        let key = (r.lattice_side, r.t.to_bits());
        let total = r.log10_n_total.unwrap_or(f64::NEG_INFINITY);
        match best.get(&key) {
            Some(b) if b.log10_n_total.unwrap_or(f64::NEG_INFINITY) <= total => {}
            _ => {
                best.insert(key, r);
            }
        }
    }
    let mut out: Vec<&FhRow> = best.into_values().collect();
    out.sort_by(|a, b| (a.lattice_side, a.t).partial_cmp(&(b.lattice_side, b.t)).expect("finite t"));
    out
}

pub fn fh(a: &FhArgs) -> Result<Outcome> {
    let file = FhFile::load(&a.config)?;
    let grid = file.grid(&a.config)?;
    let points = grid.points();
    let results = par_map(&points, a.out.workers, |pt| grid.row(pt));
    let rows = results.into_iter().collect::<mmd_core::Result<Vec<_>>>()?;
    let csv = csv_bytes(&FH_HEADER, &rows.iter().map(fh_row).collect::<Vec<_>>())?;

    let mut report = String::new();
    if a.best {
        for r in best_rows(&rows) {
            let _ = writeln!(
                report,
                "best L={} t={} n={} N_m={:.1} log10_N_sample={:.3} log10_N_total={}",
                r.lattice_side,
                r.t,
                r.level.n(),
                r.n_m,
                r.log10_n_sample,
                r.log10_n_total.map_or("-inf".into(), |v| format!("{v:.3}")),
            );
        }
    }
    if let Some(eps) = file.classical_epsilon {
        let scale = match file.classical_const {
            Some(c) => format!("const {c} s"),
            None => "scaling only, const 1 s".to_string(),
        };
        let mut seen = Vec::new();
        for pt in &points {
            if seen.contains(&(pt.lattice_side, pt.t.to_bits())) {
                continue;
            }
            seen.push((pt.lattice_side, pt.t.to_bits()));
            let cfg = grid.config(pt)?;
            let rt = classical_runtime(&cfg, eps, file.classical_const)?;
            let _ = writeln!(
                report,
                "classical L={} t={} epsilon={} log10_seconds={:.3} ({scale})",
                pt.lattice_side,
                pt.t,
                eps,
                rt.log10()
            );
        }
    }
    Ok(Outcome {
        subcommand: "fh",
        params: serde_json::json!({
            "config": serde_json::to_value(&file)?,
            "best": a.best,
        }),
        seed: None,
        stdout: String::from_utf8_lossy(&csv).into_owned(),
        csv,
        report,
    })
}

pub fn verify_mc(a: &McArgs) -> Result<Outcome> {
    let level = HierarchyLevel::from_n(a.n)?;
    let noise = noise(a.p, a.peff_rule.rule().rule())?;
    let d = qpd::decompose(a.theta, a.basis.kind(), level, &noise)?;
    let slots = vec![
        GateSlot {
            decomposition: d,
            target: 0,
        };
        a.gates
    ];
    let mode = if a.measurement {
        EvalMode::Measurement
    } else {
        EvalMode::Exact
    };
    let plan = plan_with(&slots, Observable::pauli("X")?, a.epsilon, a.delta, a.cap, mode)?;
    let state = DensityMatrix::plus();
    let noisy = TransferVec::rz(a.theta)?.dephase(a.p)?.to_channel();
    let unmitigated = exact_expectation(&vec![(noisy, 0); a.gates], &state, &plan.observable)?;

    let mut report = String::new();
    let mut rows = Vec::new();
    let mut passed = 0u64;
    let mut exact = f64::NAN;
    for trial in 0..a.trials {
        let seed = a.seed.wrapping_add(trial);
        let r = parallel::estimate(&plan, &state, seed, a.out.workers)?;
        exact = r.exact_reference;
        let ok = r.within_tolerance();
        passed += u64::from(ok);
        let _ = writeln!(
            report,
            "seed={seed} mean={:.6} exact={:.6} epsilon={} n_samples={} std_error={:.3e} {}",
            r.mean,
            r.exact_reference,
            r.half_width,
            r.n_used,
            r.std_error,
            if ok { "PASS" } else { "FAIL" }
        );
        rows.push(vec![
            seed.to_string(),
            num(r.mean),
            num(r.exact_reference),
            num(r.half_width),
            r.n_used.to_string(),
            num(r.std_error),
            ok.to_string(),
        ]);
    }
    let _ = writeln!(
        report,
        "lambda_total={:.6} passed {passed}/{} trials",
        plan.total_lambda, a.trials
    );
    let _ = writeln!(
        report,
        "unmitigated (dephased rotation, p={}) = {:.6}, bias {:.3e}",
        a.p,
        unmitigated,
        exact - unmitigated
    );
    let csv = csv_bytes(
        &["seed", "mean", "exact", "epsilon", "n_samples", "std_error", "within"],
        &rows,
    )?;
    Ok(Outcome {
        subcommand: "verify-mc",
        params: serde_json::to_value(a)?,
        seed: Some(a.seed),
        csv,
        stdout: String::new(),
        report,
    })
}

#[derive(Debug, Serialize)]
struct TeleportRecord {
    schema: u32,
    n: f64,
    p: f64,
    alpha: f64,
    fitted_p_eff: f64,
    fitted_angle: f64,
    coherent_deviation: f64,
    residual: f64,
    bound_p_eff: f64,
    exact_chain_p_eff: f64,
    calibration_angle: Option<f64>,
}

pub fn verify_teleport(a: &TeleportArgs) -> Result<Outcome> {
    let top = HierarchyLevel::from_n(a.n)?;
    let mut states = Vec::new();
    let mut l = top;
    while !l.is_clifford() {
        states.push(MagicState::with_angle_error(l, a.alpha, a.p)?);
        l = l.lower().expect("non-Clifford level has a lower one");
    }
    let (cal, res): (Option<f64>, TeleportResult) = if a.calibrate {
        let (g, r) = calibrate_top_state(&states, &Correction::Ideal)?;
        (Some(g), r)
    } else {
        (None, teleport_chain_with(&states, &Correction::Ideal)?)
    };
    let rec = TeleportRecord {
        schema: SCHEMA_VERSION,
        n: top.n(),
        p: a.p,
        alpha: a.alpha,
        fitted_p_eff: res.fitted_p,
        fitted_angle: res.fitted_angle,
        coherent_deviation: res.coherent_deviation,
        residual: res.residual,
        bound_p_eff: p_eff(top, a.p, &PeffRule::LinearBound)?,
        exact_chain_p_eff: p_eff(top, a.p, &PeffRule::Exact)?,
        calibration_angle: cal,
    };
    let header = [
        "n",
        "p",
        "alpha",
        "fitted_p_eff",
        "fitted_angle",
        "coherent_deviation",
        "residual",
        "bound_p_eff",
        "exact_chain_p_eff",
        "calibration_angle",
    ];
    let row = vec![
        num(rec.n),
        num(rec.p),
        num(rec.alpha),
        num(rec.fitted_p_eff),
        num(rec.fitted_angle),
        num(rec.coherent_deviation),
        num(rec.residual),
        num(rec.bound_p_eff),
        num(rec.exact_chain_p_eff),
        opt_num(rec.calibration_angle),
    ];
    let csv = csv_bytes(&header, &[row])?;
    let stdout = match a.format {
        RecordFormat::Json => serde_json::to_string(&rec)? + "\n",
        RecordFormat::Csv => String::from_utf8_lossy(&csv).into_owned(),
    };
    Ok(Outcome {
        subcommand: "verify-teleport",
        params: serde_json::to_value(a)?,
        seed: None,
        csv,
        stdout,
        report: String::new(),
    })
}

fn out_args(cmd: &Command) -> &OutArgs {
    match cmd {
        Command::Decompose(a) => &a.out,
        Command::Sweep(a) => &a.out,
        Command::Tables(a) => &a.out,
        Command::Fh(a) => &a.out,
        Command::Verify(v) => match &v.mode {
            VerifyMode::Mc(a) => &a.out,
            VerifyMode::Teleport(a) => &a.out,
        },
    }
}

pub fn execute(cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::Decompose(a) => decompose(a),
        Command::Sweep(a) => sweep(a),
        Command::Tables(a) => tables(a),
        Command::Fh(a) => fh(a),
        Command::Verify(v) => match &v.mode {
            VerifyMode::Mc(a) => verify_mc(a),
            VerifyMode::Teleport(a) => verify_teleport(a),
        },
    }
}

/// Run a parsed command: compute, then write `--out`, `--manifest` and
/// the console output.
pub fn run(cmd: &Command) -> Result<()> {
    let outcome = execute(cmd)?;
    let out = out_args(cmd);
    match &out.out {
        Some(path) => write_atomic(path, &outcome.csv)?,
        None => print!("{}", outcome.stdout),
    }
    print!("{}", outcome.report);
    if let Some(path) = &out.manifest {
        RunManifest::new(outcome.subcommand, outcome.params, outcome.seed, &outcome.csv)
            .write(path)?;
    }
    Ok(())
}
