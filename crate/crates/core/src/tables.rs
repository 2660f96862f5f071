//! Small-angle overhead tables over the (n, p) grid.

use alloc::vec::Vec;

use crate::error::Result;
use crate::qpd::{gamma, gamma_se, ln_clifford_lambda, ln_lambda_dephased, p_eff};
use crate::qpd::{HierarchyLevel, PeffRule};

/// Angle standing in for the `θ → 0` limit.
pub const SMALL_THETA: f64 = 1e-7;

/// Column dephasing rates.
pub const TABLE_P: [f64; 4] = [1e-4, 1e-3, 5e-3, 1e-2];

/// Row levels `n`.
pub const TABLE_N: [f64; 4] = [1.0, 2.0, 4.0, 8.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TableKind {
    /// Saving degree against the `{I, S, Z}` decomposition.
    Gamma,
    /// Saving degree against the stabilizer extent.
    GammaSe,
    /// `ln Λ`, with the Clifford row first.
    LnLambda,
}

impl TableKind {
    pub fn name(self) -> &'static str {
        match self {
            TableKind::Gamma => "gamma",
            TableKind::GammaSe => "gamma_se",
            TableKind::LnLambda => "ln_lambda",
        }
    }

    pub fn all() -> [TableKind; 3] {
        [TableKind::Gamma, TableKind::GammaSe, TableKind::LnLambda]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub level: HierarchyLevel,
    pub cells: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub kind: TableKind,
    pub theta: f64,
    pub p: Vec<f64>,
    pub rows: Vec<TableRow>,
    /// Per column, the row index of the best `n` when going one level
    /// further would not improve on it. `None` when the best is the last row.
    pub bold: Vec<Option<usize>>,
}

impl Table {
    pub fn cell(&self, n: f64, p: f64) -> Option<f64> {
        let col = self.p.iter().position(|&q| q == p)?;
        self.rows
            .iter()
            .find(|r| r.level.n() == n)
            .map(|r| r.cells[col])
    }
}

fn value(kind: TableKind, level: HierarchyLevel, p: f64, rule: &PeffRule) -> Result<f64> {
    let pe = p_eff(level, p, rule)?;
    let phi = level.phi();
    match kind {
        TableKind::Gamma => gamma(SMALL_THETA, phi, pe),
        TableKind::GammaSe => gamma_se(SMALL_THETA, phi, pe),
        TableKind::LnLambda if level.is_clifford() => ln_clifford_lambda(SMALL_THETA),
        TableKind::LnLambda => ln_lambda_dephased(SMALL_THETA, phi, pe),
    }
}

/// Build one table on the standard grid.
pub fn build(kind: TableKind, rule: &PeffRule) -> Result<Table> {
    let mut levels = Vec::new();
    if kind == TableKind::LnLambda {
        levels.push(HierarchyLevel::S);
    }
    for n in TABLE_N {
        levels.push(HierarchyLevel::from_n(n)?);
    }
    let mut rows = Vec::with_capacity(levels.len());
    for level in levels {
        let cells = TABLE_P
            .iter()
            .map(|&p| value(kind, level, p, rule))
            .collect::<Result<Vec<_>>>()?;
        rows.push(TableRow { level, cells });
    }

    let mut bold = Vec::with_capacity(TABLE_P.len());
    for (col, &p) in TABLE_P.iter().enumerate() {
        if kind == TableKind::LnLambda {
            bold.push(None);
            continue;
        }
        let (best, best_v) = rows
            .iter()
            .enumerate()
            .map(|(i, r)| (i, r.cells[col]))
            .fold((0, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a });
        let next = rows[rows.len() - 1]
            .level
            .index()
            .checked_add(1)
            .map(HierarchyLevel::from_index)
            .transpose()?;
        let beyond = match next {
            Some(l) => value(kind, l, p, rule)?,
            None => f64::NEG_INFINITY,
        };
        bold.push((beyond < best_v).then_some(best));
    }

    Ok(Table {
        kind,
        theta: SMALL_THETA,
        p: TABLE_P.to_vec(),
        rows,
        bold,
    })
}
