//! Grid sweeps producing figure-style tables: utility curves, best certainty equivalents and
//! Arimoto gaps as functions of the order.

use serde::{Deserialize, Serialize};

use crate::betting::isoelastic_utility;
use crate::entropy::arimoto_mi;
use crate::error::{Error, Result};
use crate::games::{arimoto_gap, qsb_value, uninformed_qsb_value, GapInstance, QsbGame};
use crate::order::{Order, RiskParam};
use crate::povm_opt::AscentOptions;
use crate::quantum::{Ensemble, Povm};

/// Risk parameters of the default utility sweep.
pub const UTILITY_RISKS: [f64; 7] = [-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0];

/// Orders of the default order sweeps. The order zero is excluded.
pub const ALPHA_GRID: [f64; 16] = [
    f64::NEG_INFINITY,
    -8.0,
    -4.0,
    -2.0,
    -1.0,
    -0.5,
    -0.25,
    -0.125,
    0.125,
    0.25,
    0.5,
    1.0,
    2.0,
    4.0,
    8.0,
    f64::INFINITY,
];

/// A numeric table with named columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Curvature {
    Convex,
    Linear,
    Concave,
    Mixed,
}

pub fn second_differences(v: &[f64]) -> Vec<f64> {
    v.windows(3).map(|w| w[2] - 2.0 * w[1] + w[0]).collect()
}

/// Curvature read off the exact signs of the second differences.
pub fn curvature(v: &[f64]) -> Curvature {
    let d = second_differences(v);
    if d.iter().all(|&x| x == 0.0) {
        Curvature::Linear
    } else if d.iter().all(|&x| x > 0.0) {
        Curvature::Convex
    } else if d.iter().all(|&x| x < 0.0) {
        Curvature::Concave
    } else {
        Curvature::Mixed
    }
}

/// Curvature of `u_R` on positive wealth.
pub fn expected_curvature(r: f64) -> Curvature {
    if r > 0.0 {
        Curvature::Concave
    } else if r < 0.0 {
        Curvature::Convex
    } else {
        Curvature::Linear
    }
}

pub fn utility_column(r: f64) -> String {
    format!("u_R={r}")
}

/// `u_R(w)` on `points` equally spaced wealths in `[lo, hi]`, one column per risk.
///
/// With a dyadic spacing such as `[1, 3]` on `2^k + 1` points the grid is exact, so the
/// risk-neutral column has second differences exactly zero.
pub fn isoelastic_sweep(risks: &[f64], lo: f64, hi: f64, points: usize) -> Result<Table> {
    if points < 3 || !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(Error::Unsupported(format!(
            "utility sweep needs 0 < lo < hi and at least 3 points, got [{lo}, {hi}] with {points}"
        )));
    }
    let rs = risks.iter().map(|&r| RiskParam::new(r)).collect::<Result<Vec<_>>>()?;
    let step = (hi - lo) / (points - 1) as f64;
    let mut columns = vec!["w".to_string()];
    columns.extend(risks.iter().map(|&r| utility_column(r)));
    let rows = (0..points)
        .map(|i| {
            let w = lo + i as f64 * step;
            let mut row = vec![w];
            for &r in &rs {
                row.push(isoelastic_utility(w, r)?);
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Table { columns, rows })
}

pub const ICE_COLUMNS: [&str; 7] = [
    "alpha",
    "risk",
    "odds",
    "ice_informed",
    "ice_uninformed",
    "ratio",
    "arimoto_mi",
];

/// Best certainty equivalents with and without the measurement for constant odds `sgn(α)·c`.
pub fn ice_vs_alpha(e: &Ensemble, m: &Povm, alphas: &[f64], c: f64) -> Result<Table> {
    let j = e.joint(m)?;
    let rows = alphas
        .iter()
        .map(|&a| {
            let o = Order::new(a)?;
            let r = o.risk()?;
            let game = QsbGame::constant(c, o, e.clone())?;
            let with = qsb_value(&game, m, o)?;
            let without = uninformed_qsb_value(&game, o)?;
            Ok(vec![a, r.value(), o.sgn() * c, with, without, with / without, arimoto_mi(&j, o)?])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Table {
        columns: ICE_COLUMNS.iter().map(|s| s.to_string()).collect(),
        rows,
    })
}

/// True when every row with `α > 0` is a gain (positive certainty equivalents) and every row
/// with `α < 0` is a loss, with both kinds present.
pub fn gain_loss_flip(t: &Table) -> bool {
    let (Some(a), Some(w), Some(u)) = (t.column("alpha"), t.column("ice_informed"), t.column("ice_uninformed")) else {
        return false;
    };
    let gains = a.iter().any(|&x| x > 0.0);
    let losses = a.iter().any(|&x| x < 0.0);
    gains
        && losses
        && (0..a.len()).all(|i| {
            if a[i] > 0.0 {
                w[i] > 0.0 && u[i] > 0.0
            } else {
                w[i] < 0.0 && u[i] < 0.0
            }
        })
}

/// Arimoto gap of a fixed instance across orders.
pub fn gap_vs_alpha(inst: &GapInstance, alphas: &[f64], opts: &AscentOptions) -> Result<Table> {
    let rows = alphas
        .iter()
        .map(|&a| Ok(vec![a, arimoto_gap(inst, Order::new(a)?, opts)?]))
        .collect::<Result<Vec<_>>>()?;
    Ok(Table {
        columns: vec!["alpha".into(), "gap".into()],
        rows,
    })
}
