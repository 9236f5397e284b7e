//! Separable / biseparable / W / GHZ decision procedure.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::w_two_param;
use crate::measures::{abe, abe_value, MeasureReport, MeasureSettings, OptimizerSettings, Ranks};
use crate::optimize::NelderMead;
use crate::state::{PureTripartiteState, DEFAULT_RANK_TOL};

/// Largest activated entanglement reachable by a W-class state, rounded up
/// to two digits.
pub const W_ABE_BOUND: f64 = 0.15;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub abe_tol: f64,
    pub tau_tol: f64,
    pub rank_tol: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            abe_tol: 1e-4,
            tau_tol: 1e-6,
            rank_tol: DEFAULT_RANK_TOL,
        }
    }
}

/// Bipartition `X|YZ`, named by the subsystem that factors out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Partition {
    #[serde(rename = "A|BC")]
    ABc,
    #[serde(rename = "B|AC")]
    BAc,
    #[serde(rename = "C|AB")]
    CAb,
}

impl std::fmt::Display for Partition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Partition::ABc => "A|BC",
            Partition::BAc => "B|AC",
            Partition::CAb => "C|AB",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClassKind {
    ProductABC,
    Biseparable(Partition),
    WClass,
    GHZClass,
}

impl std::fmt::Display for ClassKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ClassKind::ProductABC => f.write_str("ProductABC"),
            ClassKind::Biseparable(p) => write!(f, "Biseparable({p})"),
            ClassKind::WClass => f.write_str("WClass"),
            ClassKind::GHZClass => f.write_str("GHZClass"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Evidence {
    pub abe: f64,
    pub delta_s: f64,
    pub tangle: f64,
    pub tangle_raw: f64,
    pub ranks: Ranks,
    pub thresholds: Thresholds,
    pub w_bound: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassLabel {
    pub kind: ClassKind,
    pub evidence: Evidence,
}

/// Classifies from an existing report. Ranks are taken from the report, so it
/// should have been computed with `thresholds.rank_tol`.
pub fn classify_report(report: &MeasureReport, thresholds: &Thresholds) -> Result<ClassLabel> {
    let evidence = Evidence {
        abe: report.abe,
        delta_s: report.delta_s,
        tangle: report.tangle,
        tangle_raw: report.tangle_raw,
        ranks: report.ranks,
        thresholds: *thresholds,
        w_bound: W_ABE_BOUND,
    };
    let label = |kind| Ok(ClassLabel { kind, evidence });
    let Ranks { a, b, c } = report.ranks;
    let ghz_by_tangle = report.tangle > thresholds.tau_tol;

    match (a, b, c) {
        (1, 1, 1) => label(ClassKind::ProductABC),
        (1, 2, 2) => label(ClassKind::Biseparable(Partition::ABc)),
        (2, 1, 2) => label(ClassKind::Biseparable(Partition::BAc)),
        (2, 2, 1) => label(ClassKind::Biseparable(Partition::CAb)),
        (2, 2, 2) => {
            if report.abe > W_ABE_BOUND + thresholds.abe_tol && !ghz_by_tangle {
                return Err(Error::Contradiction(Box::new(evidence)));
            }
            if ghz_by_tangle {
                label(ClassKind::GHZClass)
            } else if report.abe > thresholds.abe_tol {
                label(ClassKind::WClass)
            } else {
                Err(Error::Indeterminate(Box::new(evidence)))
            }
        }
        _ => Err(Error::Indeterminate(Box::new(evidence))),
    }
}

pub fn classify(
    psi: &PureTripartiteState,
    thresholds: &Thresholds,
    optimizer: &OptimizerSettings,
) -> Result<ClassLabel> {
    let settings = MeasureSettings {
        optimizer: *optimizer,
        rank_tol: thresholds.rank_tol,
    };
    classify_report(&abe(psi, &settings)?, thresholds)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WBoundScan {
    pub max_abe: f64,
    /// Arguments of [`w_two_param`] at the maximum.
    pub lambda0: f64,
    pub lambda3: f64,
    /// Best value on the grid before refinement.
    pub grid_max: f64,
    pub grid_points: usize,
}

/// Supremum of activated entanglement over the two-parameter W family:
/// a grid of spacing `grid_step` followed by simplex refinement.
pub fn w_bound_scan(grid_step: f64, optimizer: &OptimizerSettings) -> Result<WBoundScan> {
    if !(grid_step > 0.0 && grid_step <= 0.05) {
        return Err(Error::Domain {
            name: "grid_step",
            value: grid_step,
            constraint: "0 < grid_step <= 0.05",
        });
    }
    let n = (1.0 / grid_step).round() as usize;
    let points: Vec<(f64, f64)> = (0..=n)
        .flat_map(|i| (0..=n).map(move |j| (i as f64 / n as f64, j as f64 / n as f64)))
        .filter(|(x, y)| x * x + y * y <= 1.0)
        .collect();
    let values: Vec<f64> = points
        .par_iter()
        .map(|&(x, y)| w_two_param(x, y).map(|psi| abe_value(&psi, optimizer)))
        .collect::<Result<_>>()?;
    let (best_idx, &grid_max) = values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("grid is nonempty");

    let objective = |x: &[f64; 2]| match w_two_param(x[0], x[1]) {
        Ok(psi) => -abe_value(&psi, optimizer),
        Err(_) => f64::INFINITY,
    };
    let nm = NelderMead {
        max_iter: 300,
        diameter_tol: 1e-9,
    };
    let (x0, y0) = points[best_idx];
    let refined = nm.minimize(objective, [x0, y0], 0.5 * grid_step);
    let (max_abe, lambda0, lambda3) = if -refined.value > grid_max {
        (-refined.value, refined.x[0], refined.x[1])
    } else {
        (grid_max, x0, y0)
    };
    Ok(WBoundScan {
        max_abe,
        lambda0,
        lambda3,
        grid_max,
        grid_points: points.len(),
    })
}
