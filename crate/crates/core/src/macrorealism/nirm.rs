//! Noninvasive-realist models: joint distributions over the sixteen
//! deterministic assignments (Q₁, Q₂, Q₃, Q₄) ∈ {±1}⁴, and the linear program
//! that decides whether one reproduces a record's pairwise statistics.

use serde::Serialize;

use crate::dynamics::{Outcome, PairStatistics};
use crate::error::{Error, Result};
use crate::numerics::tol;

use super::nsit::nsit_check;
use super::record::{ExperimentRecord, Pair};
use super::simplex::phase_one;

/// Infeasibility (Σ of artificials) below which the program counts as solved.
const FEASIBILITY_EPS: f64 = 1e-10;

/// Outcome of Q_t (zero-based) under assignment `d`: bit t set means −1.
pub fn assignment_outcome(d: usize, time: usize) -> Outcome {
    if (d >> time) & 1 == 0 {
        Outcome::Plus
    } else {
        Outcome::Minus
    }
}

pub fn assignment_label(d: usize) -> String {
    (0..4)
        .map(|t| match assignment_outcome(d, t) {
            Outcome::Plus => '+',
            Outcome::Minus => '-',
        })
        .collect()
}

/// Weights over the 16 deterministic four-time assignments.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JointDistribution16 {
    weights: [f64; 16],
}

impl JointDistribution16 {
    pub fn new(weights: [f64; 16]) -> Result<Self> {
        if weights
            .iter()
            .any(|w| !w.is_finite() || *w < -tol::STATISTICAL)
        {
            return Err(Error::InvalidProbabilities(
                "joint weights must be finite and non-negative".into(),
            ));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > tol::STATISTICAL {
            return Err(Error::InvalidProbabilities(format!(
                "joint weights sum to {sum}"
            )));
        }
        Ok(Self { weights })
    }

    pub fn weights(&self) -> &[f64; 16] {
        &self.weights
    }

    pub fn pair_statistics(&self, p: Pair) -> PairStatistics {
        let (i, j) = p.times();
        let mut s = [0.0; 4];
        for (d, w) in self.weights.iter().enumerate() {
            let slot = match (assignment_outcome(d, i), assignment_outcome(d, j)) {
                (Outcome::Plus, Outcome::Plus) => 0,
                (Outcome::Plus, Outcome::Minus) => 1,
                (Outcome::Minus, Outcome::Plus) => 2,
                (Outcome::Minus, Outcome::Minus) => 3,
            };
            s[slot] += w;
        }
        PairStatistics {
            p_pp: s[0],
            p_pm: s[1],
            p_mp: s[2],
            p_mm: s[3],
        }
    }

    pub fn single_plus(&self, time: usize) -> f64 {
        self.weights
            .iter()
            .enumerate()
            .filter(|(d, _)| assignment_outcome(*d, time) == Outcome::Plus)
            .map(|(_, w)| w)
            .sum()
    }

    /// The record a noninvasive realist model with these weights produces.
    pub fn to_record(&self) -> Result<ExperimentRecord> {
        ExperimentRecord::new(
            Pair::ALL.map(|p| self.pair_statistics(p)),
            [0, 1, 2, 3].map(|t| self.single_plus(t)),
        )
    }

    /// Largest |difference| between the model's pair joints and the record's.
    pub fn max_joint_residual(&self, rec: &ExperimentRecord) -> f64 {
        Pair::ALL
            .iter()
            .flat_map(|&p| {
                let a = self.pair_statistics(p).as_array();
                let b = rec.pair(p).as_array();
                (0..4).map(move |k| (a[k] - b[k]).abs())
            })
            .fold(0.0, f64::max)
    }
}

/// Every joint cell of the four pairs: (pair, earlier, later).
///
/// Only 12 are independent given normalisation; banding all 16 keeps each
/// cell of a witness within the tolerance, not just the independent ones.
pub fn constraint_cells() -> Vec<(Pair, Outcome, Outcome)> {
    let mut cells = Vec::with_capacity(16);
    for p in Pair::ALL {
        for a in Outcome::BOTH {
            for b in Outcome::BOTH {
                cells.push((p, a, b));
            }
        }
    }
    cells
}

fn cell_indicator(cell: (Pair, Outcome, Outcome), d: usize) -> f64 {
    let (p, a, b) = cell;
    let (i, j) = p.times();
    if assignment_outcome(d, i) == a && assignment_outcome(d, j) == b {
        1.0
    } else {
        0.0
    }
}

fn cell_label(cell: (Pair, Outcome, Outcome)) -> String {
    let s = |o: Outcome| if o == Outcome::Plus { "+" } else { "-" };
    format!("p{}{}({})", s(cell.1), s(cell.2), cell.0.label())
}

/// Separating hyperplane: Σ c·p ≤ `deterministic_max` holds for every
/// noninvasive realist model, while the record attains `record_value`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InfeasibilityCertificate {
    /// (cell label, coefficient) over the 16 joint cells, max |c| = 1.
    pub coefficients: Vec<(String, f64)>,
    pub deterministic_max: f64,
    pub record_value: f64,
}

impl InfeasibilityCertificate {
    fn coefficient_vector(&self) -> Vec<f64> {
        self.coefficients.iter().map(|(_, c)| *c).collect()
    }

    pub fn evaluate(&self, rec: &ExperimentRecord) -> f64 {
        constraint_cells()
            .into_iter()
            .zip(self.coefficient_vector())
            .map(|((p, a, b), c)| c * rec.joint(p, a, b))
            .sum()
    }

    /// Maximum of the functional over the 16 deterministic assignments.
    pub fn max_over_models(&self) -> f64 {
        let c = self.coefficient_vector();
        (0..16)
            .map(|d| {
                constraint_cells()
                    .into_iter()
                    .zip(&c)
                    .map(|(cell, ck)| ck * cell_indicator(cell, d))
                    .sum::<f64>()
            })
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Re-derives both sides and confirms the record violates the inequality.
    pub fn verify(&self, rec: &ExperimentRecord) -> bool {
        self.evaluate(rec) > self.max_over_models()
    }

    pub fn violation(&self, rec: &ExperimentRecord) -> f64 {
        self.evaluate(rec) - self.max_over_models()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum NirmVerdict {
    Feasible {
        witness: JointDistribution16,
        max_residual: f64,
    },
    Infeasible {
        certificate: InfeasibilityCertificate,
    },
}

impl NirmVerdict {
    pub fn is_feasible(&self) -> bool {
        matches!(self, NirmVerdict::Feasible { .. })
    }
}

/// Rows: normalisation, then per cell an upper row a·w + s = b + tol and a
/// lower row a·w − s' = b − tol. Variables: 16 weights, then slack pairs.
fn banded_program(
    rec: &ExperimentRecord,
    cells: &[(Pair, Outcome, Outcome)],
    tol: f64,
) -> (Vec<Vec<f64>>, Vec<f64>) {
    let k = cells.len();
    let n_vars = 16 + 2 * k;
    let mut a = Vec::with_capacity(1 + 2 * k);
    let mut b = Vec::with_capacity(1 + 2 * k);
    let mut norm = vec![0.0; n_vars];
    norm[..16].fill(1.0);
    a.push(norm);
    b.push(1.0);
    for (c, &cell) in cells.iter().enumerate() {
        let target = rec.joint(cell.0, cell.1, cell.2);
        let mut upper = vec![0.0; n_vars];
        for (d, v) in upper[..16].iter_mut().enumerate() {
            *v = cell_indicator(cell, d);
        }
        let mut lower = upper.clone();
        upper[16 + 2 * c] = 1.0;
        lower[16 + 2 * c + 1] = -1.0;
        a.push(upper);
        b.push(target + tol);
        a.push(lower);
        b.push(target - tol);
    }
    (a, b)
}

/// Does some distribution over {±1}⁴ reproduce the record's four pair
/// joints, each within ±`tol`?
///
/// The record must satisfy no-signalling in time within `tol`; otherwise
/// [`Error::NsitPrecondition`] is returned rather than a verdict.
pub fn nirm_feasibility(rec: &ExperimentRecord, tol: f64) -> Result<NirmVerdict> {
    if !(tol >= 0.0 && tol.is_finite()) {
        return Err(Error::LinearProgram(format!("invalid tolerance {tol}")));
    }
    let nsit = nsit_check(rec, tol);
    if !nsit.ok {
        return Err(Error::NsitPrecondition {
            deviation: nsit.worst_deviation,
            location: nsit.worst_location.unwrap_or_default(),
        });
    }

    let cells = constraint_cells();
    let k = cells.len();
    // exact marginals first, so consistent records get a tight witness
    let (a, b) = banded_program(rec, &cells, 0.0);
    let mut sol = phase_one(&a, &b)?;
    if sol.infeasibility > FEASIBILITY_EPS && tol > 0.0 {
        let (a, b) = banded_program(rec, &cells, tol);
        sol = phase_one(&a, &b)?;
    }
    if sol.infeasibility <= FEASIBILITY_EPS {
        let mut w = [0.0; 16];
        for (wd, &x) in w.iter_mut().zip(&sol.x[..16]) {
            *wd = x.max(0.0);
        }
        let total: f64 = w.iter().sum();
        for wd in &mut w {
            *wd /= total;
        }
        let witness = JointDistribution16::new(w)?;
        let max_residual = witness.max_joint_residual(rec);
        return Ok(NirmVerdict::Feasible {
            witness,
            max_residual,
        });
    }

    // c_k = u_k + z_k over the cells; the normalisation multiplier sets the bound
    let y = &sol.duals;
    let mut coef: Vec<f64> = (0..k).map(|c| y[1 + 2 * c] + y[2 + 2 * c]).collect();
    let scale = coef.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale <= 0.0 {
        return Err(Error::LinearProgram(
            "degenerate infeasibility certificate".into(),
        ));
    }
    for v in &mut coef {
        *v /= scale;
    }
    let mut certificate = InfeasibilityCertificate {
        coefficients: cells.iter().map(|&c| cell_label(c)).zip(coef).collect(),
        deterministic_max: 0.0,
        record_value: 0.0,
    };
    certificate.deterministic_max = certificate.max_over_models();
    certificate.record_value = certificate.evaluate(rec);
    if !certificate.verify(rec) {
        return Err(Error::LinearProgram(format!(
            "certificate failed self-check (infeasibility {:.3e})",
            sol.infeasibility
        )));
    }
    Ok(NirmVerdict::Infeasible { certificate })
}
