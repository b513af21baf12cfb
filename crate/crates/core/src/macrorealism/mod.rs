//! Macrorealism tests on four-time records: Leggett–Garg sums, LG-CH
//! expressions, no-signalling in time, and the joint-distribution oracle.

use serde::Serialize;

use crate::error::{Error, Result};

pub mod corpus;
pub mod inequalities;
pub mod nirm;
pub mod nsit;
pub mod record;
pub mod simplex;

pub use inequalities::{lg_sum, lg_sums, lgch_value, lgch_values, Relabeling, VARIANTS};
pub use nirm::{
    assignment_label, nirm_feasibility, InfeasibilityCertificate, JointDistribution16, NirmVerdict,
};
pub use nsit::{nsit_check, NsitReport};
pub use record::{record_from_correlations, ExperimentRecord, Pair, RecordError};

/// Default tolerance for the NSIT check and the ±tol bands of the oracle.
pub const DEFAULT_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VariantValue {
    pub variant: String,
    pub value: f64,
}

fn labelled(values: [f64; VARIANTS]) -> Vec<VariantValue> {
    Relabeling::all()
        .map(|r| VariantValue {
            variant: r.label(),
            value: values[r.index()],
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WitnessEntry {
    pub assignment: String,
    pub weight: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NirmReport {
    pub feasible: bool,
    /// Set when NSIT fails and the oracle was not run.
    pub precondition_failure: Option<String>,
    pub witness: Option<Vec<WitnessEntry>>,
    pub witness_max_residual: Option<f64>,
    pub certificate: Option<InfeasibilityCertificate>,
}

/// Full certification of one record.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MacrorealismVerdict {
    pub lg_values: Vec<VariantValue>,
    pub lg_max: f64,
    pub lgch_values: Vec<VariantValue>,
    /// The canonical LG-CH expression (relabeling "++++").
    pub lgch_principal: f64,
    pub nsit: NsitReport,
    pub nirm: NirmReport,
}

pub fn certify(rec: &ExperimentRecord, tol: f64) -> Result<MacrorealismVerdict> {
    let lg = lg_sums(rec);
    let ch = lgch_values(rec);
    let nsit = nsit_check(rec, tol);
    let nirm = match nirm_feasibility(rec, tol) {
        Ok(NirmVerdict::Feasible {
            witness,
            max_residual,
        }) => NirmReport {
            feasible: true,
            precondition_failure: None,
            witness: Some(
                witness
                    .weights()
                    .iter()
                    .enumerate()
                    .map(|(d, &w)| WitnessEntry {
                        assignment: assignment_label(d),
                        weight: w,
                    })
                    .collect(),
            ),
            witness_max_residual: Some(max_residual),
            certificate: None,
        },
        Ok(NirmVerdict::Infeasible { certificate }) => NirmReport {
            feasible: false,
            precondition_failure: None,
            witness: None,
            witness_max_residual: None,
            certificate: Some(certificate),
        },
        Err(e @ Error::NsitPrecondition { .. }) => NirmReport {
            feasible: false,
            precondition_failure: Some(e.to_string()),
            witness: None,
            witness_max_residual: None,
            certificate: None,
        },
        Err(e) => return Err(e),
    };
    Ok(MacrorealismVerdict {
        lg_max: lg.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
        lg_values: labelled(lg),
        lgch_principal: ch[0],
        lgch_values: labelled(ch),
        nsit,
        nirm,
    })
}

/// The three predicates of the equivalence, evaluated on one record.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EquivalenceReport {
    pub nsit: bool,
    /// Every LG variant ≤ 2 and NSIT holds.
    pub lg_and_nsit: bool,
    /// Only the canonical LG sum ≤ 2, and NSIT holds.
    pub canonical_lg_and_nsit: bool,
    /// Every LG-CH variant lies in [−1, 0].
    pub lgch: bool,
    /// The joint-distribution oracle finds a witness. False when NSIT fails.
    pub nirm: bool,
    /// The record sits within the tolerance band of the LG boundary, where
    /// banded feasibility may legitimately differ from the strict inequalities.
    pub on_boundary: bool,
    /// All-variants reading: the three predicates coincide (or the record is
    /// on the boundary).
    pub agree: bool,
    /// Canonical-only reading of the LG predicate.
    pub canonical_agree: bool,
    /// Feasible witness residual or infeasibility certificate passed its check.
    pub oracle_checked: bool,
}

/// Width of the boundary band, in units of `tol`. The banded oracle moves
/// each of the 12 cells by at most `tol`, which shifts any LG sum by at most
/// 4·3·tol = 12·tol.
const BOUNDARY_BAND: f64 = 16.0;

pub fn equivalence_audit(rec: &ExperimentRecord, tol: f64) -> Result<EquivalenceReport> {
    let lg = lg_sums(rec);
    let ch = lgch_values(rec);
    let nsit = nsit_check(rec, tol);

    let lg_max = lg.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lg_and_nsit = nsit.ok && lg_max <= 2.0 + tol;
    let canonical_lg_and_nsit = nsit.ok && lg[0] <= 2.0 + tol;
    let lgch = ch.iter().all(|&v| (-1.0 - tol..=tol).contains(&v));

    let (nirm, oracle_checked) = match nirm_feasibility(rec, tol) {
        Ok(NirmVerdict::Feasible { max_residual, .. }) => (true, max_residual <= tol + 1e-12),
        Ok(NirmVerdict::Infeasible { certificate }) => (false, certificate.verify(rec)),
        Err(Error::NsitPrecondition { .. }) => (false, true),
        Err(e) => return Err(e),
    };

    let on_boundary = nsit.ok && (lg_max - 2.0).abs() <= BOUNDARY_BAND * tol.max(1e-12);
    let agree = on_boundary || (lg_and_nsit == lgch && lgch == nirm);
    let canonical_agree = on_boundary || (canonical_lg_and_nsit == nirm);
    Ok(EquivalenceReport {
        nsit: nsit.ok,
        lg_and_nsit,
        canonical_lg_and_nsit,
        lgch,
        nirm,
        on_boundary,
        agree,
        canonical_agree,
        oracle_checked,
    })
}

/// Totals over a corpus of audited records.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct AuditSummary {
    pub records: usize,
    pub agree: usize,
    pub canonical_agree: usize,
    pub feasible: usize,
    pub infeasible: usize,
    pub nsit_failures: usize,
    pub boundary: usize,
    pub oracle_checked: usize,
}

impl AuditSummary {
    pub fn add(&mut self, r: &EquivalenceReport) {
        self.records += 1;
        self.agree += r.agree as usize;
        self.canonical_agree += r.canonical_agree as usize;
        if !r.nsit {
            self.nsit_failures += 1;
        } else if r.nirm {
            self.feasible += 1;
        } else {
            self.infeasible += 1;
        }
        self.boundary += r.on_boundary as usize;
        self.oracle_checked += r.oracle_checked as usize;
    }

    pub fn all_agree(&self) -> bool {
        self.agree == self.records && self.oracle_checked == self.records
    }
}
