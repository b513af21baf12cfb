//! Four-time experiment records and their JSON form.
//!
//! ```json
//! {"pairs": {"12": {"pp": 0.5, "pm": 0.0, "mp": 0.0, "mm": 0.5}, "23": {..}, "34": {..}, "14": {..}},
//!  "singles": {"1": 0.5, "2": 0.5, "3": 0.5, "4": 0.5}}
//! ```

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dynamics::{Outcome, PairStatistics};
use crate::error::{Error, Result};
use crate::numerics::tol;

/// The four measured time pairs of the Leggett–Garg protocol.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pair {
    P12,
    P23,
    P34,
    P14,
}

impl Pair {
    pub const ALL: [Pair; 4] = [Pair::P12, Pair::P23, Pair::P34, Pair::P14];

    /// Zero-based (earlier, later) time indices.
    pub fn times(self) -> (usize, usize) {
        match self {
            Pair::P12 => (0, 1),
            Pair::P23 => (1, 2),
            Pair::P34 => (2, 3),
            Pair::P14 => (0, 3),
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn label(self) -> &'static str {
        match self {
            Pair::P12 => "12",
            Pair::P23 => "23",
            Pair::P34 => "34",
            Pair::P14 => "14",
        }
    }
}

/// Pairwise joint distributions and single-time marginals p⁺(Q_i).
///
/// Consistency between the different ways of reading a marginal is not
/// enforced here; that is what the no-signalling-in-time check measures.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExperimentRecord {
    pairs: [PairStatistics; 4],
    singles: [f64; 4],
}

impl ExperimentRecord {
    /// `pairs` are ordered as [`Pair::ALL`].
    pub fn new(pairs: [PairStatistics; 4], singles: [f64; 4]) -> Result<Self> {
        for (p, stats) in Pair::ALL.iter().zip(&pairs) {
            stats.validate().map_err(|e| {
                Error::InvalidProbabilities(format!("pairs.{}: {}", p.label(), strip(&e)))
            })?;
        }
        for (i, &s) in singles.iter().enumerate() {
            if !s.is_finite() || !(-tol::ALGEBRAIC..=1.0 + tol::ALGEBRAIC).contains(&s) {
                return Err(Error::InvalidProbabilities(format!(
                    "singles.{}: {s} is outside [0, 1]",
                    i + 1
                )));
            }
        }
        Ok(Self { pairs, singles })
    }

    pub fn pair(&self, p: Pair) -> &PairStatistics {
        &self.pairs[p.index()]
    }

    pub fn pairs(&self) -> &[PairStatistics; 4] {
        &self.pairs
    }

    /// p⁺(Q_i) for zero-based time `i`.
    pub fn single(&self, i: usize) -> f64 {
        self.singles[i]
    }

    pub fn singles(&self) -> [f64; 4] {
        self.singles
    }

    pub fn correlation(&self, p: Pair) -> f64 {
        self.pair(p).correlation()
    }

    pub fn correlations(&self) -> [f64; 4] {
        Pair::ALL.map(|p| self.correlation(p))
    }

    /// Joint probability for outcome signs at the pair's earlier and later time.
    pub fn joint(&self, p: Pair, first: Outcome, second: Outcome) -> f64 {
        self.pair(p).get(first, second)
    }

    pub fn from_json_str(s: &str) -> std::result::Result<Self, RecordError> {
        let wire: RecordJson = serde_json::from_str(s).map_err(RecordError::Parse)?;
        wire.into_record()
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(RecordJson::from(self)).expect("record serialises")
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&RecordJson::from(self)).expect("record serialises")
    }
}

fn strip(e: &Error) -> String {
    match e {
        Error::InvalidProbabilities(m) => m.clone(),
        other => other.to_string(),
    }
}

/// p^{ab} = (1 + ab·C)/4 with all single-time marginals 1/2.
pub fn record_from_correlations(
    c12: f64,
    c23: f64,
    c34: f64,
    c14: f64,
) -> Result<ExperimentRecord> {
    let make = |c: f64| -> Result<PairStatistics> {
        if !c.is_finite() || c.abs() > 1.0 {
            return Err(Error::CorrelationOutOfRange(c));
        }
        PairStatistics::new(
            (1.0 + c) / 4.0,
            (1.0 - c) / 4.0,
            (1.0 - c) / 4.0,
            (1.0 + c) / 4.0,
        )
    };
    ExperimentRecord::new([make(c12)?, make(c23)?, make(c34)?, make(c14)?], [0.5; 4])
}

#[derive(Debug, Error)]
pub enum RecordError {
    #[error("malformed record JSON: {0}")]
    Parse(#[source] serde_json::Error),
    #[error("invalid record: {0}")]
    Invalid(String),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JointJson {
    pp: f64,
    pm: f64,
    mp: f64,
    mm: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PairsJson {
    #[serde(rename = "12")]
    p12: JointJson,
    #[serde(rename = "23")]
    p23: JointJson,
    #[serde(rename = "34")]
    p34: JointJson,
    #[serde(rename = "14")]
    p14: JointJson,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SinglesJson {
    #[serde(rename = "1")]
    s1: f64,
    #[serde(rename = "2")]
    s2: f64,
    #[serde(rename = "3")]
    s3: f64,
    #[serde(rename = "4")]
    s4: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RecordJson {
    pairs: PairsJson,
    singles: SinglesJson,
}

impl RecordJson {
    fn into_record(self) -> std::result::Result<ExperimentRecord, RecordError> {
        let conv = |label: &str, j: JointJson| {
            PairStatistics::new(j.pp, j.pm, j.mp, j.mm)
                .map_err(|e| RecordError::Invalid(format!("pairs.{label}: {}", strip(&e))))
        };
        let p = self.pairs;
        let pairs = [
            conv("12", p.p12)?,
            conv("23", p.p23)?,
            conv("34", p.p34)?,
            conv("14", p.p14)?,
        ];
        let s = self.singles;
        ExperimentRecord::new(pairs, [s.s1, s.s2, s.s3, s.s4])
            .map_err(|e| RecordError::Invalid(strip(&e)))
    }
}

impl From<&ExperimentRecord> for RecordJson {
    fn from(r: &ExperimentRecord) -> Self {
        let j = |s: &PairStatistics| JointJson {
            pp: s.p_pp,
            pm: s.p_pm,
            mp: s.p_mp,
            mm: s.p_mm,
        };
        RecordJson {
            pairs: PairsJson {
                p12: j(r.pair(Pair::P12)),
                p23: j(r.pair(Pair::P23)),
                p34: j(r.pair(Pair::P34)),
                p14: j(r.pair(Pair::P14)),
            },
            singles: SinglesJson {
                s1: r.singles[0],
                s2: r.singles[1],
                s3: r.singles[2],
                s4: r.singles[3],
            },
        }
    }
}
