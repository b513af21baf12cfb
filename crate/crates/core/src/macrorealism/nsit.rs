//! No-signalling in time: every single-time marginal that can be read off the
//! record must agree.

use serde::Serialize;

use super::record::{ExperimentRecord, Pair};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NsitReport {
    pub ok: bool,
    pub tol: f64,
    pub worst_deviation: f64,
    /// Human-readable description of the worst disagreement, if any.
    pub worst_location: Option<String>,
}

/// Every estimate of p⁺(Q_t) available in the record, with its source.
pub fn marginal_estimates(rec: &ExperimentRecord, time: usize) -> Vec<(String, f64)> {
    let mut out = vec![(format!("singles.{}", time + 1), rec.single(time))];
    for p in Pair::ALL {
        let (i, j) = p.times();
        if i == time {
            out.push((
                format!("pairs.{} (earlier)", p.label()),
                rec.pair(p).first_plus(),
            ));
        }
        if j == time {
            out.push((
                format!("pairs.{} (later)", p.label()),
                rec.pair(p).second_plus(),
            ));
        }
    }
    out
}

pub fn nsit_check(rec: &ExperimentRecord, tol: f64) -> NsitReport {
    let mut worst = 0.0;
    let mut location = None;
    for t in 0..4 {
        let est = marginal_estimates(rec, t);
        for a in 0..est.len() {
            for b in a + 1..est.len() {
                let d = (est[a].1 - est[b].1).abs();
                if d > worst {
                    worst = d;
                    location = Some(format!("p+(Q{}): {} vs {}", t + 1, est[a].0, est[b].0));
                }
            }
        }
    }
    NsitReport {
        ok: worst <= tol,
        tol,
        worst_deviation: worst,
        worst_location: location,
    }
}
