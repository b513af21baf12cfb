//! Seeded record generators for audits.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dynamics::PairStatistics;
use crate::error::Result;
use crate::spin_lg::{gp_record, kb_record, AngleSchedule, OddMode, SpinValue};

use super::nirm::JointDistribution16;
use super::record::{ExperimentRecord, Pair};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Record with consistent marginals: random ⟨Q_i⟩ = m_i and, per pair, a
/// correlation drawn uniformly from the range that keeps all four joints
/// non-negative.
pub fn random_nsit_record(rng: &mut impl Rng) -> Result<ExperimentRecord> {
    let m: [f64; 4] = std::array::from_fn(|_| rng.random_range(-1.0..=1.0));
    let pairs = Pair::ALL.map(|p| {
        let (i, j) = p.times();
        let (a, b) = (m[i], m[j]);
        let lo = (a + b).abs() - 1.0;
        let hi = 1.0 - (a - b).abs();
        let c = if hi > lo {
            rng.random_range(lo..=hi)
        } else {
            lo
        };
        let pp = (1.0 + a + b + c) / 4.0;
        let pm = (1.0 + a - b - c) / 4.0;
        let mp = (1.0 - a + b - c) / 4.0;
        let mm = (1.0 - a - b + c) / 4.0;
        PairStatistics::new(pp.max(0.0), pm.max(0.0), mp.max(0.0), mm.max(0.0))
    });
    let [p12, p23, p34, p14] = pairs;
    ExperimentRecord::new([p12?, p23?, p34?, p14?], m.map(|x| (1.0 + x) / 2.0))
}

/// Record produced by a random distribution over {±1}⁴, sometimes sparse.
pub fn random_classical_record(
    rng: &mut impl Rng,
) -> Result<(JointDistribution16, ExperimentRecord)> {
    let support: usize = rng.random_range(1..=16);
    let mut w = [0.0; 16];
    for _ in 0..support {
        w[rng.random_range(0..16)] += rng.random::<f64>() + 1e-3;
    }
    let total: f64 = w.iter().sum();
    for x in &mut w {
        *x /= total;
    }
    let jd = JointDistribution16::new(w)?;
    let rec = jd.to_record()?;
    Ok((jd, rec))
}

/// Quantum record from either scheme, with random spin, angles and sharpness.
///
/// Block-scheme records use even dimension only: for odd dimension the
/// unpaired sector starts in a pure state and the record signals in time.
pub fn random_quantum_record(rng: &mut impl Rng) -> Result<ExperimentRecord> {
    let lambda = rng.random_range(0.3..=1.0);
    if rng.random_bool(0.5) {
        let two_j = 2 * rng.random_range(0..4u32) + 1;
        let spin = SpinValue::new(two_j)?;
        let start = rng.random_range(-PI..PI);
        let alphas = if rng.random_bool(0.5) {
            let step = rng.random_range(0.0..PI);
            [start, start + step, start + 2.0 * step, start + 3.0 * step]
        } else {
            std::array::from_fn(|_| rng.random_range(-PI..PI))
        };
        gp_record(spin, &AngleSchedule::new(alphas)?, lambda, OddMode::Rabi)
    } else {
        let spin = SpinValue::new(rng.random_range(1..=8))?;
        kb_record(spin, rng.random_range(0.0..PI), lambda)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::macrorealism::nsit_check;

    #[test]
    fn generators_are_reproducible_and_consistent() {
        let mut a = rng(7);
        let mut b = rng(7);
        for _ in 0..20 {
            let ra = random_nsit_record(&mut a).unwrap();
            assert_eq!(ra, random_nsit_record(&mut b).unwrap());
            assert!(nsit_check(&ra, 1e-12).ok);
        }
        for _ in 0..20 {
            let (_, rec) = random_classical_record(&mut a).unwrap();
            assert!(nsit_check(&rec, 1e-12).ok);
        }
    }

    #[test]
    fn quantum_records_satisfy_nsit() {
        let mut r = rng(11);
        for _ in 0..10 {
            let rec = random_quantum_record(&mut r).unwrap();
            let rep = nsit_check(&rec, 1e-10);
            assert!(rep.ok, "{rep:?}");
        }
    }
}
