//! Four-term Leggett–Garg sums and LG-CH expressions, with their variants
//! generated by outcome relabelings Q_i → −Q_i.

use crate::dynamics::Outcome;

use super::record::{ExperimentRecord, Pair};

/// Number of distinct relabeling variants (Q₁ is never flipped).
pub const VARIANTS: usize = 8;

/// Outcome relabeling: which of Q₂, Q₃, Q₄ are flipped. Index 0 flips none.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Relabeling(u8);

impl Relabeling {
    pub fn all() -> impl Iterator<Item = Relabeling> {
        (0..VARIANTS as u8).map(Relabeling)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// ±1 applied to Q_i (zero-based time).
    pub fn sign(self, time: usize) -> f64 {
        if time == 0 || (self.0 >> (time - 1)) & 1 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    fn outcome(self, time: usize) -> Outcome {
        if self.sign(time) > 0.0 {
            Outcome::Plus
        } else {
            Outcome::Minus
        }
    }

    /// e.g. `"+-+-"`
    pub fn label(self) -> String {
        (0..4)
            .map(|t| if self.sign(t) > 0.0 { '+' } else { '-' })
            .collect()
    }
}

fn p_single(rec: &ExperimentRecord, time: usize, o: Outcome) -> f64 {
    match o {
        Outcome::Plus => rec.single(time),
        Outcome::Minus => 1.0 - rec.single(time),
    }
}

/// s₁s₂C₁₂ + s₂s₃C₂₃ + s₃s₄C₃₄ − s₁s₄C₁₄ for one relabeling.
pub fn lg_sum(rec: &ExperimentRecord, r: Relabeling) -> f64 {
    let c = |p: Pair| {
        let (i, j) = p.times();
        r.sign(i) * r.sign(j) * rec.correlation(p)
    };
    c(Pair::P12) + c(Pair::P23) + c(Pair::P34) - c(Pair::P14)
}

/// All eight variants; macrorealism requires each ≤ 2.
pub fn lg_sums(rec: &ExperimentRecord) -> [f64; VARIANTS] {
    let mut out = [0.0; VARIANTS];
    for r in Relabeling::all() {
        out[r.index()] = lg_sum(rec, r);
    }
    out
}

/// p^{++}(Q₁Q₂) + p^{++}(Q₃Q₂) − p^{++}(Q₁Q₄) + p^{++}(Q₃Q₄) − p⁺(Q₃) − p⁺(Q₂)
/// with "+" at each time replaced by the relabeled outcome.
pub fn lgch_value(rec: &ExperimentRecord, r: Relabeling) -> f64 {
    let joint = |p: Pair| {
        let (i, j) = p.times();
        rec.joint(p, r.outcome(i), r.outcome(j))
    };
    joint(Pair::P12) + joint(Pair::P23) - joint(Pair::P14) + joint(Pair::P34)
        - p_single(rec, 2, r.outcome(2))
        - p_single(rec, 1, r.outcome(1))
}

/// All eight variants; macrorealism requires each in [−1, 0].
pub fn lgch_values(rec: &ExperimentRecord) -> [f64; VARIANTS] {
    let mut out = [0.0; VARIANTS];
    for r in Relabeling::all() {
        out[r.index()] = lgch_value(rec, r);
    }
    out
}
