//! Block observable scheme: Q = (Γz ± Π)/√(2j+1) with every 2×2 block
//! precessing independently.
//!
//! Basis vectors are paired as (1,2), (3,4), … (1-based). For odd N the last
//! basis vector is unpaired; Π has a single entry 1/√2 there.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::dynamics::{
    make_unsharp, sequential_pair_statistics, DichotomicObservable, Measurement, Outcome,
    PairStatistics, QuantumState, UnsharpEffectPair,
};
use crate::error::{Error, Result};
use crate::macrorealism::{ExperimentRecord, Pair};
use crate::numerics::{expm_i_pauli_x, ComplexMatrix, C64, I, ONE};

use super::zero_beam::{zero_beam_pair_statistics, zero_beam_single_plus};
use super::{AngleSchedule, OddMode, PiSign, SpinValue};

/// (Γx, Γy, Γz): block-diagonal Pauli matrices on N basis states.
///
/// Γy blocks are the ordinary σy = [[0, −i], [i, 0]]. For odd N the last
/// diagonal entry of Γz is +1 and Γx, Γy vanish on the last row and column.
pub fn gamma_matrices(n: usize) -> Result<(ComplexMatrix, ComplexMatrix, ComplexMatrix)> {
    if n < 2 {
        return Err(Error::InvalidDimension { dim: n, min: 2 });
    }
    let mut gx = ComplexMatrix::zeros(n);
    let mut gy = ComplexMatrix::zeros(n);
    let mut gz = ComplexMatrix::zeros(n);
    for b in 0..n / 2 {
        let (r, c) = (2 * b, 2 * b + 1);
        gx.set(r, c, ONE);
        gx.set(c, r, ONE);
        gy.set(r, c, -I);
        gy.set(c, r, I);
    }
    for k in 0..n {
        gz.set(k, k, C64::new(if k % 2 == 0 { 1.0 } else { -1.0 }, 0.0));
    }
    Ok((gx, gy, gz))
}

/// Π: zero for even N, a single 1/√2 at (N, N) for odd N.
pub fn pi_matrix(n: usize) -> Result<ComplexMatrix> {
    if n < 2 {
        return Err(Error::InvalidDimension { dim: n, min: 2 });
    }
    let mut pi = ComplexMatrix::zeros(n);
    if n % 2 == 1 {
        pi.set(n - 1, n - 1, C64::new(FRAC_1_SQRT_2, 0.0));
    }
    Ok(pi)
}

#[derive(Clone, Debug)]
pub struct GpObservable {
    pub sign: PiSign,
    /// (Γz + sign·Π)/√(2j+1)
    pub q_matrix: ComplexMatrix,
    /// The 2×2 diagonal blocks of `q_matrix`, each σz/√(2j+1).
    pub paired_blocks: Vec<ComplexMatrix>,
    /// Entry of `q_matrix` on the unpaired basis state (odd N only).
    pub unpaired: Option<f64>,
}

impl GpObservable {
    pub fn dichotomic(&self) -> DichotomicObservable {
        DichotomicObservable::from_hermitian(self.q_matrix.clone())
            .expect("block observable has no zero eigenvalue")
    }
}

pub fn gp_observable(spin: SpinValue, sign: PiSign) -> GpObservable {
    let n = spin.dim();
    let (_, _, gz) = gamma_matrices(n).expect("spin dimension is at least 2");
    let pi = pi_matrix(n).expect("spin dimension is at least 2");
    let q_matrix = (&gz + &pi.scale(sign.value())).scale(1.0 / (n as f64).sqrt());
    let paired_blocks = (0..n / 2).map(|b| q_matrix.block(2 * b, 2)).collect();
    let unpaired = (n % 2 == 1).then(|| q_matrix.get(n - 1, n - 1).re);
    GpObservable {
        sign,
        q_matrix,
        paired_blocks,
        unpaired,
    }
}

/// ⊕ exp(−i(α/2)σx) over the paired blocks, identity on the unpaired state.
///
/// The half angle makes U†QU = (cos α Γz + sin α Γy + Π)/√(2j+1) on the
/// paired blocks, so two-time block correlations are cos(α₂ − α₁).
pub fn block_unitary(spin: SpinValue, alpha: f64) -> ComplexMatrix {
    let n = spin.dim();
    let mut blocks = vec![expm_i_pauli_x(alpha / 2.0); n / 2];
    if n % 2 == 1 {
        blocks.push(ComplexMatrix::identity(1));
    }
    ComplexMatrix::direct_sum(&blocks)
}

/// Two-time correlation in closed form:
/// even N: cos α₁ cos α₂ + sin α₁ sin α₂;
/// odd N: (2j(cos α₁ cos α₂ + sin α₁ sin α₂) + sign/√2)/(2j+1).
pub fn gp_correlation_closed(spin: SpinValue, alpha1: f64, alpha2: f64, sign: PiSign) -> f64 {
    let c = alpha1.cos() * alpha2.cos() + alpha1.sin() * alpha2.sin();
    if spin.has_unpaired() {
        let two_j = spin.two_j() as f64;
        (two_j * c + sign.value() * FRAC_1_SQRT_2) / (two_j + 1.0)
    } else {
        c
    }
}

/// K = C₁₂ + C₂₃ + C₃₄ − C₁₄, with −Π used for C₁₄.
pub fn gp_lg_sum(spin: SpinValue, schedule: &AngleSchedule) -> f64 {
    let a = schedule.alphas();
    gp_correlation_closed(spin, a[0], a[1], PiSign::Plus)
        + gp_correlation_closed(spin, a[1], a[2], PiSign::Plus)
        + gp_correlation_closed(spin, a[2], a[3], PiSign::Plus)
        - gp_correlation_closed(spin, a[0], a[3], PiSign::Minus)
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda > 0.0 && lambda <= 1.0) {
        return Err(Error::InvalidSharpness(lambda));
    }
    Ok(())
}

enum BlockMeter {
    Sharp(DichotomicObservable),
    Unsharp(UnsharpEffectPair),
}

impl BlockMeter {
    fn new(q: ComplexMatrix, lambda: f64) -> Result<Self> {
        let obs = DichotomicObservable::from_hermitian(q)?;
        if lambda == 1.0 {
            Ok(BlockMeter::Sharp(obs))
        } else {
            Ok(BlockMeter::Unsharp(make_unsharp(&obs, lambda)?))
        }
    }

    fn measurement(&self) -> Measurement<'_> {
        match self {
            BlockMeter::Sharp(o) => Measurement::Sharp(o),
            BlockMeter::Unsharp(e) => Measurement::Unsharp(e),
        }
    }
}

/// Beam-by-beam simulation of the sequential measurement at α₁ then α₂.
///
/// The maximally mixed input splits into one beam per paired block (weight
/// 2/N each, state I/2 within the block) plus, for odd N, the unpaired beam
/// (weight 1/N) treated according to `mode`.
pub fn gp_beam_pair_statistics(
    spin: SpinValue,
    alpha1: f64,
    alpha2: f64,
    lambda: f64,
    sign: PiSign,
    mode: OddMode,
) -> Result<PairStatistics> {
    check_lambda(lambda)?;
    let n = spin.dim();
    let weight = 1.0 / n as f64;
    let obs = gp_observable(spin, sign);
    let u1 = block_unitary(spin, alpha1);
    let u2 = block_unitary(spin, alpha2);
    let u_between = &u2 * &u1.adjoint();

    let mut parts = Vec::with_capacity(n / 2 + 1);
    let beam = QuantumState::maximally_mixed(2)?;
    for (b, q_block) in obs.paired_blocks.iter().enumerate() {
        let meter = BlockMeter::new(q_block.clone(), lambda)?;
        let m = meter.measurement();
        let stats = sequential_pair_statistics(
            &beam,
            m,
            &u_between.block(2 * b, 2),
            m,
            &u1.block(2 * b, 2),
        )?;
        parts.push((2.0 * weight, stats));
    }

    if let Some(q_last) = obs.unpaired {
        let stats = match mode.rate() {
            Some(rate) => zero_beam_pair_statistics(
                SpinValue::ONE,
                rate * alpha1,
                rate * (alpha2 - alpha1),
                lambda,
            )?,
            None => {
                let meter = BlockMeter::new(ComplexMatrix::from_real_diagonal(&[q_last]), lambda)?;
                let m = meter.measurement();
                sequential_pair_statistics(
                    &QuantumState::basis(1, 0),
                    m,
                    &u_between.block(n - 1, 1),
                    m,
                    &u1.block(n - 1, 1),
                )?
            }
        };
        parts.push((weight, stats));
    }
    PairStatistics::mixture(&parts)
}

/// Simulated correlation with the calibrated zero-beam treatment and +Π.
pub fn gp_beam_simulated_correlation(
    spin: SpinValue,
    alpha1: f64,
    alpha2: f64,
    lambda: f64,
) -> Result<f64> {
    gp_beam_simulated_correlation_with_mode(
        spin,
        alpha1,
        alpha2,
        lambda,
        PiSign::Plus,
        OddMode::Rabi,
    )
}

pub fn gp_beam_simulated_correlation_with_mode(
    spin: SpinValue,
    alpha1: f64,
    alpha2: f64,
    lambda: f64,
    sign: PiSign,
    mode: OddMode,
) -> Result<f64> {
    Ok(gp_beam_pair_statistics(spin, alpha1, alpha2, lambda, sign, mode)?.correlation())
}

/// p⁺ at block angle α with no earlier measurement.
pub fn gp_single_plus(
    spin: SpinValue,
    alpha: f64,
    lambda: f64,
    sign: PiSign,
    mode: OddMode,
) -> Result<f64> {
    check_lambda(lambda)?;
    let n = spin.dim();
    let weight = 1.0 / n as f64;
    let obs = gp_observable(spin, sign);
    let u = block_unitary(spin, alpha);
    let beam = QuantumState::maximally_mixed(2)?;
    let mut p = 0.0;
    for (b, q_block) in obs.paired_blocks.iter().enumerate() {
        let meter = BlockMeter::new(q_block.clone(), lambda)?;
        let evolved = beam.evolve(&u.block(2 * b, 2))?;
        p += 2.0 * weight * evolved.expectation(meter.measurement().effect(Outcome::Plus));
    }
    if let Some(q_last) = obs.unpaired {
        p += weight
            * match mode.rate() {
                Some(rate) => zero_beam_single_plus(SpinValue::ONE, rate * alpha, lambda)?,
                None => {
                    let meter =
                        BlockMeter::new(ComplexMatrix::from_real_diagonal(&[q_last]), lambda)?;
                    meter.measurement().effect(Outcome::Plus).get(0, 0).re
                }
            };
    }
    Ok(p)
}

/// K from simulated pair statistics: +Π for C₁₂, C₂₃, C₃₄ and −Π for C₁₄.
pub fn gp_lg_sum_simulated(
    spin: SpinValue,
    schedule: &AngleSchedule,
    lambda: f64,
    mode: OddMode,
) -> Result<f64> {
    let rec = gp_record(spin, schedule, lambda, mode)?;
    Ok(
        rec.correlation(Pair::P12) + rec.correlation(Pair::P23) + rec.correlation(Pair::P34)
            - rec.correlation(Pair::P14),
    )
}

/// Four-time record of the block scheme.
pub fn gp_record(
    spin: SpinValue,
    schedule: &AngleSchedule,
    lambda: f64,
    mode: OddMode,
) -> Result<ExperimentRecord> {
    let a = schedule.alphas();
    let pairs = Pair::ALL.map(|p| {
        let (i, j) = p.times();
        let sign = if p == Pair::P14 {
            PiSign::Minus
        } else {
            PiSign::Plus
        };
        gp_beam_pair_statistics(spin, a[i], a[j], lambda, sign, mode)
    });
    let [p12, p23, p34, p14] = pairs;
    let pairs = [p12?, p23?, p34?, p14?];
    let mut singles = [0.0; 4];
    for (t, s) in singles.iter_mut().enumerate() {
        *s = gp_single_plus(spin, a[t], lambda, PiSign::Plus, mode)?;
    }
    ExperimentRecord::new(pairs, singles)
}
