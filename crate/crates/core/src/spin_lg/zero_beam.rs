//! The m = 0 beam of an integral spin: Rabi precession under e^{−iθJy} and
//! the two-outcome measurement P₊ = I − P₀, P₋ = P₀.
//!
//! For j = 1 the beam behaves exactly like a qubit and its two-time
//! correlation is cos 2θ₂ for any θ₁. For j ≥ 2 the same procedure is still
//! well defined but the correlation depends on θ₁ as well.

use crate::dynamics::{
    make_unsharp, sequential_pair_statistics, DichotomicObservable, Measurement, PairStatistics,
    QuantumState, UnsharpEffectPair,
};
use crate::error::{Error, Result};
use crate::numerics::{expm_i_hermitian, ComplexMatrix, C64};

use super::{spin_operators, SpinValue};

fn zero_index(spin: SpinValue) -> Result<usize> {
    if !spin.has_unpaired() {
        return Err(Error::NoZeroBeam {
            two_j: spin.two_j(),
        });
    }
    Ok(spin.two_j() as usize / 2)
}

/// P₊ = I − |0⟩⟨0|, P₋ = |0⟩⟨0| on the full 2j+1 space.
pub fn zero_beam_observable(spin: SpinValue) -> Result<DichotomicObservable> {
    let z = zero_index(spin)?;
    let diag: Vec<f64> = (0..spin.dim())
        .map(|k| if k == z { 0.0 } else { 1.0 })
        .collect();
    DichotomicObservable::from_plus_projector(ComplexMatrix::from_real_diagonal(&diag))
}

enum Meter {
    Sharp(DichotomicObservable),
    Unsharp(UnsharpEffectPair),
}

impl Meter {
    fn build(spin: SpinValue, lambda: f64) -> Result<Self> {
        let obs = zero_beam_observable(spin)?;
        if lambda == 1.0 {
            Ok(Meter::Sharp(obs))
        } else {
            Ok(Meter::Unsharp(make_unsharp(&obs, lambda)?))
        }
    }

    fn as_measurement(&self) -> Measurement<'_> {
        match self {
            Meter::Sharp(o) => Measurement::Sharp(o),
            Meter::Unsharp(e) => Measurement::Unsharp(e),
        }
    }
}

fn initial_state(spin: SpinValue) -> Result<QuantumState> {
    let z = zero_index(spin)?;
    Ok(QuantumState::basis(spin.dim(), z))
}

/// Two-time statistics of the m = 0 beam: precess by θ₁, measure, precess
/// by θ₂, measure again, with sharpness λ at both measurements.
pub fn zero_beam_pair_statistics(
    spin: SpinValue,
    theta1: f64,
    theta2: f64,
    lambda: f64,
) -> Result<PairStatistics> {
    if !(lambda > 0.0 && lambda <= 1.0) {
        return Err(Error::InvalidSharpness(lambda));
    }
    let meter = Meter::build(spin, lambda)?;
    let (_, jy, _) = spin_operators(spin);
    let u1 = expm_i_hermitian(&jy, theta1)?;
    let u2 = expm_i_hermitian(&jy, theta2)?;
    let m = meter.as_measurement();
    sequential_pair_statistics(&initial_state(spin)?, m, &u2, m, &u1)
}

/// Sharp spin-1 zero-beam statistics.
pub fn zero_beam_statistics(theta1: f64, theta2: f64) -> PairStatistics {
    zero_beam_pair_statistics(SpinValue::ONE, theta1, theta2, 1.0)
        .expect("spin-1 zero beam is always well formed")
}

/// p⁺ after precessing by θ with no earlier measurement.
pub fn zero_beam_single_plus(spin: SpinValue, theta: f64, lambda: f64) -> Result<f64> {
    if !(lambda > 0.0 && lambda <= 1.0) {
        return Err(Error::InvalidSharpness(lambda));
    }
    let meter = Meter::build(spin, lambda)?;
    let (_, jy, _) = spin_operators(spin);
    let state = initial_state(spin)?.evolve(&expm_i_hermitian(&jy, theta)?)?;
    Ok(state.expectation(
        meter
            .as_measurement()
            .effect(crate::dynamics::Outcome::Plus),
    ))
}

/// e^{−iθJy}|0⟩ for spin 1, as amplitudes on (|1⟩, |0⟩, |−1⟩).
pub fn spin_one_rotated_zero(theta: f64) -> Result<Vec<C64>> {
    let (_, jy, _) = spin_operators(SpinValue::ONE);
    let u = expm_i_hermitian(&jy, theta)?;
    Ok(u.mat_vec(&[C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 0.0)]))
}
