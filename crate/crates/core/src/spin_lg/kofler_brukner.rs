//! Parity scheme: maximally mixed spin j precessing under e^{−iωtJx}, parity
//! measured at each time.

use crate::dynamics::{
    make_unsharp, sequential_pair_statistics, Measurement, Outcome, PairStatistics, QuantumState,
    UnsharpEffectPair,
};
use crate::error::{Error, Result};
use crate::macrorealism::{ExperimentRecord, Pair};
use crate::numerics::{expm_i_hermitian, ComplexMatrix};
use crate::optimize::{maximize_scan_golden, Maximum};

use super::{parity_observable, spin_operators, SpinValue};

/// Below this distance from a zero of the denominator a limit is used.
const SINGULAR_EPS: f64 = 1e-7;

/// C = sin x / ((2j+1) sin(x/(2j+1))), x = (2j+1)ωΔt.
pub fn kb_correlation_closed(spin: SpinValue, x: f64) -> f64 {
    let n = spin.dim() as f64;
    let y = x / n;
    let k = (y / std::f64::consts::PI).round();
    let d = y - k * std::f64::consts::PI;
    if d.abs() < SINGULAR_EPS {
        if k == 0.0 {
            return 1.0 - x * x * (1.0 - 1.0 / (n * n)) / 6.0;
        }
        // l'Hôpital at y = kπ
        return x.cos() / y.cos();
    }
    x.sin() / (n * y.sin())
}

/// Large-j Leggett–Garg sum K(x) = 3 sin x / x − sin 3x / (3x).
pub fn kb_k(x: f64) -> f64 {
    if x.abs() < SINGULAR_EPS {
        return 2.0 + x * x;
    }
    3.0 * x.sin() / x - (3.0 * x).sin() / (3.0 * x)
}

/// Finite-j sum 3C(Δ) − C(3Δ) at equidistant times, x = (2j+1)ωΔt.
pub fn kb_finite_k(spin: SpinValue, x: f64) -> f64 {
    3.0 * kb_correlation_closed(spin, x) - kb_correlation_closed(spin, 3.0 * x)
}

/// Location and value of the maximum of [`kb_k`] on (0, π).
pub fn kb_maximum() -> Maximum {
    maximize_scan_golden(kb_k, 0.0, std::f64::consts::PI, 10_000, 1e-10)
}

fn parity_meter(spin: SpinValue, lambda: f64) -> Result<ParityMeter> {
    if !(lambda > 0.0 && lambda <= 1.0) {
        return Err(Error::InvalidSharpness(lambda));
    }
    let obs = parity_observable(spin);
    Ok(if lambda == 1.0 {
        ParityMeter::Sharp(obs)
    } else {
        ParityMeter::Unsharp(make_unsharp(&obs, lambda)?)
    })
}

enum ParityMeter {
    Sharp(crate::dynamics::DichotomicObservable),
    Unsharp(UnsharpEffectPair),
}

impl ParityMeter {
    fn measurement(&self) -> Measurement<'_> {
        match self {
            ParityMeter::Sharp(o) => Measurement::Sharp(o),
            ParityMeter::Unsharp(e) => Measurement::Unsharp(e),
        }
    }
}

fn precession(spin: SpinValue, angle: f64) -> Result<ComplexMatrix> {
    let (jx, _, _) = spin_operators(spin);
    expm_i_hermitian(&jx, angle)
}

/// Parity measured at ωt₁ and ωt₂ on the maximally mixed state.
pub fn kb_pair_statistics(
    spin: SpinValue,
    omega_t1: f64,
    omega_t2: f64,
    lambda: f64,
) -> Result<PairStatistics> {
    let meter = parity_meter(spin, lambda)?;
    let m = meter.measurement();
    let state = QuantumState::maximally_mixed(spin.dim())?;
    let u_before = precession(spin, omega_t1)?;
    let u_between = precession(spin, omega_t2 - omega_t1)?;
    sequential_pair_statistics(&state, m, &u_between, m, &u_before)
}

/// Sequentially simulated two-time parity correlation at separation ωΔt.
pub fn kb_simulated_correlation(spin: SpinValue, omega_dt: f64) -> Result<f64> {
    Ok(kb_pair_statistics(spin, 0.0, omega_dt, 1.0)?.correlation())
}

/// Four-time record at ωt_i = i·ωΔt.
pub fn kb_record(spin: SpinValue, omega_dt: f64, lambda: f64) -> Result<ExperimentRecord> {
    let times = [0.0, omega_dt, 2.0 * omega_dt, 3.0 * omega_dt];
    let mut pairs = Vec::with_capacity(4);
    for p in Pair::ALL {
        let (i, j) = p.times();
        pairs.push(kb_pair_statistics(spin, times[i], times[j], lambda)?);
    }
    let meter = parity_meter(spin, lambda)?;
    let state = QuantumState::maximally_mixed(spin.dim())?;
    let mut singles = [0.0; 4];
    for (s, &t) in singles.iter_mut().zip(&times) {
        let evolved = state.evolve(&precession(spin, t)?)?;
        *s = evolved.expectation(meter.measurement().effect(Outcome::Plus));
    }
    ExperimentRecord::new([pairs[0], pairs[1], pairs[2], pairs[3]], singles)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_6, PI};

    #[test]
    fn spin_half_reduces_to_cosine() {
        for k in 0..20 {
            let y = -2.0 + 0.23 * k as f64;
            let c = kb_correlation_closed(SpinValue::HALF, 2.0 * y);
            assert!((c - y.cos()).abs() < 1e-12);
        }
    }

    #[test]
    fn closed_form_limits_and_values() {
        assert_eq!(kb_correlation_closed(SpinValue::ONE, 0.0), 1.0);
        assert!((kb_correlation_closed(SpinValue::ONE, 1e-9) - 1.0).abs() < 1e-15);
        assert!((kb_correlation_closed(SpinValue::ONE, FRAC_PI_2) - 2.0 / 3.0).abs() < 1e-15);
        // y = π for spin 1: limit cos(3π)/cos(π) = 1
        let c = kb_correlation_closed(SpinValue::ONE, 3.0 * PI);
        assert!((c - 1.0).abs() < 1e-12);
        let near = kb_correlation_closed(SpinValue::ONE, 3.0 * PI + 1e-5);
        assert!((near - c).abs() < 1e-8);
    }

    #[test]
    fn k_function_values() {
        assert!((kb_k(1.054) - 2.481).abs() < 1e-3);
        assert!(kb_k(PI).abs() < 1e-15);
        assert_eq!(kb_k(0.0), 2.0);
        assert!((kb_k(1e-4) - (2.0 + 1e-8)).abs() < 1e-12);
        assert!((kb_k(1.1e-7) - kb_k(0.9e-7)).abs() < 1e-13);
    }

    #[test]
    fn maximum_location() {
        let m = kb_maximum();
        assert!((m.x - 1.054).abs() < 2e-3);
        assert!((m.value - 2.481).abs() < 1e-3);
    }

    #[test]
    fn simulated_examples() {
        let c = kb_simulated_correlation(SpinValue::HALF, FRAC_PI_4).unwrap();
        assert!((c - FRAC_PI_4.cos()).abs() < 1e-12);
        let c = kb_simulated_correlation(SpinValue::ONE, FRAC_PI_6).unwrap();
        assert!((c - 2.0 / 3.0).abs() < 1e-12);
        let c = kb_simulated_correlation(SpinValue::new(4).unwrap(), 0.0).unwrap();
        assert!((c - 1.0).abs() < 1e-12);
    }
}
