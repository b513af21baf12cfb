//! Spin-`j` Leggett–Garg constructions.
//!
//! Two schemes live here:
//!
//! * the block scheme ([`gisin_peres`]): basis states are paired into qubit
//!   blocks, each block precesses independently, and the dichotomic
//!   observable is (Γz ± Π)/√(2j+1). It reaches K = 2√2 for every `j`;
//! * the parity scheme ([`kofler_brukner`]): a maximally mixed spin precesses
//!   about x and the parity (−1)^{j−m} is measured. Its violation saturates
//!   at K ≈ 2.481 for large `j`.
//!
//! Odd dimensions leave one unpaired basis state; [`zero_beam`] models the
//! separate Rabi treatment of that m = 0 beam.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub mod angular;
pub mod gisin_peres;
pub mod kofler_brukner;
pub mod zero_beam;

pub use angular::{parity_observable, spin_operators};
pub use gisin_peres::{
    block_unitary, gamma_matrices, gp_beam_pair_statistics, gp_beam_simulated_correlation,
    gp_beam_simulated_correlation_with_mode, gp_correlation_closed, gp_lg_sum, gp_lg_sum_simulated,
    gp_observable, gp_record, pi_matrix, GpObservable,
};
pub use kofler_brukner::{
    kb_correlation_closed, kb_finite_k, kb_k, kb_maximum, kb_pair_statistics, kb_record,
    kb_simulated_correlation,
};
pub use zero_beam::{zero_beam_pair_statistics, zero_beam_statistics};

/// Spin quantum number stored as 2j, so half-integers are exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpinValue {
    two_j: u32,
}

impl SpinValue {
    pub fn new(two_j: u32) -> Result<Self> {
        if two_j == 0 {
            return Err(Error::InvalidSpin(two_j));
        }
        Ok(Self { two_j })
    }

    pub const HALF: SpinValue = SpinValue { two_j: 1 };
    pub const ONE: SpinValue = SpinValue { two_j: 2 };

    pub fn two_j(self) -> u32 {
        self.two_j
    }

    pub fn j(self) -> f64 {
        self.two_j as f64 / 2.0
    }

    /// N = 2j + 1.
    pub fn dim(self) -> usize {
        self.two_j as usize + 1
    }

    /// Integral spin, i.e. odd N with one unpaired basis state.
    pub fn has_unpaired(self) -> bool {
        self.two_j.is_multiple_of(2)
    }
}

impl fmt::Display for SpinValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.two_j.is_multiple_of(2) {
            write!(f, "{}", self.two_j / 2)
        } else {
            write!(f, "{}/2", self.two_j)
        }
    }
}

/// Sign in front of Π in the block observable. C₁₄ uses `Minus`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PiSign {
    Plus,
    Minus,
}

impl PiSign {
    pub fn value(self) -> f64 {
        match self {
            PiSign::Plus => 1.0,
            PiSign::Minus => -1.0,
        }
    }
}

/// How the unpaired sector of an odd-dimensional spin is simulated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum OddMode {
    /// m = 0 beam precessing under e^{−iθJy} with θ = α/2, so that its
    /// two-time correlation equals cos(α₂ − α₁).
    #[default]
    Rabi,
    /// Same Rabi treatment with θ = ωt = 2α taken literally.
    RabiLiteral,
    /// No separate treatment: the unpaired state is measured as it sits,
    /// always giving +1.
    Static,
}

impl OddMode {
    /// Zero-beam rotation angle per unit of block angle α.
    pub fn rate(self) -> Option<f64> {
        match self {
            OddMode::Rabi => Some(0.5),
            OddMode::RabiLiteral => Some(2.0),
            OddMode::Static => None,
        }
    }
}

impl FromStr for OddMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rabi" => Ok(OddMode::Rabi),
            "rabi-literal" => Ok(OddMode::RabiLiteral),
            "static" => Ok(OddMode::Static),
            other => Err(Error::InvalidSchedule(format!(
                "unknown odd mode '{other}' (expected rabi, rabi-literal or static)"
            ))),
        }
    }
}

/// Four block angles α_i = ωt_i/2, in radians.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AngleSchedule {
    alphas: [f64; 4],
}

impl AngleSchedule {
    /// (0, π/4, π/2, 3π/4): the schedule of maximal violation.
    pub const CANONICAL: AngleSchedule = AngleSchedule {
        alphas: [0.0, FRAC_PI_4, FRAC_PI_2, 3.0 * FRAC_PI_4],
    };

    pub fn new(alphas: [f64; 4]) -> Result<Self> {
        if alphas.iter().any(|a| !a.is_finite()) {
            return Err(Error::InvalidSchedule("angles must be finite".into()));
        }
        Ok(Self { alphas })
    }

    /// α_i = start + i·step.
    pub fn equidistant(start: f64, step: f64) -> Result<Self> {
        Self::new([start, start + step, start + 2.0 * step, start + 3.0 * step])
    }

    pub fn alphas(&self) -> [f64; 4] {
        self.alphas
    }

    pub fn alpha(&self, time: usize) -> f64 {
        self.alphas[time]
    }
}

impl FromStr for AngleSchedule {
    type Err = Error;

    /// Accepts `canonical` or four comma-separated angles. Each angle is a
    /// decimal number or a multiple of pi such as `pi/4`, `3pi/4`, `0.5*pi`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("canonical") {
            return Ok(Self::CANONICAL);
        }
        let parts: Vec<&str> = s.split(',').collect();
        if parts.len() != 4 {
            return Err(Error::InvalidSchedule(format!(
                "expected 4 comma-separated angles, got {}",
                parts.len()
            )));
        }
        let mut alphas = [0.0; 4];
        for (slot, part) in alphas.iter_mut().zip(&parts) {
            *slot = parse_angle(part)?;
        }
        Self::new(alphas)
    }
}

fn parse_angle(token: &str) -> Result<f64> {
    let t = token.trim().to_ascii_lowercase();
    let bad = || Error::InvalidSchedule(format!("cannot parse angle '{}'", token.trim()));
    let Some(pos) = t.find("pi") else {
        return t.parse::<f64>().map_err(|_| bad());
    };
    let (head, tail) = (&t[..pos], &t[pos + 2..]);
    let head = head.strip_suffix('*').unwrap_or(head).trim();
    let factor = match head {
        "" | "+" => 1.0,
        "-" => -1.0,
        h => h.parse::<f64>().map_err(|_| bad())?,
    };
    let divisor = match tail.trim() {
        "" => 1.0,
        rest => {
            let d = rest.strip_prefix('/').ok_or_else(bad)?;
            let d = d.trim().parse::<f64>().map_err(|_| bad())?;
            if d == 0.0 {
                return Err(bad());
            }
            d
        }
    };
    let v = factor * PI / divisor;
    if !v.is_finite() {
        return Err(bad());
    }
    Ok(v)
}

/// λ* = √(2/K_max), below which λ²·K_max ≤ 2.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SharpnessThreshold {
    Crossing(f64),
    /// K_max ≤ 2: the sharp correlations never violate, so no threshold exists.
    NeverViolated,
}

pub fn sharpness_threshold(k_max: f64) -> SharpnessThreshold {
    if k_max.is_nan() || k_max <= 2.0 {
        return SharpnessThreshold::NeverViolated;
    }
    SharpnessThreshold::Crossing((2.0 / k_max).sqrt())
}
