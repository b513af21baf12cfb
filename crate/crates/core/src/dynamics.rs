//! States, two-outcome measurements and sequential two-time statistics.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{eig_hermitian, tol, trace_product_re, ComplexMatrix, C64};

/// Probability below which a branch is treated as never occurring.
const BRANCH_EPS: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Outcome {
    Plus,
    Minus,
}

impl Outcome {
    pub const BOTH: [Outcome; 2] = [Outcome::Plus, Outcome::Minus];

    pub fn sign(self) -> f64 {
        match self {
            Outcome::Plus => 1.0,
            Outcome::Minus => -1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Outcome::Plus => Outcome::Minus,
            Outcome::Minus => Outcome::Plus,
        }
    }
}

/// Density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Clone, Debug)]
pub struct QuantumState {
    rho: ComplexMatrix,
}

impl QuantumState {
    pub fn new(rho: ComplexMatrix) -> Result<Self> {
        let residual = rho.hermitian_residual();
        if residual > tol::STRUCTURAL {
            return Err(Error::InvalidState(format!(
                "not Hermitian (residual {residual:.3e})"
            )));
        }
        let tr = rho.trace();
        if (tr.re - 1.0).abs() > tol::STRUCTURAL || tr.im.abs() > tol::STRUCTURAL {
            return Err(Error::InvalidState(format!("trace {tr} is not 1")));
        }
        let eig = eig_hermitian(&rho)?;
        let min = eig.values.last().copied().unwrap_or(0.0);
        if min < -tol::STRUCTURAL {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {min:.3e}"
            )));
        }
        Ok(Self { rho })
    }

    /// Internal constructor for matrices that are states by construction.
    fn trusted(rho: ComplexMatrix) -> Self {
        Self { rho }
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidDimension { dim, min: 2 });
        }
        Ok(Self::trusted(
            ComplexMatrix::identity(dim).scale(1.0 / dim as f64),
        ))
    }

    /// |ψ⟩⟨ψ| for a (not necessarily normalised) vector.
    pub fn pure(psi: &[C64]) -> Result<Self> {
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if psi.is_empty() || !norm.is_finite() || norm < 1e-300 {
            return Err(Error::InvalidState(
                "zero or non-finite state vector".into(),
            ));
        }
        let v: Vec<C64> = psi.iter().map(|z| z / norm).collect();
        Ok(Self::trusted(ComplexMatrix::outer(&v, &v)))
    }

    pub fn basis(dim: usize, k: usize) -> Self {
        let mut rho = ComplexMatrix::zeros(dim);
        rho.set(k, k, C64::new(1.0, 0.0));
        Self::trusted(rho)
    }

    pub fn rho(&self) -> &ComplexMatrix {
        &self.rho
    }

    pub fn dim(&self) -> usize {
        self.rho.dim()
    }

    /// U ρ U†
    pub fn evolve(&self, u: &ComplexMatrix) -> Result<Self> {
        check_dim(self.dim(), u.dim())?;
        let residual = u.unitary_residual();
        if residual > tol::STRUCTURAL {
            return Err(Error::NotUnitary { residual });
        }
        Ok(Self::trusted(self.rho.conjugate_by(u)))
    }

    /// Re tr(ρ A).
    pub fn expectation(&self, op: &ComplexMatrix) -> f64 {
        trace_product_re(&self.rho, op)
    }
}

/// ±1-valued sharp observable with its two spectral projectors.
#[derive(Clone, Debug)]
pub struct DichotomicObservable {
    q: ComplexMatrix,
    p_plus: ComplexMatrix,
    p_minus: ComplexMatrix,
}

impl DichotomicObservable {
    /// The +1 outcome collects the strictly positive eigenspace of `q`, the −1
    /// outcome the strictly negative one. Zero eigenvalues are rejected.
    pub fn from_hermitian(q: ComplexMatrix) -> Result<Self> {
        let eig = eig_hermitian(&q)?;
        if let Some(&w) = eig.values.iter().find(|w| w.abs() <= tol::STRUCTURAL) {
            return Err(Error::ZeroEigenvalue { value: w });
        }
        let p_plus = eig.spectral_projector(|w| w > 0.0);
        let p_minus = eig.spectral_projector(|w| w < 0.0);
        Ok(Self { q, p_plus, p_minus })
    }

    /// Observable P₊ − P₋ for a given projector onto the +1 sector.
    pub fn from_plus_projector(p_plus: ComplexMatrix) -> Result<Self> {
        if !p_plus.is_projector(tol::STRUCTURAL) {
            return Err(Error::InvalidProjectors(
                "P+ is not an orthogonal projector".into(),
            ));
        }
        let p_minus = &ComplexMatrix::identity(p_plus.dim()) - &p_plus;
        let q = &p_plus - &p_minus;
        Ok(Self { q, p_plus, p_minus })
    }

    pub fn q(&self) -> &ComplexMatrix {
        &self.q
    }

    pub fn p_plus(&self) -> &ComplexMatrix {
        &self.p_plus
    }

    pub fn p_minus(&self) -> &ComplexMatrix {
        &self.p_minus
    }

    pub fn projector(&self, outcome: Outcome) -> &ComplexMatrix {
        match outcome {
            Outcome::Plus => &self.p_plus,
            Outcome::Minus => &self.p_minus,
        }
    }

    pub fn dim(&self) -> usize {
        self.q.dim()
    }
}

/// Two-outcome POVM E± = λP± + (1−λ)/2·I.
#[derive(Clone, Debug)]
pub struct UnsharpEffectPair {
    lambda: f64,
    e_plus: ComplexMatrix,
    e_minus: ComplexMatrix,
    sqrt_plus: ComplexMatrix,
    sqrt_minus: ComplexMatrix,
}

impl UnsharpEffectPair {
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn e_plus(&self) -> &ComplexMatrix {
        &self.e_plus
    }

    pub fn e_minus(&self) -> &ComplexMatrix {
        &self.e_minus
    }

    pub fn effect(&self, outcome: Outcome) -> &ComplexMatrix {
        match outcome {
            Outcome::Plus => &self.e_plus,
            Outcome::Minus => &self.e_minus,
        }
    }

    /// Positive square root of the effect, the generalised Lüders operator.
    pub fn sqrt_effect(&self, outcome: Outcome) -> &ComplexMatrix {
        match outcome {
            Outcome::Plus => &self.sqrt_plus,
            Outcome::Minus => &self.sqrt_minus,
        }
    }

    pub fn dim(&self) -> usize {
        self.e_plus.dim()
    }
}

pub fn make_unsharp(obs: &DichotomicObservable, lambda: f64) -> Result<UnsharpEffectPair> {
    if !(lambda > 0.0 && lambda <= 1.0) {
        return Err(Error::InvalidSharpness(lambda));
    }
    let noise = ComplexMatrix::identity(obs.dim()).scale((1.0 - lambda) / 2.0);
    let e_plus = &obs.p_plus.scale(lambda) + &noise;
    let e_minus = &obs.p_minus.scale(lambda) + &noise;
    let sqrt_plus = effect_sqrt(&e_plus)?;
    let sqrt_minus = effect_sqrt(&e_minus)?;
    Ok(UnsharpEffectPair {
        lambda,
        e_plus,
        e_minus,
        sqrt_plus,
        sqrt_minus,
    })
}

fn effect_sqrt(e: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = eig_hermitian(e)?;
    Ok(eig.apply(|w| C64::new(w.clamp(0.0, 1.0).sqrt(), 0.0)))
}

/// A two-outcome measurement, sharp or unsharp.
#[derive(Clone, Copy, Debug)]
pub enum Measurement<'a> {
    Sharp(&'a DichotomicObservable),
    Unsharp(&'a UnsharpEffectPair),
}

impl<'a> Measurement<'a> {
    pub fn dim(&self) -> usize {
        match self {
            Measurement::Sharp(o) => o.dim(),
            Measurement::Unsharp(e) => e.dim(),
        }
    }

    pub fn effect(&self, outcome: Outcome) -> &'a ComplexMatrix {
        match *self {
            Measurement::Sharp(o) => o.projector(outcome),
            Measurement::Unsharp(e) => e.effect(outcome),
        }
    }

    /// Lüders operator: the projector itself, or √E.
    pub fn kraus(&self, outcome: Outcome) -> &'a ComplexMatrix {
        match *self {
            Measurement::Sharp(o) => o.projector(outcome),
            Measurement::Unsharp(e) => e.sqrt_effect(outcome),
        }
    }
}

impl<'a> From<&'a DichotomicObservable> for Measurement<'a> {
    fn from(o: &'a DichotomicObservable) -> Self {
        Measurement::Sharp(o)
    }
}

impl<'a> From<&'a UnsharpEffectPair> for Measurement<'a> {
    fn from(e: &'a UnsharpEffectPair) -> Self {
        Measurement::Unsharp(e)
    }
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// Unnormalised branch K ρ K† and its probability.
fn branch(state: &QuantumState, m: Measurement<'_>, outcome: Outcome) -> (ComplexMatrix, f64) {
    let k = m.kraus(outcome);
    let unnorm = state.rho.conjugate_by(k);
    let p = unnorm.trace().re;
    (unnorm, p)
}

/// Selective Lüders update for either kind of measurement.
pub fn luders_update(
    state: &QuantumState,
    m: Measurement<'_>,
    outcome: Outcome,
) -> Result<(QuantumState, f64)> {
    check_dim(state.dim(), m.dim())?;
    let (unnorm, p) = branch(state, m, outcome);
    if p <= BRANCH_EPS {
        return Err(Error::ImpossibleBranch { probability: p });
    }
    Ok((QuantumState::trusted(unnorm.scale(1.0 / p)), p))
}

/// ρ → PρP / tr(PρP).
pub fn luders_sharp(
    state: &QuantumState,
    obs: &DichotomicObservable,
    outcome: Outcome,
) -> Result<(QuantumState, f64)> {
    luders_update(state, Measurement::Sharp(obs), outcome)
}

/// ρ → √E ρ √E / tr(Eρ).
pub fn luders_unsharp(
    state: &QuantumState,
    eff: &UnsharpEffectPair,
    outcome: Outcome,
) -> Result<(QuantumState, f64)> {
    luders_update(state, Measurement::Unsharp(eff), outcome)
}

/// Post-measurement state when the outcome is not read: Σ K ρ K†.
pub fn nonselective(state: &QuantumState, m: Measurement<'_>) -> Result<QuantumState> {
    check_dim(state.dim(), m.dim())?;
    let plus = branch(state, m, Outcome::Plus).0;
    let minus = branch(state, m, Outcome::Minus).0;
    Ok(QuantumState::trusted(&plus + &minus))
}

/// Joint outcome probabilities of two sequential measurements; the first
/// index refers to the earlier time.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairStatistics {
    pub p_pp: f64,
    pub p_pm: f64,
    pub p_mp: f64,
    pub p_mm: f64,
}

impl PairStatistics {
    pub fn new(p_pp: f64, p_pm: f64, p_mp: f64, p_mm: f64) -> Result<Self> {
        let s = Self {
            p_pp,
            p_pm,
            p_mp,
            p_mm,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        let ps = self.as_array();
        if ps.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidProbabilities("non-finite probability".into()));
        }
        if let Some(p) = ps
            .iter()
            .find(|&&p| !(-tol::ALGEBRAIC..=1.0 + tol::ALGEBRAIC).contains(&p))
        {
            return Err(Error::InvalidProbabilities(format!(
                "{p} is outside [0, 1]"
            )));
        }
        let sum: f64 = ps.iter().sum();
        if (sum - 1.0).abs() > tol::STRUCTURAL {
            return Err(Error::InvalidProbabilities(format!(
                "joint probabilities sum to {sum}, expected 1"
            )));
        }
        Ok(())
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.p_pp, self.p_pm, self.p_mp, self.p_mm]
    }

    pub fn get(&self, first: Outcome, second: Outcome) -> f64 {
        match (first, second) {
            (Outcome::Plus, Outcome::Plus) => self.p_pp,
            (Outcome::Plus, Outcome::Minus) => self.p_pm,
            (Outcome::Minus, Outcome::Plus) => self.p_mp,
            (Outcome::Minus, Outcome::Minus) => self.p_mm,
        }
    }

    fn slot(&mut self, first: Outcome, second: Outcome) -> &mut f64 {
        match (first, second) {
            (Outcome::Plus, Outcome::Plus) => &mut self.p_pp,
            (Outcome::Plus, Outcome::Minus) => &mut self.p_pm,
            (Outcome::Minus, Outcome::Plus) => &mut self.p_mp,
            (Outcome::Minus, Outcome::Minus) => &mut self.p_mm,
        }
    }

    /// p⁺ at the earlier time.
    pub fn first_plus(&self) -> f64 {
        self.p_pp + self.p_pm
    }

    /// p⁺ at the later time.
    pub fn second_plus(&self) -> f64 {
        self.p_pp + self.p_mp
    }

    pub fn correlation(&self) -> f64 {
        self.p_pp - self.p_pm - self.p_mp + self.p_mm
    }

    /// Convex combination Σ wᵢ·statsᵢ (weights are expected to sum to 1).
    pub fn mixture(parts: &[(f64, PairStatistics)]) -> Result<Self> {
        let mut acc = Self {
            p_pp: 0.0,
            p_pm: 0.0,
            p_mp: 0.0,
            p_mm: 0.0,
        };
        for (w, s) in parts {
            acc.p_pp += w * s.p_pp;
            acc.p_pm += w * s.p_pm;
            acc.p_mp += w * s.p_mp;
            acc.p_mm += w * s.p_mm;
        }
        acc.validate()?;
        Ok(acc)
    }
}

/// C = p⁺⁺ − p⁺⁻ − p⁻⁺ + p⁻⁻.
pub fn correlation_of(stats: &PairStatistics) -> f64 {
    stats.correlation()
}

/// Evolve by `u_before`, measure `first`, evolve each branch by `u_between`,
/// measure `second`; p^{ab} = p^a · p^{b|a}.
pub fn sequential_pair_statistics(
    state: &QuantumState,
    first: Measurement<'_>,
    u_between: &ComplexMatrix,
    second: Measurement<'_>,
    u_before: &ComplexMatrix,
) -> Result<PairStatistics> {
    let n = state.dim();
    check_dim(n, first.dim())?;
    check_dim(n, second.dim())?;
    let evolved = state.evolve(u_before)?;
    // Validates u_between once, even if every branch turns out empty.
    check_dim(n, u_between.dim())?;
    let residual = u_between.unitary_residual();
    if residual > tol::STRUCTURAL {
        return Err(Error::NotUnitary { residual });
    }

    let mut stats = PairStatistics {
        p_pp: 0.0,
        p_pm: 0.0,
        p_mp: 0.0,
        p_mm: 0.0,
    };
    for a in Outcome::BOTH {
        let (unnorm, pa) = branch(&evolved, first, a);
        if pa <= BRANCH_EPS {
            continue;
        }
        let post = unnorm.scale(1.0 / pa).conjugate_by(u_between);
        for b in Outcome::BOTH {
            let pb = trace_product_re(&post, second.effect(b));
            *stats.slot(a, b) = pa * pb;
        }
    }
    stats.validate()?;
    Ok(stats)
}

/// ½ tr[Q(t₁) Q(t₂)] with Q(t) = U†(t) Q U(t), for a traceless qubit observable.
pub fn heisenberg_correlation_2d(
    obs: &DichotomicObservable,
    u1: &ComplexMatrix,
    u2: &ComplexMatrix,
) -> Result<f64> {
    check_dim(2, obs.dim())?;
    check_dim(2, u1.dim())?;
    check_dim(2, u2.dim())?;
    let trace = obs.q.trace();
    if trace.norm() > tol::STRUCTURAL {
        return Err(Error::NotTraceless { trace: trace.re });
    }
    let q1 = obs.q.conjugate_by(&u1.adjoint());
    let q2 = obs.q.conjugate_by(&u2.adjoint());
    Ok(0.5 * trace_product_re(&q1, &q2))
}
