//! Dense complex matrices and the Hermitian spectral toolkit.
//!
//! Dimensions here are tiny (at most a few hundred), so everything is dense
//! and every matrix function goes through a Hermitian eigendecomposition.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Tolerance hierarchy shared by every module.
pub mod tol {
    /// Hermiticity, unitarity, projector and state checks.
    pub const STRUCTURAL: f64 = 1e-10;
    /// Algebraic identities between two computations of the same quantity.
    pub const ALGEBRAIC: f64 = 1e-12;
    /// Probabilistic and linear-programming checks.
    pub const STATISTICAL: f64 = 1e-9;
}

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Square complex matrix with finite entries.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<C64>);

impl ComplexMatrix {
    pub fn from_dmatrix(m: DMatrix<C64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::NotSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self(m))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(DMatrix::zeros(dim, dim))
    }

    pub fn identity(dim: usize) -> Self {
        Self(DMatrix::identity(dim, dim))
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        Self(DMatrix::from_fn(dim, dim, f))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        Self::from_fn(diag.len(), |r, c| {
            if r == c {
                C64::new(diag[r], 0.0)
            } else {
                ZERO
            }
        })
    }

    /// Row-major construction; panics if `rows` is not square.
    pub fn from_rows(rows: &[&[C64]]) -> Self {
        let n = rows.len();
        assert!(
            rows.iter().all(|r| r.len() == n),
            "rows must form a square matrix"
        );
        Self::from_fn(n, |r, c| rows[r][c])
    }

    /// Outer product |a⟩⟨b|.
    pub fn outer(a: &[C64], b: &[C64]) -> Self {
        assert_eq!(a.len(), b.len());
        Self::from_fn(a.len(), |r, c| a[r] * b[c].conj())
    }

    pub fn pauli_x() -> Self {
        Self::from_rows(&[&[ZERO, ONE], &[ONE, ZERO]])
    }

    pub fn pauli_y() -> Self {
        Self::from_rows(&[&[ZERO, -I], &[I, ZERO]])
    }

    pub fn pauli_z() -> Self {
        Self::from_real_diagonal(&[1.0, -1.0])
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, r: usize, c: usize) -> C64 {
        self.0[(r, c)]
    }

    pub fn set(&mut self, r: usize, c: usize, v: C64) {
        self.0[(r, c)] = v;
    }

    pub fn as_dmatrix(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(&self.0 * C64::new(s, 0.0))
    }

    pub fn scale_complex(&self, s: C64) -> Self {
        Self(&self.0 * s)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Frobenius distance to `other`.
    pub fn distance(&self, other: &Self) -> f64 {
        assert_eq!(self.dim(), other.dim());
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim(), other.dim());
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn hermitian_residual(&self) -> f64 {
        self.distance(&self.adjoint())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_residual() <= tol
    }

    pub fn unitary_residual(&self) -> f64 {
        (&self.adjoint() * self).distance(&Self::identity(self.dim()))
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitary_residual() <= tol
    }

    pub fn is_projector(&self, tol: f64) -> bool {
        self.is_hermitian(tol) && (self * self).distance(self) <= tol
    }

    /// U · self · U†
    pub fn conjugate_by(&self, u: &Self) -> Self {
        &(u * self) * &u.adjoint()
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    /// Square sub-block starting at `offset` on the diagonal.
    pub fn block(&self, offset: usize, size: usize) -> Self {
        Self(self.0.view((offset, offset), (size, size)).into_owned())
    }

    pub fn direct_sum(blocks: &[Self]) -> Self {
        let dim = blocks.iter().map(Self::dim).sum();
        let mut out = Self::zeros(dim);
        let mut offset = 0;
        for b in blocks {
            out.0
                .view_mut((offset, offset), (b.dim(), b.dim()))
                .copy_from(&b.0);
            offset += b.dim();
        }
        out
    }

    pub fn mat_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.dim());
        (0..self.dim())
            .map(|r| (0..self.dim()).map(|c| self.0[(r, c)] * v[c]).sum())
            .collect()
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ComplexMatrix{}", self.0)
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 + &rhs.0)
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 - &rhs.0)
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix(-&self.0)
    }
}

/// Spectral decomposition H = V diag(w) V†.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    /// Descending.
    pub values: Vec<f64>,
    /// Columns are the eigenvectors, in the order of `values`.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    /// V diag(f(w)) V†, the matrix function of the decomposed operator.
    pub fn apply(&self, f: impl Fn(f64) -> C64) -> ComplexMatrix {
        let n = self.values.len();
        let v = &self.vectors.0;
        let fw: Vec<C64> = self.values.iter().map(|&w| f(w)).collect();
        let mut scaled = v.clone();
        for (c, &s) in fw.iter().enumerate() {
            for r in 0..n {
                scaled[(r, c)] *= s;
            }
        }
        ComplexMatrix(scaled * v.adjoint())
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.apply(|w| C64::new(w, 0.0))
    }

    /// Projector onto the span of eigenvectors whose eigenvalue satisfies `keep`.
    pub fn spectral_projector(&self, keep: impl Fn(f64) -> bool) -> ComplexMatrix {
        self.apply(|w| if keep(w) { ONE } else { ZERO })
    }
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues descending.
///
/// Eigenvalues that coincide within 1e-10 keep the order of the basis index
/// where their eigenvector has its largest weight.
pub fn eig_hermitian(h: &ComplexMatrix) -> Result<HermitianEigen> {
    let residual = h.hermitian_residual();
    if residual > tol::STRUCTURAL {
        return Err(Error::NotHermitian { residual });
    }
    let n = h.dim();
    // Exact symmetrisation so the solver sees a Hermitian input.
    let sym = (&h.0 + h.0.adjoint()) * C64::new(0.5, 0.0);
    let eig = SymmetricEigen::try_new(sym, f64::EPSILON, 0).ok_or(Error::EigenFailure)?;

    let leading = |c: usize| -> usize {
        let col = eig.eigenvectors.column(c);
        let mut best = 0;
        let mut best_w = -1.0;
        for r in 0..n {
            let w = col[r].norm_sqr();
            if w > best_w + 1e-12 {
                best = r;
                best_w = w;
            }
        }
        best
    };

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n
            && (eig.eigenvalues[order[start]] - eig.eigenvalues[order[end]]).abs()
                <= tol::STRUCTURAL
        {
            end += 1;
        }
        order[start..end].sort_by_key(|&c| leading(c));
        start = end;
    }

    let values = order.iter().map(|&c| eig.eigenvalues[c]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok(HermitianEigen {
        values,
        vectors: ComplexMatrix(vectors),
    })
}

/// exp(−i·s·H) for Hermitian H.
pub fn expm_i_hermitian(h: &ComplexMatrix, s: f64) -> Result<ComplexMatrix> {
    let eig = eig_hermitian(h)?;
    Ok(eig.apply(|w| C64::from_polar(1.0, -s * w)))
}

/// exp(−i·α·σx) = cos α·I − i sin α·σx, the closed form used for 2×2 blocks.
pub fn expm_i_pauli_x(alpha: f64) -> ComplexMatrix {
    let (s, c) = alpha.sin_cos();
    let c = C64::new(c, 0.0);
    let ms = C64::new(0.0, -s);
    ComplexMatrix::from_rows(&[&[c, ms], &[ms, c]])
}

/// Re tr(A·B) without forming the product.
pub fn trace_product_re(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    assert_eq!(a.dim(), b.dim());
    let n = a.dim();
    let mut acc = 0.0;
    for r in 0..n {
        for c in 0..n {
            acc += (a.0[(r, c)] * b.0[(c, r)]).re;
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn pauli_z_spectrum() {
        let e = eig_hermitian(&ComplexMatrix::pauli_z()).unwrap();
        assert_eq!(e.values, vec![1.0, -1.0]);
        assert!(e.vectors.distance(&ComplexMatrix::identity(2)) < 1e-15);
    }

    #[test]
    fn pauli_x_spectrum_and_vectors() {
        let e = eig_hermitian(&ComplexMatrix::pauli_x()).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-14);
        assert!((e.values[1] + 1.0).abs() < 1e-14);
        // eigenvectors up to phase
        let v0 = [e.vectors.get(0, 0), e.vectors.get(1, 0)];
        let v1 = [e.vectors.get(0, 1), e.vectors.get(1, 1)];
        let ov0 = (v0[0] + v0[1]).norm() * FRAC_1_SQRT_2;
        let ov1 = (v1[0] - v1[1]).norm() * FRAC_1_SQRT_2;
        assert!((ov0 - 1.0).abs() < 1e-12);
        assert!((ov1 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_diagonal_keeps_basis_order() {
        let h = ComplexMatrix::from_real_diagonal(&[0.5, 2.0, 0.5, 0.5]);
        let e = eig_hermitian(&h).unwrap();
        assert_eq!(e.values, vec![2.0, 0.5, 0.5, 0.5]);
        let cols: Vec<usize> = (0..4)
            .map(|c| (0..4).find(|&r| e.vectors.get(r, c).norm() > 0.5).unwrap())
            .collect();
        assert_eq!(cols, vec![1, 0, 2, 3]);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_rows(&[&[ONE, ONE], &[ZERO, ONE]]);
        match eig_hermitian(&m) {
            Err(Error::NotHermitian { residual }) => {
                assert!((residual - 2f64.sqrt()).abs() < 1e-12)
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn non_square_rejected() {
        let m = DMatrix::<C64>::zeros(2, 3);
        assert!(matches!(
            ComplexMatrix::from_dmatrix(m),
            Err(Error::NotSquare { rows: 2, cols: 3 })
        ));
    }

    #[test]
    fn expm_zero_is_identity() {
        let h = ComplexMatrix::pauli_y();
        let u = expm_i_hermitian(&h, 0.0).unwrap();
        assert!(u.distance(&ComplexMatrix::identity(2)) < 1e-14);
    }

    #[test]
    fn expm_pauli_x_matches_closed_form() {
        for k in 0..20 {
            let theta = -2.0 + 0.37 * k as f64;
            let general = expm_i_hermitian(&ComplexMatrix::pauli_x(), theta).unwrap();
            let fast = expm_i_pauli_x(theta);
            assert!(general.distance(&fast) < 1e-12, "theta={theta}");
            assert!(general.is_unitary(1e-10));
        }
    }

    #[test]
    fn direct_sum_and_block_roundtrip() {
        let a = ComplexMatrix::pauli_x();
        let b = ComplexMatrix::from_real_diagonal(&[3.0]);
        let s = ComplexMatrix::direct_sum(&[a.clone(), b.clone()]);
        assert_eq!(s.dim(), 3);
        assert_eq!(s.block(0, 2), a);
        assert_eq!(s.block(2, 1), b);
        assert_eq!(s.get(0, 2), ZERO);
    }

    #[test]
    fn projector_predicate() {
        let p = ComplexMatrix::from_real_diagonal(&[1.0, 0.0]);
        assert!(p.is_projector(1e-12));
        assert!(!ComplexMatrix::pauli_z().is_projector(1e-12));
    }
}
