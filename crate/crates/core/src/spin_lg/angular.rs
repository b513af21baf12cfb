use crate::dynamics::DichotomicObservable;
use crate::numerics::{ComplexMatrix, C64, ZERO};

use super::SpinValue;

/// (Jx, Jy, Jz) in the basis m = j, j−1, …, −j (index k ↔ m = j − k).
pub fn spin_operators(spin: SpinValue) -> (ComplexMatrix, ComplexMatrix, ComplexMatrix) {
    let n = spin.dim();
    let j = spin.j();
    let m = |k: usize| j - k as f64;
    // ⟨m+1| J₊ |m⟩ sits at (k−1, k)
    let raise = |r: usize, c: usize| -> f64 {
        if c == r + 1 {
            let mc = m(c);
            (j * (j + 1.0) - mc * (mc + 1.0)).max(0.0).sqrt()
        } else {
            0.0
        }
    };
    let jx = ComplexMatrix::from_fn(n, |r, c| C64::new(0.5 * (raise(r, c) + raise(c, r)), 0.0));
    let jy = ComplexMatrix::from_fn(n, |r, c| C64::new(0.0, -0.5 * (raise(r, c) - raise(c, r))));
    let jz = ComplexMatrix::from_fn(n, |r, c| if r == c { C64::new(m(r), 0.0) } else { ZERO });
    (jx, jy, jz)
}

/// Σ_m (−1)^{j−m} |m⟩⟨m|.
pub fn parity_observable(spin: SpinValue) -> DichotomicObservable {
    let diag: Vec<f64> = (0..spin.dim())
        .map(|k| if k % 2 == 0 { 1.0 } else { 0.0 })
        .collect();
    DichotomicObservable::from_plus_projector(ComplexMatrix::from_real_diagonal(&diag))
        .expect("diagonal 0/1 matrix is a projector")
}
