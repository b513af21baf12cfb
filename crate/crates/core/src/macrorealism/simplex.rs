//! Dense phase-one simplex with Bland's rule.
//!
//! Solves min Σ aᵢ s.t. A x + a = b, x ≥ 0, a ≥ 0 (rows with negative b are
//! flipped first). A zero optimum means {A x = b, x ≥ 0} is feasible; a
//! positive optimum comes with a Farkas vector y: yᵀA ≤ 0 and yᵀb > 0.

use crate::error::{Error, Result};

const REDUCED_COST_EPS: f64 = 1e-11;
const PIVOT_EPS: f64 = 1e-12;
const MAX_PIVOTS: usize = 50_000;

#[derive(Clone, Debug)]
pub struct PhaseOne {
    /// Values of the structural variables at the optimum.
    pub x: Vec<f64>,
    /// Optimal Σ of artificial variables.
    pub infeasibility: f64,
    /// Simplex multipliers for the rows as given (before any flipping).
    pub duals: Vec<f64>,
    pub pivots: usize,
}

pub fn phase_one(a: &[Vec<f64>], b: &[f64]) -> Result<PhaseOne> {
    let m = a.len();
    if b.len() != m {
        return Err(Error::LinearProgram(format!(
            "{m} rows but {} right-hand sides",
            b.len()
        )));
    }
    let n = a.first().map_or(0, Vec::len);
    if a.iter().any(|row| row.len() != n) {
        return Err(Error::LinearProgram("ragged constraint matrix".into()));
    }
    if a.iter().flatten().chain(b).any(|v| !v.is_finite()) {
        return Err(Error::LinearProgram("non-finite coefficient".into()));
    }

    let width = n + m;
    let rhs = width;
    let mut flip = vec![1.0; m];
    let mut t = vec![vec![0.0; width + 1]; m];
    for i in 0..m {
        if b[i] < 0.0 {
            flip[i] = -1.0;
        }
        for j in 0..n {
            t[i][j] = flip[i] * a[i][j];
        }
        t[i][n + i] = 1.0;
        t[i][rhs] = flip[i] * b[i];
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    // reduced costs and −objective
    let mut d = vec![0.0; width + 1];
    for row in &t {
        for j in 0..n {
            d[j] -= row[j];
        }
        d[rhs] -= row[rhs];
    }

    let mut pivots = 0;
    while let Some(enter) = (0..width).find(|&j| d[j] < -REDUCED_COST_EPS) {
        let mut leave: Option<usize> = None;
        let mut best = f64::INFINITY;
        for i in 0..m {
            let coef = t[i][enter];
            if coef > PIVOT_EPS {
                let ratio = t[i][rhs] / coef;
                let better = match leave {
                    None => true,
                    Some(l) => {
                        ratio < best - 1e-14 || (ratio <= best + 1e-14 && basis[i] < basis[l])
                    }
                };
                if better {
                    best = ratio;
                    leave = Some(i);
                }
            }
        }
        let Some(r) = leave else {
            return Err(Error::LinearProgram(
                "phase-one problem reported unbounded".into(),
            ));
        };

        let p = t[r][enter];
        for v in t[r].iter_mut() {
            *v /= p;
        }
        let pivot_row = t[r].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i != r {
                let f = row[enter];
                if f != 0.0 {
                    for (v, pv) in row.iter_mut().zip(&pivot_row) {
                        *v -= f * pv;
                    }
                }
            }
        }
        let f = d[enter];
        for (v, pv) in d.iter_mut().zip(&pivot_row) {
            *v -= f * pv;
        }
        basis[r] = enter;

        pivots += 1;
        if pivots > MAX_PIVOTS {
            return Err(Error::LinearProgram("pivot limit exceeded".into()));
        }
    }

    let mut x = vec![0.0; n];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < n {
            x[bv] = t[i][rhs];
        }
    }
    let duals = (0..m).map(|k| flip[k] * (1.0 - d[n + k])).collect();
    Ok(PhaseOne {
        x,
        infeasibility: -d[rhs],
        duals,
        pivots,
    })
}
