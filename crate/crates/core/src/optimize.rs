//! One-dimensional maximisation: coarse grid scan followed by golden-section
//! refinement around the best grid point.

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Maximum {
    pub x: f64,
    pub value: f64,
}

/// Maximise `f` over the open interval (lo, hi).
///
/// `grid` interior points are scanned; the bracket around the best one is
/// then narrowed by golden-section search until its width is below `x_tol`.
pub fn maximize_scan_golden(
    f: impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    grid: usize,
    x_tol: f64,
) -> Maximum {
    assert!(hi > lo && grid >= 1 && x_tol > 0.0);
    let step = (hi - lo) / (grid + 1) as f64;
    let mut best_k = 1;
    let mut best_v = f64::NEG_INFINITY;
    for k in 1..=grid {
        let v = f(lo + step * k as f64);
        if v > best_v {
            best_v = v;
            best_k = k;
        }
    }
    let a = lo + step * (best_k - 1) as f64;
    let b = lo + step * (best_k + 1) as f64;
    golden_section_max(&f, a, b, x_tol)
}

/// Golden-section search for the maximum of a unimodal `f` on [a, b].
pub fn golden_section_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, x_tol: f64) -> Maximum {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > x_tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    Maximum { x, value: f(x) }
}
