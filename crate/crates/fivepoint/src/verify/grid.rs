//! Brute-force grid oracle for the simplex quadratic minimum. Independent
//! of the face-enumeration solver: it only evaluates λᵀAλ on barycentric
//! grid points, so the two can cross-check each other.

use nalgebra::DMatrix;

/// Minimum of λᵀAλ over the barycentric grid { k/r : Σk = r } of the
/// standard simplex in R^n (n = side of `a`). Exact on the grid; within
/// O(1/resolution²) of the true simplex minimum for symmetric `a`.
pub fn oracle_lss_grid(a: &DMatrix<f64>, resolution: usize) -> f64 {
    assert_eq!(a.nrows(), a.ncols());
    assert!(resolution >= 1);
    let n = a.nrows();
    if n == 0 {
        return 0.0;
    }
    let r = resolution;
    let mut counts = vec![0usize; n];
    let mut best = f64::INFINITY;
    // enumerate compositions of r into n nonnegative parts
    fn rec(a: &DMatrix<f64>, counts: &mut Vec<usize>, idx: usize, left: usize, r: usize, best: &mut f64) {
        let n = counts.len();
        if idx == n - 1 {
            counts[idx] = left;
            let lambda: Vec<f64> = counts.iter().map(|&k| k as f64 / r as f64).collect();
            let mut v = 0.0;
            for i in 0..n {
                for j in 0..n {
                    v += a[(i, j)] * lambda[i] * lambda[j];
                }
            }
            if v < *best {
                *best = v;
            }
            return;
        }
        for k in 0..=left {
            counts[idx] = k;
            rec(a, counts, idx + 1, left - k, r, best);
        }
    }
    rec(a, &mut counts, 0, r, r, &mut best);
    best
}
