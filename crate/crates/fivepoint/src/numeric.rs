//! Small numeric building blocks shared by the solvers: dense linear
//! algebra wrappers, 1-D searches on monotone/unimodal functions, and a
//! vertex-enumeration solver for the tiny max-min-coordinate programs that
//! appear when a stationarity system is rank-deficient.

use nalgebra::{DMatrix, DVector};

/// Largest absolute entry, 0 for an empty slice.
pub fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, &x| m.max(x.abs()))
}

/// Solve `a x = b` by LU with full pivoting; `None` when singular.
pub fn lu_solve(a: &DMatrix<f64>, b: &DVector<f64>) -> Option<DVector<f64>> {
    let lu = a.clone().full_piv_lu();
    // full_piv_lu().solve returns Some even for nearly singular systems;
    // reject when the residual shows the system was not actually solved.
    let x = lu.solve(b)?;
    let resid = a * &x - b;
    let scale = a.amax().max(b.amax()).max(1.0);
    if resid.amax() <= 1e-8 * scale * (1.0 + x.amax()) {
        Some(x)
    } else {
        None
    }
}

/// Orthonormal basis of the (right) null space of `a`, via SVD. A singular
/// value counts as zero when ≤ `rel_tol` times the largest one.
pub fn nullspace(a: &DMatrix<f64>, rel_tol: f64) -> Vec<DVector<f64>> {
    let m = a.nrows().max(a.ncols());
    let padded = if a.nrows() < a.ncols() {
        // nalgebra's thin SVD of a wide matrix drops null directions; pad
        // with zero rows so V is square.
        let mut p = DMatrix::zeros(m, a.ncols());
        p.view_mut((0, 0), (a.nrows(), a.ncols())).copy_from(a);
        p
    } else {
        a.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let smax = svd.singular_values.iter().cloned().fold(0.0f64, f64::max);
    let thr = rel_tol * smax.max(1.0);
    let mut basis = Vec::new();
    for k in 0..v_t.nrows() {
        let sv = if k < svd.singular_values.len() {
            svd.singular_values[k]
        } else {
            0.0
        };
        if sv <= thr {
            basis.push(v_t.row(k).transpose());
        }
    }
    // Directions of exact dimension deficit (ncols > nrows) are already
    // covered by the padding above.
    basis
}

/// Minimize a unimodal function on [lo, hi] by ternary search.
/// Returns (argmin, min).
pub fn ternary_min(f: impl Fn(f64) -> f64, lo: f64, hi: f64, iters: usize) -> (f64, f64) {
    let (mut lo, mut hi) = (lo, hi);
    for _ in 0..iters {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if f(m1) <= f(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    let x = 0.5 * (lo + hi);
    (x, f(x))
}

/// Root of a continuous monotone function on [lo, hi] by bisection;
/// `f(lo)` and `f(hi)` must bracket zero (checked with a small slack).
/// Returns `None` when they do not.
pub fn bisect_root(f: impl Fn(f64) -> f64, lo: f64, hi: f64, iters: usize) -> Option<f64> {
    let (mut lo, mut hi) = (lo, hi);
    let (flo, fhi) = (f(lo), f(hi));
    if flo == 0.0 {
        return Some(lo);
    }
    if fhi == 0.0 {
        return Some(hi);
    }
    if flo.signum() == fhi.signum() {
        return None;
    }
    let sign_lo = flo.signum();
    for _ in 0..iters {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return Some(mid);
        }
        if fm.signum() == sign_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Maximize `min_i x_i(t)` over `x(t) = p + Σ_k t_k b_k`, a linear program
/// in (t, s) solved by enumerating basic feasible points (every subset of
/// m+1 tight coordinate constraints). Sound because the feasible region has
/// no lineality space whenever the b_k are linearly independent as
/// coordinate vectors, which our callers guarantee.
///
/// Returns (t*, attained min coordinate), or `None` when no vertex exists.
pub fn maximize_min_coordinate(p: &[f64], basis: &[Vec<f64>]) -> Option<(Vec<f64>, f64)> {
    let n = p.len();
    let m = basis.len();
    if m == 0 {
        let v = p.iter().cloned().fold(f64::INFINITY, f64::min);
        return Some((Vec::new(), v));
    }
    if m + 1 > n {
        return None;
    }
    let scale = max_abs(p).max(basis.iter().map(|b| max_abs(b)).fold(0.0, f64::max)).max(1.0);
    let slack = 1e-9 * scale;
    let coords = |t: &DVector<f64>| -> Vec<f64> {
        (0..n)
            .map(|i| p[i] + (0..m).map(|k| t[k] * basis[k][i]).sum::<f64>())
            .collect()
    };
    let mut best: Option<(Vec<f64>, f64)> = None;
    let mut subset: Vec<usize> = (0..=m).collect();
    loop {
        // Solve: for i in subset, Σ_k basis[k][i]·t_k − s = −p_i.
        let a = DMatrix::from_fn(m + 1, m + 1, |r, c| {
            let i = subset[r];
            if c < m {
                basis[c][i]
            } else {
                -1.0
            }
        });
        let b = DVector::from_fn(m + 1, |r, _| -p[subset[r]]);
        if let Some(y) = lu_solve(&a, &b) {
            let t = DVector::from_fn(m, |k, _| y[k]);
            let s = y[m];
            let x = coords(&t);
            if x.iter().all(|&xi| xi >= s - slack) {
                let attained = x.iter().cloned().fold(f64::INFINITY, f64::min);
                if best.as_ref().is_none_or(|(_, bv)| attained > *bv) {
                    best = Some((t.iter().cloned().collect(), attained));
                }
            }
        }
        // next (m+1)-subset of 0..n in lexicographic order
        let mut k = m + 1;
        loop {
            if k == 0 {
                return best;
            }
            k -= 1;
            if subset[k] < n - (m + 1 - k) {
                subset[k] += 1;
                for j in k + 1..=m {
                    subset[j] = subset[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Factor a Gram matrix into points: rows X_i with ⟨X_i, X_j⟩ = g_ij.
/// `None` if an eigenvalue is below `-floor`; eigenvalues in (−floor, 0]
/// are clamped, and dimensions with eigenvalue ≤ `floor` are dropped.
pub fn gram_to_points(g: &DMatrix<f64>, floor: f64) -> Option<Vec<Vec<f64>>> {
    assert_eq!(g.nrows(), g.ncols());
    let n = g.nrows();
    let sym = 0.5 * (g + g.transpose());
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[b]
            .partial_cmp(&eig.eigenvalues[a])
            .unwrap()
    });
    if let Some(&last) = order.last() {
        if eig.eigenvalues[last] < -floor {
            return None;
        }
    }
    let dims: Vec<usize> = order
        .into_iter()
        .filter(|&k| eig.eigenvalues[k] > floor)
        .collect();
    let mut pts = vec![vec![0.0; dims.len().max(1)]; n];
    for (c, &k) in dims.iter().enumerate() {
        let s = eig.eigenvalues[k].sqrt();
        for (i, pt) in pts.iter_mut().enumerate() {
            pt[c] = s * eig.eigenvectors[(i, k)];
        }
    }
    Some(pts)
}

/// Squared Euclidean distance between coordinate slices.
pub fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Euclidean distance between coordinate slices.
pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    dist2(a, b).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{dmatrix, dvector};

    #[test]
    fn lu_solve_and_singular() {
        let a = dmatrix![2.0, 1.0; 1.0, 3.0];
        let b = dvector![5.0, 10.0];
        let x = lu_solve(&a, &b).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-12 && (x[1] - 3.0).abs() < 1e-12);
        let s = dmatrix![1.0, 2.0; 2.0, 4.0];
        assert!(lu_solve(&s, &dvector![1.0, 0.0]).is_none());
    }

    #[test]
    fn nullspace_of_rank_one() {
        let a = dmatrix![1.0, 2.0; 2.0, 4.0];
        let ns = nullspace(&a, 1e-12);
        assert_eq!(ns.len(), 1);
        let v = &ns[0];
        assert!((a * v).amax() < 1e-12);
        assert!((v.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn nullspace_of_wide_matrix() {
        // single equation x + y + z = 0 has a 2-dimensional null space
        let a = DMatrix::from_row_slice(1, 3, &[1.0, 1.0, 1.0]);
        let ns = nullspace(&a, 1e-12);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!((&a * v).amax() < 1e-12);
        }
    }

    #[test]
    fn ternary_finds_parabola_vertex() {
        let (x, fx) = ternary_min(|x| (x - 1.25) * (x - 1.25) + 3.0, -10.0, 10.0, 200);
        // argmin accuracy near a smooth minimum is limited by the f64
        // plateau of f, around sqrt(eps)·scale
        assert!((x - 1.25).abs() < 1e-7);
        assert!((fx - 3.0).abs() < 1e-12);
    }

    #[test]
    fn bisect_monotone() {
        let r = bisect_root(|x| x * x * x - 2.0, 0.0, 2.0, 100).unwrap();
        assert!((r - 2.0f64.powf(1.0 / 3.0)).abs() < 1e-12);
        assert!(bisect_root(|x| x + 10.0, 0.0, 1.0, 10).is_none());
    }

    #[test]
    fn max_min_coordinate_centers_a_segment() {
        // x(t) = (t, 1 - t): max-min at t = 1/2.
        let p = [0.0, 1.0];
        let basis = vec![vec![1.0, -1.0]];
        let (t, v) = maximize_min_coordinate(&p, &basis).unwrap();
        assert!((t[0] - 0.5).abs() < 1e-9);
        assert!((v - 0.5).abs() < 1e-9);
    }

    #[test]
    fn max_min_coordinate_two_directions() {
        // x(t) = (t1, t2, 1 − t1 − t2): optimum at the barycenter.
        let p = [0.0, 0.0, 1.0];
        let basis = vec![vec![1.0, 0.0, -1.0], vec![0.0, 1.0, -1.0]];
        let (t, v) = maximize_min_coordinate(&p, &basis).unwrap();
        assert!((t[0] - 1.0 / 3.0).abs() < 1e-9);
        assert!((t[1] - 1.0 / 3.0).abs() < 1e-9);
        assert!((v - 1.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn gram_factorization_round_trips() {
        // Gram matrix of (0,0), (1,0), (0,2)
        let pts = [vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 2.0]];
        let g = DMatrix::from_fn(3, 3, |i, j| {
            pts[i].iter().zip(&pts[j]).map(|(a, b)| a * b).sum::<f64>()
        });
        let got = gram_to_points(&g, 1e-10).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let dot: f64 = got[i].iter().zip(&got[j]).map(|(a, b)| a * b).sum();
                assert!((dot - g[(i, j)]).abs() < 1e-9);
            }
        }
        // indefinite matrix is rejected
        let bad = dmatrix![1.0, 2.0; 2.0, 1.0];
        assert!(gram_to_points(&bad, 1e-10).is_none());
    }
}
