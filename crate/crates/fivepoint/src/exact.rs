//! Exact-rational backing for the equality-sensitive decisions.
//!
//! Every finite f64 is a dyadic rational, so a distance matrix converts to
//! `BigRational` without loss. The combinatorial layers (tense-triple
//! detection, face-enumeration verdicts) can then be made bit-stable: an
//! equality is an equality, not a tolerance call. Only small dense systems
//! show up (at most 6x6), so plain fraction-free-ish Gauss-Jordan is plenty.

use crate::metric::Permutation;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub fn rational_from_f64(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite float")
}

pub fn rational_to_f64(x: &BigRational) -> f64 {
    // Good enough for reporting: numerator/denominator both fit the exponent
    // range we ever produce here (squares and small sums of input floats).
    let num = x.numer();
    let den = x.denom();
    bigint_to_f64(num) / bigint_to_f64(den)
}

fn bigint_to_f64(x: &BigInt) -> f64 {
    // BigInt -> f64 via string would lose precision control; use the
    // built-in conversion which rounds to nearest.
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::INFINITY)
}

/// Exact copy of a distance matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    n: usize,
    entries: Vec<BigRational>,
}

impl ExactMatrix {
    pub fn from_f64(d: &[Vec<f64>]) -> Self {
        let n = d.len();
        let entries = d
            .iter()
            .flat_map(|row| row.iter().map(|&x| rational_from_f64(x)))
            .collect();
        ExactMatrix { n, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.entries[i * self.n + j]
    }

    pub fn squared(&self, i: usize, j: usize) -> BigRational {
        let d = self.get(i, j);
        d * d
    }

    pub fn restrict(&self, idx: &[usize]) -> ExactMatrix {
        let n = idx.len();
        let mut entries = Vec::with_capacity(n * n);
        for &i in idx {
            for &j in idx {
                entries.push(self.get(i, j).clone());
            }
        }
        ExactMatrix { n, entries }
    }

    pub fn relabel(&self, sigma: &Permutation) -> ExactMatrix {
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(self.get(sigma.apply(i), sigma.apply(j)).clone());
            }
        }
        ExactMatrix { n, entries }
    }
}

/// Outcome of solving `A x = b` exactly.
#[derive(Debug, Clone)]
pub enum ExactSolve {
    Unique(Vec<BigRational>),
    /// Solution set is `particular + span(nullspace)`; empty `particular`
    /// means the system is inconsistent.
    Underdetermined {
        particular: Option<Vec<BigRational>>,
        nullspace: Vec<Vec<BigRational>>,
    },
}

/// Gauss-Jordan over the rationals. `a` is consumed as the working tableau.
pub fn solve_exact(mut a: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> ExactSolve {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut pivot_col_of_row = vec![usize::MAX; rows];
    let mut row = 0;
    for col in 0..cols {
        // pick any row with a nonzero entry in this column
        let Some(pr) = (row..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(row, pr);
        b.swap(row, pr);
        let inv = a[row][col].recip();
        for c in col..cols {
            let v = &a[row][c] * &inv;
            a[row][c] = v;
        }
        b[row] = &b[row] * &inv;
        for r in 0..rows {
            if r != row && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in col..cols {
                    let v = &a[r][c] - &f * &a[row][c];
                    a[r][c] = v;
                }
                let v = &b[r] - &f * &b[row];
                b[r] = v;
            }
        }
        pivot_col_of_row[row] = col;
        row += 1;
        if row == rows {
            break;
        }
    }
    let rank = row;
    // Inconsistent if a zero row has nonzero rhs.
    for r in rank..rows {
        if !b[r].is_zero() {
            return ExactSolve::Underdetermined {
                particular: None,
                nullspace: nullspace_from_rref(&a, &pivot_col_of_row[..rank], cols),
            };
        }
    }
    let is_pivot: Vec<bool> = {
        let mut v = vec![false; cols];
        for &c in &pivot_col_of_row[..rank] {
            v[c] = true;
        }
        v
    };
    let mut particular = vec![BigRational::zero(); cols];
    for r in 0..rank {
        particular[pivot_col_of_row[r]] = b[r].clone();
    }
    if rank == cols {
        return ExactSolve::Unique(particular);
    }
    let nullspace = nullspace_from_rref(&a, &pivot_col_of_row[..rank], cols);
    let _ = is_pivot;
    ExactSolve::Underdetermined {
        particular: Some(particular),
        nullspace,
    }
}

fn nullspace_from_rref(
    a: &[Vec<BigRational>],
    pivot_cols: &[usize],
    cols: usize,
) -> Vec<Vec<BigRational>> {
    let mut base = Vec::new();
    let is_pivot: Vec<bool> = {
        let mut v = vec![false; cols];
        for &c in pivot_cols {
            v[c] = true;
        }
        v
    };
    for free in 0..cols {
        if is_pivot[free] {
            continue;
        }
        let mut vec = vec![BigRational::zero(); cols];
        vec[free] = BigRational::one();
        for (r, &pc) in pivot_cols.iter().enumerate() {
            vec[pc] = -a[r][free].clone();
        }
        base.push(vec);
    }
    base
}

/// Maximize `min_i (p_i + t q_i)` over `t` in the interval where all
/// coordinates are nonnegative. Returns `(t*, value)` or None when the
/// feasible interval is empty. Exact: candidates are interval endpoints and
/// pairwise breakpoints of the lower envelope.
pub fn max_min_coordinate_on_segment(
    p: &[BigRational],
    q: &[BigRational],
) -> Option<(BigRational, BigRational)> {
    let mut t_lo: Option<BigRational> = None;
    let mut t_hi: Option<BigRational> = None;
    for (pi, qi) in p.iter().zip(q) {
        if qi.is_zero() {
            if pi.is_negative() {
                return None;
            }
        } else {
            let bound = -pi / qi;
            if qi.is_positive() {
                // p_i + t q_i >= 0  <=>  t >= -p_i/q_i
                if t_lo.as_ref().is_none_or(|t| *t < bound) {
                    t_lo = Some(bound);
                }
            } else if t_hi.as_ref().is_none_or(|t| *t > bound) {
                t_hi = Some(bound);
            }
        }
    }
    if let (Some(lo), Some(hi)) = (&t_lo, &t_hi) {
        if lo > hi {
            return None;
        }
    }
    let feasible = |t: &BigRational| -> bool {
        t_lo.as_ref().is_none_or(|lo| t >= lo) && t_hi.as_ref().is_none_or(|hi| t <= hi)
    };
    let eval = |t: &BigRational| -> BigRational {
        p.iter()
            .zip(q)
            .map(|(pi, qi)| pi + t * qi)
            .min()
            .expect("nonempty")
    };
    // The objective is concave piecewise linear; on a bounded interval the
    // maximum sits at an endpoint or a breakpoint of the lower envelope.
    // (Our callers always have Σ q_i = 0 with q ≠ 0, hence a bounded
    // interval; the unbounded fallback probes one step past the range.)
    let mut candidates: Vec<BigRational> = Vec::new();
    if let Some(lo) = &t_lo {
        candidates.push(lo.clone());
    }
    if let Some(hi) = &t_hi {
        candidates.push(hi.clone());
    }
    for i in 0..p.len() {
        for j in (i + 1)..p.len() {
            let dq = &q[i] - &q[j];
            if !dq.is_zero() {
                candidates.push((&p[j] - &p[i]) / dq);
            }
        }
    }
    if candidates.is_empty() {
        candidates.push(BigRational::zero());
    }
    if t_lo.is_none() {
        let lowest = candidates.iter().min().unwrap().clone();
        candidates.push(lowest - BigRational::one());
    }
    if t_hi.is_none() {
        let highest = candidates.iter().max().unwrap().clone();
        candidates.push(highest + BigRational::one());
    }
    candidates
        .into_iter()
        .filter(feasible)
        .map(|t| {
            let v = eval(&t);
            (t, v)
        })
        .max_by(|a, b| a.1.cmp(&b.1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(x: i64) -> BigRational {
        BigRational::from_integer(x.into())
    }

    #[test]
    fn f64_conversion_is_exact() {
        let x = 0.1 + 0.2;
        let q = rational_from_f64(x);
        assert_eq!(rational_to_f64(&q), x);
        assert_eq!(rational_from_f64(0.5), BigRational::new(1.into(), 2.into()));
    }

    #[test]
    fn solve_unique() {
        // x + y = 3, x - y = 1
        let a = vec![vec![r(1), r(1)], vec![r(1), r(-1)]];
        let b = vec![r(3), r(1)];
        match solve_exact(a, b) {
            ExactSolve::Unique(x) => {
                assert_eq!(x, vec![r(2), r(1)]);
            }
            other => panic!("expected unique, got {other:?}"),
        }
    }

    #[test]
    fn solve_underdetermined_and_inconsistent() {
        let a = vec![vec![r(1), r(1)], vec![r(2), r(2)]];
        match solve_exact(a.clone(), vec![r(2), r(4)]) {
            ExactSolve::Underdetermined {
                particular: Some(p),
                nullspace,
            } => {
                assert_eq!(&p[0] + &p[1], r(2));
                assert_eq!(nullspace.len(), 1);
                assert_eq!(&nullspace[0][0] + &nullspace[0][1], r(0));
            }
            other => panic!("unexpected {other:?}"),
        }
        match solve_exact(a, vec![r(2), r(5)]) {
            ExactSolve::Underdetermined { particular: None, .. } => {}
            other => panic!("expected inconsistent, got {other:?}"),
        }
    }

    #[test]
    fn segment_max_min() {
        // p + t q with p = (1, 0), q = (-1, 1): min coordinate maximized at
        // the crossing t = 1/2, value 1/2.
        let p = vec![r(1), r(0)];
        let q = vec![r(-1), r(1)];
        let (t, v) = max_min_coordinate_on_segment(&p, &q).unwrap();
        assert_eq!(t, BigRational::new(1.into(), 2.into()));
        assert_eq!(v, BigRational::new(1.into(), 2.into()));
    }
}
