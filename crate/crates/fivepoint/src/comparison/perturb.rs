//! Linearized perturbations of a metric that keep every tense triple tense.
//!
//! Work in the space of squared-distance perturbations δ_ij (one coordinate
//! per unordered pair, n(n−1)/2 ≤ 10 dimensions — isomorphic to quadratic
//! forms on R^{n−1} via the associated-form map, which is linear in the
//! squared distances). A tense triple stays tense to first order exactly
//! when its three distances stay proportional, which is two independent
//! linear conditions on (δ_ab, δ_bc, δ_ac). The common-scaling direction
//! δ = d² always survives.

use super::tense::TenseSet;
use crate::form::QuadraticForm;
use crate::metric::FiniteMetric;
use crate::numeric::nullspace;
use crate::tolerances::Tolerances;
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

/// Basis of the admissible perturbation directions.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PerturbationSpace {
    /// Pairs (i, j), i < j, indexing the coordinates of the directions.
    pub pairs: Vec<(usize, usize)>,
    /// Orthonormal basis vectors in squared-distance coordinates.
    pub directions: Vec<Vec<f64>>,
    /// The same directions as quadratic forms on R^{n−1} (associated-form
    /// image with the identity ordering).
    pub forms: Vec<QuadraticForm>,
    pub dimension: usize,
}

fn pair_index(pairs: &[(usize, usize)], a: usize, b: usize) -> usize {
    let key = if a < b { (a, b) } else { (b, a) };
    pairs.iter().position(|&p| p == key).expect("pair exists")
}

/// Compute the subspace of squared-distance perturbations preserving the
/// proportionality of every listed tense triple.
pub fn perturbation_space(
    m: &FiniteMetric,
    triples: &[TenseSet],
    _tol: &Tolerances,
) -> PerturbationSpace {
    let n = m.n();
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            pairs.push((i, j));
        }
    }
    let np = pairs.len();
    let sq = |i: usize, j: usize| m.d(i, j) * m.d(i, j);
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for t in triples {
        assert_eq!(t.points.len(), 3, "perturbation_space expects triples");
        let (a, b, c) = (t.points[0], t.points[1], t.points[2]);
        debug_assert_eq!(t.center, b);
        // proportional squared distances, linearized:
        //   s2·δ1 − s1·δ2 = 0 and s3·δ2 − s2·δ3 = 0
        // where 1 = (a,b), 2 = (b,c), 3 = (a,c). A zero distance pins its
        // own perturbation to zero instead.
        let trio = [(a, b), (b, c), (a, c)];
        let s: Vec<f64> = trio.iter().map(|&(x, y)| sq(x, y)).collect();
        let idx: Vec<usize> = trio.iter().map(|&(x, y)| pair_index(&pairs, x, y)).collect();
        let mut count = 0;
        for k in 0..3 {
            if s[k] == 0.0 {
                let mut row = vec![0.0; np];
                row[idx[k]] = 1.0;
                rows.push(row);
                count += 1;
            }
        }
        // chain the nonzero ones
        let nz: Vec<usize> = (0..3).filter(|&k| s[k] != 0.0).collect();
        for w in nz.windows(2) {
            let (k1, k2) = (w[0], w[1]);
            let mut row = vec![0.0; np];
            row[idx[k1]] = s[k2];
            row[idx[k2]] = -s[k1];
            rows.push(row);
            count += 1;
        }
        debug_assert!(count >= 2);
    }
    let directions: Vec<Vec<f64>> = if rows.is_empty() {
        (0..np)
            .map(|i| {
                let mut e = vec![0.0; np];
                e[i] = 1.0;
                e
            })
            .collect()
    } else {
        let a = DMatrix::from_fn(rows.len(), np, |r, c| rows[r][c]);
        nullspace(&a, 1e-10)
            .into_iter()
            .map(|v| v.iter().cloned().collect())
            .collect()
    };
    let forms = directions
        .iter()
        .map(|dir| direction_to_form(m, &pairs, dir))
        .collect();
    PerturbationSpace {
        dimension: directions.len(),
        pairs,
        directions,
        forms,
    }
}

/// Associated-form image of a squared-distance perturbation (identity
/// ordering, origin at the last point): M[i][j] = (δ_{i,n} + δ_{j,n} − δ_{ij})/2.
fn direction_to_form(m: &FiniteMetric, pairs: &[(usize, usize)], dir: &[f64]) -> QuadraticForm {
    let n = m.n();
    let get = |i: usize, j: usize| -> f64 {
        if i == j {
            0.0
        } else {
            dir[pair_index(pairs, i, j)]
        }
    };
    let mat = DMatrix::from_fn(n - 1, n - 1, |i, j| {
        0.5 * (get(i, n - 1) + get(j, n - 1) - get(i, j))
    });
    QuadraticForm::from_matrix(&mat)
}

/// Component of `v` inside the span of the (orthonormal) directions.
pub fn project_onto(space: &PerturbationSpace, v: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; v.len()];
    for dir in &space.directions {
        let dot: f64 = dir.iter().zip(v).map(|(a, b)| a * b).sum();
        for (o, d) in out.iter_mut().zip(dir) {
            *o += dot * d;
        }
    }
    out
}
