//! Tense sets: subarrays whose comparison inequality is tight with strictly
//! positive weights. A nondegenerate tense array is rigid — it has a unique
//! Euclidean realization with the center in the interior of the convex hull
//! of the others — and the realization drives every constructive embedding.

use super::{lss_matrix, ComparisonError};
use crate::metric::FiniteMetric;
use crate::numeric::{dist, gram_to_points};
use crate::tolerances::Tolerances;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A tight comparison subarray. `points` are indices into the parent
/// metric; `realization` rows align with `points`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TenseSet {
    pub points: Vec<usize>,
    pub center: usize,
    /// A zero distance occurs among the members (the tightness is then
    /// carried by coincident points rather than geometry).
    pub degenerate: bool,
    pub realization: Vec<Vec<f64>>,
}

impl TenseSet {
    pub fn labels(&self, m: &FiniteMetric) -> Vec<String> {
        self.points.iter().map(|&i| m.label(i).to_string()).collect()
    }

    pub fn size(&self) -> usize {
        self.points.len()
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum TenseError {
    #[error(transparent)]
    Comparison(#[from] ComparisonError),
    #[error("comparison inequality fails for this subarray (min {min:e}); tense detection needs it to hold")]
    LssFails { min: f64 },
    #[error("equality held but no isometric realization was found: {0}")]
    RealizationMismatch(String),
}

/// All tense triples: ordered (a, b, c) with center b such that
/// d(a,b) + d(b,c) = d(a,c) within τ_tense·diameter. Each geometric triple
/// is reported once (a < c). With an exact matrix present the equality is
/// decided in rational arithmetic.
pub fn tense_triples(m: &FiniteMetric, tol: &Tolerances) -> Vec<TenseSet> {
    let n = m.n();
    let thr = tol.tense * m.diameter();
    let mut out = Vec::new();
    for b in 0..n {
        for a in 0..n {
            if a == b {
                continue;
            }
            for c in (a + 1)..n {
                if c == b {
                    continue;
                }
                let tight = match m.exact() {
                    Some(ex) => {
                        (ex.get(a, b) + ex.get(b, c) - ex.get(a, c)).is_zero()
                    }
                    None => (m.d(a, b) + m.d(b, c) - m.d(a, c)).abs() <= thr,
                };
                if tight {
                    let dab = m.d(a, b);
                    let dbc = m.d(b, c);
                    out.push(TenseSet {
                        points: vec![a, b, c],
                        center: b,
                        degenerate: dab == 0.0 || dbc == 0.0 || m.d(a, c) == 0.0,
                        realization: vec![vec![0.0], vec![dab], vec![dab + dbc]],
                    });
                }
            }
        }
    }
    out
}

/// Detect a nondegenerate tense array on (center, others): the simplex
/// minimum of the comparison form is 0 and attained with all λ_i ≥ λ_floor.
/// On success the isometric realization is built from the centered Gram
/// matrix and verified pair by pair. `Ok(None)` means "not tense".
pub fn tense_array(
    m: &FiniteMetric,
    center: usize,
    others: &[usize],
    tol: &Tolerances,
) -> Result<Option<TenseSet>, TenseError> {
    if others.len() < 3 || others.len() > 4 {
        return Err(ComparisonError::BadSubsetSize(others.len()).into());
    }
    let report = super::lss_with_center(m, center, others, tol)?;
    let scale = lss_matrix(m, center, others).amax().max(1e-300);
    if report.min_value < -tol.lss * scale {
        return Err(TenseError::LssFails {
            min: report.min_value,
        });
    }
    if !report.equality_with_positive_lambda {
        return Ok(None);
    }
    let lambda = report.argmin.clone();
    let realization = realize_array(m, center, others, &lambda, tol)?;
    Ok(Some(TenseSet {
        points: std::iter::once(center).chain(others.iter().cloned()).collect(),
        center,
        degenerate: false,
        realization,
    }))
}

/// Euclidean realization of a tight array: center at the origin, others
/// from the PSD factorization of the centered Gram matrix. Errors if the
/// factorization fails or any distance is off — equality without a
/// realization flags tolerance trouble and must never pass silently.
fn realize_array(
    m: &FiniteMetric,
    center: usize,
    others: &[usize],
    lambda: &[f64],
    tol: &Tolerances,
) -> Result<Vec<Vec<f64>>, TenseError> {
    let k = others.len();
    let g = nalgebra::DMatrix::from_fn(k, k, |i, j| {
        let (ri, rj) = (m.d(center, others[i]), m.d(center, others[j]));
        let dij = m.d(others[i], others[j]);
        0.5 * (ri * ri + rj * rj - dij * dij)
    });
    let gscale = g.amax().max(1e-300);
    let pts = gram_to_points(&g, tol.psd * gscale).ok_or_else(|| {
        TenseError::RealizationMismatch("centered Gram matrix is not positive semidefinite".into())
    })?;
    let dim = pts.first().map_or(1, Vec::len);
    let origin = vec![0.0; dim];
    let mut rows = vec![origin.clone()];
    rows.extend(pts);
    // verify: all pairs, not only radii
    let all: Vec<usize> = std::iter::once(center).chain(others.iter().cloned()).collect();
    let budget = tol.cfg * m.diameter().max(1e-300);
    for i in 0..all.len() {
        for j in (i + 1)..all.len() {
            let have = dist(&rows[i], &rows[j]);
            let want = m.d(all[i], all[j]);
            if (have - want).abs() > budget {
                return Err(TenseError::RealizationMismatch(format!(
                    "pair ({}, {}): realized {have}, metric {want}",
                    m.label(all[i]),
                    m.label(all[j])
                )));
            }
        }
    }
    // Claim check: the weighted barycenter of the others is the center.
    let mut bary = vec![0.0; dim];
    for (l, p) in lambda.iter().zip(&rows[1..]) {
        for (b, x) in bary.iter_mut().zip(p) {
            *b += l * x;
        }
    }
    if dist(&bary, &origin) > budget.max(tol.hull) {
        return Err(TenseError::RealizationMismatch(format!(
            "center is not the λ-barycenter of the others (offset {:e})",
            dist(&bary, &origin)
        )));
    }
    Ok(rows)
}

/// Everything tense in a metric, by size.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TenseStructure {
    pub triples: Vec<TenseSet>,
    /// 4-point tense sets (center + 3 others).
    pub fours: Vec<TenseSet>,
    /// 5-point tense sets (center + 4 others).
    pub fives: Vec<TenseSet>,
}

impl TenseStructure {
    pub fn has_large(&self) -> bool {
        !self.fours.is_empty() || !self.fives.is_empty()
    }
}

/// Scan all centers and subsets for tense sets. Arrays that fail to
/// realize (RealizationMismatch) propagate as errors; they indicate broken
/// tolerances, not a negative answer.
pub fn tense_structure(m: &FiniteMetric, tol: &Tolerances) -> Result<TenseStructure, TenseError> {
    let n = m.n();
    let triples = tense_triples(m, tol);
    let mut fours = Vec::new();
    let mut fives = Vec::new();
    for center in 0..n {
        let rest: Vec<usize> = (0..n).filter(|&i| i != center).collect();
        let k = rest.len();
        for mask in 1u32..(1 << k) {
            let size = mask.count_ones() as usize;
            if size != 3 && size != 4 {
                continue;
            }
            let subset: Vec<usize> = (0..k)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| rest[i])
                .collect();
            match tense_array(m, center, &subset, tol) {
                Ok(Some(t)) => {
                    if size == 3 {
                        fours.push(t);
                    } else {
                        fives.push(t);
                    }
                }
                Ok(None) | Err(TenseError::LssFails { .. }) => {}
                Err(e) => return Err(e),
            }
        }
    }
    Ok(TenseStructure {
        triples,
        fours,
        fives,
    })
}
