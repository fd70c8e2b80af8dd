//! Comparison inequalities: for a center p and points x_1..x_k, the matrix
//! a_ij = d(p,x_i)² + d(p,x_j)² − d(x_i,x_j)² must satisfy Σ a_ij λ_i λ_j ≥ 0
//! for all λ on the standard simplex. A metric on ≤ 5 points embeds into a
//! complete nonnegatively curved length space exactly when every such
//! inequality (over all centers and subsets) holds.
//!
//! The minimum of λᵀAλ over the simplex is computed exactly in structure by
//! face enumeration: on each face the minimizer satisfies the stationarity
//! system A_S λ = ν·1, Σλ = 1, a bordered linear solve. Rank-deficient faces
//! cannot hide the minimum — along a null direction (δ, δν) of the bordered
//! system the value changes linearly (by 2tδν·Σλ = 2tδν), so the face
//! minimum is attained on an enumerated subface; singular faces are only
//! revisited to find the *most interior* stationary point, which witnesses
//! equality with positive weights (a tense array).

pub mod config;
pub mod perturb;
pub mod tense;

pub use config::{comparison_config, ComparisonConfiguration};
pub use perturb::{perturbation_space, PerturbationSpace};
pub use tense::{
    tense_array, tense_structure, tense_triples, TenseError, TenseSet, TenseStructure,
};

use crate::exact::{self, ExactSolve};
use crate::metric::FiniteMetric;
use crate::numeric;
use crate::tolerances::Tolerances;
use nalgebra::{DMatrix, DVector};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ComparisonError {
    #[error("point index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("center {0} repeated in others")]
    CenterInOthers(usize),
    #[error("duplicate point index {0}")]
    DuplicatePoint(usize),
    #[error("need between 1 and 4 other points, got {0}")]
    BadSubsetSize(usize),
}

/// Result of one comparison inequality test.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LssReport {
    pub center: String,
    pub others: Vec<String>,
    /// a_ij = d(p,x_i)² + d(p,x_j)² − d(x_i,x_j)²
    pub a: Vec<Vec<f64>>,
    pub min_value: f64,
    /// Argmin on the simplex; among near-minimal points the most interior
    /// one (max of the smallest coordinate).
    pub argmin: Vec<f64>,
    pub holds: bool,
    /// Minimum is 0 and attained with every λ_i ≥ λ_floor — the signature
    /// of a nondegenerate tense array.
    pub equality_with_positive_lambda: bool,
    /// Faces whose stationarity system was rank-deficient (reported, not
    /// fatal; their minima live on enumerated subfaces).
    pub degenerate_faces: Vec<Vec<String>>,
    /// Verdicts (`holds`, equality) decided in rational arithmetic.
    pub exact: bool,
    /// Index of the center in the metric (labels above are for display).
    #[serde(skip)]
    pub center_idx: usize,
    /// Indices of the other points, in report order.
    #[serde(skip)]
    pub others_idx: Vec<usize>,
}

/// All comparison inequalities of a metric.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LssAll {
    pub reports: Vec<LssReport>,
    pub holds: bool,
}

impl LssAll {
    /// First failing inequality, if any.
    pub fn witness(&self) -> Option<&LssReport> {
        self.reports.iter().find(|r| !r.holds)
    }
}

/// The comparison matrix for `center` against `others`.
pub fn lss_matrix(m: &FiniteMetric, center: usize, others: &[usize]) -> DMatrix<f64> {
    let k = others.len();
    DMatrix::from_fn(k, k, |i, j| {
        let (xi, xj) = (others[i], others[j]);
        let rp = m.d(center, xi);
        let rq = m.d(center, xj);
        let dij = m.d(xi, xj);
        rp * rp + rq * rq - dij * dij
    })
}

fn lss_matrix_exact(m: &FiniteMetric, center: usize, others: &[usize]) -> Option<Vec<Vec<BigRational>>> {
    let ex = m.exact()?;
    let k = others.len();
    let mut a = vec![vec![BigRational::zero(); k]; k];
    for i in 0..k {
        for j in 0..k {
            a[i][j] = ex.squared(center, others[i]) + ex.squared(center, others[j])
                - ex.squared(others[i], others[j]);
        }
    }
    Some(a)
}

/// Minimizes the quadratic form `λᵀ A λ` over the standard simplex
/// (λ_i ≥ 0, Σλ_i = 1) by face enumeration, returning the minimum value
/// together with one minimizer.
///
/// `a` must be square and symmetric; the argmin has length `a.nrows()`.
pub fn simplex_minimum(a: &DMatrix<f64>, tol: &Tolerances) -> (f64, Vec<f64>) {
    let sm = simplex_min(a, tol);
    (sm.min_value, sm.argmin)
}

/// Outcome of the float simplex minimization.
#[derive(Debug, Clone)]
pub(crate) struct SimplexMin {
    pub min_value: f64,
    pub argmin: Vec<f64>,
    pub degenerate_faces: Vec<Vec<usize>>,
}

fn embed_face(k: usize, face: &[usize], lam: &[f64]) -> Vec<f64> {
    let mut full = vec![0.0; k];
    for (slot, &i) in face.iter().enumerate() {
        full[i] = lam[slot];
    }
    full
}

fn clamp_simplex(lam: &mut [f64]) {
    for x in lam.iter_mut() {
        if *x < 0.0 {
            *x = 0.0;
        }
    }
    let s: f64 = lam.iter().sum();
    if s > 0.0 {
        for x in lam.iter_mut() {
            *x /= s;
        }
    }
}

fn quad_value(a: &DMatrix<f64>, lam: &[f64]) -> f64 {
    let k = lam.len();
    let mut v = 0.0;
    for i in 0..k {
        for j in 0..k {
            v += a[(i, j)] * lam[i] * lam[j];
        }
    }
    v
}

fn bordered_system(a: &DMatrix<f64>, face: &[usize]) -> (DMatrix<f64>, DVector<f64>) {
    let s = face.len();
    let b = DMatrix::from_fn(s + 1, s + 1, |r, c| {
        if r < s && c < s {
            a[(face[r], face[c])]
        } else if r == s && c == s {
            0.0
        } else if c == s {
            -1.0
        } else {
            1.0
        }
    });
    let mut rhs = DVector::zeros(s + 1);
    rhs[s] = 1.0;
    (b, rhs)
}

fn faces_of(k: usize, min_size: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for mask in 1u32..(1 << k) {
        if (mask.count_ones() as usize) < min_size {
            continue;
        }
        out.push((0..k).filter(|i| mask & (1 << i) != 0).collect());
    }
    out
}

/// Minimize λᵀAλ over the standard simplex by face enumeration.
pub(crate) fn simplex_min(a: &DMatrix<f64>, tol: &Tolerances) -> SimplexMin {
    let k = a.nrows();
    let scale = a.amax().max(1e-300);
    let mut candidates: Vec<Vec<f64>> = Vec::new();
    let mut degenerate_faces = Vec::new();
    for i in 0..k {
        candidates.push(embed_face(k, &[i], &[1.0]));
    }
    for face in faces_of(k, 2) {
        let (b, rhs) = bordered_system(a, &face);
        if let Some(y) = numeric::lu_solve(&b, &rhs) {
            let lam: Vec<f64> = (0..face.len()).map(|i| y[i]).collect();
            if lam.iter().all(|&x| x >= -tol.lss) {
                let mut full = embed_face(k, &face, &lam);
                clamp_simplex(&mut full);
                candidates.push(full);
            }
        } else {
            degenerate_faces.push(face.clone());
            if face.len() == k {
                // Stationary points form an affine set; keep the most
                // interior one as the equality witness.
                if let Some(lam) = interior_stationary_float(a, &b, &rhs) {
                    if lam.iter().all(|&x| x >= -tol.lss) {
                        let mut full = lam;
                        clamp_simplex(&mut full);
                        candidates.push(full);
                    }
                }
            }
        }
    }
    let values: Vec<f64> = candidates.iter().map(|c| quad_value(a, c)).collect();
    let (mut best, mut best_v) = (0, f64::INFINITY);
    for (i, &v) in values.iter().enumerate() {
        if v < best_v {
            best = i;
            best_v = v;
        }
    }
    // Near-ties break toward the interior: the witness matters for tense
    // detection, the value does not change within the tolerance band.
    let tie = tol.tense * scale;
    for (i, &v) in values.iter().enumerate() {
        if v <= best_v + tie {
            let mi = candidates[i].iter().cloned().fold(f64::INFINITY, f64::min);
            let mb = candidates[best].iter().cloned().fold(f64::INFINITY, f64::min);
            if mi > mb {
                best = i;
            }
        }
    }
    SimplexMin {
        min_value: best_v,
        argmin: candidates[best].clone(),
        degenerate_faces,
    }
}

/// Most interior stationary point of a singular full-face system: least
/// squares particular solution plus max-min-coordinate over the null space.
fn interior_stationary_float(
    a: &DMatrix<f64>,
    b: &DMatrix<f64>,
    rhs: &DVector<f64>,
) -> Option<Vec<f64>> {
    let k = a.nrows();
    let svd = b.clone().svd(true, true);
    let y = svd.solve(rhs, 1e-12 * b.amax().max(1.0)).ok()?;
    let resid = (b * &y - rhs).amax();
    if resid > 1e-8 * b.amax().max(1.0) {
        return None; // inconsistent: no stationary point on this face
    }
    let null = numeric::nullspace(b, 1e-10);
    let p: Vec<f64> = (0..k).map(|i| y[i]).collect();
    if null.is_empty() {
        return Some(p);
    }
    let basis: Vec<Vec<f64>> = null.iter().map(|v| (0..k).map(|i| v[i]).collect()).collect();
    let (t, _) = numeric::maximize_min_coordinate(&p, &basis)?;
    Some(
        (0..k)
            .map(|i| p[i] + basis.iter().zip(&t).map(|(bv, tk)| bv[i] * tk).sum::<f64>())
            .collect(),
    )
}

pub(crate) struct ExactSimplexMin {
    pub min_value: BigRational,
    /// Most interior candidate attaining the minimum exactly, if any.
    pub equality_witness: Option<Vec<BigRational>>,
    /// Equality witness had to be estimated in floats (doubly degenerate
    /// stationary set); `equality_witness` is then None.
    pub float_fallback_witness: Option<Vec<f64>>,
}

fn quad_value_exact(a: &[Vec<BigRational>], lam: &[BigRational]) -> BigRational {
    let k = lam.len();
    let mut v = BigRational::zero();
    for i in 0..k {
        for j in 0..k {
            v += &a[i][j] * &lam[i] * &lam[j];
        }
    }
    v
}

/// Exact face enumeration over the rationals.
pub(crate) fn simplex_min_exact(a: &[Vec<BigRational>]) -> ExactSimplexMin {
    let k = a.len();
    let mut candidates: Vec<Vec<BigRational>> = Vec::new();
    let mut float_witness: Option<Vec<f64>> = None;
    for i in 0..k {
        let mut lam = vec![BigRational::zero(); k];
        lam[i] = BigRational::one();
        candidates.push(lam);
    }
    for face in faces_of(k, 2) {
        let s = face.len();
        let mut b = vec![vec![BigRational::zero(); s + 1]; s + 1];
        let mut rhs = vec![BigRational::zero(); s + 1];
        for r in 0..s {
            for c in 0..s {
                b[r][c] = a[face[r]][face[c]].clone();
            }
            b[r][s] = -BigRational::one();
            b[s][r] = BigRational::one();
        }
        rhs[s] = BigRational::one();
        match exact::solve_exact(b, rhs) {
            ExactSolve::Unique(y) => {
                let lam = &y[..s];
                if lam.iter().all(|x| !x.is_negative()) {
                    let mut full = vec![BigRational::zero(); k];
                    for (slot, &i) in face.iter().enumerate() {
                        full[i] = lam[slot].clone();
                    }
                    candidates.push(full);
                }
            }
            ExactSolve::Underdetermined {
                particular: Some(part),
                nullspace,
            } if s == k => {
                // only the full face needs an interior witness; subfaces
                // cover the minimum itself
                if nullspace.len() == 1 {
                    let p: Vec<BigRational> = part[..s].to_vec();
                    let q: Vec<BigRational> = nullspace[0][..s].to_vec();
                    if let Some((t, _)) = exact::max_min_coordinate_on_segment(&p, &q) {
                        let lam: Vec<BigRational> =
                            (0..s).map(|i| &p[i] + &t * &q[i]).collect();
                        if lam.iter().all(|x| !x.is_negative()) {
                            candidates.push(lam);
                        }
                    }
                } else {
                    let pf: Vec<f64> = part[..s]
                        .iter()
                        .map(|x| x.to_f64().unwrap_or(0.0))
                        .collect();
                    let bf: Vec<Vec<f64>> = nullspace
                        .iter()
                        .map(|v| v[..s].iter().map(|x| x.to_f64().unwrap_or(0.0)).collect())
                        .collect();
                    if let Some((t, _)) = numeric::maximize_min_coordinate(&pf, &bf) {
                        let lam: Vec<f64> = (0..s)
                            .map(|i| {
                                pf[i] + bf.iter().zip(&t).map(|(bv, tk)| bv[i] * tk).sum::<f64>()
                            })
                            .collect();
                        float_witness = Some(lam);
                    }
                }
            }
            _ => {}
        }
    }
    let min_value = candidates
        .iter()
        .map(|lam| quad_value_exact(a, lam))
        .min()
        .expect("vertices always present");
    let equality_witness = candidates
        .iter()
        .filter(|lam| quad_value_exact(a, lam) == min_value)
        .max_by(|x, y| {
            let mx = x.iter().min().unwrap();
            let my = y.iter().min().unwrap();
            mx.cmp(my)
        })
        .cloned();
    ExactSimplexMin {
        min_value,
        equality_witness,
        float_fallback_witness: float_witness,
    }
}

fn check_subset(m: &FiniteMetric, center: usize, others: &[usize]) -> Result<(), ComparisonError> {
    if center >= m.n() {
        return Err(ComparisonError::IndexOutOfRange(center));
    }
    if others.is_empty() || others.len() > 4 {
        return Err(ComparisonError::BadSubsetSize(others.len()));
    }
    let mut seen = vec![false; m.n()];
    seen[center] = true;
    for &i in others {
        if i >= m.n() {
            return Err(ComparisonError::IndexOutOfRange(i));
        }
        if i == center {
            return Err(ComparisonError::CenterInOthers(i));
        }
        if seen[i] {
            return Err(ComparisonError::DuplicatePoint(i));
        }
        seen[i] = true;
    }
    Ok(())
}

/// Test one comparison inequality: center against the listed points.
pub fn lss_with_center(
    m: &FiniteMetric,
    center: usize,
    others: &[usize],
    tol: &Tolerances,
) -> Result<LssReport, ComparisonError> {
    check_subset(m, center, others)?;
    let a = lss_matrix(m, center, others);
    let scale = a.amax();
    let sm = simplex_min(&a, tol);
    let mut min_value = sm.min_value;
    let mut argmin = sm.argmin;
    let mut holds = min_value >= -tol.lss * scale;
    let mut equality = holds
        && min_value.abs() <= tol.tense * scale.max(1e-300)
        && argmin.iter().all(|&x| x >= tol.lambda_floor);
    let mut is_exact = false;
    if let Some(ax) = lss_matrix_exact(m, center, others) {
        let ex = simplex_min_exact(&ax);
        is_exact = true;
        holds = !ex.min_value.is_negative();
        min_value = ex.min_value.to_f64().unwrap_or(min_value);
        equality = false;
        if holds && ex.min_value.is_zero() {
            if let Some(w) = &ex.equality_witness {
                equality = w.iter().all(|x| x.is_positive());
                argmin = w.iter().map(|x| x.to_f64().unwrap_or(0.0)).collect();
            } else if let Some(w) = &ex.float_fallback_witness {
                equality = w.iter().all(|&x| x >= tol.lambda_floor);
                argmin = w.clone();
            }
        } else if let Some(w) = &ex.equality_witness {
            argmin = w.iter().map(|x| x.to_f64().unwrap_or(0.0)).collect();
        }
    }
    Ok(LssReport {
        center: m.label(center).to_string(),
        others: others.iter().map(|&i| m.label(i).to_string()).collect(),
        a: (0..others.len())
            .map(|i| (0..others.len()).map(|j| a[(i, j)]).collect())
            .collect(),
        min_value,
        argmin,
        holds,
        equality_with_positive_lambda: equality,
        degenerate_faces: sm
            .degenerate_faces
            .iter()
            .map(|f| f.iter().map(|&i| m.label(others[i]).to_string()).collect())
            .collect(),
        exact: is_exact,
        center_idx: center,
        others_idx: others.to_vec(),
    })
}

/// Every comparison inequality: all centers, all subsets of the remaining
/// points of size ≤ 4. Overall verdict is the conjunction.
pub fn lss_all(m: &FiniteMetric, tol: &Tolerances) -> Result<LssAll, ComparisonError> {
    let n = m.n();
    let mut reports = Vec::new();
    for center in 0..n {
        let rest: Vec<usize> = (0..n).filter(|&i| i != center).collect();
        let k = rest.len();
        for mask in 1u32..(1 << k) {
            if mask.count_ones() > 4 {
                continue;
            }
            let subset: Vec<usize> = (0..k).filter(|i| mask & (1 << i) != 0).map(|i| rest[i]).collect();
            reports.push(lss_with_center(m, center, &subset, tol)?);
        }
    }
    let holds = reports.iter().all(|r| r.holds);
    Ok(LssAll { reports, holds })
}
