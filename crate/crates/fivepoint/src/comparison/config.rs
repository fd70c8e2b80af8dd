//! The comparison-configuration solver: place the center at the origin and
//! each other point on its exact radius sphere, then minimize the total
//! squared shortfall of the mutual distances. A zero of the objective is a
//! configuration with exact center radii and non-shrunk mutual distances —
//! the geometric content of the comparison inequality for this center.

use super::{check_subset, ComparisonError};
use crate::metric::FiniteMetric;
use crate::numeric::{dist, gram_to_points};
use crate::tolerances::Tolerances;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Best configuration found for one center.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComparisonConfiguration {
    pub center_label: String,
    pub other_labels: Vec<String>,
    /// Always the origin; kept explicit for serialization.
    pub center: Vec<f64>,
    /// x̃_i on the sphere of radius d(p, x_i), one row per other point.
    pub points: Vec<Vec<f64>>,
    /// Final objective value Σ_{i<j} min(|x̃_i−x̃_j| − d_ij, 0)².
    pub residual: f64,
    pub iterations: u32,
    pub hit_iteration_cap: bool,
}

/// Penalty for a shrunk pair: φ(t) = min(t, 0)². C¹ with Lipschitz
/// gradient, zero exactly on the admissible side.
fn phi(t: f64) -> f64 {
    if t < 0.0 {
        t * t
    } else {
        0.0
    }
}

fn objective(x: &[Vec<f64>], d: &[Vec<f64>]) -> f64 {
    let k = x.len();
    let mut s = 0.0;
    for i in 0..k {
        for j in (i + 1)..k {
            s += phi(dist(&x[i], &x[j]) - d[i][j]);
        }
    }
    s
}

/// ∂s/∂x̃_i; zero rows for pairs at exactly coincident points (the penalty
/// is then flat in every direction that keeps them coincident).
fn gradient(x: &[Vec<f64>], d: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let k = x.len();
    let dim = x.first().map_or(0, Vec::len);
    let mut g = vec![vec![0.0; dim]; k];
    for i in 0..k {
        for j in (i + 1)..k {
            let r = dist(&x[i], &x[j]);
            let short = r - d[i][j];
            if short < 0.0 && r > 1e-300 {
                let coef = 2.0 * short / r;
                for c in 0..dim {
                    let diff = x[i][c] - x[j][c];
                    g[i][c] += coef * diff;
                    g[j][c] -= coef * diff;
                }
            }
        }
    }
    g
}

fn project_to_sphere(x: &mut [f64], radius: f64) {
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if radius == 0.0 {
        x.iter_mut().for_each(|v| *v = 0.0);
    } else if norm < 1e-300 {
        x.iter_mut().for_each(|v| *v = 0.0);
        x[0] = radius;
    } else {
        let s = radius / norm;
        x.iter_mut().for_each(|v| *v *= s);
    }
}

struct Descent {
    x: Vec<Vec<f64>>,
    value: f64,
    iterations: u32,
    capped: bool,
}

fn project_all(x: &mut [Vec<f64>], radii: &[f64]) {
    for (xi, &r) in x.iter_mut().zip(radii) {
        project_to_sphere(xi, r);
    }
}

fn descend(
    mut x: Vec<Vec<f64>>,
    radii: &[f64],
    d: &[Vec<f64>],
    scale: f64,
    max_iters: u32,
) -> Descent {
    project_all(&mut x, radii);
    let mut value = objective(&x, d);
    let floor = 1e-26 * scale * scale * scale * scale; // squared-squared units
    let mut iterations = 0;
    while iterations < max_iters {
        if value <= floor {
            break;
        }
        let g = gradient(&x, d);
        let gnorm2: f64 = g.iter().flatten().map(|v| v * v).sum();
        if gnorm2 <= (1e-13 * scale * scale * scale).powi(2) {
            break;
        }
        let mut step = 1.0;
        let mut improved = false;
        for _ in 0..60 {
            let mut trial = x.clone();
            for (ti, gi) in trial.iter_mut().zip(&g) {
                for (tc, gc) in ti.iter_mut().zip(gi) {
                    *tc -= step * gc;
                }
            }
            project_all(&mut trial, radii);
            let tv = objective(&trial, d);
            if tv < value - 1e-4 * step * gnorm2 {
                x = trial;
                value = tv;
                improved = true;
                break;
            }
            step *= 0.5;
        }
        iterations += 1;
        if !improved {
            break; // stationary to machine precision
        }
    }
    Descent {
        x,
        value,
        iterations,
        capped: iterations >= max_iters,
    }
}

/// Gram-matrix warm start: exact whenever the centered form is positive
/// semidefinite (the Euclidean case); otherwise the nearest psd
/// approximation, clipping negative eigenvalues, which still lands close to
/// feasibility.
fn psd_start(radii: &[f64], d: &[Vec<f64>], dim: usize) -> Option<Vec<Vec<f64>>> {
    let k = radii.len();
    let g = nalgebra::DMatrix::from_fn(k, k, |i, j| {
        0.5 * (radii[i] * radii[i] + radii[j] * radii[j] - d[i][j] * d[i][j])
    });
    let scale = g.amax().max(1e-300);
    let pts = gram_to_points(&g, 1e-9 * scale).or_else(|| {
        let eig = nalgebra::SymmetricEigen::new(g);
        let mut cols: Vec<usize> = (0..k).collect();
        cols.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
        let mut pts = vec![vec![0.0; k]; k];
        for (c, &col) in cols.iter().enumerate() {
            let lam = eig.eigenvalues[col].max(0.0);
            let s = lam.sqrt();
            for r in 0..k {
                pts[r][c] = s * eig.eigenvectors[(r, col)];
            }
        }
        Some(pts)
    })?;
    let mut out = vec![vec![0.0; dim]; k];
    for (row, p) in out.iter_mut().zip(&pts) {
        for (c, &v) in p.iter().enumerate().take(dim) {
            row[c] = v;
        }
    }
    Some(out)
}

/// Gauss-Newton polish: drive the active pair constraints and the radius
/// constraints to equality as a nonlinear least-squares system. The hinge
/// penalty's gradient vanishes quadratically at feasibility, so plain
/// descent crawls on the last few digits; Newton steps finish the job.
fn polish(x: &mut [Vec<f64>], radii: &[f64], d: &[Vec<f64>], scale: f64) {
    let k = x.len();
    let dim = x.first().map_or(0, Vec::len);
    let n = k * dim;
    for _ in 0..60 {
        let mut worst = 0.0f64;
        for i in 0..k {
            for j in (i + 1)..k {
                let s = dist(&x[i], &x[j]) - d[i][j];
                if s < 0.0 {
                    worst = worst.max(-s);
                }
            }
        }
        let band = (10.0 * worst).max(1e-9 * scale);
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        for i in 0..k {
            for j in (i + 1)..k {
                if dist(&x[i], &x[j]) - d[i][j] < band {
                    pairs.push((i, j));
                }
            }
        }
        let rows = pairs.len() + k;
        let residual = |x: &[Vec<f64>]| -> nalgebra::DVector<f64> {
            let mut r = nalgebra::DVector::zeros(rows);
            for (row, &(i, j)) in pairs.iter().enumerate() {
                r[row] = dist(&x[i], &x[j]) - d[i][j];
            }
            for i in 0..k {
                let ni = x[i].iter().map(|v| v * v).sum::<f64>().sqrt();
                r[pairs.len() + i] = ni - radii[i];
            }
            r
        };
        let res = residual(x);
        let rn = res.norm();
        if rn <= 1e-15 * scale * (rows as f64).sqrt() {
            break;
        }
        let mut jac = nalgebra::DMatrix::<f64>::zeros(rows, n);
        for (row, &(i, j)) in pairs.iter().enumerate() {
            let rij = dist(&x[i], &x[j]).max(1e-300);
            for c in 0..dim {
                let g = (x[i][c] - x[j][c]) / rij;
                jac[(row, i * dim + c)] = g;
                jac[(row, j * dim + c)] = -g;
            }
        }
        for i in 0..k {
            let row = pairs.len() + i;
            let ni = x[i].iter().map(|v| v * v).sum::<f64>().sqrt();
            if ni > 1e-300 {
                for c in 0..dim {
                    jac[(row, i * dim + c)] = x[i][c] / ni;
                }
            } else {
                jac[(row, i * dim)] = 1.0;
            }
        }
        let svd = jac.svd(true, true);
        let Ok(step) = svd.solve(&(-&res), 1e-10) else {
            break;
        };
        let apply = |x: &[Vec<f64>], t: f64| -> Vec<Vec<f64>> {
            let mut y = x.to_vec();
            for i in 0..k {
                for c in 0..dim {
                    y[i][c] += t * step[i * dim + c];
                }
            }
            y
        };
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..25 {
            let trial = apply(x, t);
            if residual(&trial).norm() < rn * (1.0 - 0.25 * t) {
                x.clone_from_slice(&trial);
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            break;
        }
    }
}

/// Push each shrunk pair apart along its chord, then reproject to the
/// radius spheres. Escapes projected-stationary points of the penalty whose
/// gradient is purely radial.
fn repair(x: &mut [Vec<f64>], radii: &[f64], d: &[Vec<f64>], passes: usize) {
    let k = x.len();
    for _ in 0..passes {
        for i in 0..k {
            for j in (i + 1)..k {
                let r = dist(&x[i], &x[j]);
                let target = d[i][j];
                if r >= target {
                    continue;
                }
                if r > 1e-300 {
                    let c = 0.51 * (target - r) / r;
                    for cdim in 0..x[i].len() {
                        let diff = x[i][cdim] - x[j][cdim];
                        x[i][cdim] += c * diff;
                        x[j][cdim] -= c * diff;
                    }
                } else {
                    x[i][0] += 0.5 * target;
                    x[j][0] -= 0.5 * target;
                }
            }
        }
        project_all(x, radii);
    }
}

/// Solve the comparison configuration with the given center against all
/// remaining points. Multistart projected gradient descent; deterministic
/// for a fixed seed.
pub fn comparison_config(
    m: &FiniteMetric,
    center: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<ComparisonConfiguration, ComparisonError> {
    let others: Vec<usize> = (0..m.n()).filter(|&i| i != center).collect();
    comparison_config_subset(m, center, &others, seed, tol)
}

/// Same solver restricted to an explicit subset of other points.
pub fn comparison_config_subset(
    m: &FiniteMetric,
    center: usize,
    others: &[usize],
    seed: u64,
    tol: &Tolerances,
) -> Result<ComparisonConfiguration, ComparisonError> {
    check_subset(m, center, others)?;
    let k = others.len();
    let dim = k.max(1);
    let radii: Vec<f64> = others.iter().map(|&i| m.d(center, i)).collect();
    let d: Vec<Vec<f64>> = others
        .iter()
        .map(|&i| others.iter().map(|&j| m.d(i, j)).collect())
        .collect();
    let scale = m.diameter().max(1e-300);

    let mut starts: Vec<Vec<Vec<f64>>> = Vec::new();
    if let Some(warm) = psd_start(&radii, &d, dim) {
        starts.push(warm);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while starts.len() < tol.multistarts as usize {
        let x: Vec<Vec<f64>> = radii
            .iter()
            .map(|&r| {
                // isotropic direction via normal components
                let mut v: Vec<f64> = (0..dim)
                    .map(|_| {
                        // Box-Muller from two uniforms
                        let u1: f64 = rng.gen_range(1e-12..1.0);
                        let u2: f64 = rng.gen_range(0.0..1.0);
                        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
                    })
                    .collect();
                project_to_sphere(&mut v, r);
                v
            })
            .collect();
        starts.push(x);
    }

    let mut best: Option<Descent> = None;
    let mut total_iters = 0u32;
    let mut capped = false;
    let floor = 1e-26 * scale.powi(4);
    let try_polish = |out: &mut Descent| {
        if out.value <= floor {
            return;
        }
        let mut x = out.x.clone();
        polish(&mut x, &radii, &d, scale);
        project_all(&mut x, &radii);
        let v = objective(&x, &d);
        if v < out.value {
            out.x = x;
            out.value = v;
        }
    };
    for x0 in starts {
        let mut out = descend(x0, &radii, &d, scale, tol.max_iters);
        total_iters = total_iters.saturating_add(out.iterations);
        try_polish(&mut out);
        // Alternate chord repairs with fresh descents when the line search
        // stalls above the floor.
        for _ in 0..4 {
            if out.value <= floor {
                break;
            }
            let mut x = out.x.clone();
            repair(&mut x, &radii, &d, 50);
            let mut retry = descend(x, &radii, &d, scale, tol.max_iters);
            total_iters = total_iters.saturating_add(retry.iterations);
            try_polish(&mut retry);
            if retry.value < out.value {
                out = retry;
            } else {
                break;
            }
        }
        capped |= out.capped;
        let better = best.as_ref().is_none_or(|b| out.value < b.value);
        if better {
            best = Some(out);
        }
        if best.as_ref().is_some_and(|b| b.value <= floor) {
            break;
        }
    }
    let best = best.expect("at least one start");
    Ok(ComparisonConfiguration {
        center_label: m.label(center).to_string(),
        other_labels: others.iter().map(|&i| m.label(i).to_string()).collect(),
        center: vec![0.0; dim],
        points: best.x,
        residual: best.value,
        iterations: total_iters,
        hit_iteration_cap: capped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::dist;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn euclidean_metric(pts: &[[f64; 3]]) -> FiniteMetric {
        let n = pts.len();
        let d = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        ((pts[i][0] - pts[j][0]).powi(2)
                            + (pts[i][1] - pts[j][1]).powi(2)
                            + (pts[i][2] - pts[j][2]).powi(2))
                        .sqrt()
                    })
                    .collect()
            })
            .collect();
        FiniteMetric::from_matrix(d)
    }

    #[test]
    fn euclidean_metric_reaches_zero_residual() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for trial in 0..20 {
            let pts: Vec<[f64; 3]> = (0..5)
                .map(|_| {
                    [
                        rng.gen_range(-1.0..1.0),
                        rng.gen_range(-1.0..1.0),
                        rng.gen_range(-1.0..1.0),
                    ]
                })
                .collect();
            let m = euclidean_metric(&pts);
            let cfg = comparison_config(&m, 0, 42, &tol()).unwrap();
            assert!(cfg.residual <= 1e-10, "trial {trial}: {}", cfg.residual);
            // radii exact
            for (i, p) in cfg.points.iter().enumerate() {
                let r = dist(p, &cfg.center);
                let want = m.d(0, i + 1);
                assert!((r - want).abs() <= 1e-9 * (1.0 + want));
            }
            // mutual distances not shrunk (beyond tolerance)
            for i in 0..4 {
                for j in (i + 1)..4 {
                    let have = dist(&cfg.points[i], &cfg.points[j]);
                    let want = m.d(i + 1, j + 1);
                    assert!(have >= want - 1e-6, "pair {i},{j}");
                }
            }
        }
    }

    #[test]
    fn star_metric_residual_is_bounded_below() {
        let mut d = vec![vec![2.0; 5]; 5];
        for i in 0..5 {
            d[i][i] = 0.0;
            if i > 0 {
                d[0][i] = 1.0;
                d[i][0] = 1.0;
            }
        }
        let m = FiniteMetric::from_matrix(d);
        let cfg = comparison_config(&m, 0, 0, &tol()).unwrap();
        // four unit vectors cannot be pairwise 2 apart; the empirical floor
        // is far above the pass threshold
        assert!(cfg.residual >= 1e-3, "residual {}", cfg.residual);
    }

    #[test]
    fn two_point_array_is_trivially_exact() {
        let m = FiniteMetric::from_matrix(vec![vec![0.0, 1.5], vec![1.5, 0.0]]);
        let cfg = comparison_config(&m, 0, 0, &tol()).unwrap();
        assert_eq!(cfg.residual, 0.0);
        assert!((dist(&cfg.points[0], &cfg.center) - 1.5).abs() < 1e-12);
    }

    #[test]
    fn determinism_for_fixed_seed() {
        let mut d = vec![vec![2.0; 5]; 5];
        for i in 0..5 {
            d[i][i] = 0.0;
            if i > 0 {
                d[0][i] = 1.0;
                d[i][0] = 1.0;
            }
        }
        let m = FiniteMetric::from_matrix(d);
        let a = comparison_config(&m, 0, 9, &tol()).unwrap();
        let b = comparison_config(&m, 0, 9, &tol()).unwrap();
        assert_eq!(a.residual.to_bits(), b.residual.to_bits());
        assert_eq!(a.points, b.points);
    }
}
