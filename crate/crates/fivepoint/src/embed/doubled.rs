//! Doubled-polytope embedding around a 4-point tense set.
//!
//! Given a tense set (p; x₁, x₂, x₃) and a fifth point q, the five points are
//! realized on the doubling of a convex region V ⊂ R³ across its boundary:
//! the tense part is rigid and planar, q's comparison image q̃ is lifted off
//! that plane, three satellite images q̃ᵢ are placed on circles around the
//! x̃ᵢ, a common point s̃ inside the triangle satisfies every ball
//! constraint, and V is cut out by the perpendicular bisectors of the
//! segments from s̃ to the four images. Reflecting s̃ across facet k lands
//! exactly on image k, which makes the doubling reproduce the q-distances,
//! while the planar part reproduces the tense distances on one sheet.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::comparison::{comparison_config, TenseSet};
use crate::metric::FiniteMetric;
use crate::tolerances::Tolerances;

use super::{
    add3, cross3, dist3d, dot3, model_angle, norm3, scale3, sub3, DoubledPolytopeCert, EmbedError,
    Halfspace,
};

fn sdot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn wrap_pm_pi(mut a: f64) -> f64 {
    use std::f64::consts::PI;
    while a > PI {
        a -= 2.0 * PI;
    }
    while a <= -PI {
        a += 2.0 * PI;
    }
    a
}

/// Build the doubled-polytope certificate for tense set `tense` (center
/// first) and extra point `q`.
pub fn embed_doubled_polytope(
    m: &FiniteMetric,
    tense: &TenseSet,
    q: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<DoubledPolytopeCert, EmbedError> {
    let n = m.n();
    let diam = m.diameter();
    if diam <= 0.0 {
        return Err(EmbedError::Internal("degenerate metric".into()));
    }
    if tense.size() != 4 {
        return Err(EmbedError::Internal(format!(
            "expected a 4-point tense set, got {} points",
            tense.size()
        )));
    }
    let p = tense.center;
    if tense.points[0] != p {
        return Err(EmbedError::Internal("tense set does not start with its center".into()));
    }
    let xs: [usize; 3] = [tense.points[1], tense.points[2], tense.points[3]];
    if q >= n || q == p || xs.contains(&q) {
        return Err(EmbedError::Internal("extra point overlaps the tense set".into()));
    }

    // ---- Stages 1–2: comparison configuration at p; coherent frame. ----
    //
    // The center-p comparison configuration keeps all radii exact and can
    // only expand the other pairs; on the tense subset every inequality is
    // then forced tight (the quadratic-form value is squeezed between 0 and
    // the tense equality), so its image coincides with the tense realization
    // up to congruence. Reading both the planar part and q̃ from one solve
    // therefore realizes stage 1 and stage 2 in a single coherent frame.
    let cfg = comparison_config(m, p, seed, tol)?;
    if cfg.residual.sqrt() > tol.cfg * diam {
        return Err(EmbedError::Internal(format!(
            "comparison configuration did not converge: residual {:.3e}",
            cfg.residual
        )));
    }
    let others: Vec<usize> = (0..n).filter(|&i| i != p).collect();
    let row = |idx: usize| -> &Vec<f64> {
        let k = others.iter().position(|&o| o == idx).expect("index in others");
        &cfg.points[k]
    };
    let y: [&Vec<f64>; 3] = [row(xs[0]), row(xs[1]), row(xs[2])];
    let yq = row(q);
    let dim = yq.len();

    // Orthonormal frame: u1, u2 span the tense plane, u3 points toward q̃'s
    // off-plane component.
    let norms: Vec<f64> = y.iter().map(|r| sdot(r, r).sqrt()).collect();
    let first = (0..3)
        .max_by(|&a, &b| norms[a].total_cmp(&norms[b]))
        .expect("three rows");
    if norms[first] <= 1e-14 * diam {
        return Err(EmbedError::Internal("tense points collapse onto the center".into()));
    }
    let unit = |v: &[f64]| -> Vec<f64> {
        let s = sdot(v, v).sqrt();
        v.iter().map(|x| x / s).collect()
    };
    let u1 = unit(y[first]);
    let residual_of = |v: &[f64], basis: &[&Vec<f64>]| -> Vec<f64> {
        let mut r = v.to_vec();
        for b in basis {
            let c = sdot(&r, b);
            for (rk, bk) in r.iter_mut().zip(b.iter()) {
                *rk -= c * bk;
            }
        }
        r
    };
    let complete = |basis: &[&Vec<f64>]| -> Vec<f64> {
        for k in 0..dim {
            let mut e = vec![0.0; dim];
            e[k] = 1.0;
            let r = residual_of(&e, basis);
            let s = sdot(&r, &r).sqrt();
            if s > 1e-6 {
                return r.iter().map(|x| x / s).collect();
            }
        }
        vec![0.0; dim]
    };
    let mut best2: Option<(f64, Vec<f64>)> = None;
    for (k, r) in y.iter().enumerate() {
        if k == first {
            continue;
        }
        let res = residual_of(r, &[&u1]);
        let s = sdot(&res, &res).sqrt();
        if best2.as_ref().map_or(true, |(bs, _)| s > *bs) {
            best2 = Some((s, res));
        }
    }
    let (s2, res2) = best2.expect("two remaining rows");
    let u2 = if s2 > 1e-12 * diam {
        unit(&res2)
    } else {
        complete(&[&u1])
    };
    let resq = residual_of(yq, &[&u1, &u2]);
    let zq = sdot(&resq, &resq).sqrt();
    let _u3 = if zq > 1e-14 * diam {
        unit(&resq)
    } else {
        complete(&[&u1, &u2])
    };

    let p3 = [0.0f64; 3];
    let mut x3 = [[0.0f64; 3]; 3];
    for i in 0..3 {
        let mut v = [sdot(y[i], &u1), sdot(y[i], &u2), 0.0];
        let r = m.d(p, xs[i]);
        let len = norm3(&v);
        if len <= 1e-14 * diam {
            return Err(EmbedError::Internal("tense point projects onto the center".into()));
        }
        v = scale3(&v, r / len);
        x3[i] = v;
    }
    let mut q3 = [sdot(yq, &u1), sdot(yq, &u2), zq];
    {
        let r = m.d(p, q);
        let len = norm3(&q3);
        if len <= 1e-14 * diam {
            return Err(EmbedError::Internal("extra point projects onto the center".into()));
        }
        q3 = scale3(&q3, r / len);
    }

    // The tense part must be an exact realization; q̃ must satisfy the
    // one-sheet comparison conditions.
    let slack = 4.0 * tol.cfg * diam;
    for i in 0..3 {
        for j in (i + 1)..3 {
            let d = dist3d(&x3[i], &x3[j]);
            if (d - m.d(xs[i], xs[j])).abs() > slack {
                return Err(EmbedError::Internal(format!(
                    "tense part is not rigid: pair ({}, {}) off by {:.3e}",
                    m.label(xs[i]),
                    m.label(xs[j]),
                    (d - m.d(xs[i], xs[j])).abs()
                )));
            }
        }
    }
    for i in 0..3 {
        if dist3d(&q3, &x3[i]) < m.d(xs[i], q) - slack {
            return Err(EmbedError::Internal(format!(
                "lifted point violates expansion against {}",
                m.label(xs[i])
            )));
        }
    }

    // ---- Stage 3: satellite images q̃_i on circles in the plane. ----
    let mut sats = [[0.0f64; 3]; 3];
    for i in 0..3 {
        let j = (i + 1) % 3;
        let k = (i + 2) % 3;
        let c = [x3[i][0], x3[i][1]];
        let r = m.d(xs[i], q);
        let vj = [x3[j][0] - c[0], x3[j][1] - c[1]];
        let vk = [x3[k][0] - c[0], x3[k][1] - c[1]];
        let gamma = super::angle_at2(
            &c,
            &[x3[j][0], x3[j][1]],
            &[x3[k][0], x3[k][1]],
        );
        let cross = super::cross2(&vj, &vk);
        let orient = if cross >= 0.0 { 1.0 } else { -1.0 };
        let a0 = (-vj[1]).atan2(-vj[0]);

        // Conditions: the angle at x̃_i toward each listed point must reach
        // the comparison angle of the corresponding metric triangle.
        let conds: [([f64; 2], f64); 3] = [
            (
                [x3[j][0], x3[j][1]],
                model_angle(m.d(xs[i], xs[j]), r, m.d(xs[j], q)),
            ),
            (
                [x3[k][0], x3[k][1]],
                model_angle(m.d(xs[i], xs[k]), r, m.d(xs[k], q)),
            ),
            ([0.0, 0.0], model_angle(m.d(p, xs[i]), r, m.d(p, q))),
        ];

        let mut lo = 0.0f64;
        let mut hi = gamma;
        for (target, beta) in conds {
            let tv = [target[0] - c[0], target[1] - c[1]];
            let tn = super::norm2(&tv);
            if tn <= 1e-14 * diam {
                continue;
            }
            let psi_c = tv[1].atan2(tv[0]);
            let h = std::f64::consts::PI - beta;
            let raw = orient * wrap_pm_pi(psi_c + std::f64::consts::PI - a0);
            let mid = gamma / 2.0;
            let that = [raw - 2.0 * std::f64::consts::PI, raw, raw + 2.0 * std::f64::consts::PI]
                .into_iter()
                .min_by(|a, b| (a - mid).abs().total_cmp(&(b - mid).abs()))
                .expect("three candidates");
            lo = lo.max(that - h);
            hi = hi.min(that + h);
        }
        if lo > hi + tol.ang {
            return Err(EmbedError::InfeasibleArcs { point: xs[i], lo, hi });
        }
        let t = ((lo + hi) / 2.0).clamp(0.0, gamma);
        let psi = a0 + orient * t;
        sats[i] = [c[0] + r * psi.cos(), c[1] + r * psi.sin(), 0.0];

        // The arc encodes exactly these expansions; double-check.
        if dist3d(&sats[i], &p3) < m.d(p, q) - slack
            || dist3d(&sats[i], &x3[j]) < m.d(xs[j], q) - slack
            || dist3d(&sats[i], &x3[k]) < m.d(xs[k], q) - slack
            || (dist3d(&sats[i], &x3[i]) - r).abs() > slack
        {
            return Err(EmbedError::Internal(format!(
                "satellite image around {} violates its arc conditions",
                m.label(xs[i])
            )));
        }
    }

    // ---- Stage 4: common point s̃ inside the triangle, in every ball. ----
    let tri = [
        [x3[0][0], x3[0][1]],
        [x3[1][0], x3[1][1]],
        [x3[2][0], x3[2][1]],
    ];
    let balls: [([f64; 2], f64); 4] = [
        ([0.0, 0.0], m.d(p, q)),
        ([x3[0][0], x3[0][1]], m.d(xs[0], q)),
        ([x3[1][0], x3[1][1]], m.d(xs[1], q)),
        ([x3[2][0], x3[2][1]], m.d(xs[2], q)),
    ];
    let g = |s: &[f64; 2]| -> f64 {
        balls
            .iter()
            .map(|(c, r)| super::dist2d(s, c) - r)
            .fold(f64::NEG_INFINITY, f64::max)
    };

    let grid = 64usize;
    let mut best = (f64::INFINITY, [0.0f64; 2]);
    for a in 0..=grid {
        for b in 0..=(grid - a) {
            let la = a as f64 / grid as f64;
            let lb = b as f64 / grid as f64;
            let lc = 1.0 - la - lb;
            let s = [
                la * tri[0][0] + lb * tri[1][0] + lc * tri[2][0],
                la * tri[0][1] + lb * tri[1][1] + lc * tri[2][1],
            ];
            let v = g(&s);
            if v < best.0 {
                best = (v, s);
            }
        }
    }
    // Pattern-search refinement, staying inside the triangle.
    let inside = |s: &[f64; 2]| -> bool {
        let area = super::cross2(
            &super::sub2(&tri[1], &tri[0]),
            &super::sub2(&tri[2], &tri[0]),
        );
        if area.abs() <= 1e-14 * diam * diam {
            // Degenerate triangle: accept points within a hair of its span.
            let lo = [
                tri.iter().map(|t| t[0]).fold(f64::INFINITY, f64::min),
                tri.iter().map(|t| t[1]).fold(f64::INFINITY, f64::min),
            ];
            let hi = [
                tri.iter().map(|t| t[0]).fold(f64::NEG_INFINITY, f64::max),
                tri.iter().map(|t| t[1]).fold(f64::NEG_INFINITY, f64::max),
            ];
            let eps = 1e-9 * diam;
            return s[0] >= lo[0] - eps
                && s[0] <= hi[0] + eps
                && s[1] >= lo[1] - eps
                && s[1] <= hi[1] + eps;
        }
        let sign = area.signum();
        for e in 0..3 {
            let a = tri[e];
            let b = tri[(e + 1) % 3];
            let c = super::cross2(&super::sub2(&b, &a), &super::sub2(s, &a));
            if sign * c < -1e-12 * diam * diam {
                return false;
            }
        }
        true
    };
    let mut step = diam / grid as f64;
    while step > 1e-15 * diam {
        let mut improved = false;
        for dir in [
            [1.0, 0.0],
            [-1.0, 0.0],
            [0.0, 1.0],
            [0.0, -1.0],
            [1.0, 1.0],
            [1.0, -1.0],
            [-1.0, 1.0],
            [-1.0, -1.0],
        ] {
            let cand = [best.1[0] + step * dir[0], best.1[1] + step * dir[1]];
            if !inside(&cand) {
                continue;
            }
            let v = g(&cand);
            if v < best.0 {
                best = (v, cand);
                improved = true;
            }
        }
        if !improved {
            step /= 2.0;
        }
    }
    if best.0 > tol.cfg * diam {
        return Err(EmbedError::InfeasibleBalls {
            violation: best.0,
            at: [best.1[0], best.1[1], 0.0],
        });
    }
    // Pull s̃ toward the triangle centroid while staying in every ball
    // (the feasible set is convex), which keeps it clear of facet edges.
    let centroid = [
        (tri[0][0] + tri[1][0] + tri[2][0]) / 3.0,
        (tri[0][1] + tri[1][1] + tri[2][1]) / 3.0,
    ];
    let mut s2d = best.1;
    if best.0 <= 0.0 {
        if g(&centroid) <= 0.0 {
            s2d = centroid;
        } else {
            let mut lo_t = 0.0f64;
            let mut hi_t = 1.0f64;
            for _ in 0..60 {
                let mid = (lo_t + hi_t) / 2.0;
                let cand = [
                    best.1[0] + mid * (centroid[0] - best.1[0]),
                    best.1[1] + mid * (centroid[1] - best.1[1]),
                ];
                if g(&cand) <= 0.0 {
                    lo_t = mid;
                } else {
                    hi_t = mid;
                }
            }
            s2d = [
                best.1[0] + lo_t * (centroid[0] - best.1[0]),
                best.1[1] + lo_t * (centroid[1] - best.1[1]),
            ];
        }
    }
    let mut s3 = [s2d[0], s2d[1], 0.0];

    // ---- Stage 5: V from perpendicular bisectors. ----
    let targets = [q3, sats[0], sats[1], sats[2]];
    let build = |s: &[f64; 3]| -> (Vec<Halfspace>, Vec<[f64; 3]>, Vec<usize>) {
        let mut hs = Vec::new();
        let mut tg = Vec::new();
        let mut roles = Vec::new();
        for (k, t) in targets.iter().enumerate() {
            let v = sub3(t, s);
            let len = norm3(&v);
            if len <= 1e-12 * diam {
                // Degenerate facet: the image coincides with s̃ (flat case);
                // the facet carries no constraint and is omitted.
                continue;
            }
            let nrm = scale3(&v, 1.0 / len);
            let midpoint = scale3(&add3(s, t), 0.5);
            hs.push(Halfspace {
                normal: nrm,
                offset: dot3(&nrm, &midpoint),
            });
            tg.push(*t);
            roles.push(k);
        }
        (hs, tg, roles)
    };
    let (mut halfspaces, mut facet_targets, mut roles) = build(&s3);
    if halfspaces.is_empty() {
        return Err(EmbedError::Internal("all facets degenerate".into()));
    }

    let placed: Vec<[f64; 3]> = vec![p3, x3[0], x3[1], x3[2]];
    let membership = |hs: &[Halfspace], s: &[f64; 3]| -> Result<(), EmbedError> {
        for h in hs {
            for (pt, name) in placed
                .iter()
                .zip(["p", "x1", "x2", "x3"])
                .chain(std::iter::once((s, "s")))
            {
                if !h.contains(pt, slack) {
                    return Err(EmbedError::Internal(format!(
                        "placed point {name} leaves V by {:.3e}",
                        h.excess(pt)
                    )));
                }
            }
        }
        Ok(())
    };
    membership(&halfspaces, &s3)?;

    // ---- Stage 6: keep placed points away from facet edges. ----
    let edge_tol = tol.edge * diam;
    let offending = |hs: &[Halfspace], s: &[f64; 3]| -> Option<(usize, usize)> {
        for a in 0..hs.len() {
            for b in (a + 1)..hs.len() {
                let dir = cross3(&hs[a].normal, &hs[b].normal);
                let dn = norm3(&dir);
                if dn <= 1e-9 {
                    continue;
                }
                let dir = scale3(&dir, 1.0 / dn);
                // A point of the intersection line: solve the 2×2 system in
                // the span of the two normals.
                let n1 = hs[a].normal;
                let n2 = hs[b].normal;
                let g11 = dot3(&n1, &n1);
                let g12 = dot3(&n1, &n2);
                let g22 = dot3(&n2, &n2);
                let det = g11 * g22 - g12 * g12;
                if det.abs() <= 1e-18 {
                    continue;
                }
                let c1 = (hs[a].offset * g22 - hs[b].offset * g12) / det;
                let c2 = (hs[b].offset * g11 - hs[a].offset * g12) / det;
                let base = add3(&scale3(&n1, c1), &scale3(&n2, c2));
                for pt in placed.iter().chain(std::iter::once(s)) {
                    let along = dot3(&sub3(pt, &base), &dir);
                    let near = add3(&base, &scale3(&dir, along));
                    if dist3d(pt, &near) < edge_tol
                        && hs.iter().all(|h| h.contains(&near, edge_tol))
                    {
                        return Some((a, b));
                    }
                }
            }
        }
        None
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9E37_79B9_7F4A_7C15);
    let mut attempts = 0u32;
    while let Some((fa, fb)) = offending(&halfspaces, &s3) {
        if attempts >= 8 {
            return Err(EmbedError::NudgeExhausted { attempts });
        }
        attempts += 1;
        let mut fixed = false;
        for f in [fa, fb] {
            let role = roles[f];
            let (owner, major) = if role == 0 {
                (p3, m.d(p, q))
            } else {
                (x3[role - 1], m.d(xs[role - 1], q))
            };
            let fdist = dist3d(&owner, &s3) / 2.0;
            let a_half = major / 2.0;
            let b2 = a_half * a_half - fdist * fdist;
            if b2 <= (1e-9 * diam) * (1e-9 * diam) {
                continue; // Segment-degenerate spheroid; try the other facet.
            }
            // Replace the bisector by a plane tangent to the spheroid with
            // foci s̃ and the owner and major diameter `major`; reflecting
            // s̃ across any such plane stays at distance `major` from the
            // owner, so the facet keeps its reflection identity.
            let delta = 1e-4 * attempts as f64;
            let nrm = halfspaces[f].normal;
            let rv: [f64; 3] = [
                rng.gen::<f64>() - 0.5,
                rng.gen::<f64>() - 0.5,
                rng.gen::<f64>() - 0.5,
            ];
            let mut axis = cross3(&nrm, &rv);
            let an = norm3(&axis);
            if an <= 1e-9 {
                continue;
            }
            axis = scale3(&axis, 1.0 / an);
            let rotated = add3(
                &scale3(&nrm, delta.cos()),
                &scale3(&cross3(&axis, &nrm), delta.sin()),
            );
            let center = scale3(&add3(&s3, &owner), 0.5);
            let e_dir = scale3(&sub3(&owner, &s3), 1.0 / (2.0 * fdist));
            let ce = dot3(&rotated, &e_dir);
            let support = dot3(&rotated, &center)
                + (a_half * a_half * ce * ce + b2 * (1.0 - ce * ce)).sqrt();
            let cand = Halfspace {
                normal: rotated,
                offset: support,
            };
            let reflected = cand.reflect(&s3);
            if (dist3d(&owner, &reflected) - major).abs() > 1e-7 * diam {
                return Err(EmbedError::Internal(
                    "tangent-plane reflection lost the focus property".into(),
                ));
            }
            let mut trial = halfspaces.clone();
            trial[f] = cand.clone();
            if membership(&trial, &s3).is_ok() {
                halfspaces = trial;
                facet_targets[f] = reflected;
                fixed = true;
                break;
            }
        }
        if !fixed {
            // Move s̃ slightly inside the (convex) feasible set instead.
            let ang: f64 = rng.gen::<f64>() * std::f64::consts::TAU;
            let dir = [ang.cos(), ang.sin()];
            let mut lo_t = 0.0f64;
            let mut hi_t = 0.1 * diam;
            for _ in 0..50 {
                let mid = (lo_t + hi_t) / 2.0;
                let cand = [s2d[0] + mid * dir[0], s2d[1] + mid * dir[1]];
                if inside(&cand) && g(&cand) <= 0.0 {
                    lo_t = mid;
                } else {
                    hi_t = mid;
                }
            }
            s2d = [s2d[0] + 0.5 * lo_t * dir[0], s2d[1] + 0.5 * lo_t * dir[1]];
            s3 = [s2d[0], s2d[1], 0.0];
            let rebuilt = build(&s3);
            halfspaces = rebuilt.0;
            facet_targets = rebuilt.1;
            roles = rebuilt.2;
            membership(&halfspaces, &s3)?;
        }
    }

    let cert = DoubledPolytopeCert {
        p,
        xs,
        q,
        halfspaces,
        facet_targets,
        sheet1: [p3, x3[0], x3[1], x3[2]],
        s_tilde: s3,
    };
    debug_assert_eq!(cert.facet_targets.len(), cert.halfspaces.len());
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::comparison::tense_array;

    fn metric_from(points: &[[f64; 3]; 5]) -> FiniteMetric {
        let d: Vec<Vec<f64>> = (0..5)
            .map(|i| {
                (0..5)
                    .map(|j| dist3d(&points[i], &points[j]))
                    .collect()
            })
            .collect();
        FiniteMetric::from_matrix(d)
    }

    /// Metric with a genuine lift: planar tense part, q off the plane but
    /// with shrunk distances to the x_i so the comparison inequalities keep
    /// q̃'s expansions strict.
    fn lifted_metric() -> FiniteMetric {
        let p = [0.0, 0.0, 0.0];
        let x1 = [1.3, 0.1, 0.0];
        let x2 = [-0.8, 1.1, 0.0];
        let x3 = [-0.5, -1.2, 0.0];
        let qe = [0.1, 0.05, 1.1];
        let shrink = 0.9;
        let pts = [p, x1, x2, x3, qe];
        let mut d = vec![vec![0.0; 5]; 5];
        for i in 0..5 {
            for j in 0..5 {
                d[i][j] = dist3d(&pts[i], &pts[j]);
                if (i == 4 && j != 0 && j != 4) || (j == 4 && i != 0 && i != 4) {
                    d[i][j] *= shrink;
                }
            }
        }
        FiniteMetric::from_matrix(d)
    }

    #[test]
    fn lifted_instance_builds_and_reflects() {
        let m = lifted_metric();
        let tol = Tolerances::default();
        let tense = tense_array(&m, 0, &[1, 2, 3], &tol)
            .unwrap()
            .expect("planar part is tense");
        let cert = embed_doubled_polytope(&m, &tense, 4, 7, &tol).unwrap();
        let diam = m.diameter();

        assert_eq!(cert.halfspaces.len(), 4);
        // Reflection identities: facet k sends s̃ to its recorded target,
        // and the target sits at the metric distance from its owner.
        for (k, h) in cert.halfspaces.iter().enumerate() {
            let r = h.reflect(&cert.s_tilde);
            let t = cert.facet_targets[k];
            assert!(dist3d(&r, &t) <= 1e-9 * diam, "facet {k} reflection");
            let (owner, dd) = if k == 0 {
                (cert.sheet1[0], m.d(0, 4))
            } else {
                (cert.sheet1[k], m.d(k, 4))
            };
            assert!(
                (dist3d(&owner, &t) - dd).abs() <= 1e-8 * diam,
                "facet {k} target distance"
            );
        }
        // Sheet-1 distances are the metric distances of the tense part.
        for i in 0..4 {
            for j in (i + 1)..4 {
                let d = dist3d(&cert.sheet1[i], &cert.sheet1[j]);
                assert!((d - m.d(i, j)).abs() <= 1e-7 * diam, "pair ({i},{j})");
            }
        }
        // All placed points inside V.
        for h in &cert.halfspaces {
            for pt in cert.sheet1.iter().chain(std::iter::once(&cert.s_tilde)) {
                assert!(h.contains(pt, 1e-7 * diam));
            }
        }
    }

    #[test]
    fn flat_instance_degenerates_to_prism() {
        // Everything in one plane, q inside the triangle: the balls pin s̃
        // to q̃'s planar position and the q̃-facet degenerates away.
        let pts = [
            [0.0, 0.0, 0.0],
            [1.4, 0.0, 0.0],
            [-0.6, 1.2, 0.0],
            [-0.4, -1.3, 0.0],
            [0.25, 0.15, 0.0],
        ];
        let m = metric_from(&pts);
        let tol = Tolerances::default();
        let tense = tense_array(&m, 0, &[1, 2, 3], &tol)
            .unwrap()
            .expect("planar part is tense");
        let cert = embed_doubled_polytope(&m, &tense, 4, 3, &tol).unwrap();
        let diam = m.diameter();

        // s̃ recovers q's planar position (up to the frame's congruence the
        // radius from p is exact, and all four ball constraints are tight).
        assert!((norm3(&cert.s_tilde) - m.d(0, 4)).abs() <= 1e-6 * diam);
        for i in 1..4 {
            assert!(
                (dist3d(&cert.s_tilde, &cert.sheet1[i]) - m.d(i, 4)).abs() <= 1e-6 * diam
            );
        }
        // Remaining facets are vertical: a prism over the plane.
        assert!(cert.halfspaces.len() < 4, "q̃-facet should degenerate");
        for h in &cert.halfspaces {
            assert!(h.normal[2].abs() <= 1e-6, "prism facet normal {:?}", h.normal);
        }
    }
}
