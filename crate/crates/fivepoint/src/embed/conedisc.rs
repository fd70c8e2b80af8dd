//! Cone-disc embedding for two tense pairs with a shared center.
//!
//! Five points (x; v₁, v₂; w₁, w₂) with tense triples (v₁, x, v₂) and
//! (w₁, x, w₂) are realized on a disc glued from four triangles with at
//! most one conical singularity each. The construction picks an opening
//! angle θ between the two lines through the planar image of x, reads the
//! twelve corner angles off that configuration (via auxiliary reflected
//! copies), verifies the twenty-eight comparison conditions the gluing
//! requires, and realizes each triangle on a Euclidean cone.

use std::f64::consts::PI;

use crate::metric::FiniteMetric;
use crate::tolerances::Tolerances;

use super::{
    angle_at2, dist2d, interior_angle, model_angle, norm2, point_in_polygon,
    polygon_area2, reflect_across_bisector, segments_cross, sub2, ConeDiscCert, ConeTriangle,
    EmbedError,
};

// ---------------------------------------------------------------------------
// Single cone triangle.
// ---------------------------------------------------------------------------

/// Realize a triangle with side lengths `sides = [a, b, c]` and corner
/// angles `angles = [A, B, C]` on a Euclidean cone.
///
/// Preconditions: the sides satisfy the triangle inequality, each angle is
/// at least the comparison angle of the corresponding flat triangle, no
/// angle exceeds π, and the angle sum is at least π. The cone angle at the
/// singular point is then ω = 3π − A − B − C ≤ 2π; when the sum is exactly
/// π the triangle is flat.
///
/// The returned chart is `[P1, P2, Q]` (flat) or `[P1, P2, Q2, Z, Q1]`
/// (singular), cut from the apex corner to the cone point; see
/// [`ConeTriangle`].
pub fn realize_cone_triangle(
    sides: [f64; 3],
    angles: [f64; 3],
    tol: &Tolerances,
) -> Result<ConeTriangle, EmbedError> {
    let [a, b, c] = sides;
    let [aa, bb, cc] = angles;
    let scale = a.max(b).max(c);
    if !(a > 0.0 && b > 0.0 && c > 0.0) || !scale.is_finite() {
        return Err(EmbedError::TriangleInequality { sides });
    }
    let slack = tol.metric * scale;
    if a + b < c - slack || b + c < a - slack || c + a < b - slack {
        return Err(EmbedError::TriangleInequality { sides });
    }
    let models = [
        model_angle(c, b, a),
        model_angle(c, a, b),
        model_angle(b, a, c),
    ];
    for (k, (&ang, &mdl)) in angles.iter().zip(&models).enumerate() {
        if ang < mdl - tol.ang {
            return Err(EmbedError::AngleBelowModel {
                index: k,
                angle: ang,
                model: mdl,
            });
        }
        if ang > PI + tol.ang {
            return Err(EmbedError::Internal(format!(
                "corner {k} angle {ang:.9} exceeds π"
            )));
        }
    }
    let sum = aa + bb + cc;
    if sum < PI - tol.ang {
        return Err(EmbedError::AngleSumBelowPi { sum });
    }

    let p1 = [0.0, 0.0];
    let p2 = [c, 0.0];
    let excess = sum - PI;

    if excess <= tol.ang {
        // Flat triangle: the angles coincide with the comparison angles.
        let q = [b * aa.cos(), b * aa.sin()];
        if (dist2d(&p2, &q) - a).abs() > 1e-7 * scale {
            return Err(EmbedError::Internal(
                "flat chart does not close up to the prescribed side".into(),
            ));
        }
        return Ok(ConeTriangle {
            sides,
            angles,
            omega: 2.0 * PI,
            cone_point: None,
            chart: vec![p1, p2, q],
        });
    }

    let omega = 2.0 * PI - excess;
    if omega <= tol.ang {
        return Err(EmbedError::Internal("cone angle collapses to zero".into()));
    }

    // Open the apex corner: its two chart copies.
    let q1 = [b * aa.cos(), b * aa.sin()];
    let q2 = [c - a * bb.cos(), a * bb.sin()];
    let base_mid = [c / 2.0, 0.0];
    let d = sub2(&q2, &q1);
    let dn = norm2(&d);
    let (m, mut nhat) = if dn > 1e-12 * scale {
        let mid = [(q1[0] + q2[0]) / 2.0, (q1[1] + q2[1]) / 2.0];
        (mid, [d[1] / dn, -d[0] / dn])
    } else {
        let toward = sub2(&base_mid, &q1);
        let tn = norm2(&toward);
        if tn <= 1e-12 * scale {
            return Err(EmbedError::Internal("apex copies collapse onto the base".into()));
        }
        (q1, [toward[0] / tn, toward[1] / tn])
    };
    if super::dot2(&nhat, &sub2(&base_mid, &m)) < 0.0 {
        nhat = [-nhat[0], -nhat[1]];
    }

    // The cone point Z sits on the perpendicular bisector of [Q1, Q2], where
    // the residual apex angle is split evenly: ∠(Q1; P1, Z) + ∠(Q2; P2, Z) = C.
    let f = |t: f64| -> f64 {
        let z = [m[0] + t * nhat[0], m[1] + t * nhat[1]];
        angle_at2(&q1, &p1, &z) + angle_at2(&q2, &p2, &z) - cc
    };
    let t_max = 10.0 * (a + b + c);
    let steps = 512;
    let mut bracket: Option<(f64, f64)> = None;
    let mut prev_t = 0.0;
    let mut prev_f = f(0.0);
    if prev_f < -tol.ang {
        return Err(EmbedError::ApexOutside { z: m });
    }
    for k in 1..=steps {
        let t = t_max * k as f64 / steps as f64;
        let ft = f(t);
        if prev_f >= 0.0 && ft <= 0.0 {
            bracket = Some((prev_t, t));
            break;
        }
        prev_t = t;
        prev_f = ft;
    }
    let Some((mut lo, mut hi)) = bracket else {
        return Err(EmbedError::NoRoot);
    };
    for _ in 0..200 {
        let mid = (lo + hi) / 2.0;
        if f(mid) >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let t_root = (lo + hi) / 2.0;
    let z = [m[0] + t_root * nhat[0], m[1] + t_root * nhat[1]];

    let chart = vec![p1, p2, q2, z, q1];

    // Chart validity: counterclockwise, simple, cone point inside the
    // quadrilateral spanned by the true corners.
    if polygon_area2(&chart) <= 0.0 {
        return Err(EmbedError::ApexOutside { z });
    }
    let edges: [( [f64;2], [f64;2] ); 5] = [
        (p1, p2),
        (p2, q2),
        (q2, z),
        (z, q1),
        (q1, p1),
    ];
    for (i, j) in [(0, 2), (0, 3), (1, 3), (1, 4), (2, 4)] {
        if segments_cross(&edges[i].0, &edges[i].1, &edges[j].0, &edges[j].1) {
            return Err(EmbedError::ApexOutside { z });
        }
    }
    let quad = [p1, p2, q2, q1];
    if !point_in_polygon(&quad, &z) {
        return Err(EmbedError::ApexOutside { z });
    }

    // Invariants: equal cut edges, interior angle ω at the cone point.
    let cut1 = dist2d(&z, &q1);
    let cut2 = dist2d(&z, &q2);
    if (cut1 - cut2).abs() > 1e-10 * scale {
        return Err(EmbedError::Internal(format!(
            "cut edges differ: {cut1:.12} vs {cut2:.12}"
        )));
    }
    let at_z = interior_angle(&chart, 3);
    if (at_z - omega).abs() > 1e-7 {
        return Err(EmbedError::Internal(format!(
            "interior angle at the cone point is {at_z:.9}, expected {omega:.9}"
        )));
    }

    Ok(ConeTriangle {
        sides,
        angles,
        omega,
        cone_point: Some(z),
        chart,
    })
}

// ---------------------------------------------------------------------------
// The 28 gluing conditions.
// ---------------------------------------------------------------------------

/// One scalar condition of the cone-disc gluing; `slack ≥ 0` means satisfied
/// with that margin (identities report `-|mismatch|`).
#[derive(Debug, Clone)]
pub struct ConditionReport {
    pub group: &'static str,
    pub index: usize,
    pub slack: f64,
    pub description: String,
}

/// Endpoint distance of the plane polyline with segment lengths
/// `[s0, s1, s2]` and interior angles `ang1`, `ang2`, the end segments on
/// opposite sides of the middle segment's line.
fn polyline_endpoint(s: [f64; 3], ang1: f64, ang2: f64) -> f64 {
    let p1 = [0.0, 0.0];
    let p2 = [s[1], 0.0];
    let p0 = [p1[0] + s[0] * ang1.cos(), p1[1] + s[0] * ang1.sin()];
    let p3 = [p2[0] - s[2] * ang2.cos(), p2[1] - s[2] * ang2.sin()];
    dist2d(&p0, &p3)
}

/// Evaluate all 28 gluing conditions of a cone-disc certificate against the
/// metric: 12 angle expansions "(*)", 8 polyline-endpoint bounds "(**)", and
/// 8 angle identities "(***)". Angle slacks are in radians, length slacks in
/// metric units.
pub fn cone_disc_conditions(cert: &ConeDiscCert, m: &FiniteMetric) -> Vec<ConditionReport> {
    let x = cert.x;
    let v = cert.v;
    let w = cert.w;
    let a = [m.d(x, v[0]), m.d(x, v[1])];
    let b = [m.d(x, w[0]), m.d(x, w[1])];
    let c = [
        [m.d(v[0], w[0]), m.d(v[0], w[1])],
        [m.d(v[1], w[0]), m.d(v[1], w[1])],
    ];
    let dv = m.d(v[0], v[1]);
    let dw = m.d(w[0], w[1]);
    let av = &cert.angles_x;
    let bv = &cert.angles_v;
    let cv = &cert.angles_w;

    let mut out = Vec::with_capacity(28);

    // (*) Twelve angle expansions: every disc angle reaches the comparison
    // angle of its metric triangle.
    for i in 0..2 {
        for j in 0..2 {
            let mdl = model_angle(a[i], b[j], c[i][j]);
            out.push(ConditionReport {
                group: "(*)",
                index: i * 2 + j,
                slack: av[i][j] - mdl,
                description: format!("angle at x in triangle (x,v{},w{})", i + 1, j + 1),
            });
        }
    }
    for i in 0..2 {
        for j in 0..2 {
            let mdl = model_angle(a[i], c[i][j], b[j]);
            out.push(ConditionReport {
                group: "(*)",
                index: 4 + i * 2 + j,
                slack: bv[i][j] - mdl,
                description: format!("angle at v{} in triangle (x,v{},w{})", i + 1, i + 1, j + 1),
            });
        }
    }
    for i in 0..2 {
        for j in 0..2 {
            let mdl = model_angle(b[j], c[i][j], a[i]);
            out.push(ConditionReport {
                group: "(*)",
                index: 8 + i * 2 + j,
                slack: cv[i][j] - mdl,
                description: format!("angle at w{} in triangle (x,v{},w{})", j + 1, i + 1, j + 1),
            });
        }
    }

    // (**) Eight polyline bounds: unfolding two adjacent triangles along
    // their shared edge cannot bring the far endpoints closer than the
    // metric distance.
    let polys: [([f64; 3], f64, f64, f64, String); 8] = [
        (
            [c[0][0], b[0], a[1]],
            cv[0][0],
            av[1][0],
            dv,
            "v1-w1-x-v2".into(),
        ),
        (
            [c[0][1], b[1], a[1]],
            cv[0][1],
            av[1][1],
            dv,
            "v1-w2-x-v2".into(),
        ),
        (
            [a[0], b[0], c[1][0]],
            av[0][0],
            cv[1][0],
            dv,
            "v1-x-w1-v2".into(),
        ),
        (
            [a[0], b[1], c[1][1]],
            av[0][1],
            cv[1][1],
            dv,
            "v1-x-w2-v2".into(),
        ),
        (
            [c[0][0], a[0], b[1]],
            bv[0][0],
            av[0][1],
            dw,
            "w1-v1-x-w2".into(),
        ),
        (
            [c[1][0], a[1], b[1]],
            bv[1][0],
            av[1][1],
            dw,
            "w1-v2-x-w2".into(),
        ),
        (
            [b[0], a[0], c[0][1]],
            av[0][0],
            bv[0][1],
            dw,
            "w1-x-v1-w2".into(),
        ),
        (
            [b[0], a[1], c[1][1]],
            av[1][0],
            bv[1][1],
            dw,
            "w1-x-v2-w2".into(),
        ),
    ];
    for (k, (sides, ang1, ang2, target, name)) in polys.into_iter().enumerate() {
        let zt = polyline_endpoint(sides, ang1, ang2);
        out.push(ConditionReport {
            group: "(**)",
            index: k,
            slack: zt - target,
            description: format!("polyline {name}"),
        });
    }

    // (***) Eight identities: adjacent angles add up to the comparison angle
    // across each line, and to π around the center.
    let idents: [(f64, f64, String); 8] = [
        (
            bv[0][0] + bv[0][1],
            model_angle(c[0][0], c[0][1], dw),
            "angles at v1 sum to comparison angle (v1; w1, w2)".into(),
        ),
        (
            bv[1][0] + bv[1][1],
            model_angle(c[1][0], c[1][1], dw),
            "angles at v2 sum to comparison angle (v2; w1, w2)".into(),
        ),
        (
            cv[0][0] + cv[1][0],
            model_angle(c[0][0], c[1][0], dv),
            "angles at w1 sum to comparison angle (w1; v1, v2)".into(),
        ),
        (
            cv[0][1] + cv[1][1],
            model_angle(c[0][1], c[1][1], dv),
            "angles at w2 sum to comparison angle (w2; v1, v2)".into(),
        ),
        (av[0][0] + av[0][1], PI, "angles at x along v1 sum to π".into()),
        (av[1][0] + av[1][1], PI, "angles at x along v2 sum to π".into()),
        (av[0][0] + av[1][0], PI, "angles at x along w1 sum to π".into()),
        (av[0][1] + av[1][1], PI, "angles at x along w2 sum to π".into()),
    ];
    for (k, (lhs, rhs, name)) in idents.into_iter().enumerate() {
        out.push(ConditionReport {
            group: "(***)",
            index: k,
            slack: -(lhs - rhs).abs(),
            description: name,
        });
    }

    out
}

// ---------------------------------------------------------------------------
// The full cone-disc construction.
// ---------------------------------------------------------------------------

/// Embed five points (x; v₁, v₂; w₁, w₂), where (v₁, x, v₂) and (w₁, x, w₂)
/// are tense, on a disc glued from four cone triangles.
pub fn embed_cone_disc(
    m: &FiniteMetric,
    x: usize,
    v: [usize; 2],
    w: [usize; 2],
    tol: &Tolerances,
) -> Result<ConeDiscCert, EmbedError> {
    let n = m.n();
    let diam = m.diameter();
    let mut seen = vec![x, v[0], v[1], w[0], w[1]];
    seen.sort_unstable();
    seen.dedup();
    if seen.len() != 5 || seen.iter().any(|&i| i >= n) {
        return Err(EmbedError::Internal("cone disc needs five distinct points".into()));
    }

    let a = [m.d(x, v[0]), m.d(x, v[1])];
    let b = [m.d(x, w[0]), m.d(x, w[1])];
    let c = [
        [m.d(v[0], w[0]), m.d(v[0], w[1])],
        [m.d(v[1], w[0]), m.d(v[1], w[1])],
    ];
    let dv = m.d(v[0], v[1]);
    let dw = m.d(w[0], w[1]);

    // Preconditions: both pairs tense through x, all legs positive.
    let pre = [
        (a[0] + a[1] - dv).abs(),
        (b[0] + b[1] - dw).abs(),
    ];
    for (k, defect) in pre.into_iter().enumerate() {
        if defect > tol.tense * diam {
            return Err(EmbedError::ConditionGroupFailed {
                group: "pre",
                index: k,
                slack: -defect,
            });
        }
    }
    if a[0] <= 0.0 || a[1] <= 0.0 || b[0] <= 0.0 || b[1] <= 0.0 {
        return Err(EmbedError::ConditionGroupFailed {
            group: "pre",
            index: 2,
            slack: 0.0,
        });
    }

    // Stage 1: feasible interval for the opening angle θ between the rays
    // x̃→ṽ2 and x̃→w̃1. Aligned pairs shrink with θ (upper bounds); opposed
    // pairs grow with θ (lower bounds).
    let upper = |ai: f64, bj: f64, cij: f64| -> f64 {
        let k = (cij * cij - ai * ai - bj * bj) / (2.0 * ai * bj);
        k.clamp(-1.0, 1.0).acos()
    };
    let lower = |ai: f64, bj: f64, cij: f64| -> f64 {
        let k = (ai * ai + bj * bj - cij * cij) / (2.0 * ai * bj);
        k.clamp(-1.0, 1.0).acos()
    };
    let u11 = upper(a[0], b[0], c[0][0]);
    let u22 = upper(a[1], b[1], c[1][1]);
    let l12 = lower(a[0], b[1], c[0][1]);
    let l21 = lower(a[1], b[0], c[1][0]);
    let lo = l12.max(l21);
    let hi = u11.min(u22);
    if lo > hi + tol.ang {
        return Err(EmbedError::ThetaInfeasible { lo, hi });
    }
    let theta = ((lo + hi) / 2.0).clamp(0.0, PI);

    // Planar configuration: both lines straight through x̃.
    let xt = [0.0, 0.0];
    let v1t = [-a[0], 0.0];
    let v2t = [a[1], 0.0];
    let w1t = [b[0] * theta.cos(), b[0] * theta.sin()];
    let w2t = [-b[1] * theta.cos(), -b[1] * theta.sin()];

    // Stage 2: angles at the center, read off the configuration.
    let angles_x = [
        [angle_at2(&xt, &v1t, &w1t), angle_at2(&xt, &v1t, &w2t)],
        [angle_at2(&xt, &v2t, &w1t), angle_at2(&xt, &v2t, &w2t)],
    ];

    // Stage 3: auxiliary copies. For base ṽ_i, build the comparison triangle
    // of (v_i; w_1, w_2) on the segment [w̃1, w̃2] with apex s̃ on the far
    // side from ṽ_i, and reflect the w̃_j across the perpendicular bisector
    // of [ṽ_i, s̃]; the reflection swaps ṽ_i and s̃, so the copy sits at the
    // exact metric distance from ṽ_i. Symmetrically for bases w̃_j.
    let apex_opposite =
        |base1: &[f64; 2], base2: &[f64; 2], r1: f64, r2: f64, away: &[f64; 2]| -> [f64; 2] {
            let d = sub2(base2, base1);
            let len = norm2(&d);
            if len <= 0.0 {
                return *base1;
            }
            let e = [d[0] / len, d[1] / len];
            let nrm = [-e[1], e[0]];
            let xi = (r1 * r1 + len * len - r2 * r2) / (2.0 * len);
            let eta = (r1 * r1 - xi * xi).max(0.0).sqrt();
            let side = super::dot2(&sub2(away, base1), &nrm);
            let sign = if side > 0.0 { -1.0 } else { 1.0 };
            [
                base1[0] + xi * e[0] + sign * eta * nrm[0],
                base1[1] + xi * e[1] + sign * eta * nrm[1],
            ]
        };

    let vts = [v1t, v2t];
    let wts = [w1t, w2t];
    let mut aux_w = [[[0.0f64; 2]; 2]; 2];
    let mut angles_v = [[0.0f64; 2]; 2];
    for i in 0..2 {
        let apex = apex_opposite(&wts[0], &wts[1], c[i][0], c[i][1], &vts[i]);
        for j in 0..2 {
            aux_w[i][j] = reflect_across_bisector(&wts[j], &vts[i], &apex);
            angles_v[i][j] = angle_at2(&vts[i], &xt, &aux_w[i][j]);
        }
    }
    let mut aux_v = [[[0.0f64; 2]; 2]; 2];
    let mut angles_w = [[0.0f64; 2]; 2];
    for j in 0..2 {
        let apex = apex_opposite(&vts[0], &vts[1], c[0][j], c[1][j], &wts[j]);
        for i in 0..2 {
            aux_v[j][i] = reflect_across_bisector(&vts[i], &wts[j], &apex);
            angles_w[i][j] = angle_at2(&wts[j], &xt, &aux_v[j][i]);
        }
    }

    let mut cert = ConeDiscCert {
        x,
        v,
        w,
        planar: [xt, v1t, v2t, w1t, w2t],
        theta,
        theta_interval: [lo.max(0.0), hi.min(PI)],
        aux_w,
        aux_v,
        angles_x,
        angles_v,
        angles_w,
        triangles: Default::default(),
    };

    // Stage 4: all 28 conditions, worst violation wins.
    let reports = cone_disc_conditions(&cert, m);
    let mut worst: Option<&ConditionReport> = None;
    for r in &reports {
        let threshold = if r.group == "(**)" {
            tol.ang * diam
        } else {
            tol.ang.max(1e-12)
        };
        if r.slack < -threshold && worst.map_or(true, |wr| r.slack < wr.slack) {
            worst = Some(r);
        }
    }
    if let Some(wr) = worst {
        return Err(EmbedError::ConditionGroupFailed {
            group: wr.group,
            index: wr.index,
            slack: wr.slack,
        });
    }

    // Stage 5: realize the four triangles on cones.
    for i in 0..2 {
        for j in 0..2 {
            cert.triangles[i][j] = realize_cone_triangle(
                [c[i][j], b[j], a[i]],
                [angles_x[i][j], angles_v[i][j], angles_w[i][j]],
                tol,
            )?;
        }
    }

    Ok(cert)
}

impl Default for ConeTriangle {
    fn default() -> Self {
        ConeTriangle {
            sides: [1.0, 1.0, 1.0],
            angles: [PI / 3.0; 3],
            omega: 2.0 * PI,
            cone_point: None,
            chart: vec![[0.0, 0.0], [1.0, 0.0], [0.5, 3f64.sqrt() / 2.0]],
        }
    }
}
