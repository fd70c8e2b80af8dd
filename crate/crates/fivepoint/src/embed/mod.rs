//! Constructive embeddings.
//!
//! Turns a metric that passes every comparison inequality into an explicit
//! model space together with a placement of the points — a *certificate*
//! that downstream oracles ([`crate::verify`]) can check independently.
//!
//! Four constructions are implemented:
//!
//! * [`embed_euclidean`] — Gram factorization into R⁴ when the associated
//!   form is positive semidefinite;
//! * [`embed_circle`] — arc-length placement on a circle when the five
//!   points carry a cyclic family of tense triples;
//! * [`embed_doubled_polytope`] — the doubling of a convex polytope built
//!   around a 4-point tense set plus one extra point;
//! * [`embed_cone_disc`] — a disc glued from four cone triangles when two
//!   tense pairs share a center.
//!
//! [`embed`] dispatches among them and reports [`EmbedError::NotConstructive`]
//! when no construction applies.

pub mod circle;
pub mod conedisc;
pub mod doubled;
pub mod euclidean;
pub mod product;

use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use thiserror::Error;

use crate::comparison::{lss_all, tense_structure, ComparisonError, TenseError};
use crate::classifier::{match_configuration, ConfigurationMatch};
use crate::metric::FiniteMetric;
use crate::tolerances::Tolerances;

pub use circle::embed_circle;
pub use conedisc::{cone_disc_conditions, embed_cone_disc, realize_cone_triangle, ConditionReport};
pub use doubled::embed_doubled_polytope;
pub use euclidean::embed_euclidean;
pub use product::assemble_product;

/// Version tag carried by every serialized certificate envelope.
pub const CERTIFICATE_SCHEMA_VERSION: u32 = 1;

/// A closed halfspace { y : ⟨normal, y⟩ ≤ offset } with unit normal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Halfspace {
    pub normal: [f64; 3],
    pub offset: f64,
}

impl Halfspace {
    /// Signed excess ⟨n, y⟩ − offset; ≤ 0 inside.
    pub fn excess(&self, y: &[f64; 3]) -> f64 {
        dot3(&self.normal, y) - self.offset
    }

    pub fn contains(&self, y: &[f64; 3], slack: f64) -> bool {
        self.excess(y) <= slack
    }

    /// Mirror image of `y` across the boundary plane.
    pub fn reflect(&self, y: &[f64; 3]) -> [f64; 3] {
        let e = self.excess(y);
        [
            y[0] - 2.0 * e * self.normal[0],
            y[1] - 2.0 * e * self.normal[1],
            y[2] - 2.0 * e * self.normal[2],
        ]
    }
}

/// A triangle with prescribed side lengths and corner angles, realized on a
/// Euclidean cone and unfolded into a planar chart.
///
/// The chart polygon lists vertices in counterclockwise order:
///
/// * flat case (`cone_point == None`): `[P1, P2, Q]` — an ordinary triangle;
/// * singular case: `[P1, P2, Q2, Z, Q1]` — the cone is cut along the
///   geodesic from the third corner to the cone point `Z`, so that corner
///   appears twice (`Q1` adjacent to `P1`, `Q2` adjacent to `P2`), and the
///   two cut edges `[Q2, Z]`, `[Z, Q1]` have equal length.
///
/// `P1` carries `angles[0]`, `P2` carries `angles[1]`, and the third corner's
/// angle `angles[2]` is split between `Q1` and `Q2`. `sides = [a, b, c]` are
/// the lengths opposite the respective corners (`c = |P1 P2|`, `b = |P1 Q1|`,
/// `a = |P2 Q2|`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConeTriangle {
    pub sides: [f64; 3],
    pub angles: [f64; 3],
    /// Total cone angle at the singular point; 2π when flat.
    pub omega: f64,
    /// Position of the cone point in the chart (absent when flat).
    pub cone_point: Option<[f64; 2]>,
    /// Chart polygon, counterclockwise.
    pub chart: Vec<[f64; 2]>,
}

impl ConeTriangle {
    pub fn is_flat(&self) -> bool {
        self.cone_point.is_none()
    }
}

/// Placement of all points in R⁴ (trailing coordinates zero when the
/// configuration is lower-dimensional).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EuclideanCert {
    pub coords: Vec<[f64; 4]>,
}

/// Placement on a circle of circumference `length`; `positions[i] ∈ [0, length)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircleCert {
    pub length: f64,
    pub positions: Vec<f64>,
}

/// Doubling of the convex region `V = ∩ halfspaces` across its boundary.
///
/// Sheet 1 carries `p` and the three `xs`; `q` lives at `s_tilde` on sheet 2.
/// Each halfspace boundary is (a tangent perturbation of) the perpendicular
/// bisector of the segment from `s_tilde` to the matching entry of
/// `facet_targets`, so reflecting `s_tilde` across facet `k` lands exactly on
/// `facet_targets[k]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DoubledPolytopeCert {
    /// Metric index of the tense center.
    pub p: usize,
    /// Metric indices of the other tense points.
    pub xs: [usize; 3],
    /// Metric index of the extra point.
    pub q: usize,
    pub halfspaces: Vec<Halfspace>,
    /// Reflection of `s_tilde` across each facet: the lifted comparison
    /// point q̃ first, then the in-plane points q̃_i in `xs` order.
    pub facet_targets: Vec<[f64; 3]>,
    /// Sheet-1 placements: p̃ (origin) then x̃_1, x̃_2, x̃_3.
    pub sheet1: [[f64; 3]; 4],
    /// Sheet-2 placement of `q`.
    pub s_tilde: [f64; 3],
}

impl DoubledPolytopeCert {
    /// Renders the region `V = ∩ halfspaces` as an OFF-format polytope for
    /// inspection. `V` may be unbounded, so it is first clipped by an axis
    /// box of half-width eight times the placement scale; vertices are the
    /// plane-triple intersections lying in the clipped region, and each
    /// face lists its incident vertices counterclockwise as seen from
    /// outside. Output is deterministic in the certificate.
    pub fn to_off(&self) -> String {
        let scale = self
            .sheet1
            .iter()
            .chain(std::iter::once(&self.s_tilde))
            .flat_map(|p| p.iter())
            .fold(1.0_f64, |m, c| m.max(c.abs()));
        let r = 8.0 * scale;
        let mut planes: Vec<Halfspace> = self.halfspaces.clone();
        for axis in 0..3 {
            for sign in [1.0, -1.0] {
                let mut normal = [0.0; 3];
                normal[axis] = sign;
                planes.push(Halfspace { normal, offset: r });
            }
        }

        let slack = 1e-7 * scale;
        let dedup = 1e-6 * scale;
        let mut vertices: Vec<[f64; 3]> = Vec::new();
        // which planes each vertex lies on, for face assembly
        let mut incident: Vec<Vec<bool>> = Vec::new();
        for a in 0..planes.len() {
            for b in a + 1..planes.len() {
                for c in b + 1..planes.len() {
                    let m = nalgebra::Matrix3::from_rows(&[
                        nalgebra::RowVector3::from_row_slice(&planes[a].normal),
                        nalgebra::RowVector3::from_row_slice(&planes[b].normal),
                        nalgebra::RowVector3::from_row_slice(&planes[c].normal),
                    ]);
                    if m.determinant().abs() < 1e-10 {
                        continue;
                    }
                    let rhs = nalgebra::Vector3::new(
                        planes[a].offset,
                        planes[b].offset,
                        planes[c].offset,
                    );
                    let Some(sol) = m.lu().solve(&rhs) else { continue };
                    let y = [sol[0], sol[1], sol[2]];
                    if !y.iter().all(|v| v.is_finite())
                        || planes.iter().any(|h| h.excess(&y) > slack)
                    {
                        continue;
                    }
                    match vertices.iter().position(|v| dist3d(v, &y) <= dedup) {
                        Some(k) => {
                            for (row, h) in incident[k].iter_mut().zip(&planes) {
                                *row = *row || h.excess(&y).abs() <= slack;
                            }
                        }
                        None => {
                            vertices.push(y);
                            incident.push(
                                planes.iter().map(|h| h.excess(&y).abs() <= slack).collect(),
                            );
                        }
                    }
                }
            }
        }

        let mut faces: Vec<Vec<usize>> = Vec::new();
        for (pi, h) in planes.iter().enumerate() {
            let members: Vec<usize> =
                (0..vertices.len()).filter(|&k| incident[k][pi]).collect();
            if members.len() < 3 {
                continue;
            }
            let mut centroid = [0.0; 3];
            for &k in &members {
                for t in 0..3 {
                    centroid[t] += vertices[k][t] / members.len() as f64;
                }
            }
            // planar basis: sort CCW around the outward normal
            let seed = sub3(&vertices[members[0]], &centroid);
            let e2 = cross3(&h.normal, &seed);
            let n2 = norm3(&e2);
            if n2 < 1e-12 * scale {
                continue;
            }
            let e2 = [e2[0] / n2, e2[1] / n2, e2[2] / n2];
            let e1 = cross3(&e2, &h.normal);
            let mut ordered = members;
            ordered.sort_by(|&u, &v| {
                let du = sub3(&vertices[u], &centroid);
                let dv = sub3(&vertices[v], &centroid);
                let au = dot3(&du, &e2).atan2(dot3(&du, &e1));
                let av = dot3(&dv, &e2).atan2(dot3(&dv, &e1));
                au.total_cmp(&av)
            });
            faces.push(ordered);
        }

        let edges: std::collections::BTreeSet<(usize, usize)> = faces
            .iter()
            .flat_map(|f| {
                f.iter().zip(f.iter().cycle().skip(1)).take(f.len()).map(
                    |(&u, &v)| (u.min(v), u.max(v)),
                )
            })
            .collect();

        let mut out = String::from("OFF\n");
        let _ = writeln!(out, "{} {} {}", vertices.len(), faces.len(), edges.len());
        for v in &vertices {
            let _ = writeln!(out, "{:.12e} {:.12e} {:.12e}", v[0], v[1], v[2]);
        }
        for f in &faces {
            let _ = write!(out, "{}", f.len());
            for k in f {
                let _ = write!(out, " {k}");
            }
            out.push('\n');
        }
        out
    }
}

/// Disc glued from four cone triangles around a shared center.
///
/// Index conventions: `i ∈ {0,1}` ranges over the `v` pair, `j ∈ {0,1}` over
/// the `w` pair, and triangle `(i, j)` has corners `(x, v_i, w_j)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConeDiscCert {
    /// Metric index of the shared center.
    pub x: usize,
    /// Metric indices of the first tense pair's endpoints.
    pub v: [usize; 2],
    /// Metric indices of the second tense pair's endpoints.
    pub w: [usize; 2],
    /// Planar comparison configuration `[x̃, ṽ1, ṽ2, w̃1, w̃2]`.
    pub planar: [[f64; 2]; 5],
    /// Opening angle between the rays x̃→ṽ2 and x̃→w̃1.
    pub theta: f64,
    /// Feasible interval the opening angle was chosen from (its midpoint).
    pub theta_interval: [f64; 2],
    /// `aux_w[i][j]`: the copy of w̃_j attached at base ṽ_i
    /// (|ṽ_i − aux_w[i][j]| = d(v_i, w_j) exactly).
    pub aux_w: [[[f64; 2]; 2]; 2],
    /// `aux_v[j][i]`: the copy of ṽ_i attached at base w̃_j.
    pub aux_v: [[[f64; 2]; 2]; 2],
    /// `angles_x[i][j]`: disc angle at the center in triangle (i, j).
    pub angles_x: [[f64; 2]; 2],
    /// `angles_v[i][j]`: disc angle at v_i in triangle (i, j).
    pub angles_v: [[f64; 2]; 2],
    /// `angles_w[i][j]`: disc angle at w_j in triangle (i, j).
    pub angles_w: [[f64; 2]; 2],
    /// `triangles[i][j]`: realized cone triangle with corners (x, v_i, w_j).
    pub triangles: [[ConeTriangle; 2]; 2],
}

/// Product decomposition: d(u,v)² = Σ_k weight_k · d_k(u,v)².
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductCert {
    pub factors: Vec<ProductFactor>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductFactor {
    pub weight: f64,
    pub certificate: EmbeddingCertificate,
}

/// A verifiable placement of the metric's points in a model space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum EmbeddingCertificate {
    Euclidean(EuclideanCert),
    Circle(CircleCert),
    DoubledPolytope(DoubledPolytopeCert),
    ConeDisc(ConeDiscCert),
    Product(ProductCert),
}

impl EmbeddingCertificate {
    pub fn kind(&self) -> &'static str {
        match self {
            EmbeddingCertificate::Euclidean(_) => "euclidean",
            EmbeddingCertificate::Circle(_) => "circle",
            EmbeddingCertificate::DoubledPolytope(_) => "doubled_polytope",
            EmbeddingCertificate::ConeDisc(_) => "cone_disc",
            EmbeddingCertificate::Product(_) => "product",
        }
    }
}

/// Serialization envelope: certificate plus schema version.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateEnvelope {
    pub schema_version: u32,
    pub certificate: EmbeddingCertificate,
}

impl CertificateEnvelope {
    pub fn new(certificate: EmbeddingCertificate) -> Self {
        CertificateEnvelope {
            schema_version: CERTIFICATE_SCHEMA_VERSION,
            certificate,
        }
    }
}

#[derive(Debug, Error)]
pub enum EmbedError {
    #[error(transparent)]
    Comparison(#[from] ComparisonError),
    #[error(transparent)]
    Tense(#[from] TenseError),
    #[error("comparison inequality fails at center {center}: min {min:.3e} with λ = {lambda:?}")]
    LssFails {
        center: String,
        lambda: Vec<f64>,
        min: f64,
    },
    #[error("associated form not positive semidefinite: min eigenvalue {min_eigenvalue:.3e}")]
    NotPsd {
        min_eigenvalue: f64,
        eigenvector: Vec<f64>,
    },
    #[error("cyclic tightness fails at position {index}: defect {defect:.3e}")]
    NotCyclic { index: usize, defect: f64 },
    #[error("feasible arc for satellite point {point} is empty ([{lo:.6}, {hi:.6}])")]
    InfeasibleArcs { point: usize, lo: f64, hi: f64 },
    #[error("ball system infeasible: best max-violation {violation:.3e}")]
    InfeasibleBalls { violation: f64, at: [f64; 3] },
    #[error("edge-proximity nudging exhausted after {attempts} attempts")]
    NudgeExhausted { attempts: u32 },
    #[error("opening-angle interval empty: [{lo:.6}, {hi:.6}]")]
    ThetaInfeasible { lo: f64, hi: f64 },
    #[error("condition group {group} fails at index {index}: slack {slack:.3e}")]
    ConditionGroupFailed {
        group: &'static str,
        index: usize,
        slack: f64,
    },
    #[error("cone apex falls outside its chart quadrilateral at ({:.6}, {:.6})", z[0], z[1])]
    ApexOutside { z: [f64; 2] },
    #[error("no apex position matches the prescribed corner angle")]
    NoRoot,
    #[error("side lengths {sides:?} violate the triangle inequality")]
    TriangleInequality { sides: [f64; 3] },
    #[error("corner {index} angle {angle:.6} below its comparison angle {model:.6}")]
    AngleBelowModel {
        index: usize,
        angle: f64,
        model: f64,
    },
    #[error("angle sum {sum:.6} below π")]
    AngleSumBelowPi { sum: f64 },
    #[error("product decomposition mismatch on pair ({}, {}): residual {residual:.3e}", pair.0, pair.1)]
    DecompositionMismatch {
        pair: (String, String),
        residual: f64,
    },
    #[error("no constructive embedding applies: {reason}")]
    NotConstructive { reason: String },
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

// ---------------------------------------------------------------------------
// Small shared geometry helpers (2D/3D on plain arrays).
// ---------------------------------------------------------------------------

pub(crate) fn dot2(u: &[f64; 2], v: &[f64; 2]) -> f64 {
    u[0] * v[0] + u[1] * v[1]
}

pub(crate) fn sub2(u: &[f64; 2], v: &[f64; 2]) -> [f64; 2] {
    [u[0] - v[0], u[1] - v[1]]
}

pub(crate) fn norm2(u: &[f64; 2]) -> f64 {
    u[0].hypot(u[1])
}

pub(crate) fn dist2d(u: &[f64; 2], v: &[f64; 2]) -> f64 {
    norm2(&sub2(u, v))
}

pub(crate) fn cross2(u: &[f64; 2], v: &[f64; 2]) -> f64 {
    u[0] * v[1] - u[1] * v[0]
}

pub(crate) fn dot3(u: &[f64; 3], v: &[f64; 3]) -> f64 {
    u[0] * v[0] + u[1] * v[1] + u[2] * v[2]
}

pub(crate) fn sub3(u: &[f64; 3], v: &[f64; 3]) -> [f64; 3] {
    [u[0] - v[0], u[1] - v[1], u[2] - v[2]]
}

pub(crate) fn norm3(u: &[f64; 3]) -> f64 {
    dot3(u, u).sqrt()
}

pub(crate) fn dist3d(u: &[f64; 3], v: &[f64; 3]) -> f64 {
    norm3(&sub3(u, v))
}

pub(crate) fn cross3(u: &[f64; 3], v: &[f64; 3]) -> [f64; 3] {
    [
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    ]
}

pub(crate) fn scale3(u: &[f64; 3], s: f64) -> [f64; 3] {
    [u[0] * s, u[1] * s, u[2] * s]
}

pub(crate) fn add3(u: &[f64; 3], v: &[f64; 3]) -> [f64; 3] {
    [u[0] + v[0], u[1] + v[1], u[2] + v[2]]
}

/// Angle at a triangle corner with adjacent sides `adj1`, `adj2` and opposite
/// side `opp`, by the law of cosines (clamped). Zero when a side degenerates.
pub(crate) fn model_angle(adj1: f64, adj2: f64, opp: f64) -> f64 {
    if adj1 <= 0.0 || adj2 <= 0.0 {
        return 0.0;
    }
    let c = (adj1 * adj1 + adj2 * adj2 - opp * opp) / (2.0 * adj1 * adj2);
    c.clamp(-1.0, 1.0).acos()
}

/// Unsigned angle at `vertex` between rays toward `a` and `b` (2D).
pub(crate) fn angle_at2(vertex: &[f64; 2], a: &[f64; 2], b: &[f64; 2]) -> f64 {
    let u = sub2(a, vertex);
    let v = sub2(b, vertex);
    let nu = norm2(&u);
    let nv = norm2(&v);
    if nu <= 0.0 || nv <= 0.0 {
        return 0.0;
    }
    (dot2(&u, &v) / (nu * nv)).clamp(-1.0, 1.0).acos()
}

/// Reflect point `p` across the perpendicular bisector of segment [a, b].
/// Identity when a == b.
pub(crate) fn reflect_across_bisector(p: &[f64; 2], a: &[f64; 2], b: &[f64; 2]) -> [f64; 2] {
    let d = sub2(b, a);
    let len = norm2(&d);
    if len <= 0.0 {
        return *p;
    }
    let n = [d[0] / len, d[1] / len];
    let mid = [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0];
    let e = dot2(&sub2(p, &mid), &n);
    [p[0] - 2.0 * e * n[0], p[1] - 2.0 * e * n[1]]
}

pub(crate) fn wrap_angle(mut a: f64) -> f64 {
    use std::f64::consts::PI;
    while a > PI {
        a -= 2.0 * PI;
    }
    while a <= -PI {
        a += 2.0 * PI;
    }
    a
}

/// Strict interior crossing of segments [a,b] and [c,d] (touching at
/// endpoints does not count), with a scale-relative slack.
pub(crate) fn segments_cross(a: &[f64; 2], b: &[f64; 2], c: &[f64; 2], d: &[f64; 2]) -> bool {
    let r = sub2(b, a);
    let s = sub2(d, c);
    let denom = cross2(&r, &s);
    let scale = norm2(&r).max(norm2(&s)).max(f64::MIN_POSITIVE);
    if denom.abs() <= 1e-14 * scale * scale {
        return false; // Parallel or degenerate: no proper crossing.
    }
    let qp = sub2(c, a);
    let t = cross2(&qp, &s) / denom;
    let u = cross2(&qp, &r) / denom;
    let eps = 1e-12;
    t > eps && t < 1.0 - eps && u > eps && u < 1.0 - eps
}

/// Ray-casting point-in-polygon test (boundary counts as inside up to the
/// caster's luck; callers needing certainty should add their own slack).
pub(crate) fn point_in_polygon(poly: &[[f64; 2]], p: &[f64; 2]) -> bool {
    let mut inside = false;
    let n = poly.len();
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        if (a[1] > p[1]) != (b[1] > p[1]) {
            let x = a[0] + (p[1] - a[1]) / (b[1] - a[1]) * (b[0] - a[0]);
            if p[0] < x {
                inside = !inside;
            }
        }
    }
    inside
}

/// Twice the signed area of a polygon (positive for counterclockwise).
pub(crate) fn polygon_area2(poly: &[[f64; 2]]) -> f64 {
    let n = poly.len();
    (0..n)
        .map(|i| cross2(&poly[i], &poly[(i + 1) % n]))
        .sum()
}

/// Interior angle of a counterclockwise polygon at vertex `k`, in (0, 2π);
/// values above π indicate a reflex corner.
pub(crate) fn interior_angle(poly: &[[f64; 2]], k: usize) -> f64 {
    let n = poly.len();
    let prev = poly[(k + n - 1) % n];
    let v = poly[k];
    let next = poly[(k + 1) % n];
    let din = sub2(&v, &prev);
    let dout = sub2(&next, &v);
    let turn = wrap_angle(dout[1].atan2(dout[0]) - din[1].atan2(din[0]));
    std::f64::consts::PI - turn
}

// ---------------------------------------------------------------------------
// Dispatcher.
// ---------------------------------------------------------------------------

/// Find a constructive embedding for `m`.
///
/// Order of attempts: collapse exact duplicates, check every comparison
/// inequality, try the flat (Gram) embedding, then — for five points — a
/// 4-point tense set (doubled polytope), a cyclic tense family (circle), or
/// two tense pairs with a shared center (cone disc).
///
/// Deterministic given `seed`; the seed feeds the comparison-configuration
/// solver and the facet nudging loop of the doubled-polytope construction.
pub fn embed(
    m: &FiniteMetric,
    seed: u64,
    tol: &Tolerances,
) -> Result<EmbeddingCertificate, EmbedError> {
    let n = m.n();
    let diam = m.diameter();

    if diam <= 0.0 {
        // All points coincide.
        return Ok(EmbeddingCertificate::Euclidean(EuclideanCert {
            coords: vec![[0.0; 4]; n],
        }));
    }

    // Collapse duplicate points and embed the reduced metric.
    let dup_tol = tol.metric * diam;
    let mut reps: Vec<usize> = Vec::new();
    let mut assign: Vec<usize> = Vec::with_capacity(n);
    for i in 0..n {
        match reps.iter().position(|&r| m.d(r, i) <= dup_tol) {
            Some(k) => assign.push(k),
            None => {
                reps.push(i);
                assign.push(reps.len() - 1);
            }
        }
    }
    if reps.len() < n {
        let reduced = m.restrict(&reps);
        return match embed(&reduced, seed, tol)? {
            EmbeddingCertificate::Euclidean(c) => {
                let coords = assign.iter().map(|&k| c.coords[k]).collect();
                Ok(EmbeddingCertificate::Euclidean(EuclideanCert { coords }))
            }
            EmbeddingCertificate::Circle(c) => {
                let positions = assign.iter().map(|&k| c.positions[k]).collect();
                Ok(EmbeddingCertificate::Circle(CircleCert {
                    length: c.length,
                    positions,
                }))
            }
            // The reduced metric has at most four points, so only the flat
            // and circle constructions can have produced a certificate.
            other => Err(EmbedError::Internal(format!(
                "unexpected certificate kind {} for a reduced metric",
                other.kind()
            ))),
        };
    }

    // Every comparison inequality must hold.
    let lss = lss_all(m, tol)?;
    if !lss.holds {
        let w = lss
            .witness()
            .ok_or_else(|| EmbedError::Internal("lss_all failed without witness".into()))?;
        return Err(EmbedError::LssFails {
            center: w.center.clone(),
            lambda: w.argmin.clone(),
            min: w.min_value,
        });
    }

    // Flat case.
    match embed_euclidean(m, tol) {
        Ok(c) => return Ok(EmbeddingCertificate::Euclidean(c)),
        Err(EmbedError::NotPsd { .. }) => {}
        Err(e) => return Err(e),
    }

    if n < 5 {
        return Err(EmbedError::NotConstructive {
            reason: format!(
                "metric on {n} points is not flat and the curved constructions need five points"
            ),
        });
    }

    let structure = tense_structure(m, tol)?;

    if let Some(t4) = structure.fours.first() {
        let q = (0..n)
            .find(|i| !t4.points.contains(i))
            .ok_or_else(|| EmbedError::Internal("4-point tense set covers all points".into()))?;
        let cert = embed_doubled_polytope(m, t4, q, seed, tol)?;
        return Ok(EmbeddingCertificate::DoubledPolytope(cert));
    }

    match match_configuration(m, &structure.triples) {
        ConfigurationMatch::Cyclic { order } => {
            let cert = embed_circle(m, &order, tol)?;
            Ok(EmbeddingCertificate::Circle(cert))
        }
        ConfigurationMatch::SharedCenter { x, v, w }
        | ConfigurationMatch::FourPlusTwo { x, v, w } => {
            let cert = embed_cone_disc(m, x, v, w, tol)?;
            Ok(EmbeddingCertificate::ConeDisc(cert))
        }
        ConfigurationMatch::NoMatch => Err(EmbedError::NotConstructive {
            reason: "no admissible tense configuration found".into(),
        }),
    }
}
