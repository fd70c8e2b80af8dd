//! Seeded samplers for five-point metrics from model nonnegatively curved
//! spaces: round sphere, flat torus, Euclidean space, circle, and the
//! doubling of a random convex polygon.

use std::f64::consts::PI;
use std::str::FromStr;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::VerifyError;
use crate::embed::point_in_polygon;
use crate::metric::{default_labels, validate_metric, FiniteMetric, Mode, RawMetric};
use crate::tolerances::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleFamily {
    Sphere,
    FlatTorus,
    Euclidean,
    Circle,
    DoubledPolygon,
}

impl SampleFamily {
    pub const ALL: [SampleFamily; 5] = [
        SampleFamily::Sphere,
        SampleFamily::FlatTorus,
        SampleFamily::Euclidean,
        SampleFamily::Circle,
        SampleFamily::DoubledPolygon,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            SampleFamily::Sphere => "sphere",
            SampleFamily::FlatTorus => "flat_torus",
            SampleFamily::Euclidean => "euclidean",
            SampleFamily::Circle => "circle",
            SampleFamily::DoubledPolygon => "doubled_polygon",
        }
    }
}

impl FromStr for SampleFamily {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sphere" => Ok(SampleFamily::Sphere),
            "flat_torus" => Ok(SampleFamily::FlatTorus),
            "euclidean" => Ok(SampleFamily::Euclidean),
            "circle" => Ok(SampleFamily::Circle),
            "doubled_polygon" => Ok(SampleFamily::DoubledPolygon),
            other => Err(format!(
                "unknown family `{other}`; expected sphere, flat_torus, euclidean, circle, or doubled_polygon"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SampleParams {
    pub sphere_radius: f64,
    pub torus_periods: [f64; 2],
    pub circle_length: f64,
    pub polygon_vertices: usize,
    /// Linear scale for the Euclidean box and the polygon circumradius.
    pub scale: f64,
}

impl Default for SampleParams {
    fn default() -> Self {
        SampleParams {
            sphere_radius: 1.0,
            torus_periods: [1.0, 1.3],
            circle_length: 2.0 * PI,
            polygon_vertices: 7,
            scale: 1.0,
        }
    }
}

fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    // Box-Muller; avoids log(0).
    let u: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let v: f64 = rng.gen_range(0.0..2.0 * PI);
    (-2.0 * u.ln()).sqrt() * v.cos()
}

fn unit_vector3(rng: &mut ChaCha8Rng) -> [f64; 3] {
    loop {
        let v = [gaussian(rng), gaussian(rng), gaussian(rng)];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 1e-6 {
            return [v[0] / n, v[1] / n, v[2] / n];
        }
    }
}

fn sphere_distance(r: f64, u: &[f64; 3], v: &[f64; 3]) -> f64 {
    let dot: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
    let cross = [
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    ];
    let cn = (cross[0] * cross[0] + cross[1] * cross[1] + cross[2] * cross[2]).sqrt();
    r * cn.atan2(dot)
}

fn torus_distance(periods: &[f64; 2], a: &[f64; 2], b: &[f64; 2]) -> f64 {
    let mut s = 0.0;
    for k in 0..2 {
        let d = (a[k] - b[k]).abs();
        let d = d.min(periods[k] - d);
        s += d * d;
    }
    s.sqrt()
}

/// Random convex polygon: vertices on the circle of the given radius at
/// sorted angles with a minimum angular gap.
fn random_convex_polygon(rng: &mut ChaCha8Rng, n: usize, radius: f64) -> Vec<[f64; 2]> {
    let min_gap = 0.1 * 2.0 * PI / n as f64;
    loop {
        let mut angles: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..2.0 * PI)).collect();
        angles.sort_by(f64::total_cmp);
        let ok = (0..n).all(|k| {
            let next = if k + 1 == n {
                angles[0] + 2.0 * PI
            } else {
                angles[k + 1]
            };
            next - angles[k] >= min_gap
        });
        if ok {
            return angles
                .iter()
                .map(|a| [radius * a.cos(), radius * a.sin()])
                .collect();
        }
    }
}

fn dist2(a: &[f64; 2], b: &[f64; 2]) -> f64 {
    ((a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1])).sqrt()
}

fn reflect_across_line(p: &[f64; 2], a: &[f64; 2], b: &[f64; 2]) -> [f64; 2] {
    let d = [b[0] - a[0], b[1] - a[1]];
    let l2 = d[0] * d[0] + d[1] * d[1];
    let t = ((p[0] - a[0]) * d[0] + (p[1] - a[1]) * d[1]) / l2;
    let foot = [a[0] + t * d[0], a[1] + t * d[1]];
    [2.0 * foot[0] - p[0], 2.0 * foot[1] - p[1]]
}

/// Geodesic distance on the double of a convex polygon. Cross-sheet
/// geodesics either cross one edge (straightened by reflecting the far
/// endpoint) or bend at one polygon vertex.
fn doubled_polygon_distance(
    poly: &[[f64; 2]],
    a: (u8, [f64; 2]),
    b: (u8, [f64; 2]),
) -> f64 {
    if a.0 == b.0 {
        return dist2(&a.1, &b.1);
    }
    let n = poly.len();
    let mut best = f64::INFINITY;
    for k in 0..n {
        let (ea, eb) = (poly[k], poly[(k + 1) % n]);
        let br = reflect_across_line(&b.1, &ea, &eb);
        // Does the straight segment a -> reflected(b) cross the edge segment?
        let d = [br[0] - a.1[0], br[1] - a.1[1]];
        let e = [eb[0] - ea[0], eb[1] - ea[1]];
        let det = d[0] * e[1] - d[1] * e[0];
        if det.abs() > 1e-14 {
            let r = [ea[0] - a.1[0], ea[1] - a.1[1]];
            let t = (r[0] * e[1] - r[1] * e[0]) / det;
            let u = (r[0] * d[1] - r[1] * d[0]) / det;
            if (0.0..=1.0).contains(&t) && (0.0..=1.0).contains(&u) {
                best = best.min(dist2(&a.1, &br));
            }
        }
        // Bend at a vertex.
        best = best.min(dist2(&a.1, &ea) + dist2(&ea, &b.1));
    }
    best
}

/// Five points from the named model space, with the family's intrinsic
/// distance. Deterministic in `seed`.
pub fn sample_metric(
    family: SampleFamily,
    params: &SampleParams,
    seed: u64,
) -> Result<FiniteMetric, VerifyError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut d = vec![vec![0.0; 5]; 5];
    let fill = |d: &mut Vec<Vec<f64>>, f: &dyn Fn(usize, usize) -> f64| {
        for i in 0..5 {
            for j in (i + 1)..5 {
                let v = f(i, j);
                d[i][j] = v;
                d[j][i] = v;
            }
        }
    };
    match family {
        SampleFamily::Sphere => {
            let r = params.sphere_radius;
            if !(r > 0.0 && r.is_finite()) {
                return Err(VerifyError::BadParams(format!("sphere radius {r}")));
            }
            let pts: Vec<[f64; 3]> = (0..5).map(|_| unit_vector3(&mut rng)).collect();
            fill(&mut d, &|i, j| sphere_distance(r, &pts[i], &pts[j]));
        }
        SampleFamily::FlatTorus => {
            let [pa, pb] = params.torus_periods;
            if !(pa > 0.0 && pb > 0.0 && pa.is_finite() && pb.is_finite()) {
                return Err(VerifyError::BadParams(format!(
                    "torus periods {pa} x {pb}"
                )));
            }
            let pts: Vec<[f64; 2]> = (0..5)
                .map(|_| [rng.gen_range(0.0..pa), rng.gen_range(0.0..pb)])
                .collect();
            fill(&mut d, &|i, j| {
                torus_distance(&params.torus_periods, &pts[i], &pts[j])
            });
        }
        SampleFamily::Euclidean => {
            let s = params.scale;
            if !(s > 0.0 && s.is_finite()) {
                return Err(VerifyError::BadParams(format!("scale {s}")));
            }
            let pts: Vec<[f64; 3]> = (0..5)
                .map(|_| {
                    [
                        rng.gen_range(-s..s),
                        rng.gen_range(-s..s),
                        rng.gen_range(-s..s),
                    ]
                })
                .collect();
            fill(&mut d, &|i, j| {
                pts[i]
                    .iter()
                    .zip(&pts[j])
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt()
            });
        }
        SampleFamily::Circle => {
            let len = params.circle_length;
            if !(len > 0.0 && len.is_finite()) {
                return Err(VerifyError::BadParams(format!("circle length {len}")));
            }
            let pos: Vec<f64> = (0..5).map(|_| rng.gen_range(0.0..len)).collect();
            fill(&mut d, &|i, j| {
                let g = (pos[i] - pos[j]).abs();
                g.min(len - g)
            });
        }
        SampleFamily::DoubledPolygon => {
            let n = params.polygon_vertices;
            if !(3..=64).contains(&n) {
                return Err(VerifyError::BadParams(format!(
                    "polygon vertex count {n}; expected 3..=64"
                )));
            }
            let poly = random_convex_polygon(&mut rng, n, params.scale);
            let mut pts: Vec<(u8, [f64; 2])> = Vec::with_capacity(5);
            while pts.len() < 5 {
                let sheet = if rng.gen_bool(0.5) { 1 } else { 2 };
                let cand = [
                    rng.gen_range(-params.scale..params.scale),
                    rng.gen_range(-params.scale..params.scale),
                ];
                if point_in_polygon(&poly, &cand) {
                    pts.push((sheet, cand));
                }
            }
            fill(&mut d, &|i, j| {
                doubled_polygon_distance(&poly, pts[i], pts[j])
            });
        }
    }

    validate_metric(
        RawMetric {
            labels: default_labels(5),
            d,
            mode: Mode::Metric,
        },
        false,
        &Tolerances::default(),
    )
    .map_err(|e| VerifyError::OracleFailure(format!("sampled distances are not a metric: {e}")))
}
