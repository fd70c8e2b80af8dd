//! Independent oracles: check certificates and comparison verdicts against
//! direct geometric computations that share no code with the constructions.

pub mod circle;
pub mod doubling;
pub mod grid;
pub mod sample;
pub mod surface;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::embed::EmbeddingCertificate;
use crate::metric::FiniteMetric;

pub use circle::circle_distance;
pub use doubling::doubling_distance;
pub use grid::oracle_lss_grid;
pub use sample::{sample_metric, SampleFamily, SampleParams};
pub use surface::{surface_distance, SurfaceDistances, SurfaceGeometry, UnfoldingPath};

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("bad input: {0}")]
    BadInput(String),
    #[error("bad sampler parameters: {0}")]
    BadParams(String),
    #[error("point {point:?} lies outside the region by {violation:.3e}")]
    PointOutsideV { point: [f64; 3], violation: f64 },
    #[error("oracle failure: {0}")]
    OracleFailure(String),
}

/// One verified pair: the metric target against the certificate-induced
/// distance. `rel_err` is measured relative to the metric diameter.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PairCheck {
    pub i: usize,
    pub j: usize,
    pub labels: (String, String),
    pub target: f64,
    pub induced: f64,
    pub abs_err: f64,
    pub rel_err: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationReport {
    pub pairs: Vec<PairCheck>,
    /// All relative errors within the caller's tolerance.
    pub pass: bool,
    pub rel_tol: f64,
    /// Index into `pairs` of the worst relative error.
    pub worst: Option<usize>,
    /// A surface-distance search hit its depth cap; induced values are then
    /// upper bounds only.
    pub depth_exhausted: bool,
}

impl VerificationReport {
    pub fn worst_pair(&self) -> Option<&PairCheck> {
        self.worst.map(|k| &self.pairs[k])
    }
}

/// Placement of metric point `idx` on the doubled polytope: sheet and
/// coordinates.
fn doubled_placement(
    cert: &crate::embed::DoubledPolytopeCert,
    idx: usize,
) -> Result<(u8, [f64; 3]), VerifyError> {
    if idx == cert.p {
        return Ok((1, cert.sheet1[0]));
    }
    if idx == cert.q {
        return Ok((2, cert.s_tilde));
    }
    for (k, &x) in cert.xs.iter().enumerate() {
        if idx == x {
            return Ok((1, cert.sheet1[k + 1]));
        }
    }
    Err(VerifyError::BadInput(format!(
        "metric index {idx} not placed by the certificate"
    )))
}

/// Surface vertex id (0 = x, 1-2 = v pair, 3-4 = w pair) of metric point
/// `idx` on a cone disc.
fn conedisc_vertex(
    cert: &crate::embed::ConeDiscCert,
    idx: usize,
) -> Result<usize, VerifyError> {
    if idx == cert.x {
        return Ok(0);
    }
    for (k, &v) in cert.v.iter().enumerate() {
        if idx == v {
            return Ok(1 + k);
        }
    }
    for (k, &w) in cert.w.iter().enumerate() {
        if idx == w {
            return Ok(3 + k);
        }
    }
    Err(VerifyError::BadInput(format!(
        "metric index {idx} not placed by the certificate"
    )))
}

fn euclidean_dist(u: &[f64; 4], v: &[f64; 4]) -> f64 {
    (0..4)
        .map(|k| (u[k] - v[k]) * (u[k] - v[k]))
        .sum::<f64>()
        .sqrt()
}

/// Distance between metric points `i` and `j` induced by the certificate.
///
/// Convenient for spot checks and product factors; [`verify_certificate`]
/// computes whole reports more efficiently.
pub fn induced_distance(
    cert: &EmbeddingCertificate,
    i: usize,
    j: usize,
) -> Result<f64, VerifyError> {
    match cert {
        EmbeddingCertificate::Euclidean(c) => {
            let get = |k: usize| {
                c.coords
                    .get(k)
                    .ok_or_else(|| VerifyError::BadInput(format!("no coordinates for point {k}")))
            };
            Ok(euclidean_dist(get(i)?, get(j)?))
        }
        EmbeddingCertificate::Circle(c) => {
            let get = |k: usize| {
                c.positions
                    .get(k)
                    .copied()
                    .ok_or_else(|| VerifyError::BadInput(format!("no position for point {k}")))
            };
            circle_distance(c.length, get(i)?, get(j)?)
        }
        EmbeddingCertificate::DoubledPolytope(c) => {
            let a = doubled_placement(c, i)?;
            let b = doubled_placement(c, j)?;
            let scale = doubling::region_scale(c);
            doubling_distance(c, a, b, 1e-6 * scale)
        }
        EmbeddingCertificate::ConeDisc(c) => {
            let geom = SurfaceGeometry::new(c)?;
            let d = geom.distances(surface::DEFAULT_MAX_DEPTH);
            Ok(d.dist[conedisc_vertex(c, i)?][conedisc_vertex(c, j)?])
        }
        EmbeddingCertificate::Product(p) => {
            let mut sum = 0.0;
            for f in &p.factors {
                let d = induced_distance(&f.certificate, i, j)?;
                sum += f.weight * d * d;
            }
            Ok(sum.sqrt())
        }
    }
}

fn certificate_points(cert: &EmbeddingCertificate) -> Option<usize> {
    match cert {
        EmbeddingCertificate::Euclidean(c) => Some(c.coords.len()),
        EmbeddingCertificate::Circle(c) => Some(c.positions.len()),
        EmbeddingCertificate::DoubledPolytope(_) | EmbeddingCertificate::ConeDisc(_) => Some(5),
        EmbeddingCertificate::Product(p) => p
            .factors
            .first()
            .and_then(|f| certificate_points(&f.certificate)),
    }
}

/// Check a certificate against the metric: every pairwise induced distance
/// must match within `rel_tol` × diameter.
pub fn verify_certificate(
    m: &FiniteMetric,
    cert: &EmbeddingCertificate,
    rel_tol: f64,
) -> Result<VerificationReport, VerifyError> {
    let n = m.n();
    if certificate_points(cert) != Some(n) {
        return Err(VerifyError::BadInput(format!(
            "certificate places {:?} points, metric has {n}",
            certificate_points(cert)
        )));
    }
    let diam = m.diameter().max(f64::MIN_POSITIVE);

    // Cone-disc distances come from one shared geometry so the depth flag is
    // reported coherently; everything else goes through induced_distance.
    let mut cone: Option<(SurfaceDistances, &crate::embed::ConeDiscCert)> = None;
    if let EmbeddingCertificate::ConeDisc(c) = cert {
        let geom = SurfaceGeometry::new(c)?;
        cone = Some((geom.distances(surface::DEFAULT_MAX_DEPTH), c));
    }

    let mut pairs = Vec::with_capacity(n * (n - 1) / 2);
    let mut worst: Option<usize> = None;
    let mut depth_exhausted = false;
    for i in 0..n {
        for j in (i + 1)..n {
            let induced = match &cone {
                Some((d, c)) => {
                    depth_exhausted = d.exhausted;
                    d.dist[conedisc_vertex(c, i)?][conedisc_vertex(c, j)?]
                }
                None => induced_distance(cert, i, j)?,
            };
            let target = m.d(i, j);
            let abs_err = (induced - target).abs();
            let rel_err = abs_err / diam;
            let pass = rel_err <= rel_tol;
            pairs.push(PairCheck {
                i,
                j,
                labels: (m.label(i).to_string(), m.label(j).to_string()),
                target,
                induced,
                abs_err,
                rel_err,
                pass,
            });
            let k = pairs.len() - 1;
            if worst.map_or(true, |w| pairs[k].rel_err > pairs[w].rel_err) {
                worst = Some(k);
            }
        }
    }

    let pass = pairs.iter().all(|p| p.pass);
    Ok(VerificationReport {
        pairs,
        pass,
        rel_tol,
        worst,
        depth_exhausted,
    })
}
