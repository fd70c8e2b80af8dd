//! Product assembly: combine factor embeddings with nonnegative weights.

use crate::metric::FiniteMetric;
use crate::tolerances::Tolerances;
use crate::verify::induced_distance;

use super::{EmbedError, EmbeddingCertificate, ProductCert, ProductFactor};

/// Assemble a product certificate from verified factor embeddings.
///
/// Requires `d(u,v)² = Σ_k weight_k · d_k(u,v)²` for every pair, where `d_k`
/// is the distance induced by factor `k`; the worst violation (relative to
/// the squared diameter) beyond the configuration tolerance is reported as
/// [`EmbedError::DecompositionMismatch`].
pub fn assemble_product(
    m: &FiniteMetric,
    factors: Vec<(f64, EmbeddingCertificate)>,
    tol: &Tolerances,
) -> Result<ProductCert, EmbedError> {
    if factors.is_empty() {
        return Err(EmbedError::Internal("product needs at least one factor".into()));
    }
    for (w, _) in &factors {
        if !w.is_finite() || *w < 0.0 {
            return Err(EmbedError::Internal(format!(
                "product weight {w} is not a nonnegative number"
            )));
        }
    }

    let n = m.n();
    let diam = m.diameter().max(f64::MIN_POSITIVE);
    let slack = tol.cfg * diam * diam;

    let mut worst: Option<((usize, usize), f64)> = None;
    for i in 0..n {
        for j in (i + 1)..n {
            let mut sum = 0.0;
            for (w, cert) in &factors {
                let dk = induced_distance(cert, i, j)
                    .map_err(|e| EmbedError::Internal(format!("factor distance: {e}")))?;
                sum += w * dk * dk;
            }
            let residual = (sum - m.d(i, j) * m.d(i, j)).abs();
            if worst.map_or(true, |(_, r)| residual > r) {
                worst = Some(((i, j), residual));
            }
        }
    }

    if let Some(((i, j), residual)) = worst {
        if residual > slack {
            return Err(EmbedError::DecompositionMismatch {
                pair: (m.label(i).to_string(), m.label(j).to_string()),
                residual,
            });
        }
    }

    Ok(ProductCert {
        factors: factors
            .into_iter()
            .map(|(weight, certificate)| ProductFactor {
                weight,
                certificate,
            })
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embed::{CircleCert, EuclideanCert};
    use crate::verify::circle_distance;

    /// d² = 1·d_E² + 2·d_C² over five points.
    #[test]
    fn accepts_exact_decomposition() {
        let coords: Vec<[f64; 4]> = vec![
            [0.0, 0.0, 0.0, 0.0],
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [1.0, 1.0, 0.0, 0.0],
            [0.5, 0.5, 0.0, 0.0],
        ];
        let pos = [0.0, 1.0, 2.0, 3.0, 4.0];
        let length = 5.0;
        let mut d = vec![vec![0.0; 5]; 5];
        for i in 0..5 {
            for j in 0..5 {
                let de: f64 = (0..4)
                    .map(|k| (coords[i][k] - coords[j][k]).powi(2))
                    .sum::<f64>()
                    .sqrt();
                let dc = circle_distance(length, pos[i], pos[j]).unwrap();
                d[i][j] = (de * de + 2.0 * dc * dc).sqrt();
            }
        }
        let m = FiniteMetric::from_matrix(d);
        let factors = vec![
            (
                1.0,
                EmbeddingCertificate::Euclidean(EuclideanCert { coords }),
            ),
            (
                2.0,
                EmbeddingCertificate::Circle(CircleCert {
                    length,
                    positions: pos.to_vec(),
                }),
            ),
        ];
        let cert = assemble_product(&m, factors, &Tolerances::default()).unwrap();
        assert_eq!(cert.factors.len(), 2);
    }

    #[test]
    fn rejects_wrong_weights() {
        let coords: Vec<[f64; 4]> = vec![
            [0.0; 4],
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [1.0, 1.0, 0.0, 0.0],
            [0.5, 0.5, 0.0, 0.0],
        ];
        let mut d = vec![vec![0.0; 5]; 5];
        for i in 0..5 {
            for j in 0..5 {
                d[i][j] = (0..4)
                    .map(|k| (coords[i][k] - coords[j][k]).powi(2))
                    .sum::<f64>()
                    .sqrt();
            }
        }
        let m = FiniteMetric::from_matrix(d);
        let factors = vec![(
            4.0,
            EmbeddingCertificate::Euclidean(EuclideanCert { coords }),
        )];
        match assemble_product(&m, factors, &Tolerances::default()) {
            Err(EmbedError::DecompositionMismatch { .. }) => {}
            other => panic!("expected DecompositionMismatch, got {other:?}"),
        }
    }
}
