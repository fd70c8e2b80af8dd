//! Flat embedding via Gram factorization of the associated form.

use nalgebra::SymmetricEigen;

use crate::form::associated_form;
use crate::metric::{FiniteMetric, Permutation};
use crate::numeric::gram_to_points;
use crate::tolerances::Tolerances;

use super::{EmbedError, EuclideanCert};

/// Embed `m` isometrically into R⁴ (trailing coordinates zero when fewer
/// dimensions suffice). Fails with [`EmbedError::NotPsd`] when the
/// associated form has a genuinely negative eigenvalue.
pub fn embed_euclidean(m: &FiniteMetric, tol: &Tolerances) -> Result<EuclideanCert, EmbedError> {
    let n = m.n();
    if n == 1 {
        return Ok(EuclideanCert {
            coords: vec![[0.0; 4]],
        });
    }
    let form = associated_form(m, &Permutation::identity(n));
    let mat = form.to_matrix();
    let scale = mat.amax().max(f64::MIN_POSITIVE);
    let floor = tol.psd * scale;

    let Some(rows) = gram_to_points(&mat, floor) else {
        let eig = SymmetricEigen::new(mat.clone());
        let (k, &min_eigenvalue) = eig
            .eigenvalues
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .expect("nonempty spectrum");
        let eigenvector = eig.eigenvectors.column(k).iter().copied().collect();
        return Err(EmbedError::NotPsd {
            min_eigenvalue,
            eigenvector,
        });
    };

    // `rows[i]` places point i relative to the last point at the origin.
    let mut coords = vec![[0.0f64; 4]; n];
    for (i, row) in rows.iter().enumerate() {
        if row.len() > 4 {
            return Err(EmbedError::Internal(format!(
                "Gram factorization produced {} dimensions",
                row.len()
            )));
        }
        for (k, &x) in row.iter().enumerate() {
            coords[i][k] = x;
        }
    }

    // The factorization must reproduce every pairwise distance.
    let slack = tol.cfg * m.diameter();
    for i in 0..n {
        for j in (i + 1)..n {
            let d = dist4(&coords[i], &coords[j]);
            if (d - m.d(i, j)).abs() > slack {
                return Err(EmbedError::Internal(format!(
                    "flat placement distorts pair ({}, {}): {:.6e} vs {:.6e}",
                    m.label(i),
                    m.label(j),
                    d,
                    m.d(i, j)
                )));
            }
        }
    }

    Ok(EuclideanCert { coords })
}

fn dist4(u: &[f64; 4], v: &[f64; 4]) -> f64 {
    (0..4).map(|k| (u[k] - v[k]) * (u[k] - v[k])).sum::<f64>().sqrt()
}
