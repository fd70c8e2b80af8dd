//! Circle embedding from a cyclic family of tense triples.
//!
//! When consecutive triples of a cyclic order are all tense (each middle
//! point lies between its neighbors), placing the points at the partial sums
//! of consecutive distances on a circle whose circumference is their total
//! reproduces *every* pairwise distance: the five betweenness relations force
//! each chord distance to equal the shorter arc.

use crate::metric::FiniteMetric;
use crate::tolerances::Tolerances;
use crate::verify::circle_distance;

use super::{CircleCert, EmbedError};

/// Embed five points on a circle according to the cyclic order `order`
/// (metric indices). Requires every consecutive triple to be tense.
pub fn embed_circle(
    m: &FiniteMetric,
    order: &[usize; 5],
    tol: &Tolerances,
) -> Result<CircleCert, EmbedError> {
    let diam = m.diameter();
    let slack = tol.tense * diam;

    for i in 0..5 {
        let prev = order[(i + 4) % 5];
        let cur = order[i];
        let next = order[(i + 1) % 5];
        let defect = m.d(prev, cur) + m.d(cur, next) - m.d(prev, next);
        if defect.abs() > slack {
            return Err(EmbedError::NotCyclic { index: i, defect });
        }
    }

    let gaps: Vec<f64> = (0..5).map(|i| m.d(order[i], order[(i + 1) % 5])).collect();
    let length: f64 = gaps.iter().sum();
    if length <= 0.0 {
        return Err(EmbedError::Internal(
            "cyclic order has zero total length".into(),
        ));
    }

    let mut positions = vec![0.0f64; 5];
    let mut acc = 0.0;
    for i in 0..5 {
        let mut pos = acc;
        if pos >= length {
            pos -= length;
        }
        positions[order[i]] = pos;
        acc += gaps[i];
    }

    // The five tightness relations force all ten arc distances; verify.
    for i in 0..5 {
        for j in (i + 1)..5 {
            let d = circle_distance(length, positions[i], positions[j])
                .map_err(|e| EmbedError::Internal(format!("circle oracle: {e}")))?;
            if (d - m.d(i, j)).abs() > 8.0 * slack {
                return Err(EmbedError::Internal(format!(
                    "arc distance for pair ({}, {}) is {:.9e}, metric says {:.9e}",
                    m.label(i),
                    m.label(j),
                    d,
                    m.d(i, j)
                )));
            }
        }
    }

    Ok(CircleCert { length, positions })
}
