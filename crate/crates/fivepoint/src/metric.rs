//! Finite metric spaces on 2..=5 labeled points.
//!
//! The whole crate works with one input type: a symmetric nonnegative
//! distance matrix over at most five labels, validated up front. A
//! `semimetric` drops the triangle inequality (useful for feeding raw
//! dissimilarities to the comparison solver); everything that needs a real
//! metric states so in its preconditions.

use crate::exact::ExactMatrix;
use crate::tolerances::Tolerances;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const MIN_POINTS: usize = 2;
pub const MAX_POINTS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Metric,
    Semimetric,
}

impl Default for Mode {
    fn default() -> Self {
        Mode::Metric
    }
}

/// Unvalidated input, mirroring the JSON wire format:
/// `{"labels": [...], "d": [[...]], "mode": "metric"}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RawMetric {
    pub labels: Vec<String>,
    pub d: Vec<Vec<f64>>,
    #[serde(default)]
    pub mode: Mode,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum MetricViolation {
    NegativeDistance { i: usize, j: usize, value: f64 },
    NonzeroDiagonal { i: usize, value: f64 },
    Asymmetric { i: usize, j: usize, dij: f64, dji: f64 },
    /// d(i,k) exceeds d(i,j) + d(j,k) by `excess`.
    TriangleViolation { i: usize, j: usize, k: usize, excess: f64 },
}

impl std::fmt::Display for MetricViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MetricViolation::NegativeDistance { i, j, value } => {
                write!(f, "d[{i}][{j}] = {value} is negative")
            }
            MetricViolation::NonzeroDiagonal { i, value } => {
                write!(f, "d[{i}][{i}] = {value} is not zero")
            }
            MetricViolation::Asymmetric { i, j, dij, dji } => {
                write!(f, "d[{i}][{j}] = {dij} but d[{j}][{i}] = {dji}")
            }
            MetricViolation::TriangleViolation { i, j, k, excess } => {
                write!(f, "d[{i}][{k}] > d[{i}][{j}] + d[{j}][{k}] by {excess:e}")
            }
        }
    }
}

#[derive(Debug, Error)]
pub enum MetricError {
    #[error("distance matrix is not square: row {row} has {found} entries, expected {expected}")]
    NonSquare {
        row: usize,
        found: usize,
        expected: usize,
    },
    #[error("{n} points given; supported range is {MIN_POINTS}..={MAX_POINTS}")]
    WrongPointCount { n: usize },
    #[error("label count {labels} does not match matrix size {n}")]
    LabelCountMismatch { labels: usize, n: usize },
    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),
    #[error("entry d[{i}][{j}] = {value} is not finite")]
    NotFinite { i: usize, j: usize, value: f64 },
    #[error("invalid metric: {}", format_violations(.0))]
    Invalid(Vec<MetricViolation>),
}

fn format_violations(vs: &[MetricViolation]) -> String {
    vs.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

/// A validated finite metric (or semimetric) space.
#[derive(Debug, Clone, Serialize)]
pub struct FiniteMetric {
    labels: Vec<String>,
    d: Vec<Vec<f64>>,
    mode: Mode,
    /// Exact-rational copy of `d`, present when validation was asked to keep
    /// one. Every f64 is a dyadic rational, so the conversion is lossless.
    #[serde(skip)]
    exact: Option<ExactMatrix>,
}

impl PartialEq for FiniteMetric {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.d == other.d && self.mode == other.mode
    }
}

/// Validate a raw matrix. With `exact` set, a rational copy of the distances
/// is retained and the equality-sensitive operations (tense detection, face
/// enumeration verdicts) run over exact arithmetic.
pub fn validate_metric(
    raw: RawMetric,
    exact: bool,
    tol: &Tolerances,
) -> Result<FiniteMetric, MetricError> {
    let n = raw.d.len();
    for (row, r) in raw.d.iter().enumerate() {
        if r.len() != n {
            return Err(MetricError::NonSquare {
                row,
                found: r.len(),
                expected: n,
            });
        }
    }
    if !(MIN_POINTS..=MAX_POINTS).contains(&n) {
        return Err(MetricError::WrongPointCount { n });
    }
    if raw.labels.len() != n {
        return Err(MetricError::LabelCountMismatch {
            labels: raw.labels.len(),
            n,
        });
    }
    for (i, l) in raw.labels.iter().enumerate() {
        if raw.labels[..i].contains(l) {
            return Err(MetricError::DuplicateLabel(l.clone()));
        }
    }
    for i in 0..n {
        for j in 0..n {
            let v = raw.d[i][j];
            if !v.is_finite() {
                return Err(MetricError::NotFinite { i, j, value: v });
            }
        }
    }

    let mut violations = Vec::new();
    for i in 0..n {
        if raw.d[i][i] != 0.0 {
            violations.push(MetricViolation::NonzeroDiagonal {
                i,
                value: raw.d[i][i],
            });
        }
        for j in (i + 1)..n {
            if raw.d[i][j] < 0.0 {
                violations.push(MetricViolation::NegativeDistance {
                    i,
                    j,
                    value: raw.d[i][j],
                });
            }
            if raw.d[i][j] != raw.d[j][i] {
                violations.push(MetricViolation::Asymmetric {
                    i,
                    j,
                    dij: raw.d[i][j],
                    dji: raw.d[j][i],
                });
            }
        }
    }
    if raw.mode == Mode::Metric && violations.is_empty() {
        let diam = raw
            .d
            .iter()
            .flatten()
            .cloned()
            .fold(0.0f64, f64::max);
        let slack = tol.metric * diam;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if i == j || j == k || i == k {
                        continue;
                    }
                    let excess = raw.d[i][k] - raw.d[i][j] - raw.d[j][k];
                    if excess > slack {
                        violations.push(MetricViolation::TriangleViolation { i, j, k, excess });
                    }
                }
            }
        }
    }
    if !violations.is_empty() {
        return Err(MetricError::Invalid(violations));
    }

    let exact = exact.then(|| ExactMatrix::from_f64(&raw.d));
    Ok(FiniteMetric {
        labels: raw.labels,
        d: raw.d,
        mode: raw.mode,
        exact,
    })
}

impl FiniteMetric {
    /// Shorthand used all over the tests: default labels `a`, `b`, ... and
    /// default tolerances, panicking on invalid input.
    pub fn from_matrix(d: Vec<Vec<f64>>) -> Self {
        let labels = default_labels(d.len());
        validate_metric(
            RawMetric {
                labels,
                d,
                mode: Mode::Metric,
            },
            false,
            &Tolerances::default(),
        )
        .expect("matrix is not a metric")
    }

    pub fn n(&self) -> usize {
        self.d.len()
    }

    pub fn d(&self, i: usize, j: usize) -> f64 {
        self.d[i][j]
    }

    pub fn matrix(&self) -> &Vec<Vec<f64>> {
        &self.d
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn exact(&self) -> Option<&ExactMatrix> {
        self.exact.as_ref()
    }

    pub fn diameter(&self) -> f64 {
        self.d.iter().flatten().cloned().fold(0.0f64, f64::max)
    }

    /// Restriction to a subset of points, in the order given.
    pub fn restrict(&self, idx: &[usize]) -> FiniteMetric {
        let d: Vec<Vec<f64>> = idx
            .iter()
            .map(|&i| idx.iter().map(|&j| self.d[i][j]).collect())
            .collect();
        let labels = idx.iter().map(|&i| self.labels[i].clone()).collect();
        FiniteMetric {
            labels,
            d,
            mode: self.mode,
            exact: self.exact.as_ref().map(|e| e.restrict(idx)),
        }
    }

    pub fn to_raw(&self) -> RawMetric {
        RawMetric {
            labels: self.labels.clone(),
            d: self.d.clone(),
            mode: self.mode,
        }
    }
}

pub fn default_labels(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| {
            char::from(b'a' + i as u8).to_string()
        })
        .collect()
}

/// A permutation of `0..n`, written one-line: `perm[i]` is the image of `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Permutation(Vec<usize>);

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PermutationError {
    #[error("image {0:?} is not a bijection of 0..{1}")]
    NotBijective(Vec<usize>, usize),
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self, PermutationError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(PermutationError::NotBijective(images.clone(), n));
            }
            seen[x] = true;
        }
        Ok(Permutation(images))
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x] = i;
        }
        Permutation(inv)
    }

    /// `self` after `other`: `(self * other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&i| self.0[i]).collect())
    }

    /// All n! permutations of `0..n`, in lexicographic order of their
    /// one-line images. Deterministic; used to canonicalize configurations
    /// by explicit minimization.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(n);
        let mut used = vec![false; n];
        fn rec(n: usize, cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Permutation>) {
            if cur.len() == n {
                out.push(Permutation(cur.clone()));
                return;
            }
            for x in 0..n {
                if !used[x] {
                    used[x] = true;
                    cur.push(x);
                    rec(n, cur, used, out);
                    cur.pop();
                    used[x] = false;
                }
            }
        }
        rec(n, &mut cur, &mut used, &mut out);
        out
    }
}

/// Distance-preserving reindexing: position `i` of the result holds the
/// point formerly at `sigma(i)`, so `d'(i,j) = d(sigma(i), sigma(j))`.
/// Labels stay attached to positions, not points.
pub fn relabel(m: &FiniteMetric, sigma: &Permutation) -> FiniteMetric {
    assert_eq!(sigma.n(), m.n(), "permutation size must match point count");
    let n = m.n();
    let d: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| m.d(sigma.apply(i), sigma.apply(j))).collect())
        .collect();
    FiniteMetric {
        labels: m.labels.clone(),
        d,
        mode: m.mode,
        exact: m.exact.as_ref().map(|e| e.relabel(sigma)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn accepts_unit_equilateral() {
        let m = FiniteMetric::from_matrix(vec![
            vec![0.0, 1.0, 1.0],
            vec![1.0, 0.0, 1.0],
            vec![1.0, 1.0, 0.0],
        ]);
        assert_eq!(m.n(), 3);
        assert_eq!(m.labels(), &["a", "b", "c"]);
        assert_eq!(m.diameter(), 1.0);
    }

    #[test]
    fn rejects_triangle_violation_with_witness() {
        let raw = RawMetric {
            labels: default_labels(3),
            d: vec![
                vec![0.0, 1.0, 3.0],
                vec![1.0, 0.0, 1.0],
                vec![3.0, 1.0, 0.0],
            ],
            mode: Mode::Metric,
        };
        let err = validate_metric(raw.clone(), false, &tol()).unwrap_err();
        match err {
            MetricError::Invalid(vs) => {
                assert!(vs.iter().any(|v| matches!(
                    v,
                    MetricViolation::TriangleViolation { i: 0, j: 1, k: 2, .. }
                )));
            }
            other => panic!("unexpected error {other:?}"),
        }
        // Semimetric mode relaxes exactly this check.
        let raw = RawMetric {
            mode: Mode::Semimetric,
            ..raw
        };
        assert!(validate_metric(raw, false, &tol()).is_ok());
    }

    #[test]
    fn rejects_collects_all_violations() {
        let raw = RawMetric {
            labels: default_labels(3),
            d: vec![
                vec![0.0, -1.0, 1.0],
                vec![-1.0, 0.0, 2.0],
                vec![1.0, 2.5, 0.0],
            ],
            mode: Mode::Metric,
        };
        match validate_metric(raw, false, &tol()).unwrap_err() {
            MetricError::Invalid(vs) => {
                assert!(vs
                    .iter()
                    .any(|v| matches!(v, MetricViolation::NegativeDistance { i: 0, j: 1, .. })));
                assert!(vs
                    .iter()
                    .any(|v| matches!(v, MetricViolation::Asymmetric { i: 1, j: 2, .. })));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn rejects_shape_errors() {
        let raw = RawMetric {
            labels: default_labels(2),
            d: vec![vec![0.0, 1.0], vec![1.0]],
            mode: Mode::Metric,
        };
        assert!(matches!(
            validate_metric(raw, false, &tol()),
            Err(MetricError::NonSquare { row: 1, .. })
        ));

        let raw = RawMetric {
            labels: vec!["a".into()],
            d: vec![vec![0.0]],
            mode: Mode::Metric,
        };
        assert!(matches!(
            validate_metric(raw, false, &tol()),
            Err(MetricError::WrongPointCount { n: 1 })
        ));
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        let d = vec![
            vec![0.0, 0.1 + 0.2, 1.0 / 3.0],
            vec![0.1 + 0.2, 0.0, 0.5234231],
            vec![1.0 / 3.0, 0.5234231, 0.0],
        ];
        let m = FiniteMetric::from_matrix(d.clone());
        let s = serde_json::to_string(&m.to_raw()).unwrap();
        let back: RawMetric = serde_json::from_str(&s).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(d[i][j].to_bits(), back.d[i][j].to_bits());
            }
        }
    }

    #[test]
    fn relabel_swaps_rows() {
        // Points on a line: 0, 1, 3.
        let m = FiniteMetric::from_matrix(vec![
            vec![0.0, 1.0, 3.0],
            vec![1.0, 0.0, 2.0],
            vec![3.0, 2.0, 0.0],
        ]);
        let swap = Permutation::from_images(vec![1, 0, 2]).unwrap();
        let m2 = relabel(&m, &swap);
        // Position "a" now holds the former b.
        assert_eq!(m2.d(0, 2), 2.0);
        assert_eq!(m2.d(1, 2), 3.0);
        let back = relabel(&m2, &swap.inverse());
        assert_eq!(back, m);
    }

    #[test]
    fn permutation_algebra() {
        let all = Permutation::all(4);
        assert_eq!(all.len(), 24);
        for p in &all {
            let q = p.inverse();
            assert_eq!(p.compose(&q), Permutation::identity(4));
            assert_eq!(q.compose(p), Permutation::identity(4));
        }
        assert!(Permutation::from_images(vec![0, 0, 1]).is_err());
    }

    #[test]
    fn restrict_keeps_submatrix() {
        let m = FiniteMetric::from_matrix(vec![
            vec![0.0, 1.0, 3.0],
            vec![1.0, 0.0, 2.0],
            vec![3.0, 2.0, 0.0],
        ]);
        let r = m.restrict(&[2, 0]);
        assert_eq!(r.n(), 2);
        assert_eq!(r.d(0, 1), 3.0);
        assert_eq!(r.labels(), &["c", "a"]);
    }
}
