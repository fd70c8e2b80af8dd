//! Match a metric's tense-triple structure against the admissible
//! configurations, and check the necessary conditions for extremality.

use super::search::admissible_reference;
use super::{violates_py, CenteredTriple, LABELS};
use crate::comparison::{perturbation_space, tense_structure, TenseError, TenseSet};
use crate::metric::{FiniteMetric, Permutation};
use crate::Tolerances;
use serde::Serialize;
use std::collections::BTreeSet;

/// Result of matching against the three admissible configurations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum ConfigurationMatch {
    /// Five triples closing a cycle: each consecutive run of three points
    /// in `order` is a tense triple centered on its middle point.
    Cyclic { order: [usize; 5] },
    /// Two tense triples v1-x-v2 and w1-x-w2 share the center x
    /// (five-triple configuration).
    SharedCenter {
        x: usize,
        v: [usize; 2],
        w: [usize; 2],
    },
    /// The six-triple configuration: the same shared-center pair plus a
    /// full four-cycle of triples on v1, w1, v2, w2.
    FourPlusTwo {
        x: usize,
        v: [usize; 2],
        w: [usize; 2],
    },
    NoMatch,
}

fn triple_set(triples: &[TenseSet]) -> BTreeSet<CenteredTriple> {
    let mut out = BTreeSet::new();
    for t in triples {
        if t.size() != 3 {
            continue;
        }
        let ends: Vec<usize> = t.points.iter().cloned().filter(|&p| p != t.center).collect();
        if ends.len() == 2 {
            if let Ok(ct) = CenteredTriple::new(ends[0], t.center, ends[1]) {
                out.insert(ct);
            }
        }
    }
    out
}

/// Match the tense triples of `m` against the three admissible
/// configurations, in priority order cyclic, six-triple, five-triple.
/// A match only requires containment: extra triples do not disqualify.
pub fn match_configuration(m: &FiniteMetric, triples: &[TenseSet]) -> ConfigurationMatch {
    if m.n() != LABELS {
        return ConfigurationMatch::NoMatch;
    }
    let present = triple_set(triples);
    let [cyclic, shared, four_two] = admissible_reference();

    let contains_image = |cfg: &super::TenseConfiguration, sigma: &Permutation| {
        cfg.triples().iter().all(|t| present.contains(&t.relabel(sigma)))
    };

    for sigma in Permutation::all(LABELS) {
        if contains_image(&cyclic, &sigma) {
            let mut order = [0usize; 5];
            for (i, slot) in order.iter_mut().enumerate() {
                *slot = sigma.apply(i);
            }
            return ConfigurationMatch::Cyclic { order };
        }
    }
    // reference labels: centers of the shared pair at e, ends a,c and b,d
    for sigma in Permutation::all(LABELS) {
        if contains_image(&four_two, &sigma) {
            return ConfigurationMatch::FourPlusTwo {
                x: sigma.apply(4),
                v: [sigma.apply(0), sigma.apply(2)],
                w: [sigma.apply(1), sigma.apply(3)],
            };
        }
    }
    for sigma in Permutation::all(LABELS) {
        if contains_image(&shared, &sigma) {
            return ConfigurationMatch::SharedCenter {
                x: sigma.apply(4),
                v: [sigma.apply(0), sigma.apply(2)],
                w: [sigma.apply(1), sigma.apply(3)],
            };
        }
    }
    ConfigurationMatch::NoMatch
}

/// Necessary conditions for a metric (with the comparison inequalities
/// holding) to span an extremal ray. These conditions are necessary but
/// NOT sufficient; a pass means "not excluded by the tense-structure
/// obstructions", nothing more.
#[derive(Debug, Clone, Serialize)]
pub struct ExtremalityReport {
    /// Some tense set exists (else the metric is an interior point).
    pub has_tense_set: bool,
    /// No 4- or 5-point tense sets were found.
    pub only_triples: bool,
    pub triple_count: usize,
    /// Sizes of tense sets larger than triples.
    pub large_tense_sizes: Vec<usize>,
    /// Every pair of points lies in some tense set.
    pub all_pairs_covered: bool,
    pub at_least_five_triples: bool,
    /// No two triples form pattern P or Y.
    pub py_free: bool,
    /// Dimension of the perturbation space preserving all tense triples.
    pub perturbation_dimension: usize,
    pub configuration: ConfigurationMatch,
    /// All conditions above that apply to this metric hold.
    pub necessary_pass: bool,
}

pub fn extremality_necessary(
    m: &FiniteMetric,
    tol: &Tolerances,
) -> Result<ExtremalityReport, TenseError> {
    let structure = tense_structure(m, tol)?;
    let n = m.n();

    let has_tense_set = !structure.triples.is_empty() || structure.has_large();
    let only_triples = !structure.has_large();
    let mut large_tense_sizes: Vec<usize> = structure
        .fours
        .iter()
        .chain(&structure.fives)
        .map(|t| t.size())
        .collect();
    large_tense_sizes.sort_unstable();

    let mut covered = vec![vec![false; n]; n];
    for t in structure
        .triples
        .iter()
        .chain(&structure.fours)
        .chain(&structure.fives)
    {
        for (k, &i) in t.points.iter().enumerate() {
            for &j in &t.points[k + 1..] {
                covered[i][j] = true;
                covered[j][i] = true;
            }
        }
    }
    let all_pairs_covered = (0..n).all(|i| ((i + 1)..n).all(|j| covered[i][j]));

    let triples: Vec<CenteredTriple> = triple_set(&structure.triples).into_iter().collect();
    let mut py_free = true;
    for (i, t1) in triples.iter().enumerate() {
        for t2 in &triples[i + 1..] {
            let shared = t1.point_set().intersection(&t2.point_set()).count();
            if shared == 2 && violates_py(t1, t2).unwrap().is_some() {
                py_free = false;
            }
        }
    }

    let perturbation_dimension = perturbation_space(m, &structure.triples, tol).dimension;
    let configuration = match_configuration(m, &structure.triples);

    let triple_count = triples.len();
    let at_least_five_triples = triple_count >= 5;
    let necessary_pass = has_tense_set
        && (!only_triples || (all_pairs_covered && at_least_five_triples && py_free));

    Ok(ExtremalityReport {
        has_tense_set,
        only_triples,
        triple_count,
        large_tense_sizes,
        all_pairs_covered,
        at_least_five_triples,
        py_free,
        perturbation_dimension,
        configuration,
        necessary_pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::comparison::lss_all;
    use crate::metric::FiniteMetric;

    fn circle5() -> FiniteMetric {
        let mut d = vec![vec![0.0; 5]; 5];
        for i in 0..5 {
            for j in 0..5 {
                let k = (i as isize - j as isize).unsigned_abs();
                d[i][j] = k.min(5 - k) as f64;
            }
        }
        FiniteMetric::from_matrix(d)
    }

    fn synthetic_tense(names: &[&str]) -> Vec<TenseSet> {
        names
            .iter()
            .map(|s| {
                let t = CenteredTriple::parse(s).unwrap();
                TenseSet {
                    points: vec![t.end1, t.center, t.end2],
                    center: t.center,
                    degenerate: false,
                    realization: Vec::new(),
                }
            })
            .collect()
    }

    #[test]
    fn circle_matches_cyclic() {
        let m = circle5();
        let tol = Tolerances::default();
        let triples = crate::comparison::tense_triples(&m, &tol);
        match match_configuration(&m, &triples) {
            ConfigurationMatch::Cyclic { order } => {
                let present = triple_set(&triples);
                for i in 0..5 {
                    let t = CenteredTriple::new(order[i], order[(i + 1) % 5], order[(i + 2) % 5])
                        .unwrap();
                    assert!(present.contains(&t), "missing {:?}", t);
                }
            }
            other => panic!("expected Cyclic, got {:?}", other),
        }
    }

    #[test]
    fn synthetic_shared_center_and_four_plus_two() {
        let m = circle5(); // only n and labels are used by the matcher
        let c2 = synthetic_tense(&["abc", "bcd", "cda", "aec", "bed"]);
        match match_configuration(&m, &c2) {
            ConfigurationMatch::SharedCenter { x, v, w } => {
                let present = triple_set(&c2);
                assert!(present.contains(&CenteredTriple::new(v[0], x, v[1]).unwrap()));
                assert!(present.contains(&CenteredTriple::new(w[0], x, w[1]).unwrap()));
            }
            other => panic!("expected SharedCenter, got {:?}", other),
        }
        let c3 = synthetic_tense(&["abc", "bcd", "cda", "dab", "aec", "bed"]);
        match match_configuration(&m, &c3) {
            ConfigurationMatch::FourPlusTwo { x, v, w } => {
                let present = triple_set(&c3);
                assert!(present.contains(&CenteredTriple::new(v[0], x, v[1]).unwrap()));
                assert!(present.contains(&CenteredTriple::new(w[0], x, w[1]).unwrap()));
            }
            other => panic!("expected FourPlusTwo, got {:?}", other),
        }
    }

    #[test]
    fn equilateral_matches_nothing() {
        let d = vec![
            vec![0.0, 1.0, 1.0, 1.0, 1.0],
            vec![1.0, 0.0, 1.0, 1.0, 1.0],
            vec![1.0, 1.0, 0.0, 1.0, 1.0],
            vec![1.0, 1.0, 1.0, 0.0, 1.0],
            vec![1.0, 1.0, 1.0, 1.0, 0.0],
        ];
        let m = FiniteMetric::from_matrix(d);
        let tol = Tolerances::default();
        let triples = crate::comparison::tense_triples(&m, &tol);
        assert!(triples.is_empty());
        assert_eq!(match_configuration(&m, &triples), ConfigurationMatch::NoMatch);
        let report = extremality_necessary(&m, &tol).unwrap();
        assert!(!report.has_tense_set);
        assert!(!report.necessary_pass);
    }

    #[test]
    fn matching_is_relabeling_equivariant() {
        let m = circle5();
        let tol = Tolerances::default();
        for sigma in Permutation::all(5).iter().step_by(17) {
            let rm = crate::metric::relabel(&m, sigma);
            let triples = crate::comparison::tense_triples(&rm, &tol);
            assert!(matches!(
                match_configuration(&rm, &triples),
                ConfigurationMatch::Cyclic { .. }
            ));
        }
    }

    #[test]
    fn circle_passes_all_necessary_conditions() {
        let m = circle5();
        let tol = Tolerances::default();
        let report = extremality_necessary(&m, &tol).unwrap();
        assert!(report.has_tense_set);
        assert!(report.only_triples);
        assert_eq!(report.triple_count, 5);
        assert!(report.all_pairs_covered);
        assert!(report.at_least_five_triples);
        assert!(report.py_free);
        assert!(report.necessary_pass);
        assert!(matches!(report.configuration, ConfigurationMatch::Cyclic { .. }));
        // scaling is always admissible
        assert!(report.perturbation_dimension >= 1);
    }

    #[test]
    fn broken_circle_fails_five_triple_count() {
        // shrink one skip-distance: the triple centered between loses its
        // equality, leaving four tense triples
        let mut d = vec![vec![0.0; 5]; 5];
        for i in 0..5 {
            for j in 0..5 {
                let k = (i as isize - j as isize).unsigned_abs();
                d[i][j] = k.min(5 - k) as f64;
            }
        }
        d[0][2] = 1.95;
        d[2][0] = 1.95;
        let m = FiniteMetric::from_matrix(d);
        let tol = Tolerances::default();
        assert!(lss_all(&m, &tol).unwrap().holds, "perturbation stays inside");
        let report = extremality_necessary(&m, &tol).unwrap();
        assert!(report.has_tense_set);
        assert_eq!(report.triple_count, 4);
        assert!(!report.at_least_five_triples);
        assert!(!report.necessary_pass);
        // with one equality constraint fewer, at least two admissible
        // perturbation directions remain
        assert!(report.perturbation_dimension >= 2);
        assert_eq!(report.configuration, ConfigurationMatch::NoMatch);
    }
}
