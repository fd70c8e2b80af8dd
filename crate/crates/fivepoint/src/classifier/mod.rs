//! Combinatorics of tense triples on five labels.
//!
//! A metric whose only tense sets are triples can be extremal only if the
//! triples cover every pair, number at least five, and avoid the forbidden
//! two-triple patterns P and Y (either of which forces a 4-point tense
//! set). The admissible configurations are classified by a finite search;
//! exactly three survive, and each drives a concrete embedding (circle or
//! cone-over-disc product).

pub mod golden;
pub mod matching;
pub mod search;

pub use matching::{extremality_necessary, match_configuration, ConfigurationMatch, ExtremalityReport};
pub use search::{
    admissible_reference, diff_against_golden, search_configurations, GoldenRowMatch, SearchNode,
    SearchTree,
};

use crate::metric::Permutation;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use thiserror::Error;

/// Number of labels the classification runs over.
pub const LABELS: usize = 5;

#[derive(Debug, Error, PartialEq)]
pub enum ClassifierError {
    #[error("triples share {0} labels, not exactly two")]
    NotSharingTwo(usize),
    #[error("labels of a centered triple must be three distinct points")]
    DegenerateTriple,
}

/// A tense triple with its middle point: ends `e1 < e2`, center between
/// them. Written as `[e1][center][e2]` (e.g. "abc" is ends a, c with
/// center b).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CenteredTriple {
    pub end1: usize,
    pub center: usize,
    pub end2: usize,
}

impl CenteredTriple {
    pub fn new(end_a: usize, center: usize, end_b: usize) -> Result<Self, ClassifierError> {
        if end_a == center || end_b == center || end_a == end_b {
            return Err(ClassifierError::DegenerateTriple);
        }
        let (end1, end2) = if end_a < end_b { (end_a, end_b) } else { (end_b, end_a) };
        Ok(CenteredTriple { end1, center, end2 })
    }

    /// Parse "abc"-style notation over labels a..e.
    pub fn parse(s: &str) -> Result<Self, ClassifierError> {
        let idx: Vec<usize> = s.chars().map(|c| (c as usize) - ('a' as usize)).collect();
        if idx.len() != 3 || idx.iter().any(|&i| i >= LABELS) {
            return Err(ClassifierError::DegenerateTriple);
        }
        CenteredTriple::new(idx[0], idx[1], idx[2])
    }

    pub fn points(&self) -> [usize; 3] {
        [self.end1, self.center, self.end2]
    }

    pub fn point_set(&self) -> BTreeSet<usize> {
        self.points().into_iter().collect()
    }

    pub fn contains(&self, p: usize) -> bool {
        self.end1 == p || self.center == p || self.end2 == p
    }

    pub fn is_end(&self, p: usize) -> bool {
        self.end1 == p || self.end2 == p
    }

    /// Pairs of points lying in this triple (all three).
    pub fn pairs(&self) -> [(usize, usize); 3] {
        let [x, y, z] = {
            let mut v = self.points();
            v.sort_unstable();
            v
        };
        [(x, y), (x, z), (y, z)]
    }

    pub fn relabel(&self, sigma: &Permutation) -> CenteredTriple {
        CenteredTriple::new(
            sigma.apply(self.end1),
            sigma.apply(self.center),
            sigma.apply(self.end2),
        )
        .expect("permutation preserves distinctness")
    }

    /// "abc" notation (only meaningful for the 5-label world).
    pub fn notation(&self) -> String {
        let ch = |i: usize| (b'a' + i as u8) as char;
        [self.end1, self.center, self.end2].iter().map(|&i| ch(i)).collect()
    }
}

/// Two-triple pattern on triples sharing exactly two labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Pattern {
    /// Chain: each shared point is the center of one and an end of the
    /// other. Allowed.
    C,
    /// Both shared points are ends of both triples, centers differ.
    /// Allowed.
    O,
    /// One shared point is an end of both; the other is the center of one
    /// and an end of the other (whose center is then its non-shared
    /// point). Forbidden: forces a 4-point tense set.
    P,
    /// Same center, one shared end. Forbidden likewise.
    Y,
}

/// Classify the pattern of two triples sharing exactly two labels.
pub fn pair_pattern(t1: &CenteredTriple, t2: &CenteredTriple) -> Result<Pattern, ClassifierError> {
    let shared: BTreeSet<usize> = t1
        .point_set()
        .intersection(&t2.point_set())
        .cloned()
        .collect();
    if shared.len() != 2 {
        return Err(ClassifierError::NotSharingTwo(shared.len()));
    }
    if t1.center == t2.center {
        return Ok(Pattern::Y);
    }
    let c1_in = shared.contains(&t1.center);
    let c2_in = shared.contains(&t2.center);
    Ok(match (c1_in, c2_in) {
        (true, true) => Pattern::C,
        (false, false) => Pattern::O,
        _ => Pattern::P,
    })
}

/// The forbidden pattern between two triples, if any. Triples sharing
/// fewer or more than two labels impose no constraint and return Ok(None)
/// only through [`compatible`]; calling this directly requires exactly two
/// shared labels.
pub fn violates_py(
    t1: &CenteredTriple,
    t2: &CenteredTriple,
) -> Result<Option<Pattern>, ClassifierError> {
    Ok(match pair_pattern(t1, t2)? {
        Pattern::P => Some(Pattern::P),
        Pattern::Y => Some(Pattern::Y),
        Pattern::C | Pattern::O => None,
    })
}

/// Whether `candidate` can join a configuration containing `existing`
/// (no P/Y violation; pairs sharing ≠ 2 labels are unconstrained).
/// On violation returns the pattern and the witness.
pub fn first_violation(
    candidate: &CenteredTriple,
    existing: &[CenteredTriple],
) -> Option<(Pattern, CenteredTriple)> {
    for t in existing {
        let shared = candidate.point_set().intersection(&t.point_set()).count();
        if shared == 2 {
            if let Ok(Some(p)) = violates_py(candidate, t) {
                return Some((p, *t));
            }
        }
    }
    None
}

/// A set of centered triples on the five labels, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TenseConfiguration {
    triples: Vec<CenteredTriple>,
}

impl TenseConfiguration {
    pub fn new(mut triples: Vec<CenteredTriple>) -> Self {
        triples.sort_unstable();
        triples.dedup();
        TenseConfiguration { triples }
    }

    pub fn parse(names: &[&str]) -> Self {
        TenseConfiguration::new(
            names
                .iter()
                .map(|s| CenteredTriple::parse(s).expect("valid notation"))
                .collect(),
        )
    }

    pub fn triples(&self) -> &[CenteredTriple] {
        &self.triples
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn contains(&self, t: &CenteredTriple) -> bool {
        self.triples.binary_search(t).is_ok()
    }

    pub fn with(&self, t: CenteredTriple) -> Self {
        let mut v = self.triples.clone();
        v.push(t);
        TenseConfiguration::new(v)
    }

    pub fn relabel(&self, sigma: &Permutation) -> Self {
        TenseConfiguration::new(self.triples.iter().map(|t| t.relabel(sigma)).collect())
    }

    /// Pairs not contained in any triple.
    pub fn uncovered_pairs(&self) -> Vec<(usize, usize)> {
        let mut covered = BTreeSet::new();
        for t in &self.triples {
            for p in t.pairs() {
                covered.insert(p);
            }
        }
        let mut out = Vec::new();
        for i in 0..LABELS {
            for j in (i + 1)..LABELS {
                if !covered.contains(&(i, j)) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn is_py_free(&self) -> bool {
        for (i, t1) in self.triples.iter().enumerate() {
            for t2 in &self.triples[i + 1..] {
                let shared = t1.point_set().intersection(&t2.point_set()).count();
                if shared == 2 && violates_py(t1, t2).unwrap().is_some() {
                    return false;
                }
            }
        }
        true
    }

    /// Lexicographically least relabeling of the configuration, the
    /// relabeling achieving it (first among all that do), and the full
    /// automorphism group of the configuration.
    pub fn canonical(&self) -> (TenseConfiguration, Permutation, Vec<Permutation>) {
        let mut best: Option<(TenseConfiguration, Permutation)> = None;
        for sigma in Permutation::all(LABELS) {
            let image = self.relabel(&sigma);
            let better = match &best {
                None => true,
                Some((b, _)) => image < *b,
            };
            if better {
                best = Some((image, sigma));
            }
        }
        let (canon, first) = best.expect("nonempty permutation set");
        let autos = canon.automorphisms();
        (canon, first, autos)
    }

    pub fn canonical_key(&self) -> TenseConfiguration {
        self.canonical().0
    }

    /// All relabelings mapping the configuration to itself.
    pub fn automorphisms(&self) -> Vec<Permutation> {
        Permutation::all(LABELS)
            .into_iter()
            .filter(|sigma| self.relabel(sigma) == *self)
            .collect()
    }

    /// Candidate triples for extension: all triples containing the pair
    /// (for an uncovered pair), never repeating a present triple.
    pub fn candidates_for_pair(&self, pair: (usize, usize)) -> Vec<CenteredTriple> {
        let (p, q) = pair;
        let mut out = Vec::new();
        for x in 0..LABELS {
            if x == p || x == q {
                continue;
            }
            // center x between p and q; center p; center q
            for t in [
                CenteredTriple::new(p, x, q),
                CenteredTriple::new(q, p, x),
                CenteredTriple::new(p, q, x),
            ] {
                let t = t.expect("distinct labels");
                if !self.contains(&t) {
                    out.push(t);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Candidate triples when every pair is covered: all triples whose
    /// point set is not already used (a second center on the same three
    /// points forces coincident points, so those are never viable).
    pub fn candidates_all(&self) -> Vec<CenteredTriple> {
        let used: BTreeSet<BTreeSet<usize>> =
            self.triples.iter().map(|t| t.point_set()).collect();
        let mut out = Vec::new();
        for e1 in 0..LABELS {
            for e2 in (e1 + 1)..LABELS {
                for c in 0..LABELS {
                    if c == e1 || c == e2 {
                        continue;
                    }
                    let t = CenteredTriple::new(e1, c, e2).unwrap();
                    if !self.contains(&t) && !used.contains(&t.point_set()) {
                        out.push(t);
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn notation(&self) -> Vec<String> {
        self.triples.iter().map(|t| t.notation()).collect()
    }
}
