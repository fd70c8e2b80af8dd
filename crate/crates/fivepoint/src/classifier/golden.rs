//! Hand-checked classification table, kept as a golden fixture.
//!
//! Each row records one configuration node of the search: the triples
//! present, the uncovered pair examined (if any), and the outcome of every
//! candidate tested — rejected with a P/Y witness, or accepted into a
//! child row. Rows with a symmetry list only orbit representatives; the
//! regression test expands them by the recomputed automorphism group and
//! diffs the result against the generated tree.
//!
//! Notation: `abc` is the triple with ends a, c and center b.

use super::Pattern;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GoldenVerdict {
    /// Rejected: forbidden pattern against the witness triple.
    Reject(Pattern, &'static str),
    /// Accepted; extending yields the golden row with this id.
    Accept(usize),
}

#[derive(Debug, Clone, Copy)]
pub struct GoldenRow {
    /// 1-based row number.
    pub id: usize,
    pub config: &'static [&'static str],
    /// Symmetry noted in the source analysis (documentation only; tests
    /// recompute the exact automorphism group).
    pub symmetry: &'static str,
    /// The uncovered pair whose candidates are tested; `None` when every
    /// pair is covered and all novel triples are tested instead.
    pub pair: Option<(char, char)>,
    pub items: &'static [(&'static str, GoldenVerdict)],
    /// Covers all ten pairs with at least five triples.
    pub admissible: bool,
}

use GoldenVerdict::{Accept, Reject};
use Pattern::{P, Y};

pub const GOLDEN_ROWS: &[GoldenRow] = &[
    GoldenRow {
        id: 1,
        config: &["abc"],
        symmetry: "a<->c",
        pair: Some(('b', 'd')),
        items: &[
            ("dba", Reject(Y, "abc")),
            ("dbe", Accept(4)),
            ("dab", Accept(2)),
            ("deb", Accept(3)),
            ("adb", Reject(P, "abc")),
            ("edb", Accept(3)),
        ],
        admissible: false,
    },
    GoldenRow {
        id: 2,
        config: &["abc", "bcd"],
        symmetry: "b<->c",
        pair: Some(('a', 'd')),
        items: &[
            ("adb", Reject(P, "abc")),
            ("ade", Accept(7)),
            ("abd", Reject(Y, "abc")),
            ("aed", Accept(5)),
            ("bad", Accept(6)),
            ("ead", Accept(7)),
        ],
        admissible: false,
    },
    GoldenRow {
        id: 3,
        config: &["abc", "dae"],
        symmetry: "",
        pair: Some(('b', 'd')),
        items: &[
            ("dba", Reject(Y, "abc")),
            ("dbc", Reject(Y, "abc")),
            ("dbe", Accept(8)),
            ("dab", Reject(Y, "dae")),
            ("dcb", Accept(7)),
            ("deb", Reject(P, "dae")),
            ("adb", Reject(P, "abc")),
            ("cdb", Reject(P, "abc")),
            ("edb", Reject(P, "dae")),
        ],
        admissible: false,
    },
    GoldenRow {
        id: 4,
        config: &["abc", "dbe"],
        symmetry: "c<->e",
        pair: Some(('a', 'd')),
        items: &[
            ("adb", Reject(P, "abc")),
            ("adc", Accept(8)),
            ("abd", Reject(Y, "abc")),
            ("acd", Reject(P, "abc")),
            ("bad", Reject(P, "dbe")),
            ("cad", Reject(P, "abc")),
        ],
        admissible: false,
    },
    GoldenRow {
        id: 5,
        config: &["abc", "bcd", "aed"],
        symmetry: "",
        pair: Some(('b', 'e')),
        items: &[
            ("bea", Reject(Y, "aed")),
            ("bec", Reject(P, "abc")),
            ("bed", Reject(Y, "aed")),
            ("bae", Accept(9)),
            ("bce", Reject(Y, "bcd")),
            ("bde", Reject(P, "bcd")),
            ("abe", Reject(Y, "abc")),
            ("cbe", Reject(Y, "abc")),
            ("dbe", Reject(P, "bcd")),
        ],
        admissible: false,
    },
    GoldenRow {
        id: 6,
        config: &["abc", "bcd", "cda"],
        symmetry: "b<->d",
        pair: Some(('c', 'e')),
        items: &[
            ("cea", Accept(10)),
            ("ceb", Reject(P, "abc")),
            ("cae", Reject(P, "abc")),
            ("cbe", Reject(Y, "abc")),
            ("ace", Reject(P, "abc")),
            ("bce", Reject(Y, "bcd")),
        ],
        admissible: false,
    },
    GoldenRow {
        id: 7,
        config: &["abc", "bcd", "ade"],
        symmetry: "",
        pair: Some(('c', 'e')),
        items: &[
            ("cea", Reject(P, "ade")),
            ("ceb", Reject(P, "abc")),
            ("ced", Reject(P, "bcd")),
            ("cae", Reject(P, "ade")),
            ("cbe", Reject(Y, "abc")),
            ("cde", Reject(Y, "ade")),
            ("ace", Reject(P, "abc")),
            ("bce", Reject(Y, "bcd")),
            ("dce", Reject(Y, "bcd")),
        ],
        admissible: false,
    },
    GoldenRow {
        id: 8,
        config: &["abc", "dae", "dbe"],
        symmetry: "",
        pair: Some(('c', 'd')),
        items: &[
            ("cda", Accept(11)),
            ("cdb", Reject(P, "abc")),
            ("cde", Reject(P, "dae")),
            ("cad", Reject(P, "abc")),
            ("cbd", Reject(Y, "abc")),
            ("ced", Reject(P, "dae")),
            ("acd", Reject(P, "abc")),
            ("bcd", Reject(P, "dbe")),
            ("ecd", Accept(12)),
        ],
        admissible: false,
    },
    GoldenRow {
        id: 9,
        config: &["abc", "bcd", "cde", "dea"],
        symmetry: "c<->d",
        pair: Some(('b', 'e')),
        items: &[
            ("bea", Reject(Y, "dea")),
            ("bec", Reject(P, "abc")),
            ("bae", Accept(13)),
            ("bce", Reject(Y, "bcd")),
            ("abe", Reject(Y, "abc")),
            ("cbe", Reject(Y, "abc")),
        ],
        admissible: false,
    },
    GoldenRow {
        id: 10,
        config: &["abc", "bcd", "cda", "aec"],
        symmetry: "",
        pair: Some(('b', 'e')),
        items: &[
            ("bea", Reject(Y, "aec")),
            ("bec", Reject(Y, "aec")),
            ("bed", Accept(15)),
            ("bae", Accept(14)),
            ("bce", Reject(Y, "bcd")),
            ("bde", Reject(P, "bcd")),
            ("abe", Reject(Y, "abc")),
            ("cbe", Reject(Y, "abc")),
            ("dbe", Reject(P, "bcd")),
        ],
        admissible: false,
    },
    GoldenRow {
        id: 11,
        config: &["abc", "bcd", "aec", "bed"],
        symmetry: "b<->c",
        pair: Some(('a', 'd')),
        items: &[
            ("adb", Reject(P, "bed")),
            ("ade", Reject(P, "aec")),
            ("abd", Reject(Y, "abc")),
            ("aed", Reject(Y, "bed")),
            ("bad", Accept(15)),
            ("ead", Reject(P, "bed")),
        ],
        admissible: false,
    },
    GoldenRow {
        id: 12,
        config: &["abe", "ace", "ade", "bcd"],
        symmetry: "a<->e, b<->d",
        pair: None,
        items: &[
            ("abc", Reject(P, "ace")),
            ("abd", Reject(Y, "abe")),
            ("bca", Reject(Y, "ace")),
            ("bda", Reject(Y, "ade")),
            ("cab", Reject(P, "bcd")),
            ("dab", Accept(15)),
        ],
        admissible: false,
    },
    GoldenRow {
        id: 13,
        config: &["abc", "bcd", "cde", "dea", "eab"],
        symmetry: "D5",
        pair: None,
        items: &[("dac", Reject(P, "bcd")), ("acd", Reject(Y, "bcd"))],
        admissible: true,
    },
    GoldenRow {
        id: 14,
        config: &["abc", "bcd", "cda", "dae", "aec"],
        symmetry: "",
        pair: Some(('b', 'e')),
        items: &[
            ("bea", Reject(Y, "aec")),
            ("bec", Reject(Y, "aec")),
            ("bed", Reject(P, "dae")),
            ("bae", Reject(Y, "dae")),
            ("bce", Reject(Y, "bcd")),
            ("bde", Reject(P, "dae")),
            ("abe", Reject(Y, "abc")),
            ("cbe", Reject(Y, "abc")),
            ("dbe", Reject(P, "bcd")),
        ],
        admissible: false,
    },
    GoldenRow {
        id: 15,
        config: &["abc", "bcd", "cda", "aec", "bed"],
        symmetry: "b<->d",
        pair: None,
        items: &[
            ("bad", Accept(16)),
            ("bec", Reject(Y, "bed")),
            ("bea", Reject(Y, "bed")),
            ("adb", Reject(P, "bed")),
            ("ecb", Reject(Y, "bcd")),
            ("eab", Reject(P, "bed")),
            ("dba", Reject(P, "bed")),
            ("cbe", Reject(Y, "abc")),
            ("abe", Reject(Y, "abc")),
        ],
        admissible: true,
    },
    GoldenRow {
        id: 16,
        config: &["abc", "bcd", "cda", "dab", "aec", "bed"],
        symmetry: "D4",
        pair: None,
        items: &[("abe", Reject(Y, "abc")), ("bea", Reject(P, "abc"))],
        admissible: true,
    },
];

pub fn golden_row(id: usize) -> &'static GoldenRow {
    &GOLDEN_ROWS[id - 1]
}
