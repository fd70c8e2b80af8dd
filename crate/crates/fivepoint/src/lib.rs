//! Decide and certify whether a metric space on at most five points embeds
//! into some complete nonnegatively curved length space.
//!
//! The pipeline has three layers:
//!
//! * [`metric`] / [`form`] — validated finite metrics, relabelings, and the
//!   quadratic form associated with a point configuration.
//! * [`comparison`] — the family of simplex-constrained comparison
//!   inequalities whose joint validity characterizes embeddability, plus
//!   detection of *tense* configurations (tight inequalities), which drive
//!   every constructive embedding.
//! * [`classifier`], [`embed`], [`verify`] — combinatorial classification of
//!   tense structures, construction of explicit target spaces (Euclidean,
//!   circle, doubled convex polytope, cone-over-disc products), and
//!   independent numerical verification of the produced certificates.

pub mod classifier;
pub mod comparison;
pub mod embed;
pub mod exact;
pub mod form;
pub mod metric;
pub mod numeric;
pub mod tolerances;
pub mod verify;

pub use metric::{validate_metric, FiniteMetric, Mode, RawMetric};
pub use tolerances::Tolerances;
