//! Acceptance gate: one test per criterion, each printing a PASS line
//! with its measured figures (visible with `--nocapture`).
//!
//! Criteria: (1) classification reproduction, (2) sampled-metric
//! necessity sweep, (3) configuration/inequality equivalence,
//! (4) grid-oracle agreement, (5) constructive embeddings round-trip,
//! (6) metric axioms of the distance oracles, (7) relabeling
//! equivariance. Tolerances are pinned here, independent of library
//! defaults, so accidental loosening fails loudly.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::process::Command;
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fivepoint::classifier::{
    admissible_reference, diff_against_golden, match_configuration, search_configurations,
    ConfigurationMatch, TenseConfiguration,
};
use fivepoint::comparison::{
    comparison_config, lss_all, lss_with_center, simplex_minimum, tense_structure, TenseStructure,
};
use fivepoint::embed::{cone_disc_conditions, embed, embed_cone_disc, EmbeddingCertificate};
use fivepoint::metric::{default_labels, relabel, Permutation};
use fivepoint::verify::{
    doubling_distance, induced_distance, oracle_lss_grid, sample_metric, verify_certificate,
    SampleFamily, SampleParams, SurfaceGeometry,
};
use fivepoint::{validate_metric, FiniteMetric, RawMetric, Tolerances};

fn tol() -> Tolerances {
    Tolerances::default()
}

// ---------------------------------------------------------------------------
// Instance generators shared by several criteria.
// ---------------------------------------------------------------------------

/// Entries uniform in [1, 2]: always a metric (2 ≤ 1 + 1), and always
/// comparison-feasible — useful as an unstructured baseline.
fn uniform_metric(seed: u64) -> FiniteMetric {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut d = vec![vec![0.0; 5]; 5];
    for i in 0..5 {
        for j in i + 1..5 {
            let x = rng.gen_range(1.0..2.0);
            d[i][j] = x;
            d[j][i] = x;
        }
    }
    FiniteMetric::from_matrix(d)
}

/// Even seeds: entries uniform in [1, 2] (always feasible). Odd seeds:
/// blend of the star configuration with such a uniform draw — the blend
/// keeps the triangle inequality (both endpoints do, and the star's only
/// tight triangles tighten further) while small blend weights keep the
/// comparison form negative, so the sweep sees both sides.
fn random_metric(seed: u64) -> FiniteMetric {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut d = vec![vec![0.0; 5]; 5];
    for i in 0..5 {
        for j in i + 1..5 {
            let x = rng.gen_range(1.0..2.0);
            d[i][j] = x;
            d[j][i] = x;
        }
    }
    if seed % 2 == 1 {
        let t = rng.gen_range(0.05..0.45);
        for i in 1..5 {
            d[0][i] = 1.0 + t * (d[0][i] - 1.0);
            d[i][0] = d[0][i];
            for j in i + 1..5 {
                d[i][j] = 2.0 + t * (d[i][j] - 2.0);
                d[j][i] = d[i][j];
            }
        }
    }
    FiniteMetric::from_matrix(d)
}

/// Center at distance 1 from four leaves, leaves pairwise 2: the
/// comparison form has minimum −1 at the barycenter.
fn star_metric() -> FiniteMetric {
    let mut d = vec![vec![2.0; 5]; 5];
    for i in 0..5 {
        d[i][i] = 0.0;
        if i > 0 {
            d[0][i] = 1.0;
            d[i][0] = 1.0;
        }
    }
    FiniteMetric::from_matrix(d)
}

/// Five points in cyclic order on a circle. Gap weights in [0.9, 1.1]
/// keep every two consecutive gaps below half the circumference (each
/// consecutive triple is tense) and every three above it (no further
/// tense sets), so the metric is exactly circle-class.
fn circle_class_metric(seed: u64) -> (FiniteMetric, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let len = rng.gen_range(1.0..3.0);
    let u: Vec<f64> = (0..5).map(|_| rng.gen_range(0.9..1.1)).collect();
    let total: f64 = u.iter().sum();
    let gaps: Vec<f64> = u.iter().map(|x| x * len / total).collect();
    let circumference: f64 = gaps.iter().sum();
    let mut pos = [0.0; 5];
    for i in 1..5 {
        pos[i] = pos[i - 1] + gaps[i - 1];
    }
    let mut d = vec![vec![0.0; 5]; 5];
    for i in 0..5 {
        for j in i + 1..5 {
            let a = (pos[j] - pos[i]).abs();
            let dd = a.min(circumference - a);
            d[i][j] = dd;
            d[j][i] = dd;
        }
    }
    (FiniteMetric::from_matrix(d), circumference)
}

/// A 4-point tense set plus a strictly slack fifth point: p at the origin
/// strictly inside the triangle x₁x₂x₃ (planar, hence tense), q lifted off
/// the plane with its three q–x distances shrunk by a factor in
/// [0.85, 0.95]. Returns None when the shrink breaks the triangle
/// inequality or some comparison inequality.
fn lifted_doubled_metric(seed: u64) -> Option<FiniteMetric> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts = [[0.0f64; 2]; 3];
    for (k, p) in pts.iter_mut().enumerate() {
        let theta = 2.0 * PI * k as f64 / 3.0 + rng.gen_range(-0.3..0.3);
        let r = rng.gen_range(0.8..1.2);
        *p = [r * theta.cos(), r * theta.sin()];
    }
    let q = [
        rng.gen_range(-0.25..0.25),
        rng.gen_range(-0.25..0.25),
        rng.gen_range(0.8..1.2),
    ];
    let factor = rng.gen_range(0.85..0.95);

    let mut d = vec![vec![0.0; 5]; 5];
    for i in 0..3 {
        let xi = pts[i];
        d[0][i + 1] = xi[0].hypot(xi[1]);
        for j in i + 1..3 {
            let xj = pts[j];
            d[i + 1][j + 1] = (xi[0] - xj[0]).hypot(xi[1] - xj[1]);
        }
        let dq = ((xi[0] - q[0]).powi(2) + (xi[1] - q[1]).powi(2) + q[2] * q[2]).sqrt();
        d[i + 1][4] = factor * dq;
    }
    d[0][4] = (q[0] * q[0] + q[1] * q[1] + q[2] * q[2]).sqrt();
    for i in 0..5 {
        for j in 0..i {
            d[i][j] = d[j][i];
        }
    }

    let raw = RawMetric {
        labels: default_labels(5),
        d,
        mode: fivepoint::Mode::Metric,
    };
    let m = validate_metric(raw, false, &tol()).ok()?;
    if !lss_all(&m, &tol()).ok()?.holds {
        return None;
    }
    let st = tense_structure(&m, &tol()).ok()?;
    let want: BTreeSet<usize> = [0usize, 1, 2, 3].into_iter().collect();
    let found = st
        .fours
        .iter()
        .any(|t| t.center == 0 && t.points.iter().copied().collect::<BTreeSet<_>>() == want);
    if !found || !st.fives.is_empty() {
        return None;
    }
    Some(m)
}

/// Two chords through a common point x̃ = (r₀, 0) of a cone of total angle
/// ω < 2π, developed into the plane: index 0 is x, 1–2 the v chord, 3–4
/// the w chord. Guards keep each chord's angular opening strictly below
/// both π and ω/2 (so the chord is the geodesic, i.e. both pairs are
/// tense) and force at least one cross pair to wrap around the apex.
fn cone_shared_center_metric(seed: u64) -> Option<FiniteMetric> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let omega = rng.gen_range(1.15..1.9) * PI;
    let r0 = rng.gen_range(0.8..1.2);
    let phi_v: f64 = rng.gen_range(1.7..2.0);
    let phi_w: f64 = rng.gen_range(-1.8..-1.5);
    let sv = [rng.gen_range(1.8..2.4), -rng.gen_range(1.0..1.5)];
    let sw = [-rng.gen_range(0.9..1.3), rng.gen_range(1.5..2.0)];

    let x = [r0, 0.0];
    let chart: [[f64; 2]; 5] = [
        x,
        [x[0] + sv[0] * phi_v.cos(), sv[0] * phi_v.sin()],
        [x[0] + sv[1] * phi_v.cos(), sv[1] * phi_v.sin()],
        [x[0] + sw[0] * phi_w.cos(), sw[0] * phi_w.sin()],
        [x[0] + sw[1] * phi_w.cos(), sw[1] * phi_w.sin()],
    ];
    let polar: Vec<[f64; 2]> = chart
        .iter()
        .map(|p| [p[0].hypot(p[1]), p[1].atan2(p[0])])
        .collect();

    const MARGIN: f64 = 0.05;
    // the development must fit in the cone, with margin
    let psi_max = polar.iter().map(|p| p[1]).fold(f64::MIN, f64::max);
    let psi_min = polar.iter().map(|p| p[1]).fold(f64::MAX, f64::min);
    if psi_max - psi_min > omega - MARGIN {
        return None;
    }
    // chords stay geodesics: opening below π and below the wrap
    for (a, b) in [(1usize, 2usize), (3, 4)] {
        let dpsi = (polar[a][1] - polar[b][1]).abs();
        if dpsi > PI - MARGIN || dpsi > omega - dpsi - MARGIN {
            return None;
        }
    }
    // at least one cross pair wraps (strictly, and not through the apex)
    let mut wrapped = false;
    for a in [1usize, 2] {
        for b in [3usize, 4] {
            let dpsi = (polar[a][1] - polar[b][1]).abs();
            let around = omega - dpsi;
            if (dpsi - around).abs() < MARGIN || (dpsi.min(around) - PI).abs() < MARGIN {
                return None; // border cases: wrap tie or through-apex tie
            }
            if around < dpsi && around < PI {
                wrapped = true;
            }
        }
    }
    if !wrapped {
        return None;
    }

    let mut d = vec![vec![0.0; 5]; 5];
    for i in 0..5 {
        for j in 0..5 {
            let dpsi = (polar[i][1] - polar[j][1]).abs();
            let ang = dpsi.min(omega - dpsi).min(PI);
            d[i][j] = (polar[i][0] * polar[i][0] + polar[j][0] * polar[j][0]
                - 2.0 * polar[i][0] * polar[j][0] * ang.cos())
            .max(0.0)
            .sqrt();
        }
    }
    let raw = RawMetric {
        labels: default_labels(5),
        d,
        mode: fivepoint::Mode::Metric,
    };
    validate_metric(raw, false, &tol()).ok()
}

fn dist3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

// ---------------------------------------------------------------------------
// 1. Classification reproduction.
// ---------------------------------------------------------------------------

#[test]
fn criterion_1_classification_reproduction() {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_fivepoint"))
        .args(["classify", "--format", "json"])
        .output()
        .expect("run fivepoint classify");
    let elapsed = start.elapsed();
    assert!(
        out.status.success(),
        "classify exited {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).expect("classify JSON");

    assert_eq!(v["tree"]["nodes"].as_array().unwrap().len(), 16);
    let admissible = v["admissible"].as_array().unwrap();
    assert_eq!(admissible.len(), 3);

    // the three terminal configurations, up to relabeling
    let expected: BTreeSet<TenseConfiguration> = admissible_reference()
        .into_iter()
        .map(|c| c.canonical_key())
        .collect();
    let found: BTreeSet<TenseConfiguration> = admissible
        .iter()
        .map(|cfg| {
            let strs: Vec<&str> = cfg
                .as_array()
                .unwrap()
                .iter()
                .map(|s| s.as_str().unwrap())
                .collect();
            TenseConfiguration::parse(&strs).canonical_key()
        })
        .collect();
    assert_eq!(found, expected, "terminal configurations differ");

    // per-row rejection counts, expanded by each row's declared symmetry
    let lib_rows = diff_against_golden(&search_configurations()).expect("table diff");
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 16);
    for (jr, lr) in rows.iter().zip(&lib_rows) {
        assert_eq!(jr["row"].as_u64().unwrap() as usize, lr.row);
        assert_eq!(
            jr["rejected"].as_u64().unwrap() as usize,
            lr.rejected,
            "row {} rejection count",
            lr.row
        );
        assert_eq!(jr["accepted"].as_u64().unwrap() as usize, lr.accepted);
    }
    assert!(v["fixture_match"].as_bool().unwrap(), "fixture mismatch");
    assert!(elapsed < Duration::from_secs(1), "classify took {elapsed:?}");
    println!(
        "criterion 1: PASS — 16 nodes, 3 terminals, per-row counts match the table in {elapsed:?}"
    );
}

// ---------------------------------------------------------------------------
// 2. Necessity sweep over the model-space samplers.
// ---------------------------------------------------------------------------

#[test]
fn criterion_2_lss_necessity() {
    let start = Instant::now();
    let tolerances = tol();
    assert_eq!(tolerances.lss, 1e-9, "criterion pins τ = 1e-9");
    let params = SampleParams::default();
    for family in SampleFamily::ALL {
        for seed in 0..1000u64 {
            let m = sample_metric(family, &params, seed)
                .unwrap_or_else(|e| panic!("{} seed {seed}: {e}", family.name()));
            let all = lss_all(&m, &tolerances).expect("lss_all");
            assert!(
                all.holds,
                "family {} seed {seed} violates an inequality",
                family.name()
            );
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(30), "sweep took {elapsed:?}");
    println!("criterion 2: PASS — 5 × 1000 sampled metrics pass every inequality in {elapsed:?}");
}

// ---------------------------------------------------------------------------
// 3. Inequality ⇔ configuration (property form).
// ---------------------------------------------------------------------------

#[test]
fn criterion_3_claim_two_equivalence() {
    let tolerances = tol();
    let mut feasible = 0usize;
    let mut infeasible = 0usize;
    let mut worst = 0.0f64;
    for trial in 0..500u64 {
        let m = random_metric(3_000 + trial);
        let full = lss_with_center(&m, 0, &[1, 2, 3, 4], &tolerances).expect("lss");
        if full.holds {
            let cfg = comparison_config(&m, 0, trial, &tolerances).expect("solver");
            assert!(
                cfg.residual <= 1e-8,
                "trial {trial}: inequalities hold but residual {:.3e}",
                cfg.residual
            );
            worst = worst.max(cfg.residual);
            feasible += 1;
        } else {
            infeasible += 1;
        }
    }
    // the sweep must exercise both sides of the equivalence
    assert!(feasible >= 50, "only {feasible} feasible instances");
    assert!(infeasible >= 50, "only {infeasible} infeasible instances");

    // star counterexample: minimum −1 at the barycenter, residual ≥ 1e−3
    let star = star_metric();
    let r = lss_with_center(&star, 0, &[1, 2, 3, 4], &tolerances).expect("lss");
    assert!(!r.holds);
    assert!((r.min_value + 1.0).abs() <= 1e-9, "min {:.12}", r.min_value);
    for l in &r.argmin {
        assert!((l - 0.25).abs() <= 1e-6, "argmin {:?}", r.argmin);
    }
    assert_eq!(tolerances.multistarts, 16);
    let cfg = comparison_config(&star, 0, 0, &tolerances).expect("solver");
    assert!(
        cfg.residual >= 1e-3,
        "star residual {:.3e} below 1e-3",
        cfg.residual
    );
    println!(
        "criterion 3: PASS — {feasible} feasible (worst residual {:.2e}), {infeasible} infeasible, star residual {:.2e}",
        worst, cfg.residual
    );
}

// ---------------------------------------------------------------------------
// 4. Face enumeration vs. grid oracle.
// ---------------------------------------------------------------------------

#[test]
fn criterion_4_oracle_agreement() {
    let tolerances = tol();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = 0.0f64;
    for trial in 0..200usize {
        let n = 2 + trial % 3;
        let mut a = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..=i {
                let x = rng.gen_range(-2.0..2.0);
                a[(i, j)] = x;
                a[(j, i)] = x;
            }
        }
        let (min_enum, _) = simplex_minimum(&a, &tolerances);
        let min_grid = oracle_lss_grid(&a, 200);
        let amax = a.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
        let bound = 1e-4 * (1.0 + amax);
        let err = (min_enum - min_grid).abs();
        assert!(
            err <= bound,
            "trial {trial} (n = {n}): enumeration {min_enum:.9} vs grid {min_grid:.9}"
        );
        worst = worst.max(err / (1.0 + amax));
    }
    println!(
        "criterion 4: PASS — 200 forms agree within 1e-4·(1+|A|max), worst {:.2e}",
        worst
    );
}

// ---------------------------------------------------------------------------
// 5. Constructive embeddings.
// ---------------------------------------------------------------------------

#[test]
fn criterion_5_constructive_embeddings() {
    let tolerances = tol();

    // (a) 100 circle-class metrics round-trip exactly.
    let mut worst_a = 0.0f64;
    for seed in 0..100u64 {
        let (m, _) = circle_class_metric(5_000 + seed);
        let cert = embed(&m, seed, &tolerances).expect("embed circle-class");
        assert!(
            matches!(cert, EmbeddingCertificate::Circle(_)),
            "seed {seed}: expected a circle certificate, got {}",
            cert.kind()
        );
        for i in 0..5 {
            for j in i + 1..5 {
                let ind = induced_distance(&cert, i, j).expect("induced");
                worst_a = worst_a.max((ind - m.d(i, j)).abs());
            }
        }
        assert!(worst_a <= 1e-12, "seed {seed}: round-trip error {worst_a:.3e}");
    }

    // (b) 100 4-tense instances → doubled-polytope certificates.
    let mut produced_b = 0usize;
    let mut attempts = 0usize;
    let mut seed = 52_000u64;
    let mut worst_b = 0.0f64;
    while produced_b < 100 {
        attempts += 1;
        assert!(attempts < 1_500, "doubled generator stalled at {produced_b}");
        seed += 1;
        let Some(m) = lifted_doubled_metric(seed) else {
            continue;
        };
        let cert = embed(&m, seed, &tolerances).expect("embed 4-tense instance");
        let EmbeddingCertificate::DoubledPolytope(c) = &cert else {
            panic!("seed {seed}: expected a doubled-polytope certificate, got {}", cert.kind());
        };
        let report = verify_certificate(&m, &cert, 1e-6).expect("verify");
        assert!(
            report.pass,
            "seed {seed}: verification failed, worst {:?}",
            report.worst_pair().map(|p| p.rel_err)
        );
        if let Some(p) = report.worst_pair() {
            worst_b = worst_b.max(p.rel_err);
        }
        // bisector-reflection equalities: each facet mirrors s̃ onto its target
        let diam = m.diameter();
        for (k, h) in c.halfspaces.iter().enumerate() {
            let err = dist3(&h.reflect(&c.s_tilde), &c.facet_targets[k]);
            assert!(err <= 1e-6 * diam, "seed {seed} facet {k}: reflection off by {err:.3e}");
        }
        produced_b += 1;
    }

    // (c) 100 shared-center cone instances → cone-disc certificates.
    let mut produced_c = 0usize;
    let mut attempts_c = 0usize;
    let mut seed_c = 53_000u64;
    let mut worst_c = 0.0f64;
    while produced_c < 100 {
        attempts_c += 1;
        assert!(attempts_c < 1_500, "cone generator stalled at {produced_c}");
        seed_c += 1;
        let Some(m) = cone_shared_center_metric(seed_c) else {
            continue;
        };
        let cert = embed_cone_disc(&m, 0, [1, 2], [3, 4], &tolerances)
            .unwrap_or_else(|e| panic!("seed {seed_c}: cone-disc construction failed: {e}"));
        let reports = cone_disc_conditions(&cert, &m);
        assert_eq!(reports.len(), 28);
        for r in &reports {
            assert!(
                r.slack >= -1e-9,
                "seed {seed_c}: condition {} #{} violated by {:.3e}",
                r.group,
                r.index,
                -r.slack
            );
        }
        let wrapped = EmbeddingCertificate::ConeDisc(cert.clone());
        let report = verify_certificate(&m, &wrapped, 1e-6).expect("verify");
        assert!(
            report.pass,
            "seed {seed_c}: surface verification failed, worst {:?}",
            report.worst_pair().map(|p| p.rel_err)
        );
        if let Some(p) = report.worst_pair() {
            worst_c = worst_c.max(p.rel_err);
        }
        // unfolding stabilization: depth 7 and depth 8 agree
        let geom = SurfaceGeometry::new(&cert).expect("geometry");
        let d7 = geom.distances(7);
        let d8 = geom.distances(8);
        for u in 0..5 {
            for v in 0..5 {
                assert!(
                    (d7.dist[u][v] - d8.dist[u][v]).abs() <= 1e-12,
                    "seed {seed_c}: pair ({u},{v}) moved between depths 7 and 8"
                );
            }
        }
        produced_c += 1;
    }

    println!(
        "criterion 5: PASS — (a) 100 circle round-trips ≤ 1e-12 (worst {worst_a:.2e}); \
         (b) 100 doubled-polytope certificates verified ≤ 1e-6 (worst {worst_b:.2e}, {attempts} attempts); \
         (c) 100 cone-disc certificates, 28 conditions at 1e-9, surface ≤ 1e-6 (worst {worst_c:.2e}, {attempts_c} attempts)"
    );
}

// ---------------------------------------------------------------------------
// 6. The distance oracles are metrics.
// ---------------------------------------------------------------------------

#[test]
fn criterion_6_oracle_metric_axioms() {
    let tolerances = tol();

    // doubling oracle on generated doubled-polytope certificates
    let mut produced = 0usize;
    let mut seed = 62_000u64;
    while produced < 25 {
        seed += 1;
        let Some(m) = lifted_doubled_metric(seed) else {
            continue;
        };
        let cert = embed(&m, seed, &tolerances).expect("embed");
        let EmbeddingCertificate::DoubledPolytope(c) = &cert else {
            continue;
        };
        let scale = m.diameter();
        let slack_v = 1e-6 * scale;
        let slack_ax = 1e-10 * scale.max(1.0);
        let mut pts: Vec<(u8, [f64; 3])> = c.sheet1.iter().map(|&p| (1u8, p)).collect();
        pts.push((2u8, c.s_tilde));
        let dd = |a: &(u8, [f64; 3]), b: &(u8, [f64; 3])| {
            doubling_distance(c, *a, *b, slack_v).expect("doubling_distance")
        };
        for a in &pts {
            assert_eq!(dd(a, a), 0.0, "seed {seed}: d(a,a) ≠ 0");
            for b in &pts {
                let ab = dd(a, b);
                let ba = dd(b, a);
                assert!(
                    (ab - ba).abs() <= slack_ax,
                    "seed {seed}: asymmetry {:.3e}",
                    (ab - ba).abs()
                );
                for z in &pts {
                    let az = dd(a, z);
                    let zb = dd(z, b);
                    assert!(
                        ab <= az + zb + slack_ax,
                        "seed {seed}: triangle violated by {:.3e}",
                        ab - az - zb
                    );
                }
            }
        }
        produced += 1;
    }

    // surface oracle on generated cone-disc certificates
    let mut produced_c = 0usize;
    let mut seed_c = 63_000u64;
    while produced_c < 25 {
        seed_c += 1;
        let Some(m) = cone_shared_center_metric(seed_c) else {
            continue;
        };
        let cert = embed_cone_disc(&m, 0, [1, 2], [3, 4], &tolerances).expect("cone-disc");
        let geom = SurfaceGeometry::new(&cert).expect("geometry");
        let sd = geom.distances(8);
        let slack_ax = 1e-10 * m.diameter().max(1.0);
        for u in 0..5 {
            assert_eq!(sd.dist[u][u], 0.0, "seed {seed_c}: d(u,u) ≠ 0");
            for v in 0..5 {
                if u != v {
                    assert!(sd.dist[u][v] > slack_ax, "seed {seed_c}: zero off-diagonal");
                }
                assert!(
                    (sd.dist[u][v] - sd.dist[v][u]).abs() <= slack_ax,
                    "seed {seed_c}: asymmetry"
                );
                for z in 0..5 {
                    assert!(
                        sd.dist[u][v] <= sd.dist[u][z] + sd.dist[z][v] + slack_ax,
                        "seed {seed_c}: triangle ({u},{z},{v}) violated by {:.3e}",
                        sd.dist[u][v] - sd.dist[u][z] - sd.dist[z][v]
                    );
                }
            }
        }
        produced_c += 1;
    }

    println!(
        "criterion 6: PASS — doubling and surface oracles satisfy the metric axioms on 25 + 25 certificates (slack 1e-10)"
    );
}

// ---------------------------------------------------------------------------
// 7. Equivariance under relabeling.
// ---------------------------------------------------------------------------

type SetKey = (usize, Vec<usize>);

fn structure_sets(s: &TenseStructure) -> [BTreeSet<SetKey>; 3] {
    let key = |t: &fivepoint::comparison::TenseSet| {
        let mut pts = t.points.clone();
        pts.sort_unstable();
        (t.center, pts)
    };
    [
        s.triples.iter().map(key).collect(),
        s.fours.iter().map(key).collect(),
        s.fives.iter().map(key).collect(),
    ]
}

fn transport(sets: &[BTreeSet<SetKey>; 3], inv: &Permutation) -> [BTreeSet<SetKey>; 3] {
    let map = |set: &BTreeSet<SetKey>| {
        set.iter()
            .map(|(c, pts)| {
                let mut p: Vec<usize> = pts.iter().map(|&x| inv.apply(x)).collect();
                p.sort_unstable();
                (inv.apply(*c), p)
            })
            .collect()
    };
    [map(&sets[0]), map(&sets[1]), map(&sets[2])]
}

fn class_of(c: &ConfigurationMatch) -> &'static str {
    match c {
        ConfigurationMatch::Cyclic { .. } => "cyclic",
        ConfigurationMatch::SharedCenter { .. } => "shared_center",
        ConfigurationMatch::FourPlusTwo { .. } => "four_plus_two",
        ConfigurationMatch::NoMatch => "none",
    }
}

fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut items: Vec<usize> = (0..n).collect();
    fn heap(k: usize, items: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(items.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, items, out);
            if k % 2 == 0 {
                items.swap(i, k - 1);
            } else {
                items.swap(0, k - 1);
            }
        }
    }
    heap(n, &mut items, &mut out);
    out
}

#[test]
fn criterion_7_equivariance() {
    let tolerances = tol();
    let params = SampleParams::default();

    let mut metrics: Vec<FiniteMetric> = Vec::new();
    for family in SampleFamily::ALL {
        for seed in [100u64, 101] {
            metrics.push(sample_metric(family, &params, seed).expect("sample"));
        }
    }
    metrics.push(star_metric());
    metrics.push(circle_class_metric(7_700).0);
    // 0,1,2,3,4 on a line: 4- and 5-point tense sets
    metrics.push(FiniteMetric::from_matrix(
        (0..5)
            .map(|i| (0..5).map(|j| (i as f64 - j as f64).abs()).collect())
            .collect(),
    ));
    for seed in 0..7u64 {
        metrics.push(uniform_metric(7_000 + seed));
    }
    assert_eq!(metrics.len(), 20);

    let perms = all_permutations(5);
    assert_eq!(perms.len(), 120);

    for (mi, m) in metrics.iter().enumerate() {
        let base_holds = lss_all(m, &tolerances).expect("lss_all").holds;
        let base_structure = tense_structure(m, &tolerances).expect("tense");
        let base_sets = structure_sets(&base_structure);
        let base_class = class_of(&match_configuration(m, &base_structure.triples));

        for images in &perms {
            let sigma = Permutation::from_images(images.clone()).expect("permutation");
            let mp = relabel(m, &sigma);
            assert_eq!(
                lss_all(&mp, &tolerances).expect("lss_all").holds,
                base_holds,
                "metric {mi}, σ = {images:?}: inequality verdict flipped"
            );
            let sp = tense_structure(&mp, &tolerances).expect("tense");
            let inv = sigma.inverse();
            assert_eq!(
                structure_sets(&sp),
                transport(&base_sets, &inv),
                "metric {mi}, σ = {images:?}: tense structure not equivariant"
            );
            assert_eq!(
                class_of(&match_configuration(&mp, &sp.triples)),
                base_class,
                "metric {mi}, σ = {images:?}: configuration class changed"
            );
        }
    }
    println!(
        "criterion 7: PASS — verdicts invariant under all 120 relabelings of 20 metrics"
    );
}
