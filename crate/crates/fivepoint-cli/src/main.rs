//! `fivepoint` — command-line front end for the embedding pipeline.
//!
//! Subcommands: `check` (comparison inequalities), `tense` (tight-set
//! structure), `classify` (configuration search vs. the golden fixture),
//! `embed` (construct + self-verify a certificate), `verify` (check a
//! certificate against a metric), `sample` (seeded model-space metrics).
//!
//! Exit codes: 0 pass, 1 mathematical failure, 2 input error, 3 no
//! constructive embedding applies. Identical inputs and seed produce
//! byte-identical outputs.

use std::fmt::Write as _;
use std::io::Read as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use fivepoint::classifier::{
    diff_against_golden, search_configurations, ConfigurationMatch, ExtremalityReport,
    GoldenRowMatch, SearchTree,
};
use fivepoint::classifier::{extremality_necessary, match_configuration};
use fivepoint::comparison::{lss_all, tense_structure, LssAll, TenseSet, TenseStructure};
use fivepoint::embed::{
    embed, CertificateEnvelope, EmbedError, EmbeddingCertificate, CERTIFICATE_SCHEMA_VERSION,
};
use fivepoint::verify::{sample_metric, verify_certificate, SampleFamily, SampleParams};
use fivepoint::verify::{VerificationReport, VerifyError};
use fivepoint::{validate_metric, FiniteMetric, RawMetric, Tolerances};

const CLASSIFICATION_FIXTURE: &str = include_str!("../fixtures/classification_tree.json");

#[derive(Parser)]
#[command(
    name = "fivepoint",
    version,
    about = "Decide and certify embeddability of metrics on up to five points",
    max_term_width = 100
)]
struct Cli {
    /// Override a named tolerance (repeatable), e.g. --tol lss=1e-8
    #[arg(long = "tol", value_name = "NAME=VALUE", global = true)]
    tol: Vec<String>,

    /// Seed for the solver multistarts and the samplers
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Output format (dot applies to classify only)
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Write the primary artifact here instead of stdout
    /// (for sample: the target directory)
    #[arg(long, global = true, value_name = "PATH")]
    output: Option<PathBuf>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check every comparison inequality of a metric
    Check {
        /// Metric JSON: a path, inline JSON, or - for stdin
        metric: String,
    },
    /// List tense sets and match them against the admissible configurations
    Tense {
        /// Metric JSON: a path, inline JSON, or - for stdin
        metric: String,
    },
    /// Regenerate the configuration search tree and diff it against the
    /// golden fixture
    Classify,
    /// Construct an embedding certificate and self-verify it
    Embed {
        /// Metric JSON: a path, inline JSON, or - for stdin
        metric: String,
        /// Relative tolerance for the self-verification
        #[arg(long, default_value_t = 1e-6)]
        rel_tol: f64,
    },
    /// Verify a certificate against a metric
    Verify {
        /// Metric JSON: a path, inline JSON, or - for stdin
        metric: String,
        /// Certificate envelope JSON: a path, inline JSON, or - for stdin
        certificate: String,
        /// Relative tolerance on each pair distance
        #[arg(long, default_value_t = 1e-6)]
        rel_tol: f64,
    },
    /// Write seeded sample metrics from a model-space family
    Sample {
        /// One of: sphere, flat_torus, euclidean, circle, doubled_polygon
        family: String,
        /// How many metrics to write (seeds seed, seed+1, …)
        count: u64,
    },
}

/// A command failure carrying its exit code; `Silent` skips the stderr
/// line (the command already explained itself on stdout).
enum Failure {
    Input(String),
    Math(String),
    NotConstructive(String),
    Silent(u8),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Math(_) => 1,
            Failure::Input(_) => 2,
            Failure::NotConstructive(_) => 3,
            Failure::Silent(c) => *c,
        }
    }

    fn message(&self) -> Option<&str> {
        match self {
            Failure::Input(m) | Failure::Math(m) | Failure::NotConstructive(m) => Some(m),
            Failure::Silent(_) => None,
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Input(format!("invalid JSON: {e}"))
    }
}

impl From<EmbedError> for Failure {
    fn from(e: EmbedError) -> Self {
        match e {
            EmbedError::NotConstructive { reason } => Failure::NotConstructive(reason),
            other => Failure::Math(other.to_string()),
        }
    }
}

impl From<VerifyError> for Failure {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::BadInput(_) | VerifyError::BadParams(_) => Failure::Input(e.to_string()),
            other => Failure::Math(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    let mut tol = Tolerances::default();
    for spec in &cli.tol {
        if let Err(msg) = apply_tolerance(&mut tol, spec) {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    }

    let result = match &cli.cmd {
        Cmd::Check { metric } => cmd_check(metric, &cli, &tol),
        Cmd::Tense { metric } => cmd_tense(metric, &cli, &tol),
        Cmd::Classify => cmd_classify(&cli),
        Cmd::Embed { metric, rel_tol } => cmd_embed(metric, *rel_tol, &cli, &tol),
        Cmd::Verify {
            metric,
            certificate,
            rel_tol,
        } => cmd_verify(metric, certificate, *rel_tol, &cli, &tol),
        Cmd::Sample { family, count } => cmd_sample(family, *count, &cli),
    };

    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if let Some(msg) = f.message() {
                eprintln!("error: {msg}");
            }
            ExitCode::from(f.code())
        }
    }
}

fn apply_tolerance(tol: &mut Tolerances, spec: &str) -> Result<(), String> {
    let (name, value) = spec
        .split_once('=')
        .ok_or_else(|| format!("--tol expects NAME=VALUE, got {spec:?}"))?;
    let value: f64 = value
        .parse()
        .map_err(|_| format!("--tol {name}: {value:?} is not a number"))?;
    tol.set(name, value).map_err(|e| e.to_string())
}

/// Reads a JSON argument: a literal `-` means stdin, a string starting
/// with `{` is taken inline, anything else is a path.
fn read_json_arg(arg: &str) -> Result<String, Failure> {
    if arg == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf)?;
        Ok(buf)
    } else if arg.trim_start().starts_with('{') {
        Ok(arg.to_string())
    } else {
        std::fs::read_to_string(arg)
            .map_err(|e| Failure::Input(format!("cannot read {arg}: {e}")))
    }
}

fn load_metric(arg: &str, tol: &Tolerances) -> Result<FiniteMetric, Failure> {
    let text = read_json_arg(arg)?;
    let raw: RawMetric = serde_json::from_str(&text)?;
    validate_metric(raw, false, tol).map_err(|e| Failure::Input(format!("invalid metric: {e}")))
}

fn load_certificate(arg: &str) -> Result<EmbeddingCertificate, Failure> {
    let text = read_json_arg(arg)?;
    let env: CertificateEnvelope = serde_json::from_str(&text)?;
    if env.schema_version != CERTIFICATE_SCHEMA_VERSION {
        return Err(Failure::Input(format!(
            "certificate schema version {} unsupported (expected {})",
            env.schema_version, CERTIFICATE_SCHEMA_VERSION
        )));
    }
    Ok(env.certificate)
}

/// Writes the primary artifact to --output, or to stdout.
fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), Failure> {
    match out {
        Some(path) => {
            std::fs::write(path, content)
                .map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))?;
        }
        None => print!("{content}"),
    }
    Ok(())
}

fn pretty(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable value");
    s.push('\n');
    s
}

// ---------------------------------------------------------------------------
// check
// ---------------------------------------------------------------------------

fn cmd_check(metric: &str, cli: &Cli, tol: &Tolerances) -> Result<(), Failure> {
    if cli.format == Format::Dot {
        return Err(Failure::Input("dot format only applies to classify".into()));
    }
    let m = load_metric(metric, tol)?;
    let all = lss_all(&m, tol).map_err(|e| Failure::Math(e.to_string()))?;

    let content = match cli.format {
        Format::Json => pretty(&serde_json::to_value(&all)?),
        _ => render_check_text(&all),
    };
    emit(&cli.output, &content)?;
    if all.holds {
        Ok(())
    } else {
        Err(Failure::Silent(1))
    }
}

fn render_check_text(all: &LssAll) -> String {
    let violated: Vec<_> = all.reports.iter().filter(|r| !r.holds).collect();
    let mut out = String::new();
    if violated.is_empty() {
        let _ = writeln!(
            out,
            "checked {} comparison inequalities: all hold",
            all.reports.len()
        );
    } else {
        let _ = writeln!(
            out,
            "checked {} comparison inequalities: {} violated",
            all.reports.len(),
            violated.len()
        );
        for r in violated {
            let lambda = r
                .argmin
                .iter()
                .map(|l| format!("{l:.6}"))
                .collect::<Vec<_>>()
                .join(", ");
            let _ = writeln!(
                out,
                "violated: center {} over {{{}}}: min {:.6e} at λ [{}]",
                r.center,
                r.others.join(", "),
                r.min_value,
                lambda
            );
        }
    }
    out
}

// ---------------------------------------------------------------------------
// tense
// ---------------------------------------------------------------------------

fn cmd_tense(metric: &str, cli: &Cli, tol: &Tolerances) -> Result<(), Failure> {
    if cli.format == Format::Dot {
        return Err(Failure::Input("dot format only applies to classify".into()));
    }
    let m = load_metric(metric, tol)?;
    let structure = tense_structure(&m, tol).map_err(|e| Failure::Math(e.to_string()))?;
    let matched = match_configuration(&m, &structure.triples);
    let extremality = extremality_necessary(&m, tol).map_err(|e| Failure::Math(e.to_string()))?;

    let content = match cli.format {
        Format::Json => pretty(&serde_json::json!({
            "triples": structure.triples.iter().map(|t| tense_set_json(t, &m)).collect::<Vec<_>>(),
            "fours": structure.fours.iter().map(|t| tense_set_json(t, &m)).collect::<Vec<_>>(),
            "fives": structure.fives.iter().map(|t| tense_set_json(t, &m)).collect::<Vec<_>>(),
            "configuration": configuration_json(&matched, &m),
            "extremality": serde_json::to_value(&extremality)?,
        })),
        _ => render_tense_text(&structure, &matched, &extremality, &m),
    };
    emit(&cli.output, &content)
}

fn tense_set_json(t: &TenseSet, m: &FiniteMetric) -> serde_json::Value {
    serde_json::json!({
        "center": m.label(t.center),
        "points": t.points.iter().map(|&p| m.label(p)).collect::<Vec<_>>(),
        "degenerate": t.degenerate,
    })
}

fn configuration_json(c: &ConfigurationMatch, m: &FiniteMetric) -> serde_json::Value {
    let lab = |&i: &usize| m.label(i).to_string();
    match c {
        ConfigurationMatch::Cyclic { order } => serde_json::json!({
            "class": "cyclic",
            "order": order.iter().map(lab).collect::<Vec<_>>(),
        }),
        ConfigurationMatch::SharedCenter { x, v, w } => serde_json::json!({
            "class": "shared_center",
            "x": lab(x),
            "v": v.iter().map(lab).collect::<Vec<_>>(),
            "w": w.iter().map(lab).collect::<Vec<_>>(),
        }),
        ConfigurationMatch::FourPlusTwo { x, v, w } => serde_json::json!({
            "class": "four_plus_two",
            "x": lab(x),
            "v": v.iter().map(lab).collect::<Vec<_>>(),
            "w": w.iter().map(lab).collect::<Vec<_>>(),
        }),
        ConfigurationMatch::NoMatch => serde_json::json!({ "class": "none" }),
    }
}

/// "v1 c v2" for a triple; "center c over {…}" for larger sets.
fn tense_set_text(t: &TenseSet, m: &FiniteMetric) -> String {
    if t.size() == 3 {
        let ends: Vec<&str> = t
            .points
            .iter()
            .filter(|&&p| p != t.center)
            .map(|&p| m.label(p))
            .collect();
        format!("{} {} {}", ends[0], m.label(t.center), ends[1])
    } else {
        let others: Vec<&str> = t
            .points
            .iter()
            .filter(|&&p| p != t.center)
            .map(|&p| m.label(p))
            .collect();
        format!("center {} over {{{}}}", m.label(t.center), others.join(", "))
    }
}

fn configuration_text(c: &ConfigurationMatch, m: &FiniteMetric) -> String {
    let lab = |&i: &usize| m.label(i).to_string();
    match c {
        ConfigurationMatch::Cyclic { order } => format!(
            "cyclic ({})",
            order.iter().map(lab).collect::<Vec<_>>().join(" ")
        ),
        ConfigurationMatch::SharedCenter { x, v, w } => format!(
            "shared-center (x={}, v={{{}, {}}}, w={{{}, {}}})",
            lab(x),
            lab(&v[0]),
            lab(&v[1]),
            lab(&w[0]),
            lab(&w[1])
        ),
        ConfigurationMatch::FourPlusTwo { x, v, w } => format!(
            "four-plus-two (x={}, v={{{}, {}}}, w={{{}, {}}})",
            lab(x),
            lab(&v[0]),
            lab(&v[1]),
            lab(&w[0]),
            lab(&w[1])
        ),
        ConfigurationMatch::NoMatch => "none".to_string(),
    }
}

fn render_tense_text(
    s: &TenseStructure,
    matched: &ConfigurationMatch,
    ex: &ExtremalityReport,
    m: &FiniteMetric,
) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "tense triples ({}):", s.triples.len());
    for t in &s.triples {
        let _ = writeln!(out, "  {}", tense_set_text(t, m));
    }
    let _ = writeln!(out, "tense 4-point sets ({}):", s.fours.len());
    for t in &s.fours {
        let _ = writeln!(out, "  {}", tense_set_text(t, m));
    }
    let _ = writeln!(out, "tense 5-point sets ({}):", s.fives.len());
    for t in &s.fives {
        let _ = writeln!(out, "  {}", tense_set_text(t, m));
    }
    let _ = writeln!(out, "configuration: {}", configuration_text(matched, m));
    let _ = writeln!(
        out,
        "extremality necessary conditions: {}",
        if ex.necessary_pass { "pass" } else { "fail" }
    );
    let yn = |b: bool| if b { "yes" } else { "no" };
    let _ = writeln!(out, "  tense sets present: {}", yn(ex.has_tense_set));
    let _ = writeln!(out, "  only triples: {}", yn(ex.only_triples));
    let _ = writeln!(out, "  all pairs covered: {}", yn(ex.all_pairs_covered));
    let _ = writeln!(
        out,
        "  triple count: {} ({})",
        ex.triple_count,
        if ex.at_least_five_triples { ">= 5" } else { "< 5" }
    );
    let _ = writeln!(out, "  P/Y-free: {}", yn(ex.py_free));
    let _ = writeln!(out, "  perturbation dimension: {}", ex.perturbation_dimension);
    out
}

// ---------------------------------------------------------------------------
// classify
// ---------------------------------------------------------------------------

fn cmd_classify(cli: &Cli) -> Result<(), Failure> {
    let tree = search_configurations();
    let diff = diff_against_golden(&tree);
    let tree_json = tree.to_json();
    let fixture: serde_json::Value = serde_json::from_str(CLASSIFICATION_FIXTURE)
        .map_err(|e| Failure::Input(format!("bundled fixture is invalid JSON: {e}")))?;
    let fixture_match = tree_json == fixture;

    let content = match (&cli.format, &diff) {
        (Format::Dot, _) => tree.to_dot(),
        (Format::Json, Ok(rows)) => pretty(&serde_json::json!({
            "tree": tree_json,
            "rows": serde_json::to_value(rows)?,
            "admissible": tree
                .admissible_configs()
                .iter()
                .map(|c| c.notation())
                .collect::<Vec<_>>(),
            "fixture_match": fixture_match,
        })),
        (Format::Json, Err(e)) => pretty(&serde_json::json!({
            "tree": tree_json,
            "error": e,
            "fixture_match": fixture_match,
        })),
        (Format::Text, Ok(rows)) => render_classify_text(&tree, rows, fixture_match),
        (Format::Text, Err(e)) => format!("golden table mismatch: {e}\n"),
    };
    emit(&cli.output, &content)?;

    match (diff, fixture_match) {
        (Ok(_), true) => Ok(()),
        (Err(e), _) => Err(Failure::Math(format!("golden table mismatch: {e}"))),
        (_, false) => Err(Failure::Math(
            "classification tree differs from the golden fixture".into(),
        )),
    }
}

fn render_classify_text(tree: &SearchTree, rows: &[GoldenRowMatch], fixture_match: bool) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "configuration search: {} nodes, {} admissible",
        tree.nodes.len(),
        tree.admissible.len()
    );
    let _ = writeln!(
        out,
        "{:>4} {:>5}  {:<28} {:<5} {:>9} {:>9}  {}",
        "row", "node", "configuration", "pair", "rejected", "accepted", "admissible"
    );
    for r in rows {
        let pair = tree.nodes[r.node - 1]
            .pair
            .map(|(p, q)| {
                format!("{}{}", (b'a' + p as u8) as char, (b'a' + q as u8) as char)
            })
            .unwrap_or_else(|| "-".into());
        let _ = writeln!(
            out,
            "{:>4} {:>5}  {:<28} {:<5} {:>9} {:>9}  {}",
            r.row,
            r.node,
            r.config.join(" "),
            pair,
            r.rejected,
            r.accepted,
            if r.admissible { "yes" } else { "no" }
        );
    }
    let _ = writeln!(out, "admissible configurations:");
    for cfg in tree.admissible_configs() {
        let _ = writeln!(out, "  {}", cfg.notation().join(" "));
    }
    let _ = writeln!(
        out,
        "golden fixture: {}",
        if fixture_match { "match" } else { "MISMATCH" }
    );
    out
}

// ---------------------------------------------------------------------------
// embed
// ---------------------------------------------------------------------------

fn cmd_embed(metric: &str, rel_tol: f64, cli: &Cli, tol: &Tolerances) -> Result<(), Failure> {
    if cli.format == Format::Dot {
        return Err(Failure::Input("dot format only applies to classify".into()));
    }
    let m = load_metric(metric, tol)?;
    let cert = embed(&m, cli.seed, tol)?;
    let report = verify_certificate(&m, &cert, rel_tol)?;
    let envelope = CertificateEnvelope::new(cert);
    let envelope_json = pretty(&serde_json::to_value(&envelope)?);

    let summary = render_embed_summary(&envelope.certificate, &report);
    match (&cli.output, cli.format) {
        (Some(path), _) => {
            std::fs::write(path, &envelope_json)
                .map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))?;
            if let EmbeddingCertificate::DoubledPolytope(c) = &envelope.certificate {
                let off_path = path.with_extension("off");
                std::fs::write(&off_path, c.to_off()).map_err(|e| {
                    Failure::Input(format!("cannot write {}: {e}", off_path.display()))
                })?;
                print!("{summary}wrote {} and {}\n", path.display(), off_path.display());
            } else {
                print!("{summary}wrote {}\n", path.display());
            }
        }
        (None, Format::Json) => print!("{envelope_json}"),
        (None, _) => print!("{summary}"),
    }

    if report.pass {
        Ok(())
    } else {
        let detail = report
            .worst_pair()
            .map(|p| {
                format!(
                    "worst pair ({}, {}): target {:.9}, induced {:.9}",
                    p.labels.0, p.labels.1, p.target, p.induced
                )
            })
            .unwrap_or_default();
        Err(Failure::Math(format!(
            "self-verification failed at relative tolerance {rel_tol:.1e}; {detail}"
        )))
    }
}

fn render_embed_summary(cert: &EmbeddingCertificate, report: &VerificationReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "certificate: {}", cert.kind());
    match cert {
        EmbeddingCertificate::Circle(c) => {
            let _ = writeln!(out, "  circumference: {:.9}", c.length);
        }
        EmbeddingCertificate::DoubledPolytope(c) => {
            let _ = writeln!(out, "  facets: {}", c.halfspaces.len());
        }
        EmbeddingCertificate::ConeDisc(c) => {
            let flat = c
                .triangles
                .iter()
                .flatten()
                .filter(|t| t.is_flat())
                .count();
            let _ = writeln!(out, "  cone triangles: 4 ({flat} flat)");
        }
        EmbeddingCertificate::Product(p) => {
            let _ = writeln!(out, "  factors: {}", p.factors.len());
        }
        EmbeddingCertificate::Euclidean(_) => {}
    }
    let worst = report
        .worst_pair()
        .map(|p| format!("{:.3e}", p.rel_err))
        .unwrap_or_else(|| "0".into());
    let _ = writeln!(
        out,
        "self-verification: {} (worst relative error {})",
        if report.pass { "pass" } else { "FAIL" },
        worst
    );
    if report.depth_exhausted {
        let _ = writeln!(
            out,
            "note: unfolding depth cap reached; surface distances are upper bounds"
        );
    }
    out
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

fn cmd_verify(
    metric: &str,
    certificate: &str,
    rel_tol: f64,
    cli: &Cli,
    tol: &Tolerances,
) -> Result<(), Failure> {
    if cli.format == Format::Dot {
        return Err(Failure::Input("dot format only applies to classify".into()));
    }
    let m = load_metric(metric, tol)?;
    let cert = load_certificate(certificate)?;
    let report = verify_certificate(&m, &cert, rel_tol)?;

    let content = match cli.format {
        Format::Json => pretty(&serde_json::to_value(&report)?),
        _ => render_verify_text(&report),
    };
    emit(&cli.output, &content)?;
    if report.pass {
        Ok(())
    } else {
        Err(Failure::Silent(1))
    }
}

fn render_verify_text(report: &VerificationReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<12} {:>14} {:>14} {:>10}",
        "pair", "target", "induced", "rel err"
    );
    for p in &report.pairs {
        let _ = writeln!(
            out,
            "{:<12} {:>14.9} {:>14.9} {:>10.3e}",
            format!("{} {}", p.labels.0, p.labels.1),
            p.target,
            p.induced,
            p.rel_err
        );
    }
    if report.depth_exhausted {
        let _ = writeln!(
            out,
            "note: unfolding depth cap reached; induced surface distances are upper bounds"
        );
    }
    let worst = report
        .worst_pair()
        .map(|p| format!(", worst {:.3e} on {} {}", p.rel_err, p.labels.0, p.labels.1))
        .unwrap_or_default();
    let _ = writeln!(
        out,
        "verdict: {} (rel tol {:.1e}{})",
        if report.pass { "pass" } else { "fail" },
        report.rel_tol,
        worst
    );
    out
}

// ---------------------------------------------------------------------------
// sample
// ---------------------------------------------------------------------------

fn cmd_sample(family: &str, count: u64, cli: &Cli) -> Result<(), Failure> {
    if cli.format == Format::Dot {
        return Err(Failure::Input("dot format only applies to classify".into()));
    }
    let family: SampleFamily = family
        .parse()
        .map_err(|e: String| Failure::Input(e))?;
    let params = SampleParams::default();
    let dir: &Path = cli.output.as_deref().unwrap_or(Path::new("."));
    if !dir.is_dir() {
        return Err(Failure::Input(format!(
            "--output {} is not a directory",
            dir.display()
        )));
    }

    let mut files = Vec::new();
    for i in 0..count {
        let seed = cli.seed.wrapping_add(i);
        let m = sample_metric(family, &params, seed)?;
        let raw = RawMetric {
            labels: m.labels().to_vec(),
            d: m.matrix().clone(),
            mode: m.mode(),
        };
        let path = dir.join(format!("{}-s{seed}.json", family.name()));
        std::fs::write(&path, pretty(&serde_json::to_value(&raw)?))
            .map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))?;
        files.push(path.display().to_string());
    }

    match cli.format {
        Format::Json => print!("{}", pretty(&serde_json::json!({ "files": files }))),
        _ => {
            for f in &files {
                println!("{f}");
            }
        }
    }
    Ok(())
}
