//! The five-cycle metric: decide, construct, verify. Mirrors the README.

use fivepoint::comparison::lss_all;
use fivepoint::embed::embed;
use fivepoint::verify::verify_certificate;
use fivepoint::{FiniteMetric, Tolerances};

fn main() {
    let tol = Tolerances::default();
    let m = FiniteMetric::from_matrix(vec![
        vec![0.0, 1.0, 2.0, 2.0, 1.0],
        vec![1.0, 0.0, 1.0, 2.0, 2.0],
        vec![2.0, 1.0, 0.0, 1.0, 2.0],
        vec![2.0, 2.0, 1.0, 0.0, 1.0],
        vec![1.0, 2.0, 2.0, 1.0, 0.0],
    ]);
    assert!(lss_all(&m, &tol).unwrap().holds);
    let cert = embed(&m, 0, &tol).unwrap();
    let report = verify_certificate(&m, &cert, 1e-9).unwrap();
    assert!(report.pass);
    println!(
        "five-cycle embeds as a {}; worst relative error {:.3e}",
        cert.kind(),
        report.worst_pair().map_or(0.0, |p| p.rel_err)
    );
}
