//! Cross-cutting integration checks: both pipelines on several models at
//! moderate depth.  The full acceptance suite lives in the CLI crate.

use loopcalc_core::models::{builtin, flip_orientation};
use loopcalc_core::stringtop::{loop_algebra, transport_report, verify_phi};
use loopcalc_core::sullivan::cross_pipeline_betti;

#[test]
fn bv_and_transport_on_the_reference_models() {
    // the two even-dimensional products carry nonzero products of odd
    // classes, the case that pins the degree-reversal twist of the transport
    for (name, n) in [
        ("S2", 8i64),
        ("S3", 9),
        ("CP2", 10),
        ("S2xS3", 10),
        ("S3xS3", 9),
        ("S2xS2", 8),
    ] {
        let pd = builtin(name).unwrap().pd;
        verify_phi(&pd, 8).unwrap();
        let la = loop_algebra(&pd, n).unwrap();
        let report = la.verify();
        assert!(report.is_clean(), "{name}: {:?}", &report.failures[..report.failures.len().min(3)]);
        let tr = transport_report(&pd, &la).unwrap();
        assert!(tr.is_clean(), "{name}: {:?}", &tr.failures[..tr.failures.len().min(3)]);
    }
}

#[test]
fn betti_numbers_agree_between_pipelines() {
    for name in ["S2", "S3", "S4", "CP2", "CP3", "S2xS3", "S2xS2", "S3xS3"] {
        let b = builtin(name).unwrap();
        for (n, h, s) in cross_pipeline_betti(&b.pd, &b.sullivan, 8).unwrap() {
            assert_eq!(h, s, "{name} disagrees at degree {n}");
        }
    }
}

#[test]
fn axioms_survive_an_orientation_flip() {
    let pd = flip_orientation(&builtin("S3").unwrap().pd).unwrap();
    assert!(pd.validate().is_clean());
    let la = loop_algebra(&pd, 9).unwrap();
    assert!(la.verify().is_clean());
    assert!(transport_report(&pd, &la).unwrap().is_clean());
}
