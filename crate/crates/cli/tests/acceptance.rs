//! Acceptance suite: the exit gate for the whole artifact.
//!
//! Every criterion is exact — zero tolerance — and prints one line.  Run
//! with `cargo test -p loopcalc-cli --test acceptance -- --nocapture`.

use std::sync::Arc;

use loopcalc_core::hochschild::{
    verify_chain_identities, verify_cochain_identities, HochschildComplex,
};
use loopcalc_core::models::{builtin, BUILTIN_NAMES};
use loopcalc_core::stringtop::{loop_algebra, transport_report, verify_phi};
use loopcalc_core::sullivan::{
    comparison_map, cross_pipeline_betti, hodge_shift_report, hodge_table, loop_space_betti,
    FreeLoopModel,
};
use loopcalc_core::Complex;

fn pass(criterion: &str) {
    println!("PASS {criterion}");
}

/// Criterion 1: chain-level identities for every built-in model up to
/// N = 12: ∂² = 0, δ² = 0, B² = 0, B∂ + ∂B = 0 on every basis element.
#[test]
fn criterion_1_chain_level_identities() {
    for name in BUILTIN_NAMES {
        let pd = builtin(name).unwrap().pd;
        let started = std::time::Instant::now();
        verify_chain_identities(pd.algebra(), 12)
            .unwrap_or_else(|e| panic!("{name}: {e}"));
        let m = pd.dimension;
        verify_cochain_identities(pd.algebra(), m - 13, m)
            .unwrap_or_else(|e| panic!("{name}: {e}"));
        let dt = started.elapsed();
        assert!(
            dt.as_secs() < 60,
            "{name}: identity checks took {dt:?}, over the 60 s target"
        );
    }
    pass("criterion 1: ∂², δ², B², B∂+∂B vanish on every basis element, all built-ins, N = 12");
}

/// Criterion 2: the loop coproduct commutes with the differentials in the
/// graded sense and respects the word-length splitting, on every basis word
/// of every built-in model up to N = 12.
#[test]
fn criterion_2_loop_coproduct_identities() {
    for name in BUILTIN_NAMES {
        let pd = builtin(name).unwrap().pd;
        verify_phi(&pd, 12).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
    pass("criterion 2: Φ chain-map and filtration identities, all built-ins, N = 12");
}

/// Criterion 3: the loop algebra of S², S³, CP², S²×S³ passes graded
/// commutativity, associativity, unit, Δ² = 0, bracket antisymmetry, Jacobi
/// and the Poisson rule, exhaustively over all in-range tuples at N = 12.
#[test]
fn criterion_3_bv_axioms() {
    for name in ["S2", "S3", "CP2", "S2xS3"] {
        let pd = builtin(name).unwrap().pd;
        let la = loop_algebra(&pd, 12).unwrap();
        let report = la.verify();
        assert!(
            report.is_clean(),
            "{name}: {} failures, first: {}",
            report.failures.len(),
            report.failures[0]
        );
    }
    pass("criterion 3: BV axioms exhaustively on S2, S3, CP2, S2xS3 at N = 12");
}

/// Criterion 4: the duality transport carries the loop product table to the
/// independently computed cup product table, entry by entry, for S², CP²
/// and S³ up to degree 10.
#[test]
fn criterion_4_transport_is_the_cup_product() {
    for name in ["S2", "CP2", "S3"] {
        let pd = builtin(name).unwrap().pd;
        let la = loop_algebra(&pd, 10).unwrap();
        let report = transport_report(&pd, &la).unwrap();
        assert!(
            report.is_clean(),
            "{name}: {} mismatches, first: {}",
            report.failures.len(),
            report.failures[0]
        );
        assert!(report.entries_checked > 0);
    }
    pass("criterion 4: θ-transported dual-of-Φ table equals the cup product table, entrywise");
}

/// Criterion 5: per-degree Betti numbers agree between the two pipelines for
/// every built-in pair, n ≤ 10; in particular dim H^n(LS²;ℚ) = 1 for all
/// 0 ≤ n ≤ 10.
#[test]
fn criterion_5_pipelines_compute_the_same_betti_numbers() {
    for name in BUILTIN_NAMES {
        let b = builtin(name).unwrap();
        for (n, h, s) in cross_pipeline_betti(&b.pd, &b.sullivan, 10).unwrap() {
            assert_eq!(h, s, "{name}: pipelines disagree at degree {n}");
            if name == "S2" {
                assert_eq!(h, 1, "dim H^{n}(LS²) must be 1");
            }
        }
    }
    pass("criterion 5: Betti agreement for every built-in pair, n ≤ 10; LS² is one-dimensional");
}

/// Criterion 6: the comparison map from Hochschild chains to the free loop
/// model satisfies f∘∂ = d̄∘f and f∘B = S∘f exactly, and is a
/// quasi-isomorphism in the checked range, for the S² and S³ models, N = 10.
#[test]
fn criterion_6_comparison_map() {
    for name in ["S2", "S3"] {
        let sullivan = builtin(name).unwrap().sullivan;
        let cm = comparison_map(&sullivan, 10).unwrap();
        cm.check_chain_map().unwrap_or_else(|e| panic!("{name}: {e}"));
        cm.check_intertwines_rotation()
            .unwrap_or_else(|e| panic!("{name}: {e}"));
        cm.check_quasi_iso(10).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
    pass("criterion 6: f∘∂ = d̄∘f, f∘B = S∘f, H(f) bijective for S2 and S3 models at N = 10");
}

/// Criterion 7: the Hodge-shift avatars hold for every built-in at N = 10:
/// S raises the bar weight by exactly one (chain level and on homology
/// blocks), B raises the word-length filtration by one, and Φ splits it.
#[test]
fn criterion_7_hodge_shift_avatars() {
    for name in BUILTIN_NAMES {
        let b = builtin(name).unwrap();
        let flm = FreeLoopModel::build(&b.sullivan).unwrap();
        let report = hodge_shift_report(&flm, Some(&b.pd), 10).unwrap();
        assert!(
            report.is_clean(),
            "{name}: {}",
            report.failures.first().unwrap()
        );
    }
    pass("criterion 7: S(G^p) ⊆ G^{p+1}, B(F_p) ⊆ F_{p+1}, Φ(F_p) ⊆ ⊕F_k⊗F_ℓ, all built-ins, N = 10");
}

/// Criterion 8: the Hodge rows sum to the Betti numbers for n ≤ 10 on every
/// built-in, and weight 0 is the manifold cohomology.
#[test]
fn criterion_8_hodge_sanity() {
    for name in BUILTIN_NAMES {
        let b = builtin(name).unwrap();
        let flm = FreeLoopModel::build(&b.sullivan).unwrap();
        let table = hodge_table(&flm, 10).unwrap();
        for (n, total) in loop_space_betti(&flm, 10).unwrap() {
            assert_eq!(
                table.row_sum(n),
                total,
                "{name}: Hodge rows do not sum at degree {n}"
            );
        }
        let base = Complex::new(
            b.pd.algebra().space().clone(),
            b.pd.algebra().differential_map(),
        );
        for n in 0..=b.pd.dimension.min(10) {
            assert_eq!(
                table.dim(n, 0),
                base.homology(n).unwrap().dim,
                "{name}: weight 0 differs from H^{n}(M)"
            );
        }
    }
    pass("criterion 8: Σ_p dim H^n_[p] = dim H^n and H^n_[0] = H^n(M), all built-ins, n ≤ 10");
}

/// Criterion 9: `check --builtin S2 -N 12` exits 0 end-to-end in ≤ 5 minutes.
#[test]
fn criterion_9_cli_check_s2() {
    let started = std::time::Instant::now();
    let status = std::process::Command::new(env!("CARGO_BIN_EXE_loopcalc"))
        .args(["check", "--builtin", "S2", "-N", "12"])
        .status()
        .expect("spawn loopcalc");
    let dt = started.elapsed();
    assert!(status.success(), "check exited with {status}");
    assert!(dt.as_secs() < 300, "check took {dt:?}, over the 5 min budget");
    pass("criterion 9: `check --builtin S2 -N 12` exits 0 within the time budget");
}

/// The sphere H⁰ sanity from the module invariants, kept next to the gate:
/// connectedness of the free loop space on every built-in.
#[test]
fn h0_is_one_dimensional_everywhere() {
    for name in BUILTIN_NAMES {
        let pd = builtin(name).unwrap().pd;
        let hc = HochschildComplex::build(Arc::new(pd.algebra().clone()), 2).unwrap();
        assert_eq!(hc.complex().homology(0).unwrap().dim, 1, "{name}");
    }
    pass("extra: H⁰ = ℚ on every built-in");
}
