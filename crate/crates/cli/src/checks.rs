//! The `check` subcommand: every verification suite the model supports, one
//! pass/fail line each, exit 0 iff everything holds.

use std::sync::Arc;

use loopcalc_core::hochschild::verify_chain_identities;
use loopcalc_core::stringtop::{loop_algebra, transport_report, verify_phi};
use loopcalc_core::sullivan::{
    cross_pipeline_betti, hodge_shift_report, hodge_table, FreeLoopModel,
};
use loopcalc_core::{Complex, HochschildComplex};

use crate::output::{self, CheckOut, CheckRow, Format};
use crate::{Source, UsageError};

/// Caps the exhaustive BV triple enumeration; beyond this the suite
/// subsamples deterministically from the seed.
const TRIPLE_CAP: usize = 2_000_000;

pub fn cmd_check(
    source: &Source,
    n_max: i64,
    seed: u64,
    format: Format,
) -> Result<bool, UsageError> {
    let mut results: Vec<CheckRow> = Vec::new();
    let mut record = |name: &str, outcome: Result<(), String>| {
        results.push(CheckRow {
            name: name.to_string(),
            ok: outcome.is_ok(),
            witness: outcome.err(),
        });
    };

    if let Some(pd) = source.pd() {
        let report = pd.validate();
        record(
            "duality model axioms",
            report
                .violations
                .first()
                .map_or(Ok(()), |v| Err(v.to_string())),
        );
        if report.is_clean() {
            record("chain identities ∂², B², B∂+∂B, filtration", {
                verify_chain_identities(pd.algebra(), n_max)
            });
            record("cochain identity δ²", cochain_square_zero(pd, n_max));
            record("loop coproduct chain map and filtration", verify_phi(pd, n_max));
            record("H⁰ of the chain complex is ℚ", h0_is_q(pd, n_max));
            if n_max >= pd.dimension {
                match loop_algebra(pd, n_max) {
                    Ok(la) => {
                        let bv = la.verify_sampled(TRIPLE_CAP, seed);
                        record(
                            "BV axioms on the loop algebra",
                            bv.failures.first().cloned().map_or(Ok(()), Err),
                        );
                        match transport_report(pd, &la) {
                            Ok(tr) => record(
                                "duality transport matches the cup product",
                                tr.failures.first().cloned().map_or(Ok(()), Err),
                            ),
                            Err(e) => record("duality transport", Err(e.to_string())),
                        }
                    }
                    Err(e) => record("loop algebra construction", Err(e.to_string())),
                }
            }
        }
    }

    if let Some(s) = source.sullivan() {
        let report = s.validate();
        record(
            "Sullivan model axioms",
            report
                .violations
                .first()
                .map_or(Ok(()), |v| Err(v.to_string())),
        );
        if report.is_clean() {
            match FreeLoopModel::build(s) {
                Ok(flm) => {
                    record(
                        "free loop identities d̄², S², Sd̄+d̄S",
                        free_loop_identities(&flm, n_max),
                    );
                    record("Hodge rows sum to the total Betti numbers", {
                        hodge_sums(&flm, n_max)
                    });
                    record(
                        "Hodge shift: S raises the weight by one",
                        match hodge_shift_report(&flm, source.pd(), n_max) {
                            Ok(r) => r.failures.first().cloned().map_or(Ok(()), Err),
                            Err(e) => Err(e.to_string()),
                        },
                    );
                    if let Some(pd) = source.pd() {
                        record("weight 0 is the manifold cohomology", {
                            weight_zero_is_base(&flm, pd, n_max)
                        });
                    }
                    record("comparison map: chain map, rotation, quasi-iso", {
                        comparison_checks(s, n_max.min(10))
                    });
                }
                Err(e) => record("free loop model construction", Err(e.to_string())),
            }
        }
    }

    if let (Some(pd), Some(s)) = (source.pd(), source.sullivan()) {
        record("cross-pipeline Betti agreement", {
            match cross_pipeline_betti(pd, s, n_max) {
                Ok(rows) => rows
                    .iter()
                    .find(|(_, h, su)| h != su)
                    .map_or(Ok(()), |(n, h, su)| {
                        Err(format!("degree {n}: hochschild {h} vs sullivan {su}"))
                    }),
                Err(e) => Err(e.to_string()),
            }
        });
    }

    let passed = results.iter().all(|r| r.ok);
    let out = CheckOut {
        model: source.name(),
        max_degree: n_max,
        results,
        passed,
    };
    output::print_check(&out, format);
    Ok(passed)
}

fn cochain_square_zero(pd: &loopcalc_core::PdModel, n_max: i64) -> Result<(), String> {
    let m = pd.dimension;
    let cc = loopcalc_core::CochainComplex::build(
        Arc::new(pd.algebra().clone()),
        m - n_max - 1,
        m,
    )
    .map_err(|e| e.to_string())?;
    cc.complex()
        .check_square_zero()
        .map_err(|(n, j)| format!("δ² ≠ 0 at {}", cc.basis(n)[j].label(pd.algebra())))
}

fn h0_is_q(pd: &loopcalc_core::PdModel, n_max: i64) -> Result<(), String> {
    let hc = HochschildComplex::build(Arc::new(pd.algebra().clone()), n_max.min(2))
        .map_err(|e| e.to_string())?;
    let h0 = hc.complex().homology(0).map_err(|e| e.to_string())?;
    if h0.dim == 1 {
        Ok(())
    } else {
        Err(format!("dim H⁰ = {}", h0.dim))
    }
}

fn free_loop_identities(flm: &FreeLoopModel, n_max: i64) -> Result<(), String> {
    let lc = flm.complex(n_max);
    lc.complex
        .check_square_zero()
        .map_err(|(n, j)| format!("d̄² ≠ 0 at degree {n}, index {j}"))?;
    // S² = 0 and Sd̄ + d̄S = 0 on every stored monomial
    let names = flm.names().to_vec();
    for level in lc.basis.values() {
        for m in level {
            let s = flm.apply_s(m);
            let mut ss = loopcalc_core::sullivan::Poly::new();
            for (t, c) in &s {
                loopcalc_core::sullivan::poly_add_scaled(&mut ss, &flm.apply_s(t), c);
            }
            if !ss.is_empty() {
                return Err(format!("S² ≠ 0 at {}", m.label(&names)));
            }
            let mut anti = loopcalc_core::sullivan::Poly::new();
            for (t, c) in &s {
                loopcalc_core::sullivan::poly_add_scaled(&mut anti, &flm.apply_dbar(t), c);
            }
            for (t, c) in &flm.apply_dbar(m) {
                loopcalc_core::sullivan::poly_add_scaled(&mut anti, &flm.apply_s(t), c);
            }
            if !anti.is_empty() {
                return Err(format!("Sd̄ + d̄S ≠ 0 at {}", m.label(&names)));
            }
        }
    }
    Ok(())
}

fn hodge_sums(flm: &FreeLoopModel, n_max: i64) -> Result<(), String> {
    let table = hodge_table(flm, n_max).map_err(|e| e.to_string())?;
    let betti =
        loopcalc_core::sullivan::loop_space_betti(flm, n_max).map_err(|e| e.to_string())?;
    for (n, total) in betti {
        if table.row_sum(n) != total {
            return Err(format!(
                "degree {n}: Σ_p dim = {} but dim H^{n} = {total}",
                table.row_sum(n)
            ));
        }
    }
    Ok(())
}

fn weight_zero_is_base(
    flm: &FreeLoopModel,
    pd: &loopcalc_core::PdModel,
    n_max: i64,
) -> Result<(), String> {
    let base = Complex::new(pd.algebra().space().clone(), pd.algebra().differential_map());
    let table = hodge_table(flm, n_max).map_err(|e| e.to_string())?;
    for n in 0..=n_max.min(pd.dimension) {
        let want = base.homology(n).map_err(|e| e.to_string())?.dim;
        if table.dim(n, 0) != want {
            return Err(format!(
                "degree {n}: dim H^{n}_[0] = {} but dim H^{n}(M) = {want}",
                table.dim(n, 0)
            ));
        }
    }
    // nothing above the duality dimension
    for n in (pd.dimension + 1)..=n_max {
        if table.dim(n, 0) != 0 {
            return Err(format!("H^{n}_[0] should vanish above m"));
        }
    }
    Ok(())
}

fn comparison_checks(s: &loopcalc_core::SullivanModel, n_max: i64) -> Result<(), String> {
    let cm = loopcalc_core::sullivan::comparison_map(s, n_max).map_err(|e| e.to_string())?;
    cm.check_chain_map()?;
    cm.check_intertwines_rotation()?;
    cm.check_quasi_iso(n_max)
}
