//! The `report selftest` invariant suite: a fast cross-section of the
//! library's strongest oracles. Exits nonzero from the binary on any
//! failure.

use num_complex::Complex64;
use serde_json::json;

use ffmoments::charsym::{jacobi, jacobi_reference};
use ffmoments::density::{rmt_limit, TestFunction};
use ffmoments::ensemble::{enumerate, EnsembleParams};
use ffmoments::enumeration::monic_enumerate;
use ffmoments::eulerfact::EulerProductTable;
use ffmoments::field::FieldCtx;
use ffmoments::lfun::{lpoly_charsum, PointCountCtx};
use ffmoments::moments::{q1_closed, qk_contour, ContourSpec};
use ffmoments::ratios::{ratios_empirical, ratios_rhs, RatiosSpec};
use ffmoments::sweep::{run_sweep, SweepCache, SweepConfig};

use crate::report::Report;
use crate::RunConfig;

type Check = (&'static str, fn() -> Result<(), String>);

const CHECKS: &[Check] = &[
    ("ensemble-count", check_ensemble_count),
    ("jacobi-dual-route", check_jacobi_dual),
    ("lpoly-dual-construction", check_lpoly_dual),
    ("functional-equation-and-zeros", check_fe_zeros),
    ("exact-formula-identity", check_exact_formula),
    ("q1-contour-vs-closed", check_q1_gate),
    ("moment-constant-duals", check_moment_constants),
    ("ratios-pole-convention", check_ratios_sanity),
    ("cache-round-trip", check_cache_round_trip),
    ("rmt-limit-fejer", check_rmt),
];

pub fn run(_cfg: &RunConfig) -> Report {
    let mut results = vec![];
    let mut failed = 0usize;
    for (name, f) in CHECKS {
        let outcome = f();
        let pass = outcome.is_ok();
        if !pass {
            failed += 1;
        }
        eprintln!(
            "[selftest] {name}: {}",
            match &outcome {
                Ok(()) => "ok".to_string(),
                Err(e) => format!("FAILED — {e}"),
            }
        );
        results.push(json!({
            "name": name,
            "pass": pass,
            "detail": outcome.err(),
        }));
    }
    Report {
        params: json!({ "checks": CHECKS.len() }),
        predicted: json!(null),
        empirical: json!({
            "passed": CHECKS.len() - failed,
            "failed": failed,
            "checks": results,
        }),
        ratio: json!(null),
        tolerances: json!({}),
        tail_bounds: json!({}),
    }
}

pub fn report_failed(report: &Report) -> bool {
    report.empirical["failed"].as_u64().unwrap_or(1) != 0
}

fn err(msg: String) -> Result<(), String> {
    Err(msg)
}

fn check_ensemble_count() -> Result<(), String> {
    for (q, g) in [(3u32, 1usize), (3, 2), (5, 1), (7, 1)] {
        let params = EnsembleParams::new(FieldCtx::new(q).unwrap(), g);
        let n = enumerate(&params).map_err(|e| e.to_string())?.len() as u64;
        if n != params.size() {
            return err(format!("q={q} g={g}: {n} != {}", params.size()));
        }
    }
    Ok(())
}

fn check_jacobi_dual() -> Result<(), String> {
    let budget = 1 << 20;
    for deg_f in 0..=3usize {
        for f in monic_enumerate(3, deg_f, budget).unwrap() {
            for deg_m in 1..=3usize {
                for m in monic_enumerate(3, deg_m, budget).unwrap() {
                    let fast = jacobi(&f, &m).map_err(|e| e.to_string())?;
                    let slow = jacobi_reference(&f, &m).map_err(|e| e.to_string())?;
                    if fast != slow {
                        return err(format!("({f} / {m}): {fast} vs {slow}"));
                    }
                }
            }
        }
    }
    Ok(())
}

fn check_lpoly_dual() -> Result<(), String> {
    let field = FieldCtx::new(3).unwrap();
    let ctx = PointCountCtx::new(&field, 2).map_err(|e| e.to_string())?;
    for g in [1usize, 2] {
        let params = EnsembleParams::new(field.clone(), g);
        for d in enumerate(&params).unwrap().iter().step_by(if g == 1 { 1 } else { 5 }) {
            let a = lpoly_charsum(d, 1 << 20).map_err(|e| e.to_string())?;
            let b = ctx.lpoly(d).map_err(|e| e.to_string())?;
            if a != b {
                return err(format!("dual mismatch at D = {}", d.poly()));
            }
        }
    }
    Ok(())
}

fn check_fe_zeros() -> Result<(), String> {
    let field = FieldCtx::new(3).unwrap();
    for g in [1usize, 2] {
        let params = EnsembleParams::new(field.clone(), g);
        for d in enumerate(&params).unwrap() {
            let l = lpoly_charsum(&d, 1 << 20).map_err(|e| e.to_string())?;
            if !l.fe_check() {
                return err(format!("FE symmetry broken at D = {}", d.poly()));
            }
            let zs = l.zeros().map_err(|e| e.to_string())?;
            if zs.max_radius_deviation > 1e-9 {
                return err(format!(
                    "radius deviation {} at D = {}",
                    zs.max_radius_deviation,
                    d.poly()
                ));
            }
        }
    }
    Ok(())
}

fn check_exact_formula() -> Result<(), String> {
    let field = FieldCtx::new(3).unwrap();
    let params = EnsembleParams::new(field, 2);
    for d in enumerate(&params).unwrap().iter().step_by(17) {
        let l = lpoly_charsum(d, 1 << 20).map_err(|e| e.to_string())?;
        for s in [
            Complex64::new(0.3, 0.9),
            Complex64::new(0.5, 0.0),
            Complex64::new(0.7, -1.4),
        ] {
            let r = l.fe_identity_residual(s);
            if r > 1e-10 {
                return err(format!("residual {r} at D = {}, s = {s}", d.poly()));
            }
        }
    }
    Ok(())
}

fn check_q1_gate() -> Result<(), String> {
    let table = EulerProductTable::new(&FieldCtx::new(3).unwrap(), 30);
    let closed = q1_closed(&table);
    let spec = ContourSpec::default_for(1, table.ln_q());
    let contour = qk_contour(1, &table, &spec).map_err(|e| e.to_string())?;
    for (a, b) in contour.coeffs.iter().zip(&closed.coeffs) {
        if (a - b).abs() > 1e-8 * b.abs() {
            return err(format!("Q1 coefficient {a} vs closed {b}"));
        }
    }
    Ok(())
}

fn check_moment_constants() -> Result<(), String> {
    let table = EulerProductTable::new(&FieldCtx::new(3).unwrap(), 30);
    for k in 1..=3 {
        table.moment_constant(k).map_err(|e| e.to_string())?;
    }
    Ok(())
}

fn check_ratios_sanity() -> Result<(), String> {
    let cache = run_sweep(&SweepConfig::exhaustive(3, 1)).map_err(|e| e.to_string())?;
    let table = EulerProductTable::new(&FieldCtx::new(3).unwrap(), 30);
    let r = Complex64::new(0.1, 0.0);
    let spec = RatiosSpec::new(vec![r], vec![r]).map_err(|e| e.to_string())?;
    let rhs = ratios_rhs(&spec, 3, 1, &table).map_err(|e| e.to_string())?;
    let emp = ratios_empirical(&cache, &spec).map_err(|e| e.to_string())?;
    if (rhs.re - 18.0).abs() > 1e-9 || rhs.im != 0.0 {
        return err(format!("RHS at alpha = gamma should be #H = 18, got {rhs}"));
    }
    if (emp - Complex64::new(18.0, 0.0)).norm() > 1e-9 {
        return err(format!("empirical at alpha = gamma should be 18, got {emp}"));
    }
    Ok(())
}

fn check_cache_round_trip() -> Result<(), String> {
    let cache = run_sweep(&SweepConfig::exhaustive(3, 1)).map_err(|e| e.to_string())?;
    let csv = cache.to_csv();
    let back = SweepCache::read_from(csv.as_bytes()).map_err(|e| e.to_string())?;
    if back != cache || back.to_csv() != csv {
        return err("cache round trip not byte-identical".into());
    }
    Ok(())
}

fn check_rmt() -> Result<(), String> {
    let v = rmt_limit(&TestFunction::Fejer { sigma: 1.0 }).map_err(|e| e.to_string())?;
    if (v - 0.5).abs() > 1e-5 {
        return err(format!("Fejer sigma=1 limit should be 1/2, got {v}"));
    }
    Ok(())
}
