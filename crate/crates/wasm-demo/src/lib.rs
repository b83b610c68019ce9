//! Browser bindings for the demo page in `www/`.
//!
//! Every export returns a JSON string; the `*_json` functions hold the logic
//! so it can be tested natively.

use serde_json::json;
use tspp_core::prover::{oracle_check, parse_sequence_name};
use tspp_core::qseries::CoefficientRing;
use tspp_core::radu::{compute_v, cusp_table, delta_star_check, fraction_string, index_gamma0, kappa, orbit, verify_lemma1};
use tspp_core::tspp::{reduce_claim, sequence_series};
use tspp_core::{CongruenceClaim, DivisorVector, RaduInstance};
use wasm_bindgen::prelude::*;

/// Keeps the page responsive; the finite checks need far less than this.
const MAX_ORDER: usize = 1_000_000;

/// Parses `"1=123, 2=3, 5=-25"` into a vector over the divisors of `level`.
pub fn parse_exponents(level: u64, text: &str) -> Result<DivisorVector, String> {
    let mut entries = Vec::new();
    for part in text.split([',', ';', ' ']).filter(|s| !s.is_empty()) {
        let (d, r) = part.split_once('=').ok_or_else(|| format!("expected divisor=exponent, got `{part}`"))?;
        let d: u64 = d.trim().parse().map_err(|_| format!("bad divisor `{d}`"))?;
        let r: i64 = r.trim().parse().map_err(|_| format!("bad exponent `{r}`"))?;
        entries.push((d, r));
    }
    DivisorVector::new(level, entries).map_err(|e| e.to_string())
}

pub fn expand_json(seq: &str, order: usize, modulus: u64, alpha: u32, p: u64) -> Result<String, String> {
    if order > MAX_ORDER {
        return Err(format!("order is capped at {MAX_ORDER}"));
    }
    let sequence = parse_sequence_name(seq, Some(alpha), Some(p))?;
    let ring = CoefficientRing::residues(modulus).map_err(|e| e.to_string())?;
    let series = sequence_series(sequence, order, ring).map_err(|e| e.to_string())?;
    Ok(json!({ "sequence": sequence.to_string(), "modulus": modulus, "values": series.residues() }).to_string())
}

pub fn oracle_json(step: u64, offset: u64, modulus: u64, max_index: usize) -> Result<String, String> {
    if step == 0 || offset >= step || modulus < 2 {
        return Err("need 0 <= B < A and u >= 2".into());
    }
    if max_index > MAX_ORDER {
        return Err(format!("range is capped at {MAX_ORDER}"));
    }
    let claim = CongruenceClaim::on_f(step, offset, modulus);
    let report = oracle_check(&claim, max_index).map_err(|e| e.to_string())?;
    let reduction = match reduce_claim(&claim) {
        Ok(steps) => json!(steps),
        Err(e) => json!(e.to_string()),
    };
    Ok(json!({ "claim": claim.to_string(), "oracle": report, "passed": report.passed(), "reduction": reduction }).to_string())
}

#[allow(clippy::too_many_arguments)]
pub fn analyze_json(
    m: u64,
    t: u64,
    eta_level: u64,
    r: &str,
    group_level: u64,
    r_prime: &str,
    u: u64,
    run_check: bool,
) -> Result<String, String> {
    let r = parse_exponents(eta_level, r)?;
    let r_prime = parse_exponents(group_level, r_prime)?;
    let instance = RaduInstance::new(m, t, r, group_level, r_prime, u).map_err(|e| e.to_string())?;
    let orbit = orbit(&instance).map_err(|e| e.to_string())?;
    let bound = compute_v(&instance, &orbit);
    let admissibility = delta_star_check(&instance).map_err(|e| e.to_string())?;

    let mut out = json!({
        "kappa": kappa(m),
        "index": index_gamma0(group_level),
        "orbit": orbit,
        "v": fraction_string(&bound.v),
        "v_floor": bound.v_floor.to_string(),
        "delta_star": admissibility,
        "cusps": cusp_table(&instance),
    });
    if run_check {
        let cert = verify_lemma1(&instance).map_err(|e| e.to_string())?;
        out["certificate"] = serde_json::to_value(&cert).map_err(|e| e.to_string())?;
    }
    Ok(out.to_string())
}

fn js<T>(result: Result<T, String>) -> Result<T, JsError> {
    result.map_err(|e| JsError::new(&e))
}

/// Residues of `f`, `g` or `g_{alpha,p}` up to `order`, as JSON.
#[wasm_bindgen]
pub fn expand(seq: &str, order: usize, modulus: u64, alpha: u32, p: u64) -> Result<String, JsError> {
    js(expand_json(seq, order, modulus, alpha, p))
}

/// Tests `f(A n + B) = 0 (mod u)` for indices up to `max_index`.
#[wasm_bindgen]
pub fn oracle(step: u64, offset: u64, modulus: u64, max_index: usize) -> Result<String, JsError> {
    js(oracle_json(step, offset, modulus, max_index))
}

/// Orbit, bound, admissibility and cusp table of an instance, and optionally
/// the full finite check.
#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn analyze(
    m: u64,
    t: u64,
    eta_level: u64,
    r: &str,
    group_level: u64,
    r_prime: &str,
    u: u64,
    run_check: bool,
) -> Result<String, JsError> {
    js(analyze_json(m, t, eta_level, r, group_level, r_prime, u, run_check))
}
