//! WebAssembly bindings for the browser demo. Each export takes plain
//! strings or numbers and returns a JSON document; failures come back as
//! `{"error": kind, "message": text}` instead of exceptions.

use serde::Serialize;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use wilson_core::prime::{factor_prime, parse_ideal};
use wilson_core::residue::DEFAULT_CAP;
use wilson_core::wilson::{classify_gauss, classify_global, local_classes};
use wilson_core::{D2Class, Error, FactoredIdeal, NumberFieldOrder, ResidueRing};

/// Largest ring the page enumerates; the browser runs on one thread.
pub const WEB_CAP: u64 = DEFAULT_CAP / 4;

fn to_json<T: Serialize>(r: Result<T, Error>) -> String {
    match r {
        Ok(v) => serde_json::to_string(&v).expect("reports serialize"),
        Err(e) => json!({"error": e.kind(), "message": e.to_string()}).to_string(),
    }
}

fn d2_value(c: D2Class) -> Value {
    match c {
        D2Class::Exact(k) => json!(k),
        D2Class::MoreThanOne => json!(">1"),
    }
}

pub fn verify_value(poly: &str, ideal: &str) -> Result<Value, Error> {
    let o = NumberFieldOrder::parse(poly)?;
    let a = parse_ideal(&o, ideal)?;
    let ring = ResidueRing::new(&o, &a, WEB_CAP)?;
    let product = classify_global(&o, &a, WEB_CAP)?;
    let oracle = ring.unit_product();
    let census = ring.order2_census()?;
    let predicted = local_classes(&a).into_iter().fold(D2Class::Exact(0), D2Class::combine);
    let matched = product.witness.as_ref() == Some(&oracle) && predicted.admits(census.d2);
    Ok(json!({
        "ideal": a.to_string(),
        "size": ring.size(),
        "class": product.class.to_string(),
        "witness": product.witness.as_ref().map(ToString::to_string),
        "oracle": oracle.to_string(),
        "census_d2": census.d2,
        "predicted_d2": d2_value(predicted),
        "verdict": if matched { "MATCH" } else { "MISMATCH" },
    }))
}

pub fn cyclo_value(t: u32, n_max: u32) -> Result<Value, Error> {
    let o = NumberFieldOrder::cyclotomic_two_power(t)?;
    let prime = factor_prime(&o, 2)?.remove(0);
    let mut rows = Vec::new();
    for n in 1..=n_max {
        let a = FactoredIdeal::prime_power(prime.clone(), n);
        let ring = ResidueRing::new(&o, &a, WEB_CAP)?;
        let product = classify_global(&o, &a, WEB_CAP)?;
        let oracle = ring.unit_product();
        rows.push(json!({
            "n": n,
            "size": ring.size(),
            "class": product.class.name(),
            "witness": product.witness.as_ref().map(ToString::to_string),
            "oracle": oracle.to_string(),
            "matched": product.witness.as_ref() == Some(&oracle),
        }));
    }
    Ok(json!({"prime": prime.to_string(), "e": prime.ram_index, "f": prime.res_degree, "rows": rows}))
}

pub fn gauss_value(max_a: u64) -> Result<Value, Error> {
    if max_a < 2 {
        return Err(Error::InvalidModulus(max_a));
    }
    let mut minus = Vec::new();
    for a in 2..=max_a {
        if classify_gauss(a)? == -1 {
            minus.push(a);
        }
    }
    Ok(json!({"max_a": max_a, "minus_one": minus}))
}

/// Closed form and enumeration for `o/a`, `o = Z[x]/(poly)`.
#[wasm_bindgen]
pub fn verify(poly: &str, ideal: &str) -> String {
    to_json(verify_value(poly, ideal))
}

/// Products over `(Z[ζ]/P^n)^×` for `n = 1..=n_max`, `ζ` a primitive
/// `2^t`-th root of unity.
#[wasm_bindgen]
pub fn cyclo_demo(t: u32, n_max: u32) -> String {
    to_json(cyclo_value(t, n_max))
}

/// Moduli `2 ≤ A ≤ max_a` whose unit product is `-1`.
#[wasm_bindgen]
pub fn gauss_table(max_a: u64) -> String {
    to_json(gauss_value(max_a))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Value {
        serde_json::from_str(s).unwrap()
    }

    #[test]
    fn verify_gaussian_integers() {
        let v = parse(&verify("x^2+1", "2^2"));
        assert_eq!(v["verdict"], "MATCH");
        assert_eq!(v["oracle"], "[θ]");
        let v = parse(&verify("x^2+1", "5^1@0; 5^1@1; 2^3"));
        assert_eq!(v["verdict"], "MATCH");
    }

    #[test]
    fn verify_reports_errors() {
        let v = parse(&verify("x^2+3", "2^1"));
        assert_eq!(v["error"], "NonMaximalOrder");
        let v = parse(&verify("x^2+1", "3^20"));
        assert_eq!(v["error"], "RingTooLarge");
    }

    #[test]
    fn cyclo_rows() {
        let v = parse(&cyclo_demo(3, 4));
        let classes: Vec<&str> = v["rows"].as_array().unwrap().iter().map(|r| r["class"].as_str().unwrap()).collect();
        assert_eq!(classes, ["one", "one_plus_pi", "one_plus_pi_sq", "one"]);
        assert!(v["rows"].as_array().unwrap().iter().all(|r| r["matched"] == true));
    }

    #[test]
    fn gauss_list() {
        let v = parse(&gauss_table(12));
        assert_eq!(v["minus_one"], json!([3, 4, 5, 6, 7, 9, 10, 11]));
        assert_eq!(parse(&gauss_table(1))["error"], "InvalidModulus");
    }
}
