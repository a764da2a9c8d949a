//! Reports behind the `wilson` command. Each command builds a serializable
//! report; the binary prints it as text or JSON and derives the exit code
//! from [`Report::passed`].

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use wilson_core::intmath::{parse_prime, small_primes, DEFAULT_TRIAL_CAP};
use wilson_core::order::format_poly;
use wilson_core::prime::{dedekind_maximal, factor_element, factor_prime, ideals_up_to, parse_ideal};
use wilson_core::residue::{check_cap, Census, RingDump};
use wilson_core::wilson::{classify_gauss, classify_global, d2_local, local_classes, WilsonClass};
use wilson_core::{D2Class, Error, FactoredIdeal, NumberFieldOrder, ResidueElement, ResidueRing, Result, WilsonProduct};

/// Largest rational prime considered by a sweep unless a bound is given.
pub const DEFAULT_SWEEP_PRIME_BOUND: u64 = 100_000;

pub trait Report: Serialize {
    fn render_text(&self) -> String;

    /// Whether every check in the report agreed.
    fn passed(&self) -> bool {
        true
    }
}

/// Machine-readable error object.
#[derive(Debug, Serialize)]
pub struct ErrorReport {
    pub error: &'static str,
    pub message: String,
}

impl From<&Error> for ErrorReport {
    fn from(e: &Error) -> Self {
        ErrorReport {
            error: e.kind(),
            message: e.to_string(),
        }
    }
}

/// How the ideal is supplied: in factored form or by a generator.
#[derive(Clone, Debug)]
pub enum IdealInput {
    Factored(String),
    Generator(String),
}

impl IdealInput {
    pub fn resolve(&self, o: &NumberFieldOrder) -> Result<FactoredIdeal> {
        match self {
            IdealInput::Factored(text) => parse_ideal(o, text),
            IdealInput::Generator(text) => {
                let a = o.parse_element(text)?;
                factor_element(o, &a, DEFAULT_TRIAL_CAP)
            }
        }
    }
}

fn order_text(o: &NumberFieldOrder) -> String {
    format_poly(o.defining_poly(), "x")
}

fn d2_text(c: D2Class) -> String {
    match c {
        D2Class::Exact(k) => k.to_string(),
        D2Class::MoreThanOne => ">1".into(),
    }
}

fn class_symbol(c: &WilsonClass) -> &'static str {
    match c {
        WilsonClass::One => "1",
        WilsonClass::MinusOne => "-1",
        WilsonClass::OnePlusPi(_) => "1+π",
        WilsonClass::OnePlusPiSquared(_) => "1+π²",
    }
}

fn witness_text(w: &Option<ResidueElement>) -> String {
    w.as_ref().map_or_else(|| "(ring exceeds cap)".into(), ToString::to_string)
}

#[derive(Debug, Serialize)]
pub struct FactorRow {
    pub index: usize,
    pub gen: Vec<u64>,
    pub gen_text: String,
    pub e: u32,
    pub f: u32,
}

#[derive(Debug, Serialize)]
pub struct FactorReport {
    pub poly: String,
    pub prime: u64,
    pub maximal: bool,
    pub factors: Vec<FactorRow>,
}

/// Splitting of `p` in `Z[x]/(f)`; fails when the order is not maximal at `p`.
pub fn factor_report(poly: &str, prime: &str) -> Result<FactorReport> {
    let o = NumberFieldOrder::parse(poly)?;
    let p = parse_prime(prime)?;
    let primes = factor_prime(&o, p)?;
    Ok(FactorReport {
        poly: order_text(&o),
        prime: p,
        maximal: true,
        factors: primes
            .into_iter()
            .map(|q| FactorRow {
                index: q.index,
                gen: q.gen_poly.coeffs().to_vec(),
                gen_text: format_poly(&q.gen_poly.to_bigints(), "x"),
                e: q.ram_index,
                f: q.res_degree,
            })
            .collect(),
    })
}

impl Report for FactorReport {
    fn render_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "order    Z[x]/({})", self.poly).unwrap();
        writeln!(s, "prime    {}", self.prime).unwrap();
        writeln!(s, "maximal  {}", self.maximal).unwrap();
        writeln!(s, "{:>5}  {:<24} {:>3} {:>3}", "index", "factor mod p", "e", "f").unwrap();
        for r in &self.factors {
            writeln!(s, "{:>5}  {:<24} {:>3} {:>3}", r.index, r.gen_text, r.e, r.f).unwrap();
        }
        s
    }
}

#[derive(Debug, Serialize)]
pub struct LocalRow {
    pub prime: String,
    pub m: u32,
    pub d2: D2Class,
}

#[derive(Debug, Serialize)]
pub struct ClassifyReport {
    pub poly: String,
    pub ideal: FactoredIdeal,
    pub ideal_text: String,
    pub norm: String,
    pub local: Vec<LocalRow>,
    pub d2: D2Class,
    pub result: WilsonProduct,
}

pub fn classify_report(poly: &str, ideal: &IdealInput, cap: u64) -> Result<ClassifyReport> {
    check_cap(cap)?;
    let o = NumberFieldOrder::parse(poly)?;
    let a = ideal.resolve(&o)?;
    let result = classify_global(&o, &a, cap)?;
    let classes = local_classes(&a);
    let d2 = classes.iter().fold(D2Class::Exact(0), |acc, c| acc.combine(*c));
    Ok(ClassifyReport {
        poly: order_text(&o),
        ideal_text: a.to_text(),
        norm: a.norm().to_string(),
        local: a
            .factors()
            .iter()
            .zip(classes)
            .map(|((p, m), d2)| LocalRow {
                prime: p.to_string(),
                m: *m,
                d2,
            })
            .collect(),
        d2,
        ideal: a,
        result,
    })
}

impl Report for ClassifyReport {
    fn render_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "order    Z[θ], θ a root of {}", self.poly).unwrap();
        writeln!(s, "ideal    {}", self.ideal).unwrap();
        writeln!(s, "norm     {}", self.norm).unwrap();
        for r in &self.local {
            writeln!(s, "  {}^{}  d2 = {}", r.prime, r.m, d2_text(r.d2)).unwrap();
        }
        writeln!(s, "d2       {}", d2_text(self.d2)).unwrap();
        writeln!(s, "product  {}", self.result.class).unwrap();
        writeln!(s, "witness  {}", witness_text(&self.result.witness)).unwrap();
        s
    }
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub poly: String,
    pub ideal: FactoredIdeal,
    pub ideal_text: String,
    pub size: u64,
    pub result: WilsonProduct,
    pub oracle: ResidueElement,
    pub census_d2: u32,
    pub predicted_d2: D2Class,
    pub verdict: &'static str,
    /// Present on a mismatch.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub census: Option<Census>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dump: Option<RingDump>,
}

/// Closed form against enumeration for one ideal.
pub fn verify_report(poly: &str, ideal: &IdealInput, cap: u64, dump: bool) -> Result<VerifyReport> {
    check_cap(cap)?;
    let o = NumberFieldOrder::parse(poly)?;
    let a = ideal.resolve(&o)?;
    verify_ideal(&o, &a, cap, dump)
}

fn verify_ideal(o: &NumberFieldOrder, a: &FactoredIdeal, cap: u64, dump: bool) -> Result<VerifyReport> {
    let ring = ResidueRing::new(o, a, cap)?;
    let result = classify_global(o, a, cap)?;
    let oracle = ring.unit_product();
    let census = ring.order2_census()?;
    let predicted_d2 = local_classes(a)
        .into_iter()
        .fold(D2Class::Exact(0), D2Class::combine);
    let matched = result.witness.as_ref() == Some(&oracle) && predicted_d2.admits(census.d2);
    Ok(VerifyReport {
        poly: order_text(o),
        ideal_text: a.to_text(),
        ideal: a.clone(),
        size: ring.size(),
        result,
        oracle,
        census_d2: census.d2,
        predicted_d2,
        verdict: if matched { "MATCH" } else { "MISMATCH" },
        census: (!matched).then_some(census),
        dump: if dump { Some(ring.dump()?) } else { None },
    })
}

impl Report for VerifyReport {
    fn render_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "order      Z[θ], θ a root of {}", self.poly).unwrap();
        writeln!(s, "ideal      {}  [{}]", self.ideal, self.ideal_text).unwrap();
        writeln!(s, "size       {}", self.size).unwrap();
        writeln!(s, "class      {}", self.result.class.name()).unwrap();
        writeln!(s, "witness    {}", witness_text(&self.result.witness)).unwrap();
        writeln!(s, "oracle     {}", self.oracle).unwrap();
        writeln!(s, "census d2  {} (predicted {})", self.census_d2, d2_text(self.predicted_d2)).unwrap();
        if let Some(c) = &self.census {
            let sols: Vec<String> = c.solutions.iter().map(ToString::to_string).collect();
            writeln!(s, "x^2 = 1    {}", sols.join(" ")).unwrap();
        }
        if let Some(d) = &self.dump {
            let units: Vec<String> = d.units.iter().map(ToString::to_string).collect();
            writeln!(s, "units      {}", units.join(" ")).unwrap();
        }
        writeln!(s, "verdict    {}", self.verdict).unwrap();
        s
    }

    fn passed(&self) -> bool {
        self.verdict == "MATCH"
    }
}

#[derive(Debug, Serialize)]
pub struct SweepCase {
    pub ideal: String,
    pub norm: u64,
    pub class: &'static str,
    pub matched: bool,
}

#[derive(Debug, Serialize)]
pub struct SweepMismatch {
    pub ideal: String,
    pub witness: Option<ResidueElement>,
    pub oracle: ResidueElement,
    pub census: Census,
}

#[derive(Debug, Serialize)]
pub struct SweepReport {
    pub poly: String,
    pub max_norm: u64,
    pub prime_bound: u64,
    pub max_exp: u32,
    pub skipped_primes: Vec<u64>,
    pub over_cap: usize,
    pub total: usize,
    pub matches: usize,
    pub classes: BTreeMap<&'static str, usize>,
    pub cases: Vec<SweepCase>,
    pub mismatches: Vec<SweepMismatch>,
}

/// Every ideal of norm at most `max_norm` built from primes above rational
/// primes up to `prime_bound`, checked against enumeration. Rational primes
/// where the order is not maximal are skipped and listed.
pub fn sweep_report(
    poly: &str,
    max_norm: u64,
    prime_bound: Option<u64>,
    max_exp: u32,
    cap: u64,
) -> Result<SweepReport> {
    check_cap(cap)?;
    let o = NumberFieldOrder::parse(poly)?;
    let bound = prime_bound.unwrap_or(max_norm.min(DEFAULT_SWEEP_PRIME_BOUND));
    let (ideals, skipped_primes) = ideals_up_to(&o, &small_primes(bound), max_exp, max_norm)?;
    let outcomes: Vec<Result<Option<CaseOutcome>>> = ideals.par_iter().map(|a| sweep_case(&o, a, cap)).collect();
    let mut report = SweepReport {
        poly: order_text(&o),
        max_norm,
        prime_bound: bound,
        max_exp,
        skipped_primes,
        over_cap: 0,
        total: 0,
        matches: 0,
        classes: BTreeMap::new(),
        cases: Vec::new(),
        mismatches: Vec::new(),
    };
    for outcome in outcomes {
        let Some((case, mismatch)) = outcome? else {
            report.over_cap += 1;
            continue;
        };
        report.total += 1;
        report.matches += usize::from(case.matched);
        *report.classes.entry(case.class).or_default() += 1;
        report.cases.push(case);
        report.mismatches.extend(mismatch);
    }
    Ok(report)
}

type CaseOutcome = (SweepCase, Option<SweepMismatch>);

/// `None` when the ring exceeds the cap.
fn sweep_case(o: &NumberFieldOrder, a: &FactoredIdeal, cap: u64) -> Result<Option<CaseOutcome>> {
    let ring = match ResidueRing::new(o, a, cap) {
        Ok(r) => r,
        Err(Error::RingTooLarge { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    let result = classify_global(o, a, cap)?;
    let oracle = ring.unit_product();
    let matched = result.witness.as_ref() == Some(&oracle);
    let mismatch = if matched {
        None
    } else {
        Some(SweepMismatch {
            ideal: a.to_text(),
            witness: result.witness.clone(),
            oracle,
            census: ring.order2_census()?,
        })
    };
    let case = SweepCase {
        ideal: a.to_text(),
        norm: ring.size(),
        class: result.class.name(),
        matched,
    };
    Ok(Some((case, mismatch)))
}

impl Report for SweepReport {
    fn render_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "order       Z[θ], θ a root of {}", self.poly).unwrap();
        writeln!(
            s,
            "range       norm ≤ {}, primes ≤ {}, exponents ≤ {}",
            self.max_norm, self.prime_bound, self.max_exp
        )
        .unwrap();
        if !self.skipped_primes.is_empty() {
            let ps: Vec<String> = self.skipped_primes.iter().map(u64::to_string).collect();
            writeln!(s, "skipped     {} (order not maximal)", ps.join(", ")).unwrap();
        }
        if self.over_cap > 0 {
            writeln!(s, "over cap    {}", self.over_cap).unwrap();
        }
        writeln!(s, "cases       {}", self.total).unwrap();
        writeln!(s, "matches     {}", self.matches).unwrap();
        for (class, n) in &self.classes {
            writeln!(s, "  {class:<16}{n}").unwrap();
        }
        for m in &self.mismatches {
            let sols: Vec<String> = m.census.solutions.iter().map(ToString::to_string).collect();
            writeln!(
                s,
                "MISMATCH {}: witness {} oracle {} census d2 {} x^2 = 1: {}",
                m.ideal,
                witness_text(&m.witness),
                m.oracle,
                m.census.d2,
                sols.join(" ")
            )
            .unwrap();
        }
        writeln!(s, "verdict     {}", if self.passed() { "MATCH" } else { "MISMATCH" }).unwrap();
        s
    }

    fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

#[derive(Debug, Serialize)]
pub struct GaussRow {
    pub a: u64,
    pub classify: i8,
    /// Sign of the enumerated product, 0 if it is neither `1` nor `-1`.
    pub oracle: i8,
    pub matched: bool,
}

#[derive(Debug, Serialize)]
pub struct GaussReport {
    pub max_a: u64,
    pub minus_one: Vec<u64>,
    pub mismatches: Vec<u64>,
    pub rows: Vec<GaussRow>,
}

/// Product of all units of `Z/A` by direct multiplication.
pub fn gauss_oracle(a: u64) -> u64 {
    (1..a)
        .filter(|k| k.gcd(&a) == 1)
        .fold(1 % a, |acc, k| acc * k % a)
}

pub fn gauss_report(max_a: u64) -> Result<GaussReport> {
    if max_a < 2 {
        return Err(Error::InvalidModulus(max_a));
    }
    let rows: Vec<GaussRow> = (2..=max_a)
        .into_par_iter()
        .map(|a| {
            let classify = classify_gauss(a)?;
            let product = gauss_oracle(a);
            let oracle = if product == 1 {
                1
            } else if product == a - 1 {
                -1
            } else {
                0
            };
            // modulo 2 the two signs coincide
            let matched = oracle == classify || (a == 2 && oracle != 0);
            Ok(GaussRow {
                a,
                classify,
                oracle,
                matched,
            })
        })
        .collect::<Result<_>>()?;
    Ok(GaussReport {
        max_a,
        minus_one: rows.iter().filter(|r| r.classify == -1).map(|r| r.a).collect(),
        mismatches: rows.iter().filter(|r| !r.matched).map(|r| r.a).collect(),
        rows,
    })
}

impl Report for GaussReport {
    fn render_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "moduli      2..={}", self.max_a).unwrap();
        let list: Vec<String> = self.minus_one.iter().map(u64::to_string).collect();
        writeln!(s, "product -1  {} moduli: {}", self.minus_one.len(), list.join(" ")).unwrap();
        writeln!(s, "product  1  {} moduli", self.rows.len() - self.minus_one.len()).unwrap();
        for a in &self.mismatches {
            writeln!(s, "MISMATCH at A = {a}").unwrap();
        }
        writeln!(s, "verdict     {}", if self.passed() { "MATCH" } else { "MISMATCH" }).unwrap();
        s
    }

    fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

#[derive(Debug, Serialize)]
pub struct CycloRow {
    pub n: u32,
    pub size: u64,
    pub class: &'static str,
    pub symbol: &'static str,
    pub expected: &'static str,
    pub d2: D2Class,
    pub witness: Option<ResidueElement>,
    pub oracle: ResidueElement,
    pub matched: bool,
}

#[derive(Debug, Serialize)]
pub struct CycloReport {
    pub t: u32,
    pub poly: String,
    pub prime: String,
    pub e: u32,
    pub f: u32,
    pub pattern: Vec<&'static str>,
    pub rows: Vec<CycloRow>,
}

/// Expected product over `(o/P^n)^×` at the prime above 2 in the
/// `2^t`-th cyclotomic field.
pub fn cyclo_expected(n: u32) -> &'static str {
    match n {
        2 => "1+π",
        3 => "1+π²",
        _ => "1",
    }
}

/// Powers of the prime above 2 in `Z[ζ]`, `ζ` a primitive `2^t`-th root of
/// unity.
pub fn cyclo_report(t: u32, n_max: u32, cap: u64) -> Result<CycloReport> {
    check_cap(cap)?;
    let o = NumberFieldOrder::cyclotomic_two_power(t)?;
    if !dedekind_maximal(&o, 2)? {
        return Err(Error::NonMaximalOrder(2));
    }
    let prime = factor_prime(&o, 2)?.remove(0);
    let mut rows = Vec::new();
    for n in 1..=n_max {
        let a = FactoredIdeal::prime_power(prime.clone(), n);
        let ring = ResidueRing::new(&o, &a, cap)?;
        let result = classify_global(&o, &a, cap)?;
        let oracle = ring.unit_product();
        let symbol = class_symbol(&result.class);
        let expected = cyclo_expected(n);
        rows.push(CycloRow {
            n,
            size: ring.size(),
            class: result.class.name(),
            symbol,
            expected,
            d2: d2_local(2, prime.ram_index, prime.res_degree, n),
            matched: result.witness.as_ref() == Some(&oracle) && symbol == expected,
            witness: result.witness,
            oracle,
        });
    }
    Ok(CycloReport {
        t,
        poly: order_text(&o),
        prime: prime.to_string(),
        e: prime.ram_index,
        f: prime.res_degree,
        pattern: rows.iter().map(|r| r.symbol).collect(),
        rows,
    })
}

impl Report for CycloReport {
    fn render_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "order    Z[ζ], ζ a root of {}", self.poly).unwrap();
        writeln!(s, "prime    P = {}, e = {}, f = {}", self.prime, self.e, self.f).unwrap();
        writeln!(s, "{:>3} {:>8} {:>4}  {:<6} {:<24} oracle", "n", "|o/P^n|", "d2", "class", "witness").unwrap();
        for r in &self.rows {
            writeln!(
                s,
                "{:>3} {:>8} {:>4}  {:<6} {:<24} {:<24} {}",
                r.n,
                r.size,
                d2_text(r.d2),
                r.symbol,
                witness_text(&r.witness),
                r.oracle.to_string(),
                if r.matched { "ok" } else { "MISMATCH" }
            )
            .unwrap();
        }
        writeln!(s, "pattern  {}", self.pattern.join(", ")).unwrap();
        s
    }

    fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.matched)
    }
}

