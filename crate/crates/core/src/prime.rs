//! Prime ideals of a monogenic order above a rational prime (Dedekind–Kummer),
//! Dedekind's maximality criterion, valuations and factored ideals.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fp_poly::{FpPoly, PrimeField};
use crate::intmath::{self, big_pow, factor_bounded, is_prime};
use crate::order::{NumberFieldOrder, OrderElement};
use crate::residue::ideal_lattice;

/// A prime `P = (p, g(θ))` of the order, with `ḡ` an irreducible factor of
/// `f mod p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PrimeIdealData {
    #[serde(rename = "prime")]
    pub rational_prime: u64,
    #[serde(rename = "gen", serialize_with = "serialize_fp")]
    pub gen_poly: FpPoly,
    #[serde(rename = "e")]
    pub ram_index: u32,
    #[serde(rename = "f")]
    pub res_degree: u32,
    pub index: usize,
}

fn serialize_fp<S: Serializer>(g: &FpPoly, s: S) -> std::result::Result<S::Ok, S::Error> {
    g.coeffs().serialize(s)
}

impl PrimeIdealData {
    /// Even in the sense of containing 2.
    pub fn is_even(&self) -> bool {
        self.rational_prime == 2
    }

    /// `|o/P| = p^f`.
    pub fn norm(&self) -> BigInt {
        big_pow(self.rational_prime, self.res_degree)
    }

    /// `g(θ)` with coefficients lifted to `[0, p)`.
    pub fn gen_element(&self, o: &NumberFieldOrder) -> OrderElement {
        o.eval_poly(&self.gen_poly.to_bigints())
    }
}

impl fmt::Display for PrimeIdealData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = crate::order::format_poly(&self.gen_poly.to_bigints(), "θ");
        write!(f, "({}, {})", self.rational_prime, g)
    }
}

/// `Ideal = Π P^m` with pairwise distinct primes and `m ≥ 1`; empty means `o`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FactoredIdeal {
    factors: Vec<(PrimeIdealData, u32)>,
}

#[derive(Serialize)]
struct FactorRecord<'a> {
    prime: u64,
    gen: &'a [u64],
    e: u32,
    f: u32,
    m: u32,
}

impl Serialize for FactoredIdeal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.factors.len()))?;
        for (p, m) in &self.factors {
            seq.serialize_element(&FactorRecord {
                prime: p.rational_prime,
                gen: p.gen_poly.coeffs(),
                e: p.ram_index,
                f: p.res_degree,
                m: *m,
            })?;
        }
        seq.end()
    }
}

impl FactoredIdeal {
    pub fn unit() -> Self {
        FactoredIdeal::default()
    }

    /// Merges repeated primes and drops zero exponents; orders factors by
    /// rational prime and then prime index.
    pub fn new(factors: Vec<(PrimeIdealData, u32)>) -> Self {
        let mut merged: Vec<(PrimeIdealData, u32)> = Vec::new();
        for (p, m) in factors {
            if m == 0 {
                continue;
            }
            match merged.iter_mut().find(|(q, _)| *q == p) {
                Some(slot) => slot.1 += m,
                None => merged.push((p, m)),
            }
        }
        merged.sort_by_key(|(p, _)| (p.rational_prime, p.index));
        FactoredIdeal { factors: merged }
    }

    pub fn prime_power(p: PrimeIdealData, m: u32) -> Self {
        FactoredIdeal::new(vec![(p, m)])
    }

    pub fn factors(&self) -> &[(PrimeIdealData, u32)] {
        &self.factors
    }

    pub fn is_unit(&self) -> bool {
        self.factors.is_empty()
    }

    /// Single prime power `P^m`, if that is the shape.
    pub fn as_prime_power(&self) -> Option<(&PrimeIdealData, u32)> {
        match self.factors.as_slice() {
            [(p, m)] => Some((p, *m)),
            _ => None,
        }
    }

    /// `Π p^(m·f)`.
    pub fn norm(&self) -> BigInt {
        self.factors
            .iter()
            .map(|(p, m)| big_pow(p.rational_prime, p.res_degree * m))
            .product()
    }

    /// Text form accepted by [`parse_ideal`].
    pub fn to_text(&self) -> String {
        if self.is_unit() {
            return "1".into();
        }
        self.factors
            .iter()
            .map(|(p, m)| format!("{}^{}@{}", p.rational_prime, m, p.index))
            .collect::<Vec<_>>()
            .join("; ")
    }
}

impl fmt::Display for FactoredIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_unit() {
            return f.write_str("(1)");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(p, m)| if *m == 1 { p.to_string() } else { format!("{p}^{m}") })
            .collect();
        f.write_str(&parts.join("·"))
    }
}

fn poly_mul_z(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut c = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            c[i + j] += x * y;
        }
    }
    c
}

/// Dedekind's criterion: whether `Z[θ]` is maximal at `p`.
pub fn dedekind_maximal(o: &NumberFieldOrder, p: u64) -> Result<bool> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    let field = PrimeField::new(p);
    let f = o.defining_poly();
    let factors = field.factor(&field.reduce_poly(f));
    let mut lifted = vec![BigInt::one()];
    let mut radical = FpPoly::one();
    let mut cofactor = FpPoly::one();
    for (g, e) in &factors {
        for _ in 0..*e {
            lifted = poly_mul_z(&lifted, &g.to_bigints());
        }
        radical = field.poly_mul(&radical, g);
        cofactor = field.poly_mul(&cofactor, &field.poly_pow(g, e - 1));
    }
    let pz = BigInt::from(p);
    let mut diff: Vec<BigInt> = f.to_vec();
    for (i, c) in lifted.iter().enumerate() {
        diff[i] -= c;
    }
    debug_assert!(diff.iter().all(|c| (c % &pz).is_zero()));
    let quotient: Vec<BigInt> = diff.iter().map(|c| c / &pz).collect();
    let qbar = field.reduce_poly(&quotient);
    let g = field.gcd(&field.gcd(&qbar, &radical), &cofactor);
    Ok(g.is_one())
}

/// The primes above `p`, in deterministic order, after checking maximality.
pub fn factor_prime(o: &NumberFieldOrder, p: u64) -> Result<Vec<PrimeIdealData>> {
    if !dedekind_maximal(o, p)? {
        return Err(Error::NonMaximalOrder(p));
    }
    let field = PrimeField::new(p);
    let factors = field.factor(&field.reduce_poly(o.defining_poly()));
    Ok(factors
        .into_iter()
        .enumerate()
        .map(|(index, (g, e))| {
            let res_degree = g.degree().unwrap() as u32;
            PrimeIdealData {
                rational_prime: p,
                gen_poly: g,
                ram_index: e,
                res_degree,
                index,
            }
        })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Valuation {
    Finite(u32),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<u32> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }
}

/// `v_P(a)`: the largest `k` with `a ∈ P^k`.
pub fn valuation(o: &NumberFieldOrder, prime: &PrimeIdealData, a: &OrderElement) -> Result<Valuation> {
    if a.is_zero() {
        return Ok(Valuation::Infinite);
    }
    // a ∈ P^k forces p^(k·f) | N(a)
    let bound = intmath::valuation_int(&o.norm(a)?, prime.rational_prime) / prime.res_degree;
    let mut k = 0;
    while k < bound {
        let lattice = ideal_lattice(o, prime, k + 1)?;
        if !lattice.contains(a.coeffs()) {
            break;
        }
        k += 1;
    }
    Ok(Valuation::Finite(k))
}

/// Factorization of the principal ideal `(a)`.
pub fn factor_element(o: &NumberFieldOrder, a: &OrderElement, trial_cap: u64) -> Result<FactoredIdeal> {
    if a.is_zero() {
        return Err(Error::ZeroElement);
    }
    let norm = o.norm(a)?;
    let mut factors = Vec::new();
    for (p, _) in factor_bounded(&norm, trial_cap)? {
        for prime in factor_prime(o, p)? {
            if let Valuation::Finite(m) = valuation(o, &prime, a)? {
                if m > 0 {
                    factors.push((prime, m));
                }
            }
        }
    }
    let ideal = FactoredIdeal::new(factors);
    assert_eq!(ideal.norm(), norm, "factorization does not reconstruct the norm");
    Ok(ideal)
}

/// Parses `"p^m[@i](; p^m[@i])*"`; `"1"` or an empty string is the unit ideal.
pub fn parse_ideal(o: &NumberFieldOrder, text: &str) -> Result<FactoredIdeal> {
    let text = text.trim();
    if text.is_empty() || text == "1" {
        return Ok(FactoredIdeal::unit());
    }
    let mut factors = Vec::new();
    for part in text.split(';') {
        let part = part.trim();
        let bad = |why: &str| Error::Parse(format!("{why} in ideal term {part:?}"));
        let (body, index) = match part.split_once('@') {
            Some((b, i)) => (b, i.trim().parse::<usize>().map_err(|_| bad("bad prime index"))?),
            None => (part, 0),
        };
        let (p, m) = match body.split_once('^') {
            Some((p, m)) => (p, m.trim().parse::<u32>().map_err(|_| bad("bad exponent"))?),
            None => (body, 1),
        };
        let p: u64 = p.trim().parse().map_err(|_| bad("bad rational prime"))?;
        if !is_prime(p) {
            return Err(bad(&format!("{p} is not prime")));
        }
        if m == 0 {
            return Err(bad("exponent must be positive"));
        }
        let primes = factor_prime(o, p)?;
        let count = primes.len();
        let prime = primes
            .into_iter()
            .nth(index)
            .ok_or(Error::NoSuchPrimeIndex { prime: p, index, count })?;
        factors.push((prime, m));
    }
    Ok(FactoredIdeal::new(factors))
}

/// The ideal `n·o` for a positive integer `n`.
pub fn integer_ideal(o: &NumberFieldOrder, n: u64) -> Result<FactoredIdeal> {
    if n == 0 {
        return Err(Error::ZeroElement);
    }
    let mut factors = Vec::new();
    for (p, k) in intmath::factor_u64(n) {
        for prime in factor_prime(o, p)? {
            let e = prime.ram_index;
            factors.push((prime, k * e));
        }
    }
    Ok(FactoredIdeal::new(factors))
}

/// Every non-unit ideal built from primes above `primes`, with exponents at
/// most `max_exp` and norm at most `max_norm`, in a deterministic order.
///
/// Rational primes at which the order is not maximal are skipped and
/// returned separately.
pub fn ideals_up_to(
    o: &NumberFieldOrder,
    primes: &[u64],
    max_exp: u32,
    max_norm: u64,
) -> Result<(Vec<FactoredIdeal>, Vec<u64>)> {
    let mut pool = Vec::new();
    let mut skipped = Vec::new();
    for &p in primes {
        match factor_prime(o, p) {
            Ok(ps) => pool.extend(ps),
            Err(Error::NonMaximalOrder(q)) => skipped.push(q),
            Err(e) => return Err(e),
        }
    }
    let mut out = Vec::new();
    let mut stack: Vec<(PrimeIdealData, u32)> = Vec::new();
    extend_ideals(&pool, 0, 1, max_exp, max_norm, &mut stack, &mut out);
    Ok((out, skipped))
}

fn extend_ideals(
    pool: &[PrimeIdealData],
    start: usize,
    norm: u64,
    max_exp: u32,
    max_norm: u64,
    stack: &mut Vec<(PrimeIdealData, u32)>,
    out: &mut Vec<FactoredIdeal>,
) {
    for (i, prime) in pool.iter().enumerate().skip(start) {
        let q = prime.norm().to_u64().unwrap_or(u64::MAX);
        let mut n = norm;
        for m in 1..=max_exp {
            n = match n.checked_mul(q) {
                Some(n) if n <= max_norm => n,
                _ => break,
            };
            stack.push((prime.clone(), m));
            out.push(FactoredIdeal::new(stack.clone()));
            extend_ideals(pool, i + 1, n, max_exp, max_norm, stack, out);
            stack.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gauss() -> NumberFieldOrder {
        NumberFieldOrder::parse("x^2+1").unwrap()
    }

    fn el(c: &[i64]) -> OrderElement {
        OrderElement::from_i64s(c)
    }

    #[test]
    fn gaussian_splitting() {
        let o = gauss();
        let two = factor_prime(&o, 2).unwrap();
        assert_eq!(two.len(), 1);
        assert_eq!(two[0].gen_poly.coeffs(), &[1, 1]);
        assert_eq!((two[0].ram_index, two[0].res_degree), (2, 1));

        let five = factor_prime(&o, 5).unwrap();
        let gens: Vec<&[u64]> = five.iter().map(|p| p.gen_poly.coeffs()).collect();
        assert_eq!(gens, vec![&[2, 1][..], &[3, 1][..]]);
        assert!(five.iter().all(|p| p.ram_index == 1 && p.res_degree == 1));
        assert_eq!(five[1].index, 1);

        let three = factor_prime(&o, 3).unwrap();
        assert_eq!(three.len(), 1);
        assert_eq!(three[0].gen_poly.coeffs(), &[1, 0, 1]);
        assert_eq!((three[0].ram_index, three[0].res_degree), (1, 2));

        assert_eq!(factor_prime(&o, 4), Err(Error::NotPrime("4".into())));
    }

    #[test]
    fn dedekind_examples() {
        assert!(dedekind_maximal(&gauss(), 2).unwrap());
        let sqrt_m3 = NumberFieldOrder::parse("x^2+3").unwrap();
        assert!(!dedekind_maximal(&sqrt_m3, 2).unwrap());
        assert_eq!(factor_prime(&sqrt_m3, 2), Err(Error::NonMaximalOrder(2)));
        let sqrt2 = NumberFieldOrder::parse("x^2-2").unwrap();
        assert!(dedekind_maximal(&sqrt2, 3).unwrap());
        // Z[√5] has index 2 in the ring of integers of Q(√5)
        let sqrt5 = NumberFieldOrder::parse("x^2-5").unwrap();
        assert!(!dedekind_maximal(&sqrt5, 2).unwrap());
        assert!(dedekind_maximal(&sqrt5, 5).unwrap());
        // Z[2i] is not maximal at 2
        let two_i = NumberFieldOrder::parse("x^2+4").unwrap();
        assert!(!dedekind_maximal(&two_i, 2).unwrap());
    }

    #[test]
    fn valuation_examples() {
        let o = gauss();
        let p = &factor_prime(&o, 2).unwrap()[0];
        assert_eq!(valuation(&o, p, &o.one()).unwrap(), Valuation::Finite(0));
        assert_eq!(valuation(&o, p, &el(&[2, 0])).unwrap(), Valuation::Finite(2));
        assert_eq!(valuation(&o, p, &el(&[1, 1])).unwrap(), Valuation::Finite(1));
        assert_eq!(valuation(&o, p, &el(&[0, 0])).unwrap(), Valuation::Infinite);
        let five = factor_prime(&o, 5).unwrap();
        // 2 + i lies in (5, θ + 2) only: (2 + i)(2 - i) = 5
        let vals: Vec<_> = five
            .iter()
            .map(|q| valuation(&o, q, &el(&[2, 1])).unwrap())
            .collect();
        assert_eq!(vals, vec![Valuation::Finite(1), Valuation::Finite(0)]);
    }

    #[test]
    fn element_factorization() {
        let o = gauss();
        let f = factor_element(&o, &el(&[1, 1]), intmath::DEFAULT_TRIAL_CAP).unwrap();
        assert_eq!(f.factors().len(), 1);
        assert_eq!(f.factors()[0].1, 1);
        let f = factor_element(&o, &el(&[2, 0]), intmath::DEFAULT_TRIAL_CAP).unwrap();
        assert_eq!(f.factors()[0].1, 2);
        assert!(factor_element(&o, &o.one(), intmath::DEFAULT_TRIAL_CAP).unwrap().is_unit());
        assert_eq!(
            factor_element(&o, &o.zero(), intmath::DEFAULT_TRIAL_CAP),
            Err(Error::ZeroElement)
        );
        let f = factor_element(&o, &el(&[30, 0]), intmath::DEFAULT_TRIAL_CAP).unwrap();
        assert_eq!(f.norm(), BigInt::from(900));
        assert_eq!(f.factors().len(), 4);
    }

    #[test]
    fn ideal_parsing() {
        let o = gauss();
        let a = parse_ideal(&o, "2^3").unwrap();
        assert_eq!(a.factors()[0].1, 3);
        assert_eq!(a.factors()[0].0.gen_poly.coeffs(), &[1, 1]);
        let b = parse_ideal(&o, "5^1@1").unwrap();
        assert_eq!(b.factors()[0].0.gen_poly.coeffs(), &[3, 1]);
        assert!(matches!(parse_ideal(&o, "4^1"), Err(Error::Parse(_))));
        assert!(matches!(
            parse_ideal(&o, "5^1@2"),
            Err(Error::NoSuchPrimeIndex { prime: 5, index: 2, count: 2 })
        ));
        let sqrt_m3 = NumberFieldOrder::parse("x^2+3").unwrap();
        assert_eq!(parse_ideal(&sqrt_m3, "2^1"), Err(Error::NonMaximalOrder(2)));
        let c = parse_ideal(&o, "2^2; 5@1; 3").unwrap();
        assert_eq!(c.norm(), BigInt::from(4 * 5 * 9));
        assert_eq!(parse_ideal(&o, &c.to_text()).unwrap(), c);
    }

    #[test]
    fn factor_json_shape() {
        let o = gauss();
        let a = parse_ideal(&o, "2^3; 5@1").unwrap();
        let json = serde_json::to_value(&a).unwrap();
        assert_eq!(
            json,
            serde_json::json!([
                {"prime": 2, "gen": [1, 1], "e": 2, "f": 1, "m": 3},
                {"prime": 5, "gen": [3, 1], "e": 1, "f": 1, "m": 1}
            ])
        );
    }

    #[test]
    fn ideal_enumeration() {
        let o = gauss();
        let (ideals, skipped) = ideals_up_to(&o, &[2, 5], 3, 50).unwrap();
        assert!(skipped.is_empty());
        let texts: Vec<String> = ideals.iter().map(FactoredIdeal::to_text).collect();
        assert_eq!(ideals.len(), texts.iter().collect::<std::collections::BTreeSet<_>>().len());
        assert!(texts.contains(&"2^3@0".to_string()));
        assert!(texts.contains(&"2^1@0; 5^1@0; 5^1@1".to_string()));
        assert!(ideals.iter().all(|a| a.norm() <= BigInt::from(50)));
        assert_eq!(ideals.len(), 17);
        let bad = NumberFieldOrder::parse("x^2+3").unwrap();
        let (ideals, skipped) = ideals_up_to(&bad, &[2, 3], 2, 100).unwrap();
        assert_eq!(skipped, vec![2]);
        assert_eq!(ideals.len(), 2);
    }

    #[test]
    fn integer_ideals() {
        let o = gauss();
        assert_eq!(integer_ideal(&o, 1).unwrap(), FactoredIdeal::unit());
        assert_eq!(integer_ideal(&o, 20).unwrap().to_text(), "2^4@0; 5^1@0; 5^1@1");
        assert_eq!(integer_ideal(&o, 20).unwrap().norm(), BigInt::from(400));
        assert_eq!(integer_ideal(&o, 0), Err(Error::ZeroElement));
    }
}
