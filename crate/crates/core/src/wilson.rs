//! Closed-form products of units.
//!
//! The product of all elements of a finite abelian group is trivial unless
//! the group has exactly one element of order 2, in which case it is that
//! element. For `(o/a)^×` the number of independent order-2 elements is
//! additive over the prime-power factors of `a`, and each local term depends
//! only on `(p, e, f, n)`. Nothing in this module enumerates a ring.

use std::fmt;

use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::intmath::factor_u64;
use crate::order::{NumberFieldOrder, OrderElement};
use crate::prime::{dedekind_maximal, FactoredIdeal, PrimeIdealData};
use crate::residue::{ideal_lattice, ResidueElement, ResidueRing};

/// The 2-rank of a group as far as it is determined in closed form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum D2Class {
    Exact(u32),
    /// Known only to be at least 2.
    MoreThanOne,
}

impl D2Class {
    pub fn combine(self, other: D2Class) -> D2Class {
        match (self, other) {
            (D2Class::Exact(a), D2Class::Exact(b)) => D2Class::Exact(a + b),
            _ => D2Class::MoreThanOne,
        }
    }

    /// Whether a census value is consistent with this class.
    pub fn admits(self, d2: u32) -> bool {
        match self {
            D2Class::Exact(k) => k == d2,
            D2Class::MoreThanOne => d2 >= 2,
        }
    }
}

/// `d_2((o/P^n)^×)` for a prime with residue characteristic `p`,
/// ramification index `e` and residue degree `f`.
pub fn d2_local(p: u64, e: u32, f: u32, n: u32) -> D2Class {
    if p != 2 {
        return D2Class::Exact(1);
    }
    if n == 1 {
        return D2Class::Exact(0);
    }
    if n > 2 * e {
        return D2Class::Exact(1 + e * f);
    }
    if n == 2 {
        return D2Class::Exact(f);
    }
    if f == 1 && n == 3 && e > 1 {
        return D2Class::Exact(1);
    }
    if f == 1 && e == 1 {
        return D2Class::Exact(2);
    }
    D2Class::MoreThanOne
}

/// The unique element of order 2 of a local unit group, as a symbol in `π`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LocalTorsion {
    MinusOne,
    OnePlusPi,
    OnePlusPiSquared,
}

impl fmt::Display for LocalTorsion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LocalTorsion::MinusOne => "-1",
            LocalTorsion::OnePlusPi => "1+π",
            LocalTorsion::OnePlusPiSquared => "1+π²",
        })
    }
}

pub fn order2_local(p: u64, e: u32, f: u32, n: u32) -> Result<LocalTorsion> {
    if d2_local(p, e, f, n) != D2Class::Exact(1) {
        return Err(Error::NotUniqueTorsion);
    }
    Ok(if p != 2 {
        LocalTorsion::MinusOne
    } else if n == 2 {
        LocalTorsion::OnePlusPi
    } else {
        LocalTorsion::OnePlusPiSquared
    })
}

impl LocalTorsion {
    /// Value in `ring` for a chosen class of `π`.
    pub fn evaluate(self, ring: &ResidueRing, pi: &ResidueElement) -> ResidueElement {
        let one = ring.one();
        match self {
            LocalTorsion::MinusOne => ring.minus_one(),
            LocalTorsion::OnePlusPi => ring.add(&one, pi),
            LocalTorsion::OnePlusPiSquared => ring.add(&one, &ring.mul(pi, pi)),
        }
    }
}

/// A finite abelian group `Z/n_1 × … × Z/n_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianGroupSpec {
    cyclic_orders: Vec<u64>,
}

impl AbelianGroupSpec {
    pub fn new(cyclic_orders: Vec<u64>) -> Result<Self> {
        if let Some(&bad) = cyclic_orders.iter().find(|&&n| n < 2) {
            return Err(Error::InvalidGroup(bad));
        }
        Ok(AbelianGroupSpec { cyclic_orders })
    }

    pub fn cyclic_orders(&self) -> &[u64] {
        &self.cyclic_orders
    }

    pub fn d2(&self) -> u32 {
        self.cyclic_orders.iter().filter(|n| *n % 2 == 0).count() as u32
    }
}

/// Sum of all elements of the group, in closed form.
pub fn group_sum(g: &AbelianGroupSpec) -> Vec<u64> {
    let orders = g.cyclic_orders();
    if g.d2() != 1 {
        return vec![0; orders.len()];
    }
    orders
        .iter()
        .map(|&n| if n % 2 == 0 { n / 2 } else { 0 })
        .collect()
}

/// Symbolic product of all units of `o/a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WilsonClass {
    One,
    MinusOne,
    OnePlusPi(PrimeIdealData),
    OnePlusPiSquared(PrimeIdealData),
}

impl WilsonClass {
    pub fn name(&self) -> &'static str {
        match self {
            WilsonClass::One => "one",
            WilsonClass::MinusOne => "minus_one",
            WilsonClass::OnePlusPi(_) => "one_plus_pi",
            WilsonClass::OnePlusPiSquared(_) => "one_plus_pi_sq",
        }
    }

    pub fn prime(&self) -> Option<&PrimeIdealData> {
        match self {
            WilsonClass::OnePlusPi(p) | WilsonClass::OnePlusPiSquared(p) => Some(p),
            _ => None,
        }
    }
}

impl fmt::Display for WilsonClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WilsonClass::One => f.write_str("1"),
            WilsonClass::MinusOne => f.write_str("-1"),
            WilsonClass::OnePlusPi(p) => write!(f, "1+π at {p}"),
            WilsonClass::OnePlusPiSquared(p) => write!(f, "1+π² at {p}"),
        }
    }
}

/// The class together with its value in `o/a` when the ring was built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WilsonProduct {
    pub class: WilsonClass,
    pub witness: Option<ResidueElement>,
}

impl Serialize for WilsonProduct {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("WilsonProduct", 3)?;
        st.serialize_field("class", self.class.name())?;
        st.serialize_field("prime", &self.class.prime())?;
        st.serialize_field("witness", &self.witness)?;
        st.end()
    }
}

/// An element of `P` not in `P^2`: `g(θ)`, or `g(θ) + p` when `g(θ) ∈ P^2`.
pub fn uniformizer(o: &NumberFieldOrder, prime: &PrimeIdealData) -> Result<OrderElement> {
    let p1 = ideal_lattice(o, prime, 1)?;
    let p2 = ideal_lattice(o, prime, 2)?;
    let g = prime.gen_element(o);
    let shifted = o.add(&g, &o.from_int(prime.rational_prime.into()))?;
    [g, shifted]
        .into_iter()
        .find(|c| p1.contains(c.coeffs()) && !p2.contains(c.coeffs()))
        .ok_or(Error::UniformizerNotFound)
}

/// Local `d_2` classes of each prime-power factor of `a`.
pub fn local_classes(a: &FactoredIdeal) -> Vec<D2Class> {
    a.factors()
        .iter()
        .map(|(p, m)| d2_local(p.rational_prime, p.ram_index, p.res_degree, *m))
        .collect()
}

/// Closed-form class of the product of all units of `o/a`.
pub fn classify_symbolic(o: &NumberFieldOrder, a: &FactoredIdeal) -> Result<WilsonClass> {
    let mut checked = Vec::new();
    for (p, _) in a.factors() {
        let q = p.rational_prime;
        if !checked.contains(&q) {
            if !dedekind_maximal(o, q)? {
                return Err(Error::NonMaximalOrder(q));
            }
            checked.push(q);
        }
    }
    let classes = local_classes(a);
    let total = classes.iter().fold(D2Class::Exact(0), |acc, c| acc.combine(*c));
    if total != D2Class::Exact(1) {
        return Ok(WilsonClass::One);
    }
    let pos = classes
        .iter()
        .position(|c| *c == D2Class::Exact(1))
        .expect("a sum of 1 has a term equal to 1");
    let (prime, m) = &a.factors()[pos];
    Ok(
        match order2_local(prime.rational_prime, prime.ram_index, prime.res_degree, *m)? {
            LocalTorsion::MinusOne => WilsonClass::MinusOne,
            LocalTorsion::OnePlusPi => WilsonClass::OnePlusPi(prime.clone()),
            LocalTorsion::OnePlusPiSquared => WilsonClass::OnePlusPiSquared(prime.clone()),
        },
    )
}

/// Value of `class` in `ring`, using `pi` as the uniformizer at the class's
/// prime (or the default uniformizer when `pi` is `None`).
///
/// The local symbol is placed in the `P`-component through a CRT idempotent;
/// every other component carries 1.
pub fn evaluate_class(ring: &ResidueRing, class: &WilsonClass, pi: Option<&OrderElement>) -> Result<ResidueElement> {
    let (prime, symbol) = match class {
        WilsonClass::One => return Ok(ring.one()),
        WilsonClass::MinusOne => return Ok(ring.minus_one()),
        WilsonClass::OnePlusPi(p) => (p, LocalTorsion::OnePlusPi),
        WilsonClass::OnePlusPiSquared(p) => (p, LocalTorsion::OnePlusPiSquared),
    };
    let pos = ring
        .modulus()
        .factors()
        .iter()
        .position(|(q, _)| q == prime)
        .expect("class prime divides the modulus");
    let pi = match pi {
        Some(x) => x.clone(),
        None => uniformizer(ring.order(), prime)?,
    };
    let pi = ring.from_order_element(&pi);
    let local = symbol.evaluate(ring, &pi);
    let e = ring.idempotent(pos)?;
    let one = ring.one();
    Ok(ring.add(&one, &ring.mul(&e, &ring.sub(&local, &one))))
}

/// Class plus witness; the witness is left empty when `|o/a| > cap`.
pub fn classify_global(o: &NumberFieldOrder, a: &FactoredIdeal, cap: u64) -> Result<WilsonProduct> {
    let class = classify_symbolic(o, a)?;
    let witness = match ResidueRing::new(o, a, cap) {
        Ok(ring) => Some(evaluate_class(&ring, &class, None)?),
        Err(Error::RingTooLarge { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(WilsonProduct { class, witness })
}

/// Product of all units of `Z/A`, decided from the shape of `A` alone:
/// `-1` for `A = 4`, `p^m` or `2p^m` with `p` odd, `+1` otherwise.
pub fn classify_gauss(a: u64) -> Result<i8> {
    if a < 2 {
        return Err(Error::InvalidModulus(a));
    }
    let fac = factor_u64(a);
    let odd: Vec<_> = fac.iter().filter(|(p, _)| *p != 2).collect();
    let two = fac.iter().find(|(p, _)| *p == 2).map_or(0, |(_, m)| *m);
    let minus = a == 4 || (odd.len() == 1 && two <= 1);
    Ok(if minus { -1 } else { 1 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prime::{factor_prime, parse_ideal};
    use crate::residue::DEFAULT_CAP;

    #[test]
    fn d2_local_examples() {
        assert_eq!(d2_local(3, 1, 1, 5), D2Class::Exact(1));
        assert_eq!(d2_local(2, 2, 1, 3), D2Class::Exact(1));
        assert_eq!(d2_local(2, 2, 1, 5), D2Class::Exact(3));
        assert_eq!(d2_local(2, 1, 2, 4), D2Class::Exact(3));
        assert_eq!(d2_local(2, 5, 1, 1), D2Class::Exact(0));
        assert_eq!(d2_local(2, 3, 2, 2), D2Class::Exact(2));
        assert_eq!(d2_local(2, 1, 1, 7), D2Class::Exact(2));
        assert_eq!(d2_local(2, 2, 1, 4), D2Class::MoreThanOne);
        assert_eq!(d2_local(2, 2, 2, 3), D2Class::MoreThanOne);
    }

    #[test]
    fn order2_local_examples() {
        assert_eq!(order2_local(7, 1, 1, 3), Ok(LocalTorsion::MinusOne));
        assert_eq!(order2_local(2, 1, 1, 2), Ok(LocalTorsion::OnePlusPi));
        assert_eq!(order2_local(2, 2, 1, 3), Ok(LocalTorsion::OnePlusPiSquared));
        assert_eq!(order2_local(2, 1, 1, 3), Err(Error::NotUniqueTorsion));
        assert_eq!(order2_local(2, 1, 2, 2), Err(Error::NotUniqueTorsion));
    }

    #[test]
    fn local_symbols_in_small_rings() {
        // Z/4 with π = 2: 1 + π = 3 = -1
        let z = NumberFieldOrder::integers();
        let a = parse_ideal(&z, "2^2").unwrap();
        let r = ResidueRing::new(&z, &a, DEFAULT_CAP).unwrap();
        let pi = r.from_ints(&[2]);
        assert_eq!(LocalTorsion::OnePlusPi.evaluate(&r, &pi), r.minus_one());
        // Z[√2]/P^3 with π = √2: 1 + π² = 3 = -1
        let o = NumberFieldOrder::parse("x^2-2").unwrap();
        let a = parse_ideal(&o, "2^3").unwrap();
        let r = ResidueRing::new(&o, &a, DEFAULT_CAP).unwrap();
        let pi = r.from_ints(&[0, 1]);
        assert_eq!(LocalTorsion::OnePlusPiSquared.evaluate(&r, &pi), r.minus_one());
    }

    #[test]
    fn group_sum_examples() {
        let g = |o: &[u64]| group_sum(&AbelianGroupSpec::new(o.to_vec()).unwrap());
        assert_eq!(g(&[5]), vec![0]);
        assert_eq!(g(&[4]), vec![2]);
        assert_eq!(g(&[2, 2]), vec![0, 0]);
        assert_eq!(g(&[3, 6, 5]), vec![0, 3, 0]);
        assert_eq!(AbelianGroupSpec::new(vec![3, 1]), Err(Error::InvalidGroup(1)));
    }

    #[test]
    fn uniformizer_examples() {
        let z = NumberFieldOrder::integers();
        let p = &factor_prime(&z, 2).unwrap()[0];
        assert_eq!(uniformizer(&z, p).unwrap(), OrderElement::from_i64s(&[2]));
        let gi = NumberFieldOrder::parse("x^2+1").unwrap();
        let p = &factor_prime(&gi, 2).unwrap()[0];
        assert_eq!(uniformizer(&gi, p).unwrap(), OrderElement::from_i64s(&[1, 1]));
        let z8 = NumberFieldOrder::parse("x^4+1").unwrap();
        let p = &factor_prime(&z8, 2).unwrap()[0];
        let pi = uniformizer(&z8, p).unwrap();
        assert_eq!(
            crate::prime::valuation(&z8, p, &pi).unwrap(),
            crate::prime::Valuation::Finite(1)
        );
        // 1 - ζ is also legal
        let alt = OrderElement::from_i64s(&[1, -1, 0, 0]);
        assert_eq!(
            crate::prime::valuation(&z8, p, &alt).unwrap(),
            crate::prime::Valuation::Finite(1)
        );
    }

    #[test]
    fn classify_examples() {
        let z = NumberFieldOrder::integers();
        let w = classify_global(&z, &parse_ideal(&z, "2^2").unwrap(), DEFAULT_CAP).unwrap();
        assert!(matches!(w.class, WilsonClass::OnePlusPi(_)));
        assert_eq!(w.witness.unwrap().coeffs(), &[3]);

        let s2 = NumberFieldOrder::parse("x^2-2").unwrap();
        let a = parse_ideal(&s2, "2^3").unwrap();
        let w = classify_global(&s2, &a, DEFAULT_CAP).unwrap();
        assert!(matches!(w.class, WilsonClass::OnePlusPiSquared(_)));
        let r = ResidueRing::new(&s2, &a, DEFAULT_CAP).unwrap();
        assert_eq!(w.witness.unwrap(), r.minus_one());

        let w = classify_global(&z, &parse_ideal(&z, "2^2; 3").unwrap(), DEFAULT_CAP).unwrap();
        assert_eq!(w.class, WilsonClass::One);
        let w = classify_global(&z, &FactoredIdeal::unit(), DEFAULT_CAP).unwrap();
        assert_eq!(w.class, WilsonClass::One);
    }

    #[test]
    fn witness_left_symbolic_above_cap() {
        let o = NumberFieldOrder::parse("x^2+1").unwrap();
        let a = parse_ideal(&o, "3^20").unwrap();
        let w = classify_global(&o, &a, DEFAULT_CAP).unwrap();
        assert_eq!(w.class, WilsonClass::MinusOne);
        assert_eq!(w.witness, None);
    }

    #[test]
    fn non_maximal_is_rejected() {
        let o = NumberFieldOrder::parse("x^2+3").unwrap();
        let p = crate::fp_poly::FpPoly::x_plus(1);
        let fake = PrimeIdealData {
            rational_prime: 2,
            gen_poly: p,
            ram_index: 2,
            res_degree: 1,
            index: 0,
        };
        let a = FactoredIdeal::prime_power(fake, 2);
        assert_eq!(classify_symbolic(&o, &a), Err(Error::NonMaximalOrder(2)));
    }

    #[test]
    fn gauss_examples() {
        assert_eq!(classify_gauss(4), Ok(-1));
        assert_eq!(classify_gauss(9), Ok(-1));
        assert_eq!(classify_gauss(8), Ok(1));
        assert_eq!(classify_gauss(2), Ok(1));
        assert_eq!(classify_gauss(50), Ok(-1));
        assert_eq!(classify_gauss(12), Ok(1));
        assert_eq!(classify_gauss(1), Err(Error::InvalidModulus(1)));
    }

    #[test]
    fn product_json_shape() {
        let o = NumberFieldOrder::parse("x^2+1").unwrap();
        let w = classify_global(&o, &parse_ideal(&o, "2^2").unwrap(), DEFAULT_CAP).unwrap();
        let json = serde_json::to_value(&w).unwrap();
        assert_eq!(
            json,
            serde_json::json!({
                "class": "one_plus_pi",
                "prime": {"prime": 2, "gen": [1, 1], "e": 2, "f": 1, "index": 0},
                "witness": [0, 1]
            })
        );
        let w = classify_global(&o, &parse_ideal(&o, "5").unwrap(), DEFAULT_CAP).unwrap();
        let json = serde_json::to_value(&w).unwrap();
        assert_eq!(json["class"], "minus_one");
        assert_eq!(json["prime"], serde_json::Value::Null);
    }
}
