//! Finite residue rings `o/a` as lattice quotients `Z^d / a`, with explicit
//! enumeration of elements and units. Everything here is brute force and
//! serves as the oracle side of the closed-form classification.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use strength_reduce::StrengthReducedU64;

use crate::error::{Error, Result};
use crate::intmath::big_pow;
use crate::lattice::{express_in_spanning_set, Lattice};
use crate::order::{NumberFieldOrder, OrderElement, MAX_DEGREE};
use crate::prime::{FactoredIdeal, PrimeIdealData};

/// Default enumeration cap on `|o/a|`.
pub const DEFAULT_CAP: u64 = 1 << 20;
/// Largest accepted cap; keeps every intermediate product inside `i64`.
pub const MAX_CAP: u64 = 1 << 26;

/// HNF basis of `P^n`.
pub fn ideal_lattice(o: &NumberFieldOrder, prime: &PrimeIdealData, n: u32) -> Result<Lattice> {
    let d = o.degree();
    let p = BigInt::from(prime.rational_prime);
    let g = prime.gen_element(o);
    let mut current = Lattice::full(d);
    let mut basis: Vec<OrderElement> = current
        .basis()
        .iter()
        .map(|r| OrderElement::new(r.clone()))
        .collect();
    for k in 1..=n {
        let mut gens = Vec::with_capacity(2 * d);
        for b in &basis {
            gens.push(b.coeffs().iter().map(|c| c * &p).collect());
            gens.push(o.mul(b, &g)?.coeffs().to_vec());
        }
        let multiple = big_pow(prime.rational_prime, k.div_ceil(prime.ram_index));
        current = Lattice::from_generators(gens, d, Some(&multiple))?;
        basis = current
            .basis()
            .iter()
            .map(|r| OrderElement::new(r.clone()))
            .collect();
    }
    if current.index() != big_pow(prime.rational_prime, n * prime.res_degree) {
        return Err(Error::NonMaximalOrder(prime.rational_prime));
    }
    Ok(current)
}

/// HNF basis of the product ideal `Π P^m` (the intersection, as the factors
/// are coprime).
pub fn product_lattice(o: &NumberFieldOrder, a: &FactoredIdeal) -> Result<Lattice> {
    let d = o.degree();
    let mut acc = Lattice::full(d);
    let mut norm = BigInt::one();
    for (prime, m) in a.factors() {
        let pm = ideal_lattice(o, prime, *m)?;
        norm *= pm.index();
        let mut gens = Vec::with_capacity(d * d);
        for x in acc.basis() {
            for y in pm.basis() {
                let xe = OrderElement::new(x.clone());
                let ye = OrderElement::new(y.clone());
                gens.push(o.mul(&xe, &ye)?.coeffs().to_vec());
            }
        }
        acc = Lattice::from_generators(gens, d, Some(&norm))?;
    }
    assert_eq!(acc.index(), a.norm(), "ideal lattice index differs from the ideal norm");
    Ok(acc)
}

/// A full-rank lattice with small entries, reduced with machine integers.
#[derive(Clone, Debug)]
struct SmallLattice {
    rows: Vec<Vec<i64>>,
    diag: Vec<i64>,
    /// Positive integer in the lattice; coordinates are reduced modulo it.
    multiple: i64,
}

impl SmallLattice {
    fn new(l: &Lattice, multiple: i64) -> Self {
        let rows: Vec<Vec<i64>> = l
            .basis()
            .iter()
            .map(|r| r.iter().map(|x| x.to_i64().expect("lattice entry fits in i64")).collect())
            .collect();
        let diag = (0..rows.len()).map(|i| rows[i][i]).collect();
        SmallLattice { rows, diag, multiple }
    }

    fn reduce(&self, v: &mut [i64]) {
        let m = self.multiple;
        for x in v.iter_mut() {
            *x = x.rem_euclid(m);
        }
        for (i, row) in self.rows.iter().enumerate() {
            let q = v[i].div_euclid(self.diag[i]);
            if q == 0 {
                continue;
            }
            v[i] -= q * self.diag[i];
            for j in i + 1..v.len() {
                v[j] = (v[j] - q * row[j]).rem_euclid(m);
            }
        }
    }

    fn is_zero_mod(&self, v: &[i64]) -> bool {
        let mut w = [0i64; MAX_DEGREE];
        w[..v.len()].copy_from_slice(v);
        self.reduce(&mut w[..v.len()]);
        w.iter().all(|&x| x == 0)
    }
}

/// Membership in a prime `P` through the `F_p`-linear map `o → o/P`.
///
/// `P ⊇ pZ^d`, so every HNF pivot of `P` is `p` or 1, and the canonical
/// coordinates at the `p`-pivots depend linearly (mod `p`) on the input.
#[derive(Clone, Debug)]
struct PrimeTest {
    p: StrengthReducedU64,
    forms: Vec<[u64; MAX_DEGREE]>,
}

impl PrimeTest {
    fn new(l: &SmallLattice, p: u64) -> Self {
        let d = l.diag.len();
        let pivots: Vec<usize> = (0..d).filter(|&i| l.diag[i] != 1).collect();
        let mut forms = vec![[0u64; MAX_DEGREE]; pivots.len()];
        for j in 0..d {
            let mut e = [0i64; MAX_DEGREE];
            e[j] = 1;
            l.reduce(&mut e[..d]);
            for (form, &i) in forms.iter_mut().zip(&pivots) {
                form[j] = e[i] as u64;
            }
        }
        PrimeTest {
            p: StrengthReducedU64::new(p),
            forms,
        }
    }

    /// `v` must have entries below `2^26`.
    fn contains(&self, v: &[u64]) -> bool {
        self.forms
            .iter()
            .all(|form| form.iter().zip(v).map(|(a, b)| a * b).sum::<u64>() % self.p == 0)
    }
}

fn to_element(v: &[u64]) -> ResidueElement {
    ResidueElement {
        coeffs: v.iter().map(|&x| x as i64).collect(),
    }
}

/// Canonical representative of a residue class, one integer per power-basis
/// coordinate.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct ResidueElement {
    coeffs: Vec<i64>,
}

impl ResidueElement {
    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }
}

impl std::fmt::Display for ResidueElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let big: Vec<BigInt> = self.coeffs.iter().map(|&c| BigInt::from(c)).collect();
        write!(f, "[{}]", crate::order::format_poly(&big, "θ"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Census {
    /// Units with `x^2 = 1`, sorted.
    pub solutions: Vec<ResidueElement>,
    /// Elements of order exactly 2: `2^d2 - 1`.
    pub order2_count: usize,
    pub d2: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct RingDump {
    pub modulus: FactoredIdeal,
    pub size: u64,
    pub diag: Vec<i64>,
    pub elements: Vec<ResidueElement>,
    pub units: Vec<ResidueElement>,
    pub census: Census,
    pub unit_product: ResidueElement,
}

/// The finite ring `o/a`.
#[derive(Clone, Debug)]
pub struct ResidueRing {
    order: NumberFieldOrder,
    modulus: FactoredIdeal,
    lattice: Lattice,
    small: SmallLattice,
    primes: Vec<PrimeTest>,
    /// Canonical residues of `θ^d, …, θ^(2d-2)`.
    high_powers: Vec<Vec<u64>>,
    /// Division by the characteristic, used by the unreduced product.
    char_red: StrengthReducedU64,
    size: u64,
}

impl ResidueRing {
    /// Builds `o/a`, refusing rings with more than `cap` elements.
    pub fn new(o: &NumberFieldOrder, a: &FactoredIdeal, cap: u64) -> Result<Self> {
        check_cap(cap)?;
        let norm = a.norm();
        let size = match norm.to_u64() {
            Some(s) if s <= cap => s,
            _ => {
                return Err(Error::RingTooLarge {
                    size: norm.to_string(),
                    cap,
                })
            }
        };
        let lattice = product_lattice(o, a)?;
        let d = o.degree();
        let multiple = smallest_integer(&lattice);
        let small = SmallLattice::new(&lattice, multiple);
        let mut primes = Vec::with_capacity(a.factors().len());
        for (prime, _) in a.factors() {
            let l = ideal_lattice(o, prime, 1)?;
            let p = prime.rational_prime;
            primes.push(PrimeTest::new(&SmallLattice::new(&l, p as i64), p));
        }
        let mut high_powers = Vec::new();
        if d > 1 {
            let theta = o.theta();
            let mut pw = o.pow(&theta, d as u32)?;
            for _ in d..2 * d - 1 {
                high_powers.push(reduce_big(&lattice, pw.coeffs()).iter().map(|&x| x as u64).collect());
                pw = o.mul(&pw, &theta)?;
            }
        }
        Ok(ResidueRing {
            order: o.clone(),
            modulus: a.clone(),
            lattice,
            small,
            primes,
            high_powers,
            char_red: StrengthReducedU64::new(multiple as u64),
            size,
        })
    }

    pub fn order(&self) -> &NumberFieldOrder {
        &self.order
    }

    pub fn modulus(&self) -> &FactoredIdeal {
        &self.modulus
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn diag(&self) -> &[i64] {
        &self.small.diag
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn degree(&self) -> usize {
        self.order.degree()
    }

    /// Smallest positive rational integer in the ideal.
    pub fn characteristic(&self) -> i64 {
        self.small.multiple
    }

    fn canonical(&self, mut v: Vec<i64>) -> ResidueElement {
        self.small.reduce(&mut v);
        ResidueElement { coeffs: v }
    }

    pub fn from_ints(&self, coeffs: &[i64]) -> ResidueElement {
        let mut v = vec![0i64; self.degree()];
        for (i, &c) in coeffs.iter().enumerate().take(self.degree()) {
            v[i] = c;
        }
        self.canonical(v)
    }

    pub fn from_order_element(&self, a: &OrderElement) -> ResidueElement {
        ResidueElement {
            coeffs: reduce_big(&self.lattice, a.coeffs()),
        }
    }

    pub fn to_order_element(&self, a: &ResidueElement) -> OrderElement {
        OrderElement::from_i64s(&a.coeffs)
    }

    pub fn one(&self) -> ResidueElement {
        self.from_ints(&[1])
    }

    pub fn zero(&self) -> ResidueElement {
        self.from_ints(&[0])
    }

    pub fn minus_one(&self) -> ResidueElement {
        self.from_ints(&[-1])
    }

    pub fn add(&self, a: &ResidueElement, b: &ResidueElement) -> ResidueElement {
        self.canonical(a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect())
    }

    pub fn sub(&self, a: &ResidueElement, b: &ResidueElement) -> ResidueElement {
        self.canonical(a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x - y).collect())
    }

    pub fn neg(&self, a: &ResidueElement) -> ResidueElement {
        self.canonical(a.coeffs.iter().map(|x| -x).collect())
    }

    /// `a·b` with every coordinate reduced modulo the characteristic `M`
    /// only. Inputs must lie in `[0, M)`; `M ≤ 2^26` keeps every
    /// intermediate below `2·MAX_DEGREE·M^2 < 2^57`.
    fn mul_unreduced(&self, a: &[u64], b: &[u64], out: &mut [u64]) {
        let d = a.len();
        let m = self.char_red;
        let mut c = [0u64; 2 * MAX_DEGREE - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                c[i + j] += x * y;
            }
        }
        out.copy_from_slice(&c[..d]);
        for (k, pw) in self.high_powers.iter().enumerate() {
            let ck = c[d + k] % m;
            if ck == 0 {
                continue;
            }
            for (o, &t) in out.iter_mut().zip(pw) {
                *o += ck * t;
            }
        }
        for o in out.iter_mut() {
            *o = *o % m;
        }
    }

    fn canonical_from_unreduced(&self, v: &[u64]) -> ResidueElement {
        self.canonical(v.iter().map(|&x| x as i64).collect())
    }

    pub fn mul(&self, a: &ResidueElement, b: &ResidueElement) -> ResidueElement {
        let d = self.degree();
        let mut x = [0u64; MAX_DEGREE];
        let mut y = [0u64; MAX_DEGREE];
        let mut out = [0u64; MAX_DEGREE];
        for k in 0..d {
            x[k] = a.coeffs[k] as u64;
            y[k] = b.coeffs[k] as u64;
        }
        self.mul_unreduced(&x[..d], &y[..d], &mut out[..d]);
        self.canonical_from_unreduced(&out[..d])
    }

    pub fn pow(&self, a: &ResidueElement, mut exp: u64) -> ResidueElement {
        let mut acc = self.one();
        let mut base = a.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            exp >>= 1;
        }
        acc
    }

    /// Unit iff outside every prime divisor of the modulus.
    pub fn is_unit(&self, a: &ResidueElement) -> bool {
        let v: Vec<u64> = a.coeffs.iter().map(|&x| x as u64).collect();
        self.is_unit_raw(&v)
    }

    fn is_unit_raw(&self, v: &[u64]) -> bool {
        self.primes.iter().all(|p| !p.contains(v))
    }

    /// The element with mixed-radix index `idx` in the canonical box.
    pub fn element_at(&self, mut idx: u64) -> ResidueElement {
        let coeffs = self
            .small
            .diag
            .iter()
            .map(|&r| {
                let c = idx % r as u64;
                idx /= r as u64;
                c as i64
            })
            .collect();
        ResidueElement { coeffs }
    }

    /// Visits canonical representatives with indices in `start..end`.
    fn for_each_in(&self, start: u64, end: u64, mut f: impl FnMut(&[u64])) {
        if start >= end {
            return;
        }
        let d = self.degree();
        let mut v = [0u64; MAX_DEGREE];
        for (x, c) in v.iter_mut().zip(self.element_at(start).coeffs) {
            *x = c as u64;
        }
        let diag = &self.small.diag;
        for _ in start..end {
            f(&v[..d]);
            for (x, &r) in v.iter_mut().zip(diag) {
                *x += 1;
                if *x < r as u64 {
                    break;
                }
                *x = 0;
            }
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = ResidueElement> + '_ {
        (0..self.size).map(move |i| self.element_at(i))
    }

    pub fn units(&self) -> Vec<ResidueElement> {
        let mut out = Vec::new();
        self.for_each_in(0, self.size, |v| {
            if self.is_unit_raw(v) {
                out.push(to_element(v));
            }
        });
        out
    }

    /// `Π p^((m-1)f) (p^f - 1)` over the prime factors.
    pub fn unit_count_formula(&self) -> u64 {
        self.modulus
            .factors()
            .iter()
            .map(|(p, m)| {
                let q = p.norm().to_u64().unwrap();
                q.pow(m - 1) * (q - 1)
            })
            .product()
    }

    fn chunks(&self) -> Vec<(u64, u64)> {
        const CHUNK: u64 = 1 << 14;
        (0..self.size.div_ceil(CHUNK))
            .map(|i| (i * CHUNK, ((i + 1) * CHUNK).min(self.size)))
            .collect()
    }

    fn partial_product(&self, (start, end): (u64, u64)) -> ResidueElement {
        let d = self.degree();
        let mut acc = [0u64; MAX_DEGREE];
        let mut tmp = [0u64; MAX_DEGREE];
        acc[0] = 1 % self.char_red.get();
        self.for_each_in(start, end, |v| {
            if self.is_unit_raw(v) {
                self.mul_unreduced(&acc[..d], v, &mut tmp[..d]);
                std::mem::swap(&mut acc, &mut tmp);
            }
        });
        self.canonical_from_unreduced(&acc[..d])
    }

    fn partial_census(&self, (start, end): (u64, u64)) -> Vec<ResidueElement> {
        let d = self.degree();
        let mut sq = [0u64; MAX_DEGREE];
        let mut out = Vec::new();
        self.for_each_in(start, end, |v| {
            if self.is_unit_raw(v) {
                self.mul_unreduced(v, v, &mut sq[..d]);
                let mut w = [0i64; MAX_DEGREE];
                for (wi, &x) in w.iter_mut().zip(&sq[..d]) {
                    *wi = x as i64;
                }
                w[0] -= 1;
                if self.small.is_zero_mod(&w[..d]) {
                    out.push(to_element(v));
                }
            }
        });
        out
    }

    /// Product of all units, by enumeration.
    pub fn unit_product(&self) -> ResidueElement {
        let partials = self.map_chunks(|c| self.partial_product(c));
        let mut acc = self.one();
        for p in partials {
            acc = self.mul(&acc, &p);
        }
        acc
    }

    /// Solutions of `x^2 = 1` among the units and the resulting `d_2`.
    pub fn order2_census(&self) -> Result<Census> {
        let mut solutions: Vec<ResidueElement> =
            self.map_chunks(|c| self.partial_census(c)).into_iter().flatten().collect();
        solutions.sort();
        let n = solutions.len();
        if !n.is_power_of_two() {
            return Err(Error::NotAPowerOfTwo(n));
        }
        Ok(Census {
            order2_count: n - 1,
            d2: n.trailing_zeros(),
            solutions,
        })
    }

    #[cfg(feature = "parallel")]
    fn map_chunks<T: Send>(&self, f: impl Fn((u64, u64)) -> T + Sync + Send) -> Vec<T> {
        use rayon::prelude::*;
        self.chunks().into_par_iter().map(f).collect()
    }

    #[cfg(not(feature = "parallel"))]
    fn map_chunks<T>(&self, f: impl Fn((u64, u64)) -> T) -> Vec<T> {
        self.chunks().into_iter().map(f).collect()
    }

    /// Units congruent to 1 modulo `P^j`, for a prime-power modulus `P^n`.
    pub fn principal_units(&self, j: u32) -> Result<Vec<ResidueElement>> {
        let (prime, n) = self.modulus.as_prime_power().ok_or(Error::CompositeModulus)?;
        if j == 0 || j > n {
            return Err(Error::JOutOfRange { j, n });
        }
        let lj = ideal_lattice(&self.order, prime, j)?;
        let small = SmallLattice::new(&lj, smallest_integer(&lj));
        let mut out = Vec::new();
        self.for_each_in(0, self.size, |v| {
            let mut w = [0i64; MAX_DEGREE];
            for (wi, &x) in w.iter_mut().zip(v) {
                *wi = x as i64;
            }
            w[0] -= 1;
            if small.is_zero_mod(&w[..v.len()]) {
                out.push(to_element(v));
            }
        });
        Ok(out)
    }

    /// Multiplicative order of a unit.
    pub fn unit_order(&self, a: &ResidueElement) -> Result<u64> {
        if !self.is_unit(a) {
            return Err(Error::NotAUnit);
        }
        let one = self.one();
        let mut x = a.clone();
        let mut k = 1;
        while x != one {
            x = self.mul(&x, a);
            k += 1;
        }
        Ok(k)
    }

    /// The subgroup generated by `gens`, by closure.
    pub fn generated_subgroup(&self, gens: &[ResidueElement]) -> Result<Vec<ResidueElement>> {
        if gens.iter().any(|g| !self.is_unit(g)) {
            return Err(Error::NotAUnit);
        }
        let one = self.one();
        let mut seen: HashSet<ResidueElement> = HashSet::from([one.clone()]);
        let mut frontier = vec![one];
        while let Some(h) = frontier.pop() {
            for g in gens {
                let x = self.mul(&h, g);
                if seen.insert(x.clone()) {
                    frontier.push(x);
                }
            }
        }
        let mut out: Vec<_> = seen.into_iter().collect();
        out.sort();
        Ok(out)
    }

    /// Product of all elements of the subgroup generated by `gens`.
    pub fn subgroup_product(&self, gens: &[ResidueElement]) -> Result<ResidueElement> {
        let h = self.generated_subgroup(gens)?;
        Ok(h.iter().fold(self.one(), |acc, x| self.mul(&acc, x)))
    }

    /// The rings `o/P^m` for each prime power in the modulus.
    pub fn crt_components(&self) -> Result<Vec<ResidueRing>> {
        self.modulus
            .factors()
            .iter()
            .map(|(p, m)| ResidueRing::new(&self.order, &FactoredIdeal::prime_power(p.clone(), *m), MAX_CAP))
            .collect()
    }

    /// Image of `a` under the reduction `o/a → o/b` for `a ⊂ b`.
    pub fn project(&self, a: &ResidueElement, target: &ResidueRing) -> ResidueElement {
        target.canonical(a.coeffs.clone())
    }

    /// Element `e` with `e ≡ 1 mod P^m` and `e ≡ 0` modulo the other prime
    /// powers, where `P^m` is the factor at position `i`.
    pub fn idempotent(&self, i: usize) -> Result<ResidueElement> {
        let factors = self.modulus.factors();
        let (prime, m) = &factors[i];
        if factors.len() == 1 {
            return Ok(self.one());
        }
        let rest = FactoredIdeal::new(
            factors
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != i)
                .map(|(_, f)| f.clone())
                .collect(),
        );
        let d = self.degree();
        let local = ideal_lattice(&self.order, prime, *m)?;
        let other = product_lattice(&self.order, &rest)?;
        let mut gens: Vec<Vec<BigInt>> = other.basis().to_vec();
        gens.extend(local.basis().iter().cloned());
        let coeffs = express_in_spanning_set(&gens, 0, d)?;
        let mut x = vec![BigInt::zero(); d];
        for (c, row) in coeffs.iter().zip(other.basis()) {
            for (xi, r) in x.iter_mut().zip(row) {
                *xi += c * r;
            }
        }
        Ok(self.from_order_element(&OrderElement::new(x)))
    }

    /// Unit product predicted from the census: 1 unless `d_2 = 1`, then the
    /// unique element of order 2.
    pub fn census_prediction(&self, census: &Census) -> ResidueElement {
        if census.d2 == 1 {
            let one = self.one();
            census.solutions.iter().find(|s| **s != one).cloned().unwrap()
        } else {
            self.one()
        }
    }

    /// Full listing for the `--dump` flag.
    pub fn dump(&self) -> Result<RingDump> {
        let census = self.order2_census()?;
        Ok(RingDump {
            modulus: self.modulus.clone(),
            size: self.size,
            diag: self.small.diag.clone(),
            elements: self.elements().collect(),
            units: self.units(),
            unit_product: self.unit_product(),
            census,
        })
    }
}

pub fn check_cap(cap: u64) -> Result<()> {
    if (2..=MAX_CAP).contains(&cap) {
        Ok(())
    } else {
        Err(Error::BadCap(cap))
    }
}

fn reduce_big(l: &Lattice, v: &[BigInt]) -> Vec<i64> {
    l.reduce(v)
        .iter()
        .map(|x| x.to_i64().expect("canonical residue fits in i64"))
        .collect()
}

/// Least positive `k` with `k ∈ L` (as `k·e_0`); it divides the index.
fn smallest_integer(l: &Lattice) -> i64 {
    let index = l.index().to_i64().expect("lattice index fits in i64");
    let d = l.dim();
    let mut v = vec![BigInt::zero(); d];
    let mut divisors: Vec<i64> = (1..=index.isqrt())
        .filter(|k| index % k == 0)
        .flat_map(|k| [k, index / k])
        .collect();
    divisors.sort_unstable();
    for k in divisors {
        v[0] = BigInt::from(k);
        if l.contains(&v) {
            return k;
        }
    }
    unreachable!("the index lies in every full-rank lattice")
}
