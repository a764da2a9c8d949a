//! Exact arithmetic in a monogenic order `Z[θ] = Z[x]/(f)`.
//!
//! Elements are stored in the power basis `1, θ, …, θ^(d-1)` and are always
//! reduced modulo `f`.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fp_poly::{FpPoly, PrimeField};
use crate::intmath::small_primes;

/// Largest supported degree of a defining polynomial.
pub const MAX_DEGREE: usize = 8;

/// Upper limit on bounded candidates tried by the naive factor search.
const NAIVE_SEARCH_LIMIT: u64 = 50_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NumberFieldOrder {
    poly: Vec<BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrderElement {
    coeffs: Vec<BigInt>,
}

impl OrderElement {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        OrderElement { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        OrderElement::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
}

/// Coefficients serialize as JSON integers when they fit in `i64`, and as
/// decimal strings otherwise.
impl Serialize for OrderElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.coeffs.len()))?;
        for c in &self.coeffs {
            match c.to_i64() {
                Some(v) => seq.serialize_element(&v)?,
                None => seq.serialize_element(&c.to_string())?,
            }
        }
        seq.end()
    }
}

impl fmt::Display for OrderElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_poly(&self.coeffs, "θ"))
    }
}

impl NumberFieldOrder {
    /// Validates `coeffs` (constant term first) as a monic irreducible
    /// polynomial and returns the order it defines.
    pub fn new(coeffs: Vec<BigInt>) -> Result<Self> {
        let mut coeffs = coeffs;
        while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.len() < 2 {
            return Err(Error::DegreeZero);
        }
        if !coeffs.last().unwrap().is_one() {
            return Err(Error::NotMonic);
        }
        let d = coeffs.len() - 1;
        if d > MAX_DEGREE {
            return Err(Error::DegreeTooLarge(d));
        }
        if let Some(factor) = find_factor(&coeffs)? {
            return Err(Error::Reducible {
                factor: format_poly(&factor, "x"),
            });
        }
        Ok(NumberFieldOrder { poly: coeffs })
    }

    pub fn from_i64s(coeffs: &[i64]) -> Result<Self> {
        NumberFieldOrder::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Parses either `"c0,c1,...,cd"` or a human form such as `"x^2+1"`.
    pub fn parse(text: &str) -> Result<Self> {
        NumberFieldOrder::new(parse_poly(text)?)
    }

    /// The ring of rational integers, presented as `Z[x]/(x)`.
    pub fn integers() -> Self {
        NumberFieldOrder {
            poly: vec![BigInt::zero(), BigInt::one()],
        }
    }

    /// `Z[ζ]` for a primitive `2^t`-th root of unity, `t ≥ 2`.
    pub fn cyclotomic_two_power(t: u32) -> Result<Self> {
        if t < 2 {
            return Err(Error::Parse(format!("cyclotomic exponent t = {t} must be at least 2")));
        }
        let d = 1usize << (t - 1);
        let mut coeffs = vec![BigInt::zero(); d + 1];
        coeffs[0] = BigInt::one();
        coeffs[d] = BigInt::one();
        NumberFieldOrder::new(coeffs)
    }

    pub fn degree(&self) -> usize {
        self.poly.len() - 1
    }

    /// Coefficients of the defining polynomial, constant term first.
    pub fn defining_poly(&self) -> &[BigInt] {
        &self.poly
    }

    pub fn zero(&self) -> OrderElement {
        OrderElement::new(vec![BigInt::zero(); self.degree()])
    }

    pub fn one(&self) -> OrderElement {
        self.from_int(BigInt::one())
    }

    pub fn from_int(&self, n: BigInt) -> OrderElement {
        let mut c = vec![BigInt::zero(); self.degree()];
        c[0] = n;
        OrderElement::new(c)
    }

    /// Reduces an arbitrary polynomial in `θ` to an element of the order.
    pub fn element(&self, coeffs: &[BigInt]) -> OrderElement {
        OrderElement::new(self.reduce(coeffs.to_vec()))
    }

    /// Parses an element given in the polynomial text format, in `θ` or `x`.
    pub fn parse_element(&self, text: &str) -> Result<OrderElement> {
        let coeffs = parse_poly(&text.replace('θ', "x"))?;
        Ok(self.element(&coeffs))
    }

    fn check(&self, a: &OrderElement) -> Result<()> {
        if a.len() != self.degree() {
            return Err(Error::DegreeMismatch {
                expected: self.degree(),
                got: a.len(),
            });
        }
        Ok(())
    }

    fn reduce(&self, mut c: Vec<BigInt>) -> Vec<BigInt> {
        let d = self.degree();
        while c.len() > d {
            let top = c.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            let base = c.len() - d;
            for (i, fi) in self.poly[..d].iter().enumerate() {
                c[base + i] -= &top * fi;
            }
        }
        c.resize(d, BigInt::zero());
        c
    }

    pub fn add(&self, a: &OrderElement, b: &OrderElement) -> Result<OrderElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(OrderElement::new(
            a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect(),
        ))
    }

    pub fn sub(&self, a: &OrderElement, b: &OrderElement) -> Result<OrderElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(OrderElement::new(
            a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x - y).collect(),
        ))
    }

    pub fn neg(&self, a: &OrderElement) -> OrderElement {
        OrderElement::new(a.coeffs.iter().map(|x| -x).collect())
    }

    pub fn mul(&self, a: &OrderElement, b: &OrderElement) -> Result<OrderElement> {
        self.check(a)?;
        self.check(b)?;
        let d = self.degree();
        let mut c = vec![BigInt::zero(); 2 * d - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                c[i + j] += x * y;
            }
        }
        Ok(OrderElement::new(self.reduce(c)))
    }

    pub fn pow(&self, a: &OrderElement, exp: u32) -> Result<OrderElement> {
        let mut acc = self.one();
        for _ in 0..exp {
            acc = self.mul(&acc, a)?;
        }
        Ok(acc)
    }

    /// Matrix of multiplication by `a`: row `j` holds the coordinates of `a·θ^j`.
    pub fn mul_matrix(&self, a: &OrderElement) -> Result<Vec<Vec<BigInt>>> {
        self.check(a)?;
        let d = self.degree();
        let mut rows = Vec::with_capacity(d);
        let mut cur = a.clone();
        let theta = self.theta();
        for _ in 0..d {
            rows.push(cur.coeffs.clone());
            cur = self.mul(&cur, &theta)?;
        }
        Ok(rows)
    }

    /// `θ` itself (the integer `0` when `d = 1`, since then `θ` is a root of `x - c`).
    pub fn theta(&self) -> OrderElement {
        let mut c = vec![BigInt::zero(); self.degree() + 1];
        c[1] = BigInt::one();
        self.element(&c)
    }

    /// Absolute norm `|N(a)|`, the determinant of multiplication by `a`.
    pub fn norm(&self, a: &OrderElement) -> Result<BigInt> {
        Ok(bareiss_det(self.mul_matrix(a)?).abs())
    }

    /// Evaluates an integer polynomial at `θ`.
    pub fn eval_poly(&self, coeffs: &[BigInt]) -> OrderElement {
        self.element(coeffs)
    }
}

impl fmt::Display for NumberFieldOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_poly(&self.poly, "x"))
    }
}

/// Fraction-free Gaussian elimination; exact determinant of a square matrix.
pub fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Parses `"c0,c1,...,cd"` or a sum of monomials like `"x^4 - 3x + 1"`.
/// Returned coefficients are constant term first.
pub fn parse_poly(text: &str) -> Result<Vec<BigInt>> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    if !s.contains('x') {
        return s
            .split(',')
            .map(|t| {
                t.parse::<BigInt>()
                    .map_err(|_| Error::Parse(format!("bad coefficient {t:?}")))
            })
            .collect();
    }
    let mut terms: Vec<(usize, BigInt)> = Vec::new();
    let bytes = s.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let mut sign = BigInt::one();
        if bytes[i] == b'+' || bytes[i] == b'-' {
            if bytes[i] == b'-' {
                sign = -sign;
            }
            i += 1;
        } else if i > 0 {
            return Err(Error::Parse(format!("expected + or - at offset {i} in {text:?}")));
        }
        let start = i;
        while i < bytes.len() && bytes[i] != b'+' && bytes[i] != b'-' {
            i += 1;
        }
        let term = &s[start..i];
        if term.is_empty() {
            return Err(Error::Parse(format!("empty term in {text:?}")));
        }
        let (coef, exp) = parse_term(term)?;
        terms.push((exp, sign * coef));
    }
    let deg = terms.iter().map(|t| t.0).max().unwrap_or(0);
    let mut out = vec![BigInt::zero(); deg + 1];
    for (e, c) in terms {
        out[e] += c;
    }
    Ok(out)
}

fn parse_term(term: &str) -> Result<(BigInt, usize)> {
    let bad = || Error::Parse(format!("bad term {term:?}"));
    match term.find('x') {
        None => Ok((term.parse().map_err(|_| bad())?, 0)),
        Some(pos) => {
            let head = term[..pos].trim_end_matches('*');
            let coef = if head.is_empty() {
                BigInt::one()
            } else {
                head.parse().map_err(|_| bad())?
            };
            let tail = &term[pos + 1..];
            let exp = if tail.is_empty() {
                1
            } else {
                tail.strip_prefix('^')
                    .ok_or_else(bad)?
                    .parse()
                    .map_err(|_| bad())?
            };
            Ok((coef, exp))
        }
    }
}

/// Human-readable form, highest degree first.
pub fn format_poly(coeffs: &[BigInt], var: &str) -> String {
    let mut out = String::new();
    for (k, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = c.sign() == Sign::Minus;
        let mag = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mono = match k {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{k}"),
        };
        if k == 0 || !mag.is_one() {
            out.push_str(&mag.to_string());
        }
        out.push_str(&mono);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Searches for a monic integer factor of degree between 1 and `d/2`.
///
/// Candidate degrees are first pruned by the factorization patterns modulo
/// several primes. Remaining degrees are searched exhaustively among monic
/// polynomials whose coefficients respect the Mignotte bound, enumerated as
/// symmetric lifts of products of modular factors when a large enough
/// square-free prime exists, or coefficient by coefficient otherwise.
fn find_factor(f: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
    let d = f.len() - 1;
    if d == 1 {
        return Ok(None);
    }
    if f[0].is_zero() {
        return Ok(Some(vec![BigInt::zero(), BigInt::one()]));
    }
    let mut allowed: BTreeSet<usize> = (1..=d / 2).collect();
    let mut good = 0;
    for p in small_primes(400) {
        let field = PrimeField::new(p);
        let fbar = field.reduce_poly(f);
        if !field.gcd(&fbar, &field.derivative(&fbar)).is_one() {
            continue;
        }
        let degrees: Vec<usize> = field
            .factor(&fbar)
            .iter()
            .map(|(g, _)| g.degree().unwrap())
            .collect();
        let sums = subset_sums(&degrees);
        allowed.retain(|k| sums.contains(k));
        good += 1;
        if allowed.is_empty() || good >= 12 {
            break;
        }
    }
    if allowed.is_empty() {
        return Ok(None);
    }
    let norm2: BigInt = f.iter().map(|c| c * c).sum();
    let root = norm2.sqrt();
    let bound = if &root * &root == norm2 { root } else { root + 1 };
    for k in allowed {
        if let Some(g) = search_degree(f, k, &bound)? {
            return Ok(Some(g));
        }
    }
    Ok(None)
}

fn subset_sums(degrees: &[usize]) -> BTreeSet<usize> {
    let mut sums = BTreeSet::from([0usize]);
    for &g in degrees {
        let shifted: Vec<usize> = sums.iter().map(|s| s + g).collect();
        sums.extend(shifted);
    }
    sums
}

fn binomial(n: usize, k: usize) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i as u64 + 1))
}

fn search_degree(f: &[BigInt], k: usize, norm_bound: &BigInt) -> Result<Option<Vec<BigInt>>> {
    let bounds: Vec<BigInt> = (0..k).map(|j| norm_bound * binomial(k, j)).collect();
    let max_bound = bounds.iter().max().unwrap().clone();
    let span: BigInt = &max_bound * 2 + 1;
    if let Some(limit) = span.to_u64().filter(|&l| l < (1 << 40)) {
        let mut q = limit.max(3);
        for _ in 0..2000 {
            q = next_prime(q);
            let field = PrimeField::new(q);
            let fbar = field.reduce_poly(f);
            if field.gcd(&fbar, &field.derivative(&fbar)).is_one() {
                return Ok(search_by_lifting(f, k, &field, &fbar, &bounds));
            }
            q += 1;
        }
    }
    search_naive(f, k, &bounds)
}

fn next_prime(mut n: u64) -> u64 {
    while !crate::intmath::is_prime(n) {
        n += 1;
    }
    n
}

fn search_by_lifting(
    f: &[BigInt],
    k: usize,
    field: &PrimeField,
    fbar: &FpPoly,
    bounds: &[BigInt],
) -> Option<Vec<BigInt>> {
    let factors: Vec<FpPoly> = field.factor(fbar).into_iter().map(|(g, _)| g).collect();
    let q = field.modulus() as i128;
    let n = factors.len();
    for mask in 1u32..(1 << n) {
        let deg: usize = (0..n)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| factors[i].degree().unwrap())
            .sum();
        if deg != k {
            continue;
        }
        let prod = (0..n)
            .filter(|i| mask >> i & 1 == 1)
            .fold(FpPoly::one(), |acc, i| field.poly_mul(&acc, &factors[i]));
        let cand: Vec<BigInt> = prod
            .coeffs()
            .iter()
            .map(|&c| {
                let c = c as i128;
                BigInt::from(if c > q / 2 { c - q } else { c })
            })
            .collect();
        if cand[..k].iter().zip(bounds).any(|(c, b)| c.abs() > *b) {
            continue;
        }
        if divides_exactly(&cand, f) {
            return Some(cand);
        }
    }
    None
}

fn search_naive(f: &[BigInt], k: usize, bounds: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
    let f0 = f[0].abs();
    let b0 = bounds[0].clone().min(f0.clone());
    let mut consts = Vec::new();
    let mut t = BigInt::one();
    while t <= b0 {
        if (&f0 % &t).is_zero() {
            consts.push(t.clone());
            consts.push(-t.clone());
        }
        t += 1;
    }
    let mut total = consts.len() as u64;
    for b in &bounds[1..] {
        let width: BigInt = b * 2 + 1;
        let width = width.to_u64().unwrap_or(u64::MAX);
        total = total.saturating_mul(width);
    }
    if total > NAIVE_SEARCH_LIMIT {
        return Err(Error::IrreducibilityUndecided(total));
    }
    let mut cand: Vec<BigInt> = vec![BigInt::zero(); k + 1];
    cand[k] = BigInt::one();
    for c0 in consts {
        cand[0] = c0;
        for j in 1..k {
            cand[j] = -bounds[j].clone();
        }
        loop {
            if divides_exactly(&cand, f) {
                return Ok(Some(cand));
            }
            let mut j = 1;
            loop {
                if j >= k {
                    break;
                }
                cand[j] += 1;
                if cand[j] <= bounds[j] {
                    break;
                }
                cand[j] = -bounds[j].clone();
                j += 1;
            }
            if j >= k {
                break;
            }
        }
    }
    Ok(None)
}

/// Whether monic `g` divides `f` in `Z[x]`.
fn divides_exactly(g: &[BigInt], f: &[BigInt]) -> bool {
    let dg = g.len() - 1;
    let mut r = f.to_vec();
    while r.len() > dg {
        let top = r.pop().unwrap();
        if top.is_zero() {
            continue;
        }
        let base = r.len() - dg;
        for i in 0..dg {
            r[base + i] -= &top * &g[i];
        }
    }
    r.iter().all(Zero::is_zero)
}
