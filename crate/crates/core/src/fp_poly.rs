//! Dense polynomials over a prime field and their factorization into monic
//! irreducibles (square-free split, distinct-degree split, equal-degree split).

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Below this field size the equal-degree split enumerates monic divisors
/// instead of drawing random elements.
pub const EXHAUSTIVE_SPLIT_LIMIT: u128 = 10_000;

/// Coefficients are stored constant term first with no trailing zeros, so the
/// zero polynomial is the empty vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FpPoly {
    coeffs: Vec<u64>,
}

impl FpPoly {
    pub fn zero() -> Self {
        FpPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        FpPoly { coeffs: vec![1] }
    }

    /// `x + c`
    pub fn x_plus(c: u64) -> Self {
        FpPoly::from_raw(vec![c, 1])
    }

    /// Builds from coefficients already reduced into `[0, p)`.
    pub fn from_raw(mut coeffs: Vec<u64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        FpPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    fn deg(&self) -> usize {
        self.degree().expect("degree of zero polynomial")
    }

    fn lead(&self) -> u64 {
        *self.coeffs.last().unwrap_or(&0)
    }

    /// Lifts to integer coefficients in `[0, p)`.
    pub fn to_bigints(&self) -> Vec<BigInt> {
        self.coeffs.iter().map(|&c| BigInt::from(c)).collect()
    }

    /// Ordering key: degree first, then coefficients from the constant term up.
    pub fn sort_key(&self) -> (usize, Vec<u64>) {
        (self.coeffs.len(), self.coeffs.clone())
    }
}

/// The field with `p` elements, `p` prime and below 2^63.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Self {
        debug_assert!(p >= 2);
        PrimeField { p }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn reduce_big(&self, c: &BigInt) -> u64 {
        c.mod_floor(&BigInt::from(self.p))
            .to_u64()
            .expect("residue fits in u64")
    }

    pub fn reduce_poly(&self, coeffs: &[BigInt]) -> FpPoly {
        FpPoly::from_raw(coeffs.iter().map(|c| self.reduce_big(c)).collect())
    }

    fn add(&self, a: u64, b: u64) -> u64 {
        ((a as u128 + b as u128) % self.p as u128) as u64
    }

    fn sub(&self, a: u64, b: u64) -> u64 {
        ((a as u128 + self.p as u128 - b as u128) % self.p as u128) as u64
    }

    fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64 % self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    fn inv(&self, a: u64) -> u64 {
        debug_assert!(!a.is_multiple_of(self.p));
        self.pow(a, self.p - 2)
    }

    pub fn poly_add(&self, a: &FpPoly, b: &FpPoly) -> FpPoly {
        let n = a.coeffs.len().max(b.coeffs.len());
        let out = (0..n)
            .map(|i| {
                let x = a.coeffs.get(i).copied().unwrap_or(0);
                let y = b.coeffs.get(i).copied().unwrap_or(0);
                self.add(x, y)
            })
            .collect();
        FpPoly::from_raw(out)
    }

    pub fn poly_sub(&self, a: &FpPoly, b: &FpPoly) -> FpPoly {
        let n = a.coeffs.len().max(b.coeffs.len());
        let out = (0..n)
            .map(|i| {
                let x = a.coeffs.get(i).copied().unwrap_or(0);
                let y = b.coeffs.get(i).copied().unwrap_or(0);
                self.sub(x, y)
            })
            .collect();
        FpPoly::from_raw(out)
    }

    pub fn poly_mul(&self, a: &FpPoly, b: &FpPoly) -> FpPoly {
        if a.is_zero() || b.is_zero() {
            return FpPoly::zero();
        }
        let mut out = vec![0u64; a.coeffs.len() + b.coeffs.len() - 1];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                out[i + j] = self.add(out[i + j], self.mul(x, y));
            }
        }
        FpPoly::from_raw(out)
    }

    pub fn poly_pow(&self, a: &FpPoly, exp: u32) -> FpPoly {
        (0..exp).fold(FpPoly::one(), |acc, _| self.poly_mul(&acc, a))
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn divrem(&self, a: &FpPoly, b: &FpPoly) -> (FpPoly, FpPoly) {
        assert!(!b.is_zero(), "polynomial division by zero");
        let db = b.deg();
        if a.coeffs.len() < b.coeffs.len() {
            return (FpPoly::zero(), a.clone());
        }
        let inv_lead = self.inv(b.lead());
        let mut rem = a.coeffs.clone();
        let mut quot = vec![0u64; a.coeffs.len() - db];
        for k in (0..quot.len()).rev() {
            let c = self.mul(rem[k + db], inv_lead);
            quot[k] = c;
            if c == 0 {
                continue;
            }
            for (j, &bj) in b.coeffs.iter().enumerate() {
                rem[k + j] = self.sub(rem[k + j], self.mul(c, bj));
            }
        }
        rem.truncate(db);
        (FpPoly::from_raw(quot), FpPoly::from_raw(rem))
    }

    pub fn rem(&self, a: &FpPoly, b: &FpPoly) -> FpPoly {
        self.divrem(a, b).1
    }

    pub fn divides(&self, d: &FpPoly, a: &FpPoly) -> bool {
        self.rem(a, d).is_zero()
    }

    /// Exact quotient; debug-asserts a zero remainder.
    pub fn div_exact(&self, a: &FpPoly, b: &FpPoly) -> FpPoly {
        let (q, r) = self.divrem(a, b);
        debug_assert!(r.is_zero());
        q
    }

    pub fn monic(&self, a: &FpPoly) -> FpPoly {
        if a.is_zero() {
            return FpPoly::zero();
        }
        let inv = self.inv(a.lead());
        FpPoly::from_raw(a.coeffs.iter().map(|&c| self.mul(c, inv)).collect())
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    pub fn gcd(&self, a: &FpPoly, b: &FpPoly) -> FpPoly {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let r = self.rem(&x, &y);
            x = y;
            y = r;
        }
        self.monic(&x)
    }

    pub fn derivative(&self, a: &FpPoly) -> FpPoly {
        let out = a
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| self.mul(c, (i as u64) % self.p))
            .collect();
        FpPoly::from_raw(out)
    }

    /// `base^exp mod modulus`.
    pub fn powmod(&self, base: &FpPoly, exp: &BigUint, modulus: &FpPoly) -> FpPoly {
        let mut acc = self.rem(&FpPoly::one(), modulus);
        let base = self.rem(base, modulus);
        for i in (0..exp.bits()).rev() {
            acc = self.rem(&self.poly_mul(&acc, &acc), modulus);
            if exp.bit(i) {
                acc = self.rem(&self.poly_mul(&acc, &base), modulus);
            }
        }
        acc
    }

    /// For `a` with zero derivative, returns `b` with `b^p = a`.
    fn pth_root(&self, a: &FpPoly) -> FpPoly {
        let p = self.p as usize;
        FpPoly::from_raw(a.coeffs.iter().step_by(p).copied().collect())
    }

    /// Square-free decomposition of a monic polynomial: pairs `(g, m)` with
    /// `a = prod g^m` and each `g` square-free, monic, pairwise coprime.
    pub fn squarefree_decomposition(&self, a: &FpPoly) -> Vec<(FpPoly, u32)> {
        let mut out = Vec::new();
        if a.degree().unwrap_or(0) == 0 {
            return out;
        }
        let a = self.monic(a);
        let mut c = self.gcd(&a, &self.derivative(&a));
        let mut w = self.div_exact(&a, &c);
        let mut i = 1u32;
        while !w.is_one() {
            let y = self.gcd(&w, &c);
            let z = self.div_exact(&w, &y);
            if !z.is_one() {
                out.push((z, i));
            }
            i += 1;
            w = y;
            c = self.div_exact(&c, &w);
        }
        if !c.is_one() {
            let root = self.pth_root(&c);
            let p = self.p as u32;
            out.extend(
                self.squarefree_decomposition(&root)
                    .into_iter()
                    .map(|(g, m)| (g, m * p)),
            );
        }
        out
    }

    /// Splits a square-free monic polynomial into products of irreducibles
    /// of equal degree: pairs `(product, degree)`.
    pub fn distinct_degree(&self, a: &FpPoly) -> Vec<(FpPoly, usize)> {
        let mut out = Vec::new();
        let mut rest = self.monic(a);
        let x = FpPoly::x_plus(0);
        let p = BigUint::from(self.p);
        let mut h = x.clone();
        let mut k = 1;
        while rest.degree().unwrap_or(0) >= 2 * k {
            h = self.powmod(&h, &p, &rest);
            let g = self.gcd(&rest, &self.poly_sub(&h, &x));
            if !g.is_one() {
                rest = self.div_exact(&rest, &g);
                h = self.rem(&h, &rest);
                out.push((g, k));
            }
            k += 1;
        }
        if rest.degree().unwrap_or(0) > 0 {
            let d = rest.deg();
            out.push((rest, d));
        }
        out
    }

    /// Splits a product of distinct monic irreducibles of degree `k`.
    pub fn equal_degree(&self, a: &FpPoly, k: usize) -> Vec<FpPoly> {
        let a = self.monic(a);
        let n = a.deg();
        debug_assert_eq!(n % k, 0);
        if n == k {
            return vec![a];
        }
        let field_size = (self.p as u128).checked_pow(k as u32);
        match field_size {
            Some(q) if q < EXHAUSTIVE_SPLIT_LIMIT => self.split_exhaustive(&a, k),
            _ => {
                let mut rng = ChaCha8Rng::seed_from_u64(self.p ^ ((n as u64) << 56));
                let mut out = Vec::new();
                self.split_random(&a, k, &mut rng, &mut out);
                out
            }
        }
    }

    fn split_exhaustive(&self, a: &FpPoly, k: usize) -> Vec<FpPoly> {
        let count = a.deg() / k;
        let mut out = Vec::with_capacity(count);
        let mut digits = vec![0u64; k];
        loop {
            let mut coeffs = digits.clone();
            coeffs.push(1);
            let cand = FpPoly::from_raw(coeffs);
            if self.divides(&cand, a) {
                out.push(cand);
                if out.len() == count {
                    return out;
                }
            }
            // odometer over the k lower coefficients
            let mut i = 0;
            loop {
                if i == k {
                    unreachable!("exhaustive split missed a factor");
                }
                digits[i] += 1;
                if digits[i] < self.p {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
        }
    }

    fn split_random(&self, a: &FpPoly, k: usize, rng: &mut ChaCha8Rng, out: &mut Vec<FpPoly>) {
        let n = a.deg();
        if n == k {
            out.push(a.clone());
            return;
        }
        loop {
            let r = FpPoly::from_raw((0..n).map(|_| rng.gen_range(0..self.p)).collect());
            if r.degree().unwrap_or(0) == 0 {
                continue;
            }
            let t = if self.p == 2 {
                // absolute trace to F_2
                let mut acc = self.rem(&r, a);
                let mut pw = acc.clone();
                for _ in 1..k {
                    pw = self.rem(&self.poly_mul(&pw, &pw), a);
                    acc = self.poly_add(&acc, &pw);
                }
                acc
            } else {
                let q = BigUint::from(self.p).pow(k as u32);
                let e = (q - 1u32) / 2u32;
                let s = self.powmod(&r, &e, a);
                self.poly_sub(&s, &FpPoly::one())
            };
            let g = self.gcd(a, &t);
            let dg = g.degree().unwrap_or(0);
            if dg > 0 && dg < n {
                let h = self.div_exact(a, &g);
                self.split_random(&g, k, rng, out);
                self.split_random(&h, k, rng, out);
                return;
            }
        }
    }

    /// Full factorization of a nonzero polynomial into monic irreducibles with
    /// multiplicities, sorted by (degree, coefficients from the constant term).
    pub fn factor(&self, a: &FpPoly) -> Vec<(FpPoly, u32)> {
        let mut out = Vec::new();
        for (sq, mult) in self.squarefree_decomposition(a) {
            for (prod, k) in self.distinct_degree(&sq) {
                for g in self.equal_degree(&prod, k) {
                    out.push((g, mult));
                }
            }
        }
        out.sort_by_key(|x| x.0.sort_key());
        out
    }

    pub fn is_irreducible(&self, a: &FpPoly) -> bool {
        let f = self.factor(a);
        f.len() == 1 && f[0].1 == 1
    }
}

impl Default for FpPoly {
    fn default() -> Self {
        FpPoly::zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[u64]) -> FpPoly {
        FpPoly::from_raw(c.to_vec())
    }

    fn expand(field: &PrimeField, factors: &[(FpPoly, u32)]) -> FpPoly {
        factors.iter().fold(FpPoly::one(), |acc, (g, m)| {
            field.poly_mul(&acc, &field.poly_pow(g, *m))
        })
    }

    #[test]
    fn x2_plus_1_mod_2_is_square() {
        let f2 = PrimeField::new(2);
        let fac = f2.factor(&poly(&[1, 0, 1]));
        assert_eq!(fac, vec![(poly(&[1, 1]), 2)]);
    }

    #[test]
    fn x2_plus_1_mod_5_splits() {
        let f5 = PrimeField::new(5);
        let fac = f5.factor(&poly(&[1, 0, 1]));
        assert_eq!(fac, vec![(poly(&[2, 1]), 1), (poly(&[3, 1]), 1)]);
    }

    #[test]
    fn x2_plus_1_mod_3_is_irreducible() {
        let f3 = PrimeField::new(3);
        assert!(f3.is_irreducible(&poly(&[1, 0, 1])));
    }

    #[test]
    fn pth_power_input() {
        // (x + 1)^4 mod 2 = x^4 + 1
        let f2 = PrimeField::new(2);
        assert_eq!(f2.factor(&poly(&[1, 0, 0, 0, 1])), vec![(poly(&[1, 1]), 4)]);
        // x^3 - 1 = (x - 1)^3 mod 3 via x^3 + 2
        let f3 = PrimeField::new(3);
        assert_eq!(f3.factor(&poly(&[2, 0, 0, 1])), vec![(poly(&[2, 1]), 3)]);
    }

    #[test]
    fn random_split_for_large_prime() {
        // x^4 + 1 over F_p with p = 1_000_003 (p = 3 mod 8): splits into two quadratics
        let p = 1_000_003u64;
        let f = PrimeField::new(p);
        let a = poly(&[1, 0, 0, 0, 1]);
        let fac = f.factor(&a);
        assert_eq!(expand(&f, &fac), a);
        assert!(fac.iter().all(|(g, m)| *m == 1 && f.is_irreducible(g)));
        assert_eq!(fac.len(), 2);
        assert!(fac.iter().all(|(g, _)| g.degree() == Some(2)));
    }

    #[test]
    fn random_and_exhaustive_agree() {
        // product of all monic linear polys over F_101 minus a few: use x^101 - x
        // restricted: (x-1)(x-2)(x-3)(x-5)
        let p = 101u64;
        let f = PrimeField::new(p);
        let a = [1u64, 2, 3, 5]
            .iter()
            .fold(FpPoly::one(), |acc, &r| f.poly_mul(&acc, &poly(&[p - r, 1])));
        let exhaustive = f.split_exhaustive(&a, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut random = Vec::new();
        f.split_random(&a, 1, &mut rng, &mut random);
        let key = |v: &mut Vec<FpPoly>| v.sort_by_key(|g| g.sort_key());
        let (mut e, mut r) = (exhaustive, random);
        key(&mut e);
        key(&mut r);
        assert_eq!(e, r);
    }

    #[test]
    fn trace_split_in_characteristic_two() {
        // x^4 + x + 1 and x^4 + x^3 + 1 are irreducible over F_2
        let f2 = PrimeField::new(2);
        let a = poly(&[1, 1, 0, 0, 1]);
        let b = poly(&[1, 0, 0, 1, 1]);
        let prod = f2.poly_mul(&a, &b);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut out = Vec::new();
        f2.split_random(&prod, 4, &mut rng, &mut out);
        out.sort_by_key(|g| g.sort_key());
        let mut want = vec![a, b];
        want.sort_by_key(|g| g.sort_key());
        assert_eq!(out, want);
    }
}
