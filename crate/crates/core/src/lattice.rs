//! Full-rank integer lattices in `Z^d` in row Hermite normal form.
//!
//! Basis rows are upper triangular with positive pivots, and every entry
//! above a pivot lies in `[0, pivot)`. Canonical representatives of `Z^d / L`
//! are then the vectors with `0 ≤ v_i < pivot_i`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    rows: Vec<Vec<BigInt>>,
}

impl Lattice {
    /// HNF of the lattice spanned by `gens` in `Z^d`.
    ///
    /// When `multiple` is given it must be a positive integer `D` with
    /// `D·Z^d ⊂ L`; the reduction then works modulo `D` and also adds the
    /// vectors `D·e_j` as generators.
    pub fn from_generators(gens: Vec<Vec<BigInt>>, d: usize, multiple: Option<&BigInt>) -> Result<Self> {
        let rows = hnf(gens, d, multiple)?;
        Ok(Lattice { rows })
    }

    /// The whole of `Z^d`.
    pub fn full(d: usize) -> Self {
        let rows = (0..d)
            .map(|i| (0..d).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
            .collect();
        Lattice { rows }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn diag(&self) -> Vec<BigInt> {
        (0..self.dim()).map(|i| self.rows[i][i].clone()).collect()
    }

    /// `[Z^d : L]`.
    pub fn index(&self) -> BigInt {
        self.diag().iter().product()
    }

    /// Canonical representative of `v + L`.
    pub fn reduce(&self, v: &[BigInt]) -> Vec<BigInt> {
        let mut v = v.to_vec();
        for (i, row) in self.rows.iter().enumerate() {
            let q = v[i].div_floor(&row[i]);
            if q.is_zero() {
                continue;
            }
            for j in i..v.len() {
                v[j] -= &q * &row[j];
            }
        }
        v
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    /// Whether `other ⊂ self`.
    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        other.rows.iter().all(|r| self.contains(r))
    }
}

/// Row HNF over the first `d` columns. Rows may carry extra trailing columns,
/// which are transformed along (used to record unimodular transforms).
fn hnf(mut rows: Vec<Vec<BigInt>>, d: usize, multiple: Option<&BigInt>) -> Result<Vec<Vec<BigInt>>> {
    if let Some(m) = multiple {
        for row in rows.iter_mut() {
            for x in row.iter_mut().take(d) {
                *x = x.mod_floor(m);
            }
        }
    }
    let width = rows.first().map_or(d, Vec::len);
    let mut r = 0;
    for col in 0..d {
        if let Some(m) = multiple {
            let mut extra = vec![BigInt::zero(); width];
            extra[col] = m.clone();
            rows.push(extra);
        }
        loop {
            let pick = (r..rows.len())
                .filter(|&i| !rows[i][col].is_zero())
                .min_by(|&a, &b| rows[a][col].abs().cmp(&rows[b][col].abs()));
            let Some(pick) = pick else {
                return Err(Error::RankDeficient);
            };
            rows.swap(r, pick);
            let mut done = true;
            for i in r + 1..rows.len() {
                if rows[i][col].is_zero() {
                    continue;
                }
                let q = rows[i][col].div_floor(&rows[r][col]);
                let (head, tail) = rows.split_at_mut(i);
                let pivot = &head[r];
                for (x, y) in tail[0].iter_mut().zip(pivot) {
                    *x -= &q * y;
                }
                if !tail[0][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if rows[r][col].is_negative() {
            for x in rows[r].iter_mut() {
                *x = -&*x;
            }
        }
        if let Some(m) = multiple {
            for row in rows.iter_mut() {
                for x in row.iter_mut().take(d).skip(col + 1) {
                    *x = x.mod_floor(m);
                }
            }
        }
        for i in 0..r {
            let q = rows[i][col].div_floor(&rows[r][col]);
            if q.is_zero() {
                continue;
            }
            let (head, tail) = rows.split_at_mut(r);
            for (x, y) in head[i].iter_mut().zip(&tail[0]) {
                *x -= &q * y;
            }
        }
        r += 1;
        rows.retain_mut_from(r);
    }
    rows.truncate(d);
    Ok(rows)
}

trait RetainFrom {
    fn retain_mut_from(&mut self, start: usize);
}

impl RetainFrom for Vec<Vec<BigInt>> {
    /// Drops rows past `start` that have become zero in every column.
    fn retain_mut_from(&mut self, start: usize) {
        let mut i = start;
        while i < self.len() {
            if self[i].iter().all(Zero::is_zero) {
                self.swap_remove(i);
            } else {
                i += 1;
            }
        }
    }
}

/// Solves `Σ c_i · gens_i = target` over the integers when `gens` span
/// `Z^d`; returns the coefficient vector.
pub fn express_in_spanning_set(gens: &[Vec<BigInt>], target_unit: usize, d: usize) -> Result<Vec<BigInt>> {
    let n = gens.len();
    let rows: Vec<Vec<BigInt>> = gens
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let mut row = g.clone();
            row.extend((0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
            row
        })
        .collect();
    let h = hnf(rows, d, None)?;
    for (i, row) in h.iter().enumerate() {
        if !row[i].is_one() {
            return Err(Error::RankDeficient);
        }
    }
    Ok(h[target_unit][d..].to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: &[i64]) -> Vec<BigInt> {
        c.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn hnf_of_small_lattice() {
        // span{(2, 1), (0, 2)}: index 4
        let l = Lattice::from_generators(vec![v(&[2, 1]), v(&[0, 2])], 2, None).unwrap();
        assert_eq!(l.index(), BigInt::from(4));
        assert!(l.contains(&v(&[2, 3])));
        assert!(!l.contains(&v(&[1, 0])));
        let m = Lattice::from_generators(vec![v(&[4, 2]), v(&[2, 5]), v(&[0, 4])], 2, Some(&BigInt::from(4))).unwrap();
        assert_eq!(m, l);
    }

    #[test]
    fn reduce_is_canonical() {
        let l = Lattice::from_generators(vec![v(&[3, 1, 0]), v(&[0, 5, 2]), v(&[1, 1, 7])], 3, None).unwrap();
        let a = l.reduce(&v(&[10, -4, 9]));
        let shifted: Vec<BigInt> = v(&[10, -4, 9])
            .iter()
            .zip(&v(&[3, 1, 0]))
            .map(|(x, y)| x + y * 7)
            .collect();
        assert_eq!(a, l.reduce(&shifted));
        for (x, p) in a.iter().zip(l.diag()) {
            assert!(!x.is_negative() && *x < p);
        }
    }

    #[test]
    fn rank_deficient() {
        assert_eq!(
            Lattice::from_generators(vec![v(&[1, 1]), v(&[2, 2])], 2, None),
            Err(Error::RankDeficient)
        );
    }

    #[test]
    fn spanning_set_solution() {
        let gens = vec![v(&[3, 0]), v(&[0, 3]), v(&[2, 1]), v(&[1, 1])];
        let c = express_in_spanning_set(&gens, 0, 2).unwrap();
        let mut acc = v(&[0, 0]);
        for (ci, g) in c.iter().zip(&gens) {
            for k in 0..2 {
                acc[k] += ci * &g[k];
            }
        }
        assert_eq!(acc, v(&[1, 0]));
    }
}
