//! Exact rational matrices with fraction-free rank computation.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::scalar::Rational;

/// Sparse-row rational matrix. Rows hold only nonzero entries.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<BTreeMap<usize, Rational>>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![BTreeMap::new(); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::new(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_dense(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = Matrix::new(r, c);
        for (i, row) in rows.into_iter().enumerate() {
            assert_eq!(row.len(), c);
            for (j, v) in row.into_iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        assert!(r < self.rows && c < self.cols);
        if v.is_zero() {
            self.data[r].remove(&c);
        } else {
            self.data[r].insert(c, v);
        }
    }

    pub fn get(&self, r: usize, c: usize) -> Rational {
        self.data[r].get(&c).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(|r| r.len()).sum()
    }

    /// Rows as dense vectors.
    pub fn dense_rows(&self) -> Vec<Vec<Rational>> {
        self.data
            .iter()
            .map(|row| {
                let mut v = vec![Rational::zero(); self.cols];
                for (&c, q) in row {
                    v[c] = q.clone();
                }
                v
            })
            .collect()
    }

    /// Rank over Q by fraction-free (Bareiss) elimination on the
    /// denominator-cleared integer rows. Division by the previous pivot is
    /// exact at every step.
    pub fn rank(&self) -> usize {
        let mut active: Vec<BTreeMap<usize, BigInt>> = self
            .data
            .iter()
            .filter(|row| !row.is_empty())
            .map(clear_denominators)
            .collect();

        let mut rank = 0;
        let mut prev = BigInt::one();
        while !active.is_empty() {
            let Some(col) = active.iter().filter_map(|r| r.keys().next()).min().copied() else {
                break;
            };
            let pos = active
                .iter()
                .position(|r| r.contains_key(&col))
                .expect("pivot column present");
            let pivot_row = active.remove(pos);
            let pivot = pivot_row[&col].clone();
            rank += 1;

            for row in active.iter_mut() {
                let q = row.remove(&col).unwrap_or_else(BigInt::zero);
                let mut updated = BTreeMap::new();
                let keys: Vec<usize> = row
                    .keys()
                    .chain(pivot_row.keys())
                    .copied()
                    .filter(|&k| k != col)
                    .collect();
                for k in keys {
                    if updated.contains_key(&k) {
                        continue;
                    }
                    let a = row.get(&k).cloned().unwrap_or_else(BigInt::zero);
                    let b = pivot_row.get(&k).cloned().unwrap_or_else(BigInt::zero);
                    let num = &pivot * a - &q * b;
                    let (quot, rem) = num.div_rem(&prev);
                    debug_assert!(rem.is_zero(), "fraction-free division must be exact");
                    if !quot.is_zero() {
                        updated.insert(k, quot);
                    }
                }
                *row = updated;
            }
            active.retain(|r| !r.is_empty());
            prev = pivot;
        }
        rank
    }
}

fn clear_denominators(row: &BTreeMap<usize, Rational>) -> BTreeMap<usize, BigInt> {
    let mut lcm = BigInt::one();
    for v in row.values() {
        lcm = lcm.lcm(v.denom());
    }
    let mut gcd = BigInt::zero();
    let scaled: Vec<(usize, BigInt)> = row
        .iter()
        .map(|(&c, v)| (c, v.numer() * (&lcm / v.denom())))
        .collect();
    for (_, n) in &scaled {
        gcd = gcd.gcd(n);
    }
    if gcd.is_zero() {
        gcd = BigInt::one();
    }
    scaled
        .into_iter()
        .map(|(c, n)| (c, n / &gcd))
        .filter(|(_, n)| !n.is_zero())
        .collect()
}

/// Rank over Q via fraction-free elimination.
pub fn matrix_rank(m: &Matrix) -> usize {
    m.rank()
}
