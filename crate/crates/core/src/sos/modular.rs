//! Linear algebra over the prime field `F_p`, `p = 2^61 - 1`.
//!
//! Ranks computed here are lower bounds for ranks over the rationals of the
//! same integer matrices (a minor that is nonzero mod p is nonzero), which
//! is what the face and span certificates rely on.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::algebra::Rational;

pub const PRIME: u64 = (1 << 61) - 1;

pub fn add(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= PRIME {
        s - PRIME
    } else {
        s
    }
}

pub fn sub(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + PRIME - b
    }
}

pub fn mul(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PRIME as u128) as u64
}

pub fn pow(mut a: u64, mut e: u64) -> u64 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(acc, a);
        }
        a = mul(a, a);
        e >>= 1;
    }
    acc
}

pub fn inv(a: u64) -> u64 {
    debug_assert!(a != 0);
    pow(a, PRIME - 2)
}

pub fn reduce_int(n: &BigInt) -> u64 {
    n.mod_floor(&BigInt::from(PRIME))
        .to_u64()
        .expect("residue fits in u64")
}

/// Residue of a rational; `None` when the denominator is divisible by p.
pub fn reduce(q: &Rational) -> Option<u64> {
    let d = reduce_int(q.denom());
    (d != 0).then(|| mul(reduce_int(q.numer()), inv(d)))
}

/// Reduced row echelon basis over `F_p`, built one vector at a time.
#[derive(Clone, Debug)]
pub struct ModEchelon {
    ambient: usize,
    rows: Vec<(usize, Vec<u64>)>,
}

impl ModEchelon {
    pub fn new(ambient: usize) -> Self {
        ModEchelon {
            ambient,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the current rows, returning the remainder.
    pub fn reduce(&self, mut v: Vec<u64>) -> Vec<u64> {
        for (p, row) in &self.rows {
            let f = v[*p];
            if f == 0 {
                continue;
            }
            for (x, &y) in v.iter_mut().zip(row) {
                if y != 0 {
                    *x = sub(*x, mul(f, y));
                }
            }
        }
        v
    }

    /// Adds `v`; returns false if it was already in the span.
    pub fn insert(&mut self, v: Vec<u64>) -> bool {
        let mut v = self.reduce(v);
        let Some(pivot) = v.iter().position(|&c| c != 0) else {
            return false;
        };
        let s = inv(v[pivot]);
        for x in v.iter_mut() {
            *x = mul(*x, s);
        }
        for (_, row) in self.rows.iter_mut() {
            let f = row[pivot];
            if f == 0 {
                continue;
            }
            for (x, &y) in row.iter_mut().zip(&v) {
                if y != 0 {
                    *x = sub(*x, mul(f, y));
                }
            }
        }
        self.rows.push((pivot, v));
        true
    }

    /// Basis of the vectors orthogonal (under the plain dot product) to the
    /// span.
    pub fn kernel(&self) -> Vec<Vec<u64>> {
        let mut is_pivot = vec![false; self.ambient];
        for (p, _) in &self.rows {
            is_pivot[*p] = true;
        }
        (0..self.ambient)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![0; self.ambient];
                v[free] = 1;
                for (p, row) in &self.rows {
                    v[*p] = sub(0, row[free]);
                }
                v
            })
            .collect()
    }

    /// A vector annihilating every row whose dot product with `target` is
    /// nonzero, if `target` lies outside the span.
    pub fn separating_functional(&self, target: &[u64]) -> Option<Vec<u64>> {
        let rem = self.reduce(target.to_vec());
        let j = rem.iter().position(|&c| c != 0)?;
        // j is not a pivot column: the remainder vanishes on pivots
        let mut ell = vec![0; self.ambient];
        ell[j] = 1;
        for (p, row) in &self.rows {
            ell[*p] = sub(0, row[j]);
        }
        Some(ell)
    }
}

pub fn dot(a: &[u64], b: &[u64]) -> u64 {
    a.iter().zip(b).fold(0, |acc, (&x, &y)| add(acc, mul(x, y)))
}
