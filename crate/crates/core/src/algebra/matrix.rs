use std::collections::HashMap;

use num_traits::{Signed, Zero};

use super::{Rational, Ring};
use crate::error::{usage, Result};

/// Dense row-major matrix over an exact ring.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Clone> ExactMatrix<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return usage("ragged matrix rows");
        }
        Ok(ExactMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        ExactMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        ExactMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        ExactMatrix::from_fn(rows.len(), cols.len(), |i, j| {
            self.get(rows[i], cols[j]).clone()
        })
    }

    pub fn map<U: Clone>(&self, f: impl Fn(&T) -> U) -> ExactMatrix<U> {
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }
}

impl<T: Ring> ExactMatrix<T> {
    /// Division-free determinant by expansion over column subsets.
    ///
    /// Minors of the leading rows are memoized by their column set, so the
    /// cost is `O(n 2^n)` ring operations instead of `n!`. Suitable for any
    /// commutative ring and intended for n <= 7 with polynomial entries.
    pub fn determinant_by_minors(&self) -> Result<T> {
        if !self.is_square() {
            return usage(format!(
                "determinant of non-square {}x{} matrix",
                self.rows, self.cols
            ));
        }
        let n = self.rows;
        if n == 0 {
            return usage("determinant of empty matrix");
        }
        if n > 20 {
            return usage("minor expansion limited to 20x20");
        }
        // layer[mask] = minor on rows 0..popcount(mask), columns in mask
        let mut layer: HashMap<u32, T> = HashMap::new();
        layer.insert(0, self.get(0, 0).one_like());
        for row in 0..n {
            let mut next: HashMap<u32, T> = HashMap::new();
            for (mask, minor) in &layer {
                if minor.is_zero_elem() {
                    continue;
                }
                for col in 0..n {
                    if mask & (1 << col) != 0 {
                        continue;
                    }
                    let entry = self.get(row, col);
                    if entry.is_zero_elem() {
                        continue;
                    }
                    // sign from the number of chosen columns to the right of col
                    let above = (mask >> col).count_ones();
                    let term = minor.times(entry);
                    let term = if above % 2 == 1 { term.negated() } else { term };
                    let key = mask | (1 << col);
                    match next.get_mut(&key) {
                        Some(acc) => *acc = acc.plus(&term),
                        None => {
                            next.insert(key, term);
                        }
                    }
                }
            }
            layer = next;
        }
        let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
        Ok(layer
            .remove(&full)
            .unwrap_or_else(|| self.get(0, 0).zero_like()))
    }
}

impl ExactMatrix<Rational> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix::from_fn(rows, cols, |_, _| Rational::zero())
    }

    pub fn identity(n: usize) -> Self {
        ExactMatrix::from_fn(n, n, |i, j| {
            if i == j {
                Rational::from_integer(1.into())
            } else {
                Rational::zero()
            }
        })
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return usage("matrix-vector length mismatch");
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect())
    }

    /// Determinant by Bareiss elimination with row pivoting.
    pub fn determinant(&self) -> Result<Rational> {
        if !self.is_square() {
            return usage(format!(
                "determinant of non-square {}x{} matrix",
                self.rows, self.cols
            ));
        }
        let n = self.rows;
        if n == 0 {
            return usage("determinant of empty matrix");
        }
        let mut a: Vec<Vec<Rational>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut sign_flip = false;
        let mut prev = Rational::from_integer(1.into());
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(p) => {
                        a.swap(k, p);
                        sign_flip = !sign_flip;
                    }
                    None => return Ok(Rational::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                    a[i][j] = v;
                }
                a[i][k] = Rational::zero();
            }
            prev = a[k][k].clone();
        }
        let det = a[n - 1][n - 1].clone();
        Ok(if sign_flip { -det } else { det })
    }

    /// Reduced row echelon form; returns the matrix and its pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut a: Vec<Vec<Rational>> = (0..self.rows).map(|i| self.row(i).to_vec()).collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            a.swap(r, p);
            let inv = a[r][c].recip();
            for x in a[r].iter_mut().skip(c) {
                *x *= &inv;
            }
            let pivot_row = a[r].clone();
            for (i, row) in a.iter_mut().enumerate() {
                if i == r || row[c].is_zero() {
                    continue;
                }
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row).skip(c) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        let m = ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            data: a.into_iter().flatten().collect(),
        };
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right null space, one vector per non-pivot column.
    pub fn kernel(&self) -> Vec<Vec<Rational>> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![Rational::zero(); self.cols];
                v[free] = Rational::from_integer(1.into());
                for (row, &p) in pivots.iter().enumerate() {
                    v[p] = -r.get(row, free);
                }
                v
            })
            .collect()
    }

    /// Exact LDL^T with symmetric diagonal pivoting. Returns `None` when the
    /// matrix is not positive semidefinite (or not symmetric).
    pub fn psd_factor(&self) -> Option<SymmetricFactor> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        for i in 0..n {
            for j in 0..i {
                if self.get(i, j) != self.get(j, i) {
                    return None;
                }
            }
        }
        let mut a: Vec<Vec<Rational>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut active: Vec<usize> = (0..n).collect();
        let mut factor = SymmetricFactor {
            weights: Vec::new(),
            vectors: Vec::new(),
        };
        loop {
            if active.iter().any(|&i| a[i][i].is_negative()) {
                return None;
            }
            let pivot = active.iter().copied().find(|&i| !a[i][i].is_zero());
            let Some(p) = pivot else {
                // zero diagonal: PSD only if the remaining block vanishes
                let clean = active
                    .iter()
                    .all(|&i| active.iter().all(|&j| a[i][j].is_zero()));
                return clean.then_some(factor);
            };
            let d = a[p][p].clone();
            let mut l = vec![Rational::zero(); n];
            for &i in &active {
                l[i] = &a[i][p] / &d;
            }
            for &i in &active {
                if l[i].is_zero() {
                    continue;
                }
                for &j in &active {
                    if l[j].is_zero() {
                        continue;
                    }
                    let v = &l[i] * &l[j] * &d;
                    a[i][j] -= v;
                }
            }
            active.retain(|&i| i != p);
            factor.weights.push(d);
            factor.vectors.push(l);
        }
    }

    pub fn is_psd(&self) -> bool {
        self.psd_factor().is_some()
    }

    pub fn to_f64(&self) -> nalgebra::DMatrix<f64> {
        use num_traits::ToPrimitive;
        nalgebra::DMatrix::from_fn(self.rows, self.cols, |i, j| {
            self.get(i, j).to_f64().unwrap_or(f64::NAN)
        })
    }
}

/// `M = sum_k weights[k] * vectors[k] vectors[k]^T` with positive weights.
#[derive(Clone, Debug)]
pub struct SymmetricFactor {
    pub weights: Vec<Rational>,
    pub vectors: Vec<Vec<Rational>>,
}

impl SymmetricFactor {
    pub fn rank(&self) -> usize {
        self.weights.len()
    }
}

/// Right null space of an integer matrix by fraction-free Gauss-Jordan
/// elimination. Returned vectors are integral and primitive.
pub fn integer_kernel(
    rows: &[Vec<num_bigint::BigInt>],
    cols: usize,
) -> Vec<Vec<num_bigint::BigInt>> {
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_traits::One;

    let mut a: Vec<Vec<BigInt>> = rows.to_vec();
    let nrows = a.len();
    let mut prev = BigInt::one();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let (before, rest) = a.split_at_mut(r);
        let (pivot_row, after) = rest.split_first_mut().expect("row r exists");
        let pv = pivot_row[c].clone();
        for row in before.iter_mut().chain(after.iter_mut()) {
            let f = row[c].clone();
            for j in 0..cols {
                if j == c {
                    continue;
                }
                let mut v = &pv * &row[j];
                if !f.is_zero() && !pivot_row[j].is_zero() {
                    v -= &f * &pivot_row[j];
                }
                row[j] = if prev.is_one() { v } else { v.div_floor(&prev) };
            }
            row[c] = BigInt::zero();
        }
        prev = pv;
        pivots.push(c);
        r += 1;
    }
    let mut is_pivot = vec![false; cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    // every pivot entry now equals `prev`
    (0..cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![BigInt::zero(); cols];
            v[free] = prev.clone();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -&a[row][free];
            }
            let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
            if !g.is_zero() && !g.is_one() {
                for x in v.iter_mut() {
                    *x = x.div_floor(&g);
                }
            }
            v
        })
        .collect()
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

/// Fraction-free (Bareiss) determinant of a square integer matrix.
pub fn integer_determinant(m: &[Vec<num_bigint::BigInt>]) -> num_bigint::BigInt {
    use num_bigint::BigInt;
    use num_traits::One;
    let n = m.len();
    let mut a = m.to_vec();
    let mut prev = BigInt::one();
    let mut sign = 1;
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return BigInt::zero();
        };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[k][k] * &a[i][j] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    if sign < 0 {
        -prev
    } else {
        prev
    }
}

impl ExactMatrix<Rational> {
    /// Row and column index sets of the first nonzero `k x k` minor, in
    /// lexicographic order of (rows, cols).
    pub fn nonzero_minor(&self, k: usize) -> Option<(Vec<usize>, Vec<usize>)> {
        use num_integer::Integer;
        if k > self.rows || k > self.cols {
            return None;
        }
        // scaling every entry by a common denominator preserves which
        // minors vanish
        let l = self
            .data
            .iter()
            .fold(num_bigint::BigInt::from(1), |acc, x| acc.lcm(x.denom()));
        let ints: Vec<Vec<num_bigint::BigInt>> = (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(|x| x.numer() * (&l / x.denom()))
                    .collect()
            })
            .collect();
        let rs = combinations(self.rows, k);
        let cs = combinations(self.cols, k);
        for r in &rs {
            for c in &cs {
                let sub: Vec<Vec<num_bigint::BigInt>> = r
                    .iter()
                    .map(|&i| c.iter().map(|&j| ints[i][j].clone()).collect())
                    .collect();
                if !integer_determinant(&sub).is_zero() {
                    return Some((r.clone(), c.clone()));
                }
            }
        }
        None
    }

    /// Whether every `k x k` minor vanishes, by explicit enumeration.
    pub fn all_minors_vanish(&self, k: usize) -> bool {
        self.nonzero_minor(k).is_none()
    }
}
