use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{ExactMatrix, Monomial, Rational, Ring};
use crate::error::{usage, Result};

/// Total degree of a polynomial. The zero polynomial has no degree and is
/// kept apart so it can never leak into degree arithmetic.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Degree {
    ZeroPoly,
    Finite(u32),
}

impl Degree {
    pub fn finite(self) -> Option<u32> {
        match self {
            Degree::ZeroPoly => None,
            Degree::Finite(d) => Some(d),
        }
    }
}

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Zero coefficients are never stored. Terms iterate in descending
/// graded-lexicographic order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    var_count: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl MultiPoly {
    pub fn zero(var_count: usize) -> Self {
        MultiPoly {
            var_count,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(var_count: usize, c: Rational) -> Self {
        let mut p = MultiPoly::zero(var_count);
        p.add_term(Monomial::one(var_count), c);
        p
    }

    pub fn one(var_count: usize) -> Self {
        MultiPoly::constant(var_count, Rational::one())
    }

    pub fn var(var_count: usize, index: usize) -> Self {
        let mut p = MultiPoly::zero(var_count);
        p.add_term(Monomial::var(var_count, index), Rational::one());
        p
    }

    /// Linear form `sum coeffs[i] * x_i`.
    pub fn linear(coeffs: &[Rational]) -> Self {
        let n = coeffs.len();
        let mut p = MultiPoly::zero(n);
        for (i, c) in coeffs.iter().enumerate() {
            p.add_term(Monomial::var(n, i), c.clone());
        }
        p
    }

    /// Builds a polynomial from (monomial, coefficient) pairs, merging
    /// repeated monomials. Every monomial must have `var_count` slots.
    pub fn from_terms(
        var_count: usize,
        terms: impl IntoIterator<Item = (Monomial, Rational)>,
    ) -> Result<Self> {
        let mut p = MultiPoly::zero(var_count);
        for (m, c) in terms {
            if m.var_count() != var_count {
                return usage(format!(
                    "monomial has {} slots, expected {}",
                    m.var_count(),
                    var_count
                ));
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    pub fn var_count(&self) -> usize {
        self.var_count
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Terms in descending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter().rev()
    }

    pub fn degree(&self) -> Degree {
        match self.terms.keys().next_back() {
            None => Degree::ZeroPoly,
            Some(m) => Degree::Finite(m.degree()),
        }
    }

    /// True for the zero polynomial and for polynomials whose terms all have
    /// the same total degree.
    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    fn check_vars(&self, other: &MultiPoly) -> Result<()> {
        if self.var_count != other.var_count {
            return usage(format!(
                "variable count mismatch: {} vs {}",
                self.var_count, other.var_count
            ));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_vars(other)?;
        let mut out = MultiPoly::zero(self.var_count);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(self.var_count);
        }
        MultiPoly {
            var_count: self.var_count,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> MultiPoly {
        let mut base = self.clone();
        let mut acc = MultiPoly::one(self.var_count);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn evaluate(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.var_count {
            return usage(format!(
                "point has {} coordinates, polynomial has {} variables",
                point.len(),
                self.var_count
            ));
        }
        let max_exp = self
            .terms
            .keys()
            .flat_map(|m| m.exponents().iter().copied())
            .max()
            .unwrap_or(0) as usize;
        let powers: Vec<Vec<Rational>> = point
            .iter()
            .map(|x| {
                let mut row = Vec::with_capacity(max_exp + 1);
                row.push(Rational::one());
                for k in 1..=max_exp {
                    let next = &row[k - 1] * x;
                    row.push(next);
                }
                row
            })
            .collect();
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                if e > 0 {
                    t *= &powers[i][e as usize];
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    pub fn partial_derivative(&self, var: usize) -> Result<MultiPoly> {
        if var >= self.var_count {
            return usage(format!(
                "variable index {var} out of range for {} variables",
                self.var_count
            ));
        }
        let mut out = MultiPoly::zero(self.var_count);
        for (m, c) in &self.terms {
            let e = m.exponents()[var];
            if let Some(lowered) = m.lower(var) {
                out.add_term(lowered, c * Rational::from_integer(BigInt::from(e)));
            }
        }
        Ok(out)
    }

    /// Symbolic second partials, row-major and symmetric.
    #[allow(clippy::needless_range_loop)]
    pub fn hessian(&self) -> Vec<Vec<MultiPoly>> {
        let n = self.var_count;
        let first: Vec<MultiPoly> = (0..n)
            .map(|i| self.partial_derivative(i).expect("index in range"))
            .collect();
        let mut h = vec![vec![MultiPoly::zero(n); n]; n];
        for (i, fi) in first.iter().enumerate() {
            for j in i..n {
                let d = fi.partial_derivative(j).expect("index in range");
                h[j][i] = d.clone();
                h[i][j] = d;
            }
        }
        h
    }

    /// Exact Hessian matrix at `point`.
    pub fn hessian_at(&self, point: &[Rational]) -> Result<ExactMatrix<Rational>> {
        if point.len() != self.var_count {
            return usage(format!(
                "point has {} coordinates, polynomial has {} variables",
                point.len(),
                self.var_count
            ));
        }
        evaluate_hessian(&self.hessian(), point)
    }

    /// Multiplies by the least positive rational that makes every
    /// coefficient an integer with gcd 1. Returns the scaled polynomial and
    /// the scale factor.
    pub fn primitive_part(&self) -> (MultiPoly, Rational) {
        if self.is_zero() {
            return (self.clone(), Rational::one());
        }
        let lcm = self
            .terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let content = self
            .terms
            .values()
            .map(|c| (c * Rational::from_integer(lcm.clone())).to_integer())
            .fold(BigInt::zero(), |acc, n| acc.gcd(&n));
        let factor = Rational::new(lcm, content);
        (self.scale(&factor), factor)
    }

    /// Coefficients as integers, if they all are.
    pub fn integer_terms(&self) -> Option<Vec<(Monomial, BigInt)>> {
        self.terms()
            .map(|(m, c)| c.is_integer().then(|| (m.clone(), c.to_integer())))
            .collect()
    }

    pub fn max_abs_coefficient(&self) -> f64 {
        self.terms
            .values()
            .map(|c| c.abs().to_f64().unwrap_or(f64::INFINITY))
            .fold(0.0, f64::max)
    }
}

/// Evaluates a precomputed symbolic Hessian (see [`MultiPoly::hessian`]).
#[allow(clippy::needless_range_loop)]
pub fn evaluate_hessian(h: &[Vec<MultiPoly>], point: &[Rational]) -> Result<ExactMatrix<Rational>> {
    let n = h.len();
    let mut m = ExactMatrix::zeros(n, n);
    for (i, row) in h.iter().enumerate() {
        for j in i..n {
            let v = row[j].evaluate(point)?;
            m.set(j, i, v.clone());
            m.set(i, j, v);
        }
    }
    Ok(m)
}

impl Ring for MultiPoly {
    fn zero_like(&self) -> Self {
        MultiPoly::zero(self.var_count)
    }
    fn one_like(&self) -> Self {
        MultiPoly::one(self.var_count)
    }
    fn is_zero_elem(&self) -> bool {
        MultiPoly::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
}

// Operator forms panic on a variable-count mismatch; the `checked_*`
// methods report it instead.
impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.checked_add(rhs).expect("MultiPoly addition")
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self.checked_sub(rhs).expect("MultiPoly subtraction")
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.checked_mul(rhs).expect("MultiPoly multiplication")
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            var_count: self.var_count,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})*{m:?}")?;
        }
        Ok(())
    }
}
