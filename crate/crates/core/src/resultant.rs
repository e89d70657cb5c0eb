//! Resultants of univariate polynomials with ring-valued coefficients.
//!
//! Coefficients are usually [`ComplexPoly`] (complex-symbolic in the real
//! chart variables) or [`ComplexScalar`] for numeric specializations. The
//! resultant is always taken with respect to the declared degree, so a
//! vanishing leading coefficient is not dropped.

use crate::algebra::{ComplexPoly, ExactMatrix, Ring};
use crate::error::{usage, Result};

/// Univariate polynomial `sum coeffs[i] z^i` with declared degree
/// `coeffs.len() - 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct UniPoly<C> {
    coeffs: Vec<C>,
}

/// Univariate polynomial whose coefficients are complex-symbolic in the real
/// chart variables.
pub type ComplexUniPoly = UniPoly<ComplexPoly>;

impl<C: Ring> UniPoly<C> {
    pub fn new(coeffs: Vec<C>) -> Result<Self> {
        if coeffs.is_empty() {
            return usage("univariate polynomial needs at least one coefficient");
        }
        Ok(UniPoly { coeffs })
    }

    pub fn declared_degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &C {
        &self.coeffs[i]
    }

    /// Product with declared degree equal to the sum of declared degrees.
    pub fn mul(&self, other: &UniPoly<C>) -> UniPoly<C> {
        let zero = self.coeffs[0].zero_like();
        let mut out = vec![zero; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].plus(&a.times(b));
            }
        }
        UniPoly { coeffs: out }
    }

    /// Horner evaluation at `z`.
    pub fn eval(&self, z: &C) -> C {
        self.coeffs
            .iter()
            .rev()
            .fold(self.coeffs[0].zero_like(), |acc, c| acc.times(z).plus(c))
    }
}

/// The `(m+n) x (m+n)` Sylvester matrix of `f` (declared degree m) and `g`
/// (declared degree n). Its determinant is `Res(f, g)`, normalized so that
/// `Res(f, g) = lc(f)^n * prod g(alpha)` over the roots of `f`.
pub fn sylvester_matrix<C: Ring>(f: &UniPoly<C>, g: &UniPoly<C>) -> Result<ExactMatrix<C>> {
    let m = f.declared_degree();
    let n = g.declared_degree();
    if m == 0 && n == 0 {
        return usage("Sylvester matrix of two constants is undefined");
    }
    let size = m + n;
    let zero = f.coeffs[0].zero_like();
    Ok(ExactMatrix::from_fn(size, size, |i, j| {
        let (poly, deg, shift) = if i < n { (f, m, i) } else { (g, n, i - n) };
        // row `shift` holds the coefficients, leading first, starting at column `shift`
        if j < shift || j > shift + deg {
            zero.clone()
        } else {
            poly.coeffs[deg - (j - shift)].clone()
        }
    }))
}

pub fn resultant<C: Ring>(f: &UniPoly<C>, g: &UniPoly<C>) -> Result<C> {
    sylvester_matrix(f, g)?.determinant_by_minors()
}

/// A coefficient minor `[i,j] = a_i b_j - b_i a_j` of the pair (f, g).
#[derive(Clone, Debug, PartialEq)]
pub struct Bracket<C> {
    pub i: usize,
    pub j: usize,
    pub value: C,
}

pub fn bracket<C: Ring>(f: &UniPoly<C>, g: &UniPoly<C>, i: usize, j: usize) -> Result<Bracket<C>> {
    let limit = f.coeffs.len().min(g.coeffs.len());
    if i >= limit || j >= limit {
        return usage(format!(
            "bracket [{i},{j}] out of range for degrees {} and {}",
            f.declared_degree(),
            g.declared_degree()
        ));
    }
    let value = f.coeffs[i]
        .times(&g.coeffs[j])
        .minus(&g.coeffs[i].times(&f.coeffs[j]));
    Ok(Bracket { i, j, value })
}

/// The Cayley-Bezout 3x3 matrix of a cubic pair:
///
/// ```text
/// [3,0]  [3,1]        [3,2]
/// [2,0]  [3,0]+[2,1]  [3,1]
/// [1,0]  [2,0]        [3,0]
/// ```
pub fn bezout3_matrix<C: Ring>(f: &UniPoly<C>, g: &UniPoly<C>) -> Result<ExactMatrix<C>> {
    if f.declared_degree() != 3 || g.declared_degree() != 3 {
        return usage(format!(
            "Cayley-Bezout formula needs two cubics, got degrees {} and {}",
            f.declared_degree(),
            g.declared_degree()
        ));
    }
    let b = |i, j| bracket(f, g, i, j).map(|br| br.value);
    let b30 = b(3, 0)?;
    let b31 = b(3, 1)?;
    let b20 = b(2, 0)?;
    ExactMatrix::from_rows(vec![
        vec![b30.clone(), b31.clone(), b(3, 2)?],
        vec![b20.clone(), b30.plus(&b(2, 1)?), b31],
        vec![b(1, 0)?, b20, b30],
    ])
}

/// Determinant of [`bezout3_matrix`]. Equals `BEZOUT_SIGN * resultant(f, g)`.
pub fn bezout3_resultant<C: Ring>(f: &UniPoly<C>, g: &UniPoly<C>) -> Result<C> {
    bezout3_matrix(f, g)?.determinant_by_minors()
}

/// Global sign relating the Cayley-Bezout determinant of a cubic pair to the
/// Sylvester resultant. Fixed by the pair `(z^3 + 1, 1 - z^3)` and checked
/// on random pairs in the test suite.
pub const BEZOUT_SIGN: i32 = 1;
