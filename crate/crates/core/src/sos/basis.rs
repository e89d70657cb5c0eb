use std::collections::HashMap;

use num_traits::One;

use crate::algebra::{Monomial, MultiPoly, Rational};

/// All monomials of degree `d` in `n` variables, in descending graded-lex
/// order.
#[derive(Clone, Debug)]
pub struct MonomialBasis {
    pub n: usize,
    pub d: u32,
    pub monomials: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
}

impl MonomialBasis {
    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn index_of(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    /// The monomial vector `m(z)` evaluated at a point.
    pub fn evaluate(&self, point: &[Rational]) -> Vec<Rational> {
        let max = self.d as usize;
        let powers: Vec<Vec<Rational>> = point
            .iter()
            .map(|x| {
                let mut row = vec![Rational::one()];
                for k in 1..=max {
                    let next = &row[k - 1] * x;
                    row.push(next);
                }
                row
            })
            .collect();
        self.monomials
            .iter()
            .map(|m| {
                m.exponents()
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .fold(Rational::one(), |acc, (i, &e)| acc * &powers[i][e as usize])
            })
            .collect()
    }

    /// The polynomial `sum coeffs[i] * m_i`.
    pub fn combine(&self, coeffs: &[Rational]) -> MultiPoly {
        MultiPoly::from_terms(
            self.n,
            self.monomials.iter().cloned().zip(coeffs.iter().cloned()),
        )
        .expect("basis monomials have n slots")
    }
}

fn compositions(n: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
    if prefix.len() == n - 1 {
        let used: u32 = prefix.iter().sum();
        let mut e = prefix.clone();
        e.push(d - used);
        out.push(Monomial::new(e));
        return;
    }
    let used: u32 = prefix.iter().sum();
    for k in (0..=d - used).rev() {
        prefix.push(k);
        compositions(n, d, prefix, out);
        prefix.pop();
    }
}

pub fn monomial_basis(n: usize, d: u32) -> MonomialBasis {
    assert!(n >= 1, "monomial basis needs at least one variable");
    let mut monomials = Vec::new();
    compositions(n, d, &mut Vec::with_capacity(n), &mut monomials);
    let index = monomials
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, m)| (m, i))
        .collect();
    MonomialBasis {
        n,
        d,
        monomials,
        index,
    }
}
