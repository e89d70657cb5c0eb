//! Exact test of whether the target lies in the span of products of face
//! elements.
//!
//! Every Gram matrix supported on the face is `W S W^T`, so `p` has a Gram
//! matrix on the face iff `p` is a combination of the products `w_a w_b`.
//! A linear functional on degree-2d coefficients that kills every product
//! but not `p` rules out any Gram matrix, PSD or not.
//!
//! For large faces the test runs mod p. It remains a proof: if the
//! products of a basis of the face over `F_p` are independent and the
//! target is outside their span, then the target is outside the rational
//! span (a rational relation `D p = sum C_ab w_a w_b` with `p | D` would
//! reduce to a nontrivial relation among the products).

use num_traits::{Signed, Zero};

use super::gram::GramProblem;
use super::modular::{self, ModEchelon, PRIME};
use crate::algebra::{ExactMatrix, Monomial, Rational};

/// Proof that no Gram matrix (PSD or otherwise) exists on the face, or that
/// the unique one is indefinite.
#[derive(Clone, Debug)]
pub enum ExactWitness {
    /// The face is `{0}` and the target is nonzero.
    TrivialFace,
    /// Rational functional on degree-2d monomials.
    Functional(Vec<(Monomial, Rational)>),
    /// Functional over `F_p`, together with the rank of the products mod p
    /// (which equals the number of products).
    ModularFunctional {
        prime: u64,
        functional: Vec<(Monomial, u64)>,
        product_rank: usize,
    },
    /// The products are independent, so the Gram matrix `S` on the face is
    /// unique; `direction` satisfies `direction^T S direction < 0`. `S` is
    /// expressed in the basis `face`.
    IndefiniteGram {
        face: Vec<Vec<Rational>>,
        gram: ExactMatrix<Rational>,
        direction: Vec<Rational>,
    },
}

impl ExactWitness {
    pub fn label(&self) -> &'static str {
        match self {
            ExactWitness::TrivialFace => "trivial-face",
            ExactWitness::Functional(_) => "rational-functional",
            ExactWitness::ModularFunctional { .. } => "modular-functional",
            ExactWitness::IndefiniteGram { .. } => "indefinite-unique-gram",
        }
    }
}

#[derive(Clone, Debug)]
pub enum SpanOutcome {
    /// Not representable on the face.
    Outside(ExactWitness),
    /// Representable by exactly one Gram matrix `S` (in face coordinates),
    /// which is PSD.
    UniquePsd(ExactMatrix<Rational>),
    Inconclusive(String),
}

/// Products with more entries than this are only handled mod p.
const RATIONAL_PRODUCT_LIMIT: usize = 600;
/// Face vectors with larger entries are only handled mod p.
const RATIONAL_HEIGHT_BITS: u64 = 64;

fn pairs(k: usize) -> Vec<(usize, usize)> {
    (0..k).flat_map(|a| (a..k).map(move |b| (a, b))).collect()
}

/// Runs the span test on `prob.face` (the full space when absent).
pub fn exact_span_check(prob: &GramProblem) -> SpanOutcome {
    let face = prob
        .face
        .clone()
        .unwrap_or_else(|| super::facial::Face::full(prob.size()));
    let k = face.dim();
    if k == 0 {
        return if prob.target.is_zero() {
            SpanOutcome::Inconclusive("zero target".into())
        } else {
            SpanOutcome::Outside(ExactWitness::TrivialFace)
        };
    }
    let kk = k * (k + 1) / 2;
    let height = face
        .vectors
        .iter()
        .flatten()
        .map(|x| x.numer().bits().max(x.denom().bits()))
        .max()
        .unwrap_or(0);
    if kk <= RATIONAL_PRODUCT_LIMIT && height <= RATIONAL_HEIGHT_BITS {
        return rational_route(prob, &face.vectors);
    }
    modular_route(prob, &face.modular)
}

fn rational_route(prob: &GramProblem, w: &[Vec<Rational>]) -> SpanOutcome {
    let k = w.len();
    let idx = pairs(k);
    let products: Vec<Vec<Rational>> = idx
        .iter()
        .map(|&(a, b)| prob.product(&w[a], &w[b]))
        .collect();
    let target = prob.target_vector();
    let m = target.len();
    // columns = products, plus the target as the last column
    let aug = ExactMatrix::from_fn(m, idx.len() + 1, |r, c| {
        if c < idx.len() {
            products[c][r].clone()
        } else {
            target[r].clone()
        }
    });
    let (rref, piv) = aug.rref();
    if piv.last() == Some(&idx.len()) {
        let functional = separating_functional(&products, &target);
        let gammas = prob.constraints.iter().map(|c| c.gamma.clone());
        return SpanOutcome::Outside(ExactWitness::Functional(
            gammas
                .zip(functional)
                .filter(|(_, v)| !v.is_zero())
                .collect(),
        ));
    }
    if piv.len() < idx.len() {
        return SpanOutcome::Inconclusive(format!(
            "target lies in the span of {} products of rank {}; Gram matrix on the face is not unique",
            idx.len(),
            piv.len()
        ));
    }
    let mut s = ExactMatrix::zeros(k, k);
    for (row, &(a, b)) in idx.iter().enumerate() {
        let c = rref.get(row, idx.len()).clone();
        // product a,b contributes S_ab + S_ba
        let v = if a == b {
            c
        } else {
            c / Rational::from_integer(2.into())
        };
        s.set(a, b, v.clone());
        s.set(b, a, v);
    }
    if s.is_psd() {
        SpanOutcome::UniquePsd(s)
    } else {
        let direction = negative_direction(&s).expect("indefinite matrix has a negative direction");
        SpanOutcome::Outside(ExactWitness::IndefiniteGram {
            face: w.to_vec(),
            gram: s,
            direction,
        })
    }
}

/// `ell` with `ell . product = 0` for all products and `ell . target = 1`.
fn separating_functional(products: &[Vec<Rational>], target: &[Rational]) -> Vec<Rational> {
    let kernel = ExactMatrix::from_rows(products.to_vec())
        .expect("products share a length")
        .kernel();
    let ell = kernel
        .into_iter()
        .find(|v| !dot(v, target).is_zero())
        .expect("target outside the span");
    let t = dot(&ell, target);
    ell.into_iter().map(|x| x / &t).collect()
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// A vector `v` with `v^T S v < 0`, found by symmetric elimination.
pub fn negative_direction(s: &ExactMatrix<Rational>) -> Option<Vec<Rational>> {
    let n = s.rows();
    let mut a = s.clone();
    let mut basis: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let mut v = vec![Rational::zero(); n];
            v[i] = Rational::from_integer(1.into());
            v
        })
        .collect();
    let mut active: Vec<usize> = (0..n).collect();
    while !active.is_empty() {
        if let Some(&i) = active.iter().find(|&&i| a.get(i, i).is_negative()) {
            return Some(basis[i].clone());
        }
        if let Some(&p) = active.iter().find(|&&i| a.get(i, i).is_positive()) {
            let pv = a.get(p, p).clone();
            active.retain(|&i| i != p);
            for &i in &active {
                let f = a.get(i, p) / &pv;
                if f.is_zero() {
                    continue;
                }
                for &j in &active {
                    let v = a.get(i, j) - &f * a.get(p, j);
                    a.set(i, j, v);
                }
                let bp = basis[p].clone();
                for (x, y) in basis[i].iter_mut().zip(&bp) {
                    *x -= &f * y;
                }
            }
            for &i in &active {
                a.set(i, p, Rational::zero());
                a.set(p, i, Rational::zero());
            }
            continue;
        }
        // all active diagonals vanish; a nonzero off-diagonal gives a
        // negative direction e_i - t e_j
        for &i in &active {
            for &j in &active {
                if i != j && !a.get(i, j).is_zero() {
                    let t = a.get(i, j).signum();
                    let v: Vec<Rational> = basis[i]
                        .iter()
                        .zip(&basis[j])
                        .map(|(x, y)| x - &t * y)
                        .collect();
                    return Some(v);
                }
            }
        }
        return None;
    }
    None
}

fn modular_route(prob: &GramProblem, w: &[Vec<u64>]) -> SpanOutcome {
    let k = w.len();
    let idx = pairs(k);
    let m = prob.constraints.len();
    if idx.len() > m {
        return SpanOutcome::Inconclusive(format!(
            "{} products exceed the {m} coefficients; independence mod p impossible",
            idx.len()
        ));
    }
    let target: Option<Vec<u64>> = prob
        .constraints
        .iter()
        .map(|c| modular::reduce(&c.target))
        .collect();
    let Some(target) = target else {
        return SpanOutcome::Inconclusive(
            "target denominator divisible by the working prime".into(),
        );
    };
    let mut ech = ModEchelon::new(m);
    for &(a, b) in &idx {
        if !ech.insert(prob.product_mod(&w[a], &w[b])) {
            return SpanOutcome::Inconclusive(
                "products of face elements are dependent mod p".into(),
            );
        }
    }
    match ech.separating_functional(&target) {
        Some(ell) => SpanOutcome::Outside(ExactWitness::ModularFunctional {
            prime: PRIME,
            functional: prob
                .constraints
                .iter()
                .map(|c| c.gamma.clone())
                .zip(ell)
                .filter(|(_, v)| *v != 0)
                .collect(),
            product_rank: idx.len(),
        }),
        None => SpanOutcome::Inconclusive(
            "target lies in the span of face products mod p; rational Gram matrix not reconstructed".into(),
        ),
    }
}
