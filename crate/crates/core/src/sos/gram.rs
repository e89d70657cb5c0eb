use std::collections::BTreeMap;

use num_traits::Zero;

use super::basis::{monomial_basis, MonomialBasis};
use super::facial::Face;
use crate::algebra::{ExactMatrix, Monomial, MultiPoly, Rational};
use crate::error::{usage, Result};

/// Coefficient-matching condition for one monomial `gamma` of degree 2d:
/// `sum over a <= b with m_a m_b = gamma of (a == b ? Q_aa : 2 Q_ab) = target`.
#[derive(Clone, Debug)]
pub struct GramConstraint {
    pub gamma: Monomial,
    pub pairs: Vec<(usize, usize)>,
    pub target: Rational,
}

#[derive(Clone, Debug)]
pub struct GramProblem {
    pub basis: MonomialBasis,
    pub target: MultiPoly,
    pub constraints: Vec<GramConstraint>,
    pub face: Option<Face>,
}

impl GramProblem {
    pub fn size(&self) -> usize {
        self.basis.len()
    }

    /// Exact check that `p = m^T Q m`.
    pub fn satisfied_by(&self, q: &ExactMatrix<Rational>) -> bool {
        let n = self.size();
        if q.rows() != n || q.cols() != n {
            return false;
        }
        for a in 0..n {
            for b in 0..a {
                if q.get(a, b) != q.get(b, a) {
                    return false;
                }
            }
        }
        self.constraints.iter().all(|c| {
            let sum = c.pairs.iter().fold(Rational::zero(), |acc, &(a, b)| {
                if a == b {
                    acc + q.get(a, a)
                } else {
                    acc + q.get(a, b) * Rational::from_integer(2.into())
                }
            });
            sum == c.target
        })
    }

    /// Target coefficients listed in constraint order.
    pub fn target_vector(&self) -> Vec<Rational> {
        self.constraints.iter().map(|c| c.target.clone()).collect()
    }

    /// Coefficients, in constraint order, of the product of the two
    /// polynomials with basis coefficient vectors `u` and `v`.
    pub fn product(&self, u: &[Rational], v: &[Rational]) -> Vec<Rational> {
        self.constraints
            .iter()
            .map(|c| {
                c.pairs.iter().fold(Rational::zero(), |acc, &(a, b)| {
                    if a == b {
                        acc + &u[a] * &v[a]
                    } else {
                        acc + &u[a] * &v[b] + &u[b] * &v[a]
                    }
                })
            })
            .collect()
    }

    /// The same product computed mod the working prime.
    pub fn product_mod(&self, u: &[u64], v: &[u64]) -> Vec<u64> {
        use super::modular::{add, mul};
        self.constraints
            .iter()
            .map(|c| {
                c.pairs.iter().fold(0, |acc, &(a, b)| {
                    if a == b {
                        add(acc, mul(u[a], v[a]))
                    } else {
                        add(acc, add(mul(u[a], v[b]), mul(u[b], v[a])))
                    }
                })
            })
            .collect()
    }

    /// Largest absolute constraint violation of a floating Gram matrix.
    pub fn residual_f64(&self, q: &nalgebra::DMatrix<f64>) -> f64 {
        self.constraints
            .iter()
            .map(|c| {
                let sum: f64 = c
                    .pairs
                    .iter()
                    .map(|&(a, b)| {
                        if a == b {
                            q[(a, a)]
                        } else {
                            q[(a, b)] + q[(b, a)]
                        }
                    })
                    .sum();
                let t: f64 = num_traits::ToPrimitive::to_f64(&c.target).unwrap_or(f64::NAN);
                (sum - t).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// Half the degree of a homogeneous polynomial of even degree.
pub fn half_degree(p: &MultiPoly) -> Result<u32> {
    let Some(deg) = p.degree().finite() else {
        return usage("Gram system of the zero polynomial");
    };
    if !p.is_homogeneous() || deg % 2 == 1 {
        return usage(format!(
            "Gram system needs a homogeneous polynomial of even degree, got degree {deg}{}",
            if p.is_homogeneous() {
                ""
            } else {
                " (inhomogeneous)"
            }
        ));
    }
    Ok(deg / 2)
}

pub fn gram_system(p: &MultiPoly) -> Result<GramProblem> {
    let d = half_degree(p)?;
    let basis = monomial_basis(p.var_count(), d);
    let mut groups: BTreeMap<Monomial, Vec<(usize, usize)>> = BTreeMap::new();
    for a in 0..basis.len() {
        for b in a..basis.len() {
            let g = basis.monomials[a].mul(&basis.monomials[b]);
            groups.entry(g).or_default().push((a, b));
        }
    }
    // every monomial of p has degree 2d, so it is a product of two basis elements
    let constraints = groups
        .into_iter()
        .rev()
        .map(|(gamma, pairs)| {
            let target = p.coefficient(&gamma);
            GramConstraint {
                gamma,
                pairs,
                target,
            }
        })
        .collect();
    Ok(GramProblem {
        basis,
        target: p.clone(),
        constraints,
        face: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    #[test]
    fn single_square() {
        let x = MultiPoly::var(2, 0);
        let prob = gram_system(&(&x * &x)).unwrap();
        let mut q = ExactMatrix::zeros(2, 2);
        q.set(0, 0, rat(1));
        assert!(prob.satisfied_by(&q));
        assert!(q.is_psd());
    }

    #[test]
    fn cross_term_has_no_psd_gram() {
        let p = &MultiPoly::var(2, 0) * &MultiPoly::var(2, 1);
        let prob = gram_system(&p).unwrap();
        // the only feasible Q has zero diagonal and Q01 = 1/2
        let q = ExactMatrix::from_rows(vec![
            vec![rat(0), Rational::new(1.into(), 2.into())],
            vec![Rational::new(1.into(), 2.into()), rat(0)],
        ])
        .unwrap();
        assert!(prob.satisfied_by(&q));
        assert!(!q.is_psd());
    }

    #[test]
    fn rejects_odd_or_inhomogeneous() {
        let x = MultiPoly::var(2, 0);
        assert!(gram_system(&x).is_err());
        assert!(gram_system(&(&(&x * &x) + &x)).is_err());
        assert!(gram_system(&MultiPoly::zero(2)).is_err());
    }

    #[test]
    fn constraints_partition_upper_triangle() {
        let p = (&MultiPoly::var(3, 0) + &MultiPoly::var(3, 2)).pow(4);
        let prob = gram_system(&p).unwrap();
        let n = prob.size();
        let mut seen = vec![false; n * n];
        for c in &prob.constraints {
            for &(a, b) in &c.pairs {
                assert!(a <= b);
                assert!(!seen[a * n + b]);
                seen[a * n + b] = true;
            }
        }
        assert_eq!(seen.iter().filter(|&&s| s).count(), n * (n + 1) / 2);
    }
}
