//! Seeded random sampling of rational points and exact zeros.
//!
//! All randomness comes from `ChaCha8Rng::seed_from_u64(seed)`. Sample
//! points have numerators drawn uniformly from `[-10^4, 10^4]` over the
//! fixed denominator `10^4`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{ComplexScalar, MultiPoly, Rational};
use crate::error::{usage, Result};
use crate::sections::{exact_zero_family, RealChart};

pub const SAMPLE_DENOMINATOR: i64 = 10_000;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Numerators of one sample point; the point is `numerators / 10^4`.
pub fn sample_numerators(rng: &mut ChaCha8Rng, dim: usize) -> Vec<i64> {
    (0..dim)
        .map(|_| rng.gen_range(-SAMPLE_DENOMINATOR..=SAMPLE_DENOMINATOR))
        .collect()
}

pub fn to_rational_point(numerators: &[i64], denominator: i64) -> Vec<Rational> {
    numerators
        .iter()
        .map(|&n| Rational::new(n.into(), denominator.into()))
        .collect()
}

/// Exact evaluation of an integer-coefficient polynomial at integer points.
/// Uses checked `i128` arithmetic and falls back to big integers on
/// overflow.
/// Sparse exponent list, exact coefficient, and the coefficient as `i128`
/// when it fits.
type IntegerTerm = (Vec<(usize, u32)>, BigInt, Option<i128>);

pub struct IntegerEvaluator {
    var_count: usize,
    terms: Vec<IntegerTerm>,
}

impl IntegerEvaluator {
    pub fn new(p: &MultiPoly) -> Result<Self> {
        let Some(terms) = p.integer_terms() else {
            return usage("integer evaluation needs integer coefficients");
        };
        Ok(IntegerEvaluator {
            var_count: p.var_count(),
            terms: terms
                .into_iter()
                .map(|(m, c)| {
                    let sparse = m
                        .exponents()
                        .iter()
                        .enumerate()
                        .filter(|(_, &e)| e > 0)
                        .map(|(i, &e)| (i, e))
                        .collect();
                    let small = c.to_i128();
                    (sparse, c, small)
                })
                .collect(),
        })
    }

    fn eval_i128(&self, x: &[i64]) -> Option<i128> {
        let mut acc: i128 = 0;
        for (vars, _, c) in &self.terms {
            let mut t = (*c)?;
            for &(i, e) in vars {
                let xi = x[i] as i128;
                for _ in 0..e {
                    t = t.checked_mul(xi)?;
                }
            }
            acc = acc.checked_add(t)?;
        }
        Some(acc)
    }

    fn eval_big(&self, x: &[i64]) -> BigInt {
        let mut acc = BigInt::zero();
        for (vars, c, _) in &self.terms {
            let mut t = c.clone();
            for &(i, e) in vars {
                t *= BigInt::from(x[i]).pow(e);
            }
            acc += t;
        }
        acc
    }

    pub fn eval(&self, x: &[i64]) -> BigInt {
        debug_assert_eq!(x.len(), self.var_count);
        match self.eval_i128(x) {
            Some(v) => BigInt::from(v),
            None => self.eval_big(x),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NonnegativityReport {
    pub samples: usize,
    pub seed: u64,
    pub negative_count: usize,
    /// exact minimum, as `p/q`
    pub min_value: String,
    pub min_value_f64: f64,
    pub argmin: Vec<String>,
    pub passed: bool,
}

/// Evaluates a homogeneous integer polynomial at `samples` seeded rational
/// points and reports the exact minimum.
pub fn nonnegativity_sweep(
    p: &MultiPoly,
    samples: usize,
    seed: u64,
) -> Result<NonnegativityReport> {
    let Some(degree) = p.degree().finite() else {
        return usage("nonnegativity sweep of the zero polynomial");
    };
    if !p.is_homogeneous() {
        return usage("nonnegativity sweep needs a homogeneous polynomial");
    }
    let (prim, factor) = p.primitive_part();
    let eval = IntegerEvaluator::new(&prim)?;
    let mut rng = rng(seed);
    let points: Vec<Vec<i64>> = (0..samples)
        .map(|_| sample_numerators(&mut rng, p.var_count()))
        .collect();
    let values: Vec<BigInt> = points.par_iter().map(|x| eval.eval(x)).collect();
    let negative_count = values.iter().filter(|v| v.is_negative()).count();
    let (idx, min) = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.cmp(b.1).then(a.0.cmp(&b.0)))
        .map(|(i, v)| (i, v.clone()))
        .unwrap_or((0, BigInt::zero()));
    // p(x / D) = prim(x) / (factor * D^degree)
    let scale = &factor * Rational::from_integer(BigInt::from(SAMPLE_DENOMINATOR).pow(degree));
    let min_value = Rational::from_integer(min) / scale;
    let argmin = points
        .get(idx)
        .map(|x| {
            to_rational_point(x, SAMPLE_DENOMINATOR)
                .iter()
                .map(|c| c.to_string())
                .collect()
        })
        .unwrap_or_default();
    Ok(NonnegativityReport {
        samples,
        seed,
        negative_count,
        min_value_f64: min_value.to_f64().unwrap_or(f64::NAN),
        min_value: min_value.to_string(),
        argmin,
        passed: negative_count == 0,
    })
}

/// Random Gaussian rational `(a + b i) / c` with `|a|, |b| <= 5`,
/// `1 <= c <= 5`.
pub fn random_gaussian_rational(rng: &mut ChaCha8Rng) -> ComplexScalar {
    let c: i64 = rng.gen_range(1..=5);
    let a: i64 = rng.gen_range(-5..=5);
    let b: i64 = rng.gen_range(-5..=5);
    ComplexScalar::new(
        Rational::new(a.into(), c.into()),
        Rational::new(b.into(), c.into()),
    )
}

/// Scales a nonzero rational vector to a primitive integer vector with the
/// same direction.
pub fn primitive_integer_vector(v: &[Rational]) -> Vec<Rational> {
    let lcm = v.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = v
        .iter()
        .map(|c| (c * Rational::from_integer(lcm.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, n| acc.gcd(n));
    if g.is_zero() {
        return v.to_vec();
    }
    ints.into_iter()
        .map(|n| Rational::from_integer(n / &g))
        .collect()
}

/// One exact zero of the resultant on the chart, with the base point it
/// came from.
#[derive(Clone, Debug)]
pub struct SampledZero {
    pub z0: ComplexScalar,
    pub point: Vec<Rational>,
}

/// Draws `per_point` random elements from the family of real sections
/// vanishing at each of `base_points` random Gaussian-rational points.
/// Fiber coefficients are integers in `[-3, 3]`, not all zero; points are
/// stored as primitive integer vectors.
pub fn sample_zeros(
    chart: &RealChart,
    base_points: usize,
    per_point: usize,
    seed: u64,
) -> Result<Vec<SampledZero>> {
    let mut rng = rng(seed);
    let mut out = Vec::with_capacity(base_points * per_point);
    for _ in 0..base_points {
        let z0 = random_gaussian_rational(&mut rng);
        let basis = exact_zero_family(chart, &z0)?;
        if basis.is_empty() {
            continue;
        }
        for _ in 0..per_point {
            let coeffs: Vec<i64> = loop {
                let c: Vec<i64> = (0..basis.len()).map(|_| rng.gen_range(-3..=3)).collect();
                if c.iter().any(|&x| x != 0) {
                    break c;
                }
            };
            let mut pt = vec![Rational::zero(); chart.real_dim];
            for (c, b) in coeffs.iter().zip(&basis) {
                let c = Rational::from_integer((*c).into());
                for (acc, bi) in pt.iter_mut().zip(b) {
                    *acc += &c * bi;
                }
            }
            out.push(SampledZero {
                z0: z0.clone(),
                point: primitive_integer_vector(&pt),
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    #[test]
    fn integer_evaluator_matches_exact() {
        let x = MultiPoly::var(2, 0);
        let y = MultiPoly::var(2, 1);
        let p = &(&x * &x).scale(&rat(3)) - &(&x * &y);
        let e = IntegerEvaluator::new(&p).unwrap();
        assert_eq!(e.eval(&[2, 5]), BigInt::from(2));
        // forces the big-integer path
        let big = x.pow(9);
        let e = IntegerEvaluator::new(&big).unwrap();
        let v = e.eval(&[i64::MAX / 2, 0]);
        assert_eq!(v, BigInt::from(i64::MAX / 2).pow(9));
    }

    #[test]
    fn sweep_detects_sign_change() {
        let x = MultiPoly::var(2, 0);
        let y = MultiPoly::var(2, 1);
        let rep = nonnegativity_sweep(&(&x * &y), 200, 7).unwrap();
        assert!(!rep.passed);
        let sq = &(&x * &x) + &(&y * &y);
        let rep = nonnegativity_sweep(&sq, 200, 7).unwrap();
        assert!(rep.passed);
    }

    #[test]
    fn sampling_is_deterministic() {
        let mut a = rng(3);
        let mut b = rng(3);
        assert_eq!(sample_numerators(&mut a, 5), sample_numerators(&mut b, 5));
    }

    #[test]
    fn primitive_vectors() {
        let v = [
            Rational::new(2.into(), 3.into()),
            Rational::new((-4).into(), 9.into()),
            rat(0),
        ];
        assert_eq!(primitive_integer_vector(&v), vec![rat(3), rat(-2), rat(0)]);
    }
}
