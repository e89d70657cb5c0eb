use num_traits::{One, Zero};

use super::{MultiPoly, Rational, Ring};

/// Gaussian-rational number `re + i*im`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ComplexScalar {
    pub re: Rational,
    pub im: Rational,
}

impl ComplexScalar {
    pub fn new(re: Rational, im: Rational) -> Self {
        ComplexScalar { re, im }
    }

    pub fn real(re: Rational) -> Self {
        ComplexScalar {
            re,
            im: Rational::zero(),
        }
    }

    pub fn i() -> Self {
        ComplexScalar::new(Rational::zero(), Rational::one())
    }

    pub fn conj(&self) -> Self {
        ComplexScalar::new(self.re.clone(), -&self.im)
    }

    pub fn norm_sq(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn scale(&self, c: &Rational) -> Self {
        ComplexScalar::new(&self.re * c, &self.im * c)
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        let n = self.norm_sq();
        if n.is_zero() {
            return None;
        }
        Some(ComplexScalar::new(&self.re / &n, -&self.im / &n))
    }
}

impl Ring for ComplexScalar {
    fn zero_like(&self) -> Self {
        ComplexScalar::real(Rational::zero())
    }
    fn one_like(&self) -> Self {
        ComplexScalar::real(Rational::one())
    }
    fn is_zero_elem(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn plus(&self, o: &Self) -> Self {
        ComplexScalar::new(&self.re + &o.re, &self.im + &o.im)
    }
    fn minus(&self, o: &Self) -> Self {
        ComplexScalar::new(&self.re - &o.re, &self.im - &o.im)
    }
    fn times(&self, o: &Self) -> Self {
        ComplexScalar::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
    fn negated(&self) -> Self {
        ComplexScalar::new(-&self.re, -&self.im)
    }
}

/// Complex-valued polynomial in real variables, stored as a pair of real
/// polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexPoly {
    pub re: MultiPoly,
    pub im: MultiPoly,
}

impl ComplexPoly {
    pub fn new(re: MultiPoly, im: MultiPoly) -> Self {
        ComplexPoly { re, im }
    }

    pub fn zero(var_count: usize) -> Self {
        ComplexPoly::new(MultiPoly::zero(var_count), MultiPoly::zero(var_count))
    }

    pub fn real(re: MultiPoly) -> Self {
        let n = re.var_count();
        ComplexPoly::new(re, MultiPoly::zero(n))
    }

    pub fn constant(var_count: usize, c: &ComplexScalar) -> Self {
        ComplexPoly::new(
            MultiPoly::constant(var_count, c.re.clone()),
            MultiPoly::constant(var_count, c.im.clone()),
        )
    }

    pub fn var_count(&self) -> usize {
        self.re.var_count()
    }

    pub fn conj(&self) -> Self {
        ComplexPoly::new(self.re.clone(), -&self.im)
    }

    /// `|z|^2 = re^2 + im^2` as a real polynomial.
    pub fn norm_sq(&self) -> MultiPoly {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        ComplexPoly::new(self.re.scale(c), self.im.scale(c))
    }

    pub fn mul_scalar(&self, c: &ComplexScalar) -> Self {
        ComplexPoly::new(
            &self.re.scale(&c.re) - &self.im.scale(&c.im),
            &self.re.scale(&c.im) + &self.im.scale(&c.re),
        )
    }

    pub fn evaluate(&self, point: &[Rational]) -> crate::error::Result<ComplexScalar> {
        Ok(ComplexScalar::new(
            self.re.evaluate(point)?,
            self.im.evaluate(point)?,
        ))
    }
}

impl Ring for ComplexPoly {
    fn zero_like(&self) -> Self {
        ComplexPoly::zero(self.var_count())
    }
    fn one_like(&self) -> Self {
        ComplexPoly::real(MultiPoly::one(self.var_count()))
    }
    fn is_zero_elem(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn plus(&self, o: &Self) -> Self {
        ComplexPoly::new(&self.re + &o.re, &self.im + &o.im)
    }
    fn minus(&self, o: &Self) -> Self {
        ComplexPoly::new(&self.re - &o.re, &self.im - &o.im)
    }
    fn times(&self, o: &Self) -> Self {
        ComplexPoly::new(
            &(&self.re * &o.re) - &(&self.im * &o.im),
            &(&self.re * &o.im) + &(&self.im * &o.re),
        )
    }
    fn negated(&self) -> Self {
        ComplexPoly::new(-&self.re, -&self.im)
    }
}
