//! Intersection arithmetic on the symmetric square of a curve.
//!
//! Classes are truncated at degree 2 in the generators `x` and `delta`;
//! pairing with the fundamental class uses `x^2 = 1`, `x delta = 2` and
//! `delta^2 = 4(1 - g)`.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::algebra::Rational;

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// `c0 + cx x + cdelta delta + cxx x^2 + cxdelta x delta + cdeltadelta delta^2`
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CohomologyClass {
    pub c0: Rational,
    pub cx: Rational,
    pub cdelta: Rational,
    pub cxx: Rational,
    pub cxdelta: Rational,
    pub cdeltadelta: Rational,
}

impl CohomologyClass {
    pub fn scalar(c: Rational) -> Self {
        CohomologyClass {
            c0: c,
            ..Default::default()
        }
    }

    pub fn x() -> Self {
        CohomologyClass {
            cx: Rational::one(),
            ..Default::default()
        }
    }

    pub fn delta() -> Self {
        CohomologyClass {
            cdelta: Rational::one(),
            ..Default::default()
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        CohomologyClass {
            c0: &self.c0 + &o.c0,
            cx: &self.cx + &o.cx,
            cdelta: &self.cdelta + &o.cdelta,
            cxx: &self.cxx + &o.cxx,
            cxdelta: &self.cxdelta + &o.cxdelta,
            cdeltadelta: &self.cdeltadelta + &o.cdeltadelta,
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        CohomologyClass {
            c0: &self.c0 * c,
            cx: &self.cx * c,
            cdelta: &self.cdelta * c,
            cxx: &self.cxx * c,
            cxdelta: &self.cxdelta * c,
            cdeltadelta: &self.cdeltadelta * c,
        }
    }

    pub fn degree_one(&self) -> Self {
        CohomologyClass {
            cx: self.cx.clone(),
            cdelta: self.cdelta.clone(),
            ..Default::default()
        }
    }

    pub fn degree_two(&self) -> Self {
        CohomologyClass {
            cxx: self.cxx.clone(),
            cxdelta: self.cxdelta.clone(),
            cdeltadelta: self.cdeltadelta.clone(),
            ..Default::default()
        }
    }
}

/// Graded product, dropping everything above degree 2.
pub fn class_multiply(a: &CohomologyClass, b: &CohomologyClass) -> CohomologyClass {
    CohomologyClass {
        c0: &a.c0 * &b.c0,
        cx: &a.c0 * &b.cx + &a.cx * &b.c0,
        cdelta: &a.c0 * &b.cdelta + &a.cdelta * &b.c0,
        cxx: &a.c0 * &b.cxx + &a.cxx * &b.c0 + &a.cx * &b.cx,
        cxdelta: &a.c0 * &b.cxdelta + &a.cxdelta * &b.c0 + &a.cx * &b.cdelta + &a.cdelta * &b.cx,
        cdeltadelta: &a.c0 * &b.cdeltadelta + &a.cdeltadelta * &b.c0 + &a.cdelta * &b.cdelta,
    }
}

/// Degree of the top-degree part on a curve of genus `g`.
pub fn pair_with_fundamental(a: &CohomologyClass, g: i64) -> Rational {
    &a.cxx + &a.cxdelta * q(2) + &a.cdeltadelta * q(4 * (1 - g))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CurveBundleParams {
    pub d: i64,
    pub g: i64,
    pub r: i64,
}

/// `d(1 - e^{-x}) - r(g-1) + r((g+1)(1+x) - delta/2) e^{-x}` on the
/// symmetric square, with `e^{-x}` truncated to `1 - x + x^2/2`.
pub fn chern_character_sym2(p: CurveBundleParams) -> CohomologyClass {
    let (d, g, r) = (q(p.d), q(p.g), q(p.r));
    let one = CohomologyClass::scalar(Rational::one());
    let x = CohomologyClass::x();
    let exp_neg_x = one
        .add(&x.scale(&-Rational::one()))
        .add(&class_multiply(&x, &x).scale(&Rational::new(1.into(), 2.into())));
    let first = one.add(&exp_neg_x.scale(&-Rational::one())).scale(&d);
    let second = CohomologyClass::scalar(-(&r * (&g - Rational::one())));
    let inner = one
        .add(&x)
        .scale(&(&g + Rational::one()))
        .add(&CohomologyClass::delta().scale(&Rational::new((-1).into(), 2.into())));
    let third = class_multiply(&inner, &exp_neg_x).scale(&r);
    first.add(&second).add(&third)
}

/// First and second Chern classes recovered from the character:
/// `c1 = ch1`, `c2 = (c1^2 - 2 ch2) / 2`.
pub fn chern_classes(ch: &CohomologyClass) -> (CohomologyClass, CohomologyClass) {
    let c1 = ch.degree_one();
    let c2 = class_multiply(&c1, &c1)
        .add(&ch.degree_two().scale(&q(-2)))
        .scale(&Rational::new(1.into(), 2.into()));
    (c1, c2)
}

/// The second Chern number of `E^[2]` computed through the character.
pub fn c2_number(p: CurveBundleParams) -> Rational {
    let (_, c2) = chern_classes(&chern_character_sym2(p));
    pair_with_fundamental(&c2, p.g)
}

/// `d(d+1-2r)/2 - r(r-1)(g-1)/2`.
pub fn c2_closed_form(p: CurveBundleParams) -> Rational {
    let CurveBundleParams { d, g, r } = p;
    Rational::new(
        (d * (d + 1 - 2 * r) - r * (r - 1) * (g - 1)).into(),
        2.into(),
    )
}

/// Degree of the variety of sections with at least two zeros:
/// `d(d-3)/2 + 1 - g`. `d(d-3)` is always even.
pub fn degree_v2(d: i64, g: i64) -> i64 {
    d * (d - 3) / 2 + 1 - g
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SosObstruction {
    pub d: i64,
    pub g: i64,
    /// `d^2 / 4`
    pub bound: String,
    pub deg_v2: i64,
    /// `deg_v2 >= d^2/4`, so no sum-of-squares representation exists
    pub obstructed: bool,
    /// `d(d-6) >= 4(g-1)`
    pub degree_hypothesis: bool,
}

pub fn sos_bound(d: i64) -> Rational {
    Rational::new((d * d).into(), 4.into())
}

pub fn sos_obstruction(d: i64, g: i64) -> SosObstruction {
    let deg_v2 = degree_v2(d, g);
    let bound = sos_bound(d);
    SosObstruction {
        d,
        g,
        bound: bound.to_string(),
        deg_v2,
        obstructed: q(deg_v2) >= bound,
        degree_hypothesis: d * (d - 6) >= 4 * (g - 1),
    }
}

impl CohomologyClass {
    pub fn is_zero(&self) -> bool {
        [
            &self.c0,
            &self.cx,
            &self.cdelta,
            &self.cxx,
            &self.cxdelta,
            &self.cdeltadelta,
        ]
        .iter()
        .all(|c| c.is_zero())
    }
}
