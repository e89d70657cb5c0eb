//! Exact checks of the structural properties of the nonnegative
//! resultant polynomials, shared by the command line and the test suites.

use std::collections::BTreeMap;

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{evaluate_hessian, MultiPoly, Rational, Ring};
use crate::error::Result;
use crate::sampling::sample_zeros;
use crate::sections::{
    bracket_invariants, rational_form_numerator, rho_closed_form, RealChart, RhoPolynomial,
};

/// Zeros drawn per random base point.
pub const ZEROS_PER_BASE_POINT: usize = 4;

/// `count` exact zeros: `ceil(count / 4)` random Gaussian-rational base
/// points, four random members of each vanishing family.
pub fn sample_zero_points(
    chart: &RealChart,
    count: usize,
    seed: u64,
) -> Result<Vec<Vec<Rational>>> {
    let bases = count.div_ceil(ZEROS_PER_BASE_POINT);
    let mut pts: Vec<Vec<Rational>> = sample_zeros(chart, bases, ZEROS_PER_BASE_POINT, seed)?
        .into_iter()
        .map(|z| z.point)
        .collect();
    pts.truncate(count);
    Ok(pts)
}

#[derive(Clone, Debug, Serialize)]
pub struct HessianAtZero {
    pub value_is_zero: bool,
    pub psd: bool,
    pub rank: usize,
    pub all_5x5_minors_vanish: bool,
    pub some_4x4_minor_nonzero: bool,
}

/// Exact Hessian checks at one point. Minors are enumerated explicitly.
pub fn hessian_at_zero(
    p: &MultiPoly,
    hessian: &[Vec<MultiPoly>],
    point: &[Rational],
) -> Result<HessianAtZero> {
    let h = evaluate_hessian(hessian, point)?;
    Ok(HessianAtZero {
        value_is_zero: p.evaluate(point)?.is_zero(),
        psd: h.is_psd(),
        rank: h.rank(),
        all_5x5_minors_vanish: h.all_minors_vanish(5),
        some_4x4_minor_nonzero: h.nonzero_minor(4).is_some(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct HessianSurvey {
    pub zeros: usize,
    pub all_vanish: bool,
    pub all_psd: bool,
    pub rank_histogram: BTreeMap<usize, usize>,
    pub all_5x5_minors_vanish: bool,
    pub some_4x4_minor_nonzero_everywhere: bool,
    /// indices of zeros whose rank differs from `expected_rank`
    pub rank_exceptions: Vec<usize>,
    pub expected_rank: usize,
}

pub fn hessian_survey(
    p: &MultiPoly,
    zeros: &[Vec<Rational>],
    expected_rank: usize,
) -> Result<HessianSurvey> {
    let hessian = p.hessian();
    let checks: Vec<HessianAtZero> = zeros
        .par_iter()
        .map(|z| hessian_at_zero(p, &hessian, z))
        .collect::<Result<_>>()?;
    let mut rank_histogram = BTreeMap::new();
    for c in &checks {
        *rank_histogram.entry(c.rank).or_insert(0) += 1;
    }
    Ok(HessianSurvey {
        zeros: checks.len(),
        all_vanish: checks.iter().all(|c| c.value_is_zero),
        all_psd: checks.iter().all(|c| c.psd),
        rank_histogram,
        all_5x5_minors_vanish: checks.iter().all(|c| c.all_5x5_minors_vanish),
        some_4x4_minor_nonzero_everywhere: checks.iter().all(|c| c.some_4x4_minor_nonzero),
        rank_exceptions: checks
            .iter()
            .enumerate()
            .filter(|(_, c)| c.rank != expected_rank)
            .map(|(i, _)| i)
            .collect(),
        expected_rank,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct BracketIdentities {
    /// the closed form in the bracket invariants equals the expanded
    /// polynomial
    pub closed_form: bool,
    /// `r s = |u|^2 + |v|^2`
    pub rs_identity: bool,
    /// `r rho = (r^2 - |v|^2)^2 + |r conj(u) + u conj(v)|^2`
    pub rational_form: bool,
}

impl BracketIdentities {
    pub fn all(&self) -> bool {
        self.closed_form && self.rs_identity && self.rational_form
    }
}

/// Symbolic identities for `O(3)+O(3)`, checked with zero tolerance.
pub fn bracket_identities(rho: &RhoPolynomial) -> Result<BracketIdentities> {
    let inv = bracket_invariants(&rho.chart)?;
    let rs = &inv.r * &inv.s;
    let uv = &inv.u.norm_sq() + &inv.v.norm_sq();
    Ok(BracketIdentities {
        closed_form: rho_closed_form(&inv) == rho.poly,
        rs_identity: rs.minus(&uv).is_zero(),
        rational_form: &inv.r * &rho.poly == rational_form_numerator(&inv),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;
    use crate::sections::build_rho;

    #[test]
    fn identities_hold_for_cubic_pair() {
        let rho = build_rho("O(3)+O(3)".parse().unwrap()).unwrap();
        assert!(bracket_identities(&rho).unwrap().all());
        let lin = build_rho("O(1)+O(1)".parse().unwrap()).unwrap();
        assert!(bracket_identities(&lin).is_err());
    }

    #[test]
    fn hessian_of_quadric_square_at_zero() {
        // (x0 x3 - x1 x2)^2 at a smooth point of the quadric has rank 1
        let v = |i| MultiPoly::var(4, i);
        let q = &(&v(0) * &v(3)) - &(&v(1) * &v(2));
        let p = &q * &q;
        let c = hessian_at_zero(&p, &p.hessian(), &[rat(1), rat(2), rat(3), rat(6)]).unwrap();
        assert!(c.value_is_zero && c.psd);
        assert_eq!(c.rank, 1);
        assert!(c.all_5x5_minors_vanish);
        assert!(!c.some_4x4_minor_nonzero);
    }

    #[test]
    fn zero_points_are_zeros() {
        let rho = build_rho("O(2)+O(2)".parse().unwrap()).unwrap();
        let z = sample_zero_points(&rho.chart, 10, 5).unwrap();
        assert_eq!(z.len(), 10);
        for p in &z {
            assert!(rho.poly.evaluate(p).unwrap().is_zero());
        }
    }
}
