//! Real sections of rank-2 bundles `O(m) + O(n)` on the projective line
//! with the antipodal involution `z -> -1/conj(z)`, and the nonnegative
//! polynomial obtained by restricting the resultant to them.
//!
//! Two kinds of real structure exist:
//!
//! * `Even`: both degrees even, the involution acts on each summand
//!   separately and a real section is a pair of fixed polynomials.
//! * `OddDiag`: `m = n` odd, the involution swaps the summands
//!   (`(u, v) -> (tau v, -tau u)`), so a real section is determined by
//!   `f` alone and `g` is its partner `g_i = (-1)^i conj(a_{m-i})`.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};

use crate::algebra::{
    default_names, ComplexPoly, ComplexScalar, ExactMatrix, MultiPoly, Rational, Ring,
};
use crate::error::{usage, Error, Result};
use crate::resultant::{bracket, resultant, ComplexUniPoly, UniPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Flavor {
    Even,
    OddDiag,
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flavor::Even => "even",
            Flavor::OddDiag => "odd-diagonal",
        })
    }
}

/// Degrees of the two line-bundle summands together with the real structure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BundleSpec {
    pub m: u32,
    pub n: u32,
    pub flavor: Flavor,
}

impl BundleSpec {
    /// Picks the flavor from the degrees. Mixed parity, or two different
    /// odd degrees, carry no real structure.
    pub fn new(m: u32, n: u32) -> Result<Self> {
        let flavor = match (m % 2, n % 2) {
            (0, 0) => Flavor::Even,
            (1, 1) if m == n => Flavor::OddDiag,
            _ => {
                return usage(format!(
                    "O({m})+O({n}) carries no real structure for the antipodal map"
                ))
            }
        };
        Ok(BundleSpec { m, n, flavor })
    }

    pub fn total_degree(&self) -> u32 {
        self.m + self.n
    }

    /// Real dimension of the space of real sections.
    pub fn real_dim(&self) -> usize {
        (self.m + self.n + 2) as usize
    }
}

impl fmt::Display for BundleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "O({})+O({})", self.m, self.n)
    }
}

impl FromStr for BundleSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Usage(format!("bundle must look like O(m)+O(n), got {s:?}"));
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let (a, b) = compact.split_once('+').ok_or_else(bad)?;
        let deg = |t: &str| -> Result<u32> {
            t.strip_prefix("O(")
                .and_then(|t| t.strip_suffix(')'))
                .and_then(|t| t.parse().ok())
                .ok_or_else(bad)
        };
        BundleSpec::new(deg(a)?, deg(b)?)
    }
}

/// The antilinear map induced on sections of `O(k)`:
/// `tau(sum c_i z^i) = sum (-1)^(i+1) conj(c_(k-i)) z^i`.
pub fn tau_action(k: usize, coeffs: &[ComplexScalar]) -> Result<Vec<ComplexScalar>> {
    if coeffs.len() != k + 1 {
        return usage(format!(
            "degree {k} section needs {} coefficients, got {}",
            k + 1,
            coeffs.len()
        ));
    }
    Ok((0..=k)
        .map(|i| {
            let c = coeffs[k - i].conj();
            if i % 2 == 0 {
                c.negated()
            } else {
                c
            }
        })
        .collect())
}

/// Real-linear form for one complex coefficient: `re . x + i (im . x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearCoeff {
    pub re: Vec<Rational>,
    pub im: Vec<Rational>,
}

impl LinearCoeff {
    fn zero(dim: usize) -> Self {
        LinearCoeff {
            re: vec![Rational::zero(); dim],
            im: vec![Rational::zero(); dim],
        }
    }

    fn at(&self, x: &[Rational]) -> ComplexScalar {
        let dot = |w: &[Rational]| {
            w.iter()
                .zip(x)
                .fold(Rational::zero(), |a, (p, q)| a + p * q)
        };
        ComplexScalar::new(dot(&self.re), dot(&self.im))
    }

    fn symbolic(&self) -> ComplexPoly {
        ComplexPoly::new(MultiPoly::linear(&self.re), MultiPoly::linear(&self.im))
    }
}

/// Parametrization of the real sections by `real_dim` real coordinates.
#[derive(Clone, Debug)]
pub struct RealChart {
    pub spec: BundleSpec,
    pub real_dim: usize,
    pub f: Vec<LinearCoeff>,
    pub g: Vec<LinearCoeff>,
    pub names: Vec<String>,
}

impl RealChart {
    /// `(f, g)` with coefficients linear in the chart variables.
    pub fn sections_symbolic(&self) -> (ComplexUniPoly, ComplexUniPoly) {
        let lift = |c: &[LinearCoeff]| {
            UniPoly::new(c.iter().map(LinearCoeff::symbolic).collect()).expect("nonempty")
        };
        (lift(&self.f), lift(&self.g))
    }

    pub fn sections_at(
        &self,
        x: &[Rational],
    ) -> Result<(UniPoly<ComplexScalar>, UniPoly<ComplexScalar>)> {
        if x.len() != self.real_dim {
            return usage(format!(
                "chart point has {} coordinates, expected {}",
                x.len(),
                self.real_dim
            ));
        }
        let at = |c: &[LinearCoeff]| UniPoly::new(c.iter().map(|l| l.at(x)).collect());
        Ok((at(&self.f)?, at(&self.g)?))
    }

    /// Chart coordinates of the section pair `(f, g)`, or `None` if the pair
    /// is not a real section.
    pub fn coordinates_of(
        &self,
        f: &[ComplexScalar],
        g: &[ComplexScalar],
    ) -> Option<Vec<Rational>> {
        if f.len() != self.f.len() || g.len() != self.g.len() {
            return None;
        }
        // rows: one real equation per (coefficient, re/im); last column is the target
        let mut rows = Vec::new();
        for (forms, vals) in [(&self.f, f), (&self.g, g)] {
            for (form, val) in forms.iter().zip(vals) {
                let mut re = form.re.clone();
                re.push(val.re.clone());
                rows.push(re);
                let mut im = form.im.clone();
                im.push(val.im.clone());
                rows.push(im);
            }
        }
        let aug = ExactMatrix::from_rows(rows).ok()?;
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.real_dim) {
            return None;
        }
        // the chart map is injective, so every variable is a pivot
        let mut x = vec![Rational::zero(); self.real_dim];
        for (row, &p) in pivots.iter().enumerate() {
            x[p] = r.get(row, self.real_dim).clone();
        }
        Some(x)
    }
}

/// Basis of the tau-fixed real subspace of sections of `O(k)`, `k` even,
/// computed as the kernel of `tau - id` on `(re c_0, im c_0, ..., im c_k)`.
///
/// Elimination runs on reversed columns so the free coordinates are the
/// lowest-index ones; basis vectors come out ordered by coefficient index
/// and then (re, im).
fn tau_fixed_basis(k: usize) -> Vec<(usize, Vec<Rational>)> {
    let dim = 2 * (k + 1);
    let mut t = ExactMatrix::zeros(dim, dim);
    for j in 0..dim {
        let mut e = vec![ComplexScalar::real(Rational::zero()); k + 1];
        e[j / 2] = if j % 2 == 0 {
            ComplexScalar::real(Rational::one())
        } else {
            ComplexScalar::i()
        };
        let img = tau_action(k, &e).expect("length k+1");
        for (i, c) in img.iter().enumerate() {
            t.set(2 * i, j, c.re.clone());
            t.set(2 * i + 1, j, c.im.clone());
        }
    }
    let reversed = ExactMatrix::from_fn(dim, dim, |i, j| {
        let rj = dim - 1 - j;
        let id = if i == rj {
            Rational::one()
        } else {
            Rational::zero()
        };
        t.get(i, rj) - id
    });
    let mut basis: Vec<(usize, Vec<Rational>)> = reversed
        .kernel()
        .into_iter()
        .map(|mut v| {
            v.reverse();
            let lead = v
                .iter()
                .position(|c| !c.is_zero())
                .expect("nonzero kernel vector");
            (lead, v)
        })
        .collect();
    basis.sort_by_key(|(lead, _)| *lead);
    basis
}

pub fn build_chart(spec: BundleSpec) -> Result<RealChart> {
    // re-validate; the fields are public
    let checked = BundleSpec::new(spec.m, spec.n)?;
    if checked.flavor != spec.flavor {
        return usage(format!("{spec} does not have flavor {}", spec.flavor));
    }
    let dim = spec.real_dim();
    let (m, n) = (spec.m as usize, spec.n as usize);
    match spec.flavor {
        Flavor::OddDiag => {
            // x_{2j} = Re a_j, x_{2j+1} = Im a_j
            let mut f = vec![LinearCoeff::zero(dim); m + 1];
            let mut g = vec![LinearCoeff::zero(dim); m + 1];
            for (j, fj) in f.iter_mut().enumerate() {
                fj.re[2 * j] = Rational::one();
                fj.im[2 * j + 1] = Rational::one();
            }
            for (i, gi) in g.iter_mut().enumerate() {
                let src = m - i;
                let sign = if i % 2 == 0 {
                    Rational::one()
                } else {
                    -Rational::one()
                };
                gi.re[2 * src] = sign.clone();
                gi.im[2 * src + 1] = -sign;
            }
            let names = (0..=m)
                .flat_map(|j| [format!("re_a{j}"), format!("im_a{j}")])
                .collect();
            Ok(RealChart {
                spec,
                real_dim: dim,
                f,
                g,
                names,
            })
        }
        Flavor::Even => {
            let mut f = vec![LinearCoeff::zero(dim); m + 1];
            let mut g = vec![LinearCoeff::zero(dim); n + 1];
            let mut names = Vec::with_capacity(dim);
            let mut var = 0;
            for (target, deg, label) in [(&mut f, m, "f"), (&mut g, n, "g")] {
                for (lead, v) in tau_fixed_basis(deg) {
                    for (c, coeff) in target.iter_mut().enumerate() {
                        coeff.re[var] = v[2 * c].clone();
                        coeff.im[var] = v[2 * c + 1].clone();
                    }
                    let part = if lead % 2 == 0 { "re" } else { "im" };
                    names.push(format!("{part}_{label}{}", lead / 2));
                    var += 1;
                }
            }
            if var != dim {
                return Err(Error::Internal(format!(
                    "tau-fixed subspace of {spec} has dimension {var}, expected {dim}"
                )));
            }
            Ok(RealChart {
                spec,
                real_dim: dim,
                f,
                g,
                names,
            })
        }
    }
}

/// The nonnegative polynomial of a bundle, in its chart coordinates.
#[derive(Clone, Debug)]
pub struct RhoPolynomial {
    pub spec: BundleSpec,
    pub chart: RealChart,
    pub poly: MultiPoly,
    /// True when the raw resultant was negated to make the probe positive.
    pub negated: bool,
    /// `poly = scale * Res(f, g)` restricted to the chart.
    pub scale: Rational,
    /// Chart point where `poly` is known to be strictly positive.
    pub probe: Vec<Rational>,
}

impl RhoPolynomial {
    pub fn var_names(&self) -> Vec<String> {
        if self.chart.names.len() == self.poly.var_count() {
            self.chart.names.clone()
        } else {
            default_names(self.poly.var_count())
        }
    }
}

fn cx(re: i64, im: i64) -> ComplexScalar {
    ComplexScalar::new(
        Rational::from_integer(re.into()),
        Rational::from_integer(im.into()),
    )
}

/// Section pair used to fix the sign of the polynomial.
///
/// `OddDiag`: `f = z^m + 1` and its partner `1 - z^m`. `Even`: `f = z^m - 1`
/// (or the constant `i` when `m = 0`) and `g = (2z^2 - 3z - 2)^(n/2)`
/// (or `i`), whose roots `2, -1/2` lie off the unit circle.
fn probe_sections(spec: &BundleSpec) -> (Vec<ComplexScalar>, Vec<ComplexScalar>) {
    let (m, n) = (spec.m as usize, spec.n as usize);
    match spec.flavor {
        Flavor::OddDiag => {
            let mut f = vec![cx(0, 0); m + 1];
            f[0] = cx(1, 0);
            f[m] = cx(1, 0);
            let g = (0..=m)
                .map(|i| {
                    let c = f[m - i].conj();
                    if i % 2 == 0 {
                        c
                    } else {
                        c.negated()
                    }
                })
                .collect();
            (f, g)
        }
        Flavor::Even => {
            let f = if m == 0 {
                vec![cx(0, 1)]
            } else {
                let mut f = vec![cx(0, 0); m + 1];
                f[0] = cx(-1, 0);
                f[m] = cx(1, 0);
                f
            };
            let g = if n == 0 {
                vec![cx(0, 1)]
            } else {
                let quad = UniPoly::new(vec![cx(-2, 0), cx(-3, 0), cx(2, 0)]).expect("nonempty");
                let mut acc = UniPoly::new(vec![cx(1, 0)]).expect("nonempty");
                for _ in 0..n / 2 {
                    acc = acc.mul(&quad);
                }
                acc.coeffs().to_vec()
            };
            (f, g)
        }
    }
}

/// Deterministic fallback search: points with coordinates in {-2..2},
/// enumerated in increasing max-norm.
fn grid_probe(p: &MultiPoly) -> Option<(Vec<Rational>, Rational)> {
    let dim = p.var_count();
    for radius in 1..=2i64 {
        let side = (2 * radius + 1) as usize;
        let total = side.checked_pow(dim as u32)?;
        for idx in 0..total {
            let mut k = idx;
            let pt: Vec<i64> = (0..dim)
                .map(|_| {
                    let c = (k % side) as i64 - radius;
                    k /= side;
                    c
                })
                .collect();
            if pt.iter().map(|c| c.abs()).max() != Some(radius) {
                continue;
            }
            let q: Vec<Rational> = pt
                .into_iter()
                .map(|c| Rational::from_integer(c.into()))
                .collect();
            let v = p.evaluate(&q).ok()?;
            if !v.is_zero() {
                return Some((q, v));
            }
        }
    }
    None
}

/// Restricts the resultant to the real sections of `spec`, clears
/// denominators and fixes the sign so the probe section evaluates positive.
pub fn build_rho(spec: BundleSpec) -> Result<RhoPolynomial> {
    if spec.total_degree() < 2 {
        return usage(format!("{spec}: total degree must be at least 2"));
    }
    let chart = build_chart(spec)?;
    let (f, g) = chart.sections_symbolic();
    let res = resultant(&f, &g)?;
    if !res.im.is_zero() {
        return Err(Error::Internal(format!(
            "resultant of real sections of {spec} has a nonzero imaginary part"
        )));
    }
    let raw = res.re;
    let d = spec.total_degree();
    if !raw.is_homogeneous() || raw.degree().finite() != Some(d) {
        return Err(Error::Internal(format!(
            "resultant of {spec} is not homogeneous of degree {d}"
        )));
    }
    let (poly, scale) = raw.primitive_part();
    let (pf, pg) = probe_sections(&spec);
    let direct = chart
        .coordinates_of(&pf, &pg)
        .map(|x| {
            let v = poly.evaluate(&x).expect("chart dimension");
            (x, v)
        })
        .filter(|(_, v)| !v.is_zero());
    let (probe, value) = match direct.or_else(|| grid_probe(&poly)) {
        Some(found) => found,
        None => {
            return Err(Error::Internal(format!(
                "no point with a nonzero value found for {spec}"
            )))
        }
    };
    let negated = value.is_negative();
    let (poly, scale) = if negated {
        (-&poly, -scale)
    } else {
        (poly, scale)
    };
    Ok(RhoPolynomial {
        spec,
        chart,
        poly,
        negated,
        scale,
        probe,
    })
}

/// The bracket invariants `r = [3,0]`, `s = -[2,1]`, `u = [3,1]`,
/// `v = [3,2]` of a real section of `O(3)+O(3)`.
#[derive(Clone, Debug)]
pub struct BracketInvariants {
    pub r: MultiPoly,
    pub s: MultiPoly,
    pub u: ComplexPoly,
    pub v: ComplexPoly,
}

pub fn bracket_invariants(chart: &RealChart) -> Result<BracketInvariants> {
    if chart.spec.flavor != Flavor::OddDiag || chart.spec.m != 3 {
        return usage(format!(
            "bracket invariants are defined for O(3)+O(3), got {}",
            chart.spec
        ));
    }
    let (f, g) = chart.sections_symbolic();
    let b = |i, j| bracket(&f, &g, i, j).map(|br| br.value);
    let r = b(3, 0)?;
    let s = b(2, 1)?;
    if !r.im.is_zero() || !s.im.is_zero() {
        return Err(Error::Internal(
            "[3,0] or [2,1] is not real on the chart".into(),
        ));
    }
    Ok(BracketInvariants {
        r: r.re,
        s: -&s.re,
        u: b(3, 1)?,
        v: b(3, 2)?,
    })
}

/// `r^2 (r - s) + 2 r |u|^2 - (r - s)|v|^2 + u^2 conj(v) + conj(u)^2 v`.
pub fn rho_closed_form(inv: &BracketInvariants) -> MultiPoly {
    let r = &inv.r;
    let r_minus_s = r - &inv.s;
    let u2 = inv.u.norm_sq();
    let v2 = inv.v.norm_sq();
    let cross = inv.u.times(&inv.u).times(&inv.v.conj());
    // u^2 conj(v) + conj(u^2 conj(v)) = 2 Re(u^2 conj(v))
    let two = Rational::from_integer(2.into());
    let t1 = &(r * r) * &r_minus_s;
    let t2 = (r * &u2).scale(&two);
    let t3 = &r_minus_s * &v2;
    &(&(&t1 + &t2) - &t3) + &cross.re.scale(&two)
}

/// `(r^2 - |v|^2)^2 + |r conj(u) + u conj(v)|^2`, which equals `r * rho`.
pub fn rational_form_numerator(inv: &BracketInvariants) -> MultiPoly {
    let r = &inv.r;
    let a = &(r * r) - &inv.v.norm_sq();
    let b = ComplexPoly::real(r.clone())
        .times(&inv.u.conj())
        .plus(&inv.u.times(&inv.v.conj()));
    &(&a * &a) + &b.norm_sq()
}

/// Evaluates `((r^2 - |v|^2)^2 + |r conj(u) + u conj(v)|^2) / r` at a chart
/// point; undefined where `r` vanishes.
pub fn rho_rational_form(inv: &BracketInvariants, point: &[Rational]) -> Result<Rational> {
    let r = inv.r.evaluate(point)?;
    if r.is_zero() {
        return Err(Error::Domain("rational form needs r != 0".into()));
    }
    let u = inv.u.evaluate(point)?;
    let v = inv.v.evaluate(point)?;
    let rr = ComplexScalar::real(r.clone());
    let a = &r * &r - v.norm_sq();
    let b = rr.times(&u.conj()).plus(&u.times(&v.conj()));
    Ok((&a * &a + b.norm_sq()) / r)
}

/// Basis of the real sections vanishing at `z0` (and hence at its
/// antipode). Every point of the span is a zero of the resultant.
pub fn exact_zero_family(chart: &RealChart, z0: &ComplexScalar) -> Result<Vec<Vec<Rational>>> {
    let dim = chart.real_dim;
    let powers = |k: usize| {
        let mut p = vec![z0.one_like()];
        for i in 1..=k {
            p.push(p[i - 1].times(z0));
        }
        p
    };
    let mut rows = Vec::new();
    for coeffs in [&chart.f, &chart.g] {
        let zp = powers(coeffs.len() - 1);
        let mut re_row = vec![Rational::zero(); dim];
        let mut im_row = vec![Rational::zero(); dim];
        for (c, zi) in coeffs.iter().zip(&zp) {
            // (re_c + i im_c) * zi, linear in x
            for k in 0..dim {
                re_row[k] += &c.re[k] * &zi.re - &c.im[k] * &zi.im;
                im_row[k] += &c.re[k] * &zi.im + &c.im[k] * &zi.re;
            }
        }
        rows.push(re_row);
        rows.push(im_row);
    }
    Ok(ExactMatrix::from_rows(rows)?.kernel())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, Monomial};

    fn spec(s: &str) -> BundleSpec {
        s.parse().unwrap()
    }

    #[test]
    fn spec_parsing() {
        assert_eq!(spec("O(3)+O(3)").flavor, Flavor::OddDiag);
        assert_eq!(spec("O(4) + O(2)").flavor, Flavor::Even);
        assert_eq!(spec("O(4)+O(2)").to_string(), "O(4)+O(2)");
        assert!("O(3)+O(1)".parse::<BundleSpec>().is_err());
        assert!("O(2)+O(1)".parse::<BundleSpec>().is_err());
        assert!("O(2)xO(2)".parse::<BundleSpec>().is_err());
    }

    #[test]
    fn tau_fixes_degree_two_real_sections() {
        // a + r z - conj(a) z^2
        let a = cx(2, -5);
        let f = vec![a.clone(), cx(7, 0), a.conj().negated()];
        assert_eq!(tau_action(2, &f).unwrap(), f);
        assert!(tau_action(2, &f[..2]).is_err());
    }

    #[test]
    fn tau_squares_to_minus_one_in_odd_degree() {
        let c = vec![cx(1, 2), cx(-3, 4)];
        let twice = tau_action(1, &tau_action(1, &c).unwrap()).unwrap();
        assert_eq!(twice, vec![cx(-1, -2), cx(3, -4)]);
    }

    #[test]
    fn degree_one_chart_matches_printed_pair() {
        let chart = build_chart(spec("O(1)+O(1)")).unwrap();
        assert_eq!(chart.real_dim, 4);
        // a0 = 1 + 2i, a1 = 3 - i  ->  g = conj(a1) - conj(a0) z
        let x = [rat(1), rat(2), rat(3), rat(-1)];
        let (f, g) = chart.sections_at(&x).unwrap();
        assert_eq!(f.coeffs(), &[cx(1, 2), cx(3, -1)]);
        assert_eq!(g.coeffs(), &[cx(3, 1), cx(-1, 2)]);
    }

    #[test]
    fn degree_two_chart_matches_printed_pair() {
        let chart = build_chart(spec("O(2)+O(2)")).unwrap();
        assert_eq!(chart.real_dim, 6);
        assert_eq!(
            chart.names,
            ["re_f0", "im_f0", "re_f1", "re_g0", "im_g0", "re_g1"]
        );
        let x = [rat(1), rat(2), rat(3), rat(4), rat(5), rat(6)];
        let (f, g) = chart.sections_at(&x).unwrap();
        // f = a + r z - conj(a) z^2 with a = 1 + 2i, r = 3
        assert_eq!(f.coeffs(), &[cx(1, 2), cx(3, 0), cx(-1, 2)]);
        assert_eq!(g.coeffs(), &[cx(4, 5), cx(6, 0), cx(-4, 5)]);
    }

    #[test]
    fn chart_image_is_tau_invariant() {
        for s in [
            "O(1)+O(1)",
            "O(3)+O(3)",
            "O(5)+O(5)",
            "O(4)+O(2)",
            "O(0)+O(2)",
        ] {
            let chart = build_chart(spec(s)).unwrap();
            let x: Vec<Rational> = (0..chart.real_dim).map(|i| rat(i as i64 * 3 - 5)).collect();
            let (f, g) = chart.sections_at(&x).unwrap();
            let (m, n) = (chart.spec.m as usize, chart.spec.n as usize);
            let tf = tau_action(m, f.coeffs()).unwrap();
            let tg = tau_action(n, g.coeffs()).unwrap();
            match chart.spec.flavor {
                Flavor::Even => {
                    assert_eq!(tf, f.coeffs(), "{s}");
                    assert_eq!(tg, g.coeffs(), "{s}");
                }
                Flavor::OddDiag => {
                    // (f, g) = (tau g, -tau f)
                    assert_eq!(tg, f.coeffs(), "{s}");
                    let neg: Vec<_> = tf.iter().map(|c| c.negated()).collect();
                    assert_eq!(neg, g.coeffs(), "{s}");
                }
            }
            assert_eq!(chart.coordinates_of(f.coeffs(), g.coeffs()), Some(x));
        }
    }

    #[test]
    fn degree_one_rho_is_four_squares() {
        let rho = build_rho(spec("O(1)+O(1)")).unwrap();
        let expected = MultiPoly::from_terms(
            4,
            (0..4).map(|i| {
                let mut e = vec![0; 4];
                e[i] = 2;
                (Monomial::new(e), rat(1))
            }),
        )
        .unwrap();
        assert_eq!(rho.poly, expected);
        assert!(!rho.negated);
    }

    #[test]
    fn cubic_invariants_at_simple_sections() {
        let chart = build_chart(spec("O(3)+O(3)")).unwrap();
        let inv = bracket_invariants(&chart).unwrap();
        // f = z^3 + 1
        let p1 = [1, 0, 0, 0, 0, 0, 1, 0].map(rat);
        assert_eq!(inv.r.evaluate(&p1).unwrap(), rat(2));
        assert_eq!(inv.s.evaluate(&p1).unwrap(), rat(0));
        assert!(inv.u.evaluate(&p1).unwrap().is_zero_elem());
        assert!(inv.v.evaluate(&p1).unwrap().is_zero_elem());
        assert_eq!(rho_rational_form(&inv, &p1).unwrap(), rat(8));
        // f = z^3 - z^2 + z - 1
        let p2 = [-1, 0, 1, 0, -1, 0, 1, 0].map(rat);
        assert_eq!(inv.r.evaluate(&p2).unwrap(), rat(2));
        assert_eq!(inv.s.evaluate(&p2).unwrap(), rat(2));
        assert!(inv.u.evaluate(&p2).unwrap().is_zero_elem());
        assert_eq!(inv.v.evaluate(&p2).unwrap(), cx(2, 0));
        assert_eq!(rho_rational_form(&inv, &p2).unwrap(), rat(0));
        let closed = rho_closed_form(&inv);
        assert_eq!(closed.evaluate(&p1).unwrap(), rat(8));
        assert_eq!(closed.evaluate(&p2).unwrap(), rat(0));
    }

    #[test]
    fn rational_form_rejects_r_zero() {
        let chart = build_chart(spec("O(3)+O(3)")).unwrap();
        let inv = bracket_invariants(&chart).unwrap();
        let p = [0, 0, 1, 0, 0, 0, 0, 0].map(rat);
        assert!(matches!(rho_rational_form(&inv, &p), Err(Error::Domain(_))));
        let other = build_chart(spec("O(1)+O(1)")).unwrap();
        assert!(bracket_invariants(&other).is_err());
    }

    #[test]
    fn zero_family_at_i() {
        let chart = build_chart(spec("O(3)+O(3)")).unwrap();
        let basis = exact_zero_family(&chart, &cx(0, 1)).unwrap();
        assert_eq!(basis.len(), 4);
        let target = [-1, 0, 1, 0, -1, 0, 1, 0].map(rat).to_vec();
        let mut rows = basis.clone();
        let before = ExactMatrix::from_rows(rows.clone()).unwrap().rank();
        rows.push(target);
        assert_eq!(ExactMatrix::from_rows(rows).unwrap().rank(), before);
    }
}
