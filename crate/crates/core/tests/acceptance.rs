//! End-to-end acceptance checks. Each criterion prints a single PASS/FAIL
//! line; the process exits non-zero when any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};
use rand::Rng;

use rrl::algebra::{
    integer_determinant, rat, ComplexScalar, ExactMatrix, Monomial, MultiPoly, Rational, Ring,
};
use rrl::chern::{
    c2_number, chern_character_sym2, chern_classes, sos_obstruction, CurveBundleParams,
};
use rrl::claims::{bracket_identities, hessian_survey, sample_zero_points};
use rrl::resultant::{bezout3_resultant, bracket, resultant, UniPoly, BEZOUT_SIGN};
use rrl::sampling::{nonnegativity_sweep, rng};
use rrl::sections::{build_rho, BundleSpec, RhoPolynomial};
use rrl::sos::{
    certify, facial_reduce, gram_system, verify_certificate, Certificate, CertifyMode,
    CertifyOptions,
};

const SEED: u64 = 42;

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);
type Suite = fn(&mut TestRunner) -> Result<(), String>;
type FacialInstance = (MultiPoly, Vec<MultiPoly>, Vec<Vec<Rational>>);

fn rho(m: u32, n: u32) -> RhoPolynomial {
    build_rho(BundleSpec::new(m, n).expect("supported bundle")).expect("rho builds")
}

fn var(n: usize, i: usize) -> MultiPoly {
    MultiPoly::var(n, i)
}

fn require(cond: bool, what: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn within(limit: Duration, elapsed: Duration) -> Result<(), String> {
    require(
        elapsed < limit,
        format!("took {elapsed:.2?}, limit {limit:?}"),
    )
}

fn criterion_1() -> Verdict {
    let start = Instant::now();
    let r = rho(1, 1);
    let elapsed = start.elapsed();
    let n = r.poly.var_count();
    require(n == 4, format!("{n} variables"))?;
    let sum = (0..n).fold(MultiPoly::zero(n), |acc, i| {
        &acc + &(&var(n, i) * &var(n, i))
    });
    let c = r.poly.coefficient(&Monomial::new(vec![2, 0, 0, 0]));
    require(c.is_positive(), format!("leading coefficient {c}"))?;
    require(r.poly == sum.scale(&c), format!("rho = {:?}", r.poly))?;
    within(Duration::from_secs(1), elapsed)?;
    Ok(format!(
        "rho = {c} * (x1^2+x2^2+x3^2+x4^2) in {elapsed:.2?}"
    ))
}

fn criterion_2() -> Verdict {
    let start = Instant::now();
    let r = rho(2, 2);
    // chart: a = x0 + i x1, r = x2, b = x3 + i x4, s = x5
    let n = 6;
    let x = |i| var(n, i);
    let re_as_br = &(&x(0) * &x(5)) - &(&x(3) * &x(2));
    let im_as_br = &(&x(1) * &x(5)) - &(&x(4) * &x(2));
    // a conj(b) - conj(a) b = 2i (x1 x3 - x0 x4), whose square is -4 (x1 x3 - x0 x4)^2
    let im_part = &(&x(1) * &x(3)) - &(&x(0) * &x(4));
    let expansion = &(&(&re_as_br * &re_as_br) + &(&im_as_br * &im_as_br))
        + &(&im_part * &im_part).scale(&rat(4));
    require(
        r.poly == expansion,
        format!("rho differs from the expansion: {:?}", r.poly),
    )?;

    // three-square Gram witness: 4 (x0x4 - x1x3)^2 + (x0x5 - x2x3)^2 + (x1x5 - x2x4)^2
    let squares = [
        (rat(4), &(&x(0) * &x(4)) - &(&x(1) * &x(3))),
        (rat(1), &(&x(0) * &x(5)) - &(&x(2) * &x(3))),
        (rat(1), &(&x(1) * &x(5)) - &(&x(2) * &x(4))),
    ];
    let prob = gram_system(&r.poly).map_err(|e| e.to_string())?;
    let k = prob.size();
    let mut q = ExactMatrix::<Rational>::zeros(k, k);
    for (w, sq) in &squares {
        let mut c = vec![Rational::zero(); k];
        for (m, v) in sq.terms() {
            let idx = prob
                .basis
                .index_of(m)
                .ok_or("square term outside the half-degree basis")?;
            c[idx] = v.clone();
        }
        for a in 0..k {
            for b in 0..k {
                let cur = q.get(a, b).clone();
                q.set(a, b, cur + w * &c[a] * &c[b]);
            }
        }
    }
    require(
        prob.satisfied_by(&q),
        "Gram system not satisfied by the three-square witness",
    )?;
    require(q.is_psd(), "witness Gram matrix is not PSD")?;
    require(q.rank() == 3, format!("witness Gram rank {}", q.rank()))?;
    let elapsed = start.elapsed();
    within(Duration::from_secs(5), elapsed)?;
    Ok(format!(
        "expansion matches ({} terms), 3-square Gram witness exact on {k} monomials, {elapsed:.2?}",
        r.poly.term_count()
    ))
}

fn criterion_3() -> Verdict {
    let r = rho(3, 3);
    let deg = r.poly.degree().finite();
    require(r.poly.is_homogeneous(), "not homogeneous")?;
    require(deg == Some(6), format!("degree {deg:?}"))?;
    require(
        r.poly.var_count() == 8,
        format!("{} variables", r.poly.var_count()),
    )?;
    require(
        r.poly.term_count() == 224,
        format!("{} terms", r.poly.term_count()),
    )?;
    Ok("homogeneous, degree 6, 8 variables, 224 terms".into())
}

fn criterion_4() -> Verdict {
    let start = Instant::now();
    let mut parts = Vec::new();
    for (m, n) in [(1, 1), (2, 2), (3, 3), (4, 2)] {
        let r = rho(m, n);
        let rep = nonnegativity_sweep(&r.poly, 100_000, SEED).map_err(|e| e.to_string())?;
        require(rep.samples == 100_000, "sample count")?;
        require(
            rep.passed && rep.negative_count == 0,
            format!("O({m})+O({n}): {} negative", rep.negative_count),
        )?;
        // the reported minimizer re-evaluates exactly to the reported minimum
        let point: Vec<Rational> = rep
            .argmin
            .iter()
            .map(|s| s.parse().expect("rational"))
            .collect();
        let value = r.poly.evaluate(&point).map_err(|e| e.to_string())?;
        require(
            value.to_string() == rep.min_value,
            "argmin does not reproduce the minimum",
        )?;
        require(!value.is_negative(), "negative minimum")?;
        parts.push(format!("O({m})+O({n}) min {:.3e}", rep.min_value_f64));
    }
    let elapsed = start.elapsed();
    within(Duration::from_secs(120), elapsed)?;
    Ok(format!("{} in {elapsed:.2?}", parts.join(", ")))
}

fn cs(re: i64, im: i64) -> ComplexScalar {
    ComplexScalar::new(rat(re), rat(im))
}

fn criterion_5() -> Verdict {
    let r = rho(3, 3);
    let ids = bracket_identities(&r).map_err(|e| e.to_string())?;
    require(
        ids.closed_form,
        "closed form differs from the expanded polynomial",
    )?;
    require(ids.rs_identity, "rs != |u|^2 + |v|^2")?;
    require(
        ids.rational_form,
        "r rho != (r^2-|v|^2)^2 + |r conj(u) + u conj(v)|^2",
    )?;

    // pointwise cross-check through brackets of the actual sections and the
    // Sylvester resultant
    let mut g = rng(SEED);
    for _ in 0..50 {
        let x: Vec<Rational> = (0..8).map(|_| rat(g.gen_range(-6..=6))).collect();
        let (f, h) = r.chart.sections_at(&x).map_err(|e| e.to_string())?;
        let b = |i, j| bracket(&f, &h, i, j).expect("in range").value;
        let rr = b(3, 0).re;
        let s = -b(2, 1).re;
        let u = b(3, 1);
        let v = b(3, 2);
        let rho_x = r.poly.evaluate(&x).map_err(|e| e.to_string())?;
        let res = resultant(&f, &h).map_err(|e| e.to_string())?;
        require(res.im.is_zero(), "resultant of a real section is not real")?;
        require(
            rho_x == &r.scale * &res.re,
            "rho differs from the scaled resultant",
        )?;
        require(
            &rr * &s == u.norm_sq() + v.norm_sq(),
            "rs identity fails pointwise",
        )?;
        let r2v = &rr * &rr - v.norm_sq();
        let w = u.conj().scale(&rr).plus(&u.times(&v.conj()));
        require(
            &rr * &rho_x == &r2v * &r2v + w.norm_sq(),
            "rational form fails pointwise",
        )?;
    }
    Ok(
        "closed form, rs = |u|^2+|v|^2 and r rho identity hold as polynomials and at 50 points"
            .into(),
    )
}

fn criterion_6() -> Verdict {
    let start = Instant::now();
    let r = rho(3, 3);
    let zeros = sample_zero_points(&r.chart, 100, SEED).map_err(|e| e.to_string())?;
    require(zeros.len() == 100, format!("{} zeros", zeros.len()))?;
    let survey = hessian_survey(&r.poly, &zeros, 4).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let summary = format!(
        "100 zeros from 25 base points: vanish {}, psd {}, rank histogram {:?}, 5x5 minors vanish {}, \
         some 4x4 minor nonzero {}, rank exceptions {}, {elapsed:.2?}",
        survey.all_vanish,
        survey.all_psd,
        survey.rank_histogram,
        survey.all_5x5_minors_vanish,
        survey.some_4x4_minor_nonzero_everywhere,
        survey.rank_exceptions.len()
    );
    let ok = survey.all_vanish
        && survey.all_psd
        && survey.rank_exceptions.is_empty()
        && survey.all_5x5_minors_vanish
        && survey.some_4x4_minor_nonzero_everywhere
        && elapsed < Duration::from_secs(300);
    if ok {
        Ok(summary)
    } else {
        Err(summary)
    }
}

fn gaussian(g: &mut impl Rng, bound: i64) -> ComplexScalar {
    cs(g.gen_range(-bound..=bound), g.gen_range(-bound..=bound))
}

fn random_poly(g: &mut impl Rng, degree: usize) -> UniPoly<ComplexScalar> {
    let mut c: Vec<ComplexScalar> = (0..=degree).map(|_| gaussian(g, 9)).collect();
    while c[degree].is_zero_elem() {
        c[degree] = gaussian(g, 9);
    }
    UniPoly::new(c).expect("nonempty")
}

fn from_roots(lead: &ComplexScalar, roots: &[ComplexScalar]) -> UniPoly<ComplexScalar> {
    let mut c = vec![lead.clone()];
    for a in roots {
        // multiply by (z - a)
        let mut next = vec![cs(0, 0); c.len() + 1];
        for (i, ci) in c.iter().enumerate() {
            next[i + 1] = next[i + 1].plus(ci);
            next[i] = next[i].minus(&ci.times(a));
        }
        c = next;
    }
    UniPoly::new(c).expect("nonempty")
}

fn pow(a: &ComplexScalar, e: usize) -> ComplexScalar {
    (0..e).fold(cs(1, 0), |acc, _| acc.times(a))
}

fn criterion_7() -> Verdict {
    let mut g = rng(SEED);
    let eps = cs(BEZOUT_SIGN as i64, 0);
    for k in 0..1000 {
        let (f, h) = (random_poly(&mut g, 3), random_poly(&mut g, 3));
        let bez = bezout3_resultant(&f, &h).map_err(|e| e.to_string())?;
        let syl = resultant(&f, &h).map_err(|e| e.to_string())?;
        require(
            bez == eps.times(&syl),
            format!("pair #{k}: Bezout {bez:?} vs Sylvester {syl:?}"),
        )?;
    }
    // product formula over prescribed roots
    for k in 0..200 {
        let (m, n) = (g.gen_range(1..=4usize), g.gen_range(1..=4usize));
        let (a, b) = (gaussian(&mut g, 3), gaussian(&mut g, 3));
        if a.is_zero_elem() || b.is_zero_elem() {
            continue;
        }
        let al: Vec<_> = (0..m).map(|_| gaussian(&mut g, 4)).collect();
        let be: Vec<_> = (0..n).map(|_| gaussian(&mut g, 4)).collect();
        let mut expect = pow(&a, n).times(&pow(&b, m));
        for x in &al {
            for y in &be {
                expect = expect.times(&x.minus(y));
            }
        }
        let got =
            resultant(&from_roots(&a, &al), &from_roots(&b, &be)).map_err(|e| e.to_string())?;
        require(
            got == expect,
            format!("root pair #{k}: product formula mismatch"),
        )?;
    }
    // multiplicativity and swap sign on random specializations
    for k in 0..300 {
        let (d1, d2, d3) = (g.gen_range(1..=3), g.gen_range(1..=3), g.gen_range(1..=3));
        let (f1, f2, h) = (
            random_poly(&mut g, d1),
            random_poly(&mut g, d2),
            random_poly(&mut g, d3),
        );
        let res = |p: &UniPoly<ComplexScalar>, q: &UniPoly<ComplexScalar>| {
            resultant(p, q).expect("resultant")
        };
        let lhs = res(&f1.mul(&f2), &h);
        require(
            lhs == res(&f1, &h).times(&res(&f2, &h)),
            format!("specialization #{k}: multiplicativity"),
        )?;
        let sign = if (d1 * d3) % 2 == 0 {
            cs(1, 0)
        } else {
            cs(-1, 0)
        };
        require(
            res(&h, &f1) == sign.times(&res(&f1, &h)),
            format!("specialization #{k}: swap sign"),
        )?;
    }
    Ok(format!("Bezout = {BEZOUT_SIGN} * Sylvester on 1000 cubic pairs; product formula, multiplicativity and swap sign hold"))
}

fn criterion_8() -> Verdict {
    let start = Instant::now();
    let mut cases = 0;
    for d in 2..=12i64 {
        for genus in 0..=9i64 {
            for r in 1..=3i64 {
                let p = CurveBundleParams { d, g: genus, r };
                let (c1, _) = chern_classes(&chern_character_sym2(p));
                let c1_ok = c1.c0.is_zero()
                    && c1.cx == rat(d)
                    && c1.cdelta == Rational::new((-r).into(), 2.into())
                    && c1.cxx.is_zero()
                    && c1.cxdelta.is_zero()
                    && c1.cdeltadelta.is_zero();
                require(c1_ok, format!("c1 at {p:?}: {c1:?}"))?;
                let expect = Rational::new(
                    (d * (d + 1 - 2 * r) - r * (r - 1) * (genus - 1)).into(),
                    2.into(),
                );
                let c2 = c2_number(p);
                require(c2 == expect, format!("c2 at {p:?}: {c2} vs {expect}"))?;
                if r == 2 {
                    require(
                        c2 == rat(d * (d - 3) / 2 + 1 - genus),
                        format!("rank-2 form at {p:?}"),
                    )?;
                }
                cases += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    within(Duration::from_secs(1), elapsed)?;
    Ok(format!("{cases} (d,g,r) triples exact in {elapsed:.2?}"))
}

fn criterion_9() -> Verdict {
    let o = sos_obstruction(6, 0);
    require(o.deg_v2 == 10, format!("degV2 {}", o.deg_v2))?;
    require(o.bound == "9", format!("bound {}", o.bound))?;
    require(o.obstructed, "not obstructed")?;
    require(o.degree_hypothesis, "degree hypothesis false")?;
    let (d, g) = (o.d, o.g);
    require(d * (d - 6) >= 4 * (g - 1), "arithmetic")?;
    Ok("degV2 = 10 >= 9 = 36/4, obstructed, d(d-6) >= 4(g-1)".into())
}

fn criterion_10() -> Verdict {
    let start = Instant::now();
    let opts = CertifyOptions {
        seed: SEED,
        ..CertifyOptions::default()
    };
    let r2 = rho(2, 2);
    let rep = certify(&r2.poly, CertifyMode::Auto, &[], &opts).map_err(|e| e.to_string())?;
    let Certificate::SosWitness { exact, squares, .. } = &rep.certificate else {
        return Err(format!("O(2)+O(2): {}", rep.certificate.kind()));
    };
    let ver =
        verify_certificate(&r2.poly, &[], &rep.certificate, 1e-6).map_err(|e| e.to_string())?;
    require(
        ver.valid,
        format!("O(2)+O(2) witness rejected: {}", ver.detail),
    )?;
    let residual = ver.residual.ok_or("no residual")?;
    require(residual <= 1e-6, format!("residual {residual}"))?;
    let first = format!(
        "O(2)+O(2) SOSWitness via {:?} ({} squares, exact {exact}, residual {residual:.1e})",
        rep.branch,
        squares.len()
    );

    let r3 = rho(3, 3);
    let zeros = sample_zero_points(&r3.chart, 100, SEED).map_err(|e| e.to_string())?;
    let rep = certify(&r3.poly, CertifyMode::Auto, &zeros, &opts).map_err(|e| e.to_string())?;
    let detail = match &rep.certificate {
        Certificate::NonSosExact {
            witness, face_dim, ..
        } => format!("NonSOSExact ({}, face dim {face_dim})", witness.label()),
        Certificate::NonSosNumeric {
            margin, face_dim, ..
        } => format!("NonSOSNumeric (margin {margin:.2e}, face dim {face_dim})"),
        other => return Err(format!("O(3)+O(3): {}", other.kind())),
    };
    let ver =
        verify_certificate(&r3.poly, &zeros, &rep.certificate, 1e-6).map_err(|e| e.to_string())?;
    require(
        ver.valid,
        format!("O(3)+O(3) evidence rejected: {}", ver.detail),
    )?;
    let elapsed = start.elapsed();
    within(Duration::from_secs(600), elapsed)?;
    Ok(format!(
        "{first}; O(3)+O(3) {detail} via {:?}; {elapsed:.2?}",
        rep.branch
    ))
}

// ---- property suites --------------------------------------------------

fn small_rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

const NVARS: usize = 3;

fn poly_strategy() -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec(
        (prop::collection::vec(0u32..=2, NVARS), small_rational()),
        0..6,
    )
    .prop_map(|terms| {
        MultiPoly::from_terms(NVARS, terms.into_iter().map(|(e, c)| (Monomial::new(e), c)))
            .expect("valid terms")
    })
}

fn point_strategy() -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(small_rational(), NVARS)
}

fn rational_matrix(max: usize) -> impl Strategy<Value = Vec<Vec<Rational>>> {
    (1..=max)
        .prop_flat_map(|n| prop::collection::vec(prop::collection::vec(small_rational(), n), n))
}

/// Cofactor expansion along the first row.
fn laplace(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut total = Rational::zero();
    for j in 0..n {
        let minor: Vec<Vec<Rational>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(c, _)| *c != j)
                    .map(|(_, v)| v.clone())
                    .collect()
            })
            .collect();
        let term = &m[0][j] * laplace(&minor);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

fn check(cond: bool, what: &str) -> Result<(), TestCaseError> {
    if cond {
        Ok(())
    } else {
        Err(TestCaseError::fail(what.to_string()))
    }
}

fn ring_axioms(runner: &mut TestRunner) -> Result<(), String> {
    runner
        .run(
            &(poly_strategy(), poly_strategy(), poly_strategy()),
            |(a, b, c)| {
                let zero = MultiPoly::zero(NVARS);
                let one = MultiPoly::one(NVARS);
                check(&(&a + &b) + &c == &a + &(&b + &c), "additive associativity")?;
                check(&a + &b == &b + &a, "additive commutativity")?;
                check(&a + &zero == a, "additive identity")?;
                check((&a + &(-&a)).is_zero(), "additive inverse")?;
                check(
                    &(&a * &b) * &c == &a * &(&b * &c),
                    "multiplicative associativity",
                )?;
                check(&a * &b == &b * &a, "multiplicative commutativity")?;
                check(&a * &one == a, "multiplicative identity")?;
                check(&a * &(&b + &c) == &(&a * &b) + &(&a * &c), "distributivity")?;
                check(a.minus(&b) == &a - &b, "ring trait agrees with operators")?;
                Ok(())
            },
        )
        .map_err(|e| e.to_string())
}

fn evaluation_homomorphism(runner: &mut TestRunner) -> Result<(), String> {
    runner
        .run(
            &(poly_strategy(), poly_strategy(), point_strategy()),
            |(a, b, x)| {
                let ev = |p: &MultiPoly| p.evaluate(&x).expect("matching arity");
                check(ev(&(&a + &b)) == ev(&a) + ev(&b), "evaluation of a sum")?;
                check(ev(&(&a * &b)) == ev(&a) * ev(&b), "evaluation of a product")?;
                check(ev(&MultiPoly::one(NVARS)).is_one(), "evaluation of one")?;
                Ok(())
            },
        )
        .map_err(|e| e.to_string())
}

fn determinant_vs_laplace(runner: &mut TestRunner) -> Result<(), String> {
    runner
        .run(&rational_matrix(5), |rows| {
            let oracle = laplace(&rows);
            let m = ExactMatrix::from_rows(rows.clone()).expect("square");
            check(
                m.determinant().expect("square") == oracle,
                "Gaussian elimination determinant",
            )?;
            check(
                m.determinant_by_minors().expect("square") == oracle,
                "generic ring determinant",
            )?;
            let ints: Vec<Vec<num_bigint::BigInt>> = rows
                .iter()
                .map(|r| r.iter().map(|v| v.numer().clone()).collect())
                .collect();
            let int_oracle = laplace(
                &ints
                    .iter()
                    .map(|r| {
                        r.iter()
                            .map(|v| Rational::from_integer(v.clone()))
                            .collect()
                    })
                    .collect::<Vec<_>>(),
            );
            check(
                Rational::from_integer(integer_determinant(&ints)) == int_oracle,
                "Bareiss determinant",
            )?;
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn kernel_rank_law(runner: &mut TestRunner) -> Result<(), String> {
    // products of thin factors give rank-deficient matrices often
    let strat = (1usize..=6, 1usize..=6, 1usize..=6).prop_flat_map(|(r, k, c)| {
        (
            prop::collection::vec(prop::collection::vec(small_rational(), k), r),
            prop::collection::vec(prop::collection::vec(small_rational(), c), k),
        )
    });
    runner
        .run(&strat, |(a, b)| {
            let (r, k, c) = (a.len(), b.len(), b[0].len());
            let m = ExactMatrix::from_fn(r, c, |i, j| {
                (0..k).map(|t| &a[i][t] * &b[t][j]).sum::<Rational>()
            });
            let ker = m.kernel();
            check(m.rank() + ker.len() == c, "rank + nullity = columns")?;
            for v in &ker {
                check(
                    m.mul_vec(v).expect("width").iter().all(|x| x.is_zero()),
                    "kernel vector annihilated",
                )?;
            }
            if !ker.is_empty() {
                let km = ExactMatrix::from_rows(ker.clone()).expect("rectangular");
                check(km.rank() == ker.len(), "kernel basis independent")?;
            }
            check(m.rank() == m.transpose().rank(), "row rank = column rank")?;
            Ok(())
        })
        .map_err(|e| e.to_string())
}

/// `l^2 * (m1^2 + m2^2)` in three variables, with zeros on the plane `l = 0`.
fn facial_instance() -> impl Strategy<Value = FacialInstance> {
    let lin = || {
        prop::collection::vec(-3i64..=3, NVARS)
            .prop_filter("nonzero form", |v| v.iter().any(|&c| c != 0))
    };
    let pts = prop::collection::vec((-4i64..=4, -4i64..=4), 1..=8);
    (lin(), lin(), lin(), pts).prop_map(|(l, m1, m2, pts)| {
        let lp = |c: &[i64]| MultiPoly::linear(&c.iter().map(|&x| rat(x)).collect::<Vec<_>>());
        let l_poly = lp(&l);
        let factors = vec![&l_poly * &lp(&m1), &l_poly * &lp(&m2)];
        let p = factors
            .iter()
            .fold(MultiPoly::zero(NVARS), |acc, q| &acc + &(q * q));
        let plane = ExactMatrix::from_rows(vec![l.iter().map(|&x| rat(x)).collect()])
            .expect("row")
            .kernel();
        let zeros = pts
            .into_iter()
            .map(|(s, t)| {
                (0..NVARS)
                    .map(|i| &plane[0][i] * rat(s) + &plane[1][i] * rat(t))
                    .collect()
            })
            .collect();
        (p, factors, zeros)
    })
}

fn in_span(basis: &[Vec<Rational>], v: &[Rational]) -> bool {
    if basis.is_empty() {
        return v.iter().all(|x| x.is_zero());
    }
    let base = ExactMatrix::from_rows(basis.to_vec()).expect("rows").rank();
    let mut rows = basis.to_vec();
    rows.push(v.to_vec());
    ExactMatrix::from_rows(rows).expect("rows").rank() == base
}

fn facial_soundness(runner: &mut TestRunner) -> Result<(), String> {
    runner
        .run(&facial_instance(), |(p, factors, zeros)| {
            let prob = gram_system(&p).expect("even degree");
            let reduced = facial_reduce(&prob, &zeros).expect("exact zeros");
            let face = reduced.face.expect("face recorded");
            // every square of a true decomposition survives the reduction
            for q in &factors {
                let mut c = vec![Rational::zero(); prob.size()];
                for (m, v) in q.terms() {
                    c[prob.basis.index_of(m).expect("half degree")] = v.clone();
                }
                check(
                    in_span(&face.vectors, &c),
                    "square coefficient vector left the face",
                )?;
            }
            // face vectors are orthogonal to every evaluated zero
            for z in &zeros {
                let mz = prob.basis.evaluate(z);
                for v in &face.vectors {
                    let dot: Rational = v.iter().zip(&mz).map(|(a, b)| a * b).sum();
                    check(dot.is_zero(), "face vector not orthogonal to m(z)")?;
                }
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn facial_monotonicity(runner: &mut TestRunner) -> Result<(), String> {
    runner
        .run(&(facial_instance(), 0usize..8), |((p, _, zeros), cut)| {
            let prob = gram_system(&p).expect("even degree");
            let cut = cut.min(zeros.len());
            let small = facial_reduce(&prob, &zeros[..cut])
                .expect("zeros")
                .face
                .expect("face");
            let large = facial_reduce(&prob, &zeros)
                .expect("zeros")
                .face
                .expect("face");
            check(large.dim() <= small.dim(), "face grew with more zeros")?;
            for v in &large.vectors {
                check(
                    in_span(&small.vectors, v),
                    "larger zero set face not nested",
                )?;
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn criterion_11() -> Verdict {
    const CASES: u32 = 256;
    let suites: [(&str, Suite); 6] = [
        ("ring axioms", ring_axioms),
        ("evaluation homomorphism", evaluation_homomorphism),
        ("determinant vs Laplace", determinant_vs_laplace),
        ("kernel/rank law", kernel_rank_law),
        ("facial soundness", facial_soundness),
        ("facial monotonicity", facial_monotonicity),
    ];
    let mut failures = Vec::new();
    for (name, suite) in suites {
        let mut runner = TestRunner::new(Config {
            cases: CASES,
            failure_persistence: None,
            ..Config::default()
        });
        if let Err(e) = suite(&mut runner) {
            failures.push(format!("{name}: {e}"));
        }
    }
    if failures.is_empty() {
        Ok(format!("6 suites x {CASES} cases, no failures"))
    } else {
        Err(failures.join("; "))
    }
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("degree-one pair is a sum of four squares", criterion_1),
        (
            "degree-two pair expansion and 3-square Gram witness",
            criterion_2,
        ),
        ("cubic pair metadata", criterion_3),
        ("nonnegativity on 10^5 samples", criterion_4),
        ("bracket identities", criterion_5),
        ("zero-set structure", criterion_6),
        ("resultant consistency", criterion_7),
        ("Chern pipeline", criterion_8),
        ("obstruction arithmetic", criterion_9),
        ("SOS verdicts", criterion_10),
        ("property suites", criterion_11),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let verdict = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match verdict {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
