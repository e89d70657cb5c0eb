use num_traits::{One, Zero};
use proptest::prelude::*;

use rrl::algebra::{
    parse_poly, rat, write_poly, ComplexScalar, Monomial, MultiPoly, Rational, Ring,
};
use rrl::chern::{class_multiply, CohomologyClass};
use rrl::resultant::{resultant, UniPoly};
use rrl::sections::{build_rho, exact_zero_family, BundleSpec};
use rrl::sos::modular;

fn small_rational() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=5).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

fn gaussian(bound: i64) -> impl Strategy<Value = ComplexScalar> {
    (-bound..=bound, -bound..=bound).prop_map(|(a, b)| ComplexScalar::new(rat(a), rat(b)))
}

fn uni(max_degree: usize) -> impl Strategy<Value = UniPoly<ComplexScalar>> {
    (1..=max_degree).prop_flat_map(|d| {
        (
            prop::collection::vec(gaussian(6), d),
            gaussian(6).prop_filter("leading", |c| !c.is_zero_elem()),
        )
            .prop_map(|(mut c, lead)| {
                c.push(lead);
                UniPoly::new(c).unwrap()
            })
    })
}

fn class() -> impl Strategy<Value = CohomologyClass> {
    prop::collection::vec(small_rational(), 6).prop_map(|c| CohomologyClass {
        c0: c[0].clone(),
        cx: c[1].clone(),
        cdelta: c[2].clone(),
        cxx: c[3].clone(),
        cxdelta: c[4].clone(),
        cdeltadelta: c[5].clone(),
    })
}

fn poly(vars: usize) -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec(
        (prop::collection::vec(0u32..=3, vars), small_rational()),
        0..8,
    )
    .prop_map(move |t| {
        MultiPoly::from_terms(vars, t.into_iter().map(|(e, c)| (Monomial::new(e), c))).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn resultant_swap_sign(f in uni(4), g in uni(4)) {
        let (m, n) = (f.declared_degree(), g.declared_degree());
        let fg = resultant(&f, &g).unwrap();
        let gf = resultant(&g, &f).unwrap();
        let expect = if m * n % 2 == 0 { fg } else { fg.negated() };
        prop_assert_eq!(gf, expect);
    }

    #[test]
    fn resultant_multiplicative(f1 in uni(3), f2 in uni(3), g in uni(3)) {
        let lhs = resultant(&f1.mul(&f2), &g).unwrap();
        let rhs = resultant(&f1, &g).unwrap().times(&resultant(&f2, &g).unwrap());
        prop_assert_eq!(lhs, rhs);
        let lhs = resultant(&g, &f1.mul(&f2)).unwrap();
        let rhs = resultant(&g, &f1).unwrap().times(&resultant(&g, &f2).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn resultant_vanishes_on_common_root(a in gaussian(4), f in uni(3), g in uni(3)) {
        let linear = UniPoly::new(vec![a.negated(), ComplexScalar::real(Rational::one())]).unwrap();
        let r = resultant(&linear.mul(&f), &linear.mul(&g)).unwrap();
        prop_assert!(r.is_zero_elem());
    }

    #[test]
    fn class_product_commutative_associative(a in class(), b in class(), c in class()) {
        prop_assert_eq!(class_multiply(&a, &b), class_multiply(&b, &a));
        prop_assert_eq!(
            class_multiply(&class_multiply(&a, &b), &c),
            class_multiply(&a, &class_multiply(&b, &c))
        );
        let one = CohomologyClass::scalar(Rational::one());
        prop_assert_eq!(class_multiply(&a, &one), a.clone());
        prop_assert_eq!(class_multiply(&a, &b.add(&c)), class_multiply(&a, &b).add(&class_multiply(&a, &c)));
    }

    #[test]
    fn poly_text_round_trip(p in poly(4)) {
        let names: Vec<String> = ["a", "b", "c", "d"].iter().map(|s| s.to_string()).collect();
        let (q, back) = parse_poly(&write_poly(&p, &names)).unwrap();
        prop_assert_eq!(q, p);
        prop_assert_eq!(back, names);
    }

    #[test]
    fn modular_reduction_is_a_homomorphism(a in small_rational(), b in small_rational()) {
        let r = |x: &Rational| modular::reduce(x).unwrap();
        prop_assert_eq!(r(&(&a + &b)), modular::add(r(&a), r(&b)));
        prop_assert_eq!(r(&(&a * &b)), modular::mul(r(&a), r(&b)));
        prop_assert_eq!(r(&(&a - &b)), modular::sub(r(&a), r(&b)));
        if !a.is_zero() {
            prop_assert_eq!(modular::mul(r(&a), modular::inv(r(&a))), 1);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() })]

    /// `rho >= 0` vanishes on each linear family of sections with a common
    /// zero, so the Hessian at any member kills the whole family.
    #[test]
    fn hessian_annihilates_zero_family(
        z0 in (-5i64..=5, -5i64..=5, 1i64..=3),
        coeffs in prop::collection::vec(-3i64..=3, 4),
    ) {
        let rho = build_rho(BundleSpec::new(3, 3).unwrap()).unwrap();
        let z = ComplexScalar::new(Rational::new(z0.0.into(), z0.2.into()), Rational::new(z0.1.into(), z0.2.into()));
        let family = exact_zero_family(&rho.chart, &z).unwrap();
        prop_assert_eq!(family.len(), 4);
        let x: Vec<Rational> = (0..8)
            .map(|i| family.iter().zip(&coeffs).map(|(v, &c)| &v[i] * rat(c)).sum())
            .collect();
        prop_assert!(rho.poly.evaluate(&x).unwrap().is_zero());
        let h = rho.poly.hessian_at(&x).unwrap();
        for v in &family {
            prop_assert!(h.mul_vec(v).unwrap().iter().all(|c| c.is_zero()));
        }
    }
}
