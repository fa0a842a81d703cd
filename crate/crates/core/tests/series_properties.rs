use meanelem_core::series::{Coefficient, Kind, Monomial, Polynomial, TermKey, TrigTerm};
use meanelem_core::toy_model::{OrbitalElements, PhysicalConstants};
use meanelem_core::{Element, Exact, Rational, Series};
use proptest::prelude::*;

fn polynomial() -> impl Strategy<Value = Polynomial<Rational>> {
    prop::collection::vec(
        (-6i64..=6, 1i64..=4, 0u32..3, 0u32..2, 0u32..3, 0u32..2),
        1..4,
    )
    .prop_map(|ms| {
        Polynomial::from_terms(
            ms.into_iter().map(|(p, q, e, eta, s, c)| {
                (Monomial::new(e, eta, s, c), Rational::from_frac(p, q))
            }),
        )
    })
}

fn term() -> impl Strategy<Value = TrigTerm<Rational>> {
    (
        polynomial(),
        0u32..2,
        0u32..2,
        0u32..2,
        prop_oneof![Just(Kind::Cos), Just(Kind::Sin)],
        -2i32..=2,
        -2i32..=2,
        -2i32..=2,
        0u32..3,
        0u32..4,
        0u32..3,
    )
        .prop_map(|(poly, de, deta, dpe, kind, m, w, a, n, roa, eps)| {
            TrigTerm::new(
                TermKey::new(kind, m, w)
                    .with_factors(a, n, roa)
                    .with_eps(eps),
                Coefficient::new(poly, de, deta, dpe),
            )
        })
}

fn series() -> impl Strategy<Value = Series> {
    prop::collection::vec(term(), 1..5).prop_map(Series::from_terms)
}

fn value(s: &Series) -> f64 {
    let el = OrbitalElements::new(9500.0, 0.2, 0.35, 0.3, 1.1, 2.3).unwrap();
    s.evaluate(&el, &PhysicalConstants::earth(), 0.7).unwrap()
}

fn close(x: f64, y: f64) -> bool {
    (x - y).abs() <= 1e-9 * (1.0 + x.abs().max(y.abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn addition_is_an_abelian_group(f in series(), g in series(), h in series()) {
        prop_assert_eq!(f.add(&g), g.add(&f));
        prop_assert_eq!(f.add(&g).add(&h), f.add(&g.add(&h)));
        prop_assert!(f.add(&f.neg()).is_zero());
        prop_assert_eq!(f.add(&Series::zero()), f.clone());
    }

    #[test]
    fn multiplication_is_commutative_and_distributive(f in series(), g in series(), h in series()) {
        prop_assert_eq!(f.mul(&g), g.mul(&f));
        prop_assert_eq!(f.mul(&g.add(&h)), f.mul(&g).add(&f.mul(&h)));
        prop_assert_eq!(f.mul(&Series::one()), f.clone());
    }

    #[test]
    fn multiplication_is_associative(f in series(), g in series(), h in series()) {
        prop_assert_eq!(f.mul(&g).mul(&h), f.mul(&g.mul(&h)));
    }

    #[test]
    fn evaluation_is_a_ring_homomorphism(f in series(), g in series()) {
        prop_assert!(close(value(&f.add(&g)), value(&f) + value(&g)));
        prop_assert!(close(value(&f.mul(&g)), value(&f) * value(&g)));
    }

    #[test]
    fn derivatives_obey_leibniz(f in series(), g in series()) {
        for el in Element::ALL {
            let lhs = f.mul(&g).partial(el);
            let rhs = f.partial(el).mul(&g).add(&f.mul(&g.partial(el)));
            prop_assert_eq!(lhs, rhs, "{}", el.name());
        }
    }

    #[test]
    fn averaging_splits_the_series(f in series()) {
        prop_assert_eq!(f.average_m().add(&f.periodic_m()), f.clone());
        prop_assert!(f.periodic_m().average_m().is_zero());
    }

    #[test]
    fn integration_inverts_the_anomaly_derivative(f in series()) {
        let p = f.periodic_m();
        prop_assert_eq!(p.integrate_m().unwrap().partial(Element::M), p);
    }

    #[test]
    fn text_round_trip(f in series()) {
        prop_assert_eq!(Series::from_text(&f.to_text()).unwrap(), f);
    }

    #[test]
    fn truncation_keeps_low_orders(f in series(), k in 0u32..3) {
        let t = f.truncate(k);
        prop_assert!(t.max_eps_order().is_none_or(|m| m <= k));
        prop_assert_eq!(t.add(&f.sub(&t)), f);
    }
}

#[test]
fn non_periodic_integrand_is_rejected() {
    assert!(Series::one().integrate_m().is_err());
}
