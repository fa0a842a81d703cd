use std::sync::OnceLock;

use meanelem_core::lie::cache::{self, ArtifactKind};
use meanelem_core::lie::checks::{compose_transforms, verify_mean_by_substitution};
use meanelem_core::lie::{derive, derive_with_flow, ElementSeries};
use meanelem_core::reference::{half_split_checks, theory_checks, FixtureSet};
use meanelem_core::toy_model::{build_toy_flow, toy_flow};
use meanelem_core::{Artifacts, Element, Error, Frame, Rational, Series, Theory};

fn theory(t: Theory) -> &'static Artifacts {
    static ONE: OnceLock<Artifacts> = OnceLock::new();
    static TWO: OnceLock<Artifacts> = OnceLock::new();
    let cell = match t {
        Theory::One => &ONE,
        Theory::Two => &TWO,
    };
    cell.get_or_init(|| derive(t, 3).expect("derivation"))
}

fn flow_seeds() -> Vec<ElementSeries<Rational>> {
    let flow = toy_flow();
    (0..=flow.max_order()).map(|m| flow.order(m)).collect()
}

fn all_empty(r: &ElementSeries<Rational>) -> bool {
    r.iter().all(Series::is_zero)
}

#[test]
fn toy_flow_matches_transcription() {
    let fx = FixtureSet::embedded();
    let flow = build_toy_flow();
    for el in Element::ALL {
        assert_eq!(flow.phi(el, 1), fx.toy(el).unwrap(), "{}", el.name());
    }
}

#[test]
fn theory_one_matches_printed_series() {
    let fx = FixtureSet::embedded();
    for check in theory_checks(theory(Theory::One), &fx).unwrap() {
        assert!(check.passed(), "{check}");
    }
}

#[test]
fn theory_two_matches_printed_series() {
    let fx = FixtureSet::embedded();
    for check in theory_checks(theory(Theory::Two), &fx).unwrap() {
        assert!(check.passed(), "{check}");
    }
}

#[test]
fn long_period_terms_split_in_half() {
    for check in half_split_checks(theory(Theory::One), theory(Theory::Two)) {
        assert!(check.passed(), "{check}");
    }
}

#[test]
fn corrupted_fixture_is_reported() {
    let fx = FixtureSet::embedded();
    let t = theory(Theory::One);
    let printed = fx.get("printed/phi02_a").unwrap();
    let bumped = printed.add(&Series::one().shift_factors(1, 1, 2, 0));
    let check =
        meanelem_core::reference::FixtureCheck::new("Phi_a,0,2", t.phi(Element::A, 2), &bumped);
    assert!(!check.passed());
    assert!(check.to_string().starts_with("FAIL  Phi_a,0,2: term"));
}

#[test]
fn transforms_compose_to_identity() {
    for th in [Theory::One, Theory::Two] {
        let t = theory(th);
        for m in 1..=3 {
            assert!(
                all_empty(&compose_transforms(&t.direct, &t.inverse, m)),
                "{th} order {m}"
            );
        }
    }
}

#[test]
fn mean_flow_satisfies_substitution() {
    let seeds = flow_seeds();
    for th in [Theory::One, Theory::Two] {
        let t = theory(th);
        for m in 1..=3 {
            assert!(
                all_empty(&verify_mean_by_substitution(t, &seeds, m)),
                "{th} order {m}"
            );
        }
    }
}

#[test]
fn identities_detect_a_perturbed_transform() {
    let t = theory(Theory::One);
    let mut inverse = t.inverse.clone();
    inverse[2][1] = inverse[2][1].add(&Series::one());
    assert!(!all_empty(&compose_transforms(&t.direct, &inverse, 2)));
    let mut broken = t.clone();
    broken.mean_variations[2][4] = Series::zero();
    assert!(!all_empty(&verify_mean_by_substitution(
        &broken,
        &flow_seeds(),
        2
    )));
}

#[test]
fn theory_one_transformation_is_pure_periodic() {
    let t = theory(Theory::One);
    for m in 1..=3 {
        for el in Element::ALL {
            assert!(
                t.direct(el, m).average_m().is_zero(),
                "x_{},0,{m}",
                el.name()
            );
        }
    }
}

#[test]
fn theory_two_generator_is_pure_periodic() {
    let t = theory(Theory::Two);
    for m in 1..=3 {
        for el in Element::ALL {
            assert!(t.w(el, m).average_m().is_zero());
            assert!(t.constant(el, m).is_zero());
        }
        assert!(t.phi(Element::A, m).is_zero());
    }
}

#[test]
fn first_order_inverse_is_opposite() {
    for th in [Theory::One, Theory::Two] {
        let t = theory(th);
        for el in Element::ALL {
            assert_eq!(t.inverse(el, 1), &t.direct(el, 1).neg());
            assert_eq!(t.inverse_generator[1][el.index()], t.w(el, 1).neg());
        }
    }
}

// Second-order closed form of the inverse: x'_2 = 2 L_1(x_1) − x_2, with
// L_1 acting through the first-order generator.
#[test]
fn second_order_inverse_closed_form() {
    for th in [Theory::One, Theory::Two] {
        let t = theory(th);
        let g = t.generator_terms();
        for el in Element::ALL {
            let x1 = t.direct(el, 1);
            let expected = g.lie_scalar(1, x1).scale_int(2, 1).sub(t.direct(el, 2));
            assert_eq!(t.inverse(el, 2), &expected, "{th} {}", el.name());
        }
    }
}

#[test]
fn derivation_is_deterministic_and_prefix_stable() {
    let again = derive(Theory::One, 2).unwrap();
    let full = theory(Theory::One);
    for m in 0..=2 {
        assert_eq!(again.mean_variations[m], full.mean_variations[m]);
        assert_eq!(again.generator[m], full.generator[m]);
        assert_eq!(again.direct[m], full.direct[m]);
    }
}

#[test]
fn keplerian_flow_gives_empty_theory() {
    let kepler: Vec<ElementSeries<Rational>> = vec![toy_flow().order(0)];
    let t = derive_with_flow(&kepler, Theory::One, 2).unwrap();
    for m in 1..=2 {
        assert!(all_empty(&t.mean_variations[m]));
        assert!(all_empty(&t.generator[m]));
        assert!(all_empty(&t.inverse[m]));
    }
}

#[test]
fn zero_order_is_rejected() {
    assert!(matches!(
        derive(Theory::One, 0),
        Err(Error::InvalidInput(_))
    ));
}

#[test]
fn cache_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let t = derive(Theory::Two, 2).unwrap();
    cache::write_artifacts(dir.path(), &t).unwrap();
    assert_eq!(cache::cached_order(dir.path(), Theory::Two), 2);
    assert_eq!(cache::cached_order(dir.path(), Theory::One), 0);
    let back: Artifacts = cache::read_artifacts(dir.path(), Theory::Two, 2).unwrap();
    assert_eq!(back, t);
    assert!(matches!(
        cache::read_artifacts::<Rational>(dir.path(), Theory::Two, 3),
        Err(Error::MissingArtifact(_))
    ));

    let path = cache::artifact_path(dir.path(), Theory::Two, 2, ArtifactKind::Phi, Element::A);
    assert!(path.ends_with("theory2/order2/phi_a.series"));
    assert_eq!(
        Series::from_text(&std::fs::read_to_string(&path).unwrap()).unwrap(),
        Series::zero()
    );

    let before = std::fs::read_to_string(&path).unwrap();
    cache::write_artifacts(dir.path(), &t).unwrap();
    assert_eq!(std::fs::read_to_string(&path).unwrap(), before);
}

#[test]
fn artifact_frames() {
    assert_eq!(ArtifactKind::Direct.frame(), Frame::Mean);
    assert_eq!(ArtifactKind::Phi.frame(), Frame::Mean);
    assert_eq!(ArtifactKind::Inverse.frame(), Frame::Osculating);
}
