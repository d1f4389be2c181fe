use kappalab_core::numeric::{format_rational, parse_rational, rat};
use kappalab_core::space::{euclid_dist, lex_less};
use kappalab_core::stratification::{niemytzki_union_f, sorgenfrey_f};
use kappalab_core::{
    approximation_to_stratification, stratification_to_approximation, validate_regular_open, BasicOpenSet, Point, QGrid,
    RegularOpenSet, Scalar, SpaceId, Stratification,
};
use proptest::prelude::*;

fn q(lo: i64, hi: i64, dens: &'static [i64]) -> impl Strategy<Value = kappalab_core::Rational> {
    (lo..hi, proptest::sample::select(dens)).prop_map(|(n, d)| rat(n, d))
}

const DENS: &[i64] = &[1, 2, 3, 4, 6, 8];

fn npoint() -> impl Strategy<Value = Point> {
    (q(-24, 24, DENS), q(0, 24, DENS)).prop_map(|(x, y)| Point::niemytzki_exact(x, y).unwrap())
}

fn disc() -> impl Strategy<Value = BasicOpenSet> {
    prop_oneof![
        (q(-8, 8, DENS), q(1, 9, &[8])).prop_map(|(a, r)| BasicOpenSet::tangent_disc(a.into(), r.into()).unwrap()),
        (q(-8, 8, DENS), q(1, 16, &[4]), q(1, 9, &[8])).prop_filter_map("radius above center", |(cx, cy, r)| {
            BasicOpenSet::interior_disc(cx.into(), cy.into(), r.into()).ok()
        }),
    ]
}

fn da_point() -> impl Strategy<Value = Point> {
    (q(0, 17, &[16]), 0u8..2).prop_map(|(t, s)| Point::double_arrow(t, s).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, ..ProptestConfig::default() })]

    #[test]
    fn euclidean_distance_is_a_metric(p in npoint(), r in npoint(), s in npoint()) {
        let d = |a: &Point, b: &Point| euclid_dist(a, b).unwrap().to_f64();
        prop_assert!(d(&p, &s) <= d(&p, &r) + d(&r, &s) + 1e-12);
        prop_assert!((d(&p, &r) - d(&r, &p)).abs() < 1e-15);
        prop_assert_eq!(d(&p, &p), 0.0);
    }

    #[test]
    fn lex_order_is_strict_and_total(a in da_point(), b in da_point(), c in da_point()) {
        let lt = |x: &Point, y: &Point| lex_less(x, y).unwrap();
        prop_assert!(!lt(&a, &a));
        prop_assert_eq!(u8::from(lt(&a, &b)) + u8::from(lt(&b, &a)) + u8::from(a == b), 1);
        if lt(&a, &b) && lt(&b, &c) {
            prop_assert!(lt(&a, &c));
        }
    }

    #[test]
    fn rationals_survive_formatting(n in -1000i64..1000, d in 1i64..1000) {
        let v = rat(n, d);
        prop_assert_eq!(parse_rational(&format_rational(&v)).unwrap(), v);
    }

    #[test]
    fn union_value_grows_with_budget_and_with_the_set(
        comps in proptest::collection::vec(disc(), 2..4),
        extra in disc(),
        p in npoint(),
    ) {
        let v = validate_regular_open(SpaceId::Niemytzki, comps.clone());
        prop_assume!(v.is_ok());
        let v = v.unwrap();
        let mut values = Vec::new();
        for budget in [1, 2, 4, 6] {
            values.push(niemytzki_union_f(&v, &p, budget).unwrap().to_f64());
        }
        prop_assert!(values.windows(2).all(|w| w[0] <= w[1]), "{:?}", values);
        let mut bigger = comps;
        bigger.push(extra);
        if let Ok(w) = validate_regular_open(SpaceId::Niemytzki, bigger) {
            prop_assert!(niemytzki_union_f(&w, &p, 6).unwrap().to_f64() >= values[3] - 1e-9);
        }
    }

    #[test]
    fn sorgenfrey_values_sit_in_unit_interval(a in q(-16, 16, DENS), len in q(1, 24, DENS), x in q(-20, 20, DENS)) {
        let u = RegularOpenSet::basic(BasicOpenSet::half_open(a.clone(), &a + len).unwrap()).unwrap();
        let f = sorgenfrey_f(&u, &Point::sorgenfrey(x.clone())).unwrap();
        prop_assert!(f >= rat(0, 1) && f <= rat(1, 1));
        prop_assert_eq!(f > rat(0, 1), u.member(&Point::sorgenfrey(x)).unwrap());
    }

    #[test]
    fn round_trip_is_within_grid_resolution(m in 1u32..12, a in q(-8, 8, DENS), len in q(1, 24, DENS), x in q(-10, 10, &[3, 5, 7, 16])) {
        let s = Stratification::sorgenfrey_kappa();
        let grid = QGrid::new(m);
        let back = approximation_to_stratification(&stratification_to_approximation(&s, grid), grid);
        let u = RegularOpenSet::basic(BasicOpenSet::half_open(a.clone(), &a + len).unwrap()).unwrap();
        let p = Point::sorgenfrey(x);
        let (f, r) = (s.eval(&u, &p).unwrap(), back.eval(&u, &p).unwrap());
        let (Scalar::Exact(f), Scalar::Exact(r)) = (f, r) else { panic!("interval families are exact") };
        prop_assert!((&f - &r) * rat(1 << m, 1) <= rat(1, 1) && (&r - &f) * rat(1 << m, 1) <= rat(1, 1));
        if (&f * rat(1 << m, 1)).is_integer() {
            prop_assert_eq!(f, r);
        }
    }
}
