use excov::frobset::fit_from_samples;
use excov::gf::is_prime;
use excov::lattes::{frobenius_power_sum, legendre, median_value_check, ogg_curve, oit_predict, EllipticCurveQ, Point};
use excov::projmap::P1Point;
use proptest::prelude::*;

#[test]
fn lattes_commutes_with_multiplication() {
    let e = ogg_curve().unwrap();
    for l in (5..=60).filter(|&l| is_prime(l)) {
        let el = e.reduce(l).unwrap();
        let points = el.points();
        assert_eq!(points.len() as u64, el.point_count());
        assert!((el.trace() as f64).abs() <= 2.0 * (l as f64).sqrt());
        for m in [2u64, 3, 5] {
            if m % l == 0 {
                continue;
            }
            let map = el.lattes_map(m).unwrap();
            for &pt in &points {
                if let Point::Affine(x, _) = pt {
                    let want = match el.mul(m, pt) {
                        Point::Infinity => P1Point::Infinity,
                        Point::Affine(x2, _) => P1Point::Finite(x2),
                    };
                    assert_eq!(map.eval_p1(el.field(), P1Point::Finite(x)).unwrap(), want, "ℓ = {l}, m = {m}");
                }
            }
        }
    }
}

#[test]
fn supersingular_primes_below_100() {
    let e = ogg_curve().unwrap();
    for l in (5..100).filter(|&l| is_prime(l)) {
        let el = e.reduce(l).unwrap();
        // a_ℓ ≡ 0 mod ℓ with |a_ℓ| ≤ 2√ℓ < ℓ
        let supersingular = el.trace().rem_euclid(l as i64) == 0;
        assert_eq!(supersingular, el.trace() == 0);
        let r = median_value_check(&el, 3, 1 << 18).unwrap();
        assert_eq!(r.median_t.contains(&1), supersingular);
        assert!(r.enumerated.contains(&2));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn prediction_is_periodic_and_unit_closed(l in prop::sample::select(vec![7u64, 11, 13, 17, 19, 23, 29, 31, 37, 41]), p in prop::sample::select(vec![5u64, 7, 11])) {
        prop_assume!(l != p);
        let e = ogg_curve().unwrap().reduce(l).unwrap();
        // every element of GL₂(F_p) has order dividing p(p² − 1)
        let period = p * (p * p - 1);
        let samples: Vec<bool> = (1..=2 * period as u32).map(|t| oit_predict(e.trace(), l, p, t)).collect();
        let fitted = fit_from_samples(&samples, period).unwrap();
        prop_assert!(fitted.is_some());
    }

    #[test]
    fn irreducible_frobenius_predicts_bijective(a in -20i64..=20, l in prop::sample::select(vec![101u64, 103, 107, 109, 113]), p in prop::sample::select(vec![5u64, 7, 11, 13])) {
        if legendre((a * a - 4 * l as i64) as i128, p) == -1 {
            prop_assert!(oit_predict(a, l, p, 1));
        }
    }

    #[test]
    fn power_sums_match_counts(l in prop::sample::select(vec![5u64, 7, 11, 13])) {
        let e = ogg_curve().unwrap().reduce(l).unwrap();
        let r = median_value_check(&e, 3, 1 << 16).unwrap();
        for (&t, &count) in &r.counts {
            prop_assert_eq!(count as i128, (l as i128).pow(t) + 1 - frobenius_power_sum(e.trace(), l, t));
        }
    }
}

#[test]
fn explicit_zero_of_the_test() {
    // a = 0, ℓ ≡ −1 mod p
    assert!(!oit_predict(0, 19, 5, 1));
    assert!(!oit_predict(0, 29, 5, 1));
}

#[test]
fn curve_parsing() {
    let e = EllipticCurveQ::parse("[0,-1,0,1,0]").unwrap();
    assert_eq!(e, ogg_curve().unwrap());
    assert_eq!((e.j.num, e.j.den), (2048, 3));
    assert!(EllipticCurveQ::parse("[0,0,0,0,0]").is_err());
    assert!(EllipticCurveQ::parse("[1,2]").is_err());
}
