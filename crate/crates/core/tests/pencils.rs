use excov::except::Scanner;
use excov::gf::make_field;
use excov::pencil::{pencil_scan, weil_envelope};
use excov::projmap::{Poly, RationalMap};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn error_sum_identity(
        p in prop::sample::select(vec![3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97, 101]),
        coeffs in prop::collection::vec(0u64..1000, 2..=7),
    ) {
        let field = make_field(p, 1).unwrap();
        let f = Poly::new(field.clone(), coeffs.iter().map(|&c| field.from_u64(c)).collect());
        prop_assume!(f.degree().unwrap_or(0) >= 1);
        let r = pencil_scan(&f).unwrap();
        prop_assert!(r.identity_ok);
        prop_assert_eq!(r.w, (p * r.n_f) as i64);
        let direct: i64 = r.errors.iter().map(|e| e * e).sum();
        prop_assert_eq!(direct, r.w);
        if Scanner::new(field).is_bijective_on(&RationalMap::poly(f.clone()).unwrap(), 1).unwrap() {
            prop_assert_eq!(r.n_f, 0);
            prop_assert_eq!(r.k_f_estimate, 0);
            prop_assert!(r.deviation as f64 <= weil_envelope(f.degree().unwrap(), p));
        }
    }
}
