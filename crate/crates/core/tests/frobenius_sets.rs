use excov::frobset::{fit_from_samples, gcd, lcm, FrobeniusSet};
use proptest::prelude::*;

fn arb_set() -> impl Strategy<Value = FrobeniusSet> {
    (1u64..=12, prop::collection::vec(0u64..12, 0..4))
        .prop_map(|(d, r)| FrobeniusSet::from_residues(d, r).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn stored_sets_are_unit_closed(s in arb_set()) {
        let d = s.modulus();
        for &r in s.residues() {
            for u in (1..=d).filter(|&u| gcd(u, d) == 1) {
                prop_assert!(s.residues().contains(&(r * u % d)));
            }
        }
    }

    #[test]
    fn set_operations_match_membership(a in arb_set(), b in arb_set()) {
        let (i, u) = (a.intersect(&b), a.union(&b));
        for t in 1..=4 * lcm(a.modulus(), b.modulus()) {
            prop_assert_eq!(i.contains(t), a.contains(t) && b.contains(t));
            prop_assert_eq!(u.contains(t), a.contains(t) || b.contains(t));
        }
    }

    #[test]
    fn fit_inverts_sampling(s in arb_set(), extra in 0u64..6) {
        let d_max = s.modulus() + extra;
        let samples = s.samples(2 * d_max);
        prop_assert_eq!(fit_from_samples(&samples, d_max).unwrap(), Some(s));
    }
}
