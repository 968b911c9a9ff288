use excov::gf::{make_field, Tower};
use excov::projmap::{chebyshev_twist, cyclic, dickson, P1Point, Poly, RationalMap};
use proptest::prelude::*;

fn random_map(field: &std::sync::Arc<excov::gf::FieldCtx>, num: &[u64], den: &[u64]) -> Option<RationalMap> {
    let conv = |c: &[u64]| Poly::new(field.clone(), c.iter().map(|&x| field.from_index(x % field.order())).collect());
    RationalMap::new(conv(num), conv(den)).ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn evaluation_respects_composition(
        (p, k) in prop::sample::select(vec![(2u64, 1u32), (3, 1), (5, 1), (3, 2), (7, 1)]),
        n1 in prop::collection::vec(0u64..50, 1..4), d1 in prop::collection::vec(0u64..50, 1..3),
        n2 in prop::collection::vec(0u64..50, 1..4), d2 in prop::collection::vec(0u64..50, 1..3),
        t in 1u32..=3,
    ) {
        let base = make_field(p, k).unwrap();
        let (Some(f), Some(g)) = (random_map(&base, &n1, &d1), random_map(&base, &n2, &d2)) else {
            return Ok(());
        };
        let fg = f.compose(&g).unwrap();
        prop_assert_eq!(fg.degree(), f.degree() * g.degree());
        let field = Tower::new(base.clone(), 1 << 12).level(t.min(Tower::new(base.clone(), 1 << 12).max_level(t))).unwrap();
        let points = field.elements().map(P1Point::Finite).chain([P1Point::Infinity]);
        for x in points {
            let inner = g.eval_p1(&field, x).unwrap();
            prop_assert_eq!(fg.eval_p1(&field, x).unwrap(), f.eval_p1(&field, inner).unwrap());
        }
    }

    #[test]
    fn dickson_semigroup_law(
        p in prop::sample::select(vec![3u64, 5, 7, 11, 13]),
        n in prop::sample::select(vec![1u64, 2, 3, 5, 7]),
        m in prop::sample::select(vec![1u64, 2, 3, 5]),
        a in 1u64..100,
    ) {
        let f = make_field(p, 1).unwrap();
        let a = f.from_u64(a % (p - 1) + 1);
        let outer = dickson(&f, n, f.pow(a, m)).unwrap();
        let inner = dickson(&f, m, a).unwrap();
        prop_assert_eq!(outer.compose(&inner).unwrap(), dickson(&f, n * m, a).unwrap());
    }

    #[test]
    fn twisted_chebyshev_semigroup(
        p in prop::sample::select(vec![3u64, 5, 7, 11, 13]),
        n in prop::sample::select(vec![1u64, 3, 5]),
        m in prop::sample::select(vec![1u64, 3, 5, 7]),
        a in 1u64..100,
    ) {
        let f = make_field(p, 1).unwrap();
        let a = f.from_u64(a % (p - 1) + 1);
        let lhs = chebyshev_twist(&f, n, a).unwrap().compose(&chebyshev_twist(&f, m, a).unwrap()).unwrap();
        prop_assert_eq!(lhs, chebyshev_twist(&f, n * m, a).unwrap());
    }

    #[test]
    fn cyclic_composition(p in prop::sample::select(vec![2u64, 3, 5]), n in 1u64..6, m in 1u64..6) {
        let f = make_field(p, 1).unwrap();
        prop_assert_eq!(cyclic(&f, n).unwrap().compose(&cyclic(&f, m).unwrap()).unwrap(), cyclic(&f, n * m).unwrap());
    }
}
