use excov::grouptheory::{product, Perm, PermGroup};
use excov::nielsen::{
    braid_orbit, braid_word, dickson_cycles, dickson_tower_cycles, modular_nielsen, orbit_sizes, rational_union_check,
    rh_genus, validate_tuple, Equivalence,
};
use proptest::prelude::*;

fn class_multiset(group: &PermGroup, tuple: &[Perm]) -> Vec<Vec<usize>> {
    let mut v: Vec<Vec<usize>> = tuple
        .iter()
        .map(|g| {
            let mut c: Vec<usize> = group.elements().iter().map(|h| group.position(&g.conj(h)).unwrap()).collect();
            c.sort_unstable();
            c.dedup();
            c
        })
        .collect();
    v.sort();
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn braids_preserve_nielsen_conditions(n in prop::sample::select(vec![3u64, 5, 7]), word in prop::collection::vec(prop::sample::select(vec![1i32, 2, -1, -2]), 0..8)) {
        let t = dickson_cycles(n).unwrap();
        let group = PermGroup::generate(n as usize, &t).unwrap();
        let moved = braid_word(&t, &word).unwrap();
        let check = validate_tuple(&moved, &group, Some(&t)).unwrap();
        prop_assert!(check.ok());
        prop_assert_eq!(class_multiset(&group, &moved), class_multiset(&group, &t));
        prop_assert_eq!(rh_genus(&moved).unwrap(), 0);
    }

    #[test]
    fn orbit_independent_of_representative(n in prop::sample::select(vec![3u64, 5]), word in prop::collection::vec(prop::sample::select(vec![1i32, 2, -1, -2]), 0..6)) {
        let t = dickson_cycles(n).unwrap();
        let equiv = Equivalence::Inner(PermGroup::generate(n as usize, &t).unwrap());
        let moved = braid_word(&t, &word).unwrap();
        prop_assert_eq!(braid_orbit(&t, &equiv).unwrap(), braid_orbit(&moved, &equiv).unwrap());
    }

    #[test]
    fn tower_step_braid(n in prop::sample::select(vec![3u64, 5, 7]), a in 1u64..5, b in 5u64..9) {
        // (g)q₂q₁ = (g₁', g_{1,1}, g_{1,2}, g_{2,2}, g_∞)
        let g = dickson_tower_cycles(n, &[a, b]).unwrap().tuple;
        let moved = braid_word(&g, &[2, 1]).unwrap();
        let g2 = g[1].mul(&g[2]).mul(&g[1].inv());
        let g1 = g[0].mul(&g2).mul(&g[0].inv());
        prop_assert_eq!(&moved, &vec![g1, g[0].clone(), g[1].clone(), g[3].clone(), g[4].clone()]);
        prop_assert!(product(&moved, moved[0].degree()).is_identity());
        prop_assert!(rh_genus(&moved).unwrap() >= 0);
    }

    #[test]
    fn rational_union_is_monotone(k in 1i64..7) {
        let d7 = PermGroup::generate(7, &[Perm::parse("(1 2 3 4 5 6 7)", None).unwrap(), Perm::parse("(2 7)(3 6)(4 5)", None).unwrap()]).unwrap();
        let agl = PermGroup::generate(7, &[Perm::parse("(1 2 3 4 5 6 7)", None).unwrap(), Perm::parse("(2 4 3 7 5 6)", None).unwrap()]).unwrap();
        let c = [d7.gens()[0].pow(k)];
        let small = rational_union_check(&c, &d7, &d7).unwrap();
        let big = rational_union_check(&c, &d7, &agl).unwrap();
        prop_assert!(big.failing.iter().all(|x| small.failing.contains(x)));
    }
}

#[test]
fn tower_genera_nonnegative() {
    for n in [3u64, 5, 7] {
        for labels in [vec![1], vec![1, 2], vec![2, 3]] {
            let t = dickson_tower_cycles(n, &labels).unwrap();
            assert!(t.genus >= 0);
            assert_eq!(t.tuple.last().unwrap().cycles().len() as u64, t.degree / n);
        }
    }
}

#[test]
fn modular_orbit_counts() {
    for (p, k, orbits) in [(3, 0, 2), (5, 0, 4), (7, 0, 6), (3, 1, 6)] {
        let r = modular_nielsen(p, k).unwrap();
        assert_eq!(r.abs_class_count, 1);
        assert_eq!(r.inner_braid_orbit_count, orbits);
        assert_eq!(r.inner_orbit_sizes.iter().sum::<usize>(), r.inner_classes);
    }
    let (_, generic) = excov::nielsen::modular_nielsen_generic(3).unwrap();
    assert_eq!(generic, 2);
    let t = dickson_cycles(5).unwrap();
    let g = PermGroup::generate(5, &t).unwrap();
    assert_eq!(orbit_sizes(std::slice::from_ref(&t), &Equivalence::Inner(g)).unwrap().len(), 1);
}
