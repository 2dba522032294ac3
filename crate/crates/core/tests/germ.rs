use germkit::cosets::{count_at_depth, SubgroupFamily, SubgroupSpec};
use germkit::germ::{induce_maps, jl_transfer, lj_transfer, BaseCounts, CoefficientMap};
use germkit::partition::{enumerate_partitions, Partition};
use num_bigint::BigInt;
use proptest::prelude::*;

fn map_strategy(n: usize) -> impl Strategy<Value = CoefficientMap> {
    let ps = enumerate_partitions(n).unwrap();
    prop::collection::vec(-5i64..=5, ps.len())
        .prop_map(move |vals| CoefficientMap::from_pairs(n, ps.clone().into_iter().zip(vals)).unwrap())
}

fn any_map(max_n: usize) -> impl Strategy<Value = CoefficientMap> {
    (1..=max_n).prop_flat_map(map_strategy)
}

proptest! {
    #[test]
    fn lj_undoes_jl(c in any_map(6), d in 1usize..=3) {
        let lifted = jl_transfer(&c, d).unwrap();
        prop_assert_eq!(lj_transfer(&lifted, c.n(), d).unwrap(), c);
    }

    #[test]
    fn induction_is_linear_in_each_slot(
        a in map_strategy(2), b in map_strategy(2), c in map_strategy(3), k in -4i64..4
    ) {
        let k = BigInt::from(k);
        let sum = a.checked_add(&b).unwrap();
        let lhs = induce_maps(&[sum.scalar(&k), c.clone()]).unwrap();
        let rhs = induce_maps(&[a, c.clone()]).unwrap().checked_add(&induce_maps(&[b, c]).unwrap()).unwrap().scalar(&k);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn induction_ignores_order(a in map_strategy(1), b in map_strategy(2), c in map_strategy(3)) {
        let abc = induce_maps(&[a.clone(), b.clone(), c.clone()]).unwrap();
        prop_assert_eq!(&abc, &induce_maps(&[c.clone(), a.clone(), b.clone()]).unwrap());
        prop_assert_eq!(&abc, &induce_maps(&[b.clone(), c.clone(), a.clone()]).unwrap());
        let nested = induce_maps(&[induce_maps(&[a, b]).unwrap(), c]).unwrap();
        prop_assert_eq!(abc, nested);
    }

    #[test]
    fn degree_matches_gk_dimension_without_cancellation(c in any_map(5), q in prop::sample::select(vec![2u64, 3, 4, 5]), d in 1u32..=2) {
        prop_assume!(!c.is_zero());
        for family in SubgroupFamily::ALL {
            let poly = c.dimension_polynomial(&BaseCounts::Family(family), q, d).unwrap();
            prop_assert_eq!(poly.formal_degree, c.gk_dimension().unwrap());
            if !poly.has_top_cancellation() {
                prop_assert_eq!(poly.actual_degree(), Some(poly.formal_degree));
            } else {
                prop_assert!(poly.actual_degree().is_none_or(|k| k < poly.formal_degree));
            }
        }
    }

    #[test]
    fn dim_fixed_obeys_the_scaling_law(c in any_map(4), q in prop::sample::select(vec![2u64, 3, 5]), d in 1u32..=2, j in 0u32..4) {
        for family in [SubgroupFamily::VertexCongruence, SubgroupFamily::ProPIwahoriHalf, SubgroupFamily::IwahoriCongruence] {
            let poly = c.dimension_polynomial(&BaseCounts::Family(family), q, d).unwrap();
            let spec = SubgroupSpec::new(family, j + 1, q, d).unwrap();
            prop_assert_eq!(poly.deepen(j + 1).eval_at_depth(0), c.dim_fixed(&spec).unwrap());
            prop_assert_eq!(poly.deepen(1).eval_at_depth(j), c.dim_fixed(&spec).unwrap());
        }
    }
}

#[test]
fn dim_fixed_agrees_with_direct_coset_sums() {
    // Σ_λ c(λ) |P_λ\G/K| with counts from the cosets module directly.
    let c = CoefficientMap::from_pairs(
        4,
        enumerate_partitions(4).unwrap().into_iter().zip([3i64, -1, 2, 0, 5]),
    )
    .unwrap();
    for family in SubgroupFamily::ALL {
        let depths = if family.is_parahoric() { 0..=0 } else { 0..=3 };
        for j in depths {
            let spec = SubgroupSpec::new(family, j, 3, 2).unwrap();
            let direct: BigInt = c.iter().map(|(l, v)| v * count_at_depth(l, &spec).unwrap()).sum();
            assert_eq!(c.dim_fixed(&spec).unwrap(), direct, "{family} j={j}");
        }
    }
}

#[test]
fn minimal_support_is_an_antichain() {
    let p = |v: &[usize]| Partition::new(v.to_vec()).unwrap();
    let c = CoefficientMap::from_pairs(6, [(p(&[4, 1, 1]), 2), (p(&[3, 3]), 1), (p(&[5, 1]), -7)]).unwrap();
    assert_eq!(c.support_min(), vec![p(&[4, 1, 1]), p(&[3, 3])]);
    assert!(c.check_minimal_positivity().pass);
}
