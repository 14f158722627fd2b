mod common;

use std::sync::Arc;

use proptest::prelude::*;

use groupoid_cover::construct::covering_from_subgroup;
use groupoid_cover::document::{groupoid_from_json, groupoid_to_json};
use groupoid_cover::topos::{covering_round_trip, presheaf_to_covering, Presheaf};
use groupoid_cover::transform::covering_transformations;
use groupoid_cover::{FiniteGroup, FiniteGroupoid, ObjId};

use common::{component_count, naive_is_covering};

fn small_group() -> impl Strategy<Value = FiniteGroup> {
    prop_oneof![
        (1usize..=8).prop_map(FiniteGroup::cyclic),
        Just(FiniteGroup::symmetric(3)),
        Just(FiniteGroup::symmetric(4)),
    ]
}

fn cycles(perm: &[usize]) -> usize {
    let mut seen = vec![false; perm.len()];
    let mut n = 0;
    for s in 0..perm.len() {
        if !seen[s] {
            n += 1;
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                x = perm[x];
            }
        }
    }
    n
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn coset_covers_realize_their_subgroup(g in small_group(), picks in prop::collection::vec(any::<prop::sample::Index>(), 0..3)) {
        let gens: Vec<usize> = picks.iter().map(|i| i.index(g.order())).collect();
        let sub = g.generated_subgroup(&gens).unwrap();
        let base = Arc::new(FiniteGroupoid::from_group(&g, "*"));
        let m = covering_from_subgroup(base, ObjId(0), &sub).unwrap();
        prop_assert!(naive_is_covering(m.covering.morphism()));
        prop_assert_eq!(m.covering.fold().unwrap(), g.order() / sub.order());
        prop_assert_eq!(m.covering.pushforward_vertex(m.marked).unwrap().subgroup, sub.clone());
        prop_assert_eq!(component_count(m.covering.total()), 1);
        let cov = covering_transformations(&m.covering).unwrap();
        prop_assert_eq!(cov.order(), g.normalizer(&sub).order() / sub.order());
    }

    #[test]
    fn permutation_presheaves_over_cyclic_groups(n in 1usize..=6, perm in (1usize..=4).prop_flat_map(|k| Just((0..k).collect::<Vec<_>>()).prop_shuffle())) {
        let g = FiniteGroup::cyclic(n);
        let base = Arc::new(FiniteGroupoid::from_group(&g, "*"));
        let vg = base.vertex_group(ObjId(0)).unwrap();
        let k = perm.len();
        let power = |e: usize| (0..k).map(|mut x| { for _ in 0..e { x = perm[x]; } x }).collect::<Vec<_>>();
        // only actions of the cyclic group: the permutation's order must divide n
        prop_assume!(power(n) == (0..k).collect::<Vec<_>>());
        let sets = vec![(0..k).map(|i| format!("e{i}")).collect()];
        let maps = base.arrows().map(|a| power(vg.element_of(a).unwrap())).collect();
        let f = Presheaf::new(base.clone(), sets, maps).unwrap();
        let p = presheaf_to_covering(&f).unwrap();
        prop_assert!(naive_is_covering(p.morphism()));
        prop_assert_eq!(p.total().object_count(), k);
        prop_assert_eq!(component_count(p.total()), cycles(&perm));
        prop_assert!(covering_round_trip(&p).is_ok());
    }

    #[test]
    fn groupoid_documents_round_trip(g in small_group()) {
        let gd = FiniteGroupoid::from_group(&g, "*");
        let j = groupoid_to_json(&gd);
        let back = groupoid_from_json(&j).unwrap();
        prop_assert_eq!(groupoid_to_json(&back), j);
        prop_assert!(back.validate().is_valid());
    }
}
