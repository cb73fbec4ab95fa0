use std::collections::BTreeMap;

use catbench::hf::{
    build_universe, lift_urelement_bijection, mostowski_collapse, random_extensional_digraph, verify_collapse, verify_iso,
    HFSet, MembershipDigraph, Universe,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const LIMIT: usize = 1 << 20;

fn universes() -> Vec<Universe> {
    let mut out = Vec::new();
    for r in 0..=4 {
        out.push(build_universe(&[], r, LIMIT).unwrap());
    }
    for r in 0..=3 {
        out.push(build_universe(&["a"], r, LIMIT).unwrap());
    }
    for r in 0..=2 {
        out.push(build_universe(&["a", "b"], r, LIMIT).unwrap());
    }
    out
}

fn hfset(depth: u32) -> impl Strategy<Value = HFSet> {
    let leaf = prop_oneof![Just(HFSet::empty()), "[a-c]".prop_map(|s| HFSet::ur(&s))];
    leaf.prop_recursive(depth, 24, 4, |inner| proptest::collection::vec(inner, 0..4).prop_map(HFSet::set))
}

#[test]
fn stage_is_one_past_deepest_member() {
    for u in universes() {
        for (i, x) in u.elements().iter().enumerate() {
            let expected = if u.is_set(i) { 1 + u.members(i).iter().map(|&m| u.stage_index(m)).max().unwrap_or(0) } else { 0 };
            assert_eq!(u.stage_index(i), expected, "{x}");
            assert_eq!(u.stage_of(x).unwrap(), expected);
            assert_eq!(x.stage(), expected);
        }
    }
}

#[test]
fn stages_are_nested_and_transitive() {
    for u in universes() {
        let sizes = u.stage_sizes();
        assert!(sizes.windows(2).all(|w| w[0] <= w[1]));
        for (k, &s) in sizes.iter().enumerate().skip(1) {
            // N_{k} = urelements plus every subset of N_{k-1}
            assert_eq!(s, u.urelements().len() + (1usize << sizes[k - 1]));
        }
        for i in 0..u.len() {
            for &m in u.members(i) {
                assert!(u.stage_index(m) < u.stage_index(i));
            }
        }
    }
}

#[test]
fn universe_collapses_to_itself() {
    for u in universes() {
        let values = u.elements().to_vec();
        let g = MembershipDigraph::of_values(&values);
        let collapsed = mostowski_collapse(&g).unwrap();
        assert_eq!(collapsed, values);
        assert!(verify_collapse(&g, &collapsed).unwrap());
    }
}

#[test]
fn lift_round_trips() {
    for r in 0..=2 {
        let u = build_universe(&["a", "b"], r, LIMIT).unwrap();
        let v = build_universe(&["p", "q"], r, LIMIT).unwrap();
        let f: BTreeMap<String, String> = [("a", "q"), ("b", "p")].iter().map(|(x, y)| (x.to_string(), y.to_string())).collect();
        let g: BTreeMap<String, String> = f.iter().map(|(x, y)| (y.clone(), x.clone())).collect();
        let there = lift_urelement_bijection(&u, &v, &f).unwrap();
        let back = lift_urelement_bijection(&v, &u, &g).unwrap();
        for i in 0..u.len() {
            assert_eq!(back.map[there.map[i]], i);
        }
        verify_iso(&u, &v, &there).unwrap();
    }
}

#[test]
fn swapped_lift_breaks_membership() {
    let u = build_universe(&["a"], 2, LIMIT).unwrap();
    let f: BTreeMap<String, String> = [("a".to_string(), "a".to_string())].into();
    let mut lift = lift_urelement_bijection(&u, &u, &f).unwrap();
    let (x, y) = (u.index_of(&HFSet::empty()).unwrap(), u.index_of(&HFSet::set(vec![HFSet::ur("a")])).unwrap());
    lift.map.swap(x, y);
    assert!(verify_iso(&u, &u, &lift).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn print_parse_round_trip(x in hfset(4)) {
        let text = x.to_string();
        let back = HFSet::parse(&text).unwrap();
        prop_assert_eq!(&back, &x);
        prop_assert_eq!(back.to_string(), text);
    }

    #[test]
    fn collapse_is_injective_and_idempotent(seed in any::<u64>(), n in 1usize..25) {
        let g = random_extensional_digraph(&mut ChaCha8Rng::seed_from_u64(seed), n);
        let values = mostowski_collapse(&g).unwrap();
        prop_assert!(verify_collapse(&g, &values).unwrap());
        let again = mostowski_collapse(&MembershipDigraph::of_values(&values)).unwrap();
        prop_assert_eq!(again, values);
    }

    #[test]
    fn members_index_correctly(x in hfset(3)) {
        // every element of a parsed set is found among its members
        for m in x.members() {
            prop_assert!(x.contains(m));
            prop_assert!(m.stage() < x.stage());
        }
    }
}
