use proptest::prelude::*;
use universal_sharing::structures::{
    brute_force_maximal_independent_sets, cell_census, full_set, is_subset, members, minimal_antichain, subset_of,
    structure_from_json, structure_to_json, theorem7_structure, universal_normalized, AccessStructure, CellCensus,
    Subset,
};
use universal_sharing::Error;

fn s(ms: &[usize]) -> Subset {
    subset_of(ms.iter().copied())
}

#[test]
fn minimal_antichain_examples() {
    assert_eq!(minimal_antichain(&[s(&[1]), s(&[1, 2])]).unwrap(), vec![s(&[1])]);
    assert_eq!(minimal_antichain(&[s(&[1]), s(&[2])]).unwrap(), vec![s(&[1]), s(&[2])]);
    assert_eq!(
        minimal_antichain(&[s(&[1, 2]), s(&[2, 3]), s(&[1, 2, 3])]).unwrap(),
        vec![s(&[1, 2]), s(&[2, 3])]
    );
    assert!(matches!(minimal_antichain(&[]), Err(Error::EmptyInput)));
    assert!(matches!(minimal_antichain(&[s(&[1]), 0]), Err(Error::EmptyMember(1))));
}

#[test]
fn canonical_order_is_cardinality_then_mask() {
    let a = AccessStructure::new(4, &[s(&[0, 1]), s(&[3]), s(&[1, 2]), s(&[2])]).unwrap();
    assert_eq!(a.minimal_sets(), &[s(&[2]), s(&[3]), s(&[0, 1])]);
    assert!(matches!(AccessStructure::new_strict(3, &[s(&[0]), s(&[0, 1])]), Err(Error::NotAntichain(_))));
}

#[test]
fn universal_normalized_shapes() {
    let u2 = universal_normalized(2).unwrap();
    assert_eq!(u2.m(), 2);
    assert_eq!(u2.minimal_sets(), &[s(&[0]), s(&[1])]);
    for (n, size) in [(3, 3), (4, 7)] {
        let u = universal_normalized(n).unwrap();
        assert_eq!(u.m(), (1 << n) - 2);
        assert!(u.minimal_sets().iter().all(|a| a.count_ones() == size));
    }
    assert!(universal_normalized(1).is_err());
}

#[test]
fn census_examples() {
    let c2 = cell_census(&universal_normalized(2).unwrap()).unwrap();
    assert_eq!((c2.count(0b01), c2.count(0b10), c2.count(0b00), c2.count(0b11)), (1, 1, 0, 0));
    let c3 = cell_census(&universal_normalized(3).unwrap()).unwrap();
    assert!((1..7).all(|b| c3.count(b) == 1));
    assert_eq!((c3.count(0), c3.count(7)), (0, 0));
    // U*_2 plus participant 2 added to both minimal sets
    let a = AccessStructure::new(3, &[s(&[0, 2]), s(&[1, 2])]).unwrap();
    let c = cell_census(&a).unwrap();
    assert_eq!((c.count(0b01), c.count(0b10), c.count(0b11), c.count(0)), (1, 1, 1, 0));
    assert!(c.is_universal() || c.count(0) == 0);
    for n in 2..=6 {
        assert!(cell_census(&universal_normalized(n).unwrap()).unwrap().is_normalized());
    }
}

#[test]
fn census_realize_round_trip() {
    let census = CellCensus::new(3, (0..8u64).map(|b| (b, 2))).unwrap();
    let (structure, patterns) = census.realize().unwrap();
    assert_eq!(structure.m(), 16);
    let back = cell_census(&structure).unwrap();
    // participants in the all-zero cell are not in any minimal set
    assert_eq!(back.total(), 16);
    for p in 0..structure.m() {
        assert_eq!(structure.membership_pattern(p).unwrap(), patterns[p]);
    }
}

#[test]
fn qualification_examples() {
    let u2 = universal_normalized(2).unwrap();
    assert!(u2.is_qualified(s(&[0])));
    assert!(!u2.is_qualified(0));
    let u3 = universal_normalized(3).unwrap();
    let a1 = u3.minimal_sets()[0];
    for p in members(a1) {
        let smaller = a1 & !(1 << p);
        assert!(!u3.is_qualified(smaller));
        // brute-force containment against every minimal set
        assert!(u3.minimal_sets().iter().all(|&m| !is_subset(m, smaller)));
    }
}

#[test]
fn maximal_independent_examples() {
    assert_eq!(universal_normalized(2).unwrap().maximal_independent_sets().unwrap(), vec![0]);
    let whole = AccessStructure::new(4, &[full_set(4)]).unwrap();
    let mis = whole.maximal_independent_sets().unwrap();
    assert_eq!(mis.len(), 4);
    assert!(mis.iter().all(|m| m.count_ones() == 3));
    let u3 = universal_normalized(3).unwrap();
    assert_eq!(u3.maximal_independent_sets().unwrap(), brute_force_maximal_independent_sets(&u3).unwrap());
    let u4 = universal_normalized(4).unwrap();
    assert_eq!(u4.maximal_independent_sets().unwrap(), brute_force_maximal_independent_sets(&u4).unwrap());
}

#[test]
fn json_round_trip_and_strictness() {
    let u3 = universal_normalized(3).unwrap();
    assert_eq!(structure_from_json(&structure_to_json(&u3), true).unwrap(), u3);
    let text = r#"{"m": 3, "minimal_sets": [[0], [0, 1], [2]]}"#;
    assert_eq!(structure_from_json(text, false).unwrap().minimal_sets(), &[s(&[0]), s(&[2])]);
    assert!(structure_from_json(text, true).is_err());
}

#[test]
fn theorem7_examples() {
    let (s2, c2) = theorem7_structure(2).unwrap();
    // a_1 = 0, a_2 = 1, b_1 = 2, b_2 = 3
    assert_eq!(s2.minimal_sets(), &[s(&[0, 2]), s(&[1, 2, 3])]);
    assert_eq!(c2.a0, s(&[0, 1]));
    let (s3, _) = theorem7_structure(3).unwrap();
    assert_eq!(s3.minimal_sets(), &[s(&[0, 2]), s(&[1, 2, 3]), s(&[2, 3, 4])]);
    let (_, c4) = theorem7_structure(4).unwrap();
    assert_eq!(c4.a0.count_ones(), 3);
    for n in 2..=64 {
        let (st, cert) = theorem7_structure(n).unwrap();
        assert_eq!(st.num_minimal(), n);
        let mut bset: Subset = 0;
        for i in 0..n {
            assert!(!st.is_qualified(bset | cert.c[i]), "B_{i}C_{i} independent for n={n}");
            bset |= 1 << cert.b[i];
            assert!(st.is_qualified(bset | cert.c[i]), "B_{{i+1}}C_{i} qualified for n={n}");
        }
        for i in 0..n {
            for j in i + 1..n {
                assert!(!is_subset(cert.c[i], cert.c[j]) || cert.c[i] == 0);
            }
        }
    }
}

fn random_structure() -> impl Strategy<Value = AccessStructure> {
    (1usize..=10).prop_flat_map(|m| {
        let top: u128 = (1 << m) - 1;
        proptest::collection::vec(1..=top, 1..6).prop_map(move |sets| AccessStructure::new(m, &sets).unwrap())
    })
}

proptest! {
    #[test]
    fn maximal_independent_sets_match_brute_force(a in random_structure()) {
        prop_assert_eq!(a.maximal_independent_sets().unwrap(), brute_force_maximal_independent_sets(&a).unwrap());
    }

    #[test]
    fn qualification_is_monotone(a in random_structure(), x in any::<u16>(), y in any::<u16>()) {
        let mask = full_set(a.m());
        let small = x as u128 & mask;
        let big = small | (y as u128 & mask);
        prop_assert!(!a.is_qualified(small) || a.is_qualified(big));
    }

    #[test]
    fn minimal_sets_form_an_antichain(a in random_structure()) {
        let sets = a.minimal_sets();
        for i in 0..sets.len() {
            for j in 0..sets.len() {
                prop_assert!(i == j || !is_subset(sets[i], sets[j]));
            }
        }
    }
}
