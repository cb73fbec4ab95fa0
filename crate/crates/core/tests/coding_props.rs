use catbench::coding::{
    decode_seq, encode_seq, pair, phi_witness, psi_check, unpair, verify_iso_clauses, ClauseStatus, Coder,
};
use catbench::dedekind::build_recursion_iso;
use catbench::structures::preset;
use catbench::DEFAULT_STEP_BUDGET;
use dashu_int::UBig;
use proptest::prelude::*;

fn big() -> impl Strategy<Value = UBig> {
    prop_oneof![
        any::<u64>().prop_map(UBig::from),
        proptest::collection::vec(any::<u8>(), 0..40).prop_map(|b| UBig::from_le_bytes(&b)),
    ]
}

#[test]
fn pairing_matches_triangle_walk() {
    // independent enumeration of ℕ×ℕ along anti-diagonals
    let mut n = 0u64;
    for s in 0..60u64 {
        for b in 0..=s {
            let a = s - b;
            assert_eq!(pair(&UBig::from(a), &UBig::from(b)), UBig::from(n));
            n += 1;
        }
    }
}

#[test]
fn iterated_codes_enumerate_every_sequence() {
    // the first codes hit distinct sequences and re-encode to themselves
    let mut seen = std::collections::BTreeSet::new();
    for n in 0..5000u64 {
        let s = decode_seq(&UBig::from(n));
        assert_eq!(encode_seq(&s), UBig::from(n));
        assert!(seen.insert(s.iter().map(|x| x.to_string()).collect::<Vec<_>>()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn unpair_inverts_pair(a in big(), b in big()) {
        prop_assert_eq!(unpair(&pair(&a, &b)), (a, b));
    }

    #[test]
    fn pair_inverts_unpair(n in big()) {
        let (a, b) = unpair(&n);
        prop_assert_eq!(pair(&a, &b), n);
    }

    #[test]
    fn iterated_is_a_bijection(n in big()) {
        let c = Coder::iterated();
        prop_assert_eq!(c.encode(&c.decode(&n)), n);
    }

    #[test]
    fn iterated_round_trip(s in proptest::collection::vec(any::<u16>().prop_map(UBig::from), 0..6)) {
        let c = Coder::iterated();
        prop_assert_eq!(c.decode(&c.encode(&s)), s);
    }

    #[test]
    fn digits_round_trip(s in proptest::collection::vec(big(), 0..40)) {
        let c = Coder::digits();
        prop_assert_eq!(c.decode(&c.encode(&s)), s);
    }

    #[test]
    fn digits_decode_is_total(n in big()) {
        let c = Coder::digits();
        let s = c.decode(&n);
        // re-encoding picks the canonical width, so decoding again is stable
        prop_assert_eq!(c.decode(&c.encode(&s)), s);
    }

    #[test]
    fn witness_satisfies_psi(k in 0u64..20, m in 1u64..5, steps in 0u64..40, iterated in any::<bool>()) {
        // iterated codes double in bit length per entry, so keep those lists short
        let (coder, steps) = if iterated { (Coder::iterated(), steps % 6) } else { (Coder::digits(), steps) };
        let p1 = preset("standard").unwrap();
        let p2 = preset(&format!("scaled({m})")).unwrap();
        let p3 = preset(&format!("offset({k})")).unwrap();
        for target in [p2.as_ref(), p3.as_ref()] {
            let (v, x) = phi_witness(&coder, steps, p1.as_ref(), target, DEFAULT_STEP_BUDGET).unwrap();
            prop_assert!(psi_check(&coder, &x, steps, v, p1.as_ref(), target).unwrap());
            // the same witness does not certify a different value
            prop_assert!(!psi_check(&coder, &x, steps, v + 1, p1.as_ref(), target).unwrap());
        }
        prop_assert_eq!(phi_witness(&coder, steps, p1.as_ref(), p2.as_ref(), DEFAULT_STEP_BUDGET).unwrap().0, m * steps);
    }

    #[test]
    fn clause_values_match_recursion_iso(k in 0u64..30, n in 0usize..25) {
        let p1 = preset("standard").unwrap();
        let p2 = preset(&format!("offset({k})")).unwrap();
        let report = verify_iso_clauses(n, p1.as_ref(), p2.as_ref(), &Coder::digits(), DEFAULT_STEP_BUDGET).unwrap();
        let iso = build_recursion_iso(p1.as_ref(), p2.as_ref(), n, DEFAULT_STEP_BUDGET).unwrap();
        prop_assert_eq!(&report.values, &iso.pairs);
        let succ = report.clauses.iter().find(|c| c.clause == "successor").unwrap();
        prop_assert_eq!(&succ.status, &ClauseStatus::Ok);
    }
}

#[test]
fn standard_to_evens_satisfies_every_clause() {
    let p1 = preset("standard").unwrap();
    let p2 = preset("evens").unwrap();
    let report = verify_iso_clauses(12, p1.as_ref(), p2.as_ref(), &Coder::digits(), DEFAULT_STEP_BUDGET).unwrap();
    for c in &report.clauses {
        assert!(!matches!(c.status, ClauseStatus::Failed { .. }), "{}: {:?}", c.clause, c.status);
    }
}
