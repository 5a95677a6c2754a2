mod common;

use std::collections::BTreeMap;

use common::arb_poly;
use nform::hopf::{hopf_rewrite, hopf_substitute, hopf_variables, syzygy, w_monomials};
use nform::scalar::rat;
use nform::{lie_upsilon, FrequencyData, NfError, Poly, Rational};
use proptest::prelude::*;

/// Random invariant of degree at most 8, built as a polynomial in w1..w4.
fn arb_invariant() -> impl Strategy<Value = Poly> {
    let term = (0u32..=4, 0usize..100, -6i64..7, 1i64..4);
    prop::collection::vec(term, 1..4).prop_map(|ts| {
        let w = hopf_variables();
        ts.into_iter().fold(Poly::zero(2), |acc, (d, pick, a, b)| {
            let cols = w_monomials(d);
            let m = cols[pick % cols.len()];
            let mono = (0..4).fold(Poly::one(2), |p, i| &p * &w[i].pow(m[i]));
            &acc + &mono.scale_rational(&rat(a, b))
        })
    })
}

fn assignment(names: &[String], seed: i64) -> BTreeMap<String, Rational> {
    names
        .iter()
        .enumerate()
        .map(|(k, n)| (n.clone(), rat(seed * (k as i64 + 1) - 3, 5)))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn rewrite_round_trips_for_any_parameters(f in arb_invariant(), seed in -4i64..5) {
        let h = hopf_rewrite(&f).unwrap();
        prop_assert_eq!(hopf_substitute(&h, &assignment(h.params(), seed)).unwrap(), f.clone());
        prop_assert_eq!(hopf_substitute(&h, &h.zero_assignment()).unwrap(), f);
    }

    #[test]
    fn quartic_families_differ_by_the_syzygy(f in arb_invariant(), seed in 1i64..5) {
        let quartic = f.homogeneous_component(4);
        let h = hopf_rewrite(&quartic).unwrap();
        prop_assert!(h.params().len() <= 1);
        let a = h.at(&h.zero_assignment()).unwrap();
        let b = h.at(&assignment(h.params(), seed)).unwrap();
        let syz = syzygy();
        let mut ratio: Option<Rational> = None;
        for m in w_monomials(2) {
            let diff = b.coeff(&m).constant - a.coeff(&m).constant;
            let s = syz.get(&m).cloned().unwrap_or_default();
            if s == Rational::default() {
                prop_assert_eq!(diff, Rational::default());
            } else {
                let r = diff / s;
                if let Some(prev) = &ratio {
                    prop_assert_eq!(prev, &r);
                }
                ratio = Some(r);
            }
        }
    }

    #[test]
    fn non_invariants_are_rejected(f in arb_poly(2, 6, 4)) {
        let freq = FrequencyData::unit_1_1();
        prop_assume!(!lie_upsilon(&f, &freq).unwrap().is_zero());
        let err = hopf_rewrite(&f).unwrap_err();
        let expected = matches!(err, NfError::NotInvariant { .. } | NfError::OddDegree(_));
        prop_assert!(expected, "unexpected error {:?}", err);
    }
}
