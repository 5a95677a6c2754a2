mod common;

use common::arb_poly;
use nform::scalar::rat;
use nform::{
    average, lie_transform_residual, normal_form_condition, second_order_nf, FrequencyData,
    PerturbedHamiltonian,
};
use proptest::prelude::*;

fn arb_problem() -> impl Strategy<Value = PerturbedHamiltonian> {
    let modes = prop::sample::select(vec![vec![1u32, 1], vec![1, 2]]);
    (modes, 1i64..4, 1i64..3).prop_flat_map(|(m, a, b)| {
        let f = FrequencyData::new(m, rat(a, b)).unwrap();
        (Just(f), arb_poly(2, 5, 3), arb_poly(2, 4, 3), any::<bool>()).prop_map(|(f, h1, h2, with_h2)| {
            PerturbedHamiltonian::new(f, h1, with_h2.then_some(h2)).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn lie_transform_reproduces_normal_form(ph in arb_problem()) {
        let res = second_order_nf(&ph).unwrap();
        prop_assert!(lie_transform_residual(&ph, &res).unwrap().is_zero());
        prop_assert!(normal_form_condition(&res, ph.freq()).unwrap().passed());
        prop_assert_eq!(res.nf.coeff(0), &ph.h0());
        prop_assert_eq!(res.nf.coeff(1), &average(ph.h1(), ph.freq()).unwrap());
    }
}
