#![allow(dead_code)]

use nform::scalar::rat;
use nform::{FrequencyData, GaussRational, Monomial, Poly};
use proptest::prelude::*;

pub fn mode_sets() -> Vec<Vec<u32>> {
    vec![vec![1, 1], vec![1, 2], vec![1, 2, 3]]
}

pub fn arb_freq() -> impl Strategy<Value = FrequencyData> {
    (prop::sample::select(mode_sets()), 1i64..4, 1i64..3)
        .prop_map(|(m, a, b)| FrequencyData::new(m, rat(a, b)).unwrap())
}

/// Sparse real polynomial in dimension `n` with total degree at most `max_deg`.
pub fn arb_poly(n: usize, max_deg: u32, max_terms: usize) -> impl Strategy<Value = Poly> {
    let mono = prop::collection::vec(0u32..=max_deg, 2 * n);
    prop::collection::vec((mono, -7i64..8, 1i64..5), 1..=max_terms).prop_map(move |ts| {
        let terms = ts.into_iter().map(|(mut m, a, b)| {
            // clip total degree by peeling exponents from the front
            let mut total: u32 = m.iter().sum();
            for e in m.iter_mut() {
                while total > max_deg && *e > 0 {
                    *e -= 1;
                    total -= 1;
                }
            }
            (Monomial::from_exponents(m), GaussRational::real(rat(a, b)))
        });
        Poly::from_terms(n, terms).unwrap()
    })
}

/// A frequency together with a polynomial of matching dimension.
pub fn arb_freq_poly(max_deg: u32, max_terms: usize) -> impl Strategy<Value = (FrequencyData, Poly)> {
    arb_freq().prop_flat_map(move |f| {
        let n = f.dim();
        (Just(f), arb_poly(n, max_deg, max_terms))
    })
}
