//! Canonical Poisson bracket on R^2n.
//!
//! Convention: `{f, g} = Σ_i (∂f/∂q_i ∂g/∂p_i − ∂f/∂p_i ∂g/∂q_i)`, so
//! `{q_i, p_j} = δ_ij`, and the Hamiltonian vector field acts on functions by
//! `X_f(g) = {f, g}`.

use crate::error::{NfError, Result};
use crate::poly::Poly;

pub fn bracket(f: &Poly, g: &Poly) -> Result<Poly> {
    if f.dim() != g.dim() {
        return Err(NfError::DimensionMismatch {
            left: f.dim(),
            right: g.dim(),
        });
    }
    let n = f.dim();
    let mut out = Poly::zero(n);
    for i in 0..n {
        let fq = f.partial(i);
        let fp = f.partial(n + i);
        if !fq.is_zero() {
            let gp = g.partial(n + i);
            out = &out + &(&fq * &gp);
        }
        if !fp.is_zero() {
            let gq = g.partial(i);
            out = &out - &(&fp * &gq);
        }
    }
    Ok(out)
}

/// Lie derivative of `g` along the Hamiltonian vector field of `h`.
pub fn ham_apply(h: &Poly, g: &Poly) -> Result<Poly> {
    bracket(h, g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Monomial;
    use crate::scalar::{rat, GaussRational};
    use proptest::prelude::*;

    fn h0() -> Poly {
        let n = 2;
        let sum = (0..n).fold(Poly::zero(n), |acc, j| {
            &acc + &(&Poly::q(n, j).pow(2) + &Poly::p(n, j).pow(2))
        });
        sum.scale_rational(&rat(1, 2))
    }

    #[test]
    fn canonical_relations() {
        let q = Poly::q(2, 0);
        let p = Poly::p(2, 0);
        assert_eq!(bracket(&q, &p).unwrap(), Poly::one(2));
        assert!(bracket(&q, &Poly::p(2, 1)).unwrap().is_zero());
        assert!(bracket(&h0(), &h0()).unwrap().is_zero());
        assert_eq!(
            bracket(&q.pow(2), &p).unwrap(),
            q.scale_rational(&rat(2, 1))
        );
        assert!(bracket(&Poly::zero(1), &Poly::zero(2)).is_err());
    }

    #[test]
    fn ham_apply_on_oscillator() {
        assert!(ham_apply(&h0(), &h0()).unwrap().is_zero());
        let r = &Poly::q(2, 0).pow(2) + &Poly::p(2, 0).pow(2);
        assert!(ham_apply(&h0(), &r).unwrap().is_zero());
        // X_{H0}(q1) = -p1 under this convention
        assert_eq!(ham_apply(&h0(), &Poly::q(2, 0)).unwrap(), -&Poly::p(2, 0));
    }

    fn arb_poly() -> impl Strategy<Value = Poly> {
        let mono = proptest::collection::vec(0u32..3, 4);
        proptest::collection::vec((mono, -5i64..6, 1i64..4), 0..5).prop_map(|ts| {
            Poly::from_terms(
                2,
                ts.into_iter()
                    .map(|(m, a, b)| (Monomial::from_exponents(m), GaussRational::real(rat(a, b)))),
            )
            .unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn antisymmetry(f in arb_poly(), g in arb_poly()) {
            let s = &bracket(&f, &g).unwrap() + &bracket(&g, &f).unwrap();
            prop_assert!(s.is_zero());
        }

        #[test]
        fn jacobi(f in arb_poly(), g in arb_poly(), h in arb_poly()) {
            let a = bracket(&f, &bracket(&g, &h).unwrap()).unwrap();
            let b = bracket(&g, &bracket(&h, &f).unwrap()).unwrap();
            let c = bracket(&h, &bracket(&f, &g).unwrap()).unwrap();
            prop_assert!((&(&a + &b) + &c).is_zero());
        }

        #[test]
        fn leibniz(f in arb_poly(), g in arb_poly(), h in arb_poly()) {
            let lhs = bracket(&f, &(&g * &h)).unwrap();
            let rhs = &(&bracket(&f, &g).unwrap() * &h) + &(&g * &bracket(&f, &h).unwrap());
            prop_assert_eq!(lhs, rhs);
        }
    }
}
