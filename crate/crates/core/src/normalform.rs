//! Second-order normal form, its generating functions, and the Lie-transform
//! re-derivation used to verify it.
//!
//! All series use the factorial convention
//! `c0 + ε c1 + (ε²/2) c2`, for both the input Hamiltonian and the output.

use crate::averaging::{average, s_op, FrequencyData};
use crate::error::{NfError, Result};
use crate::poisson::bracket;
use crate::poly::Poly;
use crate::scalar::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerturbedHamiltonian {
    freq: FrequencyData,
    h1: Poly,
    h2: Poly,
}

impl PerturbedHamiltonian {
    pub fn new(freq: FrequencyData, h1: Poly, h2: Option<Poly>) -> Result<Self> {
        let n = freq.dim();
        let h2 = h2.unwrap_or_else(|| Poly::zero(n));
        for p in [&h1, &h2] {
            if p.dim() != n {
                return Err(NfError::DimensionMismatch {
                    left: n,
                    right: p.dim(),
                });
            }
            if !p.is_real() {
                return Err(NfError::NotReal);
            }
        }
        Ok(Self { freq, h1, h2 })
    }

    pub fn freq(&self) -> &FrequencyData {
        &self.freq
    }

    pub fn h0(&self) -> Poly {
        self.freq.h0()
    }

    pub fn h1(&self) -> &Poly {
        &self.h1
    }

    pub fn h2(&self) -> &Poly {
        &self.h2
    }

    pub fn series(&self) -> EpsSeries {
        EpsSeries::new([self.h0(), self.h1.clone(), self.h2.clone()])
    }
}

/// Coefficients of `c0 + ε c1 + (ε²/2) c2`; higher orders are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpsSeries {
    coeffs: [Poly; 3],
}

impl EpsSeries {
    pub fn new(coeffs: [Poly; 3]) -> Self {
        let n = coeffs[0].dim();
        assert!(
            coeffs.iter().all(|c| c.dim() == n),
            "series coefficients must share a dimension"
        );
        Self { coeffs }
    }

    pub fn coeff(&self, order: usize) -> &Poly {
        &self.coeffs[order]
    }

    pub fn coeffs(&self) -> &[Poly; 3] {
        &self.coeffs
    }

    pub fn set_coeff(&mut self, order: usize, p: Poly) {
        assert_eq!(p.dim(), self.coeffs[order].dim());
        self.coeffs[order] = p;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Poly::is_zero)
    }

    /// `c0 + ε c1 + (ε²/2) c2` at an exact value of ε.
    pub fn sum_at(&self, eps: &Rational) -> Poly {
        let half_sq = eps * eps / Rational::from_integer(2.into());
        &(&self.coeffs[0] + &self.coeffs[1].scale_rational(eps))
            + &self.coeffs[2].scale_rational(&half_sq)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalFormResult {
    pub nf: EpsSeries,
    /// Generator of the order-0 part of the normalizing vector field.
    pub g0: Poly,
    /// Generator of the order-1 part.
    pub g1: Poly,
}

pub fn second_order_nf(ph: &PerturbedHamiltonian) -> Result<NormalFormResult> {
    let freq = &ph.freq;
    let inv_omega = freq.omega0().recip();
    let h1 = &ph.h1;

    let avg_h1 = average(h1, freq)?;
    let g0 = s_op(h1, freq)?.scale_rational(&inv_omega);
    // S(H1/ω) = S(H1)/ω for constant ω
    let g0_h1 = bracket(&g0, h1)?;
    let nf2 = &average(&ph.h2, freq)? + &average(&g0_h1, freq)?;

    let inner = &ph.h2 + &bracket(&g0, &(h1 + &avg_h1))?;
    let g1 = s_op(&inner, freq)?.scale_rational(&inv_omega);

    Ok(NormalFormResult {
        nf: EpsSeries::new([ph.h0(), avg_h1, nf2]),
        g0,
        g1,
    })
}

/// Expands `H_ε ∘ Φ_ε` through order two by iterated brackets with the
/// generators and subtracts the claimed normal form. Zero for a correct
/// result.
pub fn lie_transform_residual(ph: &PerturbedHamiltonian, res: &NormalFormResult) -> Result<EpsSeries> {
    let h0 = ph.h0();
    let (g0, g1) = (&res.g0, &res.g1);

    let l0_h0 = bracket(g0, &h0)?;
    let l0l0_h0 = bracket(g0, &l0_h0)?;
    let l0_h1 = bracket(g0, &ph.h1)?;
    let l1_h0 = bracket(g1, &h0)?;

    let order0 = &h0 - res.nf.coeff(0);
    let order1 = &(&l0_h0 + &ph.h1) - res.nf.coeff(1);
    let two_l0_h1 = l0_h1.scale_rational(&Rational::from_integer(2.into()));
    let order2 = &(&(&(&l0l0_h0 + &two_l0_h1) + &l1_h0) + &ph.h2) - res.nf.coeff(2);
    Ok(EpsSeries::new([order0, order1, order2]))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderCheck {
    pub order: usize,
    pub passed: bool,
    /// `{H0, nf_order}`, zero when the check passes.
    pub witness: Poly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalFormReport {
    pub orders: Vec<OrderCheck>,
}

impl NormalFormReport {
    pub fn passed(&self) -> bool {
        self.orders.iter().all(|o| o.passed)
    }

    pub fn order(&self, k: usize) -> Option<&OrderCheck> {
        self.orders.iter().find(|o| o.order == k)
    }
}

/// Deprit condition: every perturbation order Poisson-commutes with `H0`.
pub fn normal_form_condition(res: &NormalFormResult, freq: &FrequencyData) -> Result<NormalFormReport> {
    let h0 = freq.h0();
    let orders = (1..=2)
        .map(|k| {
            let witness = bracket(&h0, res.nf.coeff(k))?;
            Ok(OrderCheck {
                order: k,
                passed: witness.is_zero(),
                witness,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(NormalFormReport { orders })
}

/// The two bundled example problems, both on the 1:1 oscillator with ω0 = 1.
pub mod fixtures {
    use super::PerturbedHamiltonian;
    use crate::averaging::FrequencyData;
    use crate::parse::parse_poly;

    /// `H1 = q1³/3 − q1 q2²`.
    pub fn henon_heiles() -> PerturbedHamiltonian {
        let h1 = parse_poly("q1^3/3 - q1*q2^2", 2).unwrap();
        PerturbedHamiltonian::new(FrequencyData::unit_1_1(), h1, None).unwrap()
    }

    /// `H1 = −q1²(1 + q2)/2`.
    pub fn elastic_pendulum() -> PerturbedHamiltonian {
        let h1 = parse_poly("-1/2*q1^2*(1+q2)", 2).unwrap();
        PerturbedHamiltonian::new(FrequencyData::unit_1_1(), h1, None).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::parse::parse_poly;
    use crate::scalar::rat;

    fn p2(s: &str) -> Poly {
        parse_poly(s, 2).unwrap()
    }

    #[test]
    fn henon_heiles_quartic_coefficients() {
        let res = second_order_nf(&henon_heiles()).unwrap();
        assert!(res.nf.coeff(1).is_zero());
        let expected = p2(
            "-1/48*(5*q2^4 + (10*q1^2 + 10*p2^2 - 18*p1^2)*q2^2 + 56*p1*p2*q1*q2 + 5*q1^4 \
             + (10*p1^2 - 18*p2^2)*q1^2 + 5*p2^4 + 10*p1^2*p2^2 + 5*p1^4)",
        );
        let half = res.nf.coeff(2).scale_rational(&rat(1, 2));
        assert_eq!(half, expected);
        assert_eq!(res.nf.coeff(2).coeff_of(&[0, 4, 0, 0]).re, rat(-5, 24));
    }

    #[test]
    fn pendulum_second_order_coefficients() {
        let res = second_order_nf(&elastic_pendulum()).unwrap();
        assert_eq!(res.nf.coeff(1), &p2("-(q1^2 + p1^2)/4"));
        let expected = p2(
            "-1/192*((20*q1^2 - 4*p1^2)*q2^2 + 48*p1*p2*q1*q2 + 5*q1^4 \
             + (-4*p2^2 + 10*p1^2 + 12)*q1^2 + 20*p1^2*p2^2 + 5*p1^4 + 12*p1^2)",
        );
        assert_eq!(res.nf.coeff(2).scale_rational(&rat(1, 2)), expected);
    }

    #[test]
    fn invariant_perturbation_is_already_normal() {
        let h1 = p2("(q1^2 + p1^2)^2 - 3*(q1*q2 + p1*p2)");
        let ph = PerturbedHamiltonian::new(FrequencyData::unit_1_1(), h1.clone(), None).unwrap();
        let res = second_order_nf(&ph).unwrap();
        assert_eq!(res.nf.coeff(1), &h1);
        assert!(res.nf.coeff(2).is_zero());
        assert!(res.g0.is_zero());
        assert!(normal_form_condition(&res, ph.freq()).unwrap().passed());
    }

    #[test]
    fn residual_vanishes_on_fixtures() {
        for ph in [henon_heiles(), elastic_pendulum()] {
            let res = second_order_nf(&ph).unwrap();
            assert!(lie_transform_residual(&ph, &res).unwrap().is_zero());
            assert!(normal_form_condition(&res, ph.freq()).unwrap().passed());
        }
        let zero = PerturbedHamiltonian::new(FrequencyData::unit_1_1(), Poly::zero(2), None).unwrap();
        let res = second_order_nf(&zero).unwrap();
        assert!(lie_transform_residual(&zero, &res).unwrap().is_zero());
    }

    #[test]
    fn tampered_result_fails() {
        let ph = henon_heiles();
        let mut res = second_order_nf(&ph).unwrap();
        res.nf.set_coeff(1, Poly::q(2, 0));
        let report = normal_form_condition(&res, ph.freq()).unwrap();
        assert!(!report.order(1).unwrap().passed);
        assert!(report.order(2).unwrap().passed);
        assert!(!lie_transform_residual(&ph, &res).unwrap().is_zero());
    }

    #[test]
    fn h2_enters_linearly_through_its_average() {
        let freq = FrequencyData::new(vec![1, 2], rat(3, 2)).unwrap();
        let h1 = p2("q1^2*q2 - p1*p2 + 2*q1^3");
        let h2 = p2("q1^4 - q2^2*p1 + q2");
        let a = second_order_nf(&PerturbedHamiltonian::new(freq.clone(), h1.clone(), None).unwrap()).unwrap();
        let ph = PerturbedHamiltonian::new(freq.clone(), h1, Some(h2.clone())).unwrap();
        let b = second_order_nf(&ph).unwrap();
        assert_eq!(b.nf.coeff(2), &(a.nf.coeff(2) + &average(&h2, &freq).unwrap()));
        assert!(lie_transform_residual(&ph, &b).unwrap().is_zero());
    }

    #[test]
    fn rejects_bad_input() {
        let f = FrequencyData::unit_1_1();
        assert!(PerturbedHamiltonian::new(f.clone(), Poly::q(3, 0), None).is_err());
        let complex = Poly::constant(2, crate::scalar::GaussRational::i());
        assert_eq!(
            PerturbedHamiltonian::new(f, complex, None),
            Err(NfError::NotReal)
        );
    }

    #[test]
    fn series_sum() {
        let s = henon_heiles().series();
        let at = s.sum_at(&rat(1, 10));
        assert_eq!(at, &s.coeff(0).clone() + &s.coeff(1).scale_rational(&rat(1, 10)));
    }
}
