//! The circle action of a resonant oscillator and its two averaging
//! operators.
//!
//! `H0 = ω0 Σ_j m_j (q_j² + p_j²)/2` with coprime positive modes `m`. The
//! generator of the 2π-periodic action is `Υ = X_{H0}/ω0`; with the bracket
//! convention of [`crate::poisson`] its flow is `z_j ↦ e^{i m_j t} z_j`, so a
//! phase-basis term `z^a z̄^b` is pulled back to `e^{ikt} z^a z̄^b` with
//! `k = Σ m_j (a_j − b_j)`. Both integrals are then exact:
//!
//! * `⟨f⟩ = (1/2π)∫ f∘Fl^t dt` keeps the `k = 0` terms;
//! * `S(f) = (1/2π)∫ (t − π) f∘Fl^t dt` multiplies a `k ≠ 0` term by
//!   `1/(ik)` and kills the rest.

use std::f64::consts::PI;

use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::complex::{to_complex_basis, PhaseMonomial};
use crate::error::{NfError, Result};
use crate::poisson::bracket;
use crate::poly::Poly;
use crate::scalar::{rational_to_f64, GaussRational, Rational};

/// Sign `σ` in `z_j ↦ e^{iσ m_j t} z_j` for the pullback along the action.
/// Fixed by the bracket convention and guarded by the quadrature tests.
pub const ACTION_DIRECTION: i64 = 1;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrequencyData {
    modes: Vec<u32>,
    omega0: Rational,
}

impl FrequencyData {
    pub fn new(modes: Vec<u32>, omega0: Rational) -> Result<Self> {
        if modes.is_empty() {
            return Err(NfError::InvalidFrequency("no modes given".into()));
        }
        if modes.contains(&0) {
            return Err(NfError::InvalidFrequency("modes must be positive".into()));
        }
        let g = modes.iter().fold(0u32, |g, &m| g.gcd(&m));
        if g != 1 {
            return Err(NfError::InvalidFrequency(format!(
                "gcd of modes is {g}, expected 1"
            )));
        }
        if !omega0.is_positive() {
            return Err(NfError::InvalidFrequency("omega0 must be positive".into()));
        }
        Ok(Self { modes, omega0 })
    }

    /// 1:1 resonance in two degrees of freedom with `ω0 = 1`.
    pub fn unit_1_1() -> Self {
        Self::new(vec![1, 1], Rational::from_integer(1.into())).unwrap()
    }

    pub fn modes(&self) -> &[u32] {
        &self.modes
    }

    pub fn omega0(&self) -> &Rational {
        &self.omega0
    }

    pub fn dim(&self) -> usize {
        self.modes.len()
    }

    pub fn h0(&self) -> Poly {
        let n = self.dim();
        let mut h = Poly::zero(n);
        for (j, &m) in self.modes.iter().enumerate() {
            let c = &self.omega0 * Rational::new(m.into(), 2.into());
            let action = &Poly::q(n, j).pow(2) + &Poly::p(n, j).pow(2);
            h = &h + &action.scale_rational(&c);
        }
        h
    }

    pub fn phase_weight(&self, key: &PhaseMonomial) -> PhaseWeight {
        let (a, b) = key;
        let k = self
            .modes
            .iter()
            .zip(a.iter().zip(b))
            .map(|(&m, (&aj, &bj))| m as i64 * (aj as i64 - bj as i64))
            .sum();
        PhaseWeight { k }
    }

    fn check(&self, f: &Poly) -> Result<()> {
        if f.dim() != self.dim() {
            return Err(NfError::DimensionMismatch {
                left: f.dim(),
                right: self.dim(),
            });
        }
        Ok(())
    }
}

/// Net phase of a phase-basis term under the action; zero iff the term is
/// invariant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PhaseWeight {
    pub k: i64,
}

impl PhaseWeight {
    pub fn is_invariant(self) -> bool {
        self.k == 0
    }

    /// `(1/2π) ∫_0^{2π} (t − π) e^{iσkt} dt`, zero for `k = 0`.
    pub fn s_factor(self) -> GaussRational {
        if self.k == 0 {
            return GaussRational::zero();
        }
        let ik = GaussRational::new(Rational::zero(), Rational::from_integer((ACTION_DIRECTION * self.k).into()));
        ik.inv().unwrap()
    }
}

pub fn average(f: &Poly, freq: &FrequencyData) -> Result<Poly> {
    freq.check(f)?;
    let z = to_complex_basis(f);
    let kept = z.map_terms(|key| {
        freq.phase_weight(key)
            .is_invariant()
            .then(|| GaussRational::from_int(1))
    });
    Ok(finish(kept.to_poly(), f.is_real()))
}

pub fn s_op(f: &Poly, freq: &FrequencyData) -> Result<Poly> {
    freq.check(f)?;
    let z = to_complex_basis(f);
    let weighted = z.map_terms(|key| {
        let w = freq.phase_weight(key);
        (!w.is_invariant()).then(|| w.s_factor())
    });
    Ok(finish(weighted.to_poly(), f.is_real()))
}

/// Real input must give real output; anything else is an arithmetic bug.
fn finish(p: Poly, real_input: bool) -> Poly {
    if real_input {
        assert!(p.is_real(), "averaging produced a non-real result from real input");
    }
    p
}

/// Lie derivative along the action generator, `{H0, f}/ω0`.
pub fn lie_upsilon(f: &Poly, freq: &FrequencyData) -> Result<Poly> {
    freq.check(f)?;
    let b = bracket(&freq.h0(), f)?;
    Ok(b.scale_rational(&freq.omega0.recip()))
}

pub fn is_invariant(f: &Poly, freq: &FrequencyData) -> Result<bool> {
    Ok(lie_upsilon(f, freq)?.is_zero())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleKind {
    Average,
    S,
}

/// Point reached from `x` after time `t` along the action generator: each
/// `(q_j, p_j)` pair rotated by angle `m_j t`, in the sense of the
/// Hamiltonian vector field `q̇ = −∂H/∂p`, `ṗ = ∂H/∂q` of `H0/ω0`.
pub fn action_flow(freq: &FrequencyData, x: &[f64], t: f64) -> Vec<f64> {
    let n = freq.dim();
    let mut y = x.to_vec();
    for (j, &m) in freq.modes.iter().enumerate() {
        let (s, c) = (m as f64 * t).sin_cos();
        let (q, p) = (x[j], x[n + j]);
        y[j] = q * c - p * s;
        y[n + j] = p * c + q * s;
    }
    y
}

const GL_ORDER: usize = 12;
const GL_PANELS: usize = 96;

/// Gauss-Legendre nodes and weights on [-1, 1].
pub(crate) fn gauss_legendre(order: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(order);
    for i in 0..order {
        let mut x = (PI * (i as f64 + 0.75) / (order as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=order {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = order as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

/// Numerical value of `⟨f⟩(x)` or `S(f)(x)` by composite Gauss-Legendre
/// quadrature of the defining integrals over the explicit rotation flow.
/// Independent of the phase-basis route used by [`average`] and [`s_op`].
pub fn quadrature_oracle(
    f: &Poly,
    freq: &FrequencyData,
    x: &[f64],
    which: OracleKind,
) -> Result<f64> {
    freq.check(f)?;
    if !f.is_real() {
        return Err(NfError::NotReal);
    }
    if x.len() != 2 * freq.dim() {
        return Err(NfError::PointLength {
            got: x.len(),
            expected: 2 * freq.dim(),
        });
    }
    let coeffs: Vec<(Vec<i32>, f64)> = f
        .terms()
        .map(|(m, c)| {
            (
                m.exponents().iter().map(|&e| e as i32).collect(),
                rational_to_f64(&c.re),
            )
        })
        .collect();
    let eval = |y: &[f64]| -> f64 {
        coeffs
            .iter()
            .map(|(e, c)| c * y.iter().zip(e).map(|(v, &k)| v.powi(k)).product::<f64>())
            .sum()
    };
    let rule = gauss_legendre(GL_ORDER);
    let width = 2.0 * PI / GL_PANELS as f64;
    let mut total = 0.0;
    for panel in 0..GL_PANELS {
        let mid = (panel as f64 + 0.5) * width;
        for &(node, w) in &rule {
            let t = mid + 0.5 * width * node;
            let kernel = match which {
                OracleKind::Average => 1.0,
                OracleKind::S => t - PI,
            };
            total += 0.5 * width * w * kernel * eval(&action_flow(freq, x, t));
        }
    }
    Ok(total / (2.0 * PI))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    fn hh_k1() -> Poly {
        let (q1, q2) = (Poly::q(2, 0), Poly::q(2, 1));
        &q1.pow(3).scale_rational(&rat(1, 3)) - &(&q1 * &q2.pow(2))
    }

    fn pendulum_h1() -> Poly {
        let (q1, q2) = (Poly::q(2, 0), Poly::q(2, 1));
        (&q1.pow(2) * &(&Poly::one(2) + &q2)).scale_rational(&rat(-1, 2))
    }

    #[test]
    fn frequency_validation() {
        assert!(FrequencyData::new(vec![2, 4], int(1)).is_err());
        assert!(FrequencyData::new(vec![1, 0], int(1)).is_err());
        assert!(FrequencyData::new(vec![1, 1], int(0)).is_err());
        assert!(FrequencyData::new(vec![], int(1)).is_err());
        assert!(FrequencyData::new(vec![2, 3], rat(1, 2)).is_ok());
    }

    #[test]
    fn h0_shape() {
        let f = FrequencyData::new(vec![1, 2], rat(3, 2)).unwrap();
        let h = f.h0();
        assert_eq!(h.coeff_of(&[2, 0, 0, 0]).re, rat(3, 4));
        assert_eq!(h.coeff_of(&[0, 0, 0, 2]).re, rat(3, 2));
    }

    #[test]
    fn average_examples() {
        let f = FrequencyData::unit_1_1();
        assert_eq!(average(&f.h0(), &f).unwrap(), f.h0());
        assert!(average(&hh_k1(), &f).unwrap().is_zero());
        let expected = (&Poly::q(2, 0).pow(2) + &Poly::p(2, 0).pow(2)).scale_rational(&rat(-1, 4));
        assert_eq!(average(&pendulum_h1(), &f).unwrap(), expected);
        let half_action = (&Poly::q(2, 0).pow(2) + &Poly::p(2, 0).pow(2)).scale_rational(&rat(1, 2));
        assert_eq!(average(&Poly::q(2, 0).pow(2), &f).unwrap(), half_action);
    }

    #[test]
    fn s_op_examples() {
        let f = FrequencyData::unit_1_1();
        assert!(s_op(&f.h0(), &f).unwrap().is_zero());
        // frozen from the quadrature oracle: S(q1) = p1 for the 1:1 oscillator
        assert_eq!(s_op(&Poly::q(2, 0), &f).unwrap(), Poly::p(2, 0));
        assert_eq!(s_op(&Poly::p(2, 0), &f).unwrap(), -&Poly::q(2, 0));
    }

    #[test]
    fn s_of_q1_matches_quadrature_and_pins_direction() {
        let f = FrequencyData::unit_1_1();
        let exact = s_op(&Poly::q(2, 0), &f).unwrap();
        let points = [
            [0.3, -0.7, 0.2, 0.9],
            [1.1, 0.4, -0.5, 0.25],
            [-0.6, 0.8, 0.1, -0.3],
            [0.05, 0.5, 0.95, -1.2],
            [-1.0, -0.2, 0.7, 0.6],
        ];
        for x in points {
            let num = quadrature_oracle(&Poly::q(2, 0), &f, &x, OracleKind::S).unwrap();
            let plus = exact.eval_f64(&x).unwrap();
            assert!((num - plus).abs() < 1e-10, "{num} vs {plus}");
            // the opposite direction would give -p1
            if plus.abs() > 1e-3 {
                assert!((num + plus).abs() > 1e-3);
            }
        }
    }

    #[test]
    fn oracle_flow_is_generated_by_ham_apply() {
        // d/dt|0 of q1 and p1 along the oracle flow equals {H0, .}/ω0
        let f = FrequencyData::new(vec![1, 2], rat(5, 3)).unwrap();
        let x = [0.4, -0.3, 0.7, 0.2];
        let h = 1e-5;
        for var in 0..4 {
            let g = Poly::var(2, var).unwrap();
            let fwd = action_flow(&f, &x, h)[var];
            let bwd = action_flow(&f, &x, -h)[var];
            let fd = (fwd - bwd) / (2.0 * h);
            let exact = lie_upsilon(&g, &f).unwrap().eval_f64(&x).unwrap();
            assert!((fd - exact).abs() < 1e-8, "var {var}: {fd} vs {exact}");
        }
    }

    #[test]
    fn oracle_average_of_h0() {
        let f = FrequencyData::new(vec![1, 2, 3], int(1)).unwrap();
        let x = [0.3, 0.1, -0.4, 0.5, 0.2, -0.9];
        let h0 = f.h0();
        let num = quadrature_oracle(&h0, &f, &x, OracleKind::Average).unwrap();
        assert!((num - h0.eval_f64(&x).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn lie_upsilon_examples() {
        let f = FrequencyData::unit_1_1();
        assert!(lie_upsilon(&f.h0(), &f).unwrap().is_zero());
        let q = |j| Poly::q(2, j);
        let p = |j| Poly::p(2, j);
        let two = rat(2, 1);
        let w = [
            (&(&q(0) * &q(1)) + &(&p(0) * &p(1))).scale_rational(&two),
            (&(&q(0) * &p(1)) - &(&q(1) * &p(0))).scale_rational(&two),
            &(&q(0).pow(2) + &p(0).pow(2)) - &(&q(1).pow(2) + &p(1).pow(2)),
            &(&q(0).pow(2) + &p(0).pow(2)) + &(&q(1).pow(2) + &p(1).pow(2)),
        ];
        for wi in &w {
            assert!(lie_upsilon(wi, &f).unwrap().is_zero());
        }
        let g = &hh_k1() + &pendulum_h1();
        let lhs = lie_upsilon(&s_op(&g, &f).unwrap(), &f).unwrap();
        assert_eq!(lhs, &g - &average(&g, &f).unwrap());
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let rule = gauss_legendre(GL_ORDER);
        let s: f64 = rule.iter().map(|(x, w)| w * x.powi(10)).sum();
        assert!((s - 2.0 / 11.0).abs() < 1e-14);
        let total: f64 = rule.iter().map(|(_, w)| w).sum();
        assert!((total - 2.0).abs() < 1e-14);
    }

    #[test]
    fn dimension_errors() {
        let f = FrequencyData::unit_1_1();
        assert!(average(&Poly::q(3, 0), &f).is_err());
        assert!(s_op(&Poly::q(1, 0), &f).is_err());
        assert!(lie_upsilon(&Poly::q(1, 0), &f).is_err());
    }
}
