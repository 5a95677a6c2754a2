//! Sparse multivariate polynomials over the canonical variables
//! `(q1..qn, p1..pn)` with exact Gaussian-rational coefficients.
//!
//! Exponent vectors are dense (length `2n`, q-block then p-block); the term
//! map is sparse and never stores a zero coefficient, so structural equality
//! is mathematical equality.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::error::{NfError, Result};
use crate::scalar::{format_rational, rational_to_f64, GaussRational, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; 2 * n])
    }

    pub fn from_exponents(exps: Vec<u32>) -> Self {
        assert!(exps.len().is_multiple_of(2), "exponent vector must have even length");
        Monomial(exps)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    /// Number of degrees of freedom `n`.
    pub fn dim(&self) -> usize {
        self.0.len() / 2
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Exponents in the display order q1, p1, q2, p2, ...
    fn interleaved(&self) -> Vec<u32> {
        let n = self.dim();
        (0..n).flat_map(|j| [self.0[j], self.0[n + j]]).collect()
    }

    /// Graded ordering key: total degree first, then lexicographic in
    /// `q1 < p1 < q2 < p2 < ...` (the smaller variable wins ties).
    pub fn display_key(&self) -> (u32, std::cmp::Reverse<Vec<u32>>) {
        (self.degree(), std::cmp::Reverse(self.interleaved()))
    }
}

/// Canonical variable name for index `idx` in dimension `n`.
pub fn var_name(idx: usize, n: usize) -> String {
    if idx < n {
        format!("q{}", idx + 1)
    } else {
        format!("p{}", idx - n + 1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    n: usize,
    terms: BTreeMap<Monomial, GaussRational>,
}

impl Poly {
    pub fn zero(n: usize) -> Self {
        assert!(n > 0, "dimension must be positive");
        Poly {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: GaussRational) -> Self {
        let mut p = Poly::zero(n);
        p.add_term(Monomial::one(n), c);
        p
    }

    pub fn from_rational(n: usize, c: Rational) -> Self {
        Self::constant(n, c.into())
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, GaussRational::one())
    }

    /// The coordinate function with index `idx` in `0..2n`.
    pub fn var(n: usize, idx: usize) -> Result<Self> {
        if idx >= 2 * n {
            return Err(NfError::VariableOutOfRange { index: idx, n });
        }
        let mut e = vec![0; 2 * n];
        e[idx] = 1;
        let mut p = Poly::zero(n);
        p.add_term(Monomial(e), GaussRational::one());
        Ok(p)
    }

    /// `q_{j+1}`.
    pub fn q(n: usize, j: usize) -> Self {
        assert!(j < n, "q index out of range");
        Self::var(n, j).unwrap()
    }

    /// `p_{j+1}`.
    pub fn p(n: usize, j: usize) -> Self {
        assert!(j < n, "p index out of range");
        Self::var(n, n + j).unwrap()
    }

    pub fn from_terms<I>(n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Monomial, GaussRational)>,
    {
        let mut p = Poly::zero(n);
        for (m, c) in terms {
            if m.dim() != n {
                return Err(NfError::DimensionMismatch {
                    left: n,
                    right: m.dim(),
                });
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn num_vars(&self) -> usize {
        2 * self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &GaussRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> GaussRational {
        self.terms.get(m).cloned().unwrap_or_else(GaussRational::zero)
    }

    /// Coefficient of the monomial with the given exponent vector.
    pub fn coeff_of(&self, exps: &[u32]) -> GaussRational {
        self.coeff(&Monomial(exps.to_vec()))
    }

    pub fn is_real(&self) -> bool {
        self.terms.values().all(GaussRational::is_real)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn add_term(&mut self, m: Monomial, c: GaussRational) {
        debug_assert_eq!(m.dim(), self.n);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_dim(&self, other: &Poly) -> Result<()> {
        if self.n != other.n {
            return Err(NfError::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Poly) -> Result<Poly> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Poly) -> Result<Poly> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Poly) -> Result<Poly> {
        self.check_dim(other)?;
        let mut acc: BTreeMap<Monomial, GaussRational> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let c = ca * cb;
                *acc.entry(ma.mul(mb)).or_insert_with(GaussRational::zero) += &c;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(Poly {
            n: self.n,
            terms: acc,
        })
    }

    pub fn scale(&self, c: &GaussRational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.n);
        }
        Poly {
            n: self.n,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn scale_rational(&self, r: &Rational) -> Poly {
        self.scale(&GaussRational::real(r.clone()))
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(self.n);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Formal partial derivative with respect to variable `var` in `0..2n`.
    pub fn partial(&self, var: usize) -> Poly {
        assert!(var < 2 * self.n, "variable index out of range");
        let mut out = Poly::zero(self.n);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[var] -= 1;
            out.add_term(Monomial(exps), c.scale(&Rational::from_integer(e.into())));
        }
        out
    }

    pub fn conj(&self) -> Poly {
        Poly {
            n: self.n,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.conj())).collect(),
        }
    }

    /// Real part of every coefficient.
    pub fn real_part(&self) -> Poly {
        let mut out = Poly::zero(self.n);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), GaussRational::real(c.re.clone()));
        }
        out
    }

    /// Terms of total degree exactly `d`.
    pub fn homogeneous_component(&self, d: u32) -> Poly {
        Poly {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Sorted list of total degrees that carry at least one term.
    pub fn degrees(&self) -> Vec<u32> {
        let mut ds: Vec<u32> = self.terms.keys().map(Monomial::degree).collect();
        ds.sort_unstable();
        ds.dedup();
        ds
    }

    fn check_point<T>(&self, point: &[T]) -> Result<()> {
        if point.len() != 2 * self.n {
            return Err(NfError::PointLength {
                got: point.len(),
                expected: 2 * self.n,
            });
        }
        Ok(())
    }

    /// Exact evaluation at a rational point.
    pub fn eval(&self, point: &[Rational]) -> Result<GaussRational> {
        self.check_point(point)?;
        let mut acc = GaussRational::zero();
        for (m, c) in &self.terms {
            let mut v = Rational::one();
            for (x, &e) in point.iter().zip(&m.0) {
                for _ in 0..e {
                    v *= x;
                }
            }
            acc += &c.scale(&v);
        }
        Ok(acc)
    }

    pub fn eval_real(&self, point: &[Rational]) -> Result<Rational> {
        if !self.is_real() {
            return Err(NfError::NotReal);
        }
        Ok(self.eval(point)?.re)
    }

    /// Floating evaluation; coefficients are converted from their exact
    /// values term by term.
    pub fn eval_f64(&self, point: &[f64]) -> Result<f64> {
        if !self.is_real() {
            return Err(NfError::NotReal);
        }
        self.check_point(point)?;
        Ok(self
            .terms
            .iter()
            .map(|(m, c)| {
                let mono: f64 = point
                    .iter()
                    .zip(&m.0)
                    .map(|(x, &e)| x.powi(e as i32))
                    .product();
                rational_to_f64(&c.re) * mono
            })
            .sum())
    }

    /// Terms sorted for display: ascending total degree, ties broken
    /// lexicographically with `q1 < p1 < q2 < p2 < ...`.
    pub fn sorted_terms(&self) -> Vec<(&Monomial, &GaussRational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by_key(|(m, _)| m.display_key());
        v
    }

    pub fn monomial_text(&self, m: &Monomial) -> String {
        let n = self.n;
        let mut parts = Vec::new();
        let exps = m.exponents();
        for j in 0..n {
            for idx in [j, n + j] {
                match exps[idx] {
                    0 => {}
                    1 => parts.push(var_name(idx, n)),
                    e => parts.push(format!("{}^{}", var_name(idx, n), e)),
                }
            }
        }
        parts.join("*")
    }
}

fn write_term(
    f: &mut fmt::Formatter<'_>,
    first: bool,
    coeff: &GaussRational,
    mono: &str,
) -> fmt::Result {
    if coeff.is_real() {
        let neg = coeff.re.is_negative();
        let abs = coeff.re.abs();
        match (first, neg) {
            (true, true) => write!(f, "-")?,
            (true, false) => {}
            (false, true) => write!(f, " - ")?,
            (false, false) => write!(f, " + ")?,
        }
        if mono.is_empty() {
            write!(f, "{}", format_rational(&abs))
        } else if abs.is_one() {
            write!(f, "{mono}")
        } else {
            write!(f, "{}*{mono}", format_rational(&abs))
        }
    } else {
        if !first {
            write!(f, " + ")?;
        }
        if mono.is_empty() {
            write!(f, "{coeff}")
        } else {
            write!(f, "{coeff}*{mono}")
        }
    }
}

/// Prints in the expression grammar accepted by [`crate::parse`], e.g.
/// `1/2*q1^2 - q1*p2`.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.sorted_terms().into_iter().enumerate() {
            write_term(f, i == 0, c, &self.monomial_text(m))?;
        }
        Ok(())
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    /// Panics on dimension mismatch; use [`Poly::try_add`] to handle it.
    fn add(self, rhs: &Poly) -> Poly {
        self.try_add(rhs).expect("Poly add")
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.try_sub(rhs).expect("Poly sub")
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.try_mul(rhs).expect("Poly mul")
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-GaussRational::one())
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        &self - &rhs
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    fn q(j: usize) -> Poly {
        Poly::q(2, j)
    }
    fn p(j: usize) -> Poly {
        Poly::p(2, j)
    }
    fn c(num: i64, den: i64) -> Poly {
        Poly::from_rational(2, rat(num, den))
    }

    fn henon_heiles_k1() -> Poly {
        &(&q(0).pow(3) * &c(1, 3)) - &(&q(0) * &q(1).pow(2))
    }

    #[test]
    fn add_examples() {
        assert!((&q(0) + &(-&q(0))).is_zero());
        let h0 = &(&(&q(0).pow(2) + &p(0).pow(2)) + &(&q(1).pow(2) + &p(1).pow(2))) * &c(1, 2);
        assert_eq!(&h0 + &Poly::zero(2), h0);
        let a = &q(0).pow(2) * &c(1, 2);
        let b = &p(0).pow(2) * &c(1, 2);
        assert_eq!(&a + &b, &(&q(0).pow(2) + &p(0).pow(2)) * &c(1, 2));
        assert_eq!(
            Poly::zero(2).try_add(&Poly::zero(3)),
            Err(NfError::DimensionMismatch { left: 2, right: 3 })
        );
    }

    #[test]
    fn mul_examples() {
        let qp = &q(0) * &p(0);
        assert_eq!(qp.len(), 1);
        assert_eq!(qp.coeff_of(&[1, 0, 1, 0]), GaussRational::one());
        let lhs = &(&q(0) + &p(0)) * &(&q(0) - &p(0));
        assert_eq!(lhs, &q(0).pow(2) - &p(0).pow(2));
        assert!(Poly::zero(1).try_mul(&Poly::zero(2)).is_err());
    }

    #[test]
    fn partial_examples() {
        let q2 = q(0).pow(2);
        assert_eq!(q2.partial(0), &q(0) * &c(2, 1));
        assert!(q2.partial(2).is_zero());
        assert_eq!(henon_heiles_k1().partial(0), &q(0).pow(2) - &q(1).pow(2));
    }

    #[test]
    fn eval_examples() {
        let h0 = &(&(&q(0).pow(2) + &p(0).pow(2)) + &(&q(1).pow(2) + &p(1).pow(2))) * &c(1, 2);
        let x = [int(1), int(0), int(0), int(0)];
        assert_eq!(h0.eval_real(&x).unwrap(), rat(1, 2));
        assert_eq!(Poly::zero(2).eval_real(&x).unwrap(), int(0));
        let y = [int(1), int(1), int(0), int(0)];
        assert_eq!(henon_heiles_k1().eval_real(&y).unwrap(), rat(-2, 3));
        assert!((henon_heiles_k1().eval_f64(&[1.0, 1.0, 0.0, 0.0]).unwrap() + 2.0 / 3.0).abs() < 1e-15);
        let complex = Poly::constant(2, GaussRational::i());
        assert_eq!(complex.eval_real(&x), Err(NfError::NotReal));
        assert!(h0.eval_real(&x[..3]).is_err());
    }

    #[test]
    fn display_is_graded_and_deterministic() {
        let f = &(&(&q(0).pow(2) * &c(1, 2)) + &(&p(0) * &q(1))) - &c(3, 1);
        assert_eq!(f.to_string(), "-3 + 1/2*q1^2 + p1*q2");
        assert_eq!(Poly::zero(1).to_string(), "0");
    }

    #[test]
    fn var_out_of_range() {
        assert_eq!(
            Poly::var(2, 4),
            Err(NfError::VariableOutOfRange { index: 4, n: 2 })
        );
    }
}
