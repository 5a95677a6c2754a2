//! Rewriting invariants of the 2-d 1:1 oscillator in the Hopf variables
//!
//! ```text
//! w1 = 2(q1 q2 + p1 p2)      w3 = q1² + p1² − q2² − p2²
//! w2 = 2(q1 p2 − q2 p1)      w4 = q1² + q2² + p1² + p2²
//! ```
//!
//! subject to the syzygy `w1² + w2² + w3² = w4²`. Because of the syzygy a
//! rewriting is only determined up to multiples of it, so [`hopf_rewrite`]
//! returns the whole affine family with named free parameters.
//!
//! Candidate w-monomials of a given degree are ordered graded-lexicographically
//! with `w4 > w3 > w2 > w1`, largest first; the linear system pivots leftmost,
//! so free parameters sit on the trailing (w1-heavy) monomials.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::averaging::{lie_upsilon, FrequencyData};
use crate::error::{NfError, Result};
use crate::linalg::solve;
use crate::normalform::NormalFormResult;
use crate::poly::{Monomial, Poly};
use crate::scalar::{format_rational, Rational};

/// Exponents of `w1^e1 w2^e2 w3^e3 w4^e4`.
pub type WMonomial = [u32; 4];

pub fn hopf_variables() -> [Poly; 4] {
    let q = |j| Poly::q(2, j);
    let p = |j| Poly::p(2, j);
    let two = Rational::from_integer(2.into());
    [
        (&(&q(0) * &q(1)) + &(&p(0) * &p(1))).scale_rational(&two),
        (&(&q(0) * &p(1)) - &(&q(1) * &p(0))).scale_rational(&two),
        &(&q(0).pow(2) + &p(0).pow(2)) - &(&q(1).pow(2) + &p(1).pow(2)),
        &(&q(0).pow(2) + &p(0).pow(2)) + &(&q(1).pow(2) + &p(1).pow(2)),
    ]
}

/// `w1² + w2² + w3² − w4²` as a w-polynomial.
pub fn syzygy() -> BTreeMap<WMonomial, Rational> {
    let one = Rational::one();
    BTreeMap::from([
        ([2, 0, 0, 0], one.clone()),
        ([0, 2, 0, 0], one.clone()),
        ([0, 0, 2, 0], one.clone()),
        ([0, 0, 0, 2], -one),
    ])
}

/// All w-monomials of degree `d`, in column order (largest first).
pub fn w_monomials(d: u32) -> Vec<WMonomial> {
    let mut out = Vec::new();
    for e4 in (0..=d).rev() {
        for e3 in (0..=d - e4).rev() {
            for e2 in (0..=d - e4 - e3).rev() {
                out.push([d - e4 - e3 - e2, e2, e3, e4]);
            }
        }
    }
    out
}

fn w_order_key(m: &WMonomial) -> (u32, std::cmp::Reverse<[u32; 4]>) {
    (m.iter().sum(), std::cmp::Reverse([m[3], m[2], m[1], m[0]]))
}

/// `c0 + Σ_k c_k λ_k`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct AffineExpr {
    pub constant: Rational,
    pub coeffs: BTreeMap<usize, Rational>,
}

impl AffineExpr {
    pub fn constant(c: Rational) -> Self {
        Self {
            constant: c,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.coeffs.is_empty()
    }

    pub fn eval(&self, values: &[Rational]) -> Rational {
        self.coeffs
            .iter()
            .fold(self.constant.clone(), |acc, (k, c)| acc + c * &values[*k])
    }

    fn render(&self, names: &[String]) -> String {
        let mut parts: Vec<(bool, String)> = Vec::new();
        if !self.constant.is_zero() || self.coeffs.is_empty() {
            parts.push((self.constant.is_negative(), format_rational(&self.constant.abs())));
        }
        for (k, c) in &self.coeffs {
            let name = &names[*k];
            let body = if c.abs().is_one() {
                name.clone()
            } else {
                format!("{}*{name}", format_rational(&c.abs()))
            };
            parts.push((c.is_negative(), body));
        }
        let mut s = String::new();
        for (i, (neg, body)) in parts.into_iter().enumerate() {
            match (i, neg) {
                (0, true) => s.push('-'),
                (0, false) => {}
                (_, true) => s.push_str(" - "),
                (_, false) => s.push_str(" + "),
            }
            s.push_str(&body);
        }
        s
    }
}

/// A polynomial in `w1..w4` whose coefficients are affine in free
/// parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HopfPoly {
    terms: BTreeMap<WMonomial, AffineExpr>,
    params: Vec<String>,
}

impl HopfPoly {
    pub fn zero() -> Self {
        Self {
            terms: BTreeMap::new(),
            params: Vec::new(),
        }
    }

    /// A parameter-free w-polynomial.
    pub fn from_constants<I: IntoIterator<Item = (WMonomial, Rational)>>(terms: I) -> Self {
        let mut h = HopfPoly::zero();
        for (m, c) in terms {
            if !c.is_zero() {
                let e = h.terms.entry(m).or_default();
                e.constant += c;
            }
        }
        h.terms.retain(|_, e| !e.is_zero());
        h
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn terms(&self) -> impl Iterator<Item = (&WMonomial, &AffineExpr)> {
        self.terms.iter()
    }

    /// Terms in display order: ascending degree, then column order.
    pub fn sorted_terms(&self) -> Vec<(&WMonomial, &AffineExpr)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by_key(|(m, _)| w_order_key(m));
        v
    }

    pub fn coeff(&self, m: &WMonomial) -> AffineExpr {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn values(&self, assignment: &BTreeMap<String, Rational>) -> Result<Vec<Rational>> {
        self.params
            .iter()
            .map(|name| {
                assignment
                    .get(name)
                    .cloned()
                    .ok_or_else(|| NfError::MissingParameter(name.clone()))
            })
            .collect()
    }

    /// Fixes every parameter, leaving a parameter-free member of the family.
    pub fn at(&self, assignment: &BTreeMap<String, Rational>) -> Result<HopfPoly> {
        let values = self.values(assignment)?;
        Ok(HopfPoly::from_constants(
            self.terms.iter().map(|(m, e)| (*m, e.eval(&values))),
        ))
    }

    /// The member with every parameter set to zero.
    pub fn particular(&self) -> HopfPoly {
        HopfPoly::from_constants(self.terms.iter().map(|(m, e)| (*m, e.constant.clone())))
    }

    pub fn zero_assignment(&self) -> BTreeMap<String, Rational> {
        self.params
            .iter()
            .map(|p| (p.clone(), Rational::zero()))
            .collect()
    }

    /// Parameter-free coefficients, or `None` if any parameter remains.
    pub fn constant_terms(&self) -> Option<BTreeMap<WMonomial, Rational>> {
        self.terms
            .iter()
            .map(|(m, e)| e.is_constant().then(|| (*m, e.constant.clone())))
            .collect()
    }

    pub fn monomial_text(m: &WMonomial) -> String {
        let parts: Vec<String> = m
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                if e == 1 {
                    format!("w{}", i + 1)
                } else {
                    format!("w{}^{}", i + 1, e)
                }
            })
            .collect();
        parts.join("*")
    }

    pub fn scale(&self, r: &Rational) -> HopfPoly {
        let mut out = HopfPoly {
            terms: BTreeMap::new(),
            params: self.params.clone(),
        };
        for (m, e) in &self.terms {
            let scaled = AffineExpr {
                constant: &e.constant * r,
                coeffs: e
                    .coeffs
                    .iter()
                    .filter(|_| !r.is_zero())
                    .map(|(k, c)| (*k, c * r))
                    .collect(),
            };
            if !scaled.is_zero() {
                out.terms.insert(*m, scaled);
            }
        }
        out
    }

    pub fn coeff_text(&self, e: &AffineExpr) -> String {
        e.render(&self.params)
    }
}

impl fmt::Display for HopfPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, e)) in self.sorted_terms().into_iter().enumerate() {
            let mono = HopfPoly::monomial_text(m);
            if e.is_constant() {
                let c = &e.constant;
                let sign = match (i, c.is_negative()) {
                    (0, true) => "-",
                    (0, false) => "",
                    (_, true) => " - ",
                    (_, false) => " + ",
                };
                let abs = c.abs();
                match (mono.is_empty(), abs.is_one()) {
                    (true, _) => write!(f, "{sign}{}", format_rational(&abs))?,
                    (false, true) => write!(f, "{sign}{mono}")?,
                    (false, false) => write!(f, "{sign}{}*{mono}", format_rational(&abs))?,
                }
            } else {
                let sep = if i == 0 { "" } else { " + " };
                let body = e.render(&self.params);
                if mono.is_empty() {
                    write!(f, "{sep}({body})")?;
                } else {
                    write!(f, "{sep}({body})*{mono}")?;
                }
            }
        }
        Ok(())
    }
}

/// Expansion of w-monomials into (q, p), with cached powers.
struct Expander {
    w: [Poly; 4],
    powers: HashMap<(usize, u32), Poly>,
}

impl Expander {
    fn new() -> Self {
        Self {
            w: hopf_variables(),
            powers: HashMap::new(),
        }
    }

    fn power(&mut self, i: usize, e: u32) -> Poly {
        if let Some(p) = self.powers.get(&(i, e)) {
            return p.clone();
        }
        let p = self.w[i].pow(e);
        self.powers.insert((i, e), p.clone());
        p
    }

    fn expand(&mut self, m: &WMonomial) -> Poly {
        let mut acc = Poly::one(2);
        for (i, &e) in m.iter().enumerate() {
            if e > 0 {
                acc = &acc * &self.power(i, e);
            }
        }
        acc
    }
}

pub fn hopf_rewrite(f: &Poly) -> Result<HopfPoly> {
    rewrite_from(f, 0)
}

fn param_name(k: usize) -> String {
    format!("lambda{k}")
}

fn rewrite_from(f: &Poly, first_param: usize) -> Result<HopfPoly> {
    if f.dim() != 2 {
        return Err(NfError::Unsupported(format!(
            "Hopf variables need two degrees of freedom, got {}",
            f.dim()
        )));
    }
    if !f.is_real() {
        return Err(NfError::NotReal);
    }
    if let Some(&d) = f.degrees().iter().find(|&&d| d % 2 == 1) {
        return Err(NfError::OddDegree(d));
    }
    let witness = lie_upsilon(f, &FrequencyData::unit_1_1())?;
    if !witness.is_zero() {
        return Err(NfError::NotInvariant {
            witness: witness.to_string(),
        });
    }

    let mut expander = Expander::new();
    let mut out = HopfPoly::zero();
    for d in f.degrees() {
        let component = f.homogeneous_component(d);
        let columns = w_monomials(d / 2);
        let expanded: Vec<Poly> = columns.iter().map(|m| expander.expand(m)).collect();

        let mut rows: Vec<Monomial> = component.terms().map(|(m, _)| m.clone()).collect();
        for e in &expanded {
            rows.extend(e.terms().map(|(m, _)| m.clone()));
        }
        rows.sort();
        rows.dedup();

        let a: Vec<Vec<Rational>> = rows
            .iter()
            .map(|r| expanded.iter().map(|e| e.coeff(r).re).collect())
            .collect();
        let b: Vec<Rational> = rows.iter().map(|r| component.coeff(r).re).collect();
        let sol = solve(&a, &b)?;

        let offset = first_param + out.params.len();
        for k in 0..sol.free_columns.len() {
            out.params.push(param_name(offset + k));
        }
        for (j, m) in columns.iter().enumerate() {
            let mut e = AffineExpr::constant(sol.particular[j].clone());
            for (k, dir) in sol.directions.iter().enumerate() {
                if !dir[j].is_zero() {
                    e.coeffs.insert(offset - first_param + k, dir[j].clone());
                }
            }
            if !e.is_zero() {
                out.terms.insert(*m, e);
            }
        }
    }
    // keys of `coeffs` index `params`; the names carry the global numbering
    Ok(out)
}

pub fn hopf_substitute(h: &HopfPoly, assignment: &BTreeMap<String, Rational>) -> Result<Poly> {
    let values = h.values(assignment)?;
    let mut expander = Expander::new();
    let mut out = Poly::zero(2);
    for (m, e) in &h.terms {
        let c = e.eval(&values);
        if !c.is_zero() {
            out = &out + &expander.expand(m).scale_rational(&c);
        }
    }
    Ok(out)
}

/// Hopf form of each order of a normal form, with parameters numbered
/// consecutively across orders.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HopfReport {
    pub orders: Vec<HopfPoly>,
}

impl HopfReport {
    pub fn params(&self) -> Vec<String> {
        self.orders.iter().flat_map(|h| h.params.iter().cloned()).collect()
    }

    /// Every order at the given parameter values (missing names are an
    /// error).
    pub fn at(&self, assignment: &BTreeMap<String, Rational>) -> Result<Vec<HopfPoly>> {
        self.orders.iter().map(|h| h.at(assignment)).collect()
    }

    pub fn particular(&self) -> Vec<HopfPoly> {
        self.orders.iter().map(HopfPoly::particular).collect()
    }

    /// Coefficients of plain powers `ε^k`, i.e. order two halved.
    pub fn power_coefficients(&self) -> Vec<HopfPoly> {
        self.orders
            .iter()
            .enumerate()
            .map(|(k, h)| if k == 2 { h.scale(&Rational::new(1.into(), 2.into())) } else { h.clone() })
            .collect()
    }
}

pub fn nf_to_hopf(res: &NormalFormResult, freq: &FrequencyData) -> Result<HopfReport> {
    if freq.modes() != [1, 1] {
        return Err(NfError::Unsupported(format!(
            "Hopf variables are defined for modes (1, 1), got {:?}",
            freq.modes()
        )));
    }
    let mut orders = Vec::with_capacity(3);
    let mut next = 0;
    for p in res.nf.coeffs() {
        let h = rewrite_from(p, next)?;
        next += h.params.len();
        orders.push(h);
    }
    Ok(HopfReport { orders })
}
