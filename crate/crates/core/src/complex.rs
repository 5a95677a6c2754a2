//! Change of basis to the phase variables `z_j = q_j + i p_j`.
//!
//! A polynomial becomes `Σ c_ab z^a z̄^b`. The oscillator flow acts on each
//! such term by a pure phase, which is what makes the averaging integrals
//! computable in closed form.

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;

use crate::poly::{Monomial, Poly};
use crate::scalar::{rat, GaussRational};

/// Exponents `(a, b)` of `z^a z̄^b`, each of length `n`.
pub type PhaseMonomial = (Vec<u32>, Vec<u32>);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexBasisPoly {
    n: usize,
    terms: BTreeMap<PhaseMonomial, GaussRational>,
}

/// Univariate expansion in one pair of variables: exponent pair to coefficient.
type PairExpansion = Vec<((u32, u32), GaussRational)>;

fn binomial_row(k: u32) -> Vec<GaussRational> {
    let mut row = vec![GaussRational::from_int(1)];
    for i in 0..k {
        let last = row[i as usize].scale(&rat((k - i) as i64, (i + 1) as i64));
        row.push(last);
    }
    row
}

/// Expands `(α x + β y)^k` as a list of `((x exponent, y exponent), coeff)`.
fn linear_power(alpha: &GaussRational, beta: &GaussRational, k: u32) -> PairExpansion {
    let binom = binomial_row(k);
    (0..=k)
        .map(|i| {
            let c = &(&binom[i as usize] * &alpha.pow(k - i)) * &beta.pow(i);
            ((k - i, i), c)
        })
        .collect()
}

fn pair_product(a: &PairExpansion, b: &PairExpansion) -> PairExpansion {
    let mut acc: BTreeMap<(u32, u32), GaussRational> = BTreeMap::new();
    for ((a0, a1), ca) in a {
        for ((b0, b1), cb) in b {
            *acc.entry((a0 + b0, a1 + b1)).or_insert_with(GaussRational::zero) += &(ca * cb);
        }
    }
    acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

/// `q^e p^f` in terms of `(z, z̄)`, with `q = (z + z̄)/2`, `p = (z − z̄)/(2i)`.
fn qp_to_zz(e: u32, f: u32) -> PairExpansion {
    let half = GaussRational::real(rat(1, 2));
    let minus_half_i = GaussRational::new(rat(0, 1), rat(-1, 2));
    let q = linear_power(&half, &half, e);
    let p = linear_power(&minus_half_i, &-&minus_half_i, f);
    pair_product(&q, &p)
}

/// `z^a z̄^b` in terms of `(q, p)`.
fn zz_to_qp(a: u32, b: u32) -> PairExpansion {
    let one = GaussRational::from_int(1);
    let i = GaussRational::i();
    let z = linear_power(&one, &i, a);
    let zbar = linear_power(&one, &-&i, b);
    pair_product(&z, &zbar)
}

/// Tensor product of per-pair expansions into full exponent vectors.
fn tensor<F>(n: usize, per_pair: &[&PairExpansion], coeff: &GaussRational, mut emit: F)
where
    F: FnMut(Vec<u32>, Vec<u32>, GaussRational),
{
    let mut stack: Vec<(usize, Vec<u32>, Vec<u32>, GaussRational)> =
        vec![(0, vec![0; n], vec![0; n], coeff.clone())];
    while let Some((j, first, second, c)) = stack.pop() {
        if j == n {
            emit(first, second, c);
            continue;
        }
        for ((x, y), cj) in per_pair[j] {
            let mut f = first.clone();
            let mut s = second.clone();
            f[j] = *x;
            s[j] = *y;
            stack.push((j + 1, f, s, &c * cj));
        }
    }
}

impl ComplexBasisPoly {
    pub fn zero(n: usize) -> Self {
        ComplexBasisPoly {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PhaseMonomial, &GaussRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, a: &[u32], b: &[u32]) -> GaussRational {
        self.terms
            .get(&(a.to_vec(), b.to_vec()))
            .cloned()
            .unwrap_or_else(GaussRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, key: PhaseMonomial, c: GaussRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(key.clone()).or_insert_with(GaussRational::zero);
        *slot += &c;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    /// Rescales each term by `weight`; terms mapped to `None` are dropped.
    pub fn map_terms<F>(&self, mut weight: F) -> ComplexBasisPoly
    where
        F: FnMut(&PhaseMonomial) -> Option<GaussRational>,
    {
        let mut out = ComplexBasisPoly::zero(self.n);
        for (k, c) in &self.terms {
            if let Some(w) = weight(k) {
                out.add_term(k.clone(), c * &w);
            }
        }
        out
    }

    /// True when `c_ba = conj(c_ab)` for every pair, i.e. the polynomial is
    /// real-valued.
    pub fn is_self_conjugate(&self) -> bool {
        self.terms.iter().all(|((a, b), c)| {
            self.terms
                .get(&(b.clone(), a.clone()))
                .is_some_and(|d| *d == c.conj())
        })
    }

    pub fn to_poly(&self) -> Poly {
        from_complex_basis(self)
    }
}

pub fn to_complex_basis(f: &Poly) -> ComplexBasisPoly {
    let n = f.dim();
    let mut cache: HashMap<(u32, u32), PairExpansion> = HashMap::new();
    let mut out = ComplexBasisPoly::zero(n);
    for (m, c) in f.terms() {
        let exps = m.exponents();
        for j in 0..n {
            let key = (exps[j], exps[n + j]);
            cache.entry(key).or_insert_with(|| qp_to_zz(key.0, key.1));
        }
        let per: Vec<&PairExpansion> = (0..n).map(|j| &cache[&(exps[j], exps[n + j])]).collect();
        tensor(n, &per, c, |a, b, v| out.add_term((a, b), v));
    }
    out
}

pub fn from_complex_basis(g: &ComplexBasisPoly) -> Poly {
    let n = g.n;
    let mut cache: HashMap<(u32, u32), PairExpansion> = HashMap::new();
    let mut out = Poly::zero(n);
    for ((a, b), c) in &g.terms {
        for j in 0..n {
            cache.entry((a[j], b[j])).or_insert_with(|| zz_to_qp(a[j], b[j]));
        }
        let per: Vec<&PairExpansion> = (0..n).map(|j| &cache[&(a[j], b[j])]).collect();
        tensor(n, &per, c, |qe, pe, v| {
            let mut exps = qe;
            exps.extend(pe);
            out.add_term(Monomial::from_exponents(exps), v);
        });
    }
    out
}
