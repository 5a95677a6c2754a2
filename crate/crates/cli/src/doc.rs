//! The JSON output document. Every map is written in a fixed order so the
//! same input always yields byte-identical output.

use std::collections::BTreeMap;
use std::fmt;

use nform::dynamics::ComparisonReport;
use nform::hopf::{HopfPoly, WMonomial};
use nform::parse::parse_poly;
use nform::scalar::{format_rational, parse_rational};
use nform::{EpsSeries, NormalFormResult, Poly};
use serde::de::{MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::CliError;

/// Ordered `monomial -> coefficient` map. The constant monomial is `"1"`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TermMap(pub Vec<(String, String)>);

impl Serialize for TermMap {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for TermMap {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = TermMap;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a map from monomials to coefficient strings")
            }
            fn visit_map<A: MapAccess<'de>>(self, mut a: A) -> Result<TermMap, A::Error> {
                let mut out = Vec::new();
                while let Some(entry) = a.next_entry::<String, String>()? {
                    out.push(entry);
                }
                Ok(TermMap(out))
            }
        }
        d.deserialize_map(V)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyDoc {
    pub terms: TermMap,
    pub text: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrderDoc {
    pub order: usize,
    pub terms: TermMap,
    pub text: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProblemDoc {
    pub n: usize,
    pub modes: Vec<u32>,
    pub omega0: String,
    #[serde(rename = "H1")]
    pub h1: String,
    #[serde(rename = "H2")]
    pub h2: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormalFormDoc {
    pub convention: String,
    pub orders: Vec<OrderDoc>,
    /// The same series written in plain powers of `eps`.
    pub series: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorsDoc {
    #[serde(rename = "G0")]
    pub g0: PolyDoc,
    #[serde(rename = "G1")]
    pub g1: PolyDoc,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HopfDoc {
    pub params: Vec<String>,
    pub assignment: TermMap,
    /// Per order, coefficients affine in the parameters.
    pub family: Vec<OrderDoc>,
    /// Per order, the family at `assignment`.
    pub at_assignment: Vec<OrderDoc>,
    pub series: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckDoc {
    pub order: usize,
    pub passed: bool,
    pub witness: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationDoc {
    pub passed: bool,
    pub lie_transform_residual: Vec<CheckDoc>,
    pub normal_form_condition: Vec<CheckDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hopf_back_substitution: Option<Vec<CheckDoc>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DynamicsDoc {
    pub second_order: ComparisonReport,
    pub first_order: ComparisonReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutputDocument {
    pub command: String,
    pub problem: ProblemDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normal_form: Option<NormalFormDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<GeneratorsDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hopf: Option<HopfDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verification: Option<VerificationDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dynamics: Option<DynamicsDoc>,
}

impl OutputDocument {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Parse(format!("result document: {e}")))
    }
}

pub const CONVENTION: &str = "c0 + eps*c1 + eps^2/2*c2";

pub fn term_map(p: &Poly) -> TermMap {
    TermMap(
        p.sorted_terms()
            .into_iter()
            .map(|(m, c)| {
                assert!(c.is_real(), "document polynomials are real");
                let key = p.monomial_text(m);
                let key = if key.is_empty() { "1".to_string() } else { key };
                (key, format_rational(&c.re))
            })
            .collect(),
    )
}

pub fn poly_doc(p: &Poly) -> PolyDoc {
    PolyDoc {
        terms: term_map(p),
        text: p.to_string(),
    }
}

/// Rebuilds a polynomial from a coefficient map.
pub fn poly_from_terms(terms: &TermMap, n: usize) -> Result<Poly, CliError> {
    let mut out = Poly::zero(n);
    for (m, c) in &terms.0 {
        let coeff = parse_rational(c).ok_or_else(|| CliError::Parse(format!("coefficient '{c}' of {m}")))?;
        let mono = parse_poly(m, n).map_err(|e| CliError::Parse(format!("monomial '{m}': {e}")))?;
        out = &out + &mono.scale_rational(&coeff);
    }
    Ok(out)
}

fn power_series(parts: &[String]) -> String {
    let pieces: Vec<String> = parts
        .iter()
        .enumerate()
        .filter(|(_, p)| p.as_str() != "0")
        .map(|(k, p)| match k {
            0 => p.clone(),
            1 => format!("eps*({p})"),
            k => format!("eps^{k}*({p})"),
        })
        .collect();
    if pieces.is_empty() {
        "0".into()
    } else {
        pieces.join(" + ")
    }
}

pub fn normal_form_doc(nf: &EpsSeries) -> NormalFormDoc {
    let orders = nf
        .coeffs()
        .iter()
        .enumerate()
        .map(|(order, p)| {
            let d = poly_doc(p);
            OrderDoc {
                order,
                terms: d.terms,
                text: d.text,
            }
        })
        .collect();
    let half = nform::scalar::rat(1, 2);
    let powers: Vec<String> = nf
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, p)| if k == 2 { p.scale_rational(&half).to_string() } else { p.to_string() })
        .collect();
    NormalFormDoc {
        convention: CONVENTION.into(),
        orders,
        series: power_series(&powers),
    }
}

pub fn result_doc(res: &NormalFormResult) -> (NormalFormDoc, GeneratorsDoc) {
    (
        normal_form_doc(&res.nf),
        GeneratorsDoc {
            g0: poly_doc(&res.g0),
            g1: poly_doc(&res.g1),
        },
    )
}

/// Reads a normal form and its generators back out of a document.
pub fn result_from_doc(doc: &OutputDocument, n: usize) -> Result<NormalFormResult, CliError> {
    let nf = doc
        .normal_form
        .as_ref()
        .ok_or_else(|| CliError::Precondition("result document has no normal_form".into()))?;
    let gens = doc
        .generators
        .as_ref()
        .ok_or_else(|| CliError::Precondition("result document has no generators".into()))?;
    let mut coeffs = [Poly::zero(n), Poly::zero(n), Poly::zero(n)];
    for o in &nf.orders {
        let slot = coeffs
            .get_mut(o.order)
            .ok_or_else(|| CliError::Precondition(format!("normal form order {} out of range", o.order)))?;
        *slot = poly_from_terms(&o.terms, n)?;
    }
    Ok(NormalFormResult {
        nf: EpsSeries::new(coeffs),
        g0: poly_from_terms(&gens.g0.terms, n)?,
        g1: poly_from_terms(&gens.g1.terms, n)?,
    })
}

pub fn hopf_order_doc(order: usize, h: &HopfPoly) -> OrderDoc {
    let terms = h
        .sorted_terms()
        .into_iter()
        .map(|(m, e)| {
            let key = HopfPoly::monomial_text(m);
            let key = if key.is_empty() { "1".to_string() } else { key };
            (key, h.coeff_text(e))
        })
        .collect();
    OrderDoc {
        order,
        terms: TermMap(terms),
        text: h.to_string(),
    }
}

pub fn hopf_series(powers: &[HopfPoly]) -> String {
    let parts: Vec<String> = powers.iter().map(|h| h.to_string()).collect();
    power_series(&parts)
}

/// Parses `w1^a*w2^b*...`; `"1"` is the empty monomial.
pub fn parse_w_monomial(key: &str) -> Result<WMonomial, CliError> {
    let mut m = [0u32; 4];
    if key.trim() == "1" {
        return Ok(m);
    }
    let bad = || CliError::Parse(format!("Hopf monomial '{key}'"));
    for factor in key.split('*') {
        let factor = factor.trim();
        let (var, exp) = factor.split_once('^').unwrap_or((factor, "1"));
        let idx: usize = var.strip_prefix('w').and_then(|i| i.parse().ok()).ok_or_else(bad)?;
        if !(1..=4).contains(&idx) {
            return Err(bad());
        }
        m[idx - 1] += exp.parse::<u32>().map_err(|_| bad())?;
    }
    Ok(m)
}

/// Parameter-free Hopf polynomial from an `at_assignment` entry.
pub fn hopf_from_terms(terms: &TermMap) -> Result<HopfPoly, CliError> {
    let mut acc: BTreeMap<WMonomial, nform::Rational> = BTreeMap::new();
    for (m, c) in &terms.0 {
        let coeff = parse_rational(c).ok_or_else(|| CliError::Parse(format!("Hopf coefficient '{c}' of {m}")))?;
        *acc.entry(parse_w_monomial(m)?).or_default() += coeff;
    }
    Ok(HopfPoly::from_constants(acc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use nform::normalform::fixtures;
    use nform::second_order_nf;

    #[test]
    fn term_maps_round_trip() {
        for ph in [fixtures::henon_heiles(), fixtures::elastic_pendulum()] {
            let res = second_order_nf(&ph).unwrap();
            let (nf, gens) = result_doc(&res);
            for (o, p) in nf.orders.iter().zip(res.nf.coeffs()) {
                assert_eq!(&poly_from_terms(&o.terms, 2).unwrap(), p);
                assert_eq!(&parse_poly(&o.text, 2).unwrap(), p);
            }
            assert_eq!(poly_from_terms(&gens.g1.terms, 2).unwrap(), res.g1);
        }
    }

    #[test]
    fn term_map_keeps_document_order() {
        let p = parse_poly("3 + q1^2 - 1/2*p1*q2", 2).unwrap();
        let json = serde_json::to_string(&term_map(&p)).unwrap();
        assert_eq!(json, r#"{"1":"3","q1^2":"1","p1*q2":"-1/2"}"#);
        let back: TermMap = serde_json::from_str(&json).unwrap();
        assert_eq!(back, term_map(&p));
    }

    #[test]
    fn hopf_monomials_parse() {
        assert_eq!(parse_w_monomial("w3*w4^2").unwrap(), [0, 0, 1, 2]);
        assert_eq!(parse_w_monomial("1").unwrap(), [0, 0, 0, 0]);
        assert!(parse_w_monomial("w5").is_err());
        assert!(parse_w_monomial("q1").is_err());
    }

    #[test]
    fn series_text() {
        let parts = vec!["1/2*w4".to_string(), "0".into(), "7/48*w2^2".into()];
        assert_eq!(power_series(&parts), "1/2*w4 + eps^2*(7/48*w2^2)");
        assert_eq!(power_series(&["0".to_string()]), "0");
    }
}
