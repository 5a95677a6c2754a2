//! Problem specifications, read from JSON or from a `key = value` text file.

use std::collections::BTreeMap;

use nform::parse::parse_poly;
use nform::scalar::parse_rational;
use nform::{FrequencyData, NfError, PerturbedHamiltonian, Poly, Rational};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    /// Degrees of freedom; defaults to the number of modes.
    #[serde(default)]
    pub n: Option<usize>,
    pub modes: Vec<u32>,
    #[serde(default = "default_omega0")]
    pub omega0: String,
    #[serde(rename = "H1", default)]
    pub h1: String,
    #[serde(rename = "H2", default, skip_serializing_if = "Option::is_none")]
    pub h2: Option<String>,
    #[serde(default)]
    pub options: Options,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dynamics: Option<DynamicsSpec>,
}

fn default_omega0() -> String {
    "1".into()
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    #[serde(default)]
    pub hopf: bool,
    #[serde(default)]
    pub verify: bool,
    /// Hopf family parameters, `name -> rational string`.
    #[serde(default)]
    pub params: BTreeMap<String, String>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DynamicsSpec {
    pub eps: Option<Vec<f64>>,
    pub x0: Option<Vec<f64>>,
    pub t_scale: Option<f64>,
    pub h: Option<f64>,
}

/// Reads JSON if the first non-blank character is `{`, the text format
/// otherwise.
pub fn parse_spec(text: &str) -> Result<ProblemSpec, CliError> {
    if text.trim_start().starts_with('{') {
        serde_json::from_str(text).map_err(|e| CliError::Parse(format!("spec: {e}")))
    } else {
        parse_text_spec(text)
    }
}

/// One `key = value` per line, `#` starts a comment. Keys: `n`, `modes`,
/// `omega0`, `H1`, `H2`, `hopf`, `verify`, `param NAME`, `dynamics.eps`,
/// `dynamics.x0`, `dynamics.t_scale`, `dynamics.h`. Lists are comma
/// separated.
fn parse_text_spec(text: &str) -> Result<ProblemSpec, CliError> {
    let mut spec = ProblemSpec {
        omega0: default_omega0(),
        ..Default::default()
    };
    let mut seen_modes = false;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        let err = |msg: String| CliError::Parse(format!("spec line {line_no}: {msg}"));
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| err("expected 'key = value'".into()))?;
        let (key, value) = (key.trim(), value.trim());
        let dyn_spec = || DynamicsSpec::default();
        match key {
            "n" => spec.n = Some(value.parse().map_err(|_| err(format!("bad integer '{value}'")))?),
            "modes" => {
                spec.modes = list(value).map_err(err)?;
                seen_modes = true;
            }
            "omega0" => spec.omega0 = value.to_string(),
            "H1" => spec.h1 = value.to_string(),
            "H2" => spec.h2 = Some(value.to_string()),
            "hopf" => spec.options.hopf = flag(value).map_err(err)?,
            "verify" => spec.options.verify = flag(value).map_err(err)?,
            k if k.starts_with("param ") => {
                let name = k["param ".len()..].trim().to_string();
                spec.options.params.insert(name, value.to_string());
            }
            "dynamics.eps" => spec.dynamics.get_or_insert_with(dyn_spec).eps = Some(list(value).map_err(err)?),
            "dynamics.x0" => spec.dynamics.get_or_insert_with(dyn_spec).x0 = Some(list(value).map_err(err)?),
            "dynamics.t_scale" => {
                spec.dynamics.get_or_insert_with(dyn_spec).t_scale =
                    Some(value.parse().map_err(|_| err(format!("bad number '{value}'")))?)
            }
            "dynamics.h" => {
                spec.dynamics.get_or_insert_with(dyn_spec).h =
                    Some(value.parse().map_err(|_| err(format!("bad number '{value}'")))?)
            }
            other => return Err(err(format!("unknown key '{other}'"))),
        }
    }
    if !seen_modes {
        return Err(CliError::Parse("spec: modes required".into()));
    }
    Ok(spec)
}

fn list<T: std::str::FromStr>(value: &str) -> Result<Vec<T>, String> {
    value
        .trim_matches(|c| c == '[' || c == ']')
        .split(',')
        .map(|s| s.trim().parse().map_err(|_| format!("bad list element '{}'", s.trim())))
        .collect()
}

fn flag(value: &str) -> Result<bool, String> {
    match value {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        v => Err(format!("expected true or false, got '{v}'")),
    }
}

fn expression(field: &str, src: &str, n: usize) -> Result<Poly, CliError> {
    parse_poly(src, n).map_err(|e| match e {
        NfError::Parse { line, column, message } => {
            CliError::Parse(format!("{field}: line {line}, column {column}: {message}"))
        }
        other => CliError::Parse(format!("{field}: {other}")),
    })
}

pub fn rational(field: &str, s: &str) -> Result<Rational, CliError> {
    parse_rational(s.trim()).ok_or_else(|| CliError::Parse(format!("{field}: '{s}' is not an exact rational")))
}

impl ProblemSpec {
    pub fn dim(&self) -> usize {
        self.n.unwrap_or(self.modes.len())
    }

    pub fn frequency(&self) -> Result<FrequencyData, CliError> {
        let n = self.dim();
        if n != self.modes.len() {
            return Err(CliError::Precondition(format!(
                "n = {n} but {} modes were given",
                self.modes.len()
            )));
        }
        let omega0 = rational("omega0", &self.omega0)?;
        Ok(FrequencyData::new(self.modes.clone(), omega0)?)
    }

    pub fn problem(&self) -> Result<PerturbedHamiltonian, CliError> {
        if self.h1.trim().is_empty() {
            return Err(CliError::Parse("H1 required".into()));
        }
        let freq = self.frequency()?;
        let n = freq.dim();
        let h1 = expression("H1", &self.h1, n)?;
        let h2 = match &self.h2 {
            Some(s) if !s.trim().is_empty() => Some(expression("H2", s, n)?),
            _ => None,
        };
        Ok(PerturbedHamiltonian::new(freq, h1, h2)?)
    }

    pub fn params(&self) -> Result<BTreeMap<String, Rational>, CliError> {
        self.options
            .params
            .iter()
            .map(|(k, v)| Ok((k.clone(), rational(k, v)?)))
            .collect()
    }
}
