use std::collections::BTreeMap;

use nform::dynamics::{compare_nf, CompareConfig, Truncation};
use nform::hopf::{hopf_substitute, nf_to_hopf};
use nform::scalar::format_rational;
use nform::{
    lie_transform_residual, normal_form_condition, second_order_nf, NormalFormResult,
    PerturbedHamiltonian, Rational,
};

use crate::doc::{
    hopf_from_terms, hopf_order_doc, hopf_series, result_doc, result_from_doc, CheckDoc,
    DynamicsDoc, HopfDoc, OutputDocument, ProblemDoc, TermMap,
};
use crate::error::CliError;
use crate::spec::ProblemSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    NormalForm,
    Hopf,
    Verify,
    Dynamics,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::NormalForm => "normalform",
            Command::Hopf => "hopf",
            Command::Verify => "verify",
            Command::Dynamics => "dynamics",
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub hopf: bool,
    /// Overrides for the spec's Hopf parameters.
    pub params: BTreeMap<String, Rational>,
    /// Previously written document to check instead of a fresh computation.
    pub result: Option<OutputDocument>,
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub doc: OutputDocument,
    /// Set when verification failed; the document is still complete.
    pub failure: Option<String>,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.failure.is_some() {
            4
        } else {
            0
        }
    }
}

pub const DEFAULT_EPS: [f64; 3] = [0.04, 0.02, 0.01];
pub const DEFAULT_X0: [f64; 4] = [0.3, 0.2, 0.1, 0.4];
pub const DEFAULT_T_SCALE: f64 = 10.0;
pub const DEFAULT_STEP: f64 = 0.01;

fn problem_doc(ph: &PerturbedHamiltonian) -> ProblemDoc {
    let f = ph.freq();
    ProblemDoc {
        n: f.dim(),
        modes: f.modes().to_vec(),
        omega0: format_rational(f.omega0()),
        h1: ph.h1().to_string(),
        h2: ph.h2().to_string(),
    }
}

pub fn run(spec: &ProblemSpec, cmd: Command, opts: &RunOptions) -> Result<Outcome, CliError> {
    let ph = spec.problem()?;
    let n = ph.freq().dim();
    let res = match (&opts.result, cmd) {
        (Some(doc), Command::Verify) => result_from_doc(doc, n)?,
        (Some(_), _) => {
            return Err(CliError::Precondition("a result document is only accepted by verify".into()))
        }
        (None, _) => second_order_nf(&ph)?,
    };
    let (nf_doc, gens_doc) = result_doc(&res);
    let mut doc = OutputDocument {
        command: cmd.name().into(),
        problem: problem_doc(&ph),
        normal_form: Some(nf_doc),
        generators: Some(gens_doc),
        hopf: None,
        verification: None,
        dynamics: None,
    };

    let want_hopf = cmd == Command::Hopf || opts.hopf || spec.options.hopf;
    if want_hopf && cmd != Command::Verify {
        let mut assignment = spec.params()?;
        assignment.extend(opts.params.clone());
        doc.hopf = Some(hopf_doc(&res, &ph, &assignment)?);
    } else if cmd == Command::Verify {
        doc.hopf = opts.result.as_ref().and_then(|d| d.hopf.clone());
    }

    let mut failure = None;
    if cmd == Command::Verify || spec.options.verify {
        let v = verify(&ph, &res, doc.hopf.as_ref())?;
        if !v.passed {
            failure = Some(describe_failure(&v));
        }
        doc.verification = Some(v);
    }

    if cmd == Command::Dynamics {
        doc.dynamics = Some(dynamics(spec, &ph, &res)?);
    }
    Ok(Outcome { doc, failure })
}

fn hopf_doc(
    res: &NormalFormResult,
    ph: &PerturbedHamiltonian,
    assignment: &BTreeMap<String, Rational>,
) -> Result<HopfDoc, CliError> {
    let report = nf_to_hopf(res, ph.freq())?;
    let params = report.params();
    if let Some(unknown) = assignment.keys().find(|k| !params.contains(k)) {
        return Err(CliError::Precondition(format!(
            "unknown Hopf parameter '{unknown}' (available: {})",
            if params.is_empty() { "none".to_string() } else { params.join(", ") }
        )));
    }
    let full: BTreeMap<String, Rational> = params
        .iter()
        .map(|p| (p.clone(), assignment.get(p).cloned().unwrap_or_default()))
        .collect();
    let at = report.at(&full)?;
    let half = nform::scalar::rat(1, 2);
    let powers: Vec<_> = at
        .iter()
        .enumerate()
        .map(|(k, h)| if k == 2 { h.scale(&half) } else { h.clone() })
        .collect();
    Ok(HopfDoc {
        assignment: TermMap(params.iter().map(|p| (p.clone(), format_rational(&full[p]))).collect()),
        params,
        family: report.orders.iter().enumerate().map(|(k, h)| hopf_order_doc(k, h)).collect(),
        at_assignment: at.iter().enumerate().map(|(k, h)| hopf_order_doc(k, h)).collect(),
        series: hopf_series(&powers),
    })
}

fn verify(
    ph: &PerturbedHamiltonian,
    res: &NormalFormResult,
    hopf: Option<&HopfDoc>,
) -> Result<crate::doc::VerificationDoc, CliError> {
    let residual = lie_transform_residual(ph, res)?;
    let lie: Vec<CheckDoc> = residual
        .coeffs()
        .iter()
        .enumerate()
        .map(|(order, r)| CheckDoc {
            order,
            passed: r.is_zero(),
            witness: r.to_string(),
        })
        .collect();
    let cond: Vec<CheckDoc> = normal_form_condition(res, ph.freq())?
        .orders
        .into_iter()
        .map(|o| CheckDoc {
            order: o.order,
            passed: o.passed,
            witness: o.witness.to_string(),
        })
        .collect();
    let back = match hopf {
        Some(h) => Some(
            h.at_assignment
                .iter()
                .map(|o| {
                    let w = hopf_from_terms(&o.terms)?;
                    let p = hopf_substitute(&w, &BTreeMap::new())?;
                    let target = res.nf.coeffs().get(o.order).ok_or_else(|| {
                        CliError::Precondition(format!("Hopf order {} out of range", o.order))
                    })?;
                    let diff = &p - target;
                    Ok(CheckDoc {
                        order: o.order,
                        passed: diff.is_zero(),
                        witness: diff.to_string(),
                    })
                })
                .collect::<Result<Vec<_>, CliError>>()?,
        ),
        None => None,
    };
    let passed = lie.iter().chain(&cond).chain(back.iter().flatten()).all(|c| c.passed);
    Ok(crate::doc::VerificationDoc {
        passed,
        lie_transform_residual: lie,
        normal_form_condition: cond,
        hopf_back_substitution: back,
    })
}

fn describe_failure(v: &crate::doc::VerificationDoc) -> String {
    let mut parts = Vec::new();
    for c in v.lie_transform_residual.iter().filter(|c| !c.passed) {
        parts.push(format!("Lie-transform residual at order {} is {}", c.order, c.witness));
    }
    for c in v.normal_form_condition.iter().filter(|c| !c.passed) {
        parts.push(format!("order {} does not commute with H0: {{H0, nf}} = {}", c.order, c.witness));
    }
    for c in v.hopf_back_substitution.iter().flatten().filter(|c| !c.passed) {
        parts.push(format!("Hopf form at order {} differs from the normal form by {}", c.order, c.witness));
    }
    parts.join("; ")
}

fn dynamics(spec: &ProblemSpec, ph: &PerturbedHamiltonian, res: &NormalFormResult) -> Result<DynamicsDoc, CliError> {
    let d = spec.dynamics.clone().unwrap_or_default();
    let n = ph.freq().dim();
    let x0 = match d.x0 {
        Some(x) => x,
        None if n == 2 => DEFAULT_X0.to_vec(),
        None => {
            return Err(CliError::Precondition(format!(
                "dynamics.x0 is required for n = {n}"
            )))
        }
    };
    let mut cfg = CompareConfig {
        eps: d.eps.unwrap_or_else(|| DEFAULT_EPS.to_vec()),
        x0,
        t_scale: d.t_scale.unwrap_or(DEFAULT_T_SCALE),
        h: d.h.unwrap_or(DEFAULT_STEP),
        truncation: Truncation::SecondOrder,
    };
    let second_order = compare_nf(ph, res, &cfg)?;
    cfg.truncation = Truncation::FirstOrder;
    let first_order = compare_nf(ph, res, &cfg)?;
    Ok(DynamicsDoc {
        second_order,
        first_order,
    })
}

/// Plain-text rendering of a document.
pub fn render_text(doc: &OutputDocument) -> String {
    let mut s = String::new();
    let p = &doc.problem;
    s.push_str(&format!("problem: n = {}, modes = {:?}, omega0 = {}\n", p.n, p.modes, p.omega0));
    s.push_str(&format!("  H1 = {}\n  H2 = {}\n", p.h1, p.h2));
    if let Some(nf) = &doc.normal_form {
        s.push_str(&format!("normal form ({})\n", nf.convention));
        for o in &nf.orders {
            s.push_str(&format!("  c{} = {}\n", o.order, o.text));
        }
        s.push_str(&format!("  series = {}\n", nf.series));
    }
    if let Some(g) = &doc.generators {
        s.push_str(&format!("generators\n  G0 = {}\n  G1 = {}\n", g.g0.text, g.g1.text));
    }
    if let Some(h) = &doc.hopf {
        s.push_str("Hopf form (family)\n");
        for o in &h.family {
            s.push_str(&format!("  c{} = {}\n", o.order, o.text));
        }
        if !h.assignment.0.is_empty() {
            let a: Vec<String> = h.assignment.0.iter().map(|(k, v)| format!("{k} = {v}")).collect();
            s.push_str(&format!("at {}\n", a.join(", ")));
        }
        s.push_str(&format!("  series = {}\n", h.series));
    }
    if let Some(v) = &doc.verification {
        s.push_str(&format!("verification: {}\n", if v.passed { "passed" } else { "FAILED" }));
        let groups = [
            ("Lie-transform residual", Some(&v.lie_transform_residual)),
            ("normal form condition", Some(&v.normal_form_condition)),
            ("Hopf back-substitution", v.hopf_back_substitution.as_ref()),
        ];
        for (name, checks) in groups {
            for c in checks.into_iter().flatten() {
                let status = if c.passed { "ok".to_string() } else { format!("FAIL ({})", c.witness) };
                s.push_str(&format!("  {name}, order {}: {status}\n", c.order));
            }
        }
    }
    if let Some(d) = &doc.dynamics {
        s.push_str("dynamics, second-order truncation\n");
        s.push_str(&d.second_order.to_table());
        s.push_str("dynamics, first-order truncation\n");
        s.push_str(&d.first_order.to_table());
    }
    s
}
