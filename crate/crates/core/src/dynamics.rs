//! Floating-point validation: trajectories of the truncated normal form
//! against trajectories of the full perturbed Hamiltonian.
//!
//! Exact polynomials are converted once into [`CompiledPoly`]; the equations
//! of motion are the canonical ones, `q̇ = ∂H/∂p`, `ṗ = −∂H/∂q`, integrated
//! with the implicit midpoint rule (symmetric, symplectic, second order,
//! and exact on quadratic invariants).

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{NfError, Result};
use crate::hopf::hopf_variables;
use crate::normalform::{NormalFormResult, PerturbedHamiltonian};
use crate::poly::Poly;
use crate::scalar::rational_to_f64;

/// A real polynomial with `f64` coefficients and sparse exponents, ready for
/// fast evaluation.
#[derive(Clone, Debug, PartialEq)]
pub struct CompiledPoly {
    nvars: usize,
    terms: Vec<(f64, Vec<(usize, i32)>)>,
}

impl CompiledPoly {
    pub fn new(p: &Poly) -> Result<Self> {
        Self::combination(p.num_vars(), &[(1.0, p)])
    }

    /// `Σ w_i p_i`, merged term by term.
    pub fn combination(nvars: usize, parts: &[(f64, &Poly)]) -> Result<Self> {
        let mut merged: std::collections::BTreeMap<Vec<u32>, f64> = Default::default();
        for (w, p) in parts {
            if !p.is_real() {
                return Err(NfError::NotReal);
            }
            if p.num_vars() != nvars {
                return Err(NfError::DimensionMismatch {
                    left: nvars / 2,
                    right: p.dim(),
                });
            }
            for (m, c) in p.terms() {
                *merged.entry(m.exponents().to_vec()).or_default() += w * rational_to_f64(&c.re);
            }
        }
        let terms = merged
            .into_iter()
            .filter(|(_, c)| *c != 0.0)
            .map(|(e, c)| {
                let sparse = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k > 0)
                    .map(|(i, &k)| (i, k as i32))
                    .collect();
                (c, sparse)
            })
            .collect();
        Ok(Self { nvars, terms })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(c, e)| c * e.iter().map(|&(i, k)| x[i].powi(k)).product::<f64>())
            .sum()
    }

    /// Gradient, accumulated into `out`.
    pub fn gradient(&self, x: &[f64], out: &mut [f64]) {
        out.iter_mut().for_each(|v| *v = 0.0);
        for (c, e) in &self.terms {
            for (slot, &(i, k)) in e.iter().enumerate() {
                let mut v = c * k as f64 * x[i].powi(k - 1);
                for (other, &(j, kj)) in e.iter().enumerate() {
                    if other != slot {
                        v *= x[j].powi(kj);
                    }
                }
                out[i] += v;
            }
        }
    }
}

/// Canonical vector field `(∂H/∂p, −∂H/∂q)` of a compiled Hamiltonian.
pub fn vector_field(h: &CompiledPoly, x: &[f64], grad: &mut [f64], out: &mut [f64]) {
    let n = h.nvars / 2;
    h.gradient(x, grad);
    for j in 0..n {
        out[j] = grad[n + j];
        out[n + j] = -grad[j];
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub h: f64,
    pub steps: usize,
    /// Fixed-point iteration stops once successive iterates differ by less
    /// than `tol * max(1, |x|∞)`.
    pub tol: f64,
    pub max_iter: usize,
}

impl IntegratorConfig {
    pub fn new(h: f64, steps: usize) -> Self {
        Self {
            h,
            steps,
            tol: 1e-15,
            max_iter: 200,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.h.is_finite() && self.h > 0.0) {
            return Err(NfError::InvalidConfig(format!("step size {} must be positive", self.h)));
        }
        if self.steps == 0 {
            return Err(NfError::InvalidConfig("steps must be positive".into()));
        }
        if self.tol.is_nan() || self.tol <= 0.0 || self.max_iter == 0 {
            return Err(NfError::InvalidConfig("tolerance and max_iter must be positive".into()));
        }
        Ok(())
    }
}

/// Implicit midpoint rule `x1 = x0 + h f((x0 + x1)/2)` solved by fixed-point
/// iteration.
pub struct ImplicitMidpoint<'a> {
    h: &'a CompiledPoly,
    tol: f64,
    max_iter: usize,
    grad: Vec<f64>,
    f: Vec<f64>,
    mid: Vec<f64>,
}

impl<'a> ImplicitMidpoint<'a> {
    pub fn new(h: &'a CompiledPoly, tol: f64, max_iter: usize) -> Self {
        let d = h.nvars;
        Self {
            h,
            tol,
            max_iter,
            grad: vec![0.0; d],
            f: vec![0.0; d],
            mid: vec![0.0; d],
        }
    }

    /// One step of size `dt` (negative steps run backwards). Returns the
    /// final fixed-point residual on failure.
    pub fn step(&mut self, x: &mut [f64], dt: f64) -> std::result::Result<(), f64> {
        let d = x.len();
        vector_field(self.h, x, &mut self.grad, &mut self.f);
        let mut next: Vec<f64> = (0..d).map(|i| x[i] + dt * self.f[i]).collect();
        let mut residual = f64::INFINITY;
        for _ in 0..self.max_iter {
            for i in 0..d {
                self.mid[i] = 0.5 * (x[i] + next[i]);
            }
            vector_field(self.h, &self.mid, &mut self.grad, &mut self.f);
            let mut diff: f64 = 0.0;
            let mut scale: f64 = 1.0;
            for i in 0..d {
                let v = x[i] + dt * self.f[i];
                diff = diff.max((v - next[i]).abs());
                scale = scale.max(v.abs());
                next[i] = v;
            }
            residual = diff;
            if !diff.is_finite() {
                break;
            }
            if diff <= self.tol * scale {
                x.copy_from_slice(&next);
                return Ok(());
            }
        }
        Err(residual)
    }
}

/// Runs `cfg.steps` steps from `x0`, calling `observe(step, t, x)` on the
/// initial state and after every step.
pub fn integrate_with<F>(h: &CompiledPoly, x0: &[f64], cfg: &IntegratorConfig, mut observe: F) -> Result<Vec<f64>>
where
    F: FnMut(usize, f64, &[f64]),
{
    cfg.validate()?;
    if x0.len() != h.nvars {
        return Err(NfError::PointLength {
            got: x0.len(),
            expected: h.nvars,
        });
    }
    if x0.iter().any(|v| !v.is_finite()) {
        return Err(NfError::InvalidConfig("initial point must be finite".into()));
    }
    let mut stepper = ImplicitMidpoint::new(h, cfg.tol, cfg.max_iter);
    let mut x = x0.to_vec();
    observe(0, 0.0, &x);
    for k in 1..=cfg.steps {
        stepper
            .step(&mut x, cfg.h)
            .map_err(|residual| NfError::NonConvergence { step: k, residual })?;
        observe(k, k as f64 * cfg.h, &x);
    }
    Ok(x)
}

/// States at every step, including the initial one.
pub fn integrate(h: &Poly, x0: &[f64], cfg: &IntegratorConfig) -> Result<Vec<Vec<f64>>> {
    let compiled = CompiledPoly::new(h)?;
    let mut out = Vec::with_capacity(cfg.steps + 1);
    integrate_with(&compiled, x0, cfg, |_, _, x| out.push(x.to_vec()))?;
    Ok(out)
}

/// How far the normal form is truncated before integrating it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Truncation {
    FirstOrder,
    SecondOrder,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompareConfig {
    pub eps: Vec<f64>,
    pub x0: Vec<f64>,
    /// Horizon is `t_scale / ε`.
    pub t_scale: f64,
    pub h: f64,
    pub truncation: Truncation,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub eps: Vec<f64>,
    pub errors: Vec<f64>,
    pub slope: f64,
    /// Root-mean-square residual of the least-squares fit in log-log space.
    pub fit_residual: f64,
    /// Pointwise sup-norm distance of the observables, dominated by the
    /// O(ε) oscillation of the untransformed coordinates.
    pub raw_errors: Vec<f64>,
    pub raw_slope: f64,
    pub horizon_scale: f64,
    pub step: f64,
    pub truncation: Truncation,
}

impl ComparisonReport {
    pub fn to_table(&self) -> String {
        let mut s = String::from("eps          horizon      sup error\n");
        for (e, err) in self.eps.iter().zip(&self.errors) {
            s.push_str(&format!("{:<12} {:<12} {:.6e}\n", e, self.horizon_scale / e, err));
        }
        s.push_str(&format!(
            "log-log slope {:.4} (rms residual {:.2e})\n",
            self.slope, self.fit_residual
        ));
        s
    }
}

/// Least-squares line through `(ln x, ln y)`: returns slope and rms residual.
pub fn loglog_fit(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let pts: Vec<(f64, f64)> = xs.iter().zip(ys).map(|(x, y)| (x.ln(), y.ln())).collect();
    let n = pts.len() as f64;
    if pts.len() < 2 {
        return (f64::NAN, f64::NAN);
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let rms = (pts
        .iter()
        .map(|p| (p.1 - (my + slope * (p.0 - mx))).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    (slope, rms)
}

/// Observables compared along both flows: the Hopf variables for the 1:1
/// oscillator in two degrees of freedom, the mode actions otherwise.
pub fn default_observables(ph: &PerturbedHamiltonian) -> Vec<Poly> {
    let freq = ph.freq();
    if freq.modes() == [1, 1] {
        return hopf_variables().to_vec();
    }
    let n = freq.dim();
    (0..n)
        .map(|j| &Poly::q(n, j).pow(2) + &Poly::p(n, j).pow(2))
        .collect()
}

/// Integrates `H_ε` and the truncated normal form from the same `x0` over
/// `[0, t_scale/ε]` for each ε and fits the error against ε on log-log axes.
///
/// The normalizing map is not applied, so pointwise the observables differ
/// by an O(ε) oscillation with zero mean over the fast period (kept as
/// `raw_errors`). The primary error removes it: each observable is replaced
/// by its running mean over one period of the unperturbed action, and the
/// drift of that mean from its initial value is compared between the two
/// flows. The integration step is adjusted so that a period is a whole
/// number of steps.
pub fn compare_nf(ph: &PerturbedHamiltonian, res: &NormalFormResult, cfg: &CompareConfig) -> Result<ComparisonReport> {
    let observables = default_observables(ph);
    let pairs = cfg
        .eps
        .par_iter()
        .map(|&eps| invariant_error(ph, res, &observables, eps, cfg))
        .collect::<Result<Vec<ErrorPair>>>()?;
    let errors: Vec<f64> = pairs.iter().map(|p| p.drift).collect();
    let raw_errors: Vec<f64> = pairs.iter().map(|p| p.raw).collect();
    let (slope, fit_residual) = loglog_fit(&cfg.eps, &errors);
    let (raw_slope, _) = loglog_fit(&cfg.eps, &raw_errors);
    Ok(ComparisonReport {
        eps: cfg.eps.clone(),
        errors,
        slope,
        fit_residual,
        raw_errors,
        raw_slope,
        horizon_scale: cfg.t_scale,
        step: cfg.h,
        truncation: cfg.truncation,
    })
}

struct ErrorPair {
    drift: f64,
    raw: f64,
}

fn invariant_error(
    ph: &PerturbedHamiltonian,
    res: &NormalFormResult,
    observables: &[Poly],
    eps: f64,
    cfg: &CompareConfig,
) -> Result<ErrorPair> {
    if !(eps > 0.0 && eps <= 0.2) {
        return Err(NfError::InvalidConfig(format!("eps {eps} outside (0, 0.2]")));
    }
    if !(cfg.h > 0.0 && cfg.t_scale > 0.0) {
        return Err(NfError::InvalidConfig("step and horizon must be positive".into()));
    }
    let nvars = ph.h1().num_vars();
    let half_sq = 0.5 * eps * eps;
    let h0 = ph.h0();
    let full = CompiledPoly::combination(nvars, &[(1.0, &h0), (eps, ph.h1()), (half_sq, ph.h2())])?;
    let nf_weight2 = match cfg.truncation {
        Truncation::FirstOrder => 0.0,
        Truncation::SecondOrder => half_sq,
    };
    let normal = CompiledPoly::combination(
        nvars,
        &[
            (1.0, res.nf.coeff(0)),
            (eps, res.nf.coeff(1)),
            (nf_weight2, res.nf.coeff(2)),
        ],
    )?;
    let obs: Vec<CompiledPoly> = observables.iter().map(CompiledPoly::new).collect::<Result<_>>()?;

    // step size adjusted so one period of the unperturbed action is a whole
    // number of steps
    let period = 2.0 * std::f64::consts::PI / rational_to_f64(ph.freq().omega0());
    let per_period = (period / cfg.h).round().max(1.0) as usize;
    let h = period / per_period as f64;
    let steps = (cfg.t_scale / eps / h).ceil() as usize + per_period;
    let icfg = IntegratorConfig::new(h, steps);

    let record = |ham: &CompiledPoly| -> Result<Vec<Vec<f64>>> {
        let mut series = vec![Vec::with_capacity(steps + 1); obs.len()];
        integrate_with(ham, &cfg.x0, &icfg, |_, _, x| {
            for (s, o) in series.iter_mut().zip(&obs) {
                s.push(o.eval(x));
            }
        })?;
        Ok(series)
    };
    let a = record(&full)?;
    let b = record(&normal)?;

    let horizon = steps - per_period;
    let mut raw: f64 = 0.0;
    let mut drift: f64 = 0.0;
    for (u, v) in a.iter().zip(&b) {
        for k in 0..=horizon {
            raw = raw.max((u[k] - v[k]).abs());
        }
        let (mu, mv) = (period_means(u, per_period), period_means(v, per_period));
        for k in 0..=horizon {
            drift = drift.max(((mu[k] - mu[0]) - (mv[k] - mv[0])).abs());
        }
    }
    Ok(ErrorPair { drift, raw })
}

/// Mean over each window of one period: `out[k] = mean(x[k..k + len])`.
pub fn period_means(x: &[f64], len: usize) -> Vec<f64> {
    if x.len() < len {
        return Vec::new();
    }
    let mut out = Vec::with_capacity(x.len() - len + 1);
    let mut sum: f64 = x[..len].iter().sum();
    out.push(sum / len as f64);
    for k in len..x.len() {
        sum += x[k] - x[k - len];
        out.push(sum / len as f64);
    }
    out
}
