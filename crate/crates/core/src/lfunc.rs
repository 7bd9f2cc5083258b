//! Dirichlet series and completed L-functions of cusp forms, continued to all
//! `s` by splitting the Mellin integral at `Y₀` and folding `∫₀^{Y₀}` through `S`.
//!
//! All sums run over the stored exponents `e = n + μ` of each component, so the
//! values live in the basis the form is stored in. By linearity this agrees
//! with evaluating `(n + Λ)^{-s}` in the diagonal basis and mapping back.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gamma::gamma;
use crate::growth::{coefficient_norms, AlphaChoice};
use crate::moebius::{self, GroupElement};
use crate::qseries::{LogQExpansion, Vvaf};

/// Tolerance of the vanishing sign in the functional equation.
pub const FE_TOL: f64 = 1e-6;
/// Steepness `u` of the smooth weight `½ erfc(u ln x / 2)`.
const SMOOTH_U: f64 = 4.0;
/// The weight is below `1e-14` for `ln x > SMOOTH_REACH / u`.
const SMOOTH_REACH: f64 = 11.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    TruncatedSum,
    SplitMellin,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Cutoff {
    /// Terms with `n < N`.
    Sharp,
    /// Terms weighted by `½ erfc(u ln(e/N')/2)` with `N' = N e^{-11/u}`.
    Smooth,
}

#[derive(Clone, Debug, Serialize)]
pub struct LValue {
    pub s: Complex64,
    pub value: Vec<Complex64>,
    pub method: Method,
    pub cutoff: Option<Cutoff>,
    pub error: f64,
    /// The error is a tail bound rather than a refinement difference.
    pub rigorous: bool,
    pub terms: i64,
    pub split: Option<f64>,
    pub warning: Option<String>,
}

impl LValue {
    pub fn max_diff(&self, o: &LValue) -> f64 {
        self.value.iter().zip(&o.value).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn norm(&self) -> f64 {
        self.value.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}

fn check_cusp(x: &Vvaf) -> Result<()> {
    if x.flags().cusp_form {
        Ok(())
    } else {
        Err(Error::NotCuspForm)
    }
}

fn width(x: &Vvaf) -> u64 {
    x.components().iter().find_map(LogQExpansion::width).unwrap_or(1)
}

fn smooth_weight(e: f64, n_eff: f64) -> f64 {
    0.5 * libm::erfc(SMOOTH_U * (e / n_eff).ln() / 2.0)
}

/// `S_{i,j} = Σ_e c_{i,j,e} w(e) e^{-(s+j)}` for exponents `e < n`.
fn slot_sums(x: &Vvaf, s: Complex64, n: i64, cutoff: Cutoff) -> Vec<Vec<Complex64>> {
    let n_eff = n as f64 * (-SMOOTH_REACH / SMOOTH_U).exp();
    let m = x.components().iter().map(LogQExpansion::max_log_power).max().unwrap_or(0);
    x.components()
        .iter()
        .map(|comp| {
            let mut out = vec![Complex64::new(0.0, 0.0); m + 1];
            for (j, series) in comp.terms() {
                let sj = s + *j as f64;
                for (e, c) in series.terms() {
                    let e = *e.numer() as f64 / *e.denom() as f64;
                    if e >= n as f64 {
                        break;
                    }
                    let w = match cutoff {
                        Cutoff::Sharp => 1.0,
                        Cutoff::Smooth => smooth_weight(e, n_eff),
                    };
                    out[*j] += c * w * (-sj * e.ln()).exp();
                }
            }
            out
        })
        .collect()
}

fn check_terms(x: &Vvaf, n: i64) -> Result<()> {
    let avail = x.truncation_order();
    if avail < num_rational::Ratio::from_integer(n) {
        return Err(Error::Series(format!("{n} terms requested but the expansions stop at q^{avail}")));
    }
    if n < 2 {
        return Err(Error::Parameter("at least two terms are needed".into()));
    }
    Ok(())
}

/// Cutoff, rigour flag and warning for a request at `s`.
fn plan(x: &Vvaf, s: Complex64, alpha: AlphaChoice) -> (Cutoff, f64, Option<String>) {
    let half = x.weight() as f64 / 2.0 + alpha.used() + 1.0;
    if s.re > half {
        (Cutoff::Sharp, half, None)
    } else {
        (
            Cutoff::Smooth,
            half,
            Some(format!("Re(s) = {} is outside Re(s) > {half}; smooth cutoff, heuristic error", s.re)),
        )
    }
}

/// Tail bound `C Σ_{n ≥ N} n^{β - σ}` with `C` the envelope of `‖c_n‖ / n^β`
/// over the known coefficients and `β = k/2 + α`.
fn envelope_tail(x: &Vvaf, sigma: f64, n: i64, alpha: AlphaChoice) -> Result<f64> {
    let beta = x.weight() as f64 / 2.0 + alpha.used();
    let norms = coefficient_norms(x, n - 1)?;
    let c = norms.iter().filter(|c| c.n >= 1).map(|c| c.l2 / (c.n as f64).powf(beta)).fold(0.0, f64::max);
    let slots = x.components().iter().map(|c| c.max_log_power() + 1).max().unwrap_or(1) as f64;
    let p = sigma - beta - 1.0;
    Ok(slots * c * ((n - 1) as f64).powf(-p) / p)
}

fn refine_error(x: &Vvaf, s: Complex64, n: i64, cutoff: Cutoff, full: &[Vec<Complex64>]) -> f64 {
    let coarse = slot_sums(x, s, (3 * n / 4).max(2), cutoff);
    full.iter()
        .zip(&coarse)
        .flat_map(|(a, b)| a.iter().zip(b).map(|(u, v)| (u - v).norm()))
        .fold(0.0, f64::max)
}

/// `L(X, s) = Σ_j Σ_n X_{[j,n]} / (n + μ)^{s+j}` from the first `n` terms.
pub fn dirichlet_l(x: &Vvaf, s: Complex64, n: i64, alpha: AlphaChoice) -> Result<LValue> {
    check_cusp(x)?;
    check_terms(x, n)?;
    let (cutoff, _, warning) = plan(x, s, alpha);
    let sums = slot_sums(x, s, n, cutoff);
    let value = sums.iter().map(|row| row.iter().sum()).collect();
    let (error, rigorous) = match cutoff {
        Cutoff::Sharp => (envelope_tail(x, s.re, n, alpha)?, true),
        Cutoff::Smooth => (refine_error(x, s, n, cutoff, &sums), false),
    };
    Ok(LValue { s, value, method: Method::TruncatedSum, cutoff: Some(cutoff), error, rigorous, terms: n, split: None, warning })
}

/// `Λ̃(X, s) = (2π)^{-s} Σ_j (-1)^j Γ(s+j) Σ_n X_{[j,n]} / (n + μ)^{s+j}` from the first `n` terms.
pub fn completed_truncated(x: &Vvaf, s: Complex64, n: i64, alpha: AlphaChoice) -> Result<LValue> {
    let l = dirichlet_l(x, s, n, alpha)?;
    let cutoff = l.cutoff.expect("truncated sums carry a cutoff");
    let sums = slot_sums(x, s, n, cutoff);
    let pre = (-s * (2.0 * PI).ln()).exp();
    let factors: Vec<Complex64> = (0..sums[0].len())
        .map(|j| pre * gamma(s + j as f64) * if j % 2 == 0 { 1.0 } else { -1.0 })
        .collect();
    let value = sums.iter().map(|row| row.iter().zip(&factors).map(|(a, f)| a * f).sum()).collect();
    let fmax = factors.iter().map(|f| f.norm()).fold(0.0, f64::max);
    Ok(LValue { value, error: l.error * fmax, ..l })
}

/// Step and range of the double-exponential rule `y = a + exp(t - e^{-t}) / c`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Quadrature {
    pub step: f64,
    pub t_min: f64,
    pub t_max: f64,
}

impl Default for Quadrature {
    fn default() -> Self {
        Self { step: 1.0 / 32.0, t_min: -5.0, t_max: 5.5 }
    }
}

/// Expansions cut where `e^{-2π e y_min}` is negligible.
fn quadrature_components(x: &Vvaf, y_min: f64) -> Result<Vec<LogQExpansion>> {
    let cut = (60.0 / (2.0 * PI * y_min)).ceil() as i64 + 2;
    let order = num_rational::Ratio::from_integer(cut).min(x.truncation_order());
    x.components()
        .iter()
        .map(|c| LogQExpansion::new(c.terms().iter().map(|(j, s)| (*j, s.truncate(order))).collect()))
        .collect()
}

/// Trapezoid sums of `∫_a^∞ X(ihy) y^{w-1} dy` with step `step` and `2·step`.
fn tail_integral(
    comps: &[LogQExpansion],
    h: f64,
    w: Complex64,
    a: f64,
    decay: f64,
    q: &Quadrature,
) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    let m = comps.len();
    let mut fine = vec![Complex64::new(0.0, 0.0); m];
    let mut coarse = vec![Complex64::new(0.0, 0.0); m];
    let steps = ((q.t_max - q.t_min) / q.step).round() as i64;
    for k in 0..=steps {
        let t = q.t_min + k as f64 * q.step;
        let g = (t - (-t).exp()).exp();
        let y = a + g / decay;
        let dy = g * (1.0 + (-t).exp()) / decay;
        let weight = dy * ((w - 1.0) * y.ln()).exp();
        let tau = Complex64::new(0.0, h * y);
        for (i, c) in comps.iter().enumerate() {
            let v = c.evaluate(tau)?.value * weight;
            fine[i] += v * q.step;
            if k % 2 == 0 {
                coarse[i] += v * 2.0 * q.step;
            }
        }
    }
    Ok((fine, coarse))
}

/// Smallest exponent over all components, which fixes the decay rate.
fn min_exponent(x: &Vvaf) -> f64 {
    x.components()
        .iter()
        .flat_map(|c| c.exponents())
        .map(|e| *e.numer() as f64 / *e.denom() as f64)
        .fold(f64::INFINITY, f64::min)
}

fn check_s_relation(x: &Vvaf) -> Result<()> {
    if !x.rep().group().contains(&GroupElement::s()) {
        return Err(Error::Parameter("S is not in the group".into()));
    }
    let pts = [Complex64::new(0.0, 1.0), Complex64::new(0.3, 1.2), Complex64::new(-0.2, 0.9)];
    let chk = x.check_transformation(&GroupElement::s(), &pts)?;
    let scale = pts.iter().map(|&t| x.evaluate(t).map(|v| v.value.iter().map(|z| z.norm()).fold(0.0, f64::max))).try_fold(
        0.0f64,
        |acc, v| v.map(|v| acc.max(v)),
    )?;
    if chk.residual > 1e-8 * scale.max(1e-300) {
        return Err(Error::FunctionalEquation(chk.residual));
    }
    Ok(())
}

/// `Λ̃(X, s) = ∫_{Y₀}^∞ X(ihy) y^{s-1} dy + i^k h^{k-2s} ρ(S) ∫_{1/(h²Y₀)}^∞ X(ihy) y^{k-s-1} dy`.
pub fn completed_l(x: &Vvaf, s: Complex64, y0: f64, q: &Quadrature) -> Result<LValue> {
    check_cusp(x)?;
    check_s_relation(x)?;
    if y0 <= 0.0 {
        return Err(Error::Parameter(format!("split point must be positive, got {y0}")));
    }
    let h = width(x) as f64;
    let k = x.weight();
    let a2 = 1.0 / (h * h * y0);
    let comps = quadrature_components(x, y0.min(a2))?;
    let decay = 2.0 * PI * min_exponent(x);
    let (f1, c1) = tail_integral(&comps, h, s, y0, decay, q)?;
    let (f2, c2) = tail_integral(&comps, h, Complex64::new(k as f64, 0.0) - s, a2, decay, q)?;
    let rho_s = x.rep().evaluate(&GroupElement::s())?;
    let pre = Complex64::new(0.0, 1.0).powi(k) * (Complex64::new(h.ln(), 0.0) * (k as f64 - 2.0 * s)).exp();
    let fold = |a: &[Complex64], b: &[Complex64]| -> Vec<Complex64> {
        let rb = &rho_s * nalgebra::DVector::from_column_slice(b);
        a.iter().zip(rb.iter()).map(|(u, v)| u + pre * v).collect()
    };
    let value = fold(&f1, &f2);
    let coarse = fold(&c1, &c2);
    let error = value.iter().zip(&coarse).map(|(u, v)| (u - v).norm()).fold(0.0, f64::max);
    let terms = comps.iter().filter_map(LogQExpansion::order).min().map_or(0, |o| o.ceil().to_integer());
    Ok(LValue { s, value, method: Method::SplitMellin, cutoff: None, error, rigorous: false, terms, split: Some(y0), warning: None })
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct FeResidual {
    pub s: Complex64,
    /// `‖ρ(S) Λ̃(s) - (hi)^{-k} h^{2k-2s} Λ̃(k-s)‖`.
    pub plus: f64,
    /// `‖ρ(S) Λ̃(s) + (hi)^{-k} h^{2k-2s} Λ̃(k-s)‖`.
    pub minus: f64,
    /// The sign whose residual is below [`FE_TOL`], if exactly one is.
    pub selected: Option<i8>,
}

pub fn functional_equation_residual(x: &Vvaf, s: Complex64, y0: f64, q: &Quadrature) -> Result<FeResidual> {
    let k = x.weight();
    let h = width(x) as f64;
    let a = completed_l(x, s, y0, q)?;
    let b = completed_l(x, Complex64::new(k as f64, 0.0) - s, y0, q)?;
    let rho_s = x.rep().evaluate(&GroupElement::s())?;
    let lhs = &rho_s * nalgebra::DVector::from_vec(a.value);
    let factor = Complex64::new(0.0, h).powi(-k) * (Complex64::new(h.ln(), 0.0) * (2.0 * k as f64 - 2.0 * s)).exp();
    let res = |sign: f64| lhs.iter().zip(&b.value).map(|(u, v)| (u - sign * factor * v).norm_sqr()).sum::<f64>().sqrt();
    let (plus, minus) = (res(1.0), res(-1.0));
    let selected = match (plus < FE_TOL, minus < FE_TOL) {
        (true, false) => Some(1),
        (false, true) => Some(-1),
        _ => None,
    };
    Ok(FeResidual { s, plus, minus, selected })
}

#[derive(Clone, Debug, Serialize)]
pub struct FeScan {
    pub residuals: Vec<FeResidual>,
    /// The sign selected at every grid point, if it is the same everywhere.
    pub sign: Option<i8>,
}

impl FeScan {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("s_re,s_im,residual_plus,residual_minus\n");
        for r in &self.residuals {
            out.push_str(&format!("{},{},{:e},{:e}\n", r.s.re, r.s.im, r.plus, r.minus));
        }
        out
    }
}

pub fn fe_scan(x: &Vvaf, grid: &[Complex64], y0: f64, q: &Quadrature) -> Result<FeScan> {
    let residuals = grid.iter().map(|&s| functional_equation_residual(x, s, y0, q)).collect::<Result<Vec<_>>>()?;
    let first = residuals.first().and_then(|r| r.selected);
    let sign = first.filter(|&f| residuals.iter().all(|r| r.selected == Some(f)));
    Ok(FeScan { residuals, sign })
}

pub fn lvalues_csv(values: &[LValue]) -> String {
    let mut out = String::from("s_re,s_im,component,value_re,value_im,err\n");
    for v in values {
        for (i, z) in v.value.iter().enumerate() {
            out.push_str(&format!("{},{},{i},{:e},{:e},{:e}\n", v.s.re, v.s.im, z.re, z.im, v.error));
        }
    }
    out
}

/// The width of `∞` must match the width stored in the expansions.
pub fn check_width(x: &Vvaf) -> Result<()> {
    let w = moebius::cusp_width(x.rep().group(), moebius::Cusp::Infinity)?;
    if w != width(x) {
        return Err(Error::Parameter(format!("expansions use width {} but the cusp width is {w}", width(x))));
    }
    Ok(())
}
