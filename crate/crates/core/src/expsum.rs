//! Exponential sums `S_i(θ, X) = Σ_{n<X} c_{i,n} e(nθ)` and the drift test of
//! their bound `X^{σ(k/2+α)} log X`.

use std::f64::consts::PI;

use num_complex::Complex64;
use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::growth::{AlphaChoice, Bound, Verdict};
use crate::qseries::Vvaf;

pub const DRIFT_SLACK: f64 = 3.0;

/// Coefficients per slot. Admissible forms have one slot per component in the
/// diagonal basis; logarithmic forms one per `(component, log power)`.
#[derive(Clone, Debug)]
pub struct CoefficientTable {
    pub slots: Vec<(usize, usize)>,
    /// `(n, values per slot)`, increasing in `n`.
    pub rows: Vec<(i64, Vec<Complex64>)>,
}

impl CoefficientTable {
    pub fn new(x: &Vvaf, n_max: i64) -> Result<Self> {
        if !x.is_logarithmic() && x.jordan().is_diagonal() {
            let rows: Vec<(i64, Vec<Complex64>)> =
                x.fourier_coefficients(n_max)?.into_iter().map(|c| (c.n, c.values)).collect();
            return Ok(Self { slots: (0..x.rep().dim()).map(|i| (i, 0)).collect(), rows });
        }
        let complete = x.truncation_order().floor().to_integer().min(n_max + 1);
        let mut slots = Vec::new();
        for (i, comp) in x.components().iter().enumerate() {
            for (j, _) in comp.terms() {
                slots.push((i, *j));
            }
        }
        let lo = x.components().iter().flat_map(|c| c.exponents()).min().map_or(0, |e| e.floor().to_integer());
        let width = (complete - lo).max(0) as usize;
        let mut rows: Vec<(i64, Vec<Complex64>)> =
            (0..width).map(|k| (lo + k as i64, vec![Complex64::new(0.0, 0.0); slots.len()])).collect();
        let mut slot = 0;
        for comp in x.components() {
            for (_, series) in comp.terms() {
                for (e, c) in series.terms() {
                    let n = e.floor().to_integer();
                    if n < complete {
                        rows[(n - lo) as usize].1[slot] += c;
                    }
                }
                slot += 1;
            }
        }
        Ok(Self { slots, rows })
    }

    pub fn last_index(&self) -> Option<i64> {
        self.rows.last().map(|r| r.0)
    }
}

/// `e(nθ)` with `nθ` reduced exactly to `r/q`, `r ∈ (-q/2, q/2]`.
pub fn e_n_theta(n: i64, theta: Ratio<i64>) -> Complex64 {
    let q = *theta.denom() as i128;
    let mut r = (n as i128 * *theta.numer() as i128).rem_euclid(q);
    if 2 * r > q {
        r -= q;
    }
    Complex64::from_polar(1.0, 2.0 * PI * r as f64 / q as f64)
}

/// `Σ_{start ≤ n < end} c_n e(nθ)` per slot.
pub fn exp_sum_range(table: &CoefficientTable, theta: Ratio<i64>, start: i64, end: i64) -> Vec<Complex64> {
    let mut acc = vec![Complex64::new(0.0, 0.0); table.slots.len()];
    for (n, values) in table.rows.iter().filter(|r| r.0 >= start && r.0 < end) {
        let w = e_n_theta(*n, theta);
        for (a, v) in acc.iter_mut().zip(values) {
            *a += v * w;
        }
    }
    acc
}

/// `S(θ, X) = Σ_{0 ≤ n < X} c_n e(nθ)` per slot.
pub fn exp_sum(x: &Vvaf, theta: Ratio<i64>, cutoff: i64) -> Result<Vec<Complex64>> {
    let table = CoefficientTable::new(x, cutoff - 1)?;
    check_available(&table, cutoff)?;
    Ok(exp_sum_range(&table, theta, 0, cutoff))
}

fn check_available(table: &CoefficientTable, cutoff: i64) -> Result<()> {
    match table.last_index() {
        Some(n) if n >= cutoff - 1 => Ok(()),
        None => Ok(()),
        Some(n) => Err(Error::Series(format!("coefficients known up to n = {n}, cutoff {cutoff} requested"))),
    }
}

/// Parses `p/q`, an integer, or a decimal such as `0.7071067811865476` into a rational.
pub fn parse_theta(text: &str) -> Result<Ratio<i64>> {
    let t = text.trim();
    let bad = || Error::Parse(format!("invalid theta `{t}`"));
    if let Some((p, q)) = t.split_once('/') {
        let p: i64 = p.trim().parse().map_err(|_| bad())?;
        let q: i64 = q.trim().parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(bad());
        }
        return Ok(Ratio::new(p, q));
    }
    let (neg, body) = t.strip_prefix('-').map_or((false, t), |b| (true, b));
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if frac.len() > 17 || int.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    let digits = format!("{int}{frac}");
    let num: i64 = digits.parse().map_err(|_| bad())?;
    let den = 10i64.checked_pow(frac.len() as u32).ok_or_else(bad)?;
    Ok(Ratio::new(if neg { -num } else { num }, den))
}

#[derive(Clone, Debug, Serialize)]
pub struct ExpSumCell {
    pub theta: Ratio<i64>,
    pub x: i64,
    pub sums: Vec<Complex64>,
    pub norm: f64,
    /// `‖S‖ / (X^{σ(k/2+α)} log X)`.
    pub ratio: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ThetaDrift {
    pub theta: Ratio<i64>,
    pub ratio_first: f64,
    pub ratio_last: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExpSumScan {
    pub slots: Vec<(usize, usize)>,
    pub sigma: u8,
    pub exponent: f64,
    pub alpha: AlphaChoice,
    pub cells: Vec<ExpSumCell>,
    /// Ratios per `θ` at the smallest and largest `X`, without a uniformity claim.
    pub per_theta: Vec<ThetaDrift>,
    pub ratio_first: f64,
    pub ratio_last: f64,
    pub verdict: Verdict,
}

impl ExpSumScan {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("theta,X,component,sum_re,sum_im,ratio\n");
        for c in &self.cells {
            for (slot, z) in c.sums.iter().enumerate() {
                let (i, j) = self.slots[slot];
                let label = if self.slots.iter().any(|s| s.1 > 0) { format!("{i}:{j}") } else { i.to_string() };
                out.push_str(&format!("{},{},{label},{:e},{:e},{:e}\n", c.theta, c.x, z.re, z.im, c.ratio));
            }
        }
        out
    }
}

/// Sums over `θ × X` grids; PASS iff the largest ratio at the largest `X` is
/// at most three times the largest ratio at the smallest `X`.
pub fn bound_scan(x: &Vvaf, thetas: &[Ratio<i64>], xs: &[i64], alpha: AlphaChoice) -> Result<ExpSumScan> {
    let mut xs = xs.to_vec();
    xs.sort_unstable();
    xs.dedup();
    let (Some(&x_first), Some(&x_last)) = (xs.first(), xs.last()) else {
        return Err(Error::Parameter("empty X grid".into()));
    };
    if x_first < 2 || thetas.is_empty() {
        return Err(Error::Parameter("X values must be at least 2 and θ grid nonempty".into()));
    }
    let sigma: u8 = match Bound::from_flags(x)? {
        Bound::Cusp => 1,
        Bound::Holomorphic => 2,
    };
    let exponent = sigma as f64 * (x.weight() as f64 / 2.0 + alpha.used());
    let table = CoefficientTable::new(x, x_last - 1)?;
    check_available(&table, x_last)?;
    let mut cells = Vec::with_capacity(thetas.len() * xs.len());
    for &theta in thetas {
        let mut acc = vec![Complex64::new(0.0, 0.0); table.slots.len()];
        let mut prev = i64::MIN;
        for &cut in &xs {
            for (a, b) in acc.iter_mut().zip(exp_sum_range(&table, theta, prev, cut)) {
                *a += b;
            }
            prev = cut;
            let norm = acc.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            let xf = cut as f64;
            cells.push(ExpSumCell { theta, x: cut, sums: acc.clone(), norm, ratio: norm / (xf.powf(exponent) * xf.ln()) });
        }
    }
    let ratio_at = |theta: Ratio<i64>, cut: i64| {
        cells.iter().find(|c| c.theta == theta && c.x == cut).map_or(0.0, |c| c.ratio)
    };
    let per_theta: Vec<ThetaDrift> = thetas
        .iter()
        .map(|&t| ThetaDrift { theta: t, ratio_first: ratio_at(t, x_first), ratio_last: ratio_at(t, x_last) })
        .collect();
    let ratio_first = per_theta.iter().map(|d| d.ratio_first).fold(0.0, f64::max);
    let ratio_last = per_theta.iter().map(|d| d.ratio_last).fold(0.0, f64::max);
    let verdict = if ratio_first == 0.0 && ratio_last == 0.0 {
        Verdict::Degenerate
    } else if ratio_last <= DRIFT_SLACK * ratio_first {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(ExpSumScan { slots: table.slots, sigma, exponent, alpha, cells, per_theta, ratio_first, ratio_last, verdict })
}
