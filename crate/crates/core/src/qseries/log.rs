//! Expansions `Σ_j (log q̃)^j f_j(τ)` and the change of basis between a
//! Jordan-block family of such expansions and pure `q̃`-expansions.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::Ratio;

use crate::error::{Error, Result};

use super::series::{nome_modulus, Evaluation, FracQSeries};

/// `log q̃ = 2πiτ/h`.
pub fn log_nome(tau: Complex64, h: u64) -> Complex64 {
    Complex64::new(0.0, 2.0 * PI / h as f64) * tau
}

#[derive(Clone, Debug, PartialEq)]
pub struct LogQExpansion {
    /// `(log power, series)`, sorted by log power, powers distinct.
    terms: Vec<(usize, FracQSeries)>,
}

impl LogQExpansion {
    pub fn new(terms: Vec<(usize, FracQSeries)>) -> Result<Self> {
        let mut terms = terms;
        terms.sort_by_key(|t| t.0);
        if terms.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::Series("repeated log power".into()));
        }
        if let Some(h) = terms.first().map(|t| t.1.width()) {
            if terms.iter().any(|t| t.1.width() != h) {
                return Err(Error::Series("log terms with different widths".into()));
            }
        }
        Ok(Self { terms })
    }

    pub fn pure(series: FracQSeries) -> Self {
        Self { terms: vec![(0, series)] }
    }

    pub fn terms(&self) -> &[(usize, FracQSeries)] {
        &self.terms
    }

    pub fn width(&self) -> Option<u64> {
        self.terms.first().map(|t| t.1.width())
    }

    pub fn max_log_power(&self) -> usize {
        self.terms.iter().filter(|t| !t.1.is_zero()).map(|t| t.0).max().unwrap_or(0)
    }

    /// The coefficient series of `(log q̃)^j`, if present.
    pub fn part(&self, j: usize) -> Option<&FracQSeries> {
        self.terms.iter().find(|t| t.0 == j).map(|t| &t.1)
    }

    pub fn is_pure(&self) -> bool {
        self.max_log_power() == 0
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        let mut map: BTreeMap<usize, FracQSeries> = BTreeMap::new();
        for (j, s) in self.terms.iter().chain(&o.terms) {
            let next = match map.remove(j) {
                Some(prev) => prev.add(s)?,
                None => s.clone(),
            };
            map.insert(*j, next);
        }
        Self::new(map.into_iter().collect())
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self { terms: self.terms.iter().map(|(j, s)| (*j, s.scale(c))).collect() }
    }

    /// Multiplies by `Σ_k poly[k] (log q̃)^k`.
    pub fn mul_log_poly(&self, poly: &[Complex64]) -> Result<Self> {
        let mut out: Option<Self> = None;
        for (k, &a) in poly.iter().enumerate() {
            if a == Complex64::new(0.0, 0.0) {
                continue;
            }
            let shifted = Self { terms: self.terms.iter().map(|(j, s)| (j + k, s.scale(a))).collect() };
            out = Some(match out {
                Some(acc) => acc.add(&shifted)?,
                None => shifted,
            });
        }
        Ok(out.unwrap_or_else(|| self.scale(Complex64::new(0.0, 0.0))))
    }

    /// Multiplies by a polynomial in `u = τ/h = log q̃ / (2πi)`.
    pub fn mul_u_poly(&self, poly: &[f64]) -> Result<Self> {
        let inv = Complex64::new(0.0, 2.0 * PI).inv();
        let lp: Vec<Complex64> = poly.iter().enumerate().map(|(k, &a)| inv.powu(k as u32) * a).collect();
        self.mul_log_poly(&lp)
    }

    /// All occupied exponents over every log power.
    pub fn exponents(&self) -> impl Iterator<Item = Ratio<i64>> + '_ {
        self.terms.iter().flat_map(|(_, s)| s.terms().map(|t| t.0))
    }

    /// Smallest order over the parts.
    pub fn order(&self) -> Option<Ratio<i64>> {
        self.terms.iter().map(|t| t.1.order()).min()
    }

    /// Largest coefficient difference over all log powers.
    pub fn max_diff(&self, o: &Self) -> f64 {
        let powers: std::collections::BTreeSet<usize> = self.terms.iter().chain(&o.terms).map(|t| t.0).collect();
        powers
            .into_iter()
            .map(|j| match (self.part(j), o.part(j)) {
                (Some(a), Some(b)) => a.max_diff(b),
                (Some(a), None) | (None, Some(a)) => a.max_abs(),
                (None, None) => 0.0,
            })
            .fold(0.0, f64::max)
    }

    pub fn evaluate(&self, tau: Complex64) -> Result<Evaluation> {
        let Some(h) = self.width() else {
            return Ok(Evaluation { value: Complex64::new(0.0, 0.0), tail: 0.0 });
        };
        nome_modulus(tau, h)?;
        let l = log_nome(tau, h);
        let mut value = Complex64::new(0.0, 0.0);
        let mut tail = 0.0;
        for (j, s) in &self.terms {
            let e = s.evaluate(tau)?;
            let lj = l.powu(*j as u32);
            value += lj * e.value;
            tail += lj.norm() * e.tail;
        }
        Ok(Evaluation { value, tail })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// `X_{i} ↦ h̃_i = Σ_j (-1)^j C(u+j-1, j) X_{i-j}`, pure expansions.
    Forward,
    /// `h̃_i ↦ X_i = Σ_j C(u, j) h̃_{i-j}`.
    Backward,
}

/// `C(u + j - 1, j) = u (u+1) ... (u+j-1) / j!` (rising) or `C(u, j)` (falling)
/// as coefficients in `u`.
fn binom_poly(j: usize, rising: bool) -> Vec<f64> {
    let mut p = vec![1.0];
    for r in 0..j {
        let root = if rising { r as f64 } else { -(r as f64) };
        // multiply by (u + root) / (r + 1)
        let mut next = vec![0.0; p.len() + 1];
        for (k, a) in p.iter().enumerate() {
            next[k] += a * root / (r + 1) as f64;
            next[k + 1] += a / (r + 1) as f64;
        }
        p = next;
    }
    p
}

/// Tolerance for the purity check on forward recoupling, relative to the
/// largest input coefficient.
const CLOSURE_TOL: f64 = 1e-9;

/// Recouples one Jordan-block family. Inputs are ordered so that
/// `X_i(τ + h) = λ (X_i(τ) + X_{i-1}(τ))`.
pub fn log_recouple(direction: Direction, comps: &[LogQExpansion]) -> Result<Vec<LogQExpansion>> {
    let scale = comps.iter().flat_map(|c| c.terms.iter().map(|t| t.1.max_abs())).fold(0.0, f64::max);
    if direction == Direction::Forward {
        check_independent(comps)?;
    }
    let mut out = Vec::with_capacity(comps.len());
    for i in 0..comps.len() {
        let mut acc: Option<LogQExpansion> = None;
        for j in 0..=i {
            let poly = match direction {
                Direction::Forward => {
                    let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                    binom_poly(j, true).into_iter().map(|a| a * sign).collect()
                }
                Direction::Backward => binom_poly(j, false),
            };
            let term = comps[i - j].mul_u_poly(&poly)?;
            acc = Some(match acc {
                Some(a) => a.add(&term)?,
                None => term,
            });
        }
        out.push(acc.expect("i >= 0"));
    }
    if direction == Direction::Forward {
        let mut residual: f64 = 0.0;
        for e in &out {
            for (j, s) in &e.terms {
                if *j > 0 {
                    residual = residual.max(s.max_abs());
                }
            }
        }
        if residual > CLOSURE_TOL * scale.max(f64::MIN_POSITIVE) {
            return Err(Error::NotBlockClosed(residual / scale));
        }
        let mut classes = std::collections::BTreeSet::new();
        for e in out.iter_mut() {
            e.terms.retain(|t| t.0 == 0);
            let pure = e.part(0).map(|s| s.chop(CLOSURE_TOL)).filter(|s| !s.is_zero());
            for ex in pure.iter().flat_map(|s| s.terms().map(|t| t.0)) {
                classes.insert(ex - ex.floor());
            }
        }
        if classes.len() > 1 {
            return Err(Error::NotBlockClosed(f64::NAN));
        }
    }
    Ok(out)
}

/// The degenerate case of linearly dependent components is reported, not resolved.
fn check_independent(comps: &[LogQExpansion]) -> Result<()> {
    let mut keys: BTreeMap<(usize, Ratio<i64>), usize> = BTreeMap::new();
    for c in comps {
        for (j, s) in &c.terms {
            for (e, _) in s.terms() {
                let n = keys.len();
                keys.entry((*j, e)).or_insert(n);
            }
        }
    }
    if comps.is_empty() {
        return Ok(());
    }
    let mut m = DMatrix::<Complex64>::zeros(comps.len(), keys.len().max(1));
    for (r, c) in comps.iter().enumerate() {
        for (j, s) in &c.terms {
            for (e, v) in s.terms() {
                m[(r, keys[&(*j, e)])] = v;
            }
        }
    }
    let sv = m.singular_values();
    let top = sv.max();
    let rank = sv.iter().filter(|&&x| x > 1e-10 * top).count();
    if rank < comps.len() {
        return Err(Error::Series(format!(
            "the {} block components are linearly dependent (rank {rank}); the degenerate case is not supported",
            comps.len()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn q(e: Ratio<i64>, v: f64) -> FracQSeries {
        FracQSeries::monomial(1, e, c(v), Ratio::from_integer(20)).unwrap()
    }

    #[test]
    fn binomial_polynomials() {
        assert_eq!(binom_poly(0, true), vec![1.0]);
        // C(u+0, 1) = u
        assert_eq!(binom_poly(1, true), vec![0.0, 1.0]);
        // C(u+1, 2) = (u² + u)/2, C(u, 2) = (u² - u)/2
        assert_eq!(binom_poly(2, true), vec![0.0, 0.5, 0.5]);
        assert_eq!(binom_poly(2, false), vec![0.0, -0.5, 0.5]);
    }

    #[test]
    fn synthetic_log_term_at_i() {
        let e = LogQExpansion::new(vec![(1, q(Ratio::from_integer(1), 1.0))]).unwrap();
        let v = e.evaluate(Complex64::new(0.0, 1.0)).unwrap().value;
        let want = Complex64::new(0.0, 2.0 * PI) * Complex64::new(0.0, 1.0) * (-2.0 * PI).exp();
        assert!((v - want).norm() < 1e-18);
        let zero = LogQExpansion::new(vec![]).unwrap();
        assert_eq!(zero.evaluate(Complex64::new(0.0, 1.0)).unwrap().value, c(0.0));
    }

    #[test]
    fn single_component_is_identity() {
        let x = vec![LogQExpansion::pure(q(Ratio::new(1, 3), 2.0))];
        assert_eq!(log_recouple(Direction::Forward, &x).unwrap(), x);
        assert_eq!(log_recouple(Direction::Backward, &x).unwrap(), x);
    }

    fn jordan2_fixture() -> Vec<LogQExpansion> {
        // X₀ = q̃^{1/3}, X₁ = (τ/h) q̃^{1/3} under λ = e^{2πi/3}
        let x0 = LogQExpansion::pure(q(Ratio::new(1, 3), 1.0));
        let x1 = x0.mul_u_poly(&[0.0, 1.0]).unwrap();
        vec![x0, x1]
    }

    #[test]
    fn jordan2_round_trip() {
        let x = jordan2_fixture();
        // the fixture obeys the block action
        let lambda = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
        let tau = Complex64::new(0.2, 0.9);
        let ev = |e: &LogQExpansion, t| e.evaluate(t).unwrap().value;
        assert!((ev(&x[1], tau + 1.0) - lambda * (ev(&x[1], tau) + ev(&x[0], tau))).norm() < 1e-14);
        let h = log_recouple(Direction::Forward, &x).unwrap();
        assert!(h.iter().all(LogQExpansion::is_pure));
        let back = log_recouple(Direction::Backward, &h).unwrap();
        for (a, b) in back.iter().zip(&x) {
            assert!(a.max_diff(b) < 1e-12);
        }
    }

    #[test]
    fn forward_then_backward_is_identity_on_three_blocks() {
        // generic pure h̃ mapped up and back down
        let h: Vec<LogQExpansion> = (0..3)
            .map(|i| {
                let s = q(Ratio::new(1, 4), 1.0 + i as f64).add(&q(Ratio::new(5, 4), -0.5 * i as f64)).unwrap();
                LogQExpansion::pure(s)
            })
            .collect();
        let x = log_recouple(Direction::Backward, &h).unwrap();
        assert_eq!(x[2].max_log_power(), 2);
        let again = log_recouple(Direction::Forward, &x).unwrap();
        for (a, b) in again.iter().zip(&h) {
            assert!(a.max_diff(b) < 1e-12);
        }
    }

    #[test]
    fn rejects_non_block_inputs() {
        let x = vec![LogQExpansion::pure(q(Ratio::new(1, 3), 1.0)), LogQExpansion::pure(q(Ratio::new(1, 2), 1.0))];
        assert!(matches!(log_recouple(Direction::Forward, &x), Err(Error::NotBlockClosed(_))));
        let dep = vec![LogQExpansion::pure(q(Ratio::new(1, 3), 1.0)), LogQExpansion::pure(q(Ratio::new(1, 3), 2.0))];
        assert!(matches!(log_recouple(Direction::Forward, &dep), Err(Error::Series(_))));
    }
}
