use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Evaluation is refused when `|q̃|` exceeds this.
pub const MAX_NOME: f64 = 0.995;

/// `Σ_j c_j q̃^{(start+j)/D}` with `q̃ = e^{2πiτ/h}`, exact for every exponent
/// below `(start + len)/D` (the order).
#[derive(Clone, Debug, PartialEq)]
pub struct FracQSeries {
    h: u64,
    denom: u64,
    start: i64,
    coeffs: Vec<Complex64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Evaluation {
    pub value: Complex64,
    /// Geometric estimate of the omitted terms.
    pub tail: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CombineOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn combine(op: CombineOp, f: &FracQSeries, g: &FracQSeries) -> Result<FracQSeries> {
    match op {
        CombineOp::Add => f.add(g),
        CombineOp::Sub => f.sub(g),
        CombineOp::Mul => f.mul(g),
        CombineOp::Div => f.div(g),
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

/// `|q̃|` and the nome check shared by all evaluators.
pub fn nome_modulus(tau: Complex64, h: u64) -> Result<f64> {
    if !(tau.im > 0.0) {
        return Err(Error::Parameter(format!("τ = {tau} is not in the upper half-plane")));
    }
    let r = (-2.0 * PI * tau.im / h as f64).exp();
    if r > MAX_NOME {
        return Err(Error::NearBoundary(r));
    }
    Ok(r)
}

impl FracQSeries {
    /// Zero series known exactly below `order`.
    pub fn zero(h: u64, order: Ratio<i64>) -> Self {
        Self { h, denom: *order.denom() as u64, start: *order.numer(), coeffs: Vec::new() }
    }

    /// Series on grid `1/denom` from `(index, coefficient)` pairs. Terms at or
    /// beyond `order_index` are dropped; repeated indices accumulate.
    pub fn from_terms(
        h: u64,
        denom: u64,
        order_index: i64,
        terms: impl IntoIterator<Item = (i64, Complex64)>,
    ) -> Result<Self> {
        if h == 0 || denom == 0 {
            return Err(Error::Series("width and denominator must be positive".into()));
        }
        let terms: Vec<(i64, Complex64)> = terms.into_iter().filter(|t| t.0 < order_index).collect();
        let start = terms.iter().map(|t| t.0).min().unwrap_or(order_index);
        let mut coeffs = vec![Complex64::new(0.0, 0.0); (order_index - start) as usize];
        for (i, c) in terms {
            coeffs[(i - start) as usize] += c;
        }
        Ok(Self { h, denom, start, coeffs })
    }

    pub fn monomial(h: u64, exponent: Ratio<i64>, c: Complex64, order: Ratio<i64>) -> Result<Self> {
        let d = lcm(*exponent.denom() as u64, *order.denom() as u64);
        let idx = |r: Ratio<i64>| r.numer() * (d as i64 / r.denom());
        Self::from_terms(h, d, idx(order), [(idx(exponent), c)])
    }

    pub fn one(h: u64, order: i64) -> Self {
        Self::monomial(h, Ratio::from_integer(0), Complex64::new(1.0, 0.0), Ratio::from_integer(order))
            .expect("valid monomial")
    }

    pub fn width(&self) -> u64 {
        self.h
    }

    pub fn denom(&self) -> u64 {
        self.denom
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn order_index(&self) -> i64 {
        self.start + self.coeffs.len() as i64
    }

    /// Exponents strictly below this are exact.
    pub fn order(&self) -> Ratio<i64> {
        Ratio::new(self.order_index(), self.denom as i64)
    }

    pub fn exponent_of(&self, index: i64) -> Ratio<i64> {
        Ratio::new(index, self.denom as i64)
    }

    /// Nonzero terms as `(exponent, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (Ratio<i64>, Complex64)> + '_ {
        self.indexed().map(move |(i, c)| (self.exponent_of(i), c))
    }

    fn indexed(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != Complex64::new(0.0, 0.0))
            .map(move |(j, c)| (self.start + j as i64, *c))
    }

    /// Coefficient of `q̃^e`; `None` when `e` is at or beyond the order.
    pub fn coeff(&self, e: Ratio<i64>) -> Option<Complex64> {
        if e >= self.order() {
            return None;
        }
        let scaled = e * Ratio::from_integer(self.denom as i64);
        if !scaled.is_integer() || scaled.to_integer() < self.start {
            return Some(Complex64::new(0.0, 0.0));
        }
        Some(self.coeffs[(scaled.to_integer() - self.start) as usize])
    }

    pub fn leading(&self) -> Option<(Ratio<i64>, Complex64)> {
        self.terms().next()
    }

    pub fn is_zero(&self) -> bool {
        self.indexed().next().is_none()
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    fn check_width(&self, o: &Self) -> Result<()> {
        if self.h != o.h {
            return Err(Error::Series(format!("width mismatch: {} vs {}", self.h, o.h)));
        }
        Ok(())
    }

    fn regrid(&self, d: u64) -> Self {
        if d == self.denom {
            return self.clone();
        }
        debug_assert_eq!(d % self.denom, 0);
        let f = (d / self.denom) as i64;
        let mut coeffs = vec![Complex64::new(0.0, 0.0); self.coeffs.len() * f as usize];
        for (j, c) in self.coeffs.iter().enumerate() {
            coeffs[j * f as usize] = *c;
        }
        Self { h: self.h, denom: d, start: self.start * f, coeffs }
    }

    /// Drops leading zeros and reduces the grid to the coarsest one carrying
    /// every occupied exponent. The order may shrink to the new grid.
    pub fn normalize(&self) -> Self {
        let order = self.order_index();
        let mut g = self.denom as i64;
        for (i, _) in self.indexed() {
            g = g.gcd(&i);
        }
        let g = g.max(1);
        let new_order = num_integer::Integer::div_floor(&order, &g);
        let terms: Vec<(i64, Complex64)> = self.indexed().map(|(i, c)| (i / g, c)).collect();
        Self::from_terms(self.h, self.denom / g as u64, new_order, terms).expect("valid grid")
    }

    /// Zeroes coefficients below `tol` times the largest modulus.
    pub fn chop(&self, tol: f64) -> Self {
        let cut = tol * self.max_abs();
        let mut out = self.clone();
        for c in &mut out.coeffs {
            if c.norm() <= cut {
                *c = Complex64::new(0.0, 0.0);
            }
        }
        out
    }

    /// Zeroes each coefficient below `tol` times the modulus of `scale` at the same exponent.
    pub fn chop_against(&self, scale: &Self, tol: f64) -> Self {
        let mut out = self.clone();
        for (i, c) in out.coeffs.iter_mut().enumerate() {
            let e = self.exponent_of(self.start + i as i64);
            let s = scale.coeff(e).map_or(0.0, |z| z.norm());
            if c.norm() <= tol * s {
                *c = Complex64::new(0.0, 0.0);
            }
        }
        out
    }

    /// Keeps only exponents below `order`.
    pub fn truncate(&self, order: Ratio<i64>) -> Self {
        if order >= self.order() {
            return self.clone();
        }
        let d = lcm(self.denom, *order.denom() as u64);
        let s = self.regrid(d);
        let idx = order.numer() * (d as i64 / order.denom());
        Self::from_terms(self.h, d, idx, s.indexed().collect::<Vec<_>>()).expect("valid grid").normalize()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self { coeffs: self.coeffs.iter().map(|x| x * c).collect(), ..self.clone() }
    }

    /// Multiplies by `q̃^e`.
    pub fn shift(&self, e: Ratio<i64>) -> Self {
        let d = lcm(self.denom, *e.denom() as u64);
        let mut s = self.regrid(d);
        s.start += e.numer() * (d as i64 / e.denom());
        s
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check_width(o)?;
        let d = lcm(self.denom, o.denom);
        let (a, b) = (self.regrid(d), o.regrid(d));
        let order = a.order_index().min(b.order_index());
        let terms: Vec<_> = a.indexed().chain(b.indexed()).collect();
        Self::from_terms(self.h, d, order, terms)
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.check_width(o)?;
        let d = lcm(self.denom, o.denom);
        let (a, b) = (self.regrid(d), o.regrid(d));
        let order = (a.order_index() + b.start).min(b.order_index() + a.start);
        let start = a.start + b.start;
        let mut coeffs = vec![Complex64::new(0.0, 0.0); (order - start).max(0) as usize];
        let bn: Vec<(i64, Complex64)> = b.indexed().collect();
        for (i, x) in a.indexed() {
            for &(j, y) in &bn {
                let k = i + j;
                if k >= order {
                    break;
                }
                coeffs[(k - start) as usize] += x * y;
            }
        }
        if order < start {
            return Ok(Self { h: self.h, denom: d, start: order, coeffs: Vec::new() });
        }
        Ok(Self { h: self.h, denom: d, start, coeffs })
    }

    /// Multiplicative inverse, from the recurrence on the nonzero terms.
    pub fn inverse(&self) -> Result<Self> {
        let g = self.normalize();
        let lead = match g.coeffs.first() {
            Some(c) if *c != Complex64::new(0.0, 0.0) => *c,
            _ => return Err(Error::Series("division by a series with zero leading coefficient".into())),
        };
        let n = g.coeffs.len();
        let tail: Vec<(usize, Complex64)> =
            g.coeffs.iter().enumerate().skip(1).filter(|(_, c)| **c != Complex64::new(0.0, 0.0)).map(|(j, c)| (j, c / lead)).collect();
        let mut b = vec![Complex64::new(0.0, 0.0); n];
        b[0] = Complex64::new(1.0, 0.0);
        for k in 1..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for &(j, c) in &tail {
                if j > k {
                    break;
                }
                acc -= c * b[k - j];
            }
            b[k] = acc;
        }
        let inv_lead = lead.inv();
        Ok(Self { h: g.h, denom: g.denom, start: -g.start, coeffs: b.into_iter().map(|x| x * inv_lead).collect() })
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        self.check_width(o)?;
        self.mul(&o.inverse()?)
    }

    pub fn pow(&self, n: u32) -> Result<Self> {
        if n == 0 {
            // relative precision of self
            let rel = Ratio::new(self.order_index() - self.start, self.denom as i64);
            return Self::monomial(self.h, Ratio::from_integer(0), Complex64::new(1.0, 0.0), rel);
        }
        let mut acc = self.clone();
        for _ in 1..n {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Largest coefficient difference on the common exact range.
    pub fn max_diff(&self, o: &Self) -> f64 {
        let order = self.order().min(o.order());
        match self.truncate(order).sub(&o.truncate(order)) {
            Ok(d) => d.max_abs(),
            Err(_) => f64::INFINITY,
        }
    }

    pub fn evaluate(&self, tau: Complex64) -> Result<Evaluation> {
        let r = nome_modulus(tau, self.h)?;
        let scale = Complex64::new(0.0, 2.0 * PI / (self.h as f64 * self.denom as f64)) * tau;
        let value = self.indexed().map(|(i, c)| c * (scale * i as f64).exp()).sum();
        let t = r.powf(1.0 / self.denom as f64);
        let half = self.coeffs.len() / 2;
        let mut m = self.coeffs[half..].iter().map(|c| c.norm()).fold(0.0, f64::max);
        if m == 0.0 {
            m = self.max_abs();
        }
        let tail = m * t.powf(self.order_index() as f64) / (1.0 - t);
        Ok(Evaluation { value, tail })
    }

    /// CSV with header `exponent_num,exponent_den,re,im`, one row per nonzero term.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("exponent_num,exponent_den,re,im\n");
        for (e, c) in self.terms() {
            writeln!(out, "{},{},{:e},{:e}", e.numer(), e.denom(), c.re, c.im).expect("write to String");
        }
        out
    }

    /// Inverse of [`Self::to_csv`]. The order is taken one grid step past the
    /// last term unless given.
    pub fn from_csv(text: &str, h: u64, order: Option<Ratio<i64>>) -> Result<Self> {
        let mut rows = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || ln == 0 && line.starts_with("exponent_num") {
                continue;
            }
            let f: Vec<&str> = line.split(',').map(str::trim).collect();
            if f.len() != 4 {
                return Err(Error::Parse(format!("line {}: expected 4 fields", ln + 1)));
            }
            let bad = |what: &str| Error::Parse(format!("line {}: bad {what}", ln + 1));
            let num: i64 = f[0].parse().map_err(|_| bad("exponent_num"))?;
            let den: i64 = f[1].parse().map_err(|_| bad("exponent_den"))?;
            if den <= 0 {
                return Err(bad("exponent_den"));
            }
            let re: f64 = f[2].parse().map_err(|_| bad("re"))?;
            let im: f64 = f[3].parse().map_err(|_| bad("im"))?;
            rows.push((Ratio::new(num, den), Complex64::new(re, im)));
        }
        let d = rows.iter().fold(order.map_or(1, |o| *o.denom() as u64), |d, r| lcm(d, *r.0.denom() as u64));
        let idx = |r: Ratio<i64>| r.numer() * (d as i64 / r.denom());
        let order_index = match order {
            Some(o) => idx(o),
            None => rows.iter().map(|r| idx(r.0) + 1).max().unwrap_or(0),
        };
        Self::from_terms(h, d, order_index, rows.into_iter().map(|(e, c)| (idx(e), c)))
    }
}

/// JSON form: `{"width","denom","order":[num,den],"terms":[[num,den,re,im],..]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SeriesJson {
    pub width: u64,
    pub order: [i64; 2],
    pub terms: Vec<(i64, i64, f64, f64)>,
}

impl From<&FracQSeries> for SeriesJson {
    fn from(s: &FracQSeries) -> Self {
        let o = s.order();
        SeriesJson {
            width: s.h,
            order: [*o.numer(), *o.denom()],
            terms: s.terms().map(|(e, c)| (*e.numer(), *e.denom(), c.re, c.im)).collect(),
        }
    }
}

impl TryFrom<SeriesJson> for FracQSeries {
    type Error = Error;

    fn try_from(j: SeriesJson) -> Result<Self> {
        if j.order[1] <= 0 || j.terms.iter().any(|t| t.1 <= 0) {
            return Err(Error::Parse("nonpositive exponent denominator".into()));
        }
        let order = Ratio::new(j.order[0], j.order[1]);
        let d = j.terms.iter().fold(*order.denom() as u64, |d, t| lcm(d, Ratio::new(t.0, t.1).denom().unsigned_abs()));
        let idx = |r: Ratio<i64>| r.numer() * (d as i64 / r.denom());
        FracQSeries::from_terms(
            j.width,
            d,
            idx(order),
            j.terms.iter().map(|t| (idx(Ratio::new(t.0, t.1)), Complex64::new(t.2, t.3))),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn r(a: i64, b: i64) -> Ratio<i64> {
        Ratio::new(a, b)
    }

    #[test]
    fn geometric_inverse() {
        // 1/(1 - q) = Σ qⁿ
        let f = FracQSeries::from_terms(1, 1, 20, [(0, c(1.0)), (1, c(-1.0))]).unwrap();
        let g = f.inverse().unwrap();
        assert_eq!(g.order(), r(20, 1));
        assert!(g.coeffs().iter().all(|x| *x == c(1.0)));
        let one = f.mul(&g).unwrap();
        assert_eq!(one.coeff(r(0, 1)), Some(c(1.0)));
        assert!(one.terms().count() == 1);
    }

    #[test]
    fn grids_merge_by_lcm() {
        let a = FracQSeries::monomial(1, r(1, 8), c(2.0), r(5, 1)).unwrap();
        let b = FracQSeries::monomial(1, r(-1, 24), c(1.0), r(3, 1)).unwrap();
        let s = a.add(&b).unwrap();
        assert_eq!(s.denom(), 24);
        assert_eq!(s.order(), r(3, 1));
        assert_eq!(s.leading(), Some((r(-1, 24), c(1.0))));
        let p = a.mul(&b).unwrap();
        assert_eq!(p.leading(), Some((r(1, 12), c(2.0))));
        let n = p.normalize();
        assert_eq!(n.denom(), 12);
        assert_eq!(n.leading(), Some((r(1, 12), c(2.0))));
    }

    #[test]
    fn order_tracking() {
        // (q^{1/2} + O(q^3)) (1 + O(q^2)) is exact below q^{5/2}
        let a = FracQSeries::from_terms(1, 2, 6, [(1, c(1.0))]).unwrap();
        let b = FracQSeries::from_terms(1, 1, 2, [(0, c(1.0))]).unwrap();
        assert_eq!(a.mul(&b).unwrap().order(), r(5, 2));
    }

    #[test]
    fn division_by_zero_series() {
        let z = FracQSeries::zero(1, r(10, 1));
        assert!(FracQSeries::one(1, 10).div(&z).is_err());
        assert!(FracQSeries::one(2, 10).div(&FracQSeries::one(1, 10)).is_err());
    }

    #[test]
    fn coeff_lookup() {
        let s = FracQSeries::from_terms(1, 4, 12, [(1, c(3.0)), (6, c(-1.0))]).unwrap();
        assert_eq!(s.coeff(r(1, 4)), Some(c(3.0)));
        assert_eq!(s.coeff(r(3, 2)), Some(c(-1.0)));
        assert_eq!(s.coeff(r(1, 3)), Some(c(0.0)));
        assert_eq!(s.coeff(r(3, 1)), None);
    }

    #[test]
    fn evaluation_and_refusal() {
        let s = FracQSeries::monomial(1, r(1, 1), c(1.0), r(50, 1)).unwrap();
        let v = s.evaluate(Complex64::new(0.0, 1.0)).unwrap();
        assert!((v.value - c((-2.0 * PI).exp())).norm() < 1e-18);
        assert!(matches!(s.evaluate(Complex64::new(0.0, 1e-4)), Err(Error::NearBoundary(_))));
        assert!(s.evaluate(Complex64::new(0.0, -1.0)).is_err());
        let z = FracQSeries::zero(1, r(5, 1)).evaluate(Complex64::new(0.3, 1.0)).unwrap();
        assert_eq!(z.value, c(0.0));
    }

    #[test]
    fn csv_round_trip() {
        let s = FracQSeries::from_terms(2, 24, 100, [(-1, c(1.0)), (23, Complex64::new(-0.5, 2.25))]).unwrap();
        let text = s.to_csv();
        assert!(text.starts_with("exponent_num,exponent_den,re,im\n-1,24,"));
        let back = FracQSeries::from_csv(&text, 2, Some(s.order())).unwrap();
        assert_eq!(back.max_diff(&s), 0.0);
        assert_eq!(back.order(), s.order());
        assert!(FracQSeries::from_csv("1,0,1,1", 1, None).is_err());
    }

    #[test]
    fn json_round_trip() {
        let s = FracQSeries::from_terms(1, 8, 40, [(1, c(2.0)), (9, c(-6.0))]).unwrap();
        let j = serde_json::to_string(&SeriesJson::from(&s)).unwrap();
        let back = FracQSeries::try_from(serde_json::from_str::<SeriesJson>(&j).unwrap()).unwrap();
        assert_eq!(back.order(), s.order());
        assert_eq!(back.max_diff(&s), 0.0);
    }

    fn arb_series() -> impl Strategy<Value = FracQSeries> {
        (prop_oneof![Just(1u64), Just(2), Just(3), Just(8)], -3i64..3, prop::collection::vec(-4i32..=4, 1..12)).prop_map(
            |(d, s, cs)| {
                let order = s + 3 * d as i64;
                FracQSeries::from_terms(1, d, order, cs.into_iter().enumerate().map(|(j, v)| (s + j as i64, c(v as f64 * 0.5))))
                    .unwrap()
            },
        )
    }

    proptest! {
        #[test]
        fn mul_commutative_associative(a in arb_series(), b in arb_series(), cc in arb_series()) {
            let ab = a.mul(&b).unwrap();
            prop_assert!(ab.max_diff(&b.mul(&a).unwrap()) <= 1e-12);
            let l = ab.mul(&cc).unwrap();
            let r = a.mul(&b.mul(&cc).unwrap()).unwrap();
            prop_assert_eq!(l.order(), r.order());
            prop_assert!(l.max_diff(&r) <= 1e-12);
        }

        #[test]
        fn inverse_round_trip(a in arb_series()) {
            prop_assume!(!a.is_zero());
            let one = a.mul(&a.inverse().unwrap()).unwrap();
            let want = FracQSeries::one(1, 1000);
            prop_assert!(one.max_diff(&want) <= 1e-9 * a.inverse().unwrap().max_abs().max(1.0));
        }

        #[test]
        fn normalize_preserves_terms(a in arb_series()) {
            let n = a.normalize();
            for (e, v) in n.terms() {
                prop_assert_eq!(a.coeff(e), Some(v));
            }
            prop_assert!(n.order() <= a.order());
        }
    }
}
