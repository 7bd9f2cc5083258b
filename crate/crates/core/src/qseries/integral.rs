//! Fourier coefficients by the trapezoid rule on a horizontal segment:
//! `c_ν = (1/(Ph)) ∫₀^{Ph} f(x+iy) e^{-2πiν(x+iy)/h} dx` with `ν = n + μ`.
//!
//! The rule is exact for trigonometric polynomials whose frequency range is
//! below the sample count. Recovering `c_ν` multiplies by `e^{2πνy/h}`, so
//! double precision only works at small heights; [`coefficient_integrals_mp`]
//! keeps enough digits for any height.

use std::f64::consts::PI;

use astro_float::BigFloat;
use num_complex::Complex64;
use num_rational::Ratio;

use crate::mp::{MpComplex, MpContext};

use super::series::FracQSeries;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegralSpec {
    /// Cusp width `h`.
    pub width: u64,
    /// Offset `μ` added to every `n`.
    pub mu: Ratio<i64>,
    /// Height `y` of the segment.
    pub y: f64,
    /// Number of trapezoid nodes.
    pub samples: usize,
    /// Integrate over `P` periods, for functions whose exponents lie in `μ + ℤ/P`.
    pub period: u64,
}

impl IntegralSpec {
    pub fn new(y: f64, samples: usize) -> Self {
        Self { width: 1, mu: Ratio::from_integer(0), y, samples, period: 1 }
    }

    pub fn with_mu(self, mu: Ratio<i64>) -> Self {
        Self { mu, ..self }
    }

    pub fn with_period(self, period: u64) -> Self {
        Self { period, ..self }
    }

    fn nodes(&self) -> impl Iterator<Item = Complex64> + '_ {
        let len = (self.period * self.width) as f64;
        (0..self.samples).map(move |k| Complex64::new(len * k as f64 / self.samples as f64, self.y))
    }
}

fn ratio_f64(r: Ratio<i64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Coefficients `c_{n+μ}` for every `n` in `ns`, from one set of samples.
pub fn coefficient_integrals<F: Fn(Complex64) -> Complex64>(f: F, spec: &IntegralSpec, ns: &[i64]) -> Vec<Complex64> {
    let values: Vec<(Complex64, Complex64)> = spec.nodes().map(|z| (z, f(z))).collect();
    let h = spec.width as f64;
    ns.iter()
        .map(|&n| {
            let nu = n as f64 + ratio_f64(spec.mu);
            let k = Complex64::new(0.0, -2.0 * PI * nu / h);
            let sum: Complex64 = values.iter().map(|(z, v)| v * (k * z).exp()).sum();
            sum / spec.samples as f64
        })
        .collect()
}

pub fn coefficient_integral<F: Fn(Complex64) -> Complex64>(f: F, spec: &IntegralSpec, n: i64) -> Complex64 {
    coefficient_integrals(f, spec, &[n])[0]
}

/// A function that can be evaluated in multiprecision.
pub trait MpEvaluate {
    fn eval_mp(&self, ctx: &mut MpContext, tau: &MpComplex) -> MpComplex;
}

/// `Σ c e^{2πi e τ/h}` over the stored terms.
impl MpEvaluate for FracQSeries {
    fn eval_mp(&self, ctx: &mut MpContext, tau: &MpComplex) -> MpComplex {
        let pi = ctx.pi();
        let two_pi_over_h = ctx.div(&ctx.mul(&ctx.int(2), &pi), &ctx.int(self.width() as i64));
        let mut acc = MpComplex::zero(ctx);
        for (e, c) in self.terms() {
            let k = ctx.mul(&two_pi_over_h, &ctx.ratio(*e.numer(), *e.denom()));
            // 2πi e τ/h = k(-Im τ) + i k Re τ
            let arg = MpComplex { re: ctx.sub(&ctx.int(0), &ctx.mul(&k, &tau.im)), im: ctx.mul(&k, &tau.re) };
            let term = arg.exp(ctx).mul(ctx, &MpComplex::from_c64(ctx, c));
            acc = acc.add(ctx, &term);
        }
        acc
    }
}

/// `η(τ) = e^{πiτ/12} ∏_{n=1}^{factors} (1 - e^{2πinτ})` in multiprecision.
#[derive(Clone, Copy, Debug)]
pub struct MpEtaProduct {
    pub factors: usize,
}

impl MpEvaluate for MpEtaProduct {
    fn eval_mp(&self, ctx: &mut MpContext, tau: &MpComplex) -> MpComplex {
        let pi = ctx.pi();
        let two_pi = ctx.mul(&ctx.int(2), &pi);
        let i_two_pi_tau = MpComplex { re: ctx.sub(&ctx.int(0), &ctx.mul(&two_pi, &tau.im)), im: ctx.mul(&two_pi, &tau.re) };
        let q = i_two_pi_tau.exp(ctx);
        let mut acc = i_two_pi_tau.scale(ctx, &ctx.ratio(1, 24)).exp(ctx);
        let one = MpComplex { re: ctx.int(1), im: ctx.int(0) };
        let minus_one = ctx.int(-1);
        let mut qn = q.clone();
        for _ in 0..self.factors {
            let factor = one.add(ctx, &qn.scale(ctx, &minus_one));
            acc = acc.mul(ctx, &factor);
            qn = qn.mul(ctx, &q);
        }
        acc
    }
}

/// Multiprecision version of [`coefficient_integrals`] with `prec` bits.
pub fn coefficient_integrals_mp<F: MpEvaluate + ?Sized>(f: &F, spec: &IntegralSpec, ns: &[i64], prec: usize) -> Vec<Complex64> {
    let mut ctx = MpContext::new(prec);
    let len = ctx.int((spec.period * spec.width) as i64);
    let y = ctx.real(spec.y);
    let t = ctx.int(spec.samples as i64);
    let nodes: Vec<(BigFloat, MpComplex)> = (0..spec.samples)
        .map(|k| {
            let x = ctx.div(&ctx.mul(&len, &ctx.int(k as i64)), &t);
            let tau = MpComplex { re: x.clone(), im: y.clone() };
            let v = f.eval_mp(&mut ctx, &tau);
            (x, v)
        })
        .collect();
    let pi = ctx.pi();
    let two_pi_over_h = ctx.div(&ctx.mul(&ctx.int(2), &pi), &ctx.int(spec.width as i64));
    ns.iter()
        .map(|&n| {
            let nu = Ratio::from_integer(n) + spec.mu;
            let k = ctx.mul(&two_pi_over_h, &ctx.ratio(*nu.numer(), *nu.denom()));
            // e^{-2πiν(x+iy)/h} = e^{kνy} e^{-ikνx}
            let mut acc = MpComplex::zero(&ctx);
            for (x, v) in &nodes {
                let arg = MpComplex { re: ctx.mul(&k, &y), im: ctx.sub(&ctx.int(0), &ctx.mul(&k, x)) };
                let e = arg.exp(&mut ctx);
                acc = acc.add(&ctx, &v.mul(&ctx, &e));
            }
            let inv_t = ctx.div(&ctx.int(1), &t);
            acc.scale(&ctx, &inv_t).to_c64(&mut ctx)
        })
        .collect()
}
