//! Minimal multiprecision complex arithmetic on top of `astro-float`, used
//! where double precision loses all significant digits (coefficient
//! extraction at large heights).

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_complex::Complex64;

const RM: RoundingMode = RoundingMode::ToEven;

/// Working context: precision in bits plus the constant cache.
pub struct MpContext {
    pub prec: usize,
    consts: Consts,
}

impl MpContext {
    pub fn new(prec: usize) -> Self {
        Self { prec, consts: Consts::new().expect("constant cache") }
    }

    pub fn real(&self, x: f64) -> BigFloat {
        BigFloat::from_f64(x, self.prec)
    }

    pub fn int(&self, n: i64) -> BigFloat {
        BigFloat::from_i64(n, self.prec)
    }

    pub fn ratio(&self, num: i64, den: i64) -> BigFloat {
        self.int(num).div(&self.int(den), self.prec, RM)
    }

    pub fn pi(&mut self) -> BigFloat {
        self.consts.pi(self.prec, RM)
    }

    pub fn exp(&mut self, x: &BigFloat) -> BigFloat {
        x.exp(self.prec, RM, &mut self.consts)
    }

    pub fn sin_cos(&mut self, x: &BigFloat) -> (BigFloat, BigFloat) {
        (x.sin(self.prec, RM, &mut self.consts), x.cos(self.prec, RM, &mut self.consts))
    }

    pub fn to_f64(&mut self, x: &BigFloat) -> f64 {
        if x.is_zero() {
            return 0.0;
        }
        x.format(Radix::Dec, RM, &mut self.consts)
            .ok()
            .and_then(|s| s.parse::<f64>().ok())
            .unwrap_or(f64::NAN)
    }

    pub fn add(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, self.prec, RM)
    }

    pub fn sub(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.sub(b, self.prec, RM)
    }

    pub fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, self.prec, RM)
    }

    pub fn div(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.div(b, self.prec, RM)
    }
}

#[derive(Clone, Debug)]
pub struct MpComplex {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl MpComplex {
    pub fn zero(ctx: &MpContext) -> Self {
        Self { re: ctx.int(0), im: ctx.int(0) }
    }

    pub fn from_c64(ctx: &MpContext, z: Complex64) -> Self {
        Self { re: ctx.real(z.re), im: ctx.real(z.im) }
    }

    pub fn add(&self, ctx: &MpContext, o: &Self) -> Self {
        Self { re: ctx.add(&self.re, &o.re), im: ctx.add(&self.im, &o.im) }
    }

    pub fn mul(&self, ctx: &MpContext, o: &Self) -> Self {
        let re = ctx.sub(&ctx.mul(&self.re, &o.re), &ctx.mul(&self.im, &o.im));
        let im = ctx.add(&ctx.mul(&self.re, &o.im), &ctx.mul(&self.im, &o.re));
        Self { re, im }
    }

    pub fn scale(&self, ctx: &MpContext, k: &BigFloat) -> Self {
        Self { re: ctx.mul(&self.re, k), im: ctx.mul(&self.im, k) }
    }

    /// `exp(self)`.
    pub fn exp(&self, ctx: &mut MpContext) -> Self {
        let m = ctx.exp(&self.re);
        let (s, c) = ctx.sin_cos(&self.im);
        Self { re: ctx.mul(&m, &c), im: ctx.mul(&m, &s) }
    }

    pub fn to_c64(&self, ctx: &mut MpContext) -> Complex64 {
        Complex64::new(ctx.to_f64(&self.re), ctx.to_f64(&self.im))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn euler_identity() {
        let mut ctx = MpContext::new(256);
        let pi = ctx.pi();
        let z = MpComplex { re: ctx.int(0), im: pi };
        let e = z.exp(&mut ctx).to_c64(&mut ctx);
        assert!((e.re + 1.0).abs() < 1e-15);
        assert!(e.im.abs() < 1e-60);
    }

    #[test]
    fn keeps_digits_lost_in_f64() {
        let mut ctx = MpContext::new(256);
        let big = ctx.real(1e40);
        let one = ctx.int(1);
        let diff = ctx.sub(&ctx.add(&big, &one), &big);
        assert_eq!(ctx.to_f64(&diff), 1.0);
    }
}
