//! Eta, theta and discriminant series, plus direct-summation evaluators that
//! share no code with the series arithmetic.

use std::f64::consts::PI;
use std::sync::Mutex;

use num_complex::Complex64;

use crate::error::{Error, Result};

use super::series::FracQSeries;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// `η = q^{1/24} ∏ (1 - qⁿ)` from Euler's pentagonal theorem, exact below `q^{n + 1/24}`.
pub fn eta_series(n: u32) -> FracQSeries {
    let n = n.max(1) as i64;
    let mut terms = vec![(1, c(1.0))];
    for k in 1i64.. {
        let p1 = k * (3 * k - 1) / 2;
        if p1 >= n {
            break;
        }
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        terms.push((24 * p1 + 1, c(sign)));
        let p2 = k * (3 * k + 1) / 2;
        if p2 < n {
            terms.push((24 * p2 + 1, c(sign)));
        }
    }
    FracQSeries::from_terms(1, 24, 24 * n + 1, terms).expect("valid grid")
}

/// `η³ = Σ_{m≥0} (-1)^m (2m+1) q^{(2m+1)²/8}` (Jacobi), exact below `qⁿ`.
pub fn eta_cubed_series(n: u32) -> FracQSeries {
    let order = 8 * n.max(1) as i64;
    let terms = (0i64..)
        .map(|m| ((2 * m + 1) * (2 * m + 1), m))
        .take_while(|(e, _)| *e < order)
        .map(|(e, m)| (e, c(if m % 2 == 0 { 1.0 } else { -1.0 } * (2 * m + 1) as f64)));
    FracQSeries::from_terms(1, 8, order, terms).expect("valid grid")
}

/// `θ₂ = Σ q^{(n+1/2)²/2}`, `θ₃ = Σ q^{n²/2}`, `θ₄ = Σ (-1)ⁿ q^{n²/2}` with
/// `q = e^{2πiτ}`, exact below `qⁿ`.
pub fn theta_series(variant: u8, n: u32) -> Result<FracQSeries> {
    let n = n.max(1) as i64;
    match variant {
        2 => {
            let order = 8 * n;
            let terms = (0i64..)
                .map(|m| (2 * m + 1) * (2 * m + 1))
                .take_while(|e| *e < order)
                .map(|e| (e, c(2.0)));
            FracQSeries::from_terms(1, 8, order, terms)
        }
        3 | 4 => {
            let order = 2 * n;
            let mut terms = vec![(0, c(1.0))];
            for m in (1i64..).take_while(|m| m * m < order) {
                let sign = if variant == 4 && m % 2 == 1 { -1.0 } else { 1.0 };
                terms.push((m * m, c(2.0 * sign)));
            }
            FracQSeries::from_terms(1, 2, order, terms)
        }
        v => Err(Error::Parameter(format!("theta variant must be 2, 3 or 4, got {v}"))),
    }
}

static DELTA_CACHE: Mutex<Vec<i128>> = Mutex::new(Vec::new());

/// `τ(0..=n)` for `Δ = q ∏ (1 - qᵐ)^{24}`, with `τ(0) = 0`.
///
/// Uses `k p_k = -24 Σ_{m=1}^{k} σ(m) p_{k-m}` for `∏ (1 - qᵐ)^{24} = Σ p_k q^k`.
pub fn delta_coefficients(n: usize) -> Vec<i128> {
    let mut cache = DELTA_CACHE.lock().expect("delta cache");
    if cache.len() <= n {
        let len = (n + 1).max(2 * cache.len());
        let mut sigma = vec![0i128; len];
        for d in 1..len {
            for m in (d..len).step_by(d) {
                sigma[m] += d as i128;
            }
        }
        let mut p = vec![0i128; len];
        p[0] = 1;
        for k in 1..len {
            let s: i128 = (1..=k).map(|m| sigma[m] * p[k - m]).sum();
            p[k] = -24 * s / k as i128;
        }
        let mut tau = vec![0i128; len];
        tau[1..].copy_from_slice(&p[..len - 1]);
        *cache = tau;
    }
    cache[..=n].to_vec()
}

/// `Δ` as a series, exact below `qⁿ`.
pub fn delta_series(n: u32) -> FracQSeries {
    let n = n.max(2) as usize;
    let tau = delta_coefficients(n - 1);
    FracQSeries::from_terms(1, 1, n as i64, tau.iter().enumerate().skip(1).map(|(k, &v)| (k as i64, c(v as f64))))
        .expect("valid grid")
}

/// `η(τ) = e^{πiτ/12} ∏ (1 - e^{2πinτ})`, by direct product until the factors are 1.
pub fn eta_product(tau: Complex64) -> Complex64 {
    let q = (Complex64::new(0.0, 2.0 * PI) * tau).exp();
    let mut acc = (Complex64::new(0.0, PI / 12.0) * tau).exp();
    let mut qn = q;
    while qn.norm() > 1e-18 * f64::EPSILON {
        acc *= 1.0 - qn;
        qn *= q;
    }
    acc
}

/// Theta functions by direct summation over `n ∈ ℤ`.
pub fn theta_direct(variant: u8, tau: Complex64) -> Result<Complex64> {
    let shift = match variant {
        2 => 0.5,
        3 | 4 => 0.0,
        v => return Err(Error::Parameter(format!("theta variant must be 2, 3 or 4, got {v}"))),
    };
    let mut acc = Complex64::new(0.0, 0.0);
    for n in -400i64..=400 {
        let x = n as f64 + shift;
        let term = (Complex64::new(0.0, PI) * tau * x * x).exp();
        let sign = if variant == 4 && n % 2 != 0 { -1.0 } else { 1.0 };
        acc += term * sign;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    fn r(a: i64, b: i64) -> Ratio<i64> {
        Ratio::new(a, b)
    }

    const ETA_I: f64 = 0.768_225_422_326_056_7;
    const THETA3_I: f64 = 1.086_434_811_213_308;

    #[test]
    fn eta_coefficients() {
        let eta = eta_series(20);
        let want = [1.0, -1.0, -1.0, 0.0, 0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0];
        for (j, w) in want.iter().enumerate() {
            assert_eq!(eta.coeff(r(1, 24) + r(j as i64, 1)), Some(c(*w)), "j = {j}");
        }
        // ∏(1 - qⁿ) multiplied out naively
        let mut prod = vec![0i64; 20];
        prod[0] = 1;
        for n in 1..20 {
            for k in (n..20).rev() {
                prod[k] -= prod[k - n];
            }
        }
        for (k, v) in prod.iter().enumerate() {
            assert_eq!(eta.coeff(r(24 * k as i64 + 1, 24)), Some(c(*v as f64)));
        }
    }

    #[test]
    fn eta_at_i() {
        // Γ(1/4) / (2 π^{3/4})
        let closed = 3.625_609_908_221_908_3 / (2.0 * PI.powf(0.75));
        assert!((closed - ETA_I).abs() < 1e-15);
        let v = eta_series(30).evaluate(Complex64::new(0.0, 1.0)).unwrap();
        assert!((v.value - c(ETA_I)).norm() < 1e-14);
        assert!(v.tail < 1e-60);
        assert!((eta_product(Complex64::new(0.0, 1.0)) - c(ETA_I)).norm() < 1e-15);
    }

    #[test]
    fn eta_translation_phase() {
        let e = eta_series(30);
        let tau = Complex64::new(0.0, 2.0);
        let ratio = e.evaluate(tau + 1.0).unwrap().value / e.evaluate(tau).unwrap().value;
        assert!((ratio - Complex64::from_polar(1.0, PI / 12.0)).norm() < 1e-14);
    }

    #[test]
    fn theta_leading_terms() {
        let t3 = theta_series(3, 10).unwrap();
        assert_eq!(t3.coeff(r(0, 1)), Some(c(1.0)));
        assert_eq!(t3.coeff(r(1, 2)), Some(c(2.0)));
        let t2 = theta_series(2, 10).unwrap();
        assert_eq!(t2.leading(), Some((r(1, 8), c(2.0))));
        let t4 = theta_series(4, 10).unwrap();
        assert_eq!(t4.coeff(r(1, 2)), Some(c(-2.0)));
        assert!(theta_series(5, 10).is_err());
    }

    #[test]
    fn theta3_at_i() {
        // π^{1/4} / Γ(3/4)
        let closed = PI.powf(0.25) / 1.225_416_702_465_177_6;
        assert!((closed - THETA3_I).abs() < 1e-15);
        let v = theta_series(3, 30).unwrap().evaluate(Complex64::new(0.0, 1.0)).unwrap();
        assert!((v.value - c(THETA3_I)).norm() < 1e-14);
        assert!((theta_direct(3, Complex64::new(0.0, 1.0)).unwrap() - c(THETA3_I)).norm() < 1e-14);
    }

    #[test]
    fn series_match_direct_summation() {
        for tau in [Complex64::new(0.1, 0.8), Complex64::new(-0.4, 1.3), Complex64::new(0.5, 0.3)] {
            for v in [2, 3, 4] {
                let s = theta_series(v, 200).unwrap().evaluate(tau).unwrap().value;
                assert!((s - theta_direct(v, tau).unwrap()).norm() < 1e-13, "θ{v}({tau})");
            }
            let s = eta_series(200).evaluate(tau).unwrap().value;
            assert!((s - eta_product(tau)).norm() < 1e-13);
        }
    }

    #[test]
    fn jacobi_identity() {
        let e = eta_series(60);
        let cube = e.mul(&e).unwrap().mul(&e).unwrap();
        assert!(cube.max_diff(&eta_cubed_series(60)) == 0.0);
        // θ₂ θ₃ θ₄ = 2 η³
        let prod = theta_series(2, 60).unwrap().mul(&theta_series(3, 60).unwrap()).unwrap().mul(&theta_series(4, 60).unwrap()).unwrap();
        assert!(prod.max_diff(&eta_cubed_series(60).scale(c(2.0))) < 1e-9);
    }

    #[test]
    fn ramanujan_tau() {
        let t = delta_coefficients(10);
        assert_eq!(&t[1..], &[1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920]);
        let big = delta_coefficients(400);
        // multiplicativity and the Hecke relation at primes
        assert_eq!(big[6], big[2] * big[3]);
        assert_eq!(big[391], big[17] * big[23]);
        assert_eq!(big[4], big[2] * big[2] - 2i128.pow(11));
        assert_eq!(big[343], big[7] * big[49] - 7i128.pow(11) * big[7]);
        // η²⁴ from series arithmetic
        let eta24 = eta_series(40).pow(24).unwrap();
        let d = delta_series(40);
        assert!(eta24.normalize().max_diff(&d) == 0.0);
    }
}
