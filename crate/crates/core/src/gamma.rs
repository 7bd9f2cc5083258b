//! Complex Gamma function (Lanczos approximation, g = 7, nine terms) with
//! reflection into the left half-plane.

use std::f64::consts::PI;

use num_complex::Complex64;

const G: f64 = 7.0;
const COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Principal branch of `ln Γ(z)` up to multiples of `2πi`; suitable for `exp`.
pub fn ln_gamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // Γ(z) Γ(1-z) = π / sin(πz)
        let s = (z * PI).sin();
        return Complex64::new(PI.ln(), 0.0) - s.ln() - ln_gamma(Complex64::new(1.0, 0.0) - z);
    }
    let z = z - 1.0;
    let mut acc = Complex64::new(COEFFS[0], 0.0);
    for (k, &p) in COEFFS.iter().enumerate().skip(1) {
        acc += p / (z + k as f64);
    }
    let t = z + G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + acc.ln()
}

pub fn gamma(z: Complex64) -> Complex64 {
    ln_gamma(z).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn factorials() {
        let mut f = 1.0;
        for n in 1..15 {
            let g = gamma(c(n as f64, 0.0));
            assert!((g.re - f).abs() / f < 1e-13, "Γ({n}) = {g}");
            assert!(g.im.abs() / f < 1e-13);
            f *= n as f64;
        }
    }

    #[test]
    fn half_integer() {
        let g = gamma(c(0.5, 0.0));
        assert!((g.re - PI.sqrt()).abs() < 1e-14);
        // Γ(1/4) and Γ(3/4) reference constants
        assert!((gamma(c(0.25, 0.0)).re - 3.625_609_908_221_908_3).abs() < 1e-13);
        assert!((gamma(c(0.75, 0.0)).re - 1.225_416_702_465_177_6).abs() < 1e-13);
    }

    #[test]
    fn recurrence_on_complex_grid() {
        for re in [-2.7, -0.3, 0.2, 1.0, 3.5, 6.0, 11.0] {
            for im in [-5.0, -1.0, 0.5, 3.0, 8.0] {
                let z = c(re, im);
                let lhs = gamma(z + 1.0);
                let rhs = z * gamma(z);
                assert!((lhs - rhs).norm() <= 1e-12 * lhs.norm(), "z = {z}");
            }
        }
    }

    #[test]
    fn modulus_on_imaginary_line() {
        // |Γ(1 + iy)|² = πy / sinh(πy)
        for y in [0.5, 2.0, 3.0] {
            let g = gamma(c(1.0, y));
            let exact = PI * y / (PI * y).sinh();
            assert!((g.norm_sqr() - exact).abs() < 1e-13 * exact);
        }
    }

    #[test]
    fn conjugate_symmetry() {
        let z = c(6.0, 3.0);
        assert!((gamma(z) - gamma(z.conj()).conj()).norm() < 1e-12 * gamma(z).norm());
    }
}
