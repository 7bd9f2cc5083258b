//! Ordinary least-squares line fits used by the growth harnesses.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual.
    pub residual: f64,
    pub samples: usize,
}

/// Fits `y ≈ slope·x + intercept`. Returns `None` for fewer than two points.
/// A degenerate abscissa (all `x` equal) gets slope 0.
pub fn least_squares(points: &[(f64, f64)]) -> Option<LineFit> {
    let n = points.len();
    if n < 2 {
        return None;
    }
    let nf = n as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / nf;
    let my = points.iter().map(|p| p.1).sum::<f64>() / nf;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let ss: f64 = points.iter().map(|p| (p.1 - slope * p.0 - intercept).powi(2)).sum();
    Some(LineFit { slope, intercept, residual: (ss / nf).sqrt(), samples: n })
}

/// Log-log fit of `(x, y)` pairs, skipping non-positive values.
pub fn log_log(points: impl IntoIterator<Item = (f64, f64)>) -> Option<LineFit> {
    let pts: Vec<(f64, f64)> = points
        .into_iter()
        .filter(|&(x, y)| x > 0.0 && y > 0.0 && y.is_finite())
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    least_squares(&pts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line() {
        let pts: Vec<_> = (0..10).map(|i| (i as f64, 3.0 * i as f64 - 2.0)).collect();
        let f = least_squares(&pts).unwrap();
        assert!((f.slope - 3.0).abs() < 1e-12);
        assert!((f.intercept + 2.0).abs() < 1e-12);
        assert!(f.residual < 1e-12);
    }

    #[test]
    fn power_law() {
        let f = log_log((1..50).map(|n| (n as f64, 5.0 * (n as f64).powf(2.5)))).unwrap();
        assert!((f.slope - 2.5).abs() < 1e-12);
    }

    #[test]
    fn constant_abscissa() {
        let f = least_squares(&[(1.0, 2.0), (1.0, 3.0)]).unwrap();
        assert_eq!(f.slope, 0.0);
        assert!(least_squares(&[(1.0, 1.0)]).is_none());
    }
}
