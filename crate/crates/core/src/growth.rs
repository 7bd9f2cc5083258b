//! Empirical checks of the coefficient growth, sup-norm, vanishing,
//! converse-growth and mean-square statements.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fit::{log_log, LineFit};
use crate::moebius::{self, GroupElement};
use crate::qseries::Vvaf;
use crate::repr::{frobenius, CMatrix, GrowthFit, Representation};

pub const SLOPE_SLACK: f64 = 0.15;
pub const RATIO_SLACK: f64 = 10.0;
pub const MEANSQ_SLACK: f64 = 0.3;
pub const VANISH_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Degenerate,
}

impl Verdict {
    pub fn is_fail(self) -> bool {
        self == Verdict::Fail
    }
}

/// Which half of the growth theorem supplies the target exponent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Bound {
    /// `k + 2α`, holomorphic forms.
    Holomorphic,
    /// `k/2 + α`, cusp forms.
    Cusp,
}

impl Bound {
    pub fn from_flags(x: &Vvaf) -> Result<Self> {
        let f = x.flags();
        if f.cusp_form {
            Ok(Bound::Cusp)
        } else if f.holomorphic {
            Ok(Bound::Holomorphic)
        } else {
            Err(Error::Parameter(format!("{} is not holomorphic at the cusp", x.name())))
        }
    }

    pub fn exponent(self, k: f64, alpha: f64) -> f64 {
        match self {
            Bound::Holomorphic => k + 2.0 * alpha,
            Bound::Cusp => k / 2.0 + alpha,
        }
    }
}

/// The `α` fed to the targets: the fitted value, and the value raised by the
/// dimension that the logarithmic estimates carry.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct AlphaChoice {
    pub alpha_emp: f64,
    pub alpha_log: f64,
    /// True when `alpha_log` drives the verdict.
    pub logarithmic: bool,
}

impl AlphaChoice {
    pub fn new(x: &Vvaf, alpha_emp: f64) -> Self {
        Self { alpha_emp, alpha_log: alpha_emp + x.rep().dim() as f64, logarithmic: x.is_logarithmic() }
    }

    pub fn from_fit(x: &Vvaf, fit: &GrowthFit) -> Self {
        Self::new(x, if fit.unitary { 0.0 } else { fit.alpha_emp })
    }

    pub fn used(&self) -> f64 {
        if self.logarithmic {
            self.alpha_log
        } else {
            self.alpha_emp
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct CoefficientNorm {
    pub n: i64,
    /// Largest modulus over components (and log slots).
    pub max_abs: f64,
    /// Euclidean norm over components (and log slots).
    pub l2: f64,
}

/// Norms of the coefficient vectors for `n ≤ n_max`, in the diagonal basis for
/// admissible forms. For logarithmic forms every `(component, log power)` slot
/// with exponent in `[n, n+1)` contributes to index `n`.
pub fn coefficient_norms(x: &Vvaf, n_max: i64) -> Result<Vec<CoefficientNorm>> {
    if !x.is_logarithmic() && x.jordan().is_diagonal() {
        return Ok(x
            .fourier_coefficients(n_max)?
            .into_iter()
            .map(|c| CoefficientNorm {
                n: c.n,
                max_abs: c.max_norm(),
                l2: c.values.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt(),
            })
            .collect());
    }
    let complete = x.truncation_order().floor().to_integer().min(n_max + 1);
    let mut buckets: BTreeMap<i64, (f64, f64)> = BTreeMap::new();
    for comp in x.components() {
        for (_, s) in comp.terms() {
            for (e, c) in s.terms() {
                let n = e.floor().to_integer();
                if n < complete {
                    let b = buckets.entry(n).or_default();
                    b.0 = b.0.max(c.norm());
                    b.1 += c.norm_sqr();
                }
            }
        }
    }
    let Some((&lo, _)) = buckets.first_key_value() else { return Ok(Vec::new()) };
    Ok((lo..complete)
        .map(|n| {
            let (m, s) = buckets.get(&n).copied().unwrap_or_default();
            CoefficientNorm { n, max_abs: m, l2: s.sqrt() }
        })
        .collect())
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct GrowthSample {
    pub n: i64,
    pub norm: f64,
    pub bound: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct GrowthReport {
    pub name: String,
    pub bound: Bound,
    pub weight: i32,
    pub alpha: AlphaChoice,
    /// Target exponent under `alpha.used()`.
    pub target: f64,
    pub target_admissible: f64,
    pub target_logarithmic: f64,
    pub range: [i64; 2],
    pub fit: Option<LineFit>,
    pub beta_emp: Option<f64>,
    /// Largest `‖c_n‖ / n^target` over the top half of the range.
    pub max_ratio: f64,
    /// Largest `‖c_n‖ / n^target` over the lower half of the range.
    pub start_ratio: f64,
    pub samples: Vec<GrowthSample>,
    pub verdict: Verdict,
}

impl GrowthReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,norm,bound\n");
        for s in &self.samples {
            out.push_str(&format!("{},{:e},{:e}\n", s.n, s.norm, s.bound));
        }
        out
    }
}

/// Slope and drift test of `max_i |c_{i,n}|` over `n ∈ [N/2, N]`.
pub fn coefficient_growth_report(x: &Vvaf, n: i64, alpha: AlphaChoice, bound: Option<Bound>) -> Result<GrowthReport> {
    let bound = match bound {
        Some(b) => b,
        None => Bound::from_flags(x)?,
    };
    let k = x.weight() as f64;
    let norms = coefficient_norms(x, n)?;
    let available = norms.last().map_or(x.truncation_order().ceil().to_integer() - 1, |c| c.n);
    if available < n {
        return Err(Error::Series(format!("coefficients are known only up to n = {available}, requested {n}")));
    }
    let lo = (n / 2).max(1);
    let pts: Vec<(i64, f64)> = norms.iter().filter(|c| c.n >= lo && c.n <= n).map(|c| (c.n, c.max_abs)).collect();
    let target = bound.exponent(k, alpha.used());
    let fit = log_log(pts.iter().filter(|(_, v)| *v > 0.0).map(|&(m, v)| (m as f64, v)));
    let split = lo + (n - lo) / 2;
    let ratio = |(m, v): (i64, f64)| v / (m as f64).powf(target);
    let start_ratio = pts.iter().filter(|p| p.0 < split).map(|&p| ratio(p)).fold(0.0, f64::max);
    let max_ratio = pts.iter().filter(|p| p.0 >= split).map(|&p| ratio(p)).fold(0.0, f64::max);
    let verdict = match &fit {
        None => Verdict::Degenerate,
        Some(f) if max_ratio <= RATIO_SLACK * start_ratio && f.slope <= target + SLOPE_SLACK => Verdict::Pass,
        Some(_) => Verdict::Fail,
    };
    let samples =
        pts.iter().map(|&(m, v)| GrowthSample { n: m, norm: v, bound: start_ratio * (m as f64).powf(target) }).collect();
    Ok(GrowthReport {
        name: x.name().to_string(),
        bound,
        weight: x.weight(),
        alpha,
        target,
        target_admissible: bound.exponent(k, alpha.alpha_emp),
        target_logarithmic: bound.exponent(k, alpha.alpha_log),
        range: [lo, n],
        beta_emp: fit.as_ref().map(|f| f.slope),
        fit,
        max_ratio,
        start_ratio,
        samples,
        verdict,
    })
}

/// Points `x + iy` with `x` evenly spaced in `[0, h)` and `y` log-spaced in `[y_min, y_max]`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct StripGrid {
    pub nx: usize,
    pub ny: usize,
    pub y_min: f64,
    pub y_max: f64,
}

impl Default for StripGrid {
    fn default() -> Self {
        Self { nx: 40, ny: 40, y_min: 0.05, y_max: 10.0 }
    }
}

impl StripGrid {
    pub fn points(&self, width: f64) -> Vec<Complex64> {
        let ly = (self.y_min.ln(), self.y_max.ln());
        let mut out = Vec::with_capacity(self.nx * self.ny);
        for iy in 0..self.ny {
            let t = if self.ny > 1 { iy as f64 / (self.ny - 1) as f64 } else { 0.0 };
            let y = (ly.0 + t * (ly.1 - ly.0)).exp();
            for ix in 0..self.nx {
                out.push(Complex64::new(width * ix as f64 / self.nx as f64, y));
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SupNormReport {
    pub exponent: f64,
    pub max: f64,
    /// Maximum over `y < 1`.
    pub max_low: f64,
    /// Maximum over `y ≥ 1`.
    pub max_high: f64,
    pub verdict: Verdict,
}

/// `max y^e ‖X(τ)‖` over the grid, with boundedness judged by comparing `y < 1` to `y ≥ 1`.
pub fn supnorm_scan(x: &Vvaf, grid: &StripGrid, e: f64) -> Result<SupNormReport> {
    let width = moebius::cusp_width(x.rep().group(), moebius::Cusp::Infinity)? as f64;
    let mut low: f64 = 0.0;
    let mut high: f64 = 0.0;
    for tau in grid.points(width) {
        let v = x.evaluate(tau)?;
        let w = tau.im.powf(e) * v.value.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if tau.im < 1.0 {
            low = low.max(w);
        } else {
            high = high.max(w);
        }
    }
    let verdict = if low <= RATIO_SLACK * high { Verdict::Pass } else { Verdict::Fail };
    Ok(SupNormReport { exponent: e, max: low.max(high), max_low: low, max_high: high, verdict })
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct VanishingDecision {
    /// `k + 2α < 0`.
    pub active: bool,
    pub max_norm: f64,
    pub consistent: bool,
}

/// When `k + 2α < 0` a holomorphic form must vanish; checks a candidate on the grid.
pub fn vanishing_check<F>(k: f64, alpha: f64, candidate: Option<F>, points: &[Complex64]) -> Result<VanishingDecision>
where
    F: Fn(Complex64) -> Result<Vec<Complex64>>,
{
    let active = k + 2.0 * alpha < 0.0;
    let mut max_norm: f64 = 0.0;
    if let (true, Some(f)) = (active, candidate) {
        for &tau in points {
            let v = f(tau)?;
            max_norm = max_norm.max(v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt());
        }
    }
    Ok(VanishingDecision { active, max_norm, consistent: !active || max_norm < VANISH_TOL })
}

#[derive(Clone, Debug, Serialize)]
pub struct MeanSquareReport {
    pub bound: Bound,
    /// `(M, Σ_{n≤M} ‖c_n‖²)`.
    pub partial_sums: Vec<(i64, f64)>,
    pub fit: Option<LineFit>,
    pub slope: Option<f64>,
    pub target: f64,
    pub verdict: Verdict,
}

impl MeanSquareReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,partial_sum\n");
        for (m, s) in &self.partial_sums {
            out.push_str(&format!("{m},{s:e}\n"));
        }
        out
    }
}

/// Partial sums of `‖c_n‖²` up to `N`, slope fitted over `M ∈ [N/2, N]`.
/// The target is `k + 2α` for cusp forms and `2k + 4α` otherwise.
pub fn mean_square(x: &Vvaf, n: i64, alpha: AlphaChoice) -> Result<MeanSquareReport> {
    let bound = Bound::from_flags(x)?;
    let k = x.weight() as f64;
    let a = alpha.used();
    let target = match bound {
        Bound::Cusp => k + 2.0 * a,
        Bound::Holomorphic => 2.0 * k + 4.0 * a,
    };
    let mut acc = 0.0;
    let partial_sums: Vec<(i64, f64)> = coefficient_norms(x, n)?
        .into_iter()
        .map(|c| {
            acc += c.l2 * c.l2;
            (c.n, acc)
        })
        .collect();
    let lo = (n / 2).max(1);
    let fit = log_log(partial_sums.iter().filter(|(m, s)| *m >= lo && *s > 0.0).map(|&(m, s)| (m as f64, s)));
    let verdict = match &fit {
        None => Verdict::Degenerate,
        Some(f) if f.slope <= target + MEANSQ_SLACK => Verdict::Pass,
        Some(_) => Verdict::Fail,
    };
    Ok(MeanSquareReport { bound, slope: fit.as_ref().map(|f| f.slope), fit, partial_sums, target, verdict })
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ConverseConfig {
    pub weight: i32,
    pub zeta: f64,
    /// Use the bound `max_j ‖γ‖^{j + 2ζ - k}`, `j < m`.
    pub logarithmic: bool,
    pub seed: u64,
    pub samples: usize,
    pub max_entry: i64,
    pub grid: StripGrid,
    /// Relative tolerance of the functional-equation pre-check.
    pub fe_tol: f64,
}

impl ConverseConfig {
    pub fn new(weight: i32, zeta: f64) -> Self {
        Self {
            weight,
            zeta,
            logarithmic: false,
            seed: 1,
            samples: 200,
            max_entry: 200,
            grid: StripGrid { nx: 10, ny: 10, y_min: 0.2, y_max: 5.0 },
            fe_tol: 1e-8,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConverseReport {
    pub fe_residual: f64,
    /// Sup of `‖X‖ y^ζ / max_j |τ|^j` over `y < 1` divided by that over `y ≥ 1`.
    pub zeta_ratio: f64,
    pub zeta_ok: bool,
    pub nonzero: bool,
    pub exponent: f64,
    /// Largest `‖ρ(γ)‖ / ‖γ‖^exponent` over the smallest tenth of the samples.
    pub constant: f64,
    pub samples: usize,
    pub violations: usize,
    /// Largest ratio divided by `constant`.
    pub max_excess: f64,
    pub seed: u64,
    pub pass: bool,
}

fn sample_group(rep: &Representation, cfg: &ConverseConfig) -> Vec<(GroupElement, CMatrix)> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut out = Vec::with_capacity(cfg.samples);
    let mut tries = 0;
    while out.len() < cfg.samples && tries < 50 * cfg.samples.max(1) {
        tries += 1;
        let g = moebius::random_element(&mut rng, cfg.max_entry);
        if let Ok(m) = rep.evaluate(&g) {
            out.push((g, m));
        }
    }
    out
}

/// Checks `‖ρ(γ)‖ ≤ C ‖γ‖^{2ζ - k}` on sampled `γ` after verifying that `X`
/// transforms under `ρ` and decays like `y^{-ζ}` on a strip.
pub fn converse_growth_check<F>(x: F, rep: &Representation, cfg: &ConverseConfig) -> Result<ConverseReport>
where
    F: Fn(Complex64) -> Result<Vec<Complex64>>,
{
    let k = cfg.weight;
    let m = rep.dim();
    let pts = cfg.grid.points(1.0);
    let norm = |v: &[Complex64]| v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();

    let gens: Vec<GroupElement> = if rep.group().is_full() {
        vec![GroupElement::s(), GroupElement::t()]
    } else {
        rep.parabolic_generators()?.into_iter().map(|(_, _, g)| g).collect()
    };
    let mut fe_residual: f64 = 0.0;
    let mut nonzero = false;
    for g in &gens {
        let rho = rep.evaluate(g)?;
        for &tau in pts.iter().step_by(7) {
            let moebius::Point::Finite(gt) = g.apply(moebius::Point::Finite(tau)) else { continue };
            let lhs = x(gt)?;
            let rhs = x(tau)?;
            nonzero |= norm(&rhs) > 0.0;
            let j = g.j_factor(tau).powi(-k);
            let rx = &rho * nalgebra::DVector::from_vec(rhs.clone());
            let diff: Vec<Complex64> = lhs.iter().zip(rx.iter()).map(|(a, b)| j * a - b).collect();
            let scale = norm(&rhs).max(norm(&lhs) * j.norm()).max(f64::MIN_POSITIVE);
            fe_residual = fe_residual.max(norm(&diff) / scale);
        }
    }
    if fe_residual > cfg.fe_tol {
        return Err(Error::FunctionalEquation(fe_residual));
    }

    let jmax = if cfg.logarithmic { m as i32 - 1 } else { 0 };
    let mut low: f64 = 0.0;
    let mut high: f64 = 0.0;
    for &tau in &pts {
        let v = x(tau)?;
        let w = norm(&v) * tau.im.powf(cfg.zeta) / tau.norm().max(1.0).powi(jmax);
        if tau.im < 1.0 {
            low = low.max(w);
        } else {
            high = high.max(w);
        }
    }
    let zeta_ratio = if high > 0.0 { low / high } else if low > 0.0 { f64::INFINITY } else { 0.0 };

    let exponent = jmax as f64 + 2.0 * cfg.zeta - k as f64;
    let mut ratios: Vec<(f64, f64)> = sample_group(rep, cfg)
        .into_iter()
        .map(|(g, r)| {
            let gn = g.norm();
            (gn, frobenius(&r) / gn.powf(exponent))
        })
        .collect();
    ratios.sort_by(|a, b| a.0.total_cmp(&b.0));
    let head = (ratios.len() / 10).max(1).min(ratios.len());
    let constant = ratios[..head].iter().map(|r| r.1).fold(0.0, f64::max);
    let max_ratio = ratios.iter().map(|r| r.1).fold(0.0, f64::max);
    let violations = ratios.iter().filter(|r| !(r.1 <= constant * (1.0 + 1e-9))).count();
    let zeta_ok = zeta_ratio <= RATIO_SLACK;
    Ok(ConverseReport {
        fe_residual,
        zeta_ratio,
        zeta_ok,
        nonzero,
        exponent,
        constant,
        samples: ratios.len(),
        violations,
        max_excess: if constant > 0.0 { max_ratio / constant } else { f64::INFINITY },
        seed: cfg.seed,
        pass: violations == 0 && zeta_ok,
    })
}

/// Runs [`converse_growth_check`] on each diagonal block of a block-diagonal `ρ`.
pub fn converse_growth_check_blocks<F>(
    x: F,
    rep: &Representation,
    blocks: &[usize],
    cfg: &ConverseConfig,
) -> Result<Vec<ConverseReport>>
where
    F: Fn(Complex64) -> Result<Vec<Complex64>>,
{
    if blocks.iter().sum::<usize>() != rep.dim() {
        return Err(Error::Dimension(format!("block sizes {blocks:?} do not add up to {}", rep.dim())));
    }
    let mut out = Vec::with_capacity(blocks.len());
    let mut start = 0;
    for &b in blocks {
        let range = start..start + b;
        for mat in [rep.mat_s(), rep.mat_t()] {
            for i in 0..rep.dim() {
                for j in 0..rep.dim() {
                    if range.contains(&i) != range.contains(&j) && mat[(i, j)].norm() > 1e-12 {
                        return Err(Error::Dimension("representation is not block diagonal".into()));
                    }
                }
            }
        }
        let sub = Representation::new(
            rep.mat_s().view((start, start), (b, b)).into_owned(),
            rep.mat_t().view((start, start), (b, b)).into_owned(),
        )?;
        let r = range.clone();
        out.push(converse_growth_check(|tau| Ok(x(tau)?[r.clone()].to_vec()), &sub, cfg)?);
        start += b;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::{FracQSeries, LogQExpansion};
    use crate::repr::{self, SamplerConfig};
    use num_rational::Ratio;

    fn zero_form() -> Vvaf {
        let z = LogQExpansion::pure(FracQSeries::zero(1, Ratio::from_integer(200)));
        Vvaf::assemble("zero", repr::trivial(), 12, vec![z]).unwrap()
    }

    fn alpha0(x: &Vvaf) -> AlphaChoice {
        AlphaChoice::new(x, 0.0)
    }

    #[test]
    fn delta_growth() {
        let d = Vvaf::builtin("delta", 2001).unwrap();
        let r = coefficient_growth_report(&d, 2000, alpha0(&d), None).unwrap();
        assert_eq!(r.bound, Bound::Cusp);
        assert_eq!(r.target, 6.0);
        assert!(r.beta_emp.unwrap() <= 6.1, "{:?}", r.fit);
        assert_eq!(r.verdict, Verdict::Pass);
        let h = coefficient_growth_report(&d, 2000, alpha0(&d), Some(Bound::Holomorphic)).unwrap();
        assert_eq!(h.target, 12.0);
        assert_eq!(h.verdict, Verdict::Pass);
        assert!(r.to_csv().starts_with("n,norm,bound\n1000,"));
    }

    #[test]
    fn eta4_growth() {
        let x = Vvaf::builtin("eta4-theta-eta", 2001).unwrap();
        let fit = x.rep().growth_exponent(&SamplerConfig::default()).unwrap();
        assert!(fit.unitary);
        let alpha = AlphaChoice::from_fit(&x, &fit);
        assert_eq!(alpha.used(), 0.0);
        assert_eq!(alpha.alpha_log, 3.0);
        let r = coefficient_growth_report(&x, 2000, alpha, None).unwrap();
        assert!(r.beta_emp.unwrap() <= 1.1, "{:?}", r.fit);
        assert_eq!(r.verdict, Verdict::Pass);
        let ms = mean_square(&x, 2000, alpha).unwrap();
        assert!(ms.slope.unwrap() <= 2.3, "{:?}", ms.slope);
        assert_eq!(ms.verdict, Verdict::Pass);
    }

    #[test]
    fn delta_mean_square() {
        let d = Vvaf::builtin("delta", 2001).unwrap();
        let ms = mean_square(&d, 2000, alpha0(&d)).unwrap();
        assert!((ms.slope.unwrap() - 12.0).abs() < 0.3, "{:?}", ms.slope);
        assert_eq!(ms.partial_sums[1].1, 1.0 + 576.0);
    }

    #[test]
    fn zero_form_is_degenerate() {
        let z = zero_form();
        let r = coefficient_growth_report(&z, 100, alpha0(&z), Some(Bound::Cusp)).unwrap();
        assert_eq!(r.verdict, Verdict::Degenerate);
        let ms = mean_square(&z, 100, alpha0(&z)).unwrap();
        assert!(ms.partial_sums.iter().all(|p| p.1 == 0.0));
        let s = supnorm_scan(&z, &StripGrid { nx: 5, ny: 5, ..Default::default() }, 6.0).unwrap();
        assert_eq!(s.max, 0.0);
    }

    #[test]
    fn fit_is_scale_invariant() {
        let d = Vvaf::builtin("delta", 401).unwrap();
        let c = Complex64::new(-3.5, 2.0);
        let comps: Vec<LogQExpansion> = d.components().iter().map(|x| x.scale(c)).collect();
        let d2 = Vvaf::assemble("scaled", d.rep().clone(), 12, comps).unwrap();
        let a = coefficient_growth_report(&d, 400, alpha0(&d), None).unwrap();
        let b = coefficient_growth_report(&d2, 400, alpha0(&d2), None).unwrap();
        assert!((a.beta_emp.unwrap() - b.beta_emp.unwrap()).abs() < 1e-12);
        assert_eq!(a.verdict, b.verdict);
    }

    #[test]
    fn truncation_is_reported() {
        let d = Vvaf::builtin("delta", 50).unwrap();
        assert!(coefficient_growth_report(&d, 100, alpha0(&d), None).is_err());
        let t = Vvaf::builtin("theta-eta", 20).unwrap();
        assert!(coefficient_growth_report(&t, 10, alpha0(&t), None).is_err());
    }

    #[test]
    fn supnorm_bounded() {
        let x = Vvaf::builtin("eta4-theta-eta", 400).unwrap();
        let r = supnorm_scan(&x, &StripGrid::default(), 1.0).unwrap();
        assert_eq!(r.verdict, Verdict::Pass, "{r:?}");
        let d = Vvaf::builtin("delta", 400).unwrap();
        let r = supnorm_scan(&d, &StripGrid::default(), 6.0).unwrap();
        assert_eq!(r.verdict, Verdict::Pass, "{r:?}");
        // with too small a weight exponent the scan sees the blow-up toward the real line
        let r = supnorm_scan(&d, &StripGrid::default(), 0.0).unwrap();
        assert!(r.max_high > 0.0);
    }

    #[test]
    fn vanishing_gate() {
        let pts = StripGrid { nx: 4, ny: 4, y_min: 0.5, y_max: 2.0 }.points(1.0);
        let zero = |_: Complex64| Ok(vec![Complex64::new(0.0, 0.0)]);
        let one = |_: Complex64| Ok(vec![Complex64::new(1.0, 0.0)]);
        assert!(vanishing_check(-2.0, 0.0, Some(zero), &pts).unwrap().consistent);
        let d = vanishing_check(-2.0, 0.0, Some(one), &pts).unwrap();
        assert!(d.active && !d.consistent);
        let d = vanishing_check(0.0, 0.0, Some(one), &pts).unwrap();
        assert!(!d.active && d.consistent);
    }

    fn eval(x: &Vvaf) -> impl Fn(Complex64) -> Result<Vec<Complex64>> + '_ {
        move |tau| Ok(x.evaluate(tau)?.value)
    }

    #[test]
    fn converse_trivial_and_unitary() {
        let d = Vvaf::builtin("delta", 120).unwrap();
        let r = converse_growth_check(eval(&d), d.rep(), &ConverseConfig::new(12, 6.0)).unwrap();
        assert_eq!(r.exponent, 0.0);
        assert!((r.constant - 1.0).abs() < 1e-12);
        assert!(r.pass, "{r:?}");
        let x = Vvaf::builtin("eta4-theta-eta", 120).unwrap();
        let r = converse_growth_check(eval(&x), x.rep(), &ConverseConfig::new(2, 1.0)).unwrap();
        assert!((r.constant - 3f64.sqrt()).abs() < 1e-9, "{r:?}");
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn converse_rejects_wrong_representation() {
        let x = Vvaf::builtin("eta4-theta-eta", 60).unwrap();
        let err = converse_growth_check(eval(&x), &repr::theta_eta(), &ConverseConfig::new(2, 1.0));
        assert!(matches!(err, Err(Error::FunctionalEquation(_))));
    }

    #[test]
    fn converse_reducible_blocks() {
        let rep = repr::trivial().direct_sum(&repr::nonpoly(Complex64::new(0.0, 1.0)).unwrap()).unwrap();
        let d = Vvaf::builtin("delta", 120).unwrap();
        let f = |tau: Complex64| {
            let mut v = d.evaluate(tau)?.value;
            v.extend([Complex64::new(0.0, 0.0); 3]);
            Ok(v)
        };
        let reports = converse_growth_check_blocks(f, &rep, &[1, 3], &ConverseConfig::new(12, 6.0)).unwrap();
        assert!(reports[0].pass);
        assert!(!reports[1].pass && reports[1].violations > 0 && !reports[1].nonzero);
        assert!(converse_growth_check_blocks(f, &rep, &[2, 2], &ConverseConfig::new(12, 6.0)).is_err());
    }

    #[test]
    fn logarithmic_norms() {
        let x = Vvaf::builtin("sym2-log", 30).unwrap();
        let norms = coefficient_norms(&x, 100).unwrap();
        assert_eq!(norms.first().unwrap().n, 1);
        assert_eq!(norms.last().unwrap().n, 29);
        let a = AlphaChoice::new(&x, 0.0);
        assert!(a.logarithmic && a.used() == 3.0);
    }
}
