//! Vector-valued automorphic forms assembled from component expansions.

use num_complex::Complex64;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::moebius::{GroupElement, Point};
use crate::repr::{self, CMatrix, JordanData, Mu, Representation};

use super::builtin::{delta_series, eta_cubed_series, eta_series, theta_series};
use super::log::LogQExpansion;
use super::series::{FracQSeries, SeriesJson};

/// Cutoff for coefficients produced by a change of basis, relative to the
/// magnitudes combined at the same exponent.
const CHOP: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Flags {
    /// Every occupied exponent is `≥ 0`.
    pub holomorphic: bool,
    /// Every occupied exponent is `> 0`.
    pub cusp_form: bool,
}

#[derive(Clone, Debug)]
pub struct Vvaf {
    name: String,
    weight: i32,
    rep: Representation,
    components: Vec<LogQExpansion>,
    jordan: JordanData,
    flags: Flags,
}

#[derive(Clone, Debug, Serialize)]
pub struct VecEvaluation {
    pub value: Vec<Complex64>,
    pub tail: f64,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct TransformCheck {
    /// `max_τ ‖j(γ,τ)^{-k} X(γτ) - ρ(γ) X(τ)‖`.
    pub residual: f64,
    /// Largest tail estimate met at the sample points.
    pub max_tail: f64,
    pub samples: usize,
}

/// Fourier coefficient vector `(X_{[0,n]}, …, X_{[m-1,n]})` in the diagonal basis.
#[derive(Clone, Debug, Serialize)]
pub struct CoefficientVector {
    pub n: i64,
    pub values: Vec<Complex64>,
}

impl CoefficientVector {
    pub fn max_norm(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

pub const BUILTIN_VVAFS: [&str; 4] = ["theta-eta", "eta4-theta-eta", "delta", "sym2-log"];

fn compute_flags(components: &[LogQExpansion]) -> Flags {
    let zero = Ratio::from_integer(0);
    let mut holomorphic = true;
    let mut cusp_form = true;
    for e in components.iter().flat_map(|c| c.exponents()) {
        holomorphic &= e >= zero;
        cusp_form &= e > zero;
    }
    Flags { holomorphic, cusp_form }
}

impl Vvaf {
    pub fn assemble(name: &str, rep: Representation, weight: i32, components: Vec<LogQExpansion>) -> Result<Self> {
        if components.len() != rep.dim() {
            return Err(Error::Dimension(format!(
                "{} components for a representation of dimension {}",
                components.len(),
                rep.dim()
            )));
        }
        if weight % 2 != 0 {
            return Err(Error::Parameter(format!("weight must be even, got {weight}")));
        }
        if components.iter().any(|c| c.max_log_power() >= rep.dim()) {
            return Err(Error::Series("log power must be below the dimension".into()));
        }
        let jordan = rep.jordan_t()?;
        let flags = compute_flags(&components);
        Ok(Self { name: name.to_string(), weight, rep, components, jordan, flags })
    }

    pub fn builtin(name: &str, order: u32) -> Result<Self> {
        let order = order.max(2);
        let pure = |s: FracQSeries| LogQExpansion::pure(s.normalize());
        match name {
            "theta-eta" => {
                let eta = eta_series(order + 1);
                let comps = [2, 3, 4]
                    .iter()
                    .map(|&v| Ok(pure(theta_series(v, order + 1)?.div(&eta)?)))
                    .collect::<Result<Vec<_>>>()?;
                Self::assemble(name, repr::theta_eta(), 0, comps)
            }
            "eta4-theta-eta" => {
                let eta3 = eta_cubed_series(order);
                let comps = [2, 3, 4]
                    .iter()
                    .map(|&v| Ok(pure(eta3.mul(&theta_series(v, order)?)?)))
                    .collect::<Result<Vec<_>>>()?;
                Self::assemble(name, repr::eta4_twist(&repr::theta_eta())?, 2, comps)
            }
            "delta" => Self::assemble(name, repr::trivial(), 12, vec![pure(delta_series(order))]),
            "sym2-log" => sym2_log(order),
            other => Err(Error::UnknownBuiltin(other.to_string())),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn weight(&self) -> i32 {
        self.weight
    }

    pub fn rep(&self) -> &Representation {
        &self.rep
    }

    pub fn components(&self) -> &[LogQExpansion] {
        &self.components
    }

    pub fn jordan(&self) -> &JordanData {
        &self.jordan
    }

    pub fn flags(&self) -> Flags {
        self.flags
    }

    pub fn is_logarithmic(&self) -> bool {
        self.components.iter().any(|c| !c.is_pure())
    }

    /// Smallest order over all components.
    pub fn truncation_order(&self) -> Ratio<i64> {
        self.components.iter().filter_map(LogQExpansion::order).min().unwrap_or(Ratio::from_integer(0))
    }

    /// Leading exponent of each component.
    pub fn leading_exponents(&self) -> Vec<Option<Ratio<i64>>> {
        self.components.iter().map(|c| c.exponents().min()).collect()
    }

    pub fn evaluate(&self, tau: Complex64) -> Result<VecEvaluation> {
        let mut value = Vec::with_capacity(self.components.len());
        let mut tail: f64 = 0.0;
        for c in &self.components {
            let e = c.evaluate(tau)?;
            value.push(e.value);
            tail = tail.max(e.tail);
        }
        Ok(VecEvaluation { value, tail })
    }

    pub fn check_transformation(&self, g: &GroupElement, taus: &[Complex64]) -> Result<TransformCheck> {
        let rho = self.rep.evaluate(g)?;
        let mut residual: f64 = 0.0;
        let mut max_tail: f64 = 0.0;
        for &tau in taus {
            let Point::Finite(gt) = g.apply(Point::Finite(tau)) else {
                return Err(Error::Parameter("γτ is not finite".into()));
            };
            let lhs = self.evaluate(gt)?;
            let rhs = self.evaluate(tau)?;
            let j = g.j_factor(tau).powi(-self.weight);
            let rx = &rho * nalgebra::DVector::from_vec(rhs.value.clone());
            let diff: f64 = lhs.value.iter().zip(rx.iter()).map(|(a, b)| (j * a - b).norm_sqr()).sum::<f64>().sqrt();
            residual = residual.max(diff);
            max_tail = max_tail.max(lhs.tail * j.norm()).max(rhs.tail);
        }
        Ok(TransformCheck { residual, max_tail, samples: taus.len() })
    }

    /// `μ` of the eigenvalue attached to each column of `P`.
    pub fn offsets(&self) -> Result<Vec<Mu>> {
        self.jordan.column_eigenvalues().into_iter().map(repr::mu).collect()
    }

    /// Components of `P⁻¹ X` for admissible forms. Each lies in `q̃^{μ_i} ℂ[[q̃]]`.
    pub fn diagonalized(&self) -> Result<Vec<FracQSeries>> {
        if self.is_logarithmic() || !self.jordan.is_diagonal() {
            return Err(Error::Series("diagonal basis exists only for admissible forms".into()));
        }
        let pinv = self.jordan.p.clone().try_inverse().ok_or(Error::IllConditioned(f64::INFINITY))?;
        let xs: Vec<FracQSeries> = self.components.iter().map(|c| c.part(0).cloned().expect("pure")).collect();
        let offsets = self.offsets()?;
        let mut out = Vec::with_capacity(xs.len());
        for (i, mu) in offsets.iter().enumerate() {
            let mut acc: Option<(FracQSeries, FracQSeries)> = None;
            for (k, x) in xs.iter().enumerate() {
                let term = x.scale(pinv[(i, k)]);
                let size = abs_series(x).scale(Complex64::new(pinv[(i, k)].norm(), 0.0));
                acc = Some(match acc {
                    Some((a, s)) => (a.add(&term)?, s.add(&size)?),
                    None => (term, size),
                });
            }
            let (y, size) = acc.expect("m >= 1");
            let y = y.chop_against(&size, CHOP).normalize();
            for (e, _) in y.terms() {
                let frac = (e - e.floor()).to_integer_fraction();
                if (frac - mu.value()).abs() > 1e-9 && (frac - mu.value()).abs() < 1.0 - 1e-9 {
                    return Err(Error::Series(format!(
                        "component {i} has exponent {e}, not congruent to its offset {mu} mod 1"
                    )));
                }
            }
            out.push(y);
        }
        Ok(out)
    }

    /// Coefficient vectors `c_n` at exponents `n + μ_i` for `n ≤ n_max`, up to
    /// the truncation order.
    pub fn fourier_coefficients(&self, n_max: i64) -> Result<Vec<CoefficientVector>> {
        let ys = self.diagonalized()?;
        let mus: Vec<Ratio<i64>> = self
            .offsets()?
            .iter()
            .map(|m| m.as_rational().ok_or_else(|| Error::Series(format!("offset {m} is not rational"))))
            .collect::<Result<_>>()?;
        let n_min = ys
            .iter()
            .zip(&mus)
            .filter_map(|(y, mu)| y.leading().map(|(e, _)| (e - mu).floor().to_integer()))
            .min()
            .unwrap_or(0);
        let mut out = Vec::new();
        'n: for n in n_min..=n_max {
            let mut values = Vec::with_capacity(ys.len());
            for (y, mu) in ys.iter().zip(&mus) {
                match y.coeff(Ratio::from_integer(n) + mu) {
                    Some(v) => values.push(v),
                    None => break 'n,
                }
            }
            out.push(CoefficientVector { n, values });
        }
        Ok(out)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&VvafBundle::from(self))?)
    }

    /// Reads a bundle; flags are recomputed from the exponents.
    pub fn from_json(text: &str) -> Result<Self> {
        let b: VvafBundle = serde_json::from_str(text)?;
        let comps = b
            .components
            .into_iter()
            .map(|terms| {
                LogQExpansion::new(
                    terms
                        .into_iter()
                        .map(|t| Ok((t.log_power, FracQSeries::try_from(t.series)?)))
                        .collect::<Result<Vec<_>>>()?,
                )
            })
            .collect::<Result<Vec<_>>>()?;
        Self::assemble(&b.name, b.representation, b.weight, comps)
    }
}

fn abs_series(x: &FracQSeries) -> FracQSeries {
    let d = x.denom() as i64;
    let terms = x.terms().map(|(e, c)| ((e * d).to_integer(), Complex64::new(c.norm(), 0.0)));
    FracQSeries::from_terms(x.width(), x.denom(), x.order_index(), terms).expect("same grid")
}

trait ToF64 {
    fn to_integer_fraction(&self) -> f64;
}

impl ToF64 for Ratio<i64> {
    fn to_integer_fraction(&self) -> f64 {
        *self.numer() as f64 / *self.denom() as f64
    }
}

#[derive(Serialize, Deserialize)]
struct LogTermJson {
    log_power: usize,
    series: SeriesJson,
}

#[derive(Serialize, Deserialize)]
struct VvafBundle {
    name: String,
    weight: i32,
    representation: Representation,
    #[serde(default)]
    flags: Option<Flags>,
    #[serde(default)]
    truncation_order: Option<[i64; 2]>,
    components: Vec<Vec<LogTermJson>>,
}

impl From<&Vvaf> for VvafBundle {
    fn from(v: &Vvaf) -> Self {
        let o = v.truncation_order();
        VvafBundle {
            name: v.name.clone(),
            weight: v.weight,
            representation: v.rep.clone(),
            flags: Some(v.flags),
            truncation_order: Some([*o.numer(), *o.denom()]),
            components: v
                .components
                .iter()
                .map(|c| c.terms().iter().map(|(j, s)| LogTermJson { log_power: *j, series: s.into() }).collect())
                .collect(),
        }
    }
}

/// Synthetic logarithmic form for the symmetric square: in the Jordan basis of
/// `ρ(t)`, `Y₂ = f`, `Y₁ = u f + g`, `Y₀ = C(u,2) f + u g + h` with `u = τ` and
/// pure integral-exponent series `f, g, h`; then `X = P Y`. It satisfies
/// `X(τ+1) = ρ(t) X(τ)` but is not automorphic under `s`.
fn sym2_log(order: u32) -> Result<Vvaf> {
    let rep = repr::sym2();
    let f = delta_series(order);
    let g = f.mul(&f)?;
    let h = g.mul(&f)?;
    let pf = LogQExpansion::pure(f);
    let pg = LogQExpansion::pure(g);
    let y2 = pf.clone();
    let y1 = pf.mul_u_poly(&[0.0, 1.0])?.add(&pg)?;
    let y0 = pf.mul_u_poly(&[0.0, -0.5, 0.5])?.add(&pg.mul_u_poly(&[0.0, 1.0])?)?.add(&LogQExpansion::pure(h))?;
    let ys = [y0, y1, y2];
    let jordan = rep.jordan_t()?;
    let comps = mix(&jordan.p, &ys)?;
    Vvaf::assemble("sym2-log", rep, 0, comps)
}

/// `X_r = Σ_c M[r][c] Y_c`.
pub fn mix(m: &CMatrix, ys: &[LogQExpansion]) -> Result<Vec<LogQExpansion>> {
    (0..m.nrows())
        .map(|r| {
            let mut acc: Option<LogQExpansion> = None;
            for (c, y) in ys.iter().enumerate() {
                let term = y.scale(m[(r, c)]);
                acc = Some(match acc {
                    Some(a) => a.add(&term)?,
                    None => term,
                });
            }
            Ok(acc.expect("nonempty"))
        })
        .collect()
}
