//! Representations of PSL2(Z) and its finite-index subgroups, given by the images
//! of the generators `s` and `t`.
//!
//! A representation of a subgroup `H` is stored as a representation of the full
//! group together with the descriptor of `H`; evaluation is then restricted to
//! elements of `H`.

mod jordan;

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::sync::{Arc, Mutex};

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::Ratio;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fit::{self, LineFit};
use crate::moebius::{self, Cusp, Gen, GroupElement, Subgroup, Word};

pub use jordan::{eigenvalues, jordan_form, CMatrix, JordanBlock, JordanData, DEFAULT_TOL};

/// Tolerance for the defining relations `s² = 1`, `(st)³ = 1`.
pub const RELATION_TOL: f64 = 1e-10;
/// Tolerance for `|λ| = 1` in spectral tests.
pub const UNIT_TOL: f64 = 1e-8;
/// Root-of-unity recognition: largest order searched and the match tolerance.
pub const MU_MAX_ORDER: i64 = 1000;
pub const MU_SNAP_TOL: f64 = 1e-10;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn cis(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta)
}

/// Largest entrywise modulus.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn frobenius(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn mat_pow(m: &CMatrix, mut n: u64) -> CMatrix {
    let mut base = m.clone();
    let mut acc = CMatrix::identity(m.nrows(), m.ncols());
    while n > 0 {
        if n & 1 == 1 {
            acc = &acc * &base;
        }
        n >>= 1;
        if n > 0 {
            base = &base * &base;
        }
    }
    acc
}

type Memo = Arc<Mutex<HashMap<Word, CMatrix>>>;

#[derive(Clone)]
pub struct Representation {
    m: usize,
    mat_s: CMatrix,
    mat_t: CMatrix,
    mat_t_inv: CMatrix,
    group: Subgroup,
    /// Exact exponents `μ` of the eigenvalues of `ρ(t)`, when known.
    exact_t_exponents: Option<Vec<Ratio<i64>>>,
    memo: Option<Memo>,
}

impl fmt::Debug for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Representation")
            .field("m", &self.m)
            .field("group", &self.group.name())
            .field("mat_s", &self.mat_s)
            .field("mat_t", &self.mat_t)
            .finish()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub m: usize,
    pub group: String,
    /// Max entrywise deviation of `s²` from the identity.
    pub s_relation: f64,
    /// Max entrywise deviation of `(st)³` from the identity.
    pub st_relation: f64,
    /// Smallest over largest singular value, minimum over `s` and `t`.
    pub inverse_condition: f64,
    pub pass: bool,
    pub detail: Vec<String>,
}

/// `μ` with `e^{2πiμ} = λ`, exact when `λ` is a recognised root of unity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Mu {
    Rational(Ratio<i64>),
    Real(f64),
}

impl Mu {
    pub fn value(&self) -> f64 {
        match self {
            Mu::Rational(r) => *r.numer() as f64 / *r.denom() as f64,
            Mu::Real(x) => *x,
        }
    }

    pub fn as_rational(&self) -> Option<Ratio<i64>> {
        match self {
            Mu::Rational(r) => Some(*r),
            Mu::Real(_) => None,
        }
    }
}

impl fmt::Display for Mu {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mu::Rational(r) => write!(f, "{r}"),
            Mu::Real(x) => write!(f, "{x}"),
        }
    }
}

impl Serialize for Mu {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Mu::Rational(r) => s.serialize_str(&r.to_string()),
            Mu::Real(x) => s.serialize_f64(*x),
        }
    }
}

pub fn mu(lambda: Complex64) -> Result<Mu> {
    if (lambda.norm() - 1.0).abs() > UNIT_TOL {
        return Err(Error::NonUnitary(lambda.to_string()));
    }
    let theta = (lambda.arg() / (2.0 * PI)).rem_euclid(1.0);
    for q in 1..=MU_MAX_ORDER {
        let p = (theta * q as f64).round() as i64;
        if (cis(2.0 * PI * p as f64 / q as f64) - lambda).norm() < MU_SNAP_TOL {
            return Ok(Mu::Rational(Ratio::new(p.rem_euclid(q), q)));
        }
    }
    // rem_euclid can round up to exactly 1.0
    Ok(Mu::Real(if theta >= 1.0 { 0.0 } else { theta }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GrowthClass {
    Polynomial,
    Exponential,
}

#[derive(Clone, Debug, Serialize)]
pub struct ParabolicNorms {
    pub norms: Vec<f64>,
    /// Log-log slope of `‖ρ(tⁿ)‖` against `n`.
    pub slope: f64,
    /// `log ‖ρ(t^{nmax})‖ / nmax`.
    pub log_rate: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub seed: u64,
    /// Number of random words and their maximal length.
    pub words: usize,
    pub max_word_len: usize,
    pub max_exp: i64,
    /// Number of random integer matrices and their entry bound.
    pub matrices: usize,
    pub max_entry: i64,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        Self { seed: 1, words: 200, max_word_len: 30, max_exp: 4, matrices: 200, max_entry: 1_000_000 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GrowthFit {
    pub classification: GrowthClass,
    pub seed: u64,
    pub samples: usize,
    /// Every sampled image unitary within 1e-10.
    pub unitary: bool,
    /// Slope of `log ‖ρ(γ)‖` against `log ‖γ‖`, or 0 for unitary images.
    pub alpha_emp: f64,
    pub fit: Option<LineFit>,
    /// `max ‖ρ(γ)‖ / ‖γ‖^{α_emp}` over the samples.
    pub max_ratio: f64,
    /// Fit of `‖ρ(γ)‖ / max(⌊|a/c|⌋^{m-1}, 1)` against `c² + d²` over samples with `c ≠ 0`.
    pub sharp_alpha: Option<f64>,
    pub sharp_max_ratio: Option<f64>,
    /// `log ‖ρ(tⁿ)‖ / n` at `n = 60` for exponential classification.
    pub exponential_rate: Option<f64>,
}

impl Representation {
    /// Representation of the full group.
    pub fn new(mat_s: CMatrix, mat_t: CMatrix) -> Result<Self> {
        Self::with_group(mat_s, mat_t, Subgroup::Full)
    }

    /// Restriction to `group` of the full-group representation defined by `(s, t)`.
    pub fn with_group(mat_s: CMatrix, mat_t: CMatrix, group: Subgroup) -> Result<Self> {
        let m = mat_s.nrows();
        if m == 0 || mat_s.shape() != (m, m) || mat_t.shape() != (m, m) {
            return Err(Error::Dimension(format!(
                "generator images must be square of equal size, got {:?} and {:?}",
                mat_s.shape(),
                mat_t.shape()
            )));
        }
        let mat_t_inv = mat_t
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Dimension("image of t is singular".into()))?;
        Ok(Self { m, mat_s, mat_t, mat_t_inv, group, exact_t_exponents: None, memo: None })
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn mat_s(&self) -> &CMatrix {
        &self.mat_s
    }

    pub fn mat_t(&self) -> &CMatrix {
        &self.mat_t
    }

    pub fn group(&self) -> &Subgroup {
        &self.group
    }

    pub fn exact_t_exponents(&self) -> Option<&[Ratio<i64>]> {
        self.exact_t_exponents.as_deref()
    }

    pub fn with_exact_t_exponents(mut self, mus: Vec<Ratio<i64>>) -> Self {
        self.exact_t_exponents = Some(mus);
        self
    }

    /// Same generator images, restricted to another subgroup.
    pub fn restrict(&self, group: Subgroup) -> Self {
        Self { group, memo: None, ..self.clone() }
    }

    /// Enables the shared word cache. Clones share the cache.
    pub fn with_memo(mut self) -> Self {
        self.memo = Some(Arc::new(Mutex::new(HashMap::new())));
        self
    }

    /// `s ↦ cs·ρ(s)`, `t ↦ ct·ρ(t)`. The result is only a representation when
    /// `cs² = 1` and `(cs ct)³ = 1`; [`Self::validate`] tells.
    pub fn twist(&self, cs: Complex64, ct: Complex64) -> Result<Self> {
        Self::with_group(&self.mat_s * cs, &self.mat_t * ct, self.group.clone())
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if self.group != other.group {
            return Err(Error::Dimension("direct sum of representations of different groups".into()));
        }
        let n = self.m + other.m;
        let blockdiag = |a: &CMatrix, b: &CMatrix| {
            let mut out = CMatrix::zeros(n, n);
            out.view_mut((0, 0), (self.m, self.m)).copy_from(a);
            out.view_mut((self.m, self.m), (other.m, other.m)).copy_from(b);
            out
        };
        Self::with_group(blockdiag(&self.mat_s, &other.mat_s), blockdiag(&self.mat_t, &other.mat_t), self.group.clone())
    }

    pub fn validate(&self) -> ValidationReport {
        let id = CMatrix::identity(self.m, self.m);
        let s2 = max_abs(&(&self.mat_s * &self.mat_s - &id));
        let st = &self.mat_s * &self.mat_t;
        let st3 = max_abs(&(&st * &st * &st - &id));
        let cond = |m: &CMatrix| {
            let sv = m.singular_values();
            let hi = sv.max();
            if hi > 0.0 {
                sv.min() / hi
            } else {
                0.0
            }
        };
        let inverse_condition = cond(&self.mat_s).min(cond(&self.mat_t));
        let mut detail = Vec::new();
        if !(s2 < RELATION_TOL) {
            detail.push(format!("s^2 deviates from I by {s2:e}"));
        }
        if !(st3 < RELATION_TOL) {
            detail.push(format!("(st)^3 deviates from I by {st3:e}"));
        }
        if !(inverse_condition > 1e-10) {
            detail.push(format!("generator images are numerically singular (σ_min/σ_max = {inverse_condition:e})"));
        }
        ValidationReport {
            m: self.m,
            group: self.group.name(),
            s_relation: s2,
            st_relation: st3,
            inverse_condition,
            pass: detail.is_empty(),
            detail,
        }
    }

    fn t_power(&self, e: i64) -> CMatrix {
        if e >= 0 {
            mat_pow(&self.mat_t, e as u64)
        } else {
            mat_pow(&self.mat_t_inv, e.unsigned_abs())
        }
    }

    /// Product of generator images along a word, ignoring the subgroup.
    pub fn evaluate_word(&self, w: &Word) -> CMatrix {
        if let Some(memo) = &self.memo {
            if let Some(hit) = memo.lock().expect("memo lock").get(w) {
                return hit.clone();
            }
        }
        let mut acc = CMatrix::identity(self.m, self.m);
        for l in w.letters() {
            acc = match l.gen {
                Gen::S => &acc * &self.mat_s,
                Gen::T => &acc * self.t_power(l.exp),
            };
        }
        if let Some(memo) = &self.memo {
            memo.lock().expect("memo lock").insert(w.clone(), acc.clone());
        }
        acc
    }

    pub fn evaluate(&self, g: &GroupElement) -> Result<CMatrix> {
        if !self.group.contains(g) {
            return Err(Error::NotInSubgroup(g.to_string(), self.group.name()));
        }
        Ok(self.evaluate_word(&g.word()))
    }

    /// Parabolic generators `A t^h A⁻¹`, one per cusp class representative.
    pub fn parabolic_generators(&self) -> Result<Vec<(Cusp, u64, GroupElement)>> {
        let cusps = if self.group.is_full() { vec![Cusp::Infinity] } else { moebius::cusp_representatives(&self.group)? };
        cusps
            .into_iter()
            .map(|cusp| {
                let h = moebius::cusp_width(&self.group, cusp)?;
                let a = moebius::integral_scaling_matrix(cusp);
                let p = a.mul(&GroupElement::t().pow(h as i64)).mul(&a.inverse());
                Ok((cusp, h, p))
            })
            .collect()
    }

    pub fn jordan_t(&self) -> Result<JordanData> {
        jordan_form(&self.mat_t, DEFAULT_TOL)
    }

    /// Every parabolic image diagonalizable.
    pub fn is_admissible(&self) -> Result<bool> {
        for (_, _, p) in self.parabolic_generators()? {
            if !jordan_form(&self.evaluate(&p)?, DEFAULT_TOL)?.is_diagonal() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Every parabolic image has only unitary eigenvalues.
    pub fn is_polynomial_growth(&self) -> Result<bool> {
        for (_, _, p) in self.parabolic_generators()? {
            let m = self.evaluate(&p)?;
            if eigenvalues(&m).iter().any(|l| (l.norm() - 1.0).abs() > UNIT_TOL) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `μ` of every eigenvalue of `ρ(t)`, in Jordan column order.
    pub fn t_exponents(&self) -> Result<Vec<Mu>> {
        self.jordan_t()?.column_eigenvalues().into_iter().map(mu).collect()
    }

    /// Frobenius norms of `ρ(tⁿ)` (`ρ(t^{nh})` at infinity for subgroups), `n = 1..=nmax`.
    pub fn parabolic_power_norms(&self, nmax: usize) -> Result<ParabolicNorms> {
        let h = if self.group.is_full() { 1 } else { moebius::cusp_width(&self.group, Cusp::Infinity)? };
        let step = mat_pow(&self.mat_t, h);
        let mut acc = CMatrix::identity(self.m, self.m);
        let mut norms = Vec::with_capacity(nmax);
        for _ in 0..nmax {
            acc = &acc * &step;
            norms.push(frobenius(&acc));
        }
        let slope = fit::log_log(norms.iter().enumerate().map(|(i, &v)| ((i + 1) as f64, v))).map_or(0.0, |f| f.slope);
        let log_rate = norms.last().map_or(0.0, |v| v.ln() / nmax as f64);
        Ok(ParabolicNorms { norms, slope, log_rate })
    }

    /// Empirical growth exponent from random words and random integer matrices.
    pub fn growth_exponent(&self, cfg: &SamplerConfig) -> Result<GrowthFit> {
        if !self.is_polynomial_growth()? {
            let rate = self.parabolic_power_norms(60)?.log_rate;
            return Ok(GrowthFit {
                classification: GrowthClass::Exponential,
                seed: cfg.seed,
                samples: 0,
                unitary: false,
                alpha_emp: f64::INFINITY,
                fit: None,
                max_ratio: f64::INFINITY,
                sharp_alpha: None,
                sharp_max_ratio: None,
                exponential_rate: Some(rate),
            });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let reps = if self.group.is_full() { Vec::new() } else { moebius::left_transversal(&self.group)? };
        let into_group = |g: GroupElement| -> GroupElement {
            if reps.is_empty() {
                return g;
            }
            for r in &reps {
                let h = r.inverse().mul(&g);
                if self.group.contains(&h) {
                    return h;
                }
            }
            unreachable!("transversal covers the group")
        };
        let mut elements = Vec::with_capacity(cfg.words + cfg.matrices);
        for _ in 0..cfg.words {
            let len = 1 + (rand::Rng::random_range(&mut rng, 0..cfg.max_word_len.max(1)));
            elements.push(into_group(moebius::random_word(&mut rng, len, cfg.max_exp).evaluate()));
        }
        for _ in 0..cfg.matrices {
            elements.push(into_group(moebius::random_element(&mut rng, cfg.max_entry)));
        }

        let id = CMatrix::identity(self.m, self.m);
        let mut unitary = true;
        let mut pts = Vec::with_capacity(elements.len());
        let mut sharp_pts = Vec::new();
        for g in &elements {
            let img = self.evaluate(g)?;
            if max_abs(&(&img * img.adjoint() - &id)) > 1e-10 {
                unitary = false;
            }
            let n = frobenius(&img);
            pts.push((g.norm(), n));
            let [a, _, cc, d] = g.entries_f64();
            if cc != 0.0 {
                let q = (a / cc).abs().floor().max(1.0);
                sharp_pts.push((cc * cc + d * d, n / q.powi(self.m as i32 - 1)));
            }
        }
        let line = fit::log_log(pts.iter().cloned());
        let alpha_emp = if unitary { 0.0 } else { line.map_or(0.0, |f| f.slope.max(0.0)) };
        let max_ratio = pts.iter().map(|&(x, y)| y / x.powf(alpha_emp)).fold(0.0, f64::max);
        let sharp_fit = fit::log_log(sharp_pts.iter().cloned());
        let sharp_alpha = sharp_fit.map(|f| if unitary { 0.0 } else { f.slope.max(0.0) });
        let sharp_max_ratio =
            sharp_alpha.map(|al| sharp_pts.iter().map(|&(x, y)| y / x.powf(al)).fold(0.0, f64::max));
        Ok(GrowthFit {
            classification: GrowthClass::Polynomial,
            seed: cfg.seed,
            samples: pts.len(),
            unitary,
            alpha_emp,
            fit: line,
            max_ratio,
            sharp_alpha,
            sharp_max_ratio,
            exponential_rate: None,
        })
    }

    /// Image of `x ∈ PSL2(Z)` under the representation induced from `self.group`,
    /// with blocks `ρ̇(γ_i⁻¹ x γ_j)` and `ρ̇ = 0` off the subgroup.
    pub fn induced_image(&self, reps: &[GroupElement], x: &GroupElement) -> CMatrix {
        let (d, m) = (reps.len(), self.m);
        let inv: Vec<GroupElement> = reps.iter().map(|r| r.inverse()).collect();
        let mut out = CMatrix::zeros(d * m, d * m);
        for i in 0..d {
            let left = inv[i].mul(x);
            for j in 0..d {
                let y = left.mul(&reps[j]);
                if self.group.contains(&y) {
                    out.view_mut((i * m, j * m), (m, m)).copy_from(&self.evaluate_word(&y.word()));
                }
            }
        }
        out
    }

    /// Induced representation of the full group from a left transversal with `γ_1 = 1`.
    pub fn induce(&self, reps: &[GroupElement]) -> Result<Representation> {
        check_transversal(&self.group, reps)?;
        Representation::new(
            self.induced_image(reps, &GroupElement::s()),
            self.induced_image(reps, &GroupElement::t()),
        )
    }
}

fn check_transversal(group: &Subgroup, reps: &[GroupElement]) -> Result<()> {
    match reps.first() {
        Some(r) if r.is_identity() => {}
        _ => return Err(Error::Transversal("first representative must be the identity".into())),
    }
    let index = if group.is_full() { 1 } else { moebius::left_transversal(group)?.len() };
    if reps.len() != index {
        return Err(Error::Transversal(format!("{} representatives given, index is {index}", reps.len())));
    }
    for i in 0..reps.len() {
        let inv = reps[i].inverse();
        for (j, r) in reps.iter().enumerate().skip(i + 1) {
            if group.contains(&inv.mul(r)) {
                return Err(Error::Transversal(format!("representatives {i} and {j} lie in the same coset")));
            }
        }
    }
    Ok(())
}

/// True when every block row and every block column of `mat` (blocks of size
/// `block`) has exactly one block with an entry above `tol`.
pub fn is_block_monomial(mat: &CMatrix, block: usize, tol: f64) -> bool {
    let d = mat.nrows() / block;
    let nonzero = |i: usize, j: usize| max_abs(&mat.view((i * block, j * block), (block, block)).clone_owned()) > tol;
    (0..d).all(|i| (0..d).filter(|&j| nonzero(i, j)).count() == 1)
        && (0..d).all(|j| (0..d).filter(|&i| nonzero(i, j)).count() == 1)
}

// JSON: {"m":3,"s":[[[re,im],..],..],"t":..,"group":..}
type JsonMatrix = Vec<Vec<[f64; 2]>>;

#[derive(Serialize, Deserialize)]
struct RepresentationJson {
    m: usize,
    s: JsonMatrix,
    t: JsonMatrix,
    #[serde(default = "full_group")]
    group: Subgroup,
}

fn full_group() -> Subgroup {
    Subgroup::Full
}

fn to_json_matrix(m: &CMatrix) -> JsonMatrix {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect()
}

fn from_json_matrix(rows: &JsonMatrix, m: usize) -> std::result::Result<CMatrix, String> {
    if rows.len() != m || rows.iter().any(|r| r.len() != m) {
        return Err(format!("expected a {m}x{m} matrix"));
    }
    Ok(DMatrix::from_fn(m, m, |i, j| c(rows[i][j][0], rows[i][j][1])))
}

impl Serialize for Representation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RepresentationJson {
            m: self.m,
            s: to_json_matrix(&self.mat_s),
            t: to_json_matrix(&self.mat_t),
            group: self.group.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Representation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = RepresentationJson::deserialize(d)?;
        let s = from_json_matrix(&raw.s, raw.m).map_err(D::Error::custom)?;
        let t = from_json_matrix(&raw.t, raw.m).map_err(D::Error::custom)?;
        Representation::with_group(s, t, raw.group).map_err(D::Error::custom)
    }
}

/// Parameters for [`builtin`].
#[derive(Clone, Copy, Debug)]
pub struct BuiltinParams {
    /// The parameter `a` of `nonpoly`.
    pub a: Complex64,
}

impl Default for BuiltinParams {
    fn default() -> Self {
        Self { a: c(0.0, 1.0) }
    }
}

#[derive(Clone, Debug)]
pub struct Builtin {
    pub rep: Representation,
    pub warnings: Vec<String>,
}

pub const BUILTIN_NAMES: [&str; 5] = ["theta-eta", "nonpoly", "sym2", "trivial", "delta-multiplier-weight-12-trivial"];

pub fn builtin(name: &str, params: &BuiltinParams) -> Result<Builtin> {
    let mut warnings = Vec::new();
    let rep = match name {
        "theta-eta" => theta_eta(),
        "nonpoly" => {
            if params.a.re != 0.0 {
                warnings.push(format!(
                    "nonpoly: a = {} is not purely imaginary; non-polynomial growth is not guaranteed",
                    params.a
                ));
            }
            nonpoly(params.a)?
        }
        "sym2" => sym2(),
        "trivial" | "delta-multiplier-weight-12-trivial" => trivial(),
        other => return Err(Error::UnknownBuiltin(other.to_string())),
    };
    Ok(Builtin { rep, warnings })
}

pub fn trivial() -> Representation {
    let one = CMatrix::identity(1, 1);
    Representation::new(one.clone(), one).expect("1x1").with_exact_t_exponents(vec![Ratio::zero()])
}

/// The representation carried by `(θ₂, θ₃, θ₄)/η`.
pub fn theta_eta() -> Representation {
    let z = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    let s = DMatrix::from_row_slice(3, 3, &[z, z, one, z, one, z, one, z, z]);
    let e6 = cis(PI / 6.0);
    let e12 = cis(-PI / 12.0);
    let t = DMatrix::from_row_slice(3, 3, &[e6, z, z, z, z, e12, z, e12, z]);
    Representation::new(s, t)
        .expect("3x3")
        .with_exact_t_exponents(vec![Ratio::new(1, 12), Ratio::new(23, 24), Ratio::new(11, 24)])
}

/// Diagonal `ρ(t) = diag(λ₁, λ₂, 1)` with `λ₁λ₂ = -1`, `λ₁ - λ₂ = -1/a`.
pub fn nonpoly(a: Complex64) -> Result<Representation> {
    if a.norm() == 0.0 || !a.is_finite() {
        return Err(Error::Parameter(format!("nonpoly needs a nonzero finite a, got {a}")));
    }
    let (l1, l2) = nonpoly_eigenvalues(a);
    let one = c(1.0, 0.0);
    let z = c(0.0, 0.0);
    let s = DMatrix::from_row_slice(3, 3, &[a, -(a + one), one, a - one, -a, one, z, z, one]);
    let t = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![l1, l2, one]));
    Representation::new(s, t)
}

/// `λ₁` is the root of `λ² + λ/a + 1 = 0` of larger modulus and `λ₂ = λ₁ + 1/a`.
pub fn nonpoly_eigenvalues(a: Complex64) -> (Complex64, Complex64) {
    let inv = a.inv();
    let root = (inv * inv - 4.0).sqrt();
    let (r1, r2) = ((root - inv) / 2.0, (-root - inv) / 2.0);
    let l1 = if r2.norm() > r1.norm() { r2 } else { r1 };
    (l1, l1 + inv)
}

/// Symmetric square of the standard representation on `(x², xy, y²)`.
pub fn sym2() -> Representation {
    let img = |[a, b, cc, d]: [f64; 4]| {
        DMatrix::from_row_slice(
            3,
            3,
            &[
                a * a,
                a * b,
                b * b,
                2.0 * a * cc,
                a * d + b * cc,
                2.0 * b * d,
                cc * cc,
                cc * d,
                d * d,
            ],
        )
        .map(|x| c(x, 0.0))
    };
    Representation::new(img(GroupElement::s().entries_f64()), img(GroupElement::t().entries_f64()))
        .expect("3x3")
        .with_exact_t_exponents(vec![Ratio::zero(); 3])
}

/// `ρ'(s) = -ρ(s)`, `ρ'(t) = e^{πi/3} ρ(t)`: the representation of `η⁴ X`.
pub fn eta4_twist(rep: &Representation) -> Result<Representation> {
    let mut out = rep.twist(c(-1.0, 0.0), cis(PI / 3.0))?;
    if let Some(mus) = &rep.exact_t_exponents {
        let shift = Ratio::new(1, 6);
        out.exact_t_exponents = Some(
            mus.iter()
                .map(|m| {
                    let x = *m + shift;
                    if x >= Ratio::one() {
                        x - Ratio::one()
                    } else {
                        x
                    }
                })
                .collect(),
        );
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gm(a: i64, b: i64, cc: i64, d: i64) -> GroupElement {
        GroupElement::from_i64(a, b, cc, d).unwrap()
    }

    fn close(a: &CMatrix, b: &CMatrix, tol: f64) -> bool {
        max_abs(&(a - b)) <= tol
    }

    #[test]
    fn builtins_validate() {
        for name in BUILTIN_NAMES {
            let b = builtin(name, &BuiltinParams::default()).unwrap();
            let r = b.rep.validate();
            assert!(r.pass, "{name}: {r:?}");
            assert!(b.warnings.is_empty());
        }
        let r = theta_eta().validate();
        assert!(r.s_relation < 1e-14 && r.st_relation < 1e-14);
    }

    #[test]
    fn unipotent_t_fails_relations() {
        let id = CMatrix::identity(2, 2);
        let t = DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        let r = Representation::new(id, t).unwrap().validate();
        assert!(!r.pass);
        assert_eq!(r.s_relation, 0.0);
        assert!((r.st_relation - 3.0).abs() < 1e-15);
    }

    #[test]
    fn nonpoly_constraints() {
        let a = c(0.0, 1.0);
        let (l1, l2) = nonpoly_eigenvalues(a);
        let r5 = 5f64.sqrt();
        assert!((l1 - c(0.0, (1.0 + r5) / 2.0)).norm() < 1e-14);
        assert!((l2 - c(0.0, (r5 - 1.0) / 2.0)).norm() < 1e-14);
        // λ₁λ₂ = -λ₃², λ₁λ₂/(λ₁-λ₂)² = -a², 1/(λ₁λ₂(λ₁-λ₂)) = a
        assert!((l1 * l2 + 1.0).norm() < 1e-14);
        assert!((l1 * l2 / ((l1 - l2) * (l1 - l2)) + a * a).norm() < 1e-14);
        assert!(((l1 * l2 * (l1 - l2)).inv() - a).norm() < 1e-14);
        for a in [c(0.0, 0.3), c(0.0, -2.0), c(0.7, 0.4)] {
            assert!(nonpoly(a).unwrap().validate().pass, "a = {a}");
        }
        let b = builtin("nonpoly", &BuiltinParams { a: c(0.5, 1.0) }).unwrap();
        assert_eq!(b.warnings.len(), 1);
        assert!(nonpoly(c(0.0, 0.0)).is_err());
    }

    #[test]
    fn theta_eta_spectrum() {
        let mut eig = eigenvalues(theta_eta().mat_t());
        let mut want = [cis(PI / 6.0), cis(-PI / 12.0), -cis(-PI / 12.0)];
        let key = |z: &Complex64| z.arg();
        eig.sort_by(|a, b| key(a).total_cmp(&key(b)));
        want.sort_by(|a, b| key(a).total_cmp(&key(b)));
        for (e, w) in eig.iter().zip(want) {
            assert!((e - w).norm() < 1e-12);
        }
        let mus: Vec<f64> = theta_eta().t_exponents().unwrap().iter().map(Mu::value).collect();
        let exact: Vec<f64> = theta_eta().exact_t_exponents().unwrap().iter().map(|r| *r.numer() as f64 / *r.denom() as f64).collect();
        let mut a = mus.clone();
        let mut b = exact.clone();
        a.sort_by(f64::total_cmp);
        b.sort_by(f64::total_cmp);
        assert_eq!(a, b);
    }

    #[test]
    fn evaluate_examples() {
        let rho = theta_eta();
        assert!(close(&rho.evaluate(&GroupElement::identity()).unwrap(), &CMatrix::identity(3, 3), 0.0));
        let t5 = rho.evaluate(&GroupElement::t().pow(5)).unwrap();
        assert!(close(&t5, &mat_pow(rho.mat_t(), 5), 1e-14));
        // [[2,1],[1,1]] = t s t⁻¹ s
        let alt = rho.mat_t() * rho.mat_s() * &rho.mat_t_inv * rho.mat_s();
        assert!(close(&rho.evaluate(&gm(2, 1, 1, 1)).unwrap(), &alt, 1e-13));
    }

    #[test]
    fn subgroup_membership_enforced() {
        let rho = theta_eta().restrict(Subgroup::Gamma(2));
        assert!(rho.evaluate(&GroupElement::t()).is_err());
        assert!(rho.evaluate(&GroupElement::t().pow(2)).is_ok());
    }

    #[test]
    fn mu_examples() {
        assert_eq!(mu(c(1.0, 0.0)).unwrap(), Mu::Rational(Ratio::zero()));
        assert_eq!(mu(c(-1.0, 0.0)).unwrap(), Mu::Rational(Ratio::new(1, 2)));
        assert_eq!(mu(-cis(-PI / 12.0)).unwrap(), Mu::Rational(Ratio::new(11, 24)));
        assert!(matches!(mu(cis(1.0)).unwrap(), Mu::Real(x) if (x - 1.0 / (2.0 * PI)).abs() < 1e-15));
        assert!(mu(c(2.0, 0.0)).is_err());
    }

    #[test]
    fn admissibility() {
        assert!(theta_eta().is_admissible().unwrap());
        assert!(!sym2().is_admissible().unwrap());
        assert!(trivial().is_admissible().unwrap());
        let j = sym2().jordan_t().unwrap();
        assert_eq!(j.blocks.len(), 1);
        assert_eq!(j.blocks[0].size, 3);
    }

    #[test]
    fn polynomial_growth_dichotomy() {
        assert!(theta_eta().is_polynomial_growth().unwrap());
        assert!(sym2().is_polynomial_growth().unwrap());
        assert!(trivial().is_polynomial_growth().unwrap());
        assert!(!nonpoly(c(0.0, 1.0)).unwrap().is_polynomial_growth().unwrap());
    }

    #[test]
    fn parabolic_norms() {
        let t = trivial().parabolic_power_norms(50).unwrap();
        assert!(t.norms.iter().all(|&n| n == 1.0));
        assert_eq!(t.slope, 0.0);
        let s = sym2().parabolic_power_norms(200).unwrap();
        assert!(s.slope <= 2.1, "{}", s.slope);
        let np = nonpoly(c(0.0, 1.0)).unwrap().parabolic_power_norms(60).unwrap();
        let golden = ((1.0 + 5f64.sqrt()) / 2.0).ln();
        assert!((np.log_rate - golden).abs() < 0.01, "{}", np.log_rate);
        // local log-log slope on [30, 60] far above m - 1
        let local = (np.norms[59] / np.norms[29]).ln() / 2f64.ln();
        assert!(local > 10.0, "{local}");
    }

    #[test]
    fn growth_exponents() {
        let cfg = SamplerConfig { words: 60, matrices: 60, ..Default::default() };
        let t = trivial().growth_exponent(&cfg).unwrap();
        assert_eq!(t.alpha_emp, 0.0);
        assert!(t.unitary);
        let te = theta_eta().growth_exponent(&cfg).unwrap();
        assert_eq!(te.classification, GrowthClass::Polynomial);
        assert!(te.alpha_emp <= 0.05);
        assert!((te.max_ratio - 3f64.sqrt()).abs() < 1e-8);
        let np = nonpoly(c(0.0, 1.0)).unwrap().growth_exponent(&cfg).unwrap();
        assert_eq!(np.classification, GrowthClass::Exponential);
        let s2 = sym2().growth_exponent(&cfg).unwrap();
        assert!(!s2.unitary);
        // ‖Sym²γ‖ ≍ ‖γ‖²
        assert!((s2.alpha_emp - 2.0).abs() < 0.1, "{}", s2.alpha_emp);
        assert!(s2.sharp_max_ratio.unwrap().is_finite());
    }

    #[test]
    fn induce_trivial_from_full_group() {
        let rho = theta_eta();
        let ind = rho.induce(&[GroupElement::identity()]).unwrap();
        assert!(close(ind.mat_s(), rho.mat_s(), 0.0));
        assert!(close(ind.mat_t(), rho.mat_t(), 0.0));
    }

    #[test]
    fn induce_from_gamma2() {
        let h = Subgroup::Gamma(2);
        let reps = moebius::left_transversal(&h).unwrap();
        assert_eq!(reps.len(), 6);
        let ind = trivial().restrict(h.clone()).induce(&reps).unwrap();
        assert_eq!(ind.dim(), 6);
        assert!(ind.validate().pass);
        // permutation matrix
        for m in [ind.mat_s(), ind.mat_t()] {
            assert!(m.iter().all(|z| z.norm() < 1e-15 || (z - 1.0).norm() < 1e-15));
            assert!(is_block_monomial(m, 1, 1e-12));
        }
        assert!(ind.is_polynomial_growth().unwrap());
        // induction preserves polynomial growth for a nontrivial restriction too
        let te = theta_eta().restrict(h.clone());
        assert_eq!(te.is_polynomial_growth().unwrap(), te.induce(&reps).unwrap().is_polynomial_growth().unwrap());
        let np = nonpoly(c(0.0, 1.0)).unwrap().restrict(h);
        assert!(!np.is_polynomial_growth().unwrap());
        assert!(!np.induce(&reps).unwrap().is_polynomial_growth().unwrap());
    }

    #[test]
    fn bad_transversals() {
        let h = Subgroup::Gamma(2);
        let mut reps = moebius::left_transversal(&h).unwrap();
        let rho = trivial().restrict(h);
        reps.swap(0, 1);
        assert!(rho.induce(&reps).is_err());
        reps.swap(0, 1);
        reps[2] = reps[1].mul(&GroupElement::t().pow(2));
        assert!(rho.induce(&reps).is_err());
        assert!(rho.induce(&reps[..5]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let rho = theta_eta();
        let js = serde_json::to_string(&rho).unwrap();
        assert!(js.starts_with(r#"{"m":3,"s":[[[0.0,0.0]"#));
        assert!(js.ends_with(r#""group":"PSL2Z"}"#));
        let back: Representation = serde_json::from_str(&js).unwrap();
        assert!(close(back.mat_t(), rho.mat_t(), 0.0));
        let sub: Representation =
            serde_json::from_str(r#"{"m":1,"s":[[[1,0]]],"t":[[[1,0]]],"group":{"gamma0":4}}"#).unwrap();
        assert_eq!(sub.group(), &Subgroup::Gamma0(4));
        assert!(serde_json::from_str::<Representation>(r#"{"m":2,"s":[[[1,0]]],"t":[[[1,0]]]}"#).is_err());
    }

    #[test]
    fn memo_agrees() {
        let rho = sym2().with_memo();
        let g = gm(5, 3, 3, 2);
        let first = rho.evaluate(&g).unwrap();
        let second = rho.clone().evaluate(&g).unwrap();
        assert!(close(&first, &second, 0.0));
        assert!(close(&first, &sym2().evaluate(&g).unwrap(), 0.0));
    }

    #[test]
    fn eta4_twist_is_representation() {
        let tw = eta4_twist(&theta_eta()).unwrap();
        assert!(tw.validate().pass);
        let mut got: Vec<f64> = tw.t_exponents().unwrap().iter().map(Mu::value).collect();
        let mut exact: Vec<f64> =
            tw.exact_t_exponents().unwrap().iter().map(|r| *r.numer() as f64 / *r.denom() as f64).collect();
        got.sort_by(f64::total_cmp);
        exact.sort_by(f64::total_cmp);
        for (a, b) in got.iter().zip(&exact) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn jordan_reconstruction_on_builtins() {
        for name in BUILTIN_NAMES {
            let rho = builtin(name, &BuiltinParams::default()).unwrap().rep;
            for m in [rho.mat_s(), rho.mat_t()] {
                let j = jordan_form(m, DEFAULT_TOL).unwrap();
                let back = &j.p * j.jordan_matrix() * j.p.clone().try_inverse().unwrap();
                assert!(frobenius(&(back - m)) <= 1e-7 * frobenius(m), "{name}");
                assert_eq!(j.blocks.iter().map(|b| b.size).sum::<usize>(), rho.dim());
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn mu_inverts_exp(x in 0.0f64..1.0) {
            let lambda = cis(2.0 * PI * x);
            match mu(lambda).unwrap() {
                Mu::Real(y) => {
                    let d = (y - x).abs();
                    prop_assert!(d.min(1.0 - d) < 1e-12);
                }
                Mu::Rational(r) => {
                    // snapped to a nearby root of unity
                    let y = *r.numer() as f64 / *r.denom() as f64;
                    prop_assert!((cis(2.0 * PI * y) - lambda).norm() < MU_SNAP_TOL);
                }
            }
        }

        #[test]
        fn mu_exact_on_roots_of_unity(q in 1i64..=1000, p in 0i64..1000) {
            let p = p % q;
            let got = mu(cis(2.0 * PI * p as f64 / q as f64)).unwrap();
            let val = got.value();
            let want = p as f64 / q as f64;
            prop_assert!(matches!(got, Mu::Rational(_)));
            let d = (val - want).abs();
            prop_assert!(d.min(1.0 - d) < 1e-9);
        }

        #[test]
        fn homomorphism(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for name in BUILTIN_NAMES {
                let rho = builtin(name, &BuiltinParams::default()).unwrap().rep;
                for _ in 0..8 {
                    let g1 = moebius::random_element(&mut rng, 50);
                    let g2 = moebius::random_element(&mut rng, 50);
                    let lhs = rho.evaluate(&g1.mul(&g2)).unwrap();
                    let (r1, r2) = (rho.evaluate(&g1).unwrap(), rho.evaluate(&g2).unwrap());
                    let scale = (frobenius(&r1) * frobenius(&r2)).max(1.0);
                    let rhs = r1 * r2;
                    prop_assert!(max_abs(&(lhs - rhs)) <= 1e-8 * scale, "{}", name);
                }
            }
        }

        #[test]
        fn induced_homomorphism_and_blocks(seed in any::<u64>()) {
            let h = Subgroup::Gamma0(3);
            let reps = moebius::left_transversal(&h).unwrap();
            let rho = theta_eta().restrict(h);
            let ind = rho.induce(&reps).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..4 {
                let g1 = moebius::random_element(&mut rng, 30);
                let g2 = moebius::random_element(&mut rng, 30);
                let direct = rho.induced_image(&reps, &g1.mul(&g2));
                prop_assert!(is_block_monomial(&direct, 3, 1e-12));
                let via_gens = ind.evaluate(&g1).unwrap() * ind.evaluate(&g2).unwrap();
                prop_assert!(max_abs(&(direct - via_gens)) < 1e-9);
            }
        }
    }
}
