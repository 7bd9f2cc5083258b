//! Exact arithmetic on PSL2(Z), real Moebius maps, word decomposition over the
//! generators `s = (0,-1;1,0)` and `t = (1,1;0,1)`, cusps and congruence subgroups.

use std::collections::VecDeque;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of the extended upper half-plane `H ∪ R ∪ {∞}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Point {
    Finite(Complex64),
    Infinity,
}

impl Point {
    pub fn finite(self) -> Option<Complex64> {
        match self {
            Point::Finite(z) => Some(z),
            Point::Infinity => None,
        }
    }
}

impl From<Complex64> for Point {
    fn from(z: Complex64) -> Self {
        Point::Finite(z)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Classification {
    Identity,
    Elliptic,
    Parabolic,
    Hyperbolic,
}

/// An element of PSL2(Z), stored as a determinant-one integer matrix whose
/// bottom row has its first nonzero entry positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupElement {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
}

impl GroupElement {
    pub fn new(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Result<Self> {
        let det = &a * &d - &b * &c;
        if !det.is_one() {
            return Err(Error::Determinant(det.to_string()));
        }
        Ok(Self::normalized(a, b, c, d))
    }

    pub fn from_i64(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        Self::new(a.into(), b.into(), c.into(), d.into())
    }

    fn normalized(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Self {
        let flip = c.is_negative() || (c.is_zero() && d.is_negative());
        if flip {
            GroupElement { a: -a, b: -b, c: -c, d: -d }
        } else {
            GroupElement { a, b, c, d }
        }
    }

    pub fn identity() -> Self {
        Self::normalized(One::one(), Zero::zero(), Zero::zero(), One::one())
    }

    pub fn s() -> Self {
        Self::normalized(Zero::zero(), (-1).into(), One::one(), Zero::zero())
    }

    pub fn t() -> Self {
        Self::t_pow(&BigInt::one())
    }

    pub fn t_pow(n: &BigInt) -> Self {
        Self::normalized(One::one(), n.clone(), Zero::zero(), One::one())
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }
    pub fn b(&self) -> &BigInt {
        &self.b
    }
    pub fn c(&self) -> &BigInt {
        &self.c
    }
    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn entries_f64(&self) -> [f64; 4] {
        [big_f64(&self.a), big_f64(&self.b), big_f64(&self.c), big_f64(&self.d)]
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::normalized(
            &self.a * &other.a + &self.b * &other.c,
            &self.a * &other.b + &self.b * &other.d,
            &self.c * &other.a + &self.d * &other.c,
            &self.c * &other.b + &self.d * &other.d,
        )
    }

    pub fn inverse(&self) -> Self {
        Self::normalized(self.d.clone(), -&self.b, -&self.c, self.a.clone())
    }

    pub fn pow(&self, n: i64) -> Self {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = Self::identity();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&sq);
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul(&sq);
            }
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        self.b.is_zero() && self.c.is_zero() && self.a.is_one()
    }

    pub fn trace(&self) -> BigInt {
        &self.a + &self.d
    }

    /// Trace-based classification, exact.
    pub fn classify(&self) -> Classification {
        if self.is_identity() {
            return Classification::Identity;
        }
        let tr = self.trace().abs();
        let two = BigInt::from(2);
        match tr.cmp(&two) {
            std::cmp::Ordering::Less => Classification::Elliptic,
            std::cmp::Ordering::Equal => Classification::Parabolic,
            std::cmp::Ordering::Greater => Classification::Hyperbolic,
        }
    }

    pub fn apply(&self, p: Point) -> Point {
        let [a, b, c, d] = self.entries_f64();
        RealMoebius { a, b, c, d }.apply(p)
    }

    /// The automorphy factor `cτ + d`.
    pub fn j_factor(&self, tau: Complex64) -> Complex64 {
        let c = big_f64(&self.c);
        let d = big_f64(&self.d);
        tau * c + d
    }

    /// Frobenius norm `sqrt(a² + b² + c² + d²)`.
    pub fn norm(&self) -> f64 {
        let sq = &self.a * &self.a + &self.b * &self.b + &self.c * &self.c + &self.d * &self.d;
        big_f64(&sq).sqrt()
    }

    pub fn max_abs_entry(&self) -> BigInt {
        [&self.a, &self.b, &self.c, &self.d]
            .into_iter()
            .map(|x| x.abs())
            .max()
            .unwrap_or_default()
    }

    pub fn word(&self) -> Word {
        word_decompose(self)
    }

    pub fn to_real(&self) -> RealMoebius {
        let [a, b, c, d] = self.entries_f64();
        RealMoebius { a, b, c, d }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

fn big_f64(x: &BigInt) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum IntRepr {
    Num(i64),
    Str(String),
}

impl IntRepr {
    fn from_big(x: &BigInt) -> Self {
        match x.to_i64() {
            Some(v) => IntRepr::Num(v),
            None => IntRepr::Str(x.to_string()),
        }
    }

    fn into_big(self) -> std::result::Result<BigInt, String> {
        match self {
            IntRepr::Num(v) => Ok(v.into()),
            IntRepr::Str(s) => s.trim().parse().map_err(|_| format!("not an integer: {s}")),
        }
    }
}

impl Serialize for GroupElement {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let rows = [
            [IntRepr::from_big(&self.a), IntRepr::from_big(&self.b)],
            [IntRepr::from_big(&self.c), IntRepr::from_big(&self.d)],
        ];
        rows.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for GroupElement {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let [[a, b], [c, d]] = <[[IntRepr; 2]; 2]>::deserialize(de)?;
        let conv = |x: IntRepr| x.into_big().map_err(de::Error::custom);
        GroupElement::new(conv(a)?, conv(b)?, conv(c)?, conv(d)?).map_err(de::Error::custom)
    }
}

/// A real Moebius transformation; used for cusp-scaling matrices and
/// floating-point evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RealMoebius {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl RealMoebius {
    pub const DET_TOL: f64 = 1e-12;

    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let det = a * d - b * c;
        if (det - 1.0).abs() > Self::DET_TOL {
            return Err(Error::Determinant(det.to_string()));
        }
        Ok(Self { a, b, c, d }.normalized())
    }

    pub fn identity() -> Self {
        Self { a: 1.0, b: 0.0, c: 0.0, d: 1.0 }
    }

    pub fn normalized(self) -> Self {
        if self.c < 0.0 || (self.c == 0.0 && self.d < 0.0) {
            Self { a: -self.a, b: -self.b, c: -self.c, d: -self.d }
        } else {
            self
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
        .normalized()
    }

    pub fn inverse(&self) -> Self {
        Self { a: self.d, b: -self.b, c: -self.c, d: self.a }.normalized()
    }

    pub fn apply(&self, p: Point) -> Point {
        match p {
            Point::Infinity => {
                if self.c == 0.0 {
                    Point::Infinity
                } else {
                    Point::Finite(Complex64::new(self.a / self.c, 0.0))
                }
            }
            Point::Finite(z) => {
                let den = z * self.c + self.d;
                if den == Complex64::new(0.0, 0.0) {
                    Point::Infinity
                } else {
                    Point::Finite((z * self.a + self.b) / den)
                }
            }
        }
    }

    pub fn j_factor(&self, tau: Complex64) -> Complex64 {
        tau * self.c + self.d
    }

    pub fn classify(&self, tol: f64) -> Classification {
        let near_id = (self.a - 1.0).abs() <= tol
            && self.b.abs() <= tol
            && self.c.abs() <= tol
            && (self.d - 1.0).abs() <= tol;
        if near_id {
            return Classification::Identity;
        }
        let tr = (self.a + self.d).abs();
        if (tr - 2.0).abs() <= tol {
            Classification::Parabolic
        } else if tr < 2.0 {
            Classification::Elliptic
        } else {
            Classification::Hyperbolic
        }
    }
}

/// Generators of PSL2(Z).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Gen {
    S,
    T,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Letter {
    pub gen: Gen,
    pub exp: i64,
}

/// A word in `s` and `t`. The exponent of `s` is always 1 since `s² = 1`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn evaluate(&self) -> GroupElement {
        self.0.iter().fold(GroupElement::identity(), |acc, l| match l.gen {
            Gen::S => acc.mul(&GroupElement::s()),
            Gen::T => acc.mul(&GroupElement::t_pow(&l.exp.into())),
        })
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|l| match (l.gen, l.exp) {
                (Gen::S, _) => "s".to_string(),
                (Gen::T, 1) => "t".to_string(),
                (Gen::T, e) => format!("t^{e}"),
            })
            .collect();
        write!(f, "{}", parts.join("·"))
    }
}

/// Nearest integer to `num/den` (ties rounded up).
fn round_div(num: &BigInt, den: &BigInt) -> BigInt {
    let two = BigInt::from(2);
    (num * &two + den).div_floor(&(den * &two))
}

/// Bottom-row Euclidean reduction: repeatedly strip `t^q` (q nearest to d/c) and
/// `s` from the right until the element is a pure translation.
pub fn word_decompose(g: &GroupElement) -> Word {
    let (mut a, mut b, mut c, mut d) = (g.a.clone(), g.b.clone(), g.c.clone(), g.d.clone());
    let mut stripped: Vec<Letter> = Vec::new();
    while !c.is_zero() {
        let q = round_div(&d, &c);
        if !q.is_zero() {
            // right-multiply by t^{-q}
            b -= &q * &a;
            d -= &q * &c;
            stripped.push(Letter { gen: Gen::T, exp: q.to_i64().expect("t exponent fits in i64") });
        }
        // right-multiply by s^{-1} = (0,1;-1,0)
        let (na, nb, nc, nd) = (-b, a, -d, c);
        a = na;
        b = nb;
        c = nc;
        d = nd;
        stripped.push(Letter { gen: Gen::S, exp: 1 });
    }
    // now ±(1, n; 0, 1)
    let n = if d.is_negative() { -b } else { b };
    let mut letters = Vec::with_capacity(stripped.len() + 1);
    if !n.is_zero() {
        letters.push(Letter { gen: Gen::T, exp: n.to_i64().expect("t exponent fits in i64") });
    }
    letters.extend(stripped.into_iter().rev());
    Word(letters)
}

/// A cusp of PSL2(Z): infinity or a reduced rational.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Cusp {
    Infinity,
    Rational(Ratio<i64>),
}

impl Cusp {
    pub fn rational(p: i64, q: i64) -> Self {
        Cusp::Rational(Ratio::new(p, q))
    }

    pub fn to_point(self) -> Point {
        match self {
            Cusp::Infinity => Point::Infinity,
            Cusp::Rational(r) => Point::Finite(Complex64::new(*r.numer() as f64 / *r.denom() as f64, 0.0)),
        }
    }
}

impl fmt::Display for Cusp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cusp::Infinity => write!(f, "∞"),
            Cusp::Rational(r) => write!(f, "{r}"),
        }
    }
}

/// `A_x = (x, -1; 1, 0)` for finite `x`, the identity at infinity. `A_x · ∞ = x`.
pub fn scaling_matrix(x: Option<f64>) -> RealMoebius {
    match x {
        None => RealMoebius::identity(),
        Some(x) => RealMoebius { a: x, b: -1.0, c: 1.0, d: 0.0 },
    }
}

/// An element of SL2(Z) sending `∞` to the cusp, built from the extended gcd.
pub fn integral_scaling_matrix(cusp: Cusp) -> GroupElement {
    match cusp {
        Cusp::Infinity => GroupElement::identity(),
        Cusp::Rational(r) => {
            let (p, q) = (*r.numer(), *r.denom());
            // x p + y q = 1, so (p, -y; q, x) has determinant one
            let eg = p.extended_gcd(&q);
            GroupElement::from_i64(p, -eg.y, q, eg.x).expect("extended gcd gives determinant one")
        }
    }
}

/// Predicate-backed subgroup used for non-congruence or ad hoc examples.
pub struct CustomSubgroup {
    pub name: String,
    pub index_bound: u64,
    #[allow(clippy::type_complexity)]
    pub contains: Box<dyn Fn(&GroupElement) -> bool + Send + Sync>,
}

/// Finite-index subgroup of PSL2(Z), described by a membership predicate and
/// an index bound.
#[derive(Clone, Default)]
pub enum Subgroup {
    #[default]
    Full,
    Gamma(u64),
    Gamma0(u64),
    Custom(Arc<CustomSubgroup>),
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Subgroup::Full, Subgroup::Full) => true,
            (Subgroup::Gamma(a), Subgroup::Gamma(b)) => a == b,
            (Subgroup::Gamma0(a), Subgroup::Gamma0(b)) => a == b,
            (Subgroup::Custom(a), Subgroup::Custom(b)) => Arc::ptr_eq(a, b),
            _ => false,
        }
    }
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut ps = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            ps.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        ps.push(n);
    }
    ps
}

impl Subgroup {
    pub fn name(&self) -> String {
        match self {
            Subgroup::Full => "PSL2Z".into(),
            Subgroup::Gamma(n) => format!("Gamma({n})"),
            Subgroup::Gamma0(n) => format!("Gamma0({n})"),
            Subgroup::Custom(c) => c.name.clone(),
        }
    }

    pub fn is_full(&self) -> bool {
        matches!(self, Subgroup::Full) || matches!(self, Subgroup::Gamma(1) | Subgroup::Gamma0(1))
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        match self {
            Subgroup::Full => true,
            Subgroup::Gamma(n) => {
                let n = BigInt::from(*n);
                let m = |x: &BigInt| x.mod_floor(&n);
                let (a, b, c, d) = (m(&g.a), m(&g.b), m(&g.c), m(&g.d));
                let one = BigInt::one().mod_floor(&n);
                let minus_one = BigInt::from(-1).mod_floor(&n);
                b.is_zero() && c.is_zero() && ((a == one && d == one) || (a == minus_one && d == minus_one))
            }
            Subgroup::Gamma0(n) => g.c.mod_floor(&BigInt::from(*n)).is_zero(),
            Subgroup::Custom(c) => (c.contains)(g),
        }
    }

    /// Index in PSL2(Z) for the congruence families; the declared bound otherwise.
    pub fn index_bound(&self) -> u64 {
        match self {
            Subgroup::Full => 1,
            Subgroup::Gamma(1) | Subgroup::Gamma0(1) => 1,
            Subgroup::Gamma(2) => 6,
            Subgroup::Gamma(n) => {
                let mut num = n * n * n;
                let mut den = 2;
                for p in prime_factors(*n) {
                    num *= p * p - 1;
                    den *= p * p;
                }
                num / den
            }
            Subgroup::Gamma0(n) => {
                let mut num = *n;
                let mut den = 1;
                for p in prime_factors(*n) {
                    num *= p + 1;
                    den *= p;
                }
                num / den
            }
            Subgroup::Custom(c) => c.index_bound,
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum SubgroupRepr {
    Named(String),
    Gamma { gamma: u64 },
    Gamma0 { gamma0: u64 },
}

impl Serialize for Subgroup {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Subgroup::Full => SubgroupRepr::Named("PSL2Z".into()).serialize(ser),
            Subgroup::Gamma(n) => SubgroupRepr::Gamma { gamma: *n }.serialize(ser),
            Subgroup::Gamma0(n) => SubgroupRepr::Gamma0 { gamma0: *n }.serialize(ser),
            Subgroup::Custom(_) => Err(serde::ser::Error::custom("custom subgroups cannot be serialized")),
        }
    }
}

impl<'de> Deserialize<'de> for Subgroup {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        match SubgroupRepr::deserialize(de)? {
            SubgroupRepr::Named(s) if s == "PSL2Z" => Ok(Subgroup::Full),
            SubgroupRepr::Named(s) => Err(de::Error::custom(format!("unknown group `{s}`"))),
            SubgroupRepr::Gamma { gamma } if gamma >= 1 => Ok(Subgroup::Gamma(gamma)),
            SubgroupRepr::Gamma0 { gamma0 } if gamma0 >= 1 => Ok(Subgroup::Gamma0(gamma0)),
            _ => Err(de::Error::custom("level must be positive")),
        }
    }
}

/// Smallest `h > 0` with `A t^h A⁻¹ ∈ H`, where `A ∈ SL2(Z)` sends `∞` to the cusp.
pub fn cusp_width(group: &Subgroup, cusp: Cusp) -> Result<u64> {
    let a = integral_scaling_matrix(cusp);
    let a_inv = a.inverse();
    let bound = group.index_bound();
    let t = GroupElement::t();
    let mut conj = a.clone();
    for h in 1..=bound {
        conj = conj.mul(&t);
        if group.contains(&conj.mul(&a_inv)) {
            return Ok(h);
        }
    }
    Err(Error::CuspWidth(bound))
}

/// Writes `γ = t^{n h} γ̃` with `ã² + b̃²` minimal over integer `n`.
pub fn eichler_shift(g: &GroupElement, h: u64) -> (BigInt, GroupElement) {
    let h = BigInt::from(h);
    let num = &g.a * &g.c + &g.b * &g.d;
    let den = &h * (&g.c * &g.c + &g.d * &g.d);
    let lo = num.div_floor(&den);
    let cost = |n: &BigInt| {
        let a = &g.a - n * &h * &g.c;
        let b = &g.b - n * &h * &g.d;
        a.clone() * a + b.clone() * b
    };
    let hi = &lo + 1;
    let n = if cost(&hi) < cost(&lo) { hi } else { lo };
    let shifted = GroupElement::t_pow(&(-(&n * &h))).mul(g);
    (n, shifted)
}

/// Left coset representatives `γ_i` of `H` in PSL2(Z) with `γ_1 = 1`, found by
/// breadth-first search over the generators.
pub fn left_transversal(group: &Subgroup) -> Result<Vec<GroupElement>> {
    let bound = group.index_bound() as usize;
    let mut reps = vec![GroupElement::identity()];
    let gens = [GroupElement::s(), GroupElement::t(), GroupElement::t().inverse()];
    let mut queue = VecDeque::from([GroupElement::identity()]);
    while let Some(r) = queue.pop_front() {
        for g in &gens {
            let cand = g.mul(&r);
            let known = reps.iter().any(|x| group.contains(&x.inverse().mul(&cand)));
            if !known {
                if reps.len() == bound {
                    return Err(Error::Transversal(format!(
                        "more than {bound} cosets found; index bound is wrong"
                    )));
                }
                reps.push(cand.clone());
                queue.push_back(cand);
            }
        }
    }
    Ok(reps)
}

/// Cusps `γ_i · ∞` over a left transversal; covers every cusp class of `H`.
pub fn cusp_representatives(group: &Subgroup) -> Result<Vec<Cusp>> {
    let mut out: Vec<Cusp> = Vec::new();
    for g in left_transversal(group)? {
        let cusp = if g.c.is_zero() {
            Cusp::Infinity
        } else {
            let a = g.a.to_i64().ok_or_else(|| Error::Parameter("cusp too large".into()))?;
            let c = g.c.to_i64().ok_or_else(|| Error::Parameter("cusp too large".into()))?;
            Cusp::rational(a, c)
        };
        if !out.contains(&cusp) {
            out.push(cusp);
        }
    }
    Ok(out)
}

/// Uniform random element with `max |c|, |d| ≤ max_entry`, completed via the extended gcd.
pub fn random_element<R: Rng + ?Sized>(rng: &mut R, max_entry: i64) -> GroupElement {
    loop {
        let c: i64 = rng.random_range(-max_entry..=max_entry);
        let d: i64 = rng.random_range(-max_entry..=max_entry);
        if c == 0 && d == 0 {
            continue;
        }
        let eg = c.extended_gcd(&d);
        if eg.gcd != 1 {
            continue;
        }
        // a d - b c = 1 with x c + y d = 1: a = y, b = -x
        return GroupElement::from_i64(eg.y, -eg.x, c, d).expect("determinant one by construction");
    }
}

/// Random alternating word `(s t^{e_1})(s t^{e_2})...` of the given length.
pub fn random_word<R: Rng + ?Sized>(rng: &mut R, len: usize, max_exp: i64) -> Word {
    let mut letters = Vec::with_capacity(2 * len);
    for _ in 0..len {
        let mut e = 0;
        while e == 0 {
            e = rng.random_range(-max_exp..=max_exp);
        }
        letters.push(Letter { gen: Gen::S, exp: 1 });
        letters.push(Letter { gen: Gen::T, exp: e });
    }
    Word(letters)
}
