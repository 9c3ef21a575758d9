//! Finite Grassmann algebras with paired generators.
//!
//! Generators `2j` and `2j + 1` form a superstar pair. Monomials are bitmasks,
//! read in ascending generator order.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_complex::Complex64;
use serde_json::{json, Value};
use thiserror::Error;

/// Coefficients below this magnitude (both parts) are dropped.
pub const ZERO_TOL: f64 = 1e-12;
/// A quantity "vanishes" for classification purposes below this magnitude.
pub const VANISH_TOL: f64 = 1e-9;

const MAX_PAIRS: usize = 32;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GrassmannError {
    #[error("context mismatch: {0} pairs vs {1} pairs")]
    ContextMismatch(usize, usize),
    #[error("function is singular at body {0}")]
    SingularBody(Complex64),
    #[error("no inverse: body vanishes")]
    NoInverse,
    #[error("not enough derivatives supplied: soul power {0} is nonzero")]
    InsufficientDerivatives(usize),
    #[error("generator index {index} outside algebra with {generators} generators")]
    BadGenerator { index: usize, generators: usize },
    #[error("monomial indices must be strictly ascending: {0:?}")]
    BadMonomial(Vec<usize>),
    #[error("malformed Grassmann JSON: {0}")]
    BadJson(String),
}

/// Algebra with `pair_count` conjugate generator pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AlgebraContext {
    pair_count: usize,
}

impl AlgebraContext {
    /// Panics unless `1 <= pair_count <= 32`.
    pub fn new(pair_count: usize) -> Self {
        assert!(
            (1..=MAX_PAIRS).contains(&pair_count),
            "pair_count must lie in 1..={MAX_PAIRS}, got {pair_count}"
        );
        AlgebraContext { pair_count }
    }

    pub fn pair_count(&self) -> usize {
        self.pair_count
    }

    pub fn generator_count(&self) -> usize {
        2 * self.pair_count
    }

    /// Same algebra with `extra` more pairs appended.
    pub fn with_extra_pairs(&self, extra: usize) -> Self {
        AlgebraContext::new(self.pair_count + extra)
    }

    fn check(&self, other: &AlgebraContext) -> Result<(), GrassmannError> {
        if self == other {
            Ok(())
        } else {
            Err(GrassmannError::ContextMismatch(self.pair_count, other.pair_count))
        }
    }
}

/// Product of distinct generators in ascending order, stored as a bitmask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(u64);

impl Monomial {
    pub const ONE: Monomial = Monomial(0);

    pub fn from_bits(bits: u64) -> Self {
        Monomial(bits)
    }

    pub fn from_indices(indices: &[usize]) -> Result<Self, GrassmannError> {
        let mut bits = 0u64;
        for w in indices.windows(2) {
            if w[0] >= w[1] {
                return Err(GrassmannError::BadMonomial(indices.to_vec()));
            }
        }
        for &i in indices {
            if i >= 2 * MAX_PAIRS {
                return Err(GrassmannError::BadMonomial(indices.to_vec()));
            }
            bits |= 1 << i;
        }
        Ok(Monomial(bits))
    }

    pub fn bits(&self) -> u64 {
        self.0
    }

    pub fn indices(&self) -> Vec<usize> {
        (0..64).filter(|i| self.0 >> i & 1 == 1).collect()
    }

    pub fn degree(&self) -> u32 {
        self.0.count_ones()
    }

    pub fn grade(&self) -> u8 {
        (self.0.count_ones() % 2) as u8
    }

    pub fn is_one(&self) -> bool {
        self.0 == 0
    }

    /// Sign and bitmask of `self * other`, or `None` if a generator repeats.
    pub fn product(self, other: Monomial) -> Option<(f64, Monomial)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        let mut swaps = 0u32;
        let mut b = other.0;
        while b != 0 {
            let j = b.trailing_zeros();
            swaps += (self.0 >> j).count_ones();
            b &= b - 1;
        }
        let sign = if swaps.is_multiple_of(2) { 1.0 } else { -1.0 };
        Some((sign, Monomial(self.0 | other.0)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Grade {
    Even,
    Odd,
    Mixed,
}

impl Grade {
    pub fn parity(&self) -> Option<u8> {
        match self {
            Grade::Even => Some(0),
            Grade::Odd => Some(1),
            Grade::Mixed => None,
        }
    }
}

/// Sparse element of the Grassmann algebra over the complex numbers.
#[derive(Debug, Clone, PartialEq)]
pub struct GrassmannNumber {
    ctx: AlgebraContext,
    terms: BTreeMap<Monomial, Complex64>,
}

fn negligible(c: Complex64) -> bool {
    c.re.abs() < ZERO_TOL && c.im.abs() < ZERO_TOL
}

impl GrassmannNumber {
    pub fn zero(ctx: AlgebraContext) -> Self {
        GrassmannNumber { ctx, terms: BTreeMap::new() }
    }

    pub fn one(ctx: AlgebraContext) -> Self {
        Self::scalar(ctx, Complex64::new(1.0, 0.0))
    }

    pub fn scalar(ctx: AlgebraContext, c: Complex64) -> Self {
        Self::from_terms(ctx, [(Monomial::ONE, c)])
    }

    pub fn real(ctx: AlgebraContext, x: f64) -> Self {
        Self::scalar(ctx, Complex64::new(x, 0.0))
    }

    /// The generator θ_i.
    pub fn generator(ctx: AlgebraContext, index: usize) -> Result<Self, GrassmannError> {
        if index >= ctx.generator_count() {
            return Err(GrassmannError::BadGenerator {
                index,
                generators: ctx.generator_count(),
            });
        }
        Ok(Self::from_terms(ctx, [(Monomial(1 << index), Complex64::new(1.0, 0.0))]))
    }

    /// Sums repeated monomials and prunes negligible coefficients.
    /// Monomials using generators outside the context are dropped.
    pub fn from_terms<I>(ctx: AlgebraContext, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Complex64)>,
    {
        let mask = ctx_mask(&ctx);
        let mut map: BTreeMap<Monomial, Complex64> = BTreeMap::new();
        for (m, c) in terms {
            if m.0 & !mask != 0 {
                continue;
            }
            *map.entry(m).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        map.retain(|_, c| !negligible(*c));
        GrassmannNumber { ctx, terms: map }
    }

    pub fn context(&self) -> AlgebraContext {
        self.ctx
    }

    pub fn terms(&self) -> impl Iterator<Item = (Monomial, Complex64)> + '_ {
        self.terms.iter().map(|(m, c)| (*m, *c))
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: Monomial) -> Complex64 {
        self.terms.get(&m).copied().unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn body(&self) -> Complex64 {
        self.coeff(Monomial::ONE)
    }

    pub fn soul(&self) -> Self {
        self.filter(|m| !m.is_one())
    }

    pub fn even_part(&self) -> Self {
        self.filter(|m| m.grade() == 0)
    }

    pub fn odd_part(&self) -> Self {
        self.filter(|m| m.grade() == 1)
    }

    fn filter(&self, keep: impl Fn(&Monomial) -> bool) -> Self {
        GrassmannNumber {
            ctx: self.ctx,
            terms: self.terms.iter().filter(|(m, _)| keep(m)).map(|(m, c)| (*m, *c)).collect(),
        }
    }

    pub fn grade(&self) -> Grade {
        let even = self.terms.keys().any(|m| m.grade() == 0);
        let odd = self.terms.keys().any(|m| m.grade() == 1);
        match (even, odd) {
            (_, false) => Grade::Even,
            (false, true) => Grade::Odd,
            (true, true) => Grade::Mixed,
        }
    }

    /// 0 or 1 for pure elements, `None` for mixed ones.
    pub fn parity(&self) -> Option<u8> {
        self.grade().parity()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True iff every coefficient magnitude is below `tol`.
    pub fn vanishes(&self, tol: f64) -> bool {
        self.terms.values().all(|c| c.norm() < tol)
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Sum of coefficient magnitudes; submultiplicative.
    pub fn norm1(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).sum()
    }

    /// Largest coefficient difference is at most `tol`.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        match self.checked_sub(other) {
            Ok(d) => d.max_abs() <= tol,
            Err(_) => false,
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, GrassmannError> {
        self.ctx.check(&other.ctx)?;
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            *terms.entry(*m).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        terms.retain(|_, c| !negligible(*c));
        Ok(GrassmannNumber { ctx: self.ctx, terms })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, GrassmannError> {
        self.checked_add(&other.neg_ref())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, GrassmannError> {
        self.ctx.check(&other.ctx)?;
        let mut terms: BTreeMap<Monomial, Complex64> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some((sign, m)) = ma.product(*mb) {
                    *terms.entry(m).or_insert(Complex64::new(0.0, 0.0)) += ca * cb * sign;
                }
            }
        }
        terms.retain(|_, c| !negligible(*c));
        Ok(GrassmannNumber { ctx: self.ctx, terms })
    }

    fn neg_ref(&self) -> Self {
        GrassmannNumber {
            ctx: self.ctx,
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::from_terms(self.ctx, self.terms.iter().map(|(m, v)| (*m, v * c)))
    }

    pub fn scale_real(&self, x: f64) -> Self {
        self.scale(Complex64::new(x, 0.0))
    }

    pub fn powi(&self, k: u32) -> Self {
        let mut out = Self::one(self.ctx);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Re-express in a context with at least as many pairs.
    pub fn embed(&self, ctx: AlgebraContext) -> Result<Self, GrassmannError> {
        if ctx.pair_count < self.ctx.pair_count {
            return Err(GrassmannError::ContextMismatch(self.ctx.pair_count, ctx.pair_count));
        }
        Ok(GrassmannNumber { ctx, terms: self.terms.clone() })
    }

    /// Superstar: θ_{2j} → θ_{2j+1}, θ_{2j+1} → −θ_{2j}, no reordering,
    /// coefficients conjugated.
    pub fn superstar(&self) -> Self {
        let terms = self.terms.iter().map(|(m, c)| {
            let mut image = Monomial::ONE;
            let mut sign = 1.0;
            for i in m.indices() {
                let (target, s) = if i % 2 == 0 { (i + 1, 1.0) } else { (i - 1, -1.0) };
                let (sg, next) = image
                    .product(Monomial(1 << target))
                    .expect("pair map is a bijection on generators");
                image = next;
                sign *= s * sg;
            }
            (image, c.conj() * sign)
        });
        Self::from_terms(self.ctx, terms.collect::<Vec<_>>())
    }

    /// Star: swaps each pair without sign and reverses factor order.
    pub fn star(&self) -> Self {
        let terms = self.terms.iter().map(|(m, c)| {
            let mut image = Monomial::ONE;
            let mut sign = 1.0;
            for i in m.indices().into_iter().rev() {
                let target = i ^ 1;
                let (sg, next) = image
                    .product(Monomial(1 << target))
                    .expect("pair swap is a bijection on generators");
                image = next;
                sign *= sg;
            }
            (image, c.conj() * sign)
        });
        Self::from_terms(self.ctx, terms.collect::<Vec<_>>())
    }

    /// Σ_k f^(k)(body)/k! · soul^k with `derivs[k] = f^(k)(body)`.
    pub fn analytic_apply(&self, derivs: &[Complex64]) -> Result<Self, GrassmannError> {
        if derivs.iter().any(|d| !d.re.is_finite() || !d.im.is_finite()) {
            return Err(GrassmannError::SingularBody(self.body()));
        }
        let soul = self.soul();
        let mut power = Self::one(self.ctx);
        let mut out = Self::zero(self.ctx);
        let mut factorial = 1.0;
        let mut k = 0usize;
        while !power.is_zero() {
            if k >= derivs.len() {
                return Err(GrassmannError::InsufficientDerivatives(k));
            }
            if k > 0 {
                factorial *= k as f64;
            }
            out += &power.scale(derivs[k] / factorial);
            power = &power * &soul;
            k += 1;
        }
        Ok(out)
    }

    fn apply_with(&self, deriv: impl Fn(usize, Complex64) -> Complex64) -> Result<Self, GrassmannError> {
        let body = self.body();
        let n = self.ctx.generator_count() + 1;
        let derivs: Vec<Complex64> = (0..n).map(|k| deriv(k, body)).collect();
        self.analytic_apply(&derivs)
    }

    /// Multiplicative inverse via the finite geometric series in soul/body.
    pub fn inverse(&self) -> Result<Self, GrassmannError> {
        let body = self.body();
        if body.norm() < ZERO_TOL {
            return Err(GrassmannError::NoInverse);
        }
        let ratio = self.soul().scale(-1.0 / body);
        let mut term = Self::one(self.ctx);
        let mut sum = Self::zero(self.ctx);
        while !term.is_zero() {
            sum += &term;
            term = &term * &ratio;
        }
        Ok(sum.scale(1.0 / body))
    }

    /// Principal branch of z^p for a power `p`, extended through the soul.
    pub fn powf(&self, p: f64) -> Result<Self, GrassmannError> {
        let body = self.body();
        if body.norm() < ZERO_TOL {
            if self.is_zero() && p > 0.0 {
                return Ok(Self::zero(self.ctx));
            }
            return Err(GrassmannError::SingularBody(body));
        }
        self.apply_with(|k, b| {
            let mut coeff = 1.0;
            for j in 0..k {
                coeff *= p - j as f64;
            }
            b.powf(p - k as f64) * coeff
        })
    }

    pub fn sqrt(&self) -> Result<Self, GrassmannError> {
        self.powf(0.5)
    }

    pub fn inv_sqrt(&self) -> Result<Self, GrassmannError> {
        self.powf(-0.5)
    }

    pub fn exp(&self) -> Self {
        self.apply_with(|_, b| b.exp()).expect("exp is entire")
    }

    /// `[{monomial, re, im}, ...]` in canonical order.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(m, c)| json!({"monomial": m.indices(), "re": round_sig(c.re), "im": round_sig(c.im)}))
                .collect(),
        )
    }

    pub fn from_json(ctx: AlgebraContext, value: &Value) -> Result<Self, GrassmannError> {
        let bad = |s: &str| GrassmannError::BadJson(s.to_string());
        let items = value.as_array().ok_or_else(|| bad("expected an array"))?;
        let mut terms = Vec::with_capacity(items.len());
        for item in items {
            let idx: Vec<usize> = item
                .get("monomial")
                .and_then(Value::as_array)
                .ok_or_else(|| bad("missing monomial"))?
                .iter()
                .map(|v| v.as_u64().map(|x| x as usize).ok_or_else(|| bad("monomial index")))
                .collect::<Result<_, _>>()?;
            let m = Monomial::from_indices(&idx)?;
            if m.0 & !ctx_mask(&ctx) != 0 {
                return Err(GrassmannError::BadGenerator {
                    index: *idx.last().unwrap_or(&0),
                    generators: ctx.generator_count(),
                });
            }
            let re = item.get("re").and_then(Value::as_f64).ok_or_else(|| bad("missing re"))?;
            let im = item.get("im").and_then(Value::as_f64).ok_or_else(|| bad("missing im"))?;
            terms.push((m, Complex64::new(re, im)));
        }
        Ok(Self::from_terms(ctx, terms))
    }
}

fn ctx_mask(ctx: &AlgebraContext) -> u64 {
    let n = ctx.generator_count();
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Rounds to 15 significant digits.
pub fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{:.14e}", x).parse().unwrap_or(x)
}

fn fmt_complex(c: Complex64) -> String {
    if c.im == 0.0 {
        format!("{}", c.re)
    } else if c.re == 0.0 {
        format!("{}i", c.im)
    } else {
        format!("{}{:+}i", c.re, c.im)
    }
}

/// Parseable form using `g<k>` for θ_{2k} and `g<k>#` for θ_{2k+1}.
impl fmt::Display for GrassmannNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (m, c)) in self.terms.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({})", fmt_complex(*c))?;
            for i in m.indices() {
                write!(f, "*g{}{}", i / 2, if i % 2 == 1 { "#" } else { "" })?;
            }
        }
        Ok(())
    }
}

impl Neg for GrassmannNumber {
    type Output = GrassmannNumber;
    fn neg(self) -> Self::Output {
        self.neg_ref()
    }
}

impl Neg for &GrassmannNumber {
    type Output = GrassmannNumber;
    fn neg(self) -> Self::Output {
        self.neg_ref()
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&GrassmannNumber> for &GrassmannNumber {
            type Output = GrassmannNumber;
            /// Panics on context mismatch; use the `checked_*` form to recover.
            fn $method(self, rhs: &GrassmannNumber) -> GrassmannNumber {
                self.$checked(rhs).expect("Grassmann numbers from different contexts")
            }
        }
        impl $trait<GrassmannNumber> for GrassmannNumber {
            type Output = GrassmannNumber;
            fn $method(self, rhs: GrassmannNumber) -> GrassmannNumber {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&GrassmannNumber> for GrassmannNumber {
            type Output = GrassmannNumber;
            fn $method(self, rhs: &GrassmannNumber) -> GrassmannNumber {
                (&self).$method(rhs)
            }
        }
        impl $trait<GrassmannNumber> for &GrassmannNumber {
            type Output = GrassmannNumber;
            fn $method(self, rhs: GrassmannNumber) -> GrassmannNumber {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl AddAssign<&GrassmannNumber> for GrassmannNumber {
    fn add_assign(&mut self, rhs: &GrassmannNumber) {
        self.ctx.check(&rhs.ctx).expect("Grassmann numbers from different contexts");
        for (m, c) in &rhs.terms {
            let entry = self.terms.entry(*m).or_insert(Complex64::new(0.0, 0.0));
            *entry += c;
            if negligible(*entry) {
                self.terms.remove(m);
            }
        }
    }
}

impl AddAssign<GrassmannNumber> for GrassmannNumber {
    fn add_assign(&mut self, rhs: GrassmannNumber) {
        *self += &rhs;
    }
}

impl SubAssign<&GrassmannNumber> for GrassmannNumber {
    fn sub_assign(&mut self, rhs: &GrassmannNumber) {
        *self += &rhs.neg_ref();
    }
}

impl Mul<Complex64> for &GrassmannNumber {
    type Output = GrassmannNumber;
    fn mul(self, rhs: Complex64) -> GrassmannNumber {
        self.scale(rhs)
    }
}

impl Mul<f64> for &GrassmannNumber {
    type Output = GrassmannNumber;
    fn mul(self, rhs: f64) -> GrassmannNumber {
        self.scale_real(rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn ctx() -> AlgebraContext {
        AlgebraContext::new(2)
    }

    fn th(i: usize) -> GrassmannNumber {
        GrassmannNumber::generator(ctx(), i).unwrap()
    }

    fn mono(idx: &[usize], coeff: Complex64) -> GrassmannNumber {
        GrassmannNumber::from_terms(ctx(), [(Monomial::from_indices(idx).unwrap(), coeff)])
    }

    #[test]
    fn add_examples() {
        assert_eq!(&th(0) + &th(0), mono(&[0], c(2.0)));
        let one = GrassmannNumber::one(ctx());
        let t01 = &th(0) * &th(1);
        assert_eq!((&one + &t01) + (&one - &t01), GrassmannNumber::real(ctx(), 2.0));
    }

    #[test]
    fn anticommutation_and_nilpotency() {
        assert_eq!(&th(0) * &th(1), mono(&[0, 1], c(1.0)));
        assert_eq!(&th(1) * &th(0), mono(&[0, 1], c(-1.0)));
        assert!((&th(0) * &th(0)).is_zero());
    }

    #[test]
    fn product_expansion() {
        let x = GrassmannNumber::real(ctx(), 2.0) + &th(0) * &th(1);
        let y = GrassmannNumber::real(ctx(), 3.0) + &th(2) * &th(3);
        let expected = GrassmannNumber::from_terms(
            ctx(),
            [
                (Monomial::ONE, c(6.0)),
                (Monomial::from_indices(&[0, 1]).unwrap(), c(3.0)),
                (Monomial::from_indices(&[2, 3]).unwrap(), c(2.0)),
                (Monomial::from_indices(&[0, 1, 2, 3]).unwrap(), c(1.0)),
            ],
        );
        assert_eq!(x * y, expected);
    }

    #[test]
    fn grades() {
        let three = GrassmannNumber::real(ctx(), 3.0);
        assert_eq!((&three + &th(0) * &th(1)).grade(), Grade::Even);
        assert_eq!(th(0).grade(), Grade::Odd);
        assert_eq!((GrassmannNumber::one(ctx()) + th(0)).grade(), Grade::Mixed);
        assert_eq!(GrassmannNumber::zero(ctx()).grade(), Grade::Even);
    }

    #[test]
    fn superstar_examples() {
        let i = GrassmannNumber::scalar(ctx(), Complex64::new(0.0, 1.0));
        assert_eq!(i.superstar(), GrassmannNumber::scalar(ctx(), Complex64::new(0.0, -1.0)));
        assert_eq!(th(0).superstar().superstar(), -th(0));
        let z = &th(0) * &th(2);
        assert_eq!(z.superstar(), &th(1) * &th(3));
        assert_eq!(z.superstar().superstar(), z);
    }

    #[test]
    fn star_examples() {
        assert_eq!(th(0).star().star(), th(0));
        let z = &th(0) * &th(2);
        assert_eq!(z.star(), mono(&[1, 3], c(-1.0)));
        let iz = th(0).scale(Complex64::new(0.0, 1.0));
        assert_eq!(iz.star(), th(1).scale(Complex64::new(0.0, -1.0)));
    }

    #[test]
    fn analytic_examples() {
        let t01 = &th(0) * &th(1);
        let e = t01.exp();
        assert_eq!(e, GrassmannNumber::one(ctx()) + &t01);

        let z = GrassmannNumber::real(ctx(), 4.0) + &t01;
        let r = z.inv_sqrt().unwrap();
        let expected = GrassmannNumber::real(ctx(), 0.5) + t01.scale_real(-1.0 / 16.0);
        assert!(r.approx_eq(&expected, 1e-15));
        assert!((&(&r * &r) * &z).approx_eq(&GrassmannNumber::one(ctx()), 1e-15));

        let one = GrassmannNumber::one(ctx());
        assert_eq!(one.inv_sqrt().unwrap(), one);
    }

    #[test]
    fn singular_body() {
        assert!(matches!(th(0).inv_sqrt(), Err(GrassmannError::SingularBody(_))));
        let derivs = [Complex64::new(f64::INFINITY, 0.0)];
        assert!(th(0).analytic_apply(&derivs).is_err());
    }

    #[test]
    fn inverse_examples() {
        let two = GrassmannNumber::real(ctx(), 2.0);
        assert_eq!(two.inverse().unwrap(), GrassmannNumber::real(ctx(), 0.5));
        let t01 = &th(0) * &th(1);
        let z = GrassmannNumber::one(ctx()) + &t01;
        assert_eq!(z.inverse().unwrap(), GrassmannNumber::one(ctx()) - &t01);
        assert_eq!(th(0).inverse(), Err(GrassmannError::NoInverse));
    }

    #[test]
    fn context_mismatch() {
        let a = GrassmannNumber::one(AlgebraContext::new(1));
        let b = GrassmannNumber::one(AlgebraContext::new(2));
        assert_eq!(a.checked_add(&b), Err(GrassmannError::ContextMismatch(1, 2)));
        assert!(a.checked_mul(&b).is_err());
    }

    #[test]
    fn json_round_trip() {
        let z = GrassmannNumber::real(ctx(), 1.5) + th(0).scale(Complex64::new(0.0, -2.0)) + &th(1) * &th(2);
        let v = z.to_json();
        assert_eq!(v[0]["monomial"], json!([]));
        assert_eq!(GrassmannNumber::from_json(ctx(), &v).unwrap(), z);
    }

    #[test]
    fn monomial_order_checked() {
        assert!(Monomial::from_indices(&[2, 1]).is_err());
        assert!(Monomial::from_indices(&[1, 1]).is_err());
    }
}
