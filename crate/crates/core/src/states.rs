//! n-superqubit states: coefficient tensors a_{X1…Xn} with X ∈ {0, 1, •}.
//!
//! Kets are stored densely in base-3 order with the first slot most
//! significant; digit 2 stands for •.

use num_complex::Complex64;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::grassmann::{AlgebraContext, GrassmannError, GrassmannNumber, VANISH_TOL};
use crate::superlinear::{GradedShape, SuperError, Supermatrix};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StateError {
    #[error("parity violation at ket |{ket}>")]
    ParityViolation { ket: String },
    #[error(transparent)]
    Grassmann(#[from] GrassmannError),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("state is unphysical: norm body {0} is not positive")]
    Unphysical(f64),
    #[error("bad slots: {0}")]
    BadSlots(String),
    #[error("bad ket label {0:?}")]
    BadLabel(String),
    #[error(transparent)]
    Super(#[from] SuperError),
}

/// 0 and 1 are even, • is odd.
pub fn symbol_degree(symbol: u8) -> u8 {
    u8::from(symbol == 2)
}

pub fn ket_count(n: usize) -> usize {
    3usize.pow(n as u32)
}

/// Slot symbols of ket `index`, first slot first.
pub fn ket_symbols(index: usize, n: usize) -> Vec<u8> {
    let mut out = vec![0u8; n];
    let mut rest = index;
    for k in (0..n).rev() {
        out[k] = (rest % 3) as u8;
        rest /= 3;
    }
    out
}

pub fn ket_index(symbols: &[u8]) -> usize {
    symbols.iter().fold(0, |acc, s| acc * 3 + *s as usize)
}

/// Number of • slots mod 2.
pub fn ket_degree(index: usize, n: usize) -> u8 {
    (ket_symbols(index, n).iter().map(|s| symbol_degree(*s)).sum::<u8>()) % 2
}

/// Text label using `0`, `1` and `*`.
pub fn ket_label(index: usize, n: usize) -> String {
    ket_symbols(index, n)
        .iter()
        .map(|s| match s {
            0 => '0',
            1 => '1',
            _ => '*',
        })
        .collect()
}

pub fn parse_ket_label(label: &str) -> Result<Vec<u8>, StateError> {
    label
        .chars()
        .map(|ch| match ch {
            '0' => Ok(0),
            '1' => Ok(1),
            '*' | '•' => Ok(2),
            _ => Err(StateError::BadLabel(label.to_string())),
        })
        .collect()
}

/// Graded shape of the n-fold product (2|1)^⊗n.
pub fn tensor_shape(n: usize) -> GradedShape {
    GradedShape::from_grades((0..ket_count(n)).map(|i| ket_degree(i, n)).collect())
}

/// (B_n, F_n) = ((3^n + 1)/2, (3^n - 1)/2).
pub fn boson_fermion_count(n: usize) -> (usize, usize) {
    let total = ket_count(n);
    (total.div_ceil(2), (total - 1) / 2)
}

fn sign(exponent: u8) -> f64 {
    if exponent.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuperState {
    n: usize,
    ctx: AlgebraContext,
    grade: u8,
    coeffs: Vec<GrassmannNumber>,
}

impl SuperState {
    /// Validates deg(a_X) = grade + deg X for every nonzero coefficient.
    pub fn new(
        n: usize,
        ctx: AlgebraContext,
        grade: u8,
        coeffs: Vec<GrassmannNumber>,
    ) -> Result<Self, StateError> {
        if n == 0 || coeffs.len() != ket_count(n) {
            return Err(StateError::ShapeMismatch(format!(
                "{} coefficients for {} superqubits",
                coeffs.len(),
                n
            )));
        }
        let grade = grade % 2;
        for (i, c) in coeffs.iter().enumerate() {
            if c.context() != ctx {
                return Err(GrassmannError::ContextMismatch(ctx.pair_count(), c.context().pair_count()).into());
            }
            if !c.is_zero() && c.parity() != Some((grade + ket_degree(i, n)) % 2) {
                return Err(StateError::ParityViolation { ket: ket_label(i, n) });
            }
        }
        Ok(SuperState { n, ctx, grade, coeffs })
    }

    /// Even state from `(label, coefficient)` pairs; repeated labels add.
    pub fn from_labels<'a, I>(n: usize, ctx: AlgebraContext, terms: I) -> Result<Self, StateError>
    where
        I: IntoIterator<Item = (&'a str, GrassmannNumber)>,
    {
        let mut coeffs = vec![GrassmannNumber::zero(ctx); ket_count(n)];
        for (label, c) in terms {
            let symbols = parse_ket_label(label)?;
            if symbols.len() != n {
                return Err(StateError::BadLabel(label.to_string()));
            }
            let idx = ket_index(&symbols);
            coeffs[idx] = coeffs[idx].checked_add(&c)?;
        }
        Self::new(n, ctx, 0, coeffs)
    }

    /// Even state with complex body coefficients.
    pub fn from_complex(n: usize, ctx: AlgebraContext, values: &[Complex64]) -> Result<Self, StateError> {
        let coeffs = values.iter().map(|v| GrassmannNumber::scalar(ctx, *v)).collect();
        Self::new(n, ctx, 0, coeffs)
    }

    pub fn zero(n: usize, ctx: AlgebraContext, grade: u8) -> Self {
        SuperState { n, ctx, grade: grade % 2, coeffs: vec![GrassmannNumber::zero(ctx); ket_count(n)] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn context(&self) -> AlgebraContext {
        self.ctx
    }

    pub fn grade(&self) -> u8 {
        self.grade
    }

    pub fn coeffs(&self) -> &[GrassmannNumber] {
        &self.coeffs
    }

    pub fn coeff(&self, symbols: &[u8]) -> &GrassmannNumber {
        &self.coeffs[ket_index(symbols)]
    }

    pub fn coeff_by_label(&self, label: &str) -> Result<&GrassmannNumber, StateError> {
        let symbols = parse_ket_label(label)?;
        if symbols.len() != self.n {
            return Err(StateError::BadLabel(label.to_string()));
        }
        Ok(self.coeff(&symbols))
    }

    pub fn embed(&self, ctx: AlgebraContext) -> Result<Self, StateError> {
        let coeffs = self.coeffs.iter().map(|c| c.embed(ctx)).collect::<Result<Vec<_>, _>>()?;
        Ok(SuperState { n: self.n, ctx, grade: self.grade, coeffs })
    }

    /// Coefficientwise map; the result is revalidated with `grade`.
    pub fn map(&self, grade: u8, f: impl Fn(usize, &GrassmannNumber) -> GrassmannNumber) -> Result<Self, StateError> {
        let coeffs = self.coeffs.iter().enumerate().map(|(i, c)| f(i, c)).collect();
        Self::new(self.n, self.ctx, grade, coeffs)
    }

    pub fn add(&self, other: &Self) -> Result<Self, StateError> {
        if self.n != other.n {
            return Err(StateError::ShapeMismatch("different superqubit counts".into()));
        }
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.checked_add(b))
            .collect::<Result<Vec<_>, _>>()?;
        let grade = if other.is_zero() { self.grade } else { other.grade };
        Self::new(self.n, self.ctx, grade, coeffs)
    }

    /// Multiplies every coefficient on the left by a pure scalar.
    pub fn left_mul(&self, alpha: &GrassmannNumber) -> Result<Self, StateError> {
        let parity = alpha.parity().ok_or(SuperError::ImpureScalar)?;
        let coeffs = self.coeffs.iter().map(|c| alpha.checked_mul(c)).collect::<Result<Vec<_>, _>>()?;
        Self::new(self.n, self.ctx, self.grade + parity, coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// True iff every coefficient of a ket containing • and every soul term vanish.
    pub fn is_classical(&self) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .all(|(i, c)| c.is_zero() || (!ket_symbols(i, self.n).contains(&2) && c.soul().is_zero()))
    }

    /// Copy with every ket containing a • set to zero.
    pub fn classical_part(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                if ket_symbols(i, self.n).contains(&2) {
                    GrassmannNumber::zero(self.ctx)
                } else {
                    c.clone()
                }
            })
            .collect();
        SuperState { n: self.n, ctx: self.ctx, grade: self.grade, coeffs }
    }

    pub fn norm_squared(&self) -> GrassmannNumber {
        inner_product(self, self).expect("a state is compatible with itself")
    }

    /// Body of ⟨ψ|ψ⟩ is real and above the vanishing tolerance.
    pub fn is_physical(&self) -> bool {
        let b = self.norm_squared().body();
        b.re > VANISH_TOL && b.im.abs() < VANISH_TOL
    }

    /// ψ · ⟨ψ|ψ⟩^(-1/2).
    pub fn normalize(&self) -> Result<Self, StateError> {
        let norm = self.norm_squared();
        if !self.is_physical() {
            return Err(StateError::Unphysical(norm.body().re));
        }
        let factor = norm.inv_sqrt()?;
        self.map(self.grade, |_, c| c * &factor)
    }

    pub fn density_matrix(&self) -> SuperDensityMatrix {
        let shape = tensor_shape(self.n);
        let dim = shape.len();
        let conj: Vec<GrassmannNumber> = self.coeffs.iter().map(|c| c.superstar()).collect();
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                let e = &self.coeffs[i] * &conj[j];
                entries.push(e.scale_real(sign(shape.deg(j))));
            }
        }
        let matrix =
            Supermatrix::new(shape.clone(), shape, 0, entries).expect("a_I a_J^# has parity deg I + deg J");
        SuperDensityMatrix { slots: (0..self.n).collect(), matrix }
    }

    /// Coefficients keyed by ket label, zero terms omitted.
    pub fn to_json(&self) -> Value {
        let mut map = Map::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                map.insert(ket_label(i, self.n), c.to_json());
            }
        }
        json!({
            "n": self.n,
            "pair_count": self.ctx.pair_count(),
            "grade": self.grade,
            "coefficients": Value::Object(map),
            "text": self.to_text(),
        })
    }

    /// Ket expression that parses back to this state.
    pub fn to_text(&self) -> String {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("({})|{}>", c, ket_label(i, self.n)))
            .collect();
        if parts.is_empty() {
            format!("0|{}>", "0".repeat(self.n))
        } else {
            parts.join(" + ")
        }
    }
}

/// ⟨φ|ψ⟩ = Σ (-1)^(deg i + deg i deg φ) φ_i^# ψ_i.
pub fn inner_product(phi: &SuperState, psi: &SuperState) -> Result<GrassmannNumber, StateError> {
    if phi.n != psi.n {
        return Err(StateError::ShapeMismatch("different superqubit counts".into()));
    }
    let mut acc = GrassmannNumber::zero(phi.ctx);
    for (i, (a, b)) in phi.coeffs.iter().zip(&psi.coeffs).enumerate() {
        if a.is_zero() || b.is_zero() {
            continue;
        }
        let d = ket_degree(i, phi.n);
        let term = a.superstar().checked_mul(b)?;
        acc += &term.scale_real(sign(d + d * phi.grade));
    }
    Ok(acc)
}

/// Density matrix over the listed slots of the original state.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperDensityMatrix {
    slots: Vec<usize>,
    matrix: Supermatrix,
}

impl SuperDensityMatrix {
    pub fn slots(&self) -> &[usize] {
        &self.slots
    }

    pub fn matrix(&self) -> &Supermatrix {
        &self.matrix
    }

    pub fn supertrace(&self) -> GrassmannNumber {
        self.matrix.supertrace().expect("density matrices are square")
    }

    /// Keeps the listed positions (indices into `slots()`), summing the
    /// others with (-1)^deg Y.
    pub fn partial_supertrace(&self, keep: &[usize]) -> Result<SuperDensityMatrix, StateError> {
        let n = self.slots.len();
        let mut sorted = keep.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.is_empty() || sorted.len() != keep.len() || sorted.iter().any(|&k| k >= n) {
            return Err(StateError::BadSlots(format!("cannot keep {keep:?} of {n} slots")));
        }
        let drop: Vec<usize> = (0..n).filter(|k| !sorted.contains(k)).collect();
        let (nk, nd) = (sorted.len(), drop.len());
        let shape = tensor_shape(nk);
        let dim = ket_count(nk);
        let ctx = self.matrix.context();
        let full = ket_count(n);
        let merge = |kept: &[u8], dropped: &[u8]| {
            let mut symbols = vec![0u8; n];
            for (pos, &slot) in sorted.iter().enumerate() {
                symbols[slot] = kept[pos];
            }
            for (pos, &slot) in drop.iter().enumerate() {
                symbols[slot] = dropped[pos];
            }
            ket_index(&symbols)
        };
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            let si = ket_symbols(i, nk);
            for j in 0..dim {
                let sj = ket_symbols(j, nk);
                let mut acc = GrassmannNumber::zero(ctx);
                for y in 0..ket_count(nd) {
                    let sy = ket_symbols(y, nd);
                    let (r, c) = (merge(&si, &sy), merge(&sj, &sy));
                    debug_assert!(r < full && c < full);
                    acc += &self.matrix.get(r, c).scale_real(sign(ket_degree(y, nd)));
                }
                entries.push(acc);
            }
        }
        let matrix = Supermatrix::new(shape.clone(), shape, 0, entries)?;
        Ok(SuperDensityMatrix { slots: sorted.iter().map(|&k| self.slots[k]).collect(), matrix })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> AlgebraContext {
        AlgebraContext::new(2)
    }

    fn r(x: f64) -> GrassmannNumber {
        GrassmannNumber::real(ctx(), x)
    }

    fn th(i: usize) -> GrassmannNumber {
        GrassmannNumber::generator(ctx(), i).unwrap()
    }

    fn bell() -> SuperState {
        let h = 0.5f64.sqrt();
        SuperState::from_labels(2, ctx(), [("00", r(h)), ("11", r(h))]).unwrap()
    }

    #[test]
    fn counts() {
        assert_eq!(boson_fermion_count(1), (2, 1));
        assert_eq!(boson_fermion_count(2), (5, 4));
        assert_eq!(boson_fermion_count(3), (14, 13));
        for n in 1..=4 {
            let s = tensor_shape(n);
            assert_eq!((s.even_dim(), s.odd_dim()), boson_fermion_count(n));
        }
    }

    #[test]
    fn make_state_examples() {
        let h = 0.5f64.sqrt();
        assert!(SuperState::from_labels(1, ctx(), [("0", r(h)), ("1", r(h))]).is_ok());
        let i = GrassmannNumber::scalar(ctx(), Complex64::new(0.0, 1.0));
        assert!(SuperState::from_labels(2, ctx(), [("**", i)]).is_ok());
        assert_eq!(
            SuperState::from_labels(2, ctx(), [("0*", r(1.0))]),
            Err(StateError::ParityViolation { ket: "0*".into() })
        );
        assert!(SuperState::from_labels(2, ctx(), [("0*", th(0))]).is_ok());
    }

    #[test]
    fn norms() {
        let i = GrassmannNumber::scalar(ctx(), Complex64::new(0.0, 1.0));
        let s = SuperState::from_labels(2, ctx(), [("**", i)]).unwrap();
        assert_eq!(s.norm_squared(), r(1.0));
        assert!(bell().norm_squared().approx_eq(&r(1.0), 1e-15));
    }

    #[test]
    fn physicality() {
        assert!(bell().is_physical());
        assert!(!SuperState::zero(2, ctx(), 0).is_physical());
        let odd = SuperState::new(1, ctx(), 1, vec![th(0), GrassmannNumber::zero(ctx()), GrassmannNumber::zero(ctx())])
            .unwrap();
        assert!(!odd.is_physical());
        assert!(matches!(odd.normalize(), Err(StateError::Unphysical(_))));
    }

    #[test]
    fn normalize_examples() {
        let s = SuperState::from_labels(1, ctx(), [("0", r(2.0))]).unwrap();
        assert_eq!(s.normalize().unwrap().coeff_by_label("0").unwrap(), &r(1.0));
    }

    #[test]
    fn one_superqubit_normalization_formula() {
        let (a0, a1) = (Complex64::new(0.6, 0.2), Complex64::new(-0.3, 0.5));
        let dot = &th(0) + &th(2).scale(Complex64::new(0.5, -1.0));
        let s = SuperState::from_labels(
            1,
            ctx(),
            [("0", GrassmannNumber::scalar(ctx(), a0)), ("1", GrassmannNumber::scalar(ctx(), a1)), ("*", dot.clone())],
        )
        .unwrap();
        let hat = s.normalize().unwrap();
        let body = a0.norm_sqr() + a1.norm_sqr();
        let correction = (&dot.superstar() * &dot).scale_real(0.5 * body.powf(-1.5));
        let factor = &r(body.powf(-0.5)) + &correction;
        for (label, a) in [("0", a0), ("1", a1)] {
            let expected = &GrassmannNumber::scalar(ctx(), a) * &factor;
            assert!(hat.coeff_by_label(label).unwrap().approx_eq(&expected, 1e-14));
        }
        let expected_dot = dot.scale_real(body.powf(-0.5));
        assert!(hat.coeff_by_label("*").unwrap().approx_eq(&expected_dot, 1e-14));
        assert!(hat.norm_squared().approx_eq(&r(1.0), 1e-14));
    }

    #[test]
    fn dot_dot_density_entry() {
        let i = GrassmannNumber::scalar(ctx(), Complex64::new(0.0, 1.0));
        let s = SuperState::from_labels(2, ctx(), [("**", i)]).unwrap();
        let rho = s.density_matrix();
        let idx = ket_index(&[2, 2]);
        assert_eq!(rho.matrix().get(idx, idx), &r(1.0));
    }

    #[test]
    fn bell_reduced_density() {
        let rho = bell().density_matrix();
        assert!(rho.supertrace().approx_eq(&r(1.0), 1e-15));
        let rho_a = rho.partial_supertrace(&[0]).unwrap();
        let expected = Supermatrix::from_real(
            ctx(),
            GradedShape::superqubit(),
            GradedShape::superqubit(),
            0,
            &[0.5, 0.0, 0.0, 0.0, 0.5, 0.0, 0.0, 0.0, 0.0],
        )
        .unwrap();
        assert!(rho_a.matrix().approx_eq(&expected, 1e-15));
        assert_eq!(rho_a.slots(), &[0]);
    }

    #[test]
    fn bad_slots() {
        let rho = bell().density_matrix();
        assert!(rho.partial_supertrace(&[2]).is_err());
        assert!(rho.partial_supertrace(&[]).is_err());
    }

    #[test]
    fn labels() {
        assert_eq!(ket_label(ket_index(&[0, 2, 1]), 3), "0*1");
        assert_eq!(parse_ket_label("1*0").unwrap(), vec![1, 2, 0]);
        assert!(parse_ket_label("12").is_err());
    }
}
