//! Graded shapes, supervectors and supermatrices over a Grassmann algebra.

use num_complex::Complex64;
use serde_json::{json, Value};
use thiserror::Error;

use crate::grassmann::{AlgebraContext, GrassmannError, GrassmannNumber, ZERO_TOL};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SuperError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("entry ({row}, {col}) has the wrong parity for an array of grade {grade}")]
    Incompatible { row: usize, col: usize, grade: u8 },
    #[error("scalar is neither pure even nor pure odd")]
    ImpureScalar,
    #[error("array grades differ: {0} vs {1}")]
    GradeMismatch(u8, u8),
    #[error("operation requires an even supermatrix")]
    OddGrade,
    #[error("both diagonal blocks are singular")]
    BothBlocksSingular,
    #[error(transparent)]
    Grassmann(#[from] GrassmannError),
}

/// Grade assignment of an index set. Grades need not be monotone, which
/// tensor products of (p|q) shapes require.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GradedShape {
    grades: Vec<u8>,
}

impl GradedShape {
    /// Even indices first, then odd ones.
    pub fn new(even_dim: usize, odd_dim: usize) -> Self {
        let mut grades = vec![0u8; even_dim];
        grades.extend(std::iter::repeat_n(1u8, odd_dim));
        GradedShape { grades }
    }

    pub fn from_grades(grades: Vec<u8>) -> Self {
        GradedShape { grades: grades.into_iter().map(|g| g & 1).collect() }
    }

    /// The (2|1) superqubit shape with index order (0, 1, •).
    pub fn superqubit() -> Self {
        Self::new(2, 1)
    }

    pub fn len(&self) -> usize {
        self.grades.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grades.is_empty()
    }

    pub fn deg(&self, i: usize) -> u8 {
        self.grades[i]
    }

    pub fn grades(&self) -> &[u8] {
        &self.grades
    }

    pub fn even_dim(&self) -> usize {
        self.grades.iter().filter(|g| **g == 0).count()
    }

    pub fn odd_dim(&self) -> usize {
        self.grades.iter().filter(|g| **g == 1).count()
    }

    pub fn even_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.grades[i] == 0).collect()
    }

    pub fn odd_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.grades[i] == 1).collect()
    }

    /// Lengths of maximal constant-grade runs, starting with an even run
    /// (which may be empty).
    pub fn runs(&self) -> Vec<usize> {
        let mut runs = Vec::new();
        let mut current = 0u8;
        let mut length = 0usize;
        for &g in &self.grades {
            if g == current {
                length += 1;
            } else {
                runs.push(length);
                current = g;
                length = 1;
            }
        }
        runs.push(length);
        runs
    }

    /// Composite shape with index `i * other.len() + j` of grade `deg i + deg j`.
    pub fn tensor(&self, other: &GradedShape) -> GradedShape {
        let mut grades = Vec::with_capacity(self.len() * other.len());
        for &a in &self.grades {
            for &b in &other.grades {
                grades.push((a + b) % 2);
            }
        }
        GradedShape { grades }
    }

    pub fn to_json(&self) -> Value {
        json!({"even": self.even_dim(), "odd": self.odd_dim(), "grades": self.grades})
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

fn sign(exponent: u8) -> f64 {
    if exponent.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

fn check_entry(entry: &GrassmannNumber, expected: u8) -> bool {
    entry.is_zero() || entry.parity() == Some(expected % 2)
}

/// Column supervector.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperVector {
    shape: GradedShape,
    grade: u8,
    entries: Vec<GrassmannNumber>,
}

impl SuperVector {
    pub fn new(shape: GradedShape, grade: u8, entries: Vec<GrassmannNumber>) -> Result<Self, SuperError> {
        if entries.len() != shape.len() {
            return Err(SuperError::ShapeMismatch(format!(
                "{} entries for a shape of length {}",
                entries.len(),
                shape.len()
            )));
        }
        for (i, e) in entries.iter().enumerate() {
            if !check_entry(e, grade + shape.deg(i)) {
                return Err(SuperError::Incompatible { row: i, col: 0, grade });
            }
        }
        Ok(SuperVector { shape, grade: grade % 2, entries })
    }

    pub fn shape(&self) -> &GradedShape {
        &self.shape
    }

    pub fn grade(&self) -> u8 {
        self.grade
    }

    pub fn entries(&self) -> &[GrassmannNumber] {
        &self.entries
    }
}

/// Dense supermatrix with a definite array grade.
#[derive(Debug, Clone, PartialEq)]
pub struct Supermatrix {
    ctx: AlgebraContext,
    rows: GradedShape,
    cols: GradedShape,
    grade: u8,
    entries: Vec<GrassmannNumber>,
}

impl Supermatrix {
    /// Row-major entries; validates deg(M_ij) = grade + deg i + deg j.
    pub fn new(
        rows: GradedShape,
        cols: GradedShape,
        grade: u8,
        entries: Vec<GrassmannNumber>,
    ) -> Result<Self, SuperError> {
        if entries.len() != rows.len() * cols.len() {
            return Err(SuperError::ShapeMismatch(format!(
                "{} entries for a {}x{} matrix",
                entries.len(),
                rows.len(),
                cols.len()
            )));
        }
        let ctx = entries
            .first()
            .map(|e| e.context())
            .ok_or_else(|| SuperError::ShapeMismatch("empty supermatrix".into()))?;
        let grade = grade % 2;
        for (k, e) in entries.iter().enumerate() {
            if e.context() != ctx {
                return Err(GrassmannError::ContextMismatch(ctx.pair_count(), e.context().pair_count()).into());
            }
            let (i, j) = (k / cols.len(), k % cols.len());
            if !check_entry(e, grade + rows.deg(i) + cols.deg(j)) {
                return Err(SuperError::Incompatible { row: i, col: j, grade });
            }
        }
        Ok(Supermatrix { ctx, rows, cols, grade, entries })
    }

    pub fn from_fn(
        ctx: AlgebraContext,
        rows: GradedShape,
        cols: GradedShape,
        grade: u8,
        mut f: impl FnMut(usize, usize) -> GrassmannNumber,
    ) -> Result<Self, SuperError> {
        let (r, c) = (rows.len(), cols.len());
        let entries = (0..r * c).map(|k| f(k / c, k % c)).collect::<Vec<_>>();
        if entries.is_empty() {
            return Ok(Supermatrix { ctx, rows, cols, grade: grade % 2, entries });
        }
        Self::new(rows, cols, grade, entries)
    }

    /// Matrix of body values.
    pub fn from_complex(
        ctx: AlgebraContext,
        rows: GradedShape,
        cols: GradedShape,
        grade: u8,
        values: &[Complex64],
    ) -> Result<Self, SuperError> {
        let c = cols.len();
        if values.len() != rows.len() * c {
            return Err(SuperError::ShapeMismatch(format!("{} values", values.len())));
        }
        Self::from_fn(ctx, rows, cols, grade, |i, j| GrassmannNumber::scalar(ctx, values[i * c + j]))
    }

    pub fn from_real(
        ctx: AlgebraContext,
        rows: GradedShape,
        cols: GradedShape,
        grade: u8,
        values: &[f64],
    ) -> Result<Self, SuperError> {
        let v: Vec<Complex64> = values.iter().map(|x| Complex64::new(*x, 0.0)).collect();
        Self::from_complex(ctx, rows, cols, grade, &v)
    }

    pub fn zeros(ctx: AlgebraContext, rows: GradedShape, cols: GradedShape, grade: u8) -> Self {
        let n = rows.len() * cols.len();
        Supermatrix { ctx, rows, cols, grade: grade % 2, entries: vec![GrassmannNumber::zero(ctx); n] }
    }

    pub fn identity(ctx: AlgebraContext, shape: GradedShape) -> Self {
        let n = shape.len();
        let mut m = Self::zeros(ctx, shape.clone(), shape, 0);
        for i in 0..n {
            m.entries[i * n + i] = GrassmannNumber::one(ctx);
        }
        m
    }

    fn raw(&self, rows: GradedShape, cols: GradedShape, grade: u8, entries: Vec<GrassmannNumber>) -> Self {
        Supermatrix { ctx: self.ctx, rows, cols, grade: grade % 2, entries }
    }

    pub fn context(&self) -> AlgebraContext {
        self.ctx
    }

    pub fn rows(&self) -> &GradedShape {
        &self.rows
    }

    pub fn cols(&self) -> &GradedShape {
        &self.cols
    }

    pub fn grade(&self) -> u8 {
        self.grade
    }

    pub fn entries(&self) -> &[GrassmannNumber] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &GrassmannNumber {
        &self.entries[i * self.cols.len() + j]
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    fn require_square(&self) -> Result<(), SuperError> {
        if self.is_square() {
            Ok(())
        } else {
            Err(SuperError::ShapeMismatch("square supermatrix with equal row and column grades required".into()))
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|e| e.max_abs()).fold(0.0, f64::max)
    }

    pub fn norm1(&self) -> f64 {
        self.entries.iter().map(|e| e.norm1()).sum()
    }

    /// Largest entrywise coefficient difference is at most `tol`.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.entries.iter().zip(&other.entries).all(|(a, b)| a.approx_eq(b, tol))
    }

    /// Same entries re-expressed in a larger algebra.
    pub fn embed(&self, ctx: AlgebraContext) -> Result<Self, SuperError> {
        let entries = self.entries.iter().map(|e| e.embed(ctx)).collect::<Result<Vec<_>, _>>()?;
        Ok(Supermatrix { ctx, rows: self.rows.clone(), cols: self.cols.clone(), grade: self.grade, entries })
    }

    pub fn add(&self, other: &Self) -> Result<Self, SuperError> {
        self.combine(other, 1.0)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SuperError> {
        self.combine(other, -1.0)
    }

    fn combine(&self, other: &Self, s: f64) -> Result<Self, SuperError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(SuperError::ShapeMismatch("addition of differently shaped supermatrices".into()));
        }
        let grade = match (self.is_zero(), other.is_zero()) {
            (_, true) => self.grade,
            (true, false) => other.grade,
            _ if self.grade == other.grade => self.grade,
            _ => return Err(SuperError::GradeMismatch(self.grade, other.grade)),
        };
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.checked_add(&b.scale_real(s)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(self.raw(self.rows.clone(), self.cols.clone(), grade, entries))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let entries = self.entries.iter().map(|e| e.scale(c)).collect();
        self.raw(self.rows.clone(), self.cols.clone(), self.grade, entries)
    }

    pub fn scale_real(&self, x: f64) -> Self {
        self.scale(Complex64::new(x, 0.0))
    }

    pub fn neg(&self) -> Self {
        self.scale_real(-1.0)
    }

    /// Graded scalar multiplication from the left or right.
    pub fn scalar_mul(&self, side: Side, alpha: &GrassmannNumber) -> Result<Self, SuperError> {
        let a = alpha.parity().ok_or(SuperError::ImpureScalar)?;
        if alpha.context() != self.ctx {
            return Err(GrassmannError::ContextMismatch(alpha.context().pair_count(), self.ctx.pair_count()).into());
        }
        let c = self.cols.len();
        let mut entries = Vec::with_capacity(self.entries.len());
        for (k, e) in self.entries.iter().enumerate() {
            let (i, j) = (k / c, k % c);
            entries.push(match side {
                Side::Left => (alpha * e).scale_real(sign(self.rows.deg(i) * a)),
                Side::Right => (e * alpha).scale_real(sign(self.cols.deg(j) * a)),
            });
        }
        Ok(self.raw(self.rows.clone(), self.cols.clone(), self.grade + a, entries))
    }

    pub fn matmul(&self, other: &Self) -> Result<Self, SuperError> {
        if self.cols != other.rows {
            return Err(SuperError::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows.len(),
                self.cols.len(),
                other.rows.len(),
                other.cols.len()
            )));
        }
        if self.ctx != other.ctx {
            return Err(GrassmannError::ContextMismatch(self.ctx.pair_count(), other.ctx.pair_count()).into());
        }
        let (r, k, c) = (self.rows.len(), self.cols.len(), other.cols.len());
        let mut entries = Vec::with_capacity(r * c);
        for i in 0..r {
            for j in 0..c {
                let mut acc = GrassmannNumber::zero(self.ctx);
                for l in 0..k {
                    let a = &self.entries[i * k + l];
                    let b = &other.entries[l * c + j];
                    if !a.is_zero() && !b.is_zero() {
                        acc += &(a * b);
                    }
                }
                entries.push(acc);
            }
        }
        Ok(self.raw(self.rows.clone(), other.cols.clone(), self.grade + other.grade, entries))
    }

    /// M^st_{ij} = (-1)^((deg j + deg M)(deg i + deg j)) M_{ji}.
    pub fn supertranspose(&self) -> Self {
        let (r, c) = (self.rows.len(), self.cols.len());
        let mut entries = Vec::with_capacity(r * c);
        for i in 0..c {
            for j in 0..r {
                let (di, dj) = (self.cols.deg(i), self.rows.deg(j));
                entries.push(self.entries[j * c + i].scale_real(sign((dj + self.grade) * (di + dj))));
            }
        }
        self.raw(self.cols.clone(), self.rows.clone(), self.grade, entries)
    }

    /// Plain transpose without signs.
    pub fn transpose(&self) -> Self {
        let (r, c) = (self.rows.len(), self.cols.len());
        let mut entries = Vec::with_capacity(r * c);
        for i in 0..c {
            for j in 0..r {
                entries.push(self.entries[j * c + i].clone());
            }
        }
        self.raw(self.cols.clone(), self.rows.clone(), self.grade, entries)
    }

    /// str M = Σ (-1)^((deg i + deg M) deg i) M_ii.
    pub fn supertrace(&self) -> Result<GrassmannNumber, SuperError> {
        self.require_square()?;
        let n = self.rows.len();
        let mut acc = GrassmannNumber::zero(self.ctx);
        for i in 0..n {
            let d = self.rows.deg(i);
            acc += &self.entries[i * n + i].scale_real(sign((d + self.grade) * d));
        }
        Ok(acc)
    }

    /// M^‡ = (M^st)^# entrywise.
    pub fn superadjoint(&self) -> Self {
        let st = self.supertranspose();
        let entries = st.entries.iter().map(|e| e.superstar()).collect();
        self.raw(st.rows, st.cols, self.grade, entries)
    }

    /// Entrywise superstar.
    pub fn superstar(&self) -> Self {
        let entries = self.entries.iter().map(|e| e.superstar()).collect();
        self.raw(self.rows.clone(), self.cols.clone(), self.grade, entries)
    }

    fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Vec<GrassmannNumber> {
        let c = self.cols.len();
        rows.iter().flat_map(|i| cols.iter().map(move |j| self.entries[i * c + j].clone())).collect()
    }

    /// Ber M via the D-block form, falling back to the A-block form.
    pub fn berezinian(&self) -> Result<GrassmannNumber, SuperError> {
        self.require_square()?;
        if self.grade != 0 {
            return Err(SuperError::OddGrade);
        }
        let ev = self.rows.even_indices();
        let od = self.rows.odd_indices();
        let (p, q) = (ev.len(), od.len());
        let a = self.submatrix(&ev, &ev);
        let b = self.submatrix(&ev, &od);
        let c = self.submatrix(&od, &ev);
        let d = self.submatrix(&od, &od);
        let det_d = det_commuting(self.ctx, &d, q);
        if det_d.body().norm() > ZERO_TOL {
            let d_inv = inverse_commuting(self.ctx, &d, q)?;
            let bdc = dense_mul(self.ctx, &dense_mul(self.ctx, &b, &d_inv, p, q, q), &c, p, q, p);
            let schur: Vec<_> = a.iter().zip(&bdc).map(|(x, y)| x - y).collect();
            return Ok(det_commuting(self.ctx, &schur, p) * det_d.inverse()?);
        }
        let det_a = det_commuting(self.ctx, &a, p);
        if det_a.body().norm() > ZERO_TOL {
            let a_inv = inverse_commuting(self.ctx, &a, p)?;
            let cab = dense_mul(self.ctx, &dense_mul(self.ctx, &c, &a_inv, q, p, p), &b, q, p, q);
            let schur: Vec<_> = d.iter().zip(&cab).map(|(x, y)| x - y).collect();
            if let Ok(inv) = det_commuting(self.ctx, &schur, q).inverse() {
                return Ok(det_a * inv);
            }
        }
        Err(SuperError::BothBlocksSingular)
    }

    /// Graded tensor product with composite index `i * n + j` and entry
    /// (-1)^(deg N deg X2 + deg Y1 (deg M + deg X1 + deg X2)) M_{X1X2} N_{Y1Y2}.
    pub fn tensor_product(&self, other: &Self) -> Result<Self, SuperError> {
        if self.ctx != other.ctx {
            return Err(GrassmannError::ContextMismatch(self.ctx.pair_count(), other.ctx.pair_count()).into());
        }
        let rows = self.rows.tensor(&other.rows);
        let cols = self.cols.tensor(&other.cols);
        let (r1, c1, r2, c2) = (self.rows.len(), self.cols.len(), other.rows.len(), other.cols.len());
        let mut entries = Vec::with_capacity(rows.len() * cols.len());
        for x1 in 0..r1 {
            for y1 in 0..r2 {
                for x2 in 0..c1 {
                    for y2 in 0..c2 {
                        let m = &self.entries[x1 * c1 + x2];
                        let n = &other.entries[y1 * c2 + y2];
                        if m.is_zero() || n.is_zero() {
                            entries.push(GrassmannNumber::zero(self.ctx));
                            continue;
                        }
                        let (dx1, dx2, dy1) = (self.rows.deg(x1), self.cols.deg(x2), other.rows.deg(y1));
                        let e = other.grade * dx2 + dy1 * (self.grade + dx1 + dx2);
                        entries.push((m * n).scale_real(sign(e)));
                    }
                }
            }
        }
        Ok(self.raw(rows, cols, self.grade + other.grade, entries))
    }

    /// [[M, N]] = MN - (-1)^(deg M deg N) NM.
    pub fn superbracket(&self, other: &Self) -> Result<Self, SuperError> {
        if !self.is_square() || self.rows != other.rows || other.rows != other.cols {
            return Err(SuperError::ShapeMismatch("superbracket needs equal square shapes".into()));
        }
        let mn = self.matmul(other)?;
        let nm = other.matmul(self)?;
        mn.sub(&nm.scale_real(sign(self.grade * other.grade)))
    }

    /// Scaling-and-squaring Taylor exponential of an even supermatrix.
    pub fn matrix_exp(&self) -> Result<Self, SuperError> {
        self.require_square()?;
        if self.grade != 0 {
            return Err(SuperError::OddGrade);
        }
        let norm = self.norm1();
        let mut squarings = 0u32;
        while norm / 2f64.powi(squarings as i32) > 0.5 && squarings < 32 {
            squarings += 1;
        }
        let x = self.scale_real(1.0 / 2f64.powi(squarings as i32));
        let id = Self::identity(self.ctx, self.rows.clone());
        let mut term = id.clone();
        let mut sum = id;
        for k in 1..200 {
            term = term.matmul(&x)?.scale_real(1.0 / k as f64);
            sum = sum.add(&term)?;
            if term.norm1() < 1e-16 {
                break;
            }
        }
        for _ in 0..squarings {
            sum = sum.matmul(&sum)?;
        }
        Ok(sum)
    }

    pub fn to_json(&self) -> Value {
        let c = self.cols.len();
        let rows: Vec<Value> = (0..self.rows.len())
            .map(|i| Value::Array((0..c).map(|j| self.entries[i * c + j].to_json()).collect()))
            .collect();
        json!({
            "row_shape": self.rows.to_json(),
            "col_shape": self.cols.to_json(),
            "grade": self.grade,
            "entries": rows,
        })
    }

    /// Applies the matrix to a column supervector.
    pub fn apply(&self, v: &SuperVector) -> Result<SuperVector, SuperError> {
        if &self.cols != v.shape() {
            return Err(SuperError::ShapeMismatch("vector shape differs from matrix columns".into()));
        }
        let c = self.cols.len();
        let entries = (0..self.rows.len())
            .map(|i| {
                let mut acc = GrassmannNumber::zero(self.ctx);
                for j in 0..c {
                    acc += &(&self.entries[i * c + j] * &v.entries()[j]);
                }
                acc
            })
            .collect();
        SuperVector::new(self.rows.clone(), self.grade + v.grade(), entries)
    }
}

fn dense_mul(
    ctx: AlgebraContext,
    a: &[GrassmannNumber],
    b: &[GrassmannNumber],
    r: usize,
    k: usize,
    c: usize,
) -> Vec<GrassmannNumber> {
    let mut out = Vec::with_capacity(r * c);
    for i in 0..r {
        for j in 0..c {
            let mut acc = GrassmannNumber::zero(ctx);
            for l in 0..k {
                acc += &(&a[i * k + l] * &b[l * c + j]);
            }
            out.push(acc);
        }
    }
    out
}

/// Laplace-expansion determinant of an n×n matrix with mutually commuting
/// (even) entries.
pub fn det_commuting(ctx: AlgebraContext, m: &[GrassmannNumber], n: usize) -> GrassmannNumber {
    match n {
        0 => GrassmannNumber::one(ctx),
        1 => m[0].clone(),
        _ => {
            let mut acc = GrassmannNumber::zero(ctx);
            for j in 0..n {
                if m[j].is_zero() {
                    continue;
                }
                let minor: Vec<GrassmannNumber> = (1..n)
                    .flat_map(|i| (0..n).filter(move |&k| k != j).map(move |k| (i, k)))
                    .map(|(i, k)| m[i * n + k].clone())
                    .collect();
                let term = &m[j] * &det_commuting(ctx, &minor, n - 1);
                acc += &term.scale_real(sign((j % 2) as u8));
            }
            acc
        }
    }
}

/// Inverse of a matrix with commuting entries via the adjugate.
pub fn inverse_commuting(
    ctx: AlgebraContext,
    m: &[GrassmannNumber],
    n: usize,
) -> Result<Vec<GrassmannNumber>, GrassmannError> {
    let inv_det = det_commuting(ctx, m, n).inverse()?;
    if n == 1 {
        return Ok(vec![inv_det]);
    }
    let mut out = vec![GrassmannNumber::zero(ctx); n * n];
    for i in 0..n {
        for j in 0..n {
            let minor: Vec<GrassmannNumber> = (0..n)
                .filter(|&r| r != j)
                .flat_map(|r| (0..n).filter(move |&c| c != i).map(move |c| (r, c)))
                .map(|(r, c)| m[r * n + c].clone())
                .collect();
            let cof = det_commuting(ctx, &minor, n - 1).scale_real(sign(((i + j) % 2) as u8));
            out[i * n + j] = &cof * &inv_det;
        }
    }
    Ok(out)
}
