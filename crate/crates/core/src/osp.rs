//! osp(p|2q) generators in the (2q|p) convention, the osp(1|2) bracket
//! table, group membership tests and the action on superqubit tensors.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use thiserror::Error;

use crate::grassmann::{AlgebraContext, GrassmannNumber};
use crate::states::{ket_count, ket_symbols, symbol_degree, ket_index, StateError, SuperState};
use crate::superlinear::{GradedShape, Side, SuperError, Supermatrix};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OspError {
    #[error("bracket mismatch for [[{left}, {right}]]: expected {expected}, got {actual}")]
    BracketMismatch { left: String, right: String, expected: String, actual: String },
    #[error("slot {slot} out of range for {n} superqubits")]
    BadSlot { slot: usize, n: usize },
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("operation needs osp(1|2)")]
    NotOsp12,
    #[error(transparent)]
    Super(#[from] SuperError),
    #[error(transparent)]
    State(#[from] StateError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OspParams {
    pub p: usize,
    pub q: usize,
}

impl OspParams {
    pub const OSP12: OspParams = OspParams { p: 1, q: 1 };

    pub fn dim(&self) -> usize {
        2 * self.q + self.p
    }

    pub fn shape(&self) -> GradedShape {
        GradedShape::new(2 * self.q, self.p)
    }
}

/// Basis element of osp(1|2): P_{A1A2} (A1 ≤ A2) or Q_A = P_{A•}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Generator {
    P(u8, u8),
    Q(u8),
}

impl Generator {
    /// Bracket-table order: T01, T00, T11, T0, T1.
    pub const ALL: [Generator; 5] =
        [Generator::P(0, 1), Generator::P(0, 0), Generator::P(1, 1), Generator::Q(0), Generator::Q(1)];

    /// Index pair (X1, X2) with • = 2.
    pub fn indices(&self) -> (usize, usize) {
        match *self {
            Generator::P(a, b) => (a as usize, b as usize),
            Generator::Q(a) => (a as usize, 2),
        }
    }

    pub fn grade(&self) -> u8 {
        match self {
            Generator::P(..) => 0,
            Generator::Q(_) => 1,
        }
    }

    /// Name of the unscaled generator T.
    pub fn t_name(&self) -> String {
        match *self {
            Generator::P(a, b) => format!("T{a}{b}"),
            Generator::Q(a) => format!("T{a}"),
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Generator::P(a, b) => write!(f, "P{a}{b}"),
            Generator::Q(a) => write!(f, "Q{a}"),
        }
    }
}

impl FromStr for Generator {
    type Err = OspError;

    /// Accepts `P00`, `P01`, `P10`, `P11`, `Q0`, `Q1`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || OspError::UnknownGenerator(s.to_string());
        let digits: Vec<u8> = s
            .chars()
            .skip(1)
            .map(|c| c.to_digit(2).map(|d| d as u8).ok_or_else(bad))
            .collect::<Result<_, _>>()?;
        match (s.chars().next(), digits.as_slice()) {
            (Some('P'), [a, b]) => Ok(Generator::P(*a.min(b), *a.max(b))),
            (Some('Q'), [a]) => Ok(Generator::Q(*a)),
            _ => Err(bad()),
        }
    }
}

fn sign(exponent: usize) -> f64 {
    if exponent.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Generators T_{X1X2} together with the metric G and invariant tensor E.
#[derive(Debug, Clone)]
pub struct GeneratorSet {
    params: OspParams,
    ctx: AlgebraContext,
    epsilon01: f64,
    e: Supermatrix,
    g: Supermatrix,
    t: Vec<((usize, usize), Supermatrix)>,
}

/// Builds the generators with ε_{01} = 1.
pub fn build_generators(params: OspParams) -> GeneratorSet {
    build_generators_with_epsilon(params, 1.0)
}

/// Builds the generators with J scaled by `epsilon01`; anything other than 1
/// is a deliberate fault used to exercise the verification suite.
pub fn build_generators_with_epsilon(params: OspParams, epsilon01: f64) -> GeneratorSet {
    let ctx = AlgebraContext::new(1);
    let (p, q) = (params.p, params.q);
    let dim = params.dim();
    let shape = params.shape();
    let deg = |x: usize| usize::from(x >= 2 * q);

    let mut e_vals = vec![0.0; dim * dim];
    let mut g_vals = vec![0.0; dim * dim];
    for i in 0..q {
        for vals in [&mut e_vals, &mut g_vals] {
            vals[i * dim + q + i] = epsilon01;
            vals[(q + i) * dim + i] = -epsilon01;
        }
    }
    for i in 0..p {
        let x = 2 * q + i;
        e_vals[x * dim + x] = 1.0;
    }
    // H_p = [σ1 ⊗ 1_r] (⊕ 1 when p is odd).
    let r = p / 2;
    for i in 0..r {
        let (a, b) = (2 * q + i, 2 * q + r + i);
        g_vals[a * dim + b] = 1.0;
        g_vals[b * dim + a] = 1.0;
    }
    if p % 2 == 1 {
        let x = dim - 1;
        g_vals[x * dim + x] = 1.0;
    }
    let e = Supermatrix::from_real(ctx, shape.clone(), shape.clone(), 0, &e_vals).expect("E is even");
    let g = Supermatrix::from_real(ctx, shape.clone(), shape.clone(), 0, &g_vals).expect("G is even");

    let mut t = Vec::new();
    for x1 in 0..dim {
        for x2 in x1..dim {
            // (T_{X1X2})_{ab} = G_{X1 b} δ_{X2 a} + (-1)^{X1 X2} G_{X2 b} δ_{X1 a}
            let s = sign(deg(x1) * deg(x2));
            let mut vals = vec![0.0; dim * dim];
            for b in 0..dim {
                vals[x2 * dim + b] += g_vals[x1 * dim + b];
                vals[x1 * dim + b] += s * g_vals[x2 * dim + b];
            }
            if vals.iter().all(|v| *v == 0.0) {
                continue;
            }
            let grade = ((deg(x1) + deg(x2)) % 2) as u8;
            let m = Supermatrix::from_real(ctx, shape.clone(), shape.clone(), grade, &vals)
                .expect("generator entries are compatible");
            t.push(((x1, x2), m));
        }
    }
    GeneratorSet { params, ctx, epsilon01, e, g, t }
}

impl GeneratorSet {
    pub fn params(&self) -> OspParams {
        self.params
    }

    pub fn context(&self) -> AlgebraContext {
        self.ctx
    }

    /// J_{2q} ⊕ 1_p.
    pub fn e(&self) -> &Supermatrix {
        &self.e
    }

    /// J_{2q} ⊕ H_p; coincides with E when p = 1.
    pub fn g(&self) -> &Supermatrix {
        &self.g
    }

    /// Nonvanishing T_{X1X2} with X1 ≤ X2.
    pub fn t_all(&self) -> &[((usize, usize), Supermatrix)] {
        &self.t
    }

    /// T_{X1X2} for any ordering of the pair; `None` if it vanishes.
    pub fn t(&self, x1: usize, x2: usize) -> Option<Supermatrix> {
        let (a, b) = (x1.min(x2), x1.max(x2));
        let m = self.t.iter().find(|(k, _)| *k == (a, b)).map(|(_, m)| m.clone())?;
        let q2 = 2 * self.params.q;
        let odd_pair = x1 >= q2 && x2 >= q2;
        Some(if x1 > x2 && odd_pair { m.neg() } else { m })
    }

    fn require_osp12(&self) -> Result<(), OspError> {
        if self.params == OspParams::OSP12 {
            Ok(())
        } else {
            Err(OspError::NotOsp12)
        }
    }

    /// T matrix of an osp(1|2) basis label.
    pub fn t_of(&self, gen: Generator) -> Supermatrix {
        let (a, b) = gen.indices();
        self.t(a, b).expect("osp(1|2) basis generators are nonzero")
    }

    /// P = T / 2.
    pub fn p_of(&self, gen: Generator) -> Supermatrix {
        self.t_of(gen).scale_real(0.5)
    }

    /// True iff T^st G + G T = 0 exactly.
    pub fn is_algebra_element(&self, m: &Supermatrix) -> bool {
        let lhs = m.supertranspose().matmul(&self.g).and_then(|a| a.add(&self.g.matmul(m)?));
        matches!(lhs, Ok(z) if z.max_abs() == 0.0)
    }

    /// M^st G M = G within 1e-9 per entry.
    pub fn check_group_element(&self, m: &Supermatrix) -> bool {
        let g = match self.g.embed(m.context()) {
            Ok(g) => g,
            Err(_) => return false,
        };
        match m.supertranspose().matmul(&g).and_then(|x| x.matmul(m)) {
            Ok(prod) => prod.approx_eq(&g, 1e-9),
            Err(_) => false,
        }
    }

    /// The uosp(1|2) basis A_1 = (i/2)(P00 - P11), A_2 = (1/2)(P00 + P11), A_3 = i P01.
    pub fn uosp_basis(&self) -> [Supermatrix; 3] {
        let i = Complex64::new(0.0, 1.0);
        let p00 = self.p_of(Generator::P(0, 0));
        let p11 = self.p_of(Generator::P(1, 1));
        let p01 = self.p_of(Generator::P(0, 1));
        [
            p00.sub(&p11).expect("same shape").scale(i * 0.5),
            p00.add(&p11).expect("same shape").scale_real(0.5),
            p01.scale(i),
        ]
    }

    /// X = ξ_i A_i + η^# Q0 + η Q1 with ξ even and η odd, all in `ctx`.
    pub fn uosp_element(
        &self,
        ctx: AlgebraContext,
        xi: &[GrassmannNumber; 3],
        eta: &GrassmannNumber,
    ) -> Result<Supermatrix, OspError> {
        self.require_osp12()?;
        let mut x = Supermatrix::zeros(ctx, self.params.shape(), self.params.shape(), 0);
        for (coef, a) in xi.iter().zip(self.uosp_basis()) {
            x = x.add(&a.embed(ctx)?.scalar_mul(Side::Left, coef)?)?;
        }
        let q0 = self.p_of(Generator::Q(0)).embed(ctx)?;
        let q1 = self.p_of(Generator::Q(1)).embed(ctx)?;
        x = x.add(&q0.scalar_mul(Side::Left, &eta.superstar())?)?;
        x = x.add(&q1.scalar_mul(Side::Left, eta)?)?;
        Ok(x)
    }

    /// Action of P_{XY} (Q_A = P_{A•}) on slot `slot` of a state:
    /// (P_{XY} a)_{Z} = (-1)^((X+Y) Σ_{i<k} Z_i) ½[E_{X Z_k} a_{..Y..} + (-1)^{XY} E_{Y Z_k} a_{..X..}].
    pub fn act(&self, gen: Generator, slot: usize, state: &SuperState) -> Result<SuperState, OspError> {
        self.require_osp12()?;
        let n = state.n();
        if slot >= n {
            return Err(OspError::BadSlot { slot, n });
        }
        let (x, y) = gen.indices();
        let dx = symbol_degree(x as u8) as usize;
        let dy = symbol_degree(y as u8) as usize;
        let metric = |a: usize, b: usize| self.g.get(a, b).body().re;
        let ctx = state.context();
        let coeffs = (0..ket_count(n))
            .map(|idx| {
                let symbols = ket_symbols(idx, n);
                let zk = symbols[slot] as usize;
                let prefix: usize = symbols[..slot].iter().map(|s| symbol_degree(*s) as usize).sum();
                let outer = sign((dx + dy) * prefix) * 0.5;
                let mut acc = GrassmannNumber::zero(ctx);
                for (first, second, s) in [(x, y, 1.0), (y, x, sign(dx * dy))] {
                    let e = metric(first, zk);
                    if e != 0.0 {
                        let mut src = symbols.clone();
                        src[slot] = second as u8;
                        acc += &state.coeffs()[ket_index(&src)].scale_real(outer * s * e);
                    }
                }
                acc
            })
            .collect();
        Ok(SuperState::new(n, ctx, state.grade() + gen.grade(), coeffs)?)
    }

    /// Every pairwise superbracket decomposed on the basis.
    pub fn bracket_table(&self) -> Result<BracketTable, OspError> {
        self.require_osp12()?;
        let basis: Vec<Supermatrix> = Generator::ALL.iter().map(|g| self.t_of(*g)).collect();
        let mut entries = vec![[[0.0; 5]; 5]; 5];
        for (i, a) in basis.iter().enumerate() {
            for (j, b) in basis.iter().enumerate() {
                let br = a.superbracket(b)?;
                let coeffs = decompose(&br, &basis).ok_or_else(|| OspError::BracketMismatch {
                    left: Generator::ALL[i].t_name(),
                    right: Generator::ALL[j].t_name(),
                    expected: "a combination of basis generators".into(),
                    actual: "outside the span".into(),
                })?;
                entries[i][j] = coeffs;
            }
        }
        Ok(BracketTable { entries })
    }

    /// Compares the computed bracket table with STRUCTURE_CONSTANTS.
    pub fn verify_bracket_table(&self) -> Result<BracketTable, OspError> {
        let table = self.bracket_table()?;
        for i in 0..5 {
            for j in 0..5 {
                if table.entries[i][j] != STRUCTURE_CONSTANTS[i][j] {
                    return Err(OspError::BracketMismatch {
                        left: Generator::ALL[i].t_name(),
                        right: Generator::ALL[j].t_name(),
                        expected: format_combination(&STRUCTURE_CONSTANTS[i][j]),
                        actual: format_combination(&table.entries[i][j]),
                    });
                }
            }
        }
        Ok(table)
    }

    /// Checks the rescaled brackets [P,P] = 2ε P, [P,Q] = ε Q and
    /// {Q,Q} = P/2 (each with strength-one symmetrization), using ε_{01} = 1.
    /// Returns the offending identity on failure.
    pub fn verify_rescaled_brackets(&self) -> Result<(), OspError> {
        self.require_osp12()?;
        let eps = |a: usize, b: usize| match (a, b) {
            (0, 1) => 1.0,
            (1, 0) => -1.0,
            _ => 0.0,
        };
        let p = |a: usize, b: usize| self.p_of(Generator::P(a.min(b) as u8, a.max(b) as u8));
        let q = |a: usize| self.p_of(Generator::Q(a as u8));
        let shape = self.params.shape();
        let zero = Supermatrix::zeros(self.ctx, shape.clone(), shape, 0);
        let fail = |left: String, right: String, expected: &Supermatrix, actual: &Supermatrix| {
            OspError::BracketMismatch {
                left,
                right,
                expected: format!("{:?}", body_values(expected)),
                actual: format!("{:?}", body_values(actual)),
            }
        };
        for a1 in 0..2 {
            for a2 in 0..2 {
                for a3 in 0..2 {
                    for a4 in 0..2 {
                        let lhs = p(a1, a2).superbracket(&p(a3, a4))?;
                        let mut rhs = zero.clone();
                        for (b1, b2) in [(a1, a2), (a2, a1)] {
                            for (b3, b4) in [(a3, a4), (a4, a3)] {
                                rhs = rhs.add(&p(b2, b4).scale_real(2.0 * 0.25 * eps(b1, b3)))?;
                            }
                        }
                        if !lhs.approx_eq(&rhs, 0.0) {
                            return Err(fail(format!("P{a1}{a2}"), format!("P{a3}{a4}"), &rhs, &lhs));
                        }
                    }
                    let lhs = p(a1, a2).superbracket(&q(a3))?;
                    let rhs = q(a2).scale_real(0.5 * eps(a1, a3)).add(&q(a1).scale_real(0.5 * eps(a2, a3)))?;
                    if !lhs.approx_eq(&rhs, 0.0) {
                        return Err(fail(format!("P{a1}{a2}"), format!("Q{a3}"), &rhs, &lhs));
                    }
                }
                let lhs = q(a1).superbracket(&q(a2))?;
                let rhs = p(a1, a2).scale_real(0.5);
                if !lhs.approx_eq(&rhs, 0.0) {
                    return Err(fail(format!("Q{a1}"), format!("Q{a2}"), &rhs, &lhs));
                }
            }
        }
        Ok(())
    }

    pub fn epsilon01(&self) -> f64 {
        self.epsilon01
    }
}

fn body_values(m: &Supermatrix) -> Vec<f64> {
    m.entries().iter().map(|e| e.body().re).collect()
}

/// Coefficients of `m` on `basis` if it lies in the span exactly.
fn decompose(m: &Supermatrix, basis: &[Supermatrix]) -> Option<[f64; 5]> {
    let target = body_values(m);
    let vecs: Vec<Vec<f64>> = basis.iter().map(body_values).collect();
    let mut coeffs = [0.0; 5];
    for (k, v) in vecs.iter().enumerate() {
        let norm: f64 = v.iter().map(|x| x * x).sum();
        let dot: f64 = v.iter().zip(&target).map(|(a, b)| a * b).sum();
        coeffs[k] = dot / norm;
    }
    let residual: f64 = (0..target.len())
        .map(|i| (target[i] - (0..5).map(|k| coeffs[k] * vecs[k][i]).sum::<f64>()).abs())
        .sum();
    (residual == 0.0).then_some(coeffs)
}

/// Structure constants, rows and columns in the order T01, T00, T11, T0, T1; each entry
/// lists coefficients on the same basis.
pub const STRUCTURE_CONSTANTS: [[[f64; 5]; 5]; 5] = [
    [
        [0.0, 0.0, 0.0, 0.0, 0.0],
        [0.0, -2.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 2.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, -1.0, 0.0],
        [0.0, 0.0, 0.0, 0.0, 1.0],
    ],
    [
        [0.0, 2.0, 0.0, 0.0, 0.0],
        [0.0; 5],
        [4.0, 0.0, 0.0, 0.0, 0.0],
        [0.0; 5],
        [0.0, 0.0, 0.0, 2.0, 0.0],
    ],
    [
        [0.0, 0.0, -2.0, 0.0, 0.0],
        [-4.0, 0.0, 0.0, 0.0, 0.0],
        [0.0; 5],
        [0.0, 0.0, 0.0, 0.0, -2.0],
        [0.0; 5],
    ],
    [
        [0.0, 0.0, 0.0, 1.0, 0.0],
        [0.0; 5],
        [0.0, 0.0, 0.0, 0.0, 2.0],
        [0.0, 1.0, 0.0, 0.0, 0.0],
        [1.0, 0.0, 0.0, 0.0, 0.0],
    ],
    [
        [0.0, 0.0, 0.0, 0.0, -1.0],
        [0.0, 0.0, 0.0, -2.0, 0.0],
        [0.0; 5],
        [1.0, 0.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0, 0.0],
    ],
];

pub fn format_combination(coeffs: &[f64; 5]) -> String {
    let parts: Vec<String> = coeffs
        .iter()
        .zip(Generator::ALL)
        .filter(|(c, _)| **c != 0.0)
        .map(|(c, g)| {
            let name = g.t_name();
            match *c {
                1.0 => name,
                -1.0 => format!("-{name}"),
                c => format!("{c}{name}"),
            }
        })
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

/// Computed superbrackets of the five osp(1|2) basis generators.
#[derive(Debug, Clone, PartialEq)]
pub struct BracketTable {
    pub entries: Vec<[[f64; 5]; 5]>,
}

impl BracketTable {
    /// Plain-text 5x5 table, rows and columns in bracket-table order.
    pub fn render(&self) -> String {
        let names: Vec<String> = Generator::ALL.iter().map(|g| g.t_name()).collect();
        let cells: Vec<Vec<String>> =
            self.entries.iter().map(|row| row.iter().map(format_combination).collect()).collect();
        let width = cells.iter().flatten().map(|c| c.len()).chain(names.iter().map(|n| n.len())).max().unwrap_or(4) + 2;
        let mut out = format!("{:>w$}", "", w = width);
        for n in &names {
            out.push_str(&format!("{:>w$}", n, w = width));
        }
        out.push('\n');
        for (name, row) in names.iter().zip(&cells) {
            out.push_str(&format!("{:>w$}", name, w = width));
            for c in row {
                out.push_str(&format!("{:>w$}", c, w = width));
            }
            out.push('\n');
        }
        out
    }
}

/// Applies an even 3×3 supermatrix to one slot:
/// a'_{..Z..} = Σ_W (-1)^((Z+W) Σ_{i<k} Z_i) M_{ZW} a_{..W..}.
pub fn act_matrix(m: &Supermatrix, slot: usize, state: &SuperState) -> Result<SuperState, OspError> {
    let n = state.n();
    if slot >= n {
        return Err(OspError::BadSlot { slot, n });
    }
    if m.rows().len() != 3 || !m.is_square() {
        return Err(SuperError::ShapeMismatch("expected a (2|1)x(2|1) supermatrix".into()).into());
    }
    let ctx = state.context();
    let m = m.embed(ctx)?;
    let coeffs = (0..ket_count(n))
        .map(|idx| {
            let symbols = ket_symbols(idx, n);
            let z = symbols[slot] as usize;
            let prefix: usize = symbols[..slot].iter().map(|s| symbol_degree(*s) as usize).sum();
            let mut acc = GrassmannNumber::zero(ctx);
            for w in 0..3 {
                let entry = m.get(z, w);
                if entry.is_zero() {
                    continue;
                }
                let mut src = symbols.clone();
                src[slot] = w as u8;
                let s = sign((symbol_degree(z as u8) + symbol_degree(w as u8)) as usize * prefix);
                acc += &(entry * &state.coeffs()[ket_index(&src)]).scale_real(s);
            }
            acc
        })
        .collect();
    Ok(SuperState::new(n, ctx, state.grade() + m.grade(), coeffs)?)
}
