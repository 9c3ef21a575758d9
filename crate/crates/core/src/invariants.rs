//! Entanglement covariants and invariants for two and three (super)qubits,
//! tangles and the SLOCC classification.

use std::fmt;

use num_complex::Complex64;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::grassmann::{round_sig, GrassmannError, GrassmannNumber, VANISH_TOL};
use crate::osp::{Generator, GeneratorSet, OspError};
use crate::states::{ket_count, ket_label, ket_symbols, symbol_degree, StateError, SuperState};
use crate::superlinear::{GradedShape, SuperError, Supermatrix};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InvariantError {
    #[error("invariants need 2 or 3 superqubits, got {0}")]
    UnsupportedCount(usize),
    #[error("invariants need an even state")]
    OddState,
    #[error(transparent)]
    Grassmann(#[from] GrassmannError),
    #[error(transparent)]
    Super(#[from] SuperError),
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Osp(#[from] OspError),
}

/// Upper metric: a^X = Σ_Y METRIC[X][Y] a_Y, so a^0 = a_1, a^1 = -a_0, a^• = -a_•.
pub const METRIC: [[f64; 3]; 3] = [[0.0, 1.0, 0.0], [-1.0, 0.0, 0.0], [0.0, 0.0, -1.0]];

fn sign(exponent: usize) -> f64 {
    if exponent.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

fn cx_abs_vanishes(c: Complex64, tol: f64) -> bool {
    c.norm() < tol
}

// ---------------------------------------------------------------- classical

/// det a_{AB} for a = [a00, a01, a10, a11].
pub fn det2(a: &[Complex64; 4]) -> Complex64 {
    a[0] * a[3] - a[1] * a[2]
}

/// τ_AB = 4 |det a|².
pub fn two_tangle(a: &[Complex64; 4]) -> f64 {
    4.0 * det2(a).norm_sqr()
}

/// Reduced density matrix of a 2-qubit state on slot `keep`.
pub fn reduced_density2(a: &[Complex64; 4], keep: usize) -> [[Complex64; 2]; 2] {
    let at = |x: usize, y: usize| a[2 * x + y];
    let mut rho = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                rho[i][j] += if keep == 0 {
                    at(i, k) * at(j, k).conj()
                } else {
                    at(k, i) * at(k, j).conj()
                };
            }
        }
    }
    rho
}

fn det_2x2(m: &[[Complex64; 2]; 2]) -> Complex64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

fn raise2(v: [Complex64; 2]) -> [Complex64; 2] {
    [v[1], -v[0]]
}

/// Covariants γ^A, γ^B, γ^C of a 3-qubit state a[4A + 2B + C].
pub fn gamma_covariants(a: &[Complex64; 8]) -> [[[Complex64; 2]; 2]; 3] {
    let mut out = [[[Complex64::new(0.0, 0.0); 2]; 2]; 3];
    for slot in 0..3 {
        // view with `slot` moved to the front, others in cyclic order
        let view = |x: usize, y: usize, z: usize| {
            let mut idx = [0usize; 3];
            idx[slot] = x;
            idx[(slot + 1) % 3] = y;
            idx[(slot + 2) % 3] = z;
            a[4 * idx[0] + 2 * idx[1] + idx[2]]
        };
        for x1 in 0..2 {
            for x2 in 0..2 {
                let mut acc = Complex64::new(0.0, 0.0);
                for y in 0..2 {
                    for z in 0..2 {
                        let raised: Complex64 = (0..2)
                            .flat_map(|y2| (0..2).map(move |z2| (y2, z2)))
                            .map(|(y2, z2)| view(x1, y2, z2) * METRIC[y][y2] * METRIC[z][z2])
                            .sum();
                        acc += raised * view(x2, y, z);
                    }
                }
                out[slot][x1][x2] = acc;
            }
        }
    }
    out
}

/// T_{ABC} in its three forms, built from γ^A, γ^B and γ^C respectively.
pub fn t_tensor_forms(a: &[Complex64; 8]) -> [[Complex64; 8]; 3] {
    let gammas = gamma_covariants(a);
    let at = |x: usize, y: usize, z: usize| a[4 * x + 2 * y + z];
    let mut out = [[Complex64::new(0.0, 0.0); 8]; 3];
    for x in 0..2 {
        for y in 0..2 {
            for z in 0..2 {
                let idx = 4 * x + 2 * y + z;
                for p in 0..2 {
                    let raised_a = raise2([at(0, y, z), at(1, y, z)])[p];
                    let raised_b = raise2([at(x, 0, z), at(x, 1, z)])[p];
                    let raised_c = raise2([at(x, y, 0), at(x, y, 1)])[p];
                    out[0][idx] += gammas[0][x][p] * raised_a;
                    out[1][idx] += gammas[1][y][p] * raised_b;
                    out[2][idx] += gammas[2][z][p] * raised_c;
                }
            }
        }
    }
    out
}

/// Cayley's hyperdeterminant as -det γ^A.
pub fn cayley_hyperdet(a: &[Complex64; 8]) -> Complex64 {
    -det_2x2(&gamma_covariants(a)[0])
}

/// τ_ABC = 4 |Det a|.
pub fn three_tangle(a: &[Complex64; 8]) -> f64 {
    4.0 * cayley_hyperdet(a).norm()
}

/// 4 det ρ_X for X = A, B, C.
pub fn local_entropies(a: &[Complex64; 8]) -> [f64; 3] {
    let mut out = [0.0; 3];
    for (slot, value) in out.iter_mut().enumerate() {
        let mut rho = [[Complex64::new(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                for rest in 0..4 {
                    let place = |s: usize| {
                        let others = [(rest >> 1) & 1, rest & 1];
                        let mut idx = [0usize; 3];
                        let mut k = 0;
                        for (pos, v) in idx.iter_mut().enumerate() {
                            if pos == slot {
                                *v = s;
                            } else {
                                *v = others[k];
                                k += 1;
                            }
                        }
                        a[4 * idx[0] + 2 * idx[1] + idx[2]]
                    };
                    rho[i][j] += place(i) * place(j).conj();
                }
            }
        }
        *value = 4.0 * det_2x2(&rho).re;
    }
    out
}

/// Three-qubit SLOCC classes, extended with Null, two-party labels and a
/// fallback for super states outside the table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EntanglementClass {
    Null,
    Separable2,
    Entangled2,
    SeparableABC,
    BiseparableA,
    BiseparableB,
    BiseparableC,
    W,
    Ghz,
    Unclassified,
}

impl EntanglementClass {
    pub fn label(&self) -> &'static str {
        match self {
            EntanglementClass::Null => "Null",
            EntanglementClass::Separable2 => "A-B",
            EntanglementClass::Entangled2 => "AB",
            EntanglementClass::SeparableABC => "A-B-C",
            EntanglementClass::BiseparableA => "A-BC",
            EntanglementClass::BiseparableB => "B-CA",
            EntanglementClass::BiseparableC => "C-AB",
            EntanglementClass::W => "W",
            EntanglementClass::Ghz => "GHZ",
            EntanglementClass::Unclassified => "Unclassified",
        }
    }

    /// Vanishing pattern to class, most degenerate first.
    pub fn from_pattern(p: &VanishingPattern) -> Self {
        let three = match (p.gamma, p.t, p.hyperdet) {
            (Some(g), Some(t), Some(d)) => Some((g, t, d)),
            _ => None,
        };
        if p.state {
            return EntanglementClass::Null;
        }
        match three {
            None => {
                if p.det.unwrap_or(true) {
                    EntanglementClass::Separable2
                } else {
                    EntanglementClass::Entangled2
                }
            }
            Some(([ga, gb, gc], t, d)) => match (ga, gb, gc) {
                (true, true, true) => EntanglementClass::SeparableABC,
                (false, true, true) => EntanglementClass::BiseparableA,
                (true, false, true) => EntanglementClass::BiseparableB,
                (true, true, false) => EntanglementClass::BiseparableC,
                _ if !d => EntanglementClass::Ghz,
                _ if !t => EntanglementClass::W,
                _ => EntanglementClass::Unclassified,
            },
        }
    }
}

impl fmt::Display for EntanglementClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Which covariants vanish; `None` where the covariant does not apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VanishingPattern {
    pub state: bool,
    pub det: Option<bool>,
    pub gamma: Option<[bool; 3]>,
    pub t: Option<bool>,
    pub hyperdet: Option<bool>,
}

impl VanishingPattern {
    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("state".into(), json!(self.state));
        if let Some(d) = self.det {
            m.insert("det".into(), json!(d));
        }
        if let Some([a, b, c]) = self.gamma {
            m.insert("gamma_a".into(), json!(a));
            m.insert("gamma_b".into(), json!(b));
            m.insert("gamma_c".into(), json!(c));
        }
        if let Some(t) = self.t {
            m.insert("t".into(), json!(t));
        }
        if let Some(d) = self.hyperdet {
            m.insert("hyperdet".into(), json!(d));
        }
        Value::Object(m)
    }
}

/// SLOCC class of a 3-qubit state.
pub fn classify3(a: &[Complex64; 8], tol: f64) -> EntanglementClass {
    let gammas = gamma_covariants(a);
    let g_zero = |g: &[[Complex64; 2]; 2]| g.iter().flatten().all(|c| cx_abs_vanishes(*c, tol));
    let pattern = VanishingPattern {
        state: a.iter().all(|c| cx_abs_vanishes(*c, tol)),
        det: None,
        gamma: Some([g_zero(&gammas[0]), g_zero(&gammas[1]), g_zero(&gammas[2])]),
        t: Some(t_tensor_forms(a)[0].iter().all(|c| cx_abs_vanishes(*c, tol))),
        hyperdet: Some(cx_abs_vanishes(cayley_hyperdet(a), tol)),
    };
    EntanglementClass::from_pattern(&pattern)
}

/// Separable or entangled 2-qubit state.
pub fn classify2(a: &[Complex64; 4], tol: f64) -> EntanglementClass {
    let pattern = VanishingPattern {
        state: a.iter().all(|c| cx_abs_vanishes(*c, tol)),
        det: Some(cx_abs_vanishes(det2(a), tol)),
        gamma: None,
        t: None,
        hyperdet: None,
    };
    EntanglementClass::from_pattern(&pattern)
}

/// Bosonic coefficients in binary order, or `None` unless the state is
/// classical (no • components and no soul).
pub fn classical_coefficients(state: &SuperState) -> Option<Vec<Complex64>> {
    if !state.is_classical() {
        return None;
    }
    let n = state.n();
    Some(
        (0..1usize << n)
            .map(|bits| {
                let symbols: Vec<u8> = (0..n).map(|k| ((bits >> (n - 1 - k)) & 1) as u8).collect();
                state.coeff(&symbols).body()
            })
            .collect(),
    )
}

// ---------------------------------------------------------------- super

/// Raises index `slot` of a coefficient tensor with METRIC; `transposed`
/// contracts on the metric's first index instead.
pub fn raise_slot(t: &[GrassmannNumber], n: usize, slot: usize, transposed: bool) -> Vec<GrassmannNumber> {
    let ctx = t[0].context();
    (0..ket_count(n))
        .map(|idx| {
            let symbols = ket_symbols(idx, n);
            let x = symbols[slot] as usize;
            let mut acc = GrassmannNumber::zero(ctx);
            for w in 0..3 {
                let m = if transposed { METRIC[w][x] } else { METRIC[x][w] };
                if m != 0.0 {
                    let mut src = symbols.clone();
                    src[slot] = w as u8;
                    acc += &t[crate::states::ket_index(&src)].scale_real(m);
                }
            }
            acc
        })
        .collect()
}

fn invariant_tensor() -> [f64; 9] {
    [0.0, 1.0, 0.0, -1.0, 0.0, 0.0, 0.0, 0.0, 1.0]
}

/// ½ str[(M E)^st E M] for an even (2|1)×(2|1) supermatrix given row-major.
pub fn sdet_matrix(m: &[GrassmannNumber]) -> Result<GrassmannNumber, InvariantError> {
    let ctx = m[0].context();
    let shape = GradedShape::superqubit();
    let a = Supermatrix::new(shape.clone(), shape.clone(), 0, m.to_vec())?;
    let e = Supermatrix::from_real(ctx, shape.clone(), shape, 0, &invariant_tensor())?;
    let prod = a.matmul(&e)?.supertranspose().matmul(&e)?.matmul(&a)?;
    Ok(prod.supertrace()?.scale_real(0.5))
}

fn require(state: &SuperState, n: usize) -> Result<(), InvariantError> {
    if state.n() != n {
        return Err(InvariantError::UnsupportedCount(state.n()));
    }
    if state.grade() != 0 {
        return Err(InvariantError::OddState);
    }
    Ok(())
}

/// sdet a_{XY} of a 2-superqubit state.
pub fn sdet(state: &SuperState) -> Result<GrassmannNumber, InvariantError> {
    require(state, 2)?;
    sdet_matrix(state.coeffs())
}

/// τ = 4 x x^#.
pub fn tangle_from(x: &GrassmannNumber) -> GrassmannNumber {
    (x * &x.superstar()).scale_real(4.0)
}

/// τ_XY = 4 sdet (sdet)^#.
pub fn super_two_tangle(state: &SuperState) -> Result<GrassmannNumber, InvariantError> {
    Ok(tangle_from(&sdet(state)?))
}

/// Berezinian of the coefficient supermatrix next to sdet.
#[derive(Debug, Clone, PartialEq)]
pub struct BerezinianComparison {
    /// `None` when a_{••} has vanishing body.
    pub berezinian: Option<GrassmannNumber>,
    pub sdet: GrassmannNumber,
    pub equal: bool,
}

pub fn berezinian_compare(state: &SuperState) -> Result<BerezinianComparison, InvariantError> {
    let sdet = sdet(state)?;
    let corner = state.coeff(&[2, 2]);
    let berezinian = if corner.body().norm() < VANISH_TOL {
        None
    } else {
        let shape = GradedShape::superqubit();
        Some(Supermatrix::new(shape.clone(), shape, 0, state.coeffs().to_vec())?.berezinian()?)
    };
    let equal = berezinian.as_ref().is_some_and(|b| b.approx_eq(&sdet, 1e-12));
    Ok(BerezinianComparison { berezinian, sdet, equal })
}

/// Γ^A as a row-major (2|1)×(2|1) supermatrix (γ_{••} = 0).
fn gamma_a_of(t: &[GrassmannNumber]) -> Vec<GrassmannNumber> {
    let ctx = t[0].context();
    let raised = raise_slot(&raise_slot(t, 3, 1, false), 3, 2, false);
    // sector order: (B C), (B •), (• C), (• •)
    let signs = |x1: usize, x2: usize| -> [f64; 4] {
        match (x1 == 2, x2 == 2) {
            (false, false) | (true, false) => [1.0, -1.0, -1.0, -1.0],
            (false, true) => [1.0, 1.0, 1.0, -1.0],
            (true, true) => [0.0; 4],
        }
    };
    let mut out = Vec::with_capacity(9);
    for x1 in 0..3 {
        for x2 in 0..3 {
            let s = signs(x1, x2);
            let mut acc = GrassmannNumber::zero(ctx);
            if x1 != 2 || x2 != 2 {
                for y in 0..3 {
                    for z in 0..3 {
                        let sector = 2 * usize::from(y == 2) + usize::from(z == 2);
                        let l = &raised[9 * x1 + 3 * y + z];
                        let r = &t[9 * x2 + 3 * y + z];
                        if !l.is_zero() && !r.is_zero() {
                            acc += &(l * r).scale_real(s[sector]);
                        }
                    }
                }
            }
            out.push(acc);
        }
    }
    out
}

/// Reorders a 3-slot tensor so that `slot` comes first, with Koszul signs:
/// slot 1 gives a'_{YXZ} = (-1)^{XY} a_{XYZ}, slot 2 gives
/// a''_{ZXY} = (-1)^{Z(X+Y)} a_{XYZ}.
fn bring_to_front(t: &[GrassmannNumber], slot: usize) -> Vec<GrassmannNumber> {
    let ctx = t[0].context();
    let mut out = vec![GrassmannNumber::zero(ctx); 27];
    for idx in 0..27 {
        let s = ket_symbols(idx, 3);
        let d: Vec<usize> = s.iter().map(|x| symbol_degree(*x) as usize).collect();
        let (target, k) = match slot {
            0 => ([s[0], s[1], s[2]], 0),
            1 => ([s[1], s[0], s[2]], d[0] * d[1]),
            _ => ([s[2], s[0], s[1]], d[2] * (d[0] + d[1])),
        };
        out[crate::states::ket_index(&target)] = t[idx].scale_real(sign(k));
    }
    out
}

/// Γ^A, Γ^B, Γ^C of a 3-superqubit state, each row-major 3×3.
pub fn super_gamma(state: &SuperState) -> Result<[Vec<GrassmannNumber>; 3], InvariantError> {
    require(state, 3)?;
    let t = state.coeffs();
    Ok([gamma_a_of(t), gamma_a_of(&bring_to_front(t, 1)), gamma_a_of(&bring_to_front(t, 2))])
}

/// T_{XYZ} = Γ^A_{XX'} a^{X'}_{YZ}.
pub fn super_t_from(gamma_a: &[GrassmannNumber], t: &[GrassmannNumber]) -> Vec<GrassmannNumber> {
    let ctx = t[0].context();
    let raised = raise_slot(t, 3, 0, false);
    (0..27)
        .map(|idx| {
            let (x, rest) = (idx / 9, idx % 9);
            let mut acc = GrassmannNumber::zero(ctx);
            for p in 0..3 {
                let g = &gamma_a[3 * x + p];
                let r = &raised[9 * p + rest];
                if !g.is_zero() && !r.is_zero() {
                    acc += &(g * r);
                }
            }
            acc
        })
        .collect()
}

pub fn super_t(state: &SuperState) -> Result<SuperState, InvariantError> {
    let [ga, _, _] = super_gamma(state)?;
    let coeffs = super_t_from(&ga, state.coeffs());
    Ok(SuperState::new(3, state.context(), 0, coeffs)?)
}

/// ½(γ^{A1A2}γ_{A1A2} - γ^{A•}γ_{A•} - γ^{•A}γ_{•A}) with both indices raised.
pub fn hyperdet_quadratic(gamma: &[GrassmannNumber]) -> GrassmannNumber {
    let ctx = gamma[0].context();
    let raised = raise_slot(&raise_slot(gamma, 2, 0, false), 2, 1, false);
    let mut acc = GrassmannNumber::zero(ctx);
    for x in 0..3 {
        for y in 0..3 {
            let s = match (x == 2, y == 2) {
                (false, false) => 1.0,
                (true, true) => 0.0,
                _ => -1.0,
            };
            if s != 0.0 {
                acc += &(&raised[3 * x + y] * &gamma[3 * x + y]).scale_real(s);
            }
        }
    }
    acc.scale_real(0.5)
}

/// ½ Σ s T_{XYZ} a^{XYZ}, sector signs + for ABC, •BC, •B•, ••C and - for the
/// rest; slot A raised on the metric's second index, B and C on its first.
pub fn hyperdet_from_t(t_tensor: &[GrassmannNumber], a: &[GrassmannNumber]) -> GrassmannNumber {
    let ctx = a[0].context();
    let raised = raise_slot(&raise_slot(&raise_slot(a, 3, 0, false), 3, 1, true), 3, 2, true);
    let mut acc = GrassmannNumber::zero(ctx);
    for idx in 0..27 {
        let s = ket_symbols(idx, 3);
        let sector = (s[0] == 2, s[1] == 2, s[2] == 2);
        let sgn = match sector {
            (false, false, false) | (true, false, false) | (true, false, true) | (true, true, false) => 1.0,
            _ => -1.0,
        };
        let (l, r) = (&t_tensor[idx], &raised[idx]);
        if !l.is_zero() && !r.is_zero() {
            acc += &(l * r).scale_real(sgn);
        }
    }
    acc.scale_real(0.5)
}

/// All sDet variants of a 3-superqubit state.
#[derive(Debug, Clone, PartialEq)]
pub struct HyperdetForms {
    /// Quadratic form in Γ^A.
    pub quadratic: GrassmannNumber,
    /// ½ str[(Γ^A E)^st E Γ^A].
    pub supertrace: GrassmannNumber,
    /// -sdet Γ^A with sdet the 2-superqubit invariant.
    pub minus_sdet_gamma: GrassmannNumber,
    /// Signed T-contraction.
    pub t_contraction: GrassmannNumber,
    /// Same quadratic form in Γ^B and Γ^C.
    pub gamma_b: GrassmannNumber,
    pub gamma_c: GrassmannNumber,
}

pub fn hyperdet_forms(state: &SuperState) -> Result<HyperdetForms, InvariantError> {
    let [ga, gb, gc] = super_gamma(state)?;
    let t = super_t_from(&ga, state.coeffs());
    let supertrace = sdet_matrix(&ga)?;
    Ok(HyperdetForms {
        quadratic: hyperdet_quadratic(&ga),
        minus_sdet_gamma: -&supertrace,
        supertrace,
        t_contraction: hyperdet_from_t(&t, state.coeffs()),
        gamma_b: hyperdet_quadratic(&gb),
        gamma_c: hyperdet_quadratic(&gc),
    })
}

/// sDet a_{XYZ}, the quadratic form in Γ^A.
pub fn superhyperdet(state: &SuperState) -> Result<GrassmannNumber, InvariantError> {
    let [ga, _, _] = super_gamma(state)?;
    Ok(hyperdet_quadratic(&ga))
}

/// τ_XYZ = 4 √(sDet sDet^#).
#[derive(Debug, Clone, PartialEq)]
pub enum ThreeTangle {
    Value(GrassmannNumber),
    /// sDet sDet^# has zero body and nonzero soul.
    UndefinedSqrt,
}

impl ThreeTangle {
    pub fn value(&self) -> Option<&GrassmannNumber> {
        match self {
            ThreeTangle::Value(v) => Some(v),
            ThreeTangle::UndefinedSqrt => None,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            ThreeTangle::Value(v) => v.to_json(),
            ThreeTangle::UndefinedSqrt => json!("undefined-sqrt"),
        }
    }
}

pub fn three_tangle_from(hyperdet: &GrassmannNumber) -> ThreeTangle {
    let prod = hyperdet * &hyperdet.superstar();
    if prod.is_zero() {
        return ThreeTangle::Value(prod);
    }
    match prod.sqrt() {
        Ok(root) if prod.body().norm() > 0.0 => ThreeTangle::Value(root.scale_real(4.0)),
        _ => ThreeTangle::UndefinedSqrt,
    }
}

pub fn super_three_tangle(state: &SuperState) -> Result<ThreeTangle, InvariantError> {
    Ok(three_tangle_from(&superhyperdet(state)?))
}

/// SLOCC class from the super covariants; sdet for n = 2.
pub fn classify_super(state: &SuperState, tol: f64) -> Result<EntanglementClass, InvariantError> {
    Ok(EntanglementClass::from_pattern(&super_pattern(state, tol)?))
}

pub fn super_pattern(state: &SuperState, tol: f64) -> Result<VanishingPattern, InvariantError> {
    let zero = state.coeffs().iter().all(|c| c.vanishes(tol));
    match state.n() {
        2 => Ok(VanishingPattern {
            state: zero,
            det: Some(sdet(state)?.vanishes(tol)),
            gamma: None,
            t: None,
            hyperdet: None,
        }),
        3 => {
            let [ga, gb, gc] = super_gamma(state)?;
            let all_vanish = |v: &[GrassmannNumber]| v.iter().all(|c| c.vanishes(tol));
            let t = super_t_from(&ga, state.coeffs());
            Ok(VanishingPattern {
                state: zero,
                det: None,
                gamma: Some([all_vanish(&ga), all_vanish(&gb), all_vanish(&gc)]),
                t: Some(all_vanish(&t)),
                hyperdet: Some(hyperdet_quadratic(&ga).vanishes(tol)),
            })
        }
        n => Err(InvariantError::UnsupportedCount(n)),
    }
}

// ---------------------------------------------------------------- invariance

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InvariantKind {
    Sdet,
    Hyperdet,
}

/// Moves the state into a context with two fresh pairs and returns it with
/// a nilpotent parameter of the generator's grade built from fresh symbols.
pub fn with_fresh_parameter(state: &SuperState, gen: Generator) -> Result<(SuperState, GrassmannNumber), InvariantError> {
    let ctx = state.context().with_extra_pairs(2);
    let first = state.context().generator_count();
    let lifted = state.embed(ctx)?;
    let eps = match gen {
        Generator::P(..) => {
            &GrassmannNumber::generator(ctx, first)? * &GrassmannNumber::generator(ctx, first + 2)?
        }
        Generator::Q(_) => GrassmannNumber::generator(ctx, first)?,
    };
    Ok((lifted, eps))
}

/// a + ε (g·a) on slot `slot`.
pub fn perturb(
    gens: &GeneratorSet,
    state: &SuperState,
    eps: &GrassmannNumber,
    gen: Generator,
    slot: usize,
) -> Result<SuperState, InvariantError> {
    let moved = gens.act(gen, slot, state)?.left_mul(eps)?;
    Ok(state.add(&moved)?)
}

/// inv(a + ε g·a) - inv(a); zero for an invariant.
pub fn infinitesimal_invariance_check(
    kind: InvariantKind,
    gens: &GeneratorSet,
    state: &SuperState,
    gen: Generator,
    slot: usize,
) -> Result<GrassmannNumber, InvariantError> {
    let (lifted, eps) = with_fresh_parameter(state, gen)?;
    let moved = perturb(gens, &lifted, &eps, gen, slot)?;
    let eval = |s: &SuperState| match kind {
        InvariantKind::Sdet => sdet(s),
        InvariantKind::Hyperdet => superhyperdet(s),
    };
    Ok(&eval(&moved)? - &eval(&lifted)?)
}

/// T(a + ε g·a) - T(a) - ε g·T(a); zero when T transforms like a.
pub fn t_covariance_defect(
    gens: &GeneratorSet,
    state: &SuperState,
    gen: Generator,
    slot: usize,
) -> Result<SuperState, InvariantError> {
    let (lifted, eps) = with_fresh_parameter(state, gen)?;
    let moved = perturb(gens, &lifted, &eps, gen, slot)?;
    let t0 = super_t(&lifted)?;
    let t1 = super_t(&moved)?;
    let expected = gens.act(gen, slot, &t0)?.left_mul(&eps)?;
    let diff = t1.add(&t0.left_mul(&GrassmannNumber::real(t0.context(), -1.0))?)?;
    Ok(diff.add(&expected.left_mul(&GrassmannNumber::real(t0.context(), -1.0))?)?)
}

// ---------------------------------------------------------------- report

fn complex_json(c: Complex64) -> Value {
    json!({"re": round_sig(c.re), "im": round_sig(c.im)})
}

fn matrix_json(m: &[GrassmannNumber]) -> Value {
    let labels = ["0", "1", "*"];
    let mut map = Map::new();
    for (i, c) in m.iter().enumerate() {
        if !c.is_zero() {
            map.insert(format!("{}{}", labels[i / 3], labels[i % 3]), c.to_json());
        }
    }
    Value::Object(map)
}

fn tensor_json(t: &[GrassmannNumber], n: usize) -> Value {
    let mut map = Map::new();
    for (i, c) in t.iter().enumerate() {
        if !c.is_zero() {
            map.insert(ket_label(i, n), c.to_json());
        }
    }
    Value::Object(map)
}

/// Classical block of a report.
#[derive(Debug, Clone, PartialEq)]
pub enum ClassicalReport {
    Two { det: Complex64, tau: f64, local_entropies: [f64; 2] },
    Three {
        gammas: [[[Complex64; 2]; 2]; 3],
        t: [Complex64; 8],
        hyperdet: Complex64,
        tau: f64,
        local_entropies: [f64; 3],
        class: EntanglementClass,
    },
}

impl ClassicalReport {
    pub fn to_json(&self) -> Value {
        match self {
            ClassicalReport::Two { det, tau, local_entropies } => json!({
                "det": complex_json(*det),
                "tau": round_sig(*tau),
                "local_entropies": local_entropies.iter().map(|x| round_sig(*x)).collect::<Vec<_>>(),
            }),
            ClassicalReport::Three { gammas, t, hyperdet, tau, local_entropies, class } => {
                let g: Vec<Value> = gammas
                    .iter()
                    .map(|g| json!(g.iter().map(|row| row.iter().map(|c| complex_json(*c)).collect::<Vec<_>>()).collect::<Vec<_>>()))
                    .collect();
                let mut tmap = Map::new();
                for (i, c) in t.iter().enumerate() {
                    if c.norm() > 0.0 {
                        tmap.insert(format!("{}{}{}", (i >> 2) & 1, (i >> 1) & 1, i & 1), complex_json(*c));
                    }
                }
                json!({
                    "gamma_a": g[0], "gamma_b": g[1], "gamma_c": g[2],
                    "T": Value::Object(tmap),
                    "hyperdet": complex_json(*hyperdet),
                    "tau": round_sig(*tau),
                    "local_entropies": local_entropies.iter().map(|x| round_sig(*x)).collect::<Vec<_>>(),
                    "class": class.label(),
                })
            }
        }
    }
}

/// Super block of a report.
#[derive(Debug, Clone, PartialEq)]
pub enum SuperReport {
    Two { sdet: GrassmannNumber, tau: GrassmannNumber, berezinian: Option<GrassmannNumber> },
    Three {
        gammas: [Vec<GrassmannNumber>; 3],
        t: Vec<GrassmannNumber>,
        forms: HyperdetForms,
        tau: ThreeTangle,
    },
}

impl SuperReport {
    pub fn to_json(&self) -> Value {
        match self {
            SuperReport::Two { sdet, tau, berezinian } => json!({
                "sdet": sdet.to_json(),
                "tau": tau.to_json(),
                "berezinian": berezinian.as_ref().map(|b| b.to_json()).unwrap_or(json!("undefined")),
            }),
            SuperReport::Three { gammas, t, forms, tau } => json!({
                "gammas": {
                    "A": matrix_json(&gammas[0]),
                    "B": matrix_json(&gammas[1]),
                    "C": matrix_json(&gammas[2]),
                },
                "T": tensor_json(t, 3),
                "sDet": forms.quadratic.to_json(),
                "sDet_forms": {
                    "supertrace": forms.supertrace.to_json(),
                    "minus_sdet_gamma": forms.minus_sdet_gamma.to_json(),
                    "t_contraction": forms.t_contraction.to_json(),
                    "gamma_b": forms.gamma_b.to_json(),
                    "gamma_c": forms.gamma_c.to_json(),
                },
                "tau": tau.to_json(),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CovariantReport {
    pub n: usize,
    pub classical: Option<ClassicalReport>,
    pub superqubit: SuperReport,
    pub vanishing: VanishingPattern,
    pub class: EntanglementClass,
}

impl CovariantReport {
    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "classical": self.classical.as_ref().map(|c| c.to_json()).unwrap_or(Value::Null),
            "super": self.superqubit.to_json(),
            "vanishing": self.vanishing.to_json(),
            "class": self.class.label(),
        })
    }
}

/// Every covariant of a 2- or 3-superqubit even state.
pub fn analyze(state: &SuperState, tol: f64) -> Result<CovariantReport, InvariantError> {
    let n = state.n();
    if n != 2 && n != 3 {
        return Err(InvariantError::UnsupportedCount(n));
    }
    if state.grade() != 0 {
        return Err(InvariantError::OddState);
    }
    let classical = classical_coefficients(state).map(|c| {
        if n == 2 {
            let a: [Complex64; 4] = c.try_into().expect("four coefficients");
            let ent = |k| 4.0 * det_2x2(&reduced_density2(&a, k)).re;
            ClassicalReport::Two { det: det2(&a), tau: two_tangle(&a), local_entropies: [ent(0), ent(1)] }
        } else {
            let a: [Complex64; 8] = c.try_into().expect("eight coefficients");
            ClassicalReport::Three {
                gammas: gamma_covariants(&a),
                t: t_tensor_forms(&a)[0],
                hyperdet: cayley_hyperdet(&a),
                tau: three_tangle(&a),
                local_entropies: local_entropies(&a),
                class: classify3(&a, tol),
            }
        }
    });
    let superqubit = if n == 2 {
        let cmp = berezinian_compare(state)?;
        SuperReport::Two { tau: tangle_from(&cmp.sdet), sdet: cmp.sdet, berezinian: cmp.berezinian }
    } else {
        let gammas = super_gamma(state)?;
        let t = super_t_from(&gammas[0], state.coeffs());
        let forms = hyperdet_forms(state)?;
        let tau = three_tangle_from(&forms.quadratic);
        SuperReport::Three { gammas, t, forms, tau }
    };
    let vanishing = super_pattern(state, tol)?;
    Ok(CovariantReport { n, classical, superqubit, vanishing, class: EntanglementClass::from_pattern(&vanishing) })
}
