//! Random Grassmann numbers, states and supermatrices for tests and sweeps.

use num_complex::Complex64;
use rand::Rng;

use crate::grassmann::{AlgebraContext, GrassmannNumber, Monomial};
use crate::states::{ket_count, ket_degree, ket_symbols, SuperState};
use crate::superlinear::{GradedShape, Supermatrix};

pub fn complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// Pure number of the given parity; each admissible monomial is kept with
/// probability `density`. Even numbers always get a body.
pub fn grassmann<R: Rng + ?Sized>(rng: &mut R, ctx: AlgebraContext, parity: u8, density: f64) -> GrassmannNumber {
    let gens = ctx.generator_count();
    let mut terms = Vec::new();
    for bits in 0u64..(1u64 << gens) {
        let m = Monomial::from_bits(bits);
        if m.grade() != parity % 2 {
            continue;
        }
        if m.is_one() || rng.gen_bool(density) {
            terms.push((m, complex(rng)));
        }
    }
    GrassmannNumber::from_terms(ctx, terms)
}

/// Random even state: Grassmann-valued when `soul` is set, otherwise
/// complex bosonic kets and complex multiples of single generators on odd kets.
pub fn state<R: Rng + ?Sized>(rng: &mut R, n: usize, ctx: AlgebraContext, soul: bool) -> SuperState {
    let coeffs = (0..ket_count(n))
        .map(|i| {
            let parity = ket_degree(i, n);
            if soul {
                grassmann(rng, ctx, parity, 0.5)
            } else if parity == 0 {
                GrassmannNumber::scalar(ctx, complex(rng))
            } else {
                let g = rng.gen_range(0..ctx.generator_count());
                GrassmannNumber::generator(ctx, g).expect("index in range").scale(complex(rng))
            }
        })
        .collect();
    SuperState::new(n, ctx, 0, coeffs).expect("parities chosen per ket")
}

/// Random complex coefficients on the 2^n bosonic kets, nothing else.
pub fn classical_state<R: Rng + ?Sized>(rng: &mut R, n: usize, ctx: AlgebraContext) -> SuperState {
    let coeffs = (0..ket_count(n))
        .map(|i| {
            if ket_symbols(i, n).contains(&2) {
                GrassmannNumber::zero(ctx)
            } else {
                GrassmannNumber::scalar(ctx, complex(rng))
            }
        })
        .collect();
    SuperState::new(n, ctx, 0, coeffs).expect("bosonic kets only")
}

/// Product of single-superqubit factors (x_0, x_1 even, x_• odd):
/// a_{X1…Xn} = x1_{X1} ⋯ xn_{Xn}.
pub fn product_state<R: Rng + ?Sized>(rng: &mut R, n: usize, ctx: AlgebraContext) -> SuperState {
    let factors: Vec<[GrassmannNumber; 3]> = (0..n)
        .map(|_| [grassmann(rng, ctx, 0, 0.5), grassmann(rng, ctx, 0, 0.5), grassmann(rng, ctx, 1, 0.5)])
        .collect();
    let coeffs = (0..ket_count(n))
        .map(|i| {
            ket_symbols(i, n)
                .iter()
                .zip(&factors)
                .fold(GrassmannNumber::one(ctx), |acc, (s, f)| &acc * &f[*s as usize])
        })
        .collect();
    SuperState::new(n, ctx, 0, coeffs).expect("products of pure factors")
}

/// Pure supermatrix of the given grade with random Grassmann entries.
pub fn matrix<R: Rng + ?Sized>(
    rng: &mut R,
    ctx: AlgebraContext,
    rows: &GradedShape,
    cols: &GradedShape,
    grade: u8,
) -> Supermatrix {
    Supermatrix::from_fn(ctx, rows.clone(), cols.clone(), grade, |i, j| {
        grassmann(rng, ctx, (rows.deg(i) + cols.deg(j) + grade) % 2, 0.5)
    })
    .expect("entry parities follow the compatibility rule")
}

pub fn even_matrix<R: Rng + ?Sized>(rng: &mut R, ctx: AlgebraContext, shape: &GradedShape) -> Supermatrix {
    matrix(rng, ctx, shape, shape, 0)
}
