//! Algebra identity suite behind `superqubit verify`.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::grassmann::{AlgebraContext, GrassmannNumber};
use crate::osp::{Generator, GeneratorSet, OspParams};
use crate::sample;
use crate::superlinear::{GradedShape, Side, Supermatrix};

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &'static str, failures: Vec<String>, total: usize) -> Self {
        let detail = match failures.first() {
            None => format!("{total} cases"),
            Some(first) => format!("{} of {total} failed; first: {first}", failures.len()),
        };
        Check { name, passed: failures.is_empty(), detail }
    }
}

/// Random real combination of the even generators plus odd generators with
/// odd Grassmann coefficients taken from `ctx`.
pub fn random_algebra_element(rng: &mut StdRng, gens: &GeneratorSet, ctx: AlgebraContext, scale: f64) -> Supermatrix {
    let shape = gens.params().shape();
    let mut x = Supermatrix::zeros(ctx, shape.clone(), shape, 0);
    for (_, t) in gens.t_all() {
        let t = t.embed(ctx).expect("context grows");
        let term = if t.grade() == 0 {
            t.scale_real(scale * rng.gen_range(-1.0..1.0))
        } else {
            let eta = sample::grassmann(rng, ctx, 1, 0.5).scale_real(scale);
            t.scalar_mul(Side::Left, &eta).expect("pure scalar")
        };
        x = x.add(&term).expect("same shape");
    }
    x
}

fn matrices_close(a: &Supermatrix, b: &Supermatrix, tol: f64) -> bool {
    a.approx_eq(b, tol)
}

/// Runs every identity; `gens` may carry an injected fault.
pub fn run_suite(gens: &GeneratorSet, seed: u64, cases: usize) -> Vec<Check> {
    let mut rng = StdRng::seed_from_u64(seed);
    let ctx = AlgebraContext::new(2);
    let sq = GradedShape::superqubit();
    let wide = GradedShape::new(2, 2);
    let mut checks = Vec::new();

    checks.push(match gens.verify_bracket_table() {
        Ok(_) => Check { name: "bracket table", passed: true, detail: "25 superbrackets".into() },
        Err(e) => Check { name: "bracket table", passed: false, detail: e.to_string() },
    });
    checks.push(match gens.verify_rescaled_brackets() {
        Ok(_) => Check { name: "rescaled brackets", passed: true, detail: "P and Q brackets".into() },
        Err(e) => Check { name: "rescaled brackets", passed: false, detail: e.to_string() },
    });

    let failures: Vec<String> =
        gens.t_all().iter().filter(|(_, t)| !gens.is_algebra_element(t)).map(|(k, _)| format!("T{k:?}")).collect();
    checks.push(Check::new("algebra membership", failures, gens.t_all().len()));

    let mut failures = Vec::new();
    for k in 0..cases {
        let m = sample::matrix(&mut rng, ctx, &sq, &wide, (k % 2) as u8);
        let back = m.supertranspose().supertranspose().supertranspose().supertranspose();
        if back != m {
            failures.push(format!("case {k}"));
        }
    }
    checks.push(Check::new("supertranspose order 4", failures, cases));

    let mut failures = Vec::new();
    for k in 0..cases {
        let (gm, gn) = ((k % 2) as u8, ((k / 2) % 2) as u8);
        let m = sample::matrix(&mut rng, ctx, &sq, &wide, gm);
        let n = sample::matrix(&mut rng, ctx, &wide, &sq, gn);
        let lhs = m.matmul(&n).and_then(|x| x.supertrace());
        let rhs = n.matmul(&m).and_then(|x| x.supertrace());
        let ok = match (lhs, rhs) {
            (Ok(l), Ok(r)) => {
                let s = if gm == 1 && gn == 1 { -1.0 } else { 1.0 };
                l.approx_eq(&r.scale_real(s), 1e-12)
            }
            _ => false,
        };
        if !ok {
            failures.push(format!("case {k} grades ({gm}, {gn})"));
        }
    }
    checks.push(Check::new("supertrace cyclicity", failures, cases));

    let mut failures = Vec::new();
    for k in 0..cases {
        let m = sample::even_matrix(&mut rng, ctx, &sq);
        let n = sample::even_matrix(&mut rng, ctx, &sq);
        let ok = match (m.matmul(&n).and_then(|p| p.berezinian()), m.berezinian(), n.berezinian()) {
            (Ok(bmn), Ok(bm), Ok(bn)) => bmn.approx_eq(&(&bm * &bn), 1e-9),
            _ => false,
        };
        if !ok {
            failures.push(format!("case {k}"));
        }
    }
    checks.push(Check::new("Berezinian multiplicativity", failures, cases));

    let mut failures = Vec::new();
    for k in 0..cases {
        let m = sample::even_matrix(&mut rng, ctx, &sq).scale_real(0.4);
        let ok = match (m.matrix_exp().and_then(|e| e.berezinian()), m.supertrace()) {
            (Ok(b), Ok(s)) => b.approx_eq(&s.exp(), 1e-9),
            _ => false,
        };
        if !ok {
            failures.push(format!("case {k}"));
        }
    }
    checks.push(Check::new("Ber exp(M) = exp(str M)", failures, cases));

    let mut failures = Vec::new();
    for k in 0..cases {
        let x = random_algebra_element(&mut rng, gens, ctx, 0.5);
        let ok = x.matrix_exp().map(|m| gens.check_group_element(&m)).unwrap_or(false);
        if !ok {
            failures.push(format!("case {k}"));
        }
    }
    checks.push(Check::new("group condition on exponentials", failures, cases));

    if gens.params() == OspParams::OSP12 {
        checks.push(uosp_checks(gens, &mut rng, cases));
    }
    checks
}

fn uosp_checks(gens: &GeneratorSet, rng: &mut StdRng, cases: usize) -> Check {
    let ctx = AlgebraContext::new(2);
    let mut failures = Vec::new();
    for (i, a) in gens.uosp_basis().iter().enumerate() {
        if !matrices_close(&a.superadjoint(), &a.neg(), 0.0) {
            failures.push(format!("A{} is not anti-super-Hermitian", i + 1));
        }
    }
    let q0 = gens.p_of(Generator::Q(0));
    let q1 = gens.p_of(Generator::Q(1));
    if q0.superadjoint() != q1 || q1.superadjoint() != q0.neg() {
        failures.push("Q superadjoints".into());
    }
    if gens.p_of(Generator::P(0, 0)).superadjoint() == gens.p_of(Generator::P(0, 0)).neg() {
        failures.push("P00 passes the uosp test".into());
    }
    let one = Supermatrix::identity(ctx, GradedShape::superqubit());
    for k in 0..cases {
        let xi = [0, 1, 2].map(|_| GrassmannNumber::real(ctx, rng.gen_range(-1.0..1.0)));
        let eta = sample::grassmann(rng, ctx, 1, 0.5).scale_real(0.5);
        let x = match gens.uosp_element(ctx, &xi, &eta) {
            Ok(x) => x,
            Err(e) => {
                failures.push(e.to_string());
                continue;
            }
        };
        if !matrices_close(&x.superadjoint(), &x.neg(), 1e-12) {
            failures.push(format!("case {k}: X^‡ ≠ -X"));
            continue;
        }
        let ok = x
            .matrix_exp()
            .and_then(|m| m.superadjoint().matmul(&m))
            .map(|p| matrices_close(&p, &one, 1e-9))
            .unwrap_or(false);
        if !ok {
            failures.push(format!("case {k}: exp(X) not super-unitary"));
        }
    }
    Check::new("uosp(1|2) conditions", failures, cases)
}
