use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use superqubit::grassmann::{AlgebraContext, GrassmannNumber};
use superqubit::osp::{act_matrix, build_generators, Generator, GeneratorSet, OspParams};
use superqubit::sample;
use superqubit::states::SuperState;
use superqubit::superlinear::{GradedShape, Supermatrix};

fn gens() -> GeneratorSet {
    build_generators(OspParams::OSP12)
}

fn single(ctx: AlgebraContext, n: usize, label: &str, c: GrassmannNumber) -> SuperState {
    SuperState::from_labels(n, ctx, [(label, c)]).unwrap()
}

#[test]
fn one_superqubit_q_action() {
    // 2Q_{A1} a_{A3} = ε_{A1A3} a_•,  2Q_{A1} a_• = a_{A1}
    let ctx = AlgebraContext::new(1);
    let theta = GrassmannNumber::generator(ctx, 0).unwrap();
    let g = gens();
    let s = SuperState::new(1, ctx, 0, vec![GrassmannNumber::real(ctx, 3.0), GrassmannNumber::real(ctx, 5.0), theta.clone()])
        .unwrap();
    let q0 = g.act(Generator::Q(0), 0, &s).unwrap();
    let q1 = g.act(Generator::Q(1), 0, &s).unwrap();
    assert_eq!(q0.coeff(&[1]).scale_real(2.0), theta);
    assert!(q0.coeff(&[0]).is_zero());
    assert_eq!(q0.coeff(&[2]).scale_real(2.0), GrassmannNumber::real(ctx, 3.0));
    assert_eq!(q1.coeff(&[0]).scale_real(2.0), -theta);
    assert_eq!(q1.coeff(&[2]).scale_real(2.0), GrassmannNumber::real(ctx, 5.0));
}

#[test]
fn two_superqubit_q_on_second_slot() {
    // (2Q_{B1} a)_{••} = -a_{•B1}
    let ctx = AlgebraContext::new(1);
    let g = gens();
    let theta = GrassmannNumber::generator(ctx, 0).unwrap();
    for b in 0..2u8 {
        let label = if b == 0 { "*0" } else { "*1" };
        let s = single(ctx, 2, label, theta.clone());
        let out = g.act(Generator::Q(b), 1, &s).unwrap();
        assert_eq!(out.coeff(&[2, 2]).scale_real(2.0), theta.scale_real(-1.0));
    }
}

#[test]
fn three_superqubit_q_on_third_slot() {
    // (2Q_{C1} a)_{A3 • •} = -a_{A3 • C1},  (2Q_{C1} a)_{A3 • C3} = -ε_{C1C3} a_{A3 • •}
    let ctx = AlgebraContext::new(1);
    let g = gens();
    let theta = GrassmannNumber::generator(ctx, 0).unwrap();
    let s = single(ctx, 3, "0*1", theta.clone());
    let out = g.act(Generator::Q(1), 2, &s).unwrap();
    assert_eq!(out.coeff(&[0, 2, 2]).scale_real(2.0), theta.scale_real(-1.0));
    let s = single(ctx, 3, "1**", GrassmannNumber::real(ctx, 1.0));
    let out = g.act(Generator::Q(1), 2, &s).unwrap();
    assert_eq!(out.coeff(&[1, 2, 0]).scale_real(2.0), GrassmannNumber::real(ctx, 1.0));
    assert!(out.coeff(&[1, 2, 1]).is_zero());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn action_matches_matrix_contraction(seed in any::<u64>(), n in 1usize..=3, gi in 0usize..5, slot_pick in 0usize..3) {
        let slot = slot_pick % n;
        let g = gens();
        let gen = Generator::ALL[gi];
        let s = sample::state(&mut StdRng::seed_from_u64(seed), n, AlgebraContext::new(2), true);
        let direct = g.act(gen, slot, &s).unwrap();
        let oracle = act_matrix(&g.p_of(gen).transpose(), slot, &s).unwrap();
        prop_assert_eq!(direct, oracle);
    }

    #[test]
    fn action_closes_on_the_bracket_table(seed in any::<u64>(), n in 1usize..=3, i in 0usize..5, j in 0usize..5) {
        // g·(h·a) - (-1)^{|g||h|} h·(g·a) = ±[[g, h]]·a; the per-slot transpose flips commutators
        let g = gens();
        let table = g.bracket_table().unwrap();
        let (x, y) = (Generator::ALL[i], Generator::ALL[j]);
        let s = sample::state(&mut StdRng::seed_from_u64(seed), n, AlgebraContext::new(1), true);
        let slot = n - 1;
        let both_odd = x.grade() * y.grade() == 1;
        let xy = g.act(x, slot, &g.act(y, slot, &s).unwrap()).unwrap();
        let yx = g.act(y, slot, &g.act(x, slot, &s).unwrap()).unwrap();
        let sgn = if both_odd { 1.0 } else { -1.0 };
        let lhs = xy.add(&yx.map(yx.grade(), |_, c| c.scale_real(sgn)).unwrap()).unwrap();
        let mut rhs = SuperState::zero(n, s.context(), lhs.grade());
        for (k, c) in table.entries[i][j].iter().enumerate() {
            if *c != 0.0 {
                let moved = g.act(Generator::ALL[k], slot, &s).unwrap();
                // [[P, P']] = ¼[[T, T']] = ½ Σ c_k P_k
                let f = 0.5 * c * if both_odd { 1.0 } else { -1.0 };
                rhs = rhs.add(&moved.map(moved.grade(), |_, v| v.scale_real(f)).unwrap()).unwrap();
            }
        }
        for (a, b) in lhs.coeffs().iter().zip(rhs.coeffs()) {
            prop_assert!(a.approx_eq(b, 1e-12));
        }
    }

    #[test]
    fn exponentials_of_bosonic_generators_are_group_elements(t in -3.0f64..3.0, u in -3.0f64..3.0, v in -3.0f64..3.0) {
        let g = gens();
        let x = g.t_of(Generator::P(0, 0)).scale_real(t)
            .add(&g.t_of(Generator::P(1, 1)).scale_real(u)).unwrap()
            .add(&g.t_of(Generator::P(0, 1)).scale_real(v)).unwrap();
        prop_assert!(g.check_group_element(&x.matrix_exp().unwrap()));
    }

    #[test]
    fn superbrackets_satisfy_jacobi(i in 0usize..5, j in 0usize..5, k in 0usize..5) {
        let g = gens();
        let (a, b, c) = (g.t_of(Generator::ALL[i]), g.t_of(Generator::ALL[j]), g.t_of(Generator::ALL[k]));
        let (da, db, dc) = (a.grade() as usize, b.grade() as usize, c.grade() as usize);
        let s = |e: usize| if e.is_multiple_of(2) { 1.0 } else { -1.0 };
        let t1 = a.superbracket(&b.superbracket(&c).unwrap()).unwrap().scale_real(s(da * dc));
        let t2 = b.superbracket(&c.superbracket(&a).unwrap()).unwrap().scale_real(s(db * da));
        let t3 = c.superbracket(&a.superbracket(&b).unwrap()).unwrap().scale_real(s(dc * db));
        prop_assert!(t1.add(&t2).unwrap().add(&t3).unwrap().is_zero());
    }

    #[test]
    fn uosp_exponentials_are_super_unitary(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let g = gens();
        let ctx = AlgebraContext::new(2);
        let xi = [0, 1, 2].map(|_| GrassmannNumber::real(ctx, rng.gen_range(-2.0..2.0)));
        let eta = sample::grassmann(&mut rng, ctx, 1, 0.5);
        let x = g.uosp_element(ctx, &xi, &eta).unwrap();
        prop_assert!(x.superadjoint().approx_eq(&x.neg(), 1e-12));
        let m = x.matrix_exp().unwrap();
        let one = Supermatrix::identity(ctx, GradedShape::superqubit());
        prop_assert!(m.superadjoint().matmul(&m).unwrap().approx_eq(&one, 1e-9));
    }
}

#[test]
fn uosp_examples() {
    let g = gens();
    let [a1, a2, a3] = g.uosp_basis();
    for a in [&a1, &a2, &a3] {
        assert_eq!(a.superadjoint(), a.neg());
    }
    let p00 = g.p_of(Generator::P(0, 0));
    assert_ne!(p00.superadjoint(), p00.neg());
    assert_eq!(g.p_of(Generator::Q(0)).superadjoint(), g.p_of(Generator::Q(1)));
    assert_eq!(g.p_of(Generator::Q(1)).superadjoint(), g.p_of(Generator::Q(0)).neg());
}

#[test]
fn bad_slot() {
    let ctx = AlgebraContext::new(1);
    let s = single(ctx, 2, "00", GrassmannNumber::one(ctx));
    assert!(gens().act(Generator::Q(0), 2, &s).is_err());
}

#[test]
fn unit_perturbation_breaks_the_group_condition() {
    let g = gens();
    let ctx = AlgebraContext::new(1);
    let s = GradedShape::superqubit();
    let mut vals = [0.0; 9];
    vals[0] = 1.0;
    let m = Supermatrix::identity(ctx, s.clone()).add(&Supermatrix::from_real(ctx, s.clone(), s, 0, &vals).unwrap()).unwrap();
    assert!(!g.check_group_element(&m));
}
