use num_complex::Complex64;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

use superqubit::grassmann::{AlgebraContext, GrassmannNumber, VANISH_TOL};
use superqubit::invariants::*;
use superqubit::osp::{build_generators, Generator, OspParams};
use superqubit::parser::parse_state;
use superqubit::sample;
use superqubit::states::SuperState;
use superqubit::sweep::{bell_soul_tau, evaluate, Family};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol
}

fn parsed(text: &str) -> SuperState {
    parse_state(text, None).unwrap()
}

/// Cayley's hyperdeterminant written out monomial by monomial.
fn cayley_polynomial(a: &[Complex64; 8]) -> Complex64 {
    let at = |s: &str| {
        let b = s.as_bytes();
        a[4 * (b[0] - b'0') as usize + 2 * (b[1] - b'0') as usize + (b[2] - b'0') as usize]
    };
    let sq = |x: &str, y: &str| at(x) * at(x) * at(y) * at(y);
    let quad = |p: [&str; 4]| at(p[0]) * at(p[1]) * at(p[2]) * at(p[3]);
    sq("000", "111") + sq("001", "110") + sq("010", "101") + sq("100", "011")
        - 2.0
            * (quad(["000", "111", "011", "100"])
                + quad(["000", "111", "101", "010"])
                + quad(["000", "111", "110", "001"])
                + quad(["011", "100", "101", "010"])
                + quad(["011", "100", "110", "001"])
                + quad(["101", "010", "110", "001"]))
        + 4.0 * (quad(["000", "110", "101", "011"]) + quad(["111", "001", "010", "100"]))
}

fn random8(rng: &mut StdRng) -> [Complex64; 8] {
    std::array::from_fn(|_| sample::complex(rng))
}

fn random_sl2(rng: &mut StdRng) -> [[Complex64; 2]; 2] {
    let (a, b, cc) = (sample::complex(rng), sample::complex(rng), sample::complex(rng));
    let a = a + c(1.0, 0.0);
    [[a, b], [cc, (c(1.0, 0.0) + b * cc) / a]]
}

fn apply_local(a: &[Complex64; 8], m: &[[Complex64; 2]; 2], slot: usize) -> [Complex64; 8] {
    let shift = 2 - slot;
    let mut out = [c(0.0, 0.0); 8];
    for (i, v) in out.iter_mut().enumerate() {
        let bit = (i >> shift) & 1;
        for k in 0..2 {
            let j = (i & !(1 << shift)) | (k << shift);
            *v += m[bit][k] * a[j];
        }
    }
    out
}

// ---------------------------------------------------------------- worked examples

#[test]
fn two_superqubit_examples() {
    for text in ["(1/sqrt(2))(|00> + |11>)", "i|**>", "(1/sqrt(3))(|00> + |11> + i|**>)"] {
        let s = parsed(text);
        assert!(close(sdet(&s).unwrap().body(), c(0.5, 0.0), 1e-12), "{text}");
        assert!(close(super_two_tangle(&s).unwrap().body(), c(1.0, 0.0), 1e-12), "{text}");
    }
}

#[test]
fn three_superqubit_examples() {
    let ghz = parsed("(1/sqrt(8))(|000> + |**0> + |*0*> + |0**> + |111> + |**1> + |*1*> + |1**>)");
    let forms = hyperdet_forms(&ghz).unwrap();
    assert!(close(forms.quadratic.body(), c(1.0 / 64.0, 0.0), 1e-12));
    let tau = super_three_tangle(&ghz).unwrap();
    assert!(close(tau.value().unwrap().body(), c(1.0 / 16.0, 0.0), 1e-12));

    let w = parsed("(1/sqrt(6))(|110> + |101> + |011> + |**1> + |*1*> + |1**>)");
    let [ga, _, _] = super_gamma(&w).unwrap();
    assert!(close(ga[4].body(), c(-0.5, 0.0), 1e-12));
    let t = super_t(&w).unwrap();
    assert!(close(t.coeff(&[1, 1, 1]).body(), c(1.0 / (2.0 * 6f64.sqrt()), 0.0), 1e-12));
    assert!(superhyperdet(&w).unwrap().is_zero());

    let bis = parsed("(1/sqrt(3))(|000> + |011> + |0**>)");
    assert!(close(super_gamma(&bis).unwrap()[0][0].body(), c(1.0 / 3.0, 0.0), 1e-12));
}

#[test]
fn hyperdet_forms_agree_on_random_states() {
    let mut rng = StdRng::seed_from_u64(3);
    for _ in 0..5 {
        let s = sample::state(&mut rng, 3, AlgebraContext::new(1), true);
        let f = hyperdet_forms(&s).unwrap();
        assert!(f.quadratic.approx_eq(&f.supertrace, 1e-12));
        assert!(f.quadratic.approx_eq(&f.t_contraction, 1e-12));
        assert!(f.quadratic.approx_eq(&(-&f.minus_sdet_gamma), 1e-12));
    }
}

// ---------------------------------------------------------------- families

#[test]
fn bell_soul_family_on_grid() {
    let alpha = c(1.0, 0.0);
    for i in 0..21 {
        for j in 0..21 {
            let beta = c(-2.0 + 0.2 * i as f64, -2.0 + 0.2 * j as f64);
            let row = evaluate(Family::BellSoul, alpha, beta).unwrap();
            let norm = alpha.norm_sqr() + beta.norm_sqr();
            let sdet_expected = (alpha * alpha - beta * beta) / (2.0 * norm);
            assert!(close(row.covariant, sdet_expected, 1e-12), "{beta}");
            assert!((row.tau - bell_soul_tau(alpha, beta)).abs() <= 1e-12, "{beta}");
        }
    }
    for beta in [c(1.0, 0.0), c(-1.0, 0.0)] {
        assert!(evaluate(Family::BellSoul, alpha, beta).unwrap().tau.abs() <= 1e-12);
    }
    for im in [-2.0, -0.7, 0.3, 1.9] {
        assert!((evaluate(Family::BellSoul, alpha, c(0.0, im)).unwrap().tau - 1.0).abs() <= 1e-12);
    }
}

#[test]
fn super_w_family() {
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..10 {
        let (alpha, beta) = (sample::complex(&mut rng), sample::complex(&mut rng));
        let row = evaluate(Family::SuperW, alpha, beta).unwrap();
        let norm = alpha.norm_sqr() + beta.norm_sqr();
        let core = 2.0 * alpha * alpha + beta * beta;
        assert!(close(row.covariant, -core / (3.0 * norm), 1e-12));
        let t111 = alpha * core / (3.0 * 3f64.sqrt() * norm.powf(1.5));
        assert!(close(row.t111.unwrap(), t111, 1e-12));
    }
}

#[test]
fn biseparable_family() {
    let mut rng = StdRng::seed_from_u64(12);
    for _ in 0..10 {
        let (alpha, beta) = (sample::complex(&mut rng), sample::complex(&mut rng));
        let row = evaluate(Family::Biseparable, alpha, beta).unwrap();
        let norm = alpha.norm_sqr() + beta.norm_sqr();
        assert!(close(row.covariant, (alpha * alpha - beta * beta) / norm, 1e-12));
    }
}

// ---------------------------------------------------------------- classical oracles

#[test]
fn cayley_matches_polynomial() {
    let mut rng = StdRng::seed_from_u64(5);
    for _ in 0..100 {
        let a = random8(&mut rng);
        let p = cayley_polynomial(&a);
        assert!(close(cayley_hyperdet(&a), p, 1e-12));
        let g = gamma_covariants(&a);
        for slot in 1..3 {
            let d = g[slot][0][0] * g[slot][1][1] - g[slot][0][1] * g[slot][1][0];
            assert!(close(-d, p, 1e-12));
        }
    }
}

#[test]
fn t_forms_agree() {
    let mut rng = StdRng::seed_from_u64(6);
    for _ in 0..50 {
        let f = t_tensor_forms(&random8(&mut rng));
        for i in 0..8 {
            assert!(close(f[0][i], f[1][i], 1e-12) && close(f[0][i], f[2][i], 1e-12));
        }
    }
}

#[test]
fn two_qubit_entropies_match_tangle() {
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..50 {
        let a: [Complex64; 4] = std::array::from_fn(|_| sample::complex(&mut rng));
        let tau = two_tangle(&a);
        for keep in 0..2 {
            let r = reduced_density2(&a, keep);
            let d = r[0][0] * r[1][1] - r[0][1] * r[1][0];
            assert!((4.0 * d.re - tau).abs() <= 1e-12 && d.im.abs() <= 1e-12);
        }
    }
}

#[test]
fn reduction_to_classical() {
    let mut rng = StdRng::seed_from_u64(8);
    let ctx = AlgebraContext::new(1);
    for _ in 0..50 {
        let s2 = sample::classical_state(&mut rng, 2, ctx);
        let a2: [Complex64; 4] = classical_coefficients(&s2).unwrap().try_into().unwrap();
        assert!(close(sdet(&s2).unwrap().body(), det2(&a2), 1e-12));
        assert!(sdet(&s2).unwrap().soul().is_zero());

        let s3 = sample::classical_state(&mut rng, 3, ctx);
        let a3: [Complex64; 8] = classical_coefficients(&s3).unwrap().try_into().unwrap();
        // the Γ^A quadratic form reduces to det γ^A = -Det
        assert!(close(superhyperdet(&s3).unwrap().body(), -cayley_polynomial(&a3), 1e-12));
    }
}

#[test]
fn super_classification_matches_classical() {
    let mut rng = StdRng::seed_from_u64(9);
    let ctx = AlgebraContext::new(1);
    for _ in 0..200 {
        let s = sample::classical_state(&mut rng, 3, ctx);
        let a: [Complex64; 8] = classical_coefficients(&s).unwrap().try_into().unwrap();
        assert_eq!(classify_super(&s, VANISH_TOL).unwrap(), classify3(&a, VANISH_TOL));
    }
}

#[test]
fn class_representatives() {
    let cases = [
        ("|000>", EntanglementClass::SeparableABC),
        ("|001> + |010>", EntanglementClass::BiseparableA),
        ("|001> + |100>", EntanglementClass::BiseparableB),
        ("|010> + |100>", EntanglementClass::BiseparableC),
        ("|001> + |010> + |100>", EntanglementClass::W),
        ("|000> + |111>", EntanglementClass::Ghz),
    ];
    for (text, class) in cases {
        let s = parse_state(text, Some(3)).unwrap();
        assert_eq!(classify_super(&s, VANISH_TOL).unwrap(), class, "{text}");
        let a: [Complex64; 8] = classical_coefficients(&s).unwrap().try_into().unwrap();
        assert_eq!(classify3(&a, VANISH_TOL), class, "{text}");
    }
    let null = SuperState::zero(3, AlgebraContext::new(1), 0);
    assert_eq!(classify_super(&null, VANISH_TOL).unwrap(), EntanglementClass::Null);
}

#[test]
fn classes_survive_local_sl2() {
    let mut rng = StdRng::seed_from_u64(10);
    let reps = [
        [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0],
        [0.0, 1.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0],
        [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0],
    ];
    for rep in reps {
        let a: [Complex64; 8] = rep.map(|x| c(x, 0.0));
        let class = classify3(&a, VANISH_TOL);
        for _ in 0..20 {
            let mut b = a;
            for slot in 0..3 {
                b = apply_local(&b, &random_sl2(&mut rng), slot);
            }
            assert_eq!(classify3(&b, VANISH_TOL), class);
            assert!(close(cayley_hyperdet(&b), cayley_hyperdet(&a), 1e-9));
        }
    }
}

#[test]
fn product_states_vanish() {
    let mut rng = StdRng::seed_from_u64(13);
    let ctx = AlgebraContext::new(2);
    for _ in 0..20 {
        assert!(sdet(&sample::product_state(&mut rng, 2, ctx)).unwrap().is_zero());
        let p3 = sample::product_state(&mut rng, 3, ctx);
        assert!(superhyperdet(&p3).unwrap().is_zero());
        assert!(super_t(&p3).unwrap().is_zero());
    }
}

#[test]
fn berezinian_differs_from_sdet() {
    let cmp = berezinian_compare(&parsed("(1/sqrt(3))(|00> + |11> + i|**>)")).unwrap();
    let ber = cmp.berezinian.unwrap();
    assert!(close(ber.body(), c(1.0 / 3.0, 0.0) / c(0.0, 1.0 / 3f64.sqrt()), 1e-12));
    assert!(!cmp.equal);
    assert!(berezinian_compare(&parsed("(1/sqrt(2))(|00> + |11>)")).unwrap().berezinian.is_none());
}

#[test]
fn soul_only_hyperdet_has_undefined_tangle() {
    let ctx = AlgebraContext::new(2);
    let theta = |i| GrassmannNumber::generator(ctx, i).unwrap();
    let one = GrassmannNumber::one(ctx);
    let s = SuperState::from_labels(3, ctx, [("000", one.clone()), ("011", one.clone()), ("101", one), ("110", &theta(0) * &theta(2))])
        .unwrap();
    let d = superhyperdet(&s).unwrap();
    assert!(d.body().norm() == 0.0 && !d.is_zero());
    assert_eq!(super_three_tangle(&s).unwrap(), ThreeTangle::UndefinedSqrt);
    assert_eq!(super_three_tangle(&s).unwrap().to_json(), serde_json::json!("undefined-sqrt"));
}

#[test]
fn analyze_rejects_bad_input() {
    let s = parse_state("|0>", None).unwrap();
    assert_eq!(analyze(&s, VANISH_TOL).unwrap_err(), InvariantError::UnsupportedCount(1));
}

// ---------------------------------------------------------------- invariance

fn random_state(seed: u64, n: usize) -> SuperState {
    sample::state(&mut StdRng::seed_from_u64(seed), n, AlgebraContext::new(1), true)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn sdet_is_invariant(seed in any::<u64>(), slot in 0usize..2, k in 0usize..5) {
        let g = build_generators(OspParams::OSP12);
        let s = random_state(seed, 2);
        let d = infinitesimal_invariance_check(InvariantKind::Sdet, &g, &s, Generator::ALL[k], slot).unwrap();
        prop_assert!(d.is_zero(), "{}", d);
    }

    #[test]
    fn hyperdet_is_invariant(seed in any::<u64>(), slot in 0usize..3, k in 0usize..5) {
        let g = build_generators(OspParams::OSP12);
        let s = random_state(seed, 3);
        let d = infinitesimal_invariance_check(InvariantKind::Hyperdet, &g, &s, Generator::ALL[k], slot).unwrap();
        prop_assert!(d.is_zero(), "{}", d);
    }

    #[test]
    fn t_is_covariant(seed in any::<u64>(), slot in 0usize..3, k in 0usize..5) {
        let g = build_generators(OspParams::OSP12);
        let s = random_state(seed, 3);
        prop_assert!(t_covariance_defect(&g, &s, Generator::ALL[k], slot).unwrap().is_zero());
    }

    #[test]
    fn tangles_are_real_and_bounded(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let s = sample::classical_state(&mut rng, 3, AlgebraContext::new(1)).normalize().unwrap();
        let a: [Complex64; 8] = classical_coefficients(&s).unwrap().try_into().unwrap();
        let tau = three_tangle(&a);
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&tau));
        let sup = super_three_tangle(&s).unwrap();
        prop_assert!((sup.value().unwrap().body().re - tau).abs() < 1e-12);
    }
}
