use num_complex::Complex64;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

use superqubit::grassmann::{AlgebraContext, GrassmannNumber};
use superqubit::parser::parse_state;
use superqubit::sample;

fn ctx() -> AlgebraContext {
    AlgebraContext::new(3)
}

fn pure(seed: u64, parity: u8) -> GrassmannNumber {
    sample::grassmann(&mut StdRng::seed_from_u64(seed), ctx(), parity, 0.4)
}

fn mixed(seed: u64) -> GrassmannNumber {
    &pure(seed, 0) + &pure(seed.wrapping_add(1), 1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let (x, y, z) = (mixed(a), mixed(b), mixed(c));
        prop_assert!(((&x * &y) * &z).approx_eq(&(&x * &(&y * &z)), 1e-12));
        prop_assert!((&x * &(&y + &z)).approx_eq(&(&(&x * &y) + &(&x * &z)), 1e-12));
    }

    #[test]
    fn supercommutativity(a in any::<u64>(), b in any::<u64>(), pa in 0u8..2, pb in 0u8..2) {
        let (x, y) = (pure(a, pa), pure(b, pb));
        let s = if pa * pb == 1 { -1.0 } else { 1.0 };
        prop_assert!((&x * &y).approx_eq(&(&y * &x).scale_real(s), 1e-12));
    }

    #[test]
    fn superstar_rules(a in any::<u64>(), b in any::<u64>()) {
        let (x, y) = (mixed(a), mixed(b));
        prop_assert!((&x * &y).superstar().approx_eq(&(&x.superstar() * &y.superstar()), 1e-12));
        prop_assert!(x.superstar().superstar().approx_eq(&(&x.even_part() - &x.odd_part()), 1e-12));
    }

    #[test]
    fn star_reverses_products(a in any::<u64>(), b in any::<u64>()) {
        let (x, y) = (mixed(a), mixed(b));
        prop_assert!((&x * &y).star().approx_eq(&(&y.star() * &x.star()), 1e-12));
        prop_assert!(x.star().star().approx_eq(&x, 1e-12));
    }

    #[test]
    fn inverse_and_sqrt(a in any::<u64>()) {
        let x = pure(a, 0);
        prop_assume!(x.body().norm() > 0.2);
        let one = GrassmannNumber::one(ctx());
        prop_assert!((&x * &x.inverse().unwrap()).approx_eq(&one, 1e-9));
        let r = x.sqrt().unwrap();
        prop_assert!((&r * &r).approx_eq(&x, 1e-9));
        prop_assert!((&r * &x.inv_sqrt().unwrap()).approx_eq(&one, 1e-9));
    }

    #[test]
    fn exp_of_sum(a in any::<u64>(), b in any::<u64>()) {
        let (x, y) = (pure(a, 0), pure(b, 0));
        prop_assert!((&x + &y).exp().approx_eq(&(&x.exp() * &y.exp()), 1e-9));
    }

    #[test]
    fn json_round_trip(a in any::<u64>()) {
        let x = mixed(a);
        let back = GrassmannNumber::from_json(ctx(), &x.to_json()).unwrap();
        prop_assert!(back.approx_eq(&x, 1e-13));
    }

    #[test]
    fn display_reparses(a in any::<u64>()) {
        let x = pure(a, 0);
        let s = parse_state(&format!("({x})|0>"), Some(1)).unwrap();
        let back = s.coeff(&[0]);
        prop_assert!(back.approx_eq(&x.embed(back.context()).unwrap(), 1e-12));
    }
}

#[test]
fn nilpotency() {
    let t = GrassmannNumber::generator(ctx(), 2).unwrap();
    assert!((&t * &t).is_zero());
    let soul = &(&t * &GrassmannNumber::generator(ctx(), 3).unwrap()) + &GrassmannNumber::generator(ctx(), 0).unwrap();
    assert!(soul.powi(7).is_zero());
}

#[test]
fn singular_body_has_no_inverse() {
    let t = GrassmannNumber::generator(ctx(), 1).unwrap();
    assert!(t.inverse().is_err());
    let body_free = &t * &GrassmannNumber::generator(ctx(), 2).unwrap();
    assert!(body_free.sqrt().is_err());
    assert!(GrassmannNumber::scalar(ctx(), Complex64::new(0.0, 0.0)).inverse().is_err());
}
