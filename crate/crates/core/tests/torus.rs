use igklo_core::cartan::instance;
use igklo_core::gklo::Model;
use igklo_core::qtorus::{RatFn, TorusElement};
use igklo_core::scalars::{Mono, Scalar, Q};
use igklo_core::verifier::test_monomials;
use proptest::prelude::*;

fn q() -> Scalar {
    Scalar::var(Q, 1)
}

fn a2() -> Model {
    Model::new(instance(&[(0, 1)], &[(0, 1, 1, 1), (0, 1, 1, 0)]).unwrap())
}

fn u(m: &Model, i: usize, e: i32) -> TorusElement {
    TorusElement::monomial(Scalar::one(), m.torus().u(i, 0, e))
}

fn w(m: &Model, i: usize) -> TorusElement {
    TorusElement::scalar(m.vars().w(i, 0))
}

#[test]
fn normal_ordering_examples() {
    let m = a2();
    let t = m.torus();
    let uw = t.mul(&u(&m, 0, 1), &w(&m, 0));
    let expect = TorusElement::monomial(q().pow(2).mul(&m.vars().w(0, 0)), t.u(0, 0, 1));
    assert!(uw.equals(&expect));
    assert!(!uw.equals(&t.mul(&w(&m, 0), &u(&m, 0, 1))));
    let uu = t.mul(&u(&m, 0, 1), &u(&m, 1, 1));
    assert!(uu.equals(&TorusElement::monomial(Scalar::one(), t.u(0, 0, 1).mul(&t.u(1, 0, 1)))));
    assert!(uu.equals(&t.mul(&u(&m, 1, 1), &u(&m, 0, 1))));
    let a = m.a_mode(0, 1);
    assert!(t.mul(&a, &TorusElement::scalar(Scalar::one())).equals(&a));
}

#[test]
fn zero_terms_do_not_change_equality() {
    let m = a2();
    let a = m.a_mode(0, 0);
    let padded = a.add(&TorusElement::monomial(Scalar::zero(), m.torus().u(1, 0, 4)));
    assert!(a.equals(&padded));
}

#[test]
fn q_bracket_examples() {
    let m = a2();
    let t = m.torus();
    assert!(t.q_bracket(&u(&m, 0, 1), &u(&m, 1, -1), &Scalar::one()).is_zero());
    assert!(t.q_bracket(&u(&m, 0, 1), &w(&m, 0), &q().pow(2)).is_zero());
    let a = m.a_mode(1, 2);
    assert!(t.q_bracket(&a, &a, &Scalar::one()).is_zero());
    let lhs = t.q_bracket(&a, &a, &q().pow(-2));
    let rhs = t.mul(&a, &a).scale(&Scalar::one().sub(&q().pow(-2)));
    assert!(lhs.equals(&rhs));
}

#[test]
fn apply_examples() {
    let m = a2();
    let t = m.torus();
    let v0 = t.v_slot(t.pair(0, 0));
    let v1 = t.v_slot(t.pair(1, 0));
    let p = RatFn::monomial(Mono::var(v0, 2));
    let got = t.apply(&u(&m, 0, 1), &p);
    assert!(got.equals(&RatFn::from_scalar(&q().pow(2).mul(&Scalar::var(v0, 2)))));
    let got = t.apply(&w(&m, 0), &RatFn::monomial(Mono::one()));
    assert!(got.equals(&RatFn::monomial(Mono::var(v0, 2))));
    let p = RatFn::monomial(Mono::var(v1, 1));
    assert!(t.apply(&u(&m, 0, 1), &p).equals(&p));
}

/// `A_{0,0}` carries `τ X''` on the θ = 1 vertex; composing it twice
/// produces `t^2`, which the action must reduce like the product does.
#[test]
fn apply_reduces_t_squared() {
    let m = a2();
    let t = m.torus();
    let ts = m.vars().t_slot(0).unwrap();
    let a = m.a_mode(0, 0);
    let p = RatFn::monomial(Mono::var(t.v_slot(t.pair(1, 0)), 1));
    let twice = t.apply(&a, &t.apply(&a, &p));
    assert!(twice.num.max_degree_in(ts) <= 1 && !twice.den.mentions(ts));
    assert!(t.apply(&t.mul(&a, &a), &p).equals(&twice));
    let tt = RatFn::from_scalar(&m.vars().t(0)).mul(&RatFn::from_scalar(&m.vars().t(0)));
    assert!(t.reduce_t(tt).equals(&RatFn::from_scalar(&m.tau_sq(0))));
}

/// Small operators: A-modes, shift monomials and v-multiplications.
fn arb_element() -> impl Strategy<Value = (usize, i64, i32)> {
    (0usize..2, -2i64..=2, 0i32..3)
}

fn build(m: &Model, (i, r, kind): (usize, i64, i32)) -> TorusElement {
    match kind {
        0 => (*m.a_mode(i, r)).clone(),
        1 => TorusElement::monomial(m.vars().v(i, 0).pow(r as i32).add(&q()), m.torus().u(i, 0, r.signum() as i32)),
        _ => TorusElement::scalar(Scalar::one().sub(&q().pow(r as i32 + 3).mul(&m.vars().w(i, 0)))),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn multiplication_is_associative(a in arb_element(), b in arb_element(), c in arb_element()) {
        let m = a2();
        let t = m.torus();
        let (a, b, c) = (build(&m, a), build(&m, b), build(&m, c));
        prop_assert!(t.mul(&t.mul(&a, &b), &c).equals(&t.mul(&a, &t.mul(&b, &c))));
    }

    #[test]
    fn apply_is_a_module_action(a in arb_element(), b in arb_element(), deg in -3i32..=3) {
        let m = a2();
        let t = m.torus();
        let (a, b) = (build(&m, a), build(&m, b));
        let p = RatFn::monomial(Mono::var(t.v_slot(t.pair(0, 0)), deg).mul(&Mono::var(t.v_slot(t.pair(1, 0)), 1)));
        let lhs = t.apply(&t.mul(&a, &b), &p);
        let rhs = t.apply(&a, &t.apply(&b, &p));
        prop_assert!(lhs.equals(&rhs));
    }

    #[test]
    fn distinct_elements_are_separated_by_test_monomials(a in arb_element(), e in -2i32..=2, k in 1i64..4) {
        let m = a2();
        let t = m.torus();
        let a = build(&m, a);
        let b = a.add(&TorusElement::monomial(Scalar::from_int(k), t.u(1, 0, e)));
        prop_assert!(!a.equals(&b));
        let separated = test_monomials(&m, 2)
            .into_iter()
            .any(|p| !t.apply(&a, &RatFn::monomial(p.clone())).equals(&t.apply(&b, &RatFn::monomial(p))));
        prop_assert!(separated);
    }

    #[test]
    fn conjugation_matches_u_shift(x in arb_element(), e in -2i32..=2, i in 0usize..2) {
        let m = a2();
        let t = m.torus();
        let x = build(&m, x);
        let conj = t.mul(&t.mul(&u(&m, i, e), &x), &u(&m, i, -e));
        let shifted = x.map_coefficients(|c| t.shift(c, &t.u(i, 0, e)));
        prop_assert!(conj.equals(&shifted));
        let v = m.vars().v(i, 0);
        let expect = v.u_shift(t.v_slot(t.pair(i, 0)), Q, e);
        prop_assert!(t.shift(&v, &t.u(i, 0, e)).equals(&expect));
        prop_assert!(expect.equals(&q().pow(e).mul(&v)));
    }
}
