mod common;

use igklo_core::gklo::{Model, Tamper};
use igklo_core::qtorus::TorusElement;
use igklo_core::scalars::{Scalar, Spectral, Q};
use igklo_core::verifier::{
    check_lemma, check_relation, coefficient_residual, delta_evaluate, relation_pairs, window_tuples, CheckReport,
    Lemma, Relation, Status, VerifyError,
};

fn tampered(inst: igklo_core::Instance, name: &str, value: &str) -> Model {
    let mut t = Tamper::default();
    t.set(name, value).unwrap();
    Model::with_tamper(inst, t)
}

#[test]
fn window_tuple_counts() {
    assert_eq!(window_tuples(2, 4).len(), 81);
    assert_eq!(window_tuples(3, 3).len(), 343);
    assert_eq!(window_tuples(2, 1)[0], vec![-1, -1]);
}

#[test]
fn aa_theta_rank1_passes() {
    let m = Model::new(common::rank1(2, 0, 1, 0));
    let rep = check_relation(&m, Relation::AATheta, 0, 0, 4).unwrap();
    assert_eq!(rep.status, Status::Pass);
    assert_eq!(rep.examined, 81);
    assert_eq!(rep.identity, "AATheta(0)");
}

#[test]
fn aa0_on_the_end_pair() {
    let m = Model::new(common::a3());
    assert_eq!(relation_pairs(&m, Relation::AA0), vec![(0, 2)]);
    assert!(check_relation(&m, Relation::AA0, 0, 2, 2).unwrap().passed());
}

#[test]
fn tt_residuals_vanish() {
    let m = Model::new(common::rank1(2, 0, 1, 1));
    for e in window_tuples(2, 2) {
        assert!(coefficient_residual(&m, Relation::TT, 0, 0, &e).unwrap().is_zero());
    }
}

#[test]
fn rho_prime_tamper_breaks_aa_theta() {
    let m = tampered(common::rank1(2, 0, 1, 0), "rhoPrime", "1");
    let r = coefficient_residual(&m, Relation::AATheta, 0, 0, &[0, 0]).unwrap();
    assert!(!r.is_zero());
    let rep = check_relation(&m, Relation::AATheta, 0, 0, 1).unwrap();
    assert_eq!(rep.status, Status::Fail);
    assert!(!rep.failures[0].residual.is_empty());
}

#[test]
fn argument_errors() {
    let m = Model::new(common::a3());
    assert!(matches!(check_relation(&m, Relation::AA1, 0, 2, 2), Err(VerifyError::Adjacency { .. })));
    assert!(matches!(check_relation(&m, Relation::AA0, 0, 1, 2), Err(VerifyError::Adjacency { .. })));
    assert!(matches!(check_relation(&m, Relation::Serre, 0, 2, 2), Err(VerifyError::Adjacency { .. })));
    assert!(matches!(check_relation(&m, Relation::TA, 0, 1, 0), Err(VerifyError::Window(0))));
    assert!(matches!(coefficient_residual(&m, Relation::Serre, 0, 1, &[0, 0]), Err(VerifyError::Args(_))));
    assert!(check_lemma(&m, Lemma::SerreAux, 0, 2, None).is_err());
    assert!(check_lemma(&m, Lemma::Vanishing, 0, 1, Some(0)).is_err());
}

#[test]
fn ids_parse() {
    assert_eq!(Relation::parse("aatheta"), Some(Relation::AATheta));
    assert_eq!(Relation::parse("Serre"), Some(Relation::Serre));
    assert_eq!(Relation::parse("XX"), None);
    assert_eq!(Lemma::parse("serre-aux"), Some(Lemma::SerreAux));
    assert_eq!(Lemma::parse("F"), Some(Lemma::F));
    assert_eq!(Lemma::parse("nope"), None);
    for l in Lemma::ALL {
        assert_eq!(Lemma::parse(l.name()), Some(l));
    }
}

#[test]
fn xsecond_is_gated_on_theta() {
    let m = Model::new(common::rank1(2, 0, 1, 0));
    assert_eq!(check_lemma(&m, Lemma::Xsecond, 0, 0, None).unwrap().status, Status::Skipped);
    let m = Model::new(common::rank1(2, 0, 1, 1));
    assert_eq!(check_lemma(&m, Lemma::Xsecond, 0, 0, None).unwrap().status, Status::Pass);
}

#[test]
fn exchange_lemmas_on_a2() {
    let m = Model::new(common::a2_wide(true));
    for lemma in [Lemma::Alpha, Lemma::Beta, Lemma::SerreAux] {
        for (i, j) in igklo_core::verifier::lemma_targets(&m, lemma) {
            let rep = check_lemma(&m, lemma, i, j, None).unwrap();
            assert!(rep.passed(), "{}: {:?}", rep.identity, rep.failures.first());
        }
    }
}

#[test]
fn delta_evaluation() {
    let m = Model::new(common::rank1(2, 0, 1, 0));
    let vt = m.vars();
    let z = vt.spectral(Spectral::Z);
    let q = Scalar::var(Q, 1);
    // (z - q) u  at z = w  ->  (w - q) u
    let x = TorusElement::monomial(z.sub(&q), m.torus().u(0, 0, 1));
    let got = delta_evaluate(&m, &x, &[(Spectral::Z, vt.w(0, 0))]).unwrap();
    let expect = TorusElement::monomial(vt.w(0, 0).sub(&q), m.torus().u(0, 0, 1));
    assert!(got.equals(&expect));
    let plain = (*m.a_mode(0, 1)).clone();
    assert!(delta_evaluate(&m, &plain, &[(Spectral::Z, q.clone())]).unwrap().equals(&plain));
    let pole = TorusElement::scalar(z.sub(&q).inv());
    assert!(delta_evaluate(&m, &pole, &[(Spectral::Z, q)]).is_err());
}

#[test]
fn orientation_covariance_small_window() {
    for forward in [true, false] {
        let m = Model::new(common::a2_theta(forward));
        for rel in [Relation::TA, Relation::AA1] {
            for (i, j) in relation_pairs(&m, rel) {
                assert!(check_relation(&m, rel, i, j, 2).unwrap().passed(), "{rel:?} ({i},{j}) forward={forward}");
            }
        }
    }
}

#[test]
fn symmetrization_guard() {
    let inst = common::rank1(2, 0, 1, 0);
    let avg = tampered(inst.clone(), "sym", "avg");
    assert_eq!(check_relation(&avg, Relation::AATheta, 0, 0, 2).unwrap().status, Status::Fail);
    assert!(check_relation(&Model::new(inst), Relation::AATheta, 0, 0, 2).unwrap().passed());
}

#[test]
fn report_json_round_trip() {
    let m = tampered(common::rank1(2, 0, 1, 0), "rhoPrime", "1");
    let rep = check_relation(&m, Relation::AATheta, 0, 0, 1).unwrap();
    let text = serde_json::to_string(&rep).unwrap();
    let back: CheckReport = serde_json::from_str(&text).unwrap();
    assert_eq!(back.identity, rep.identity);
    assert_eq!(back.status, rep.status);
    assert_eq!(back.failures, rep.failures);
    assert_eq!(serde_json::to_string(&back).unwrap(), text);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys.len(), 5);
    for k in ["identity", "status", "window", "failures", "elapsed_ms"] {
        assert!(keys.contains(&k));
    }
    assert!(serde_json::from_str::<CheckReport>(&text.replace("\"window\"", "\"extra\":1,\"window\"")).is_err());
}

#[test]
fn reports_are_deterministic() {
    let m = tampered(common::a2_theta(true), "gamma", "0");
    let a = check_relation(&m, Relation::AATheta, 0, 0, 2).unwrap();
    let b = check_relation(&m, Relation::AATheta, 0, 0, 2).unwrap();
    assert_eq!(a.failures, b.failures);
    assert_eq!(a.status, Status::Fail);
}
