//! Relation and lemma checkers producing [`CheckReport`]s.

mod lemmas;
mod relations;

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::gklo::{Flavor, Model};
use crate::qtorus::{RatFn, RatSum, TorusElement, TorusSum};
use crate::scalars::{ArithError, Mono, Scalar, Spectral};

pub use lemmas::{check_lemma, frakx_closed_form, lemma_applicable, lemma_label, lemma_targets, Lemma};
pub use relations::{relation_identity, Identity, Relation, Word};

/// Longest residual text kept in a report.
pub const RESIDUAL_LIMIT: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub exponents: Vec<i64>,
    pub residual: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckReport {
    pub identity: String,
    pub status: Status,
    pub window: i64,
    pub failures: Vec<Failure>,
    pub elapsed_ms: u64,
    /// Instance digest; carried alongside the report, not part of its JSON.
    #[serde(skip)]
    pub instance: String,
    /// Number of coefficient tuples or sub-identities examined.
    #[serde(skip)]
    pub examined: usize,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }

    pub(crate) fn skipped(model: &Model, identity: String) -> CheckReport {
        CheckReport {
            identity,
            status: Status::Skipped,
            window: 0,
            failures: Vec::new(),
            elapsed_ms: 0,
            instance: model.instance().digest(),
            examined: 0,
        }
    }

    pub(crate) fn from_failures(
        model: &Model,
        identity: String,
        window: i64,
        failures: Vec<Failure>,
        examined: usize,
        start: Instant,
    ) -> CheckReport {
        CheckReport {
            identity,
            status: if failures.is_empty() { Status::Pass } else { Status::Fail },
            window,
            failures,
            elapsed_ms: start.elapsed().as_millis() as u64,
            instance: model.instance().digest(),
            examined,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VerifyError {
    #[error("window must be positive, got {0}")]
    Window(i64),
    #[error("{rel} needs {need} vertices, got ({i}, {j})")]
    Adjacency { rel: &'static str, need: &'static str, i: String, j: String },
    #[error("{0}")]
    Args(String),
}

pub(crate) fn truncate(mut s: String) -> String {
    if s.len() > RESIDUAL_LIMIT {
        let mut cut = RESIDUAL_LIMIT;
        while !s.is_char_boundary(cut) {
            cut -= 1;
        }
        s.truncate(cut);
        s.push_str(" ...");
    }
    s
}

pub(crate) fn render_residual(model: &Model, r: &TorusElement) -> String {
    truncate(model.torus().render(model.vars(), r))
}

/// `lhs - rhs`, normal ordered and summed per u-monomial.
pub fn identity_residual(model: &Model, id: &Identity) -> TorusElement {
    let mut acc = TorusSum::new();
    let torus = model.torus();
    for w in &id.lhs {
        let ops: Vec<&TorusElement> = w.ops.iter().map(|o| o.as_ref()).collect();
        torus.mul_into(&mut acc, &w.coef, &ops);
    }
    for w in &id.rhs {
        let ops: Vec<&TorusElement> = w.ops.iter().map(|o| o.as_ref()).collect();
        torus.mul_into(&mut acc, &w.coef.neg(), &ops);
    }
    acc.finish()
}

/// One side of an identity as a single normal-ordered element.
pub fn side_value(model: &Model, words: &[Word]) -> TorusElement {
    let mut acc = TorusSum::new();
    for w in words {
        let ops: Vec<&TorusElement> = w.ops.iter().map(|o| o.as_ref()).collect();
        model.torus().mul_into(&mut acc, &w.coef, &ops);
    }
    acc.finish()
}

/// Applies one side to `f` by composing the module action word by word,
/// without normal ordering.
pub fn side_apply(model: &Model, words: &[Word], f: &RatFn) -> RatFn {
    let mut acc = RatSum::default();
    for w in words {
        let mut g = f.clone();
        for op in w.ops.iter().rev() {
            g = model.torus().apply(op, &g);
        }
        acc.push(model.torus().reduce_t(RatFn::from_scalar(&w.coef).mul(&g)));
    }
    model.torus().reduce_t(acc.finish())
}

fn check_pair(model: &Model, rel: Relation, i: usize, j: usize) -> Result<(), VerifyError> {
    let inst = model.instance();
    let need = match rel {
        Relation::AA1 | Relation::Serre if inst.a(i, j) != -1 => Some("adjacent"),
        Relation::AA0 if i == j || inst.a(i, j) != 0 => Some("distinct non-adjacent"),
        _ => None,
    };
    match need {
        Some(need) => Err(VerifyError::Adjacency {
            rel: rel.name(),
            need,
            i: inst.id(i).to_string(),
            j: inst.id(j).to_string(),
        }),
        None => Ok(()),
    }
}

pub fn relation_label(model: &Model, rel: Relation, i: usize, j: usize) -> String {
    let inst = model.instance();
    if rel.is_diagonal() {
        format!("{}({})", rel.name(), inst.id(i))
    } else {
        format!("{}({},{})", rel.name(), inst.id(i), inst.id(j))
    }
}

/// All exponent tuples of the window `[-R, R]^arity`, lexicographic.
pub fn window_tuples(arity: usize, window: i64) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = vec![Vec::new()];
    for _ in 0..arity {
        out = out
            .into_iter()
            .flat_map(|t| {
                (-window..=window).map(move |x| {
                    let mut t2 = t.clone();
                    t2.push(x);
                    t2
                })
            })
            .collect();
    }
    out
}

/// `LHS - RHS` for one coefficient tuple.
pub fn coefficient_residual(
    model: &Model,
    rel: Relation,
    i: usize,
    j: usize,
    exponents: &[i64],
) -> Result<TorusElement, VerifyError> {
    check_pair(model, rel, i, j)?;
    if exponents.len() != rel.arity() {
        return Err(VerifyError::Args(format!("{} takes {} exponents", rel.name(), rel.arity())));
    }
    Ok(identity_residual(model, &relation_identity(model, rel, i, j, exponents)))
}

/// Certifies one relation on every coefficient tuple of the window.
pub fn check_relation(model: &Model, rel: Relation, i: usize, j: usize, window: i64) -> Result<CheckReport, VerifyError> {
    if window <= 0 {
        return Err(VerifyError::Window(window));
    }
    check_pair(model, rel, i, j)?;
    let start = Instant::now();
    for v in [i, j] {
        model.prepare_theta(v, Flavor::Plain, 2 * window + 2);
    }
    let tuples = window_tuples(rel.arity(), window);
    let results: Vec<Option<Failure>> = tuples
        .par_iter()
        .map(|e| {
            let r = identity_residual(model, &relation_identity(model, rel, i, j, e));
            (!r.is_zero()).then(|| Failure { exponents: e.clone(), residual: render_residual(model, &r) })
        })
        .collect();
    let failures: Vec<Failure> = results.into_iter().flatten().collect();
    Ok(CheckReport::from_failures(model, relation_label(model, rel, i, j), window, failures, tuples.len(), start))
}

/// Vertex pairs a relation applies to on this instance.
pub fn relation_pairs(model: &Model, rel: Relation) -> Vec<(usize, usize)> {
    let inst = model.instance();
    let n = inst.len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let ok = match rel {
                Relation::TT => i <= j,
                Relation::TA => true,
                Relation::AA0 => i < j && inst.a(i, j) == 0,
                Relation::AA1 => i < j && inst.a(i, j) == -1,
                Relation::AATheta => i == j,
                Relation::Serre => inst.a(i, j) == -1,
            };
            if ok {
                out.push((i, j));
            }
        }
    }
    out
}

/// Substitutes central spectral symbols by their support values in every
/// coefficient.
pub fn delta_evaluate(model: &Model, x: &TorusElement, support: &[(Spectral, Scalar)]) -> Result<TorusElement, ArithError> {
    let vt = model.vars();
    let mut err = None;
    let out = x.map_coefficients(|c| {
        let mut v = c.clone();
        for (s, val) in support {
            match v.substitute(vt.spectral_slot(*s), val) {
                Ok(r) => v = r,
                Err(e) => {
                    err = Some(e);
                    return Scalar::zero();
                }
            }
        }
        v
    });
    match err {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

/// Monomials `prod v^n` with `sum |n| ≤ degree` over all v-symbols.
pub fn test_monomials(model: &Model, degree: i32) -> Vec<Mono> {
    let torus = model.torus();
    let slots: Vec<usize> = (0..torus.pairs()).map(|p| torus.v_slot(p)).collect();
    let mut out = vec![Mono::one()];
    for &s in &slots {
        let mut next = Vec::new();
        for m in &out {
            let used: i32 = slots.iter().map(|&t| m.get(t).abs()).sum();
            for e in -(degree - used)..=(degree - used) {
                let mut m2 = m.clone();
                m2.set(s, e);
                next.push(m2);
            }
        }
        out = next;
    }
    out
}
