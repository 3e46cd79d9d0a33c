//! Mode-coefficient forms of the defining relations, as linear combinations
//! of operator words.
//!
//! Every relation is checked in kernel-cleared form: for fixed exponents the
//! coefficient is a finite sum of products of A-modes and plain Θ-modes.

use std::sync::Arc;

use crate::gklo::{Flavor, Model};
use crate::qtorus::TorusElement;
use crate::scalars::{Scalar, D, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relation {
    TT,
    TA,
    AA0,
    AA1,
    AATheta,
    Serre,
}

impl Relation {
    pub const ALL: [Relation; 6] =
        [Relation::TT, Relation::TA, Relation::AA0, Relation::AA1, Relation::AATheta, Relation::Serre];

    pub fn name(self) -> &'static str {
        match self {
            Relation::TT => "TT",
            Relation::TA => "TA",
            Relation::AA0 => "AA0",
            Relation::AA1 => "AA1",
            Relation::AATheta => "AATheta",
            Relation::Serre => "Serre",
        }
    }

    pub fn parse(s: &str) -> Option<Relation> {
        Relation::ALL.into_iter().find(|r| r.name().eq_ignore_ascii_case(s))
    }

    /// Number of exponents per coefficient tuple.
    pub fn arity(self) -> usize {
        match self {
            Relation::Serre => 3,
            _ => 2,
        }
    }

    /// Whether the relation concerns a single vertex.
    pub fn is_diagonal(self) -> bool {
        self == Relation::AATheta
    }
}

/// `coef * ops[0] * ops[1] * ...`.
#[derive(Clone)]
pub struct Word {
    pub coef: Scalar,
    pub ops: Vec<Arc<TorusElement>>,
}

/// `lhs = rhs` as two lists of words.
#[derive(Clone, Default)]
pub struct Identity {
    pub lhs: Vec<Word>,
    pub rhs: Vec<Word>,
}

fn qp(e: i64) -> Scalar {
    Scalar::var(Q, e as i32)
}

fn cp(e: i64) -> Scalar {
    Scalar::var(D, 2 * e as i32)
}

/// `[2]_q = q + q^{-1}`.
fn qint2() -> Scalar {
    qp(1).add(&qp(-1))
}

struct Builder<'a> {
    model: &'a Model,
    out: Vec<Word>,
}

impl<'a> Builder<'a> {
    fn new(model: &'a Model) -> Builder<'a> {
        Builder { model, out: Vec::new() }
    }

    fn a(&self, i: usize, r: i64) -> Arc<TorusElement> {
        self.model.a_mode(i, r)
    }

    fn t(&self, i: usize, r: i64) -> Option<Arc<TorusElement>> {
        let s = self.model.theta_mode(i, r, Flavor::Plain);
        (!s.is_zero()).then(|| Arc::new(TorusElement::scalar(s)))
    }

    fn push(&mut self, coef: Scalar, ops: Vec<Option<Arc<TorusElement>>>) {
        if coef.is_zero() {
            return;
        }
        let mut v = Vec::with_capacity(ops.len());
        for o in ops {
            match o {
                Some(x) if !x.is_zero() => v.push(x),
                _ => return,
            }
        }
        self.out.push(Word { coef, ops: v });
    }
}

/// Sym weight: 1 for the honest sum over the swap, 1/2 for the averaged
/// (tampered) variant.
fn sym_weight(model: &Model) -> Scalar {
    if model.tamper().sym_average {
        Scalar::from_ratio(1, 2)
    } else {
        Scalar::one()
    }
}

/// Builds the identity for one coefficient tuple. `j` is ignored for
/// single-vertex relations.
pub fn relation_identity(model: &Model, rel: Relation, i: usize, j: usize, e: &[i64]) -> Identity {
    match rel {
        Relation::TT => tt(model, i, j, e[0], e[1]),
        Relation::TA => ta(model, i, j, e[0], e[1]),
        Relation::AA0 => aa0(model, i, j, e[0], e[1]),
        Relation::AA1 => aa1(model, i, j, e[0], e[1]),
        Relation::AATheta => aa_theta(model, i, e[0], e[1]),
        Relation::Serre => serre(model, i, j, e[0], e[1], e[2]),
    }
}

fn tt(model: &Model, i: usize, j: usize, r: i64, s: i64) -> Identity {
    let mut l = Builder::new(model);
    let mut rr = Builder::new(model);
    l.push(Scalar::one(), vec![l.t(i, r), l.t(j, s)]);
    rr.push(Scalar::one(), vec![rr.t(j, s), rr.t(i, r)]);
    Identity { lhs: l.out, rhs: rr.out }
}

/// Coefficient of `z^m w^n` in
/// `(1 - q^a z/w)(1 - q^{-a} C z w) Θ_i(z) A_j(w) = (1 - q^{-a} z/w)(1 - q^a C z w) A_j(w) Θ_i(z)`.
fn ta(model: &Model, i: usize, j: usize, m: i64, n: i64) -> Identity {
    let a = model.instance().a(i, j) as i64;
    let c = cp(1);
    let lk = [(0, 0, Scalar::one()), (1, -1, qp(a).neg()), (1, 1, qp(-a).mul(&c).neg()), (2, 0, c.clone())];
    let rk = [(0, 0, Scalar::one()), (1, -1, qp(-a).neg()), (1, 1, qp(a).mul(&c).neg()), (2, 0, c.clone())];
    let mut l = Builder::new(model);
    for (dz, dw, k) in lk {
        l.push(k, vec![l.t(i, m - dz), Some(l.a(j, n - dw))]);
    }
    let mut r = Builder::new(model);
    for (dz, dw, k) in rk {
        r.push(k, vec![Some(r.a(j, n - dw)), r.t(i, m - dz)]);
    }
    Identity { lhs: l.out, rhs: r.out }
}

fn aa0(model: &Model, i: usize, j: usize, m: i64, n: i64) -> Identity {
    let mut l = Builder::new(model);
    l.push(Scalar::one(), vec![Some(l.a(i, m)), Some(l.a(j, n))]);
    let mut r = Builder::new(model);
    r.push(Scalar::one(), vec![Some(r.a(j, n)), Some(r.a(i, m))]);
    Identity { lhs: l.out, rhs: r.out }
}

/// `q^{-1}A_{i,m-1}A_{j,n} - A_{i,m}A_{j,n-1} - A_{j,n}A_{i,m-1} + q^{-1}A_{j,n-1}A_{i,m} = 0`.
fn aa1(model: &Model, i: usize, j: usize, m: i64, n: i64) -> Identity {
    let mut l = Builder::new(model);
    let one = Scalar::one();
    l.push(qp(-1), vec![Some(l.a(i, m - 1)), Some(l.a(j, n))]);
    l.push(one.neg(), vec![Some(l.a(i, m)), Some(l.a(j, n - 1))]);
    l.push(one.neg(), vec![Some(l.a(j, n)), Some(l.a(i, m - 1))]);
    l.push(qp(-1), vec![Some(l.a(j, n - 1)), Some(l.a(i, m))]);
    Identity { lhs: l.out, rhs: Vec::new() }
}

/// Left side: coefficient of `z^m w^n` in `Sym_{z,w} (q^2 z - w) A_i(z) A_i(w)`.
pub(crate) fn aa_theta_lhs(model: &Model, i: usize, m: i64, n: i64) -> Vec<Word> {
    let s = sym_weight(model);
    let q2 = qp(2).mul(&s);
    let one = s.neg();
    let mut l = Builder::new(model);
    l.push(q2.clone(), vec![Some(l.a(i, m - 1)), Some(l.a(i, n))]);
    l.push(one.clone(), vec![Some(l.a(i, m)), Some(l.a(i, n - 1))]);
    l.push(q2, vec![Some(l.a(i, n - 1)), Some(l.a(i, m))]);
    l.push(one, vec![Some(l.a(i, n)), Some(l.a(i, m - 1))]);
    l.out
}

/// Right side: the Δ-Θ expansion
/// `q^{-2}ρκ_i (q^2 C^{m-1}Θ_{n-m+1} - C^mΘ_{n-m-1} + q^2 C^{n-1}Θ_{m-n+1} - C^nΘ_{m-n-1})`.
pub(crate) fn aa_theta_rhs(model: &Model, i: usize, m: i64, n: i64) -> Vec<Word> {
    let pref = qp(-2).mul(&model.rho()).mul(&model.vars().kappa(i));
    let mut r = Builder::new(model);
    let q2 = qp(2);
    r.push(pref.mul(&q2).mul(&cp(m - 1)), vec![r.t(i, n - m + 1)]);
    r.push(pref.mul(&cp(m)).neg(), vec![r.t(i, n - m - 1)]);
    r.push(pref.mul(&q2).mul(&cp(n - 1)), vec![r.t(i, m - n + 1)]);
    r.push(pref.mul(&cp(n)).neg(), vec![r.t(i, m - n - 1)]);
    r.out
}

fn aa_theta(model: &Model, i: usize, m: i64, n: i64) -> Identity {
    Identity { lhs: aa_theta_lhs(model, i, m, n), rhs: aa_theta_rhs(model, i, m, n) }
}

/// Coefficient of `w1^a w2^b z^c`.
///
/// Left: `Sym_{w1,w2}` of `A_i A_i A_j - [2] A_i A_j A_i + A_j A_i A_i`.
/// Right: `-κ_iρ (f(a,b,c) + f(b,a,c))` where, expanding `Δ(w1w2)` and both
/// kernels in nonnegative powers of `w2/w1`,
/// `f = [2] Σ_n C^{a+1+n} q^{2n} P(b-a-1-2n, c-1) + Σ_n k_n C^{a+n} Q(b-a-2n, c)`,
/// `k_0 = 1`, `k_n = q^{2n} + q^{2n-2}`, `P(s,c) = [Θ_s, A_c]_{q^{-2}}`,
/// `Q(s,c) = [A_c, Θ_s]_{q^{-2}}`, and `s ≥ -μ_i` bounds `n`.
fn serre(model: &Model, i: usize, j: usize, a: i64, b: i64, c: i64) -> Identity {
    let s = sym_weight(model);
    let br = qint2();
    let mut l = Builder::new(model);
    for (x, y) in [(a, b), (b, a)] {
        l.push(s.clone(), vec![Some(l.a(i, x)), Some(l.a(i, y)), Some(l.a(j, c))]);
        l.push(br.mul(&s).neg(), vec![Some(l.a(i, x)), Some(l.a(j, c)), Some(l.a(i, y))]);
        l.push(s.clone(), vec![Some(l.a(j, c)), Some(l.a(i, x)), Some(l.a(i, y))]);
    }
    let mu = model.instance().mu(i);
    let pref = model.vars().kappa(i).mul(&model.rho()).mul(&s).neg();
    let qm2 = qp(-2);
    let mut r = Builder::new(model);
    for (x, y) in [(a, b), (b, a)] {
        let mut n = 0;
        while y - x - 1 - 2 * n >= -mu {
            let sidx = y - x - 1 - 2 * n;
            let k = pref.mul(&br).mul(&cp(x + 1 + n)).mul(&qp(2 * n));
            // P(s, c-1) = Θ_s A_{c-1} - q^{-2} A_{c-1} Θ_s
            r.push(k.clone(), vec![r.t(i, sidx), Some(r.a(j, c - 1))]);
            r.push(k.mul(&qm2).neg(), vec![Some(r.a(j, c - 1)), r.t(i, sidx)]);
            n += 1;
        }
        let mut n = 0;
        while y - x - 2 * n >= -mu {
            let sidx = y - x - 2 * n;
            let kn = if n == 0 { Scalar::one() } else { qp(2 * n).add(&qp(2 * n - 2)) };
            let k = pref.mul(&kn).mul(&cp(x + n));
            // Q(s, c) = A_c Θ_s - q^{-2} Θ_s A_c
            r.push(k.clone(), vec![Some(r.a(j, c)), r.t(i, sidx)]);
            r.push(k.mul(&qm2).neg(), vec![r.t(i, sidx), Some(r.a(j, c))]);
            n += 1;
        }
    }
    Identity { lhs: l.out, rhs: r.out }
}
