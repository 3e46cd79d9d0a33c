//! Auxiliary identities behind the relations: C-inversion symmetry, the two
//! forms of `X''`, exchange factors, `X X'` products, the closed form of the
//! diagonal AA coefficient, and the Serre helper identities.
//!
//! The displayed `X X'` closed forms and F-identities are stated for the
//! displayed sign of `X'`; each is linear in `X'_{i,k}`, so they are checked
//! with the sign factor `σ = -1` of the adopted convention.

use std::time::Instant;

use crate::gklo::{Flavor, Model};
use crate::qtorus::TorusElement;
use crate::scalars::{Scalar, Spectral, D, Q};

use super::relations::{aa_theta_lhs, aa_theta_rhs};
use super::{delta_evaluate, render_residual, side_value, truncate, CheckReport, Failure, VerifyError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Lemma {
    Cinv,
    Xsecond,
    Alpha,
    Beta,
    Xxprime,
    Frakx,
    SerreAux,
    Vanishing,
    F,
    G,
}

impl Lemma {
    pub const ALL: [Lemma; 10] = [
        Lemma::Cinv,
        Lemma::Xsecond,
        Lemma::Alpha,
        Lemma::Beta,
        Lemma::Xxprime,
        Lemma::Frakx,
        Lemma::SerreAux,
        Lemma::Vanishing,
        Lemma::F,
        Lemma::G,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Lemma::Cinv => "cinv",
            Lemma::Xsecond => "xsecond",
            Lemma::Alpha => "alpha",
            Lemma::Beta => "beta",
            Lemma::Xxprime => "xxprime",
            Lemma::Frakx => "frakx",
            Lemma::SerreAux => "serre-aux",
            Lemma::Vanishing => "vanishing",
            Lemma::F => "f",
            Lemma::G => "g",
        }
    }

    pub fn parse(s: &str) -> Option<Lemma> {
        Lemma::ALL.into_iter().find(|l| l.name().eq_ignore_ascii_case(s))
    }

    /// Whether the lemma concerns an ordered vertex pair rather than one
    /// vertex.
    pub fn is_pair(self) -> bool {
        matches!(self, Lemma::Alpha | Lemma::Beta | Lemma::SerreAux | Lemma::Vanishing | Lemma::F | Lemma::G)
    }

    /// Default mode window for the lemmas that sweep modes.
    pub fn default_window(self) -> i64 {
        match self {
            Lemma::Frakx => 2,
            Lemma::Vanishing => 1,
            _ => 0,
        }
    }
}

/// Vertex arguments the lemma is run on: every vertex, every ordered pair
/// (exchange lemmas), or every ordered adjacent pair (Serre helpers).
pub fn lemma_targets(model: &Model, lemma: Lemma) -> Vec<(usize, usize)> {
    let inst = model.instance();
    let n = inst.len();
    match lemma {
        Lemma::Alpha | Lemma::Beta => (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect(),
        Lemma::SerreAux | Lemma::Vanishing | Lemma::F | Lemma::G => {
            (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| inst.a(i, j) == -1).collect()
        }
        _ => (0..n).map(|i| (i, i)).collect(),
    }
}

/// False when the identity needs `θ_i = 1` and the vertex has `θ_i = 0`.
pub fn lemma_applicable(model: &Model, lemma: Lemma, i: usize) -> bool {
    lemma != Lemma::Xsecond || model.instance().theta(i) == 1
}

pub fn lemma_label(model: &Model, lemma: Lemma, i: usize, j: usize) -> String {
    let inst = model.instance();
    if lemma.is_pair() {
        format!("{}({},{})", lemma.name(), inst.id(i), inst.id(j))
    } else {
        format!("{}({})", lemma.name(), inst.id(i))
    }
}

fn qp(e: i64) -> Scalar {
    Scalar::var(Q, e as i32)
}

fn dp(e: i64) -> Scalar {
    Scalar::var(D, e as i32)
}

fn int(v: i64) -> Scalar {
    Scalar::from_int(v)
}

fn sgn(e: i64) -> Scalar {
    int(if e.rem_euclid(2) == 0 { 1 } else { -1 })
}

/// Collects sub-identity failures.
struct Checker<'a> {
    model: &'a Model,
    failures: Vec<Failure>,
    examined: usize,
}

impl<'a> Checker<'a> {
    fn new(model: &'a Model) -> Checker<'a> {
        Checker { model, failures: Vec::new(), examined: 0 }
    }

    fn scalar(&mut self, label: &str, idx: &[i64], lhs: &Scalar, rhs: &Scalar) {
        self.examined += 1;
        let r = lhs.sub(rhs);
        if !r.is_zero() {
            let text = truncate(format!("{label}: {}", self.model.vars().render(&r)));
            self.failures.push(Failure { exponents: idx.to_vec(), residual: text });
        }
    }

    fn torus(&mut self, label: &str, idx: &[i64], lhs: &TorusElement, rhs: &TorusElement) {
        self.examined += 1;
        let r = lhs.sub(rhs);
        if !r.is_zero() {
            let text = truncate(format!("{label}: {}", render_residual(self.model, &r)));
            self.failures.push(Failure { exponents: idx.to_vec(), residual: text });
        }
    }

    fn fail(&mut self, label: &str, idx: &[i64], msg: &str) {
        self.examined += 1;
        self.failures.push(Failure { exponents: idx.to_vec(), residual: format!("{label}: {msg}") });
    }
}

/// Runs one lemma. `j` is used by pair lemmas only; `window` overrides the
/// default mode window of `frakx` and `vanishing`.
pub fn check_lemma(
    model: &Model,
    lemma: Lemma,
    i: usize,
    j: usize,
    window: Option<i64>,
) -> Result<CheckReport, VerifyError> {
    let inst = model.instance();
    if i >= inst.len() || j >= inst.len() {
        return Err(VerifyError::Args("vertex out of range".into()));
    }
    if matches!(lemma, Lemma::SerreAux | Lemma::Vanishing | Lemma::F | Lemma::G) && inst.a(i, j) != -1 {
        return Err(VerifyError::Adjacency {
            rel: lemma.name(),
            need: "adjacent",
            i: inst.id(i).to_string(),
            j: inst.id(j).to_string(),
        });
    }
    let window = window.unwrap_or(lemma.default_window());
    if matches!(lemma, Lemma::Frakx | Lemma::Vanishing) && window <= 0 {
        return Err(VerifyError::Window(window));
    }
    let label = lemma_label(model, lemma, i, j);
    if !lemma_applicable(model, lemma, i) {
        return Ok(CheckReport::skipped(model, label));
    }
    let start = Instant::now();
    let mut c = Checker::new(model);
    match lemma {
        Lemma::Cinv => cinv(&mut c, i),
        Lemma::Xsecond => xsecond(&mut c, i),
        Lemma::Alpha => alpha(&mut c, i, j),
        Lemma::Beta => beta(&mut c, i, j),
        Lemma::Xxprime => xxprime(&mut c, i),
        Lemma::Frakx => frakx(&mut c, i, window),
        Lemma::SerreAux => serre_aux(&mut c, i, j),
        Lemma::Vanishing => vanishing(&mut c, i, j, window),
        Lemma::F => f_ident(&mut c, i, j),
        Lemma::G => g_ident(&mut c, i, j),
    }
    let w = if matches!(lemma, Lemma::Frakx | Lemma::Vanishing) { window } else { 0 };
    Ok(CheckReport::from_failures(model, label, w, c.failures, c.examined, start))
}

fn sigma(model: &Model) -> Scalar {
    if model.tamper().printed_xprime_sign {
        Scalar::one()
    } else {
        int(-1)
    }
}

/// `𝔚_{i,k}(x)`.
fn frak_w_at(model: &Model, i: usize, k: usize, x: &Scalar) -> Scalar {
    model.frak_w(i, Some(k)).eval(x).expect("generic point")
}

/// `𝔚_i(C^{-1/2})` (no Γ).
fn frak_w_full_at_d(model: &Model, i: usize) -> Scalar {
    model.frak_w(i, None).eval(&dp(-1)).expect("generic point")
}

fn cinv(c: &mut Checker, i: usize) {
    let model = c.model;
    let zs = model.vars().spectral_slot(Spectral::Z);
    let theta = model.theta_rational(i);
    c.scalar("theta(C^-1 z^-1) = theta(z)", &[], &theta.invert_c().to_scalar(zs), &theta.to_scalar(zs));
    let g = model.gamma(i);
    c.scalar("Gamma(C^-1 z^-1) = Gamma(z)", &[], &g.invert_c().to_scalar(zs), &g.to_scalar(zs));
    let mu = model.instance().mu(i);
    let z = model.vars().spectral(Spectral::Z);
    let factor = model.c().mul(&z.pow(2)).pow((-mu - 2) as i32);
    for k in 0..model.instance().m(i) {
        let w = model.frak_w(i, Some(k));
        c.scalar("W_k(C^-1 z^-1) = (C z^2)^(-mu-2) W_k(z)", &[k as i64], &w.invert_c().to_scalar(zs), &factor.mul(&w.to_scalar(zs)));
    }
    for r in -mu - 3..=-mu {
        let want = if r == -mu { Scalar::one() } else { Scalar::zero() };
        c.scalar("leading acute mode", &[r], &model.theta_mode(i, r, Flavor::Acute), &want);
    }
}

fn xsecond(c: &mut Checker, i: usize) {
    let model = c.model;
    let inst = model.instance();
    let Some(xpp) = model.xpp_coef(i).cloned() else { return };
    let ev = |f: crate::gklo::SpectralRational, x: &Scalar| f.eval(x).expect("generic point");
    let di = dp(-1);
    let qdi = qp(-1).mul(&di);
    let mut e1 = model.eta(i).mul(&ev(model.z_minus(i), &di));
    let mut e2 = model.eta_prime(i).mul(&ev(model.z_plus(i), &di));
    for j in inst.neighbors(i) {
        e1 = e1.mul(&ev(model.w_minus(j, None), &qdi));
        e2 = e2.mul(&ev(model.w_plus(j, None), &qdi));
    }
    e1 = e1.div(&ev(model.w_full(i, None), &di));
    e2 = e2.div(&ev(model.w_full(i, None), &qp(-2).mul(&di)));
    c.scalar("X'' = eta Z^-(C^-1/2) ...", &[0], &xpp, &e1);
    c.scalar("X'' = eta' Z^+(C^-1/2) ...", &[1], &xpp, &e2);
    let (mu, lam) = (inst.mu(i), inst.lambda(i));
    let sq = dp(1).neg().pow(mu as i32).mul(&qp(3 * (mu - lam))).mul(&frak_w_full_at_d(model, i));
    c.scalar("X''^2", &[2], &xpp.pow(2), &sq);
}

/// `α_{i,j}(z, w)` with the exchange exponent `a`.
fn alpha_factor(model: &Model, a: i64, z: &Scalar, w: &Scalar) -> Scalar {
    let cinv = model.c().inv();
    let num = z.sub(&qp(-a).mul(w)).mul(&z.sub(&qp(a).mul(&cinv).div(w)));
    let den = z.sub(&qp(a).mul(w)).mul(&z.sub(&qp(-a).mul(&cinv).div(w)));
    num.div(&den)
}

/// `β_{i,j}(w1, w2) = q^a (w1 - q^{-a} w2)/(w1 - q^a w2)`.
fn beta_factor(a: i64, w1: &Scalar, w2: &Scalar) -> Scalar {
    qp(a).mul(&w1.sub(&qp(-a).mul(w2))).div(&w1.sub(&qp(a).mul(w2)))
}

/// Spectral support of `X_{i,k}` (`w`) and `X'_{i,k}` (`q^2 C^{-1} w^{-1}`).
fn support(model: &Model, primed: bool, i: usize, k: usize) -> Scalar {
    let w = model.vars().w(i, k);
    if primed {
        qp(2).div(&model.c()).div(&w)
    } else {
        w
    }
}

fn op(model: &Model, primed: bool, i: usize, k: usize) -> TorusElement {
    if primed {
        model.xprime(i, k)
    } else {
        model.x(i, k)
    }
}

fn alpha(c: &mut Checker, i: usize, j: usize) {
    let model = c.model;
    let vt = model.vars();
    let torus = model.torus();
    let a = model.instance().a(i, j) as i64;
    let zs = vt.spectral_slot(Spectral::Z);
    let z = vt.spectral(Spectral::Z);
    let theta = TorusElement::scalar(model.theta_rational(i).to_scalar(zs));
    let generic = TorusElement::scalar(alpha_factor(model, a, &z, &vt.spectral(Spectral::W)));
    for k in 0..model.instance().m(j) {
        for primed in [false, true] {
            let y = op(model, primed, j, k);
            let s = support(model, primed, j, k);
            let lhs = torus.mul(&y, &theta);
            let rhs = torus.mul(&torus.mul(&TorusElement::scalar(alpha_factor(model, a, &z, &s)), &theta), &y);
            let name = if primed { "X' theta = alpha theta X'" } else { "X theta = alpha theta X" };
            c.torus(name, &[k as i64, primed as i64], &lhs, &rhs);
            match delta_evaluate(model, &generic, &[(Spectral::W, s)]) {
                Ok(col) => {
                    let want = TorusElement::scalar(alpha_factor(model, a, &z, &support(model, primed, j, k)));
                    c.torus("alpha delta collapse", &[k as i64, primed as i64], &col, &want);
                }
                Err(e) => c.fail("alpha delta collapse", &[k as i64, primed as i64], &e.to_string()),
            }
        }
    }
    if model.instance().theta(j) == 1 {
        let one = alpha_factor(model, a, &z, &dp(-1));
        c.scalar("alpha(z, C^-1/2) = 1", &[], &one, &Scalar::one());
    }
}

fn beta(c: &mut Checker, i: usize, j: usize) {
    let model = c.model;
    let vt = model.vars();
    let torus = model.torus();
    let inst = model.instance();
    let a = inst.a(i, j) as i64;
    let generic = TorusElement::scalar(beta_factor(a, &vt.spectral(Spectral::W1), &vt.spectral(Spectral::W2)));
    let collapse = |s1: Scalar, s2: Scalar| -> Result<Scalar, String> {
        let t = delta_evaluate(model, &generic, &[(Spectral::W1, s1), (Spectral::W2, s2)]).map_err(|e| e.to_string())?;
        Ok(t.coefficient(&crate::scalars::Mono::one()))
    };
    for k in 0..inst.m(i) {
        for l in 0..inst.m(j) {
            if i == j && k == l {
                continue;
            }
            for pi in [false, true] {
                for pj in [false, true] {
                    let idx = [k as i64, l as i64, pi as i64, pj as i64];
                    let yi = op(model, pi, i, k);
                    let yj = op(model, pj, j, l);
                    match collapse(support(model, pi, i, k), support(model, pj, j, l)) {
                        Ok(b) => {
                            let lhs = torus.mul(&yj, &yi);
                            let rhs = torus.mul(&yi, &yj).scale(&b);
                            c.torus("Y_jl Y_ik = beta Y_ik Y_jl", &idx, &lhs, &rhs);
                        }
                        Err(e) => c.fail("beta collapse", &idx, &e),
                    }
                }
            }
        }
    }
    if let Some(xpp) = model.xsecond(j) {
        for k in 0..inst.m(i) {
            for pi in [false, true] {
                let idx = [k as i64, pi as i64];
                let yi = op(model, pi, i, k);
                match collapse(support(model, pi, i, k), dp(-1)) {
                    Ok(b) => {
                        let lhs = torus.mul(&xpp, &yi);
                        let rhs = torus.mul(&yi, &xpp).scale(&b);
                        c.torus("X''_j Y_ik = beta Y_ik X''_j", &idx, &lhs, &rhs);
                    }
                    Err(e) => c.fail("beta collapse", &idx, &e),
                }
            }
        }
    }
}

fn xxprime(c: &mut Checker, i: usize) {
    let model = c.model;
    let torus = model.torus();
    let rho = model.rho();
    let cinv = model.c().inv();
    let s = sigma(model);
    for k in 0..model.instance().m(i) {
        let w = model.vars().w(i, k);
        let base = w.pow(2).mul(&qp(-2).mul(&w).sub(&cinv.div(&w)));
        let fa = rho.pow(2).mul(&qp(1)).neg().mul(&frak_w_at(model, i, k, &w)).div(&base.mul(&w.sub(&qp(-2).mul(&cinv).div(&w))));
        let w2 = qp(-2).mul(&w);
        let fb = rho
            .pow(2)
            .mul(&qp(5))
            .neg()
            .mul(&frak_w_at(model, i, k, &w2))
            .div(&base.mul(&qp(-4).mul(&w).sub(&qp(2).mul(&cinv).div(&w))));
        let (x, xp) = (model.x(i, k), model.xprime(i, k));
        c.torus("X X'", &[k as i64, 0], &torus.mul(&x, &xp), &TorusElement::scalar(s.mul(&fa)));
        c.torus("X' X", &[k as i64, 1], &torus.mul(&xp, &x), &TorusElement::scalar(s.mul(&fb)));
    }
}

/// The value of the diagonal AA coefficient `(m, n)` predicted by the
/// residue closed form; with the adopted conventions it equals `-𝔛_i`,
/// the `θ` term carrying an extra `q C^{1/2}`.
pub fn frakx_closed_form(model: &Model, i: usize, m: i64, n: i64) -> Scalar {
    let inst = model.instance();
    let mu = inst.mu(i);
    let cc = model.c();
    let kr = model.vars().kappa(i).mul(&model.rho_prime(i));
    let rho2 = model.rho().pow(2);
    let mut terms = Vec::new();
    for k in 0..inst.m(i) {
        let w = model.vars().w(i, k);
        let cw = cc.mul(&w);
        let q2w = qp(2).div(&w);
        let qcw = qp(-2).mul(&cw);
        let d13 = w.pow(-m as i32).mul(&cw.pow(n as i32)).add(&w.pow(-n as i32).mul(&cw.pow(m as i32)));
        let d24 = q2w.pow(n as i32).mul(&qcw.pow(m as i32)).add(&q2w.pow(m as i32).mul(&qcw.pow(n as i32)));
        let pre = kr.mul(&rho2).mul(&w.pow((-2 - mu) as i32)).div(&qp(-2).mul(&w).sub(&cc.inv().div(&w)));
        terms.push(pre.mul(&qp(3)).neg().mul(&d13).mul(&frak_w_at(model, i, k, &w)));
        terms.push(pre.mul(&qp(7 + 2 * mu)).mul(&d24).mul(&frak_w_at(model, i, k, &qp(-2).mul(&w))));
    }
    if inst.theta(i) == 1 {
        let one = Scalar::one();
        let c5 = int(2)
            .mul(&kr)
            .mul(&one.sub(&qp(1)))
            .div(&one.add(&qp(1)))
            .mul(&dp(mu - 2))
            .mul(&qp(1).mul(&dp(1)));
        terms.push(c5.mul(&dp(m + n)).mul(&frak_w_full_at_d(model, i)));
    }
    Scalar::sum(terms).neg()
}

fn frakx(c: &mut Checker, i: usize, window: i64) {
    let model = c.model;
    model.prepare_theta(i, Flavor::Plain, 2 * window + 2);
    for m in -window..=window {
        for n in -window..=window {
            let x = TorusElement::scalar(frakx_closed_form(model, i, m, n));
            let lhs = side_value(model, &aa_theta_lhs(model, i, m, n));
            let rhs = side_value(model, &aa_theta_rhs(model, i, m, n));
            c.torus("AA LHS = closed form", &[m, n], &lhs, &x);
            c.torus("closed form = Theta side", &[m, n], &x, &rhs);
        }
    }
}

/// `[a, b]_v = a b - v b a`.
fn br(model: &Model, a: &TorusElement, b: &TorusElement, v: &Scalar) -> TorusElement {
    model.torus().q_bracket(a, b, v)
}

fn serre_aux(c: &mut Checker, i: usize, j: usize) {
    let model = c.model;
    let torus = model.torus();
    let inst = model.instance();
    let (q, qi) = (qp(1), qp(-1));
    let e2 = q.sub(&qi).pow(2);
    let cinv = model.c().inv();
    let q3 = qp(3);
    let q21 = qp(2).add(&Scalar::one());
    for m in 0..inst.m(j) {
        let wj = model.vars().w(j, m);
        let (xj, xpj) = (model.x(j, m), model.xprime(j, m));
        for k in 0..inst.m(i) {
            let xk = model.x(i, k);
            let a1 = br(model, &xk, &br(model, &xk, &xpj, &qi), &q);
            c.torus("aux1", &[k as i64, k as i64, m as i64], &a1, &TorusElement::zero());
            for l in 0..inst.m(i) {
                if l == k {
                    continue;
                }
                let (wk, wl) = (model.vars().w(i, k), model.vars().w(i, l));
                let (xl, xpl, xpk) = (model.x(i, l), model.xprime(i, l), model.xprime(i, k));
                let gam = e2
                    .neg()
                    .mul(&wk)
                    .mul(&wl)
                    .mul(&cinv.mul(&q3.add(&q)).div(&wj).sub(&wk).sub(&wl))
                    .div(&wl.sub(&q.mul(&cinv).div(&wj)).mul(&qp(2).mul(&wl).sub(&wk)).mul(&wk.sub(&q.mul(&cinv).div(&wj))));
                let gp = q3
                    .mul(&e2)
                    .mul(&cinv)
                    .mul(&wk)
                    .div(&wl)
                    .mul(&q3.mul(&cinv).div(&wl).add(&q.mul(&wk)).sub(&q21.mul(&wj)))
                    .div(
                        &qp(4)
                            .mul(&cinv)
                            .div(&wl)
                            .sub(&wk)
                            .mul(&q3.mul(&cinv).div(&wl).sub(&wj))
                            .mul(&q.mul(&wk).sub(&wj)),
                    );
                let gpp = q
                    .mul(&e2)
                    .mul(&cinv)
                    .mul(&wl)
                    .div(&wk)
                    .mul(&q3.mul(&cinv).div(&wk).add(&q.mul(&wl)).sub(&q21.mul(&wj)))
                    .div(&wl.sub(&cinv.div(&wk)).mul(&q3.mul(&cinv).div(&wk).sub(&wj)).mul(&q.mul(&wl).sub(&wj)));
                let idx = [k as i64, l as i64, m as i64];
                let cases = [
                    ("aux2", &xk, &xl, &xpj, gam),
                    ("aux3", &xk, &xpl, &xj, gp),
                    ("aux4", &xpk, &xl, &xj, gpp),
                ];
                for (name, a, b, y, g) in cases {
                    let lhs = br(model, a, &br(model, b, y, &qi), &q);
                    let prod = torus.mul(&torus.mul(a, b), y);
                    c.torus(name, &idx, &lhs, &prod.scale(&g));
                }
            }
        }
    }
}

/// The `j`-side operators a Serre coefficient can carry, with their
/// spectral supports.
fn y_operators(model: &Model, j: usize) -> Vec<(String, TorusElement, Scalar)> {
    let mut ys = Vec::new();
    for m in 0..model.instance().m(j) {
        ys.push((format!("X_{m}"), model.x(j, m), support(model, false, j, m)));
        ys.push((format!("X'_{m}"), model.xprime(j, m), support(model, true, j, m)));
    }
    if let Some(x) = model.xsecond(j) {
        ys.push(("X''".to_string(), x, dp(-1)));
    }
    ys
}

/// `F(a, b, c) = a b c - [2] a c b + c a b`.
fn f_op(model: &Model, a: &TorusElement, b: &TorusElement, c: &TorusElement) -> TorusElement {
    let t = model.torus();
    let br2 = qp(1).add(&qp(-1));
    let mut acc = crate::qtorus::TorusSum::new();
    t.mul_into(&mut acc, &Scalar::one(), &[a, b, c]);
    t.mul_into(&mut acc, &br2.neg(), &[a, c, b]);
    t.mul_into(&mut acc, &Scalar::one(), &[c, a, b]);
    acc.finish()
}

fn f_ident(c: &mut Checker, i: usize, j: usize) {
    let model = c.model;
    let inst = model.instance();
    let rho = model.rho();
    let cinv = model.c().inv();
    let s = sigma(model);
    let (mu, lam) = (inst.mu(i), inst.lambda(i));
    for (yi, (name, y, z)) in y_operators(model, j).into_iter().enumerate() {
        let zc = cinv.div(&z);
        for k in 0..inst.m(i) {
            let w = model.vars().w(i, k);
            let om = w.mul(&qp(-2).mul(&w).sub(&cinv.div(&w))).inv();
            let f1 = rho
                .mul(&om)
                .mul(&frak_w_at(model, i, k, &w))
                .div(&qp(-1).mul(&w).sub(&qp(-2).mul(&z)).mul(&qp(-1).mul(&w).sub(&zc)));
            let f2 = rho
                .mul(&qp(2))
                .neg()
                .mul(&om)
                .mul(&frak_w_at(model, i, k, &qp(-2).mul(&w)))
                .div(&qp(-3).mul(&w).sub(&qp(-2).mul(&z)).mul(&qp(-3).mul(&w).sub(&zc)));
            let (x, xp) = (model.x(i, k), model.xprime(i, k));
            let idx = [yi as i64, k as i64];
            c.torus(&format!("F(X, X', {name})"), &idx, &f_op(model, &x, &xp, &y), &y.scale(&s.mul(&f1)));
            c.torus(&format!("F(X', X, {name})"), &idx, &f_op(model, &xp, &x, &y), &y.scale(&s.mul(&f2)));
        }
        if let Some(xpp) = model.xsecond(i) {
            let qd = qp(1).mul(&dp(-1));
            let f3 = sgn(mu)
                .mul(&dp(mu - 1))
                .mul(&qp(3 * (mu - lam)))
                .mul(&qp(2).sub(&Scalar::one()).pow(2))
                .mul(&z)
                .div(&qp(1))
                .mul(&frak_w_full_at_d(model, i))
                .div(&z.sub(&qd).pow(2));
            c.torus(&format!("F(X'', X'', {name})"), &[yi as i64, -1], &f_op(model, &xpp, &xpp, &y), &y.scale(&f3));
        }
    }
}

/// `G(a, Y) = [2] z w2 C [a, Y]_{q^-2} + (1 + C w2^2) [Y, a]_{q^-2}`.
fn g_op(model: &Model, a: &Scalar, y: &TorusElement, z: &Scalar, w2: &Scalar) -> TorusElement {
    let cc = model.c();
    let qm2 = qp(-2);
    let at = TorusElement::scalar(a.clone());
    let c1 = qp(1).add(&qp(-1)).mul(z).mul(w2).mul(&cc);
    let c2 = Scalar::one().add(&cc.mul(&w2.pow(2)));
    br(model, &at, y, &qm2).scale(&c1).add(&br(model, y, &at, &qm2).scale(&c2))
}

fn g_ident(c: &mut Checker, i: usize, j: usize) {
    let model = c.model;
    let inst = model.instance();
    let cc = model.c();
    let cinv = cc.inv();
    let rho = model.rho();
    let mu = inst.mu(i);
    let kr = model.vars().kappa(i).mul(&model.rho_prime(i));
    let one = Scalar::one();
    for (yi, (name, y, z)) in y_operators(model, j).into_iter().enumerate() {
        let zc = cinv.div(&z);
        for k in 0..inst.m(i) {
            let w = model.vars().w(i, k);
            let cases = [
                ("A1", cinv.div(&w), false),
                ("A2", qp(2).mul(&cinv).div(&w), true),
                ("A3", w.clone(), false),
                ("A4", qp(-2).mul(&w), true),
            ];
            for (n, (lab, w2, shifted)) in cases.into_iter().enumerate() {
                let arg = if shifted { qp(-2).mul(&w) } else { w.clone() };
                let a = frak_w_at(model, i, k, &arg);
                let cw2 = cc.mul(&w2.pow(2));
                let pre = w2
                    .mul(&cc)
                    .mul(&kr)
                    .mul(&rho.pow(2))
                    .mul(&w.pow((-2 - mu) as i32))
                    .mul(&if shifted { qp(7 + 2 * mu) } else { qp(3) })
                    .div(&one.sub(&qp(2).mul(&cw2)).mul(&one.sub(&qp(-2).mul(&cw2))));
                let rhs = if shifted {
                    kr.mul(&rho)
                        .mul(&w.pow((-1 - mu) as i32))
                        .mul(&qp(2 + 2 * mu))
                        .mul(&a)
                        .div(&qp(-3).mul(&w).sub(&qp(-2).mul(&z)).mul(&qp(-3).mul(&w).sub(&zc)))
                } else {
                    kr.mul(&rho)
                        .mul(&w.pow((-1 - mu) as i32))
                        .mul(&a)
                        .div(&qp(-1).mul(&w).sub(&qp(-2).mul(&z)).mul(&qp(-1).mul(&w).sub(&zc)))
                };
                let lhs = g_op(model, &a, &y, &z, &w2).scale(&pre);
                c.torus(&format!("G-{lab}({name})"), &[yi as i64, k as i64, n as i64], &lhs, &y.scale(&rhs));
            }
        }
        if inst.theta(i) == 1 {
            let a = frak_w_full_at_d(model, i);
            let di = dp(-1);
            let pre = int(2)
                .mul(&kr)
                .mul(&one.sub(&qp(1)))
                .mul(&dp(mu - 1))
                .div(&one.add(&qp(1)).mul(&qp(1).sub(&qp(-1)).pow(2)));
            let rhs = int(-2)
                .div(&qp(1))
                .mul(&dp(mu - 2))
                .mul(&one.sub(&qp(1)).pow(2))
                .mul(&kr)
                .mul(&z)
                .div(&z.sub(&qp(1).mul(&di)).pow(2))
                .mul(&a);
            let lhs = g_op(model, &a, &y, &z, &di).scale(&pre);
            c.torus(&format!("G-A5({name})"), &[yi as i64, -1, 4], &lhs, &y.scale(&rhs));
        }
    }
}

/// Mode `r` of `Y(z)` supported at `s`: `s^{-r} Y`.
fn mode(model: &Model, primed: bool, v: usize, k: usize, r: i64) -> TorusElement {
    op(model, primed, v, k).scale(&support(model, primed, v, k).pow(-r as i32))
}

type Spec = [(bool, usize, usize); 3];

fn vanishing(c: &mut Checker, i: usize, j: usize, window: i64) {
    let model = c.model;
    let inst = model.instance();
    let (q, qi) = (qp(1), qp(-1));
    let sym = if model.tamper().sym_average { Scalar::from_ratio(1, 2) } else { Scalar::one() };
    let mi = inst.m(i);
    for m in 0..inst.m(j) {
        for star in [false, true] {
            let (x, xp) = (star, !star);
            let mut fams: Vec<(String, Vec<Spec>)> = Vec::new();
            for k in 0..mi {
                fams.push((format!("M[{k},{m}]"), vec![[(x, i, k), (x, i, k), (x, j, m)]]));
                fams.push((format!("P[{k},{m}]"), vec![[(x, i, k), (x, i, k), (xp, j, m)]]));
                for l in 0..mi {
                    if l == k {
                        continue;
                    }
                    fams.push((format!("N[{k},{l},{m}]"), vec![[(x, i, k), (x, i, l), (x, j, m)], [(x, i, l), (x, i, k), (x, j, m)]]));
                    fams.push((format!("R[{k},{l},{m}]"), vec![[(x, i, k), (x, i, l), (xp, j, m)], [(x, i, l), (x, i, k), (xp, j, m)]]));
                    fams.push((format!("ST[{k},{l},{m}]"), vec![[(x, i, k), (xp, i, l), (x, j, m)], [(xp, i, l), (x, i, k), (x, j, m)]]));
                }
            }
            for (name, specs) in fams {
                let label = if star { format!("{name}*") } else { name };
                for a in -window..=window {
                    for b in -window..=window {
                        for cc in -window..=window {
                            let mut acc = crate::qtorus::TorusSum::new();
                            for sp in &specs {
                                let [(p1, v1, i1), (p2, v2, i2), (p3, v3, i3)] = *sp;
                                let third = mode(model, p3, v3, i3, cc);
                                for (x1, x2) in [(a, b), (b, a)] {
                                    let inner = br(model, &mode(model, p2, v2, i2, x2), &third, &qi);
                                    let outer = br(model, &mode(model, p1, v1, i1, x1), &inner, &q);
                                    acc.add(sym.clone(), &outer);
                                }
                            }
                            c.torus(&label, &[a, b, cc], &acc.finish(), &TorusElement::zero());
                        }
                    }
                }
            }
        }
    }
}
