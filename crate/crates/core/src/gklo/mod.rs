//! The GKLO images: root polynomials, the Γ and 𝔚 factors, the operators
//! `X`, `X'`, `X''`, the normalizing constants, the rational function
//! `ϑ_i(z)` with its mode expansion, and the modes of `A_i`.
//!
//! Conventions that differ from a literal reading of the displays:
//! `X'` carries an extra sign, `ρ'_i` includes `(-q)^{-θ_i}` so that the
//! leading Θ-mode is 1, and `τ_i^2` is rescaled to match. The z-products in
//! `η_i, η'_i` run over `l ≤ λ_i`.

mod spectral;

use std::sync::Arc;

use parking_lot::RwLock;
use rustc_hash::FxHashMap;

use crate::cartan::Instance;
use crate::qtorus::{Torus, TorusElement, UExp};
use crate::scalars::{Mono, Scalar, VariableTable, D, Q};

pub use spectral::SpectralRational;

/// Deliberate perturbations for negative controls. The default is the
/// honest construction.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Tamper {
    /// Replaces `ρ'_i` inside `ϑ_i` by this integer.
    pub rho_prime: Option<i64>,
    /// Drops the Γ factor from `ϑ_i` and `𝔚_{i,k}`.
    pub drop_gamma: bool,
    /// Symmetrizes by averaging instead of summing.
    pub sym_average: bool,
    /// Uses the sign of `X'` exactly as displayed.
    pub printed_xprime_sign: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TamperError {
    #[error("unknown tamper '{0}' (known: rhoPrime, gamma, sym, xprimeSign)")]
    Unknown(String),
    #[error("bad value '{1}' for tamper '{0}'")]
    BadValue(String, String),
}

impl Tamper {
    pub const NAMES: [&'static str; 4] = ["rhoPrime", "gamma", "sym", "xprimeSign"];

    /// Applies one `name=value` setting: `rhoPrime=<int>`, `gamma=0`,
    /// `sym=avg`, `xprimeSign=1`.
    pub fn set(&mut self, name: &str, value: &str) -> Result<(), TamperError> {
        let bad = || TamperError::BadValue(name.to_string(), value.to_string());
        match name {
            "rhoPrime" => self.rho_prime = Some(value.parse().map_err(|_| bad())?),
            "gamma" => match value {
                "0" => self.drop_gamma = true,
                "1" => self.drop_gamma = false,
                _ => return Err(bad()),
            },
            "sym" => match value {
                "avg" => self.sym_average = true,
                "sum" => self.sym_average = false,
                _ => return Err(bad()),
            },
            "xprimeSign" => match value {
                "1" => self.printed_xprime_sign = true,
                "-1" => self.printed_xprime_sign = false,
                _ => return Err(bad()),
            },
            _ => return Err(TamperError::Unknown(name.to_string())),
        }
        Ok(())
    }

    pub fn is_active(&self) -> bool {
        *self != Tamper::default()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Flavor {
    /// Expansion of `ϑ_i(z)` itself.
    Acute,
    /// Acute times `(1 - C z^2)/(1 - q^{-2} C z^2)`.
    Plain,
}

impl Flavor {
    pub fn name(self) -> &'static str {
        match self {
            Flavor::Acute => "acute",
            Flavor::Plain => "plain",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootPoly {
    Wminus,
    Wplus,
    Zminus,
    Zplus,
    W,
    Z,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OpKind {
    X,
    Xprime,
    Xsecond,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BuildError {
    #[error("index {k} out of range for vertex '{vertex}' (m = {m})")]
    IndexOutOfRange { vertex: String, k: usize, m: usize },
    #[error("X'' requires theta = 1 at vertex '{0}'")]
    NoXsecond(String),
    #[error("operator kind needs an index")]
    MissingIndex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstKind {
    Rho,
    RhoPrime,
    TauSq,
    Eta,
    EtaPrime,
}

type SeriesKey = (usize, Flavor);

/// Everything built from one instance: symbols, torus context, operator
/// coefficients and mode caches. Shareable across threads.
pub struct Model {
    inst: Instance,
    vt: VariableTable,
    torus: Torus,
    tamper: Tamper,
    x: Vec<Vec<Scalar>>,
    xp: Vec<Vec<Scalar>>,
    xpp: Vec<Option<Scalar>>,
    series: RwLock<FxHashMap<SeriesKey, Arc<Vec<Scalar>>>>,
    amodes: RwLock<FxHashMap<(usize, i64), Arc<TorusElement>>>,
}

fn q() -> Scalar {
    Scalar::var(Q, 1)
}

fn qp(e: i32) -> Scalar {
    Scalar::var(Q, e)
}

fn dp(e: i32) -> Scalar {
    Scalar::var(D, e)
}

/// `ρ = 1/(q - q^{-1})`.
pub fn rho() -> Scalar {
    q().sub(&qp(-1)).inv()
}

fn sign(e: i64) -> Scalar {
    Scalar::from_int(if e.rem_euclid(2) == 0 { 1 } else { -1 })
}

fn rho_prime_of(inst: &Instance, i: usize) -> Scalar {
    let (mu, lam, th) = (inst.mu(i), inst.lambda(i), inst.theta(i));
    let mut r = dp((2 * mu) as i32).mul(&qp((-2 * (lam - mu)) as i32));
    if th == 1 {
        r = r.div(&q().neg());
    }
    r
}

fn tau_sq_of(inst: &Instance, vt: &VariableTable, i: usize) -> Scalar {
    let (mu, lam) = (inst.mu(i), inst.lambda(i));
    let one_plus_q = Scalar::one().add(&q());
    sign(mu)
        .mul(&vt.kappa(i))
        .mul(&rho_prime_of(inst, i))
        .mul(&qp((3 * (lam - mu) + 1) as i32))
        .div(&one_plus_q.pow(2))
}

impl Model {
    pub fn new(inst: Instance) -> Model {
        Model::with_tamper(inst, Tamper::default())
    }

    pub fn with_tamper(inst: Instance, tamper: Tamper) -> Model {
        let vt = VariableTable::new(&inst, |vt, i| tau_sq_of(&inst, vt, i));
        let torus = Torus::new(&inst, &vt);
        let mut m = Model {
            inst,
            vt,
            torus,
            tamper,
            x: Vec::new(),
            xp: Vec::new(),
            xpp: Vec::new(),
            series: RwLock::new(FxHashMap::default()),
            amodes: RwLock::new(FxHashMap::default()),
        };
        let n = m.inst.len();
        m.x = (0..n).map(|i| (0..m.inst.m(i)).map(|k| m.build_x(i, k)).collect()).collect();
        m.xp = (0..n).map(|i| (0..m.inst.m(i)).map(|k| m.build_xp(i, k)).collect()).collect();
        m.xpp = (0..n).map(|i| (m.inst.theta(i) == 1).then(|| m.build_xpp(i))).collect();
        m
    }

    pub fn instance(&self) -> &Instance {
        &self.inst
    }

    pub fn vars(&self) -> &VariableTable {
        &self.vt
    }

    pub fn torus(&self) -> &Torus {
        &self.torus
    }

    pub fn tamper(&self) -> &Tamper {
        &self.tamper
    }

    pub fn c(&self) -> Scalar {
        dp(2)
    }

    pub fn rho(&self) -> Scalar {
        rho()
    }

    /// Adopted `ρ'_i = (-q)^{-θ_i} C^{μ_i} q^{-2(λ_i - μ_i)}`.
    pub fn rho_prime(&self, i: usize) -> Scalar {
        rho_prime_of(&self.inst, i)
    }

    /// Value of `t_i^2`: `(-1)^{μ_i} κ_i ρ'_i q^{3(λ_i-μ_i)+1}/(1+q)^2`.
    pub fn tau_sq(&self, i: usize) -> Scalar {
        tau_sq_of(&self.inst, &self.vt, i)
    }

    /// Prefactor of the `X''` form built from `Z^-` (l ≤ λ_i product).
    pub fn eta(&self, i: usize) -> Scalar {
        let inst = &self.inst;
        let mi = inst.m(i) as i64;
        let nb = inst.neighbors(i);
        let sm: i64 = nb.iter().map(|&j| inst.m(j) as i64).sum();
        let mut e = sign(inst.mu(i) - mi).mul(&qp((-2 * mi + 2 * sm) as i32)).mul(&dp(-mi as i32));
        for &j in &nb {
            for l in 0..inst.m(j) {
                e = e.div(&self.vt.v(j, l));
            }
        }
        for l in 0..inst.lambda(i) as usize {
            e = e.div(&self.vt.z_half(i, l));
        }
        e
    }

    /// Prefactor of the `X''` form built from `Z^+`.
    pub fn eta_prime(&self, i: usize) -> Scalar {
        let inst = &self.inst;
        let mi = inst.m(i) as i64;
        let nb = inst.neighbors(i);
        let sm: i64 = nb.iter().map(|&j| inst.m(j) as i64).sum();
        let mut e = sign(mi).mul(&qp((-4 * mi + sm) as i32)).mul(&dp((inst.lambda(i) - mi + sm) as i32));
        for &j in &nb {
            for l in 0..inst.m(j) {
                e = e.mul(&self.vt.v(j, l));
            }
        }
        for l in 0..inst.lambda(i) as usize {
            e = e.mul(&self.vt.z_half(i, l));
        }
        e
    }

    pub fn constant(&self, kind: ConstKind, i: usize) -> Scalar {
        match kind {
            ConstKind::Rho => rho(),
            ConstKind::RhoPrime => self.rho_prime(i),
            ConstKind::TauSq => self.tau_sq(i),
            ConstKind::Eta => self.eta(i),
            ConstKind::EtaPrime => self.eta_prime(i),
        }
    }

    fn check_k(&self, i: usize, k: usize) -> Result<(), BuildError> {
        if k >= self.inst.m(i) {
            return Err(BuildError::IndexOutOfRange { vertex: self.inst.id(i).to_string(), k, m: self.inst.m(i) });
        }
        Ok(())
    }

    /// `W_j^-(z) = prod_{l ≠ skip} (z - q^{-2} w_{j,l})`.
    pub fn w_minus(&self, j: usize, skip: Option<usize>) -> SpectralRational {
        SpectralRational::from_roots(
            (0..self.inst.m(j)).filter(|&l| Some(l) != skip).map(|l| qp(-2).mul(&self.vt.w(j, l))),
        )
    }

    /// `W_j^+(z) = prod_{l ≠ skip} (z - C^{-1} w_{j,l}^{-1})`.
    pub fn w_plus(&self, j: usize, skip: Option<usize>) -> SpectralRational {
        SpectralRational::from_roots(
            (0..self.inst.m(j)).filter(|&l| Some(l) != skip).map(|l| dp(-2).div(&self.vt.w(j, l))),
        )
    }

    pub fn w_full(&self, j: usize, skip: Option<usize>) -> SpectralRational {
        self.w_minus(j, skip).mul(&self.w_plus(j, skip))
    }

    pub fn z_minus(&self, i: usize) -> SpectralRational {
        SpectralRational::from_roots((0..self.inst.lambda(i) as usize).map(|l| self.vt.z(i, l)))
    }

    pub fn z_plus(&self, i: usize) -> SpectralRational {
        SpectralRational::from_roots((0..self.inst.lambda(i) as usize).map(|l| dp(-2).div(&self.vt.z(i, l))))
    }

    pub fn z_full(&self, i: usize) -> SpectralRational {
        self.z_minus(i).mul(&self.z_plus(i))
    }

    /// The displayed root polynomials; `k` selects the k-omitting (hatted)
    /// variant of the W kinds.
    pub fn root_poly(&self, kind: RootPoly, i: usize, k: Option<usize>) -> Result<SpectralRational, BuildError> {
        if let Some(k) = k {
            self.check_k(i, k)?;
        }
        Ok(match kind {
            RootPoly::Wminus => self.w_minus(i, k),
            RootPoly::Wplus => self.w_plus(i, k),
            RootPoly::W => self.w_full(i, k),
            RootPoly::Zminus => self.z_minus(i),
            RootPoly::Zplus => self.z_plus(i),
            RootPoly::Z => self.z_full(i),
        })
    }

    /// `Γ(z) = (-q (z - qC^{-1/2})(z - q^{-1}C^{-1/2})/(z - C^{-1/2})^2)^{θ_i}`.
    pub fn gamma(&self, i: usize) -> SpectralRational {
        if self.inst.theta(i) == 0 || self.tamper.drop_gamma {
            return SpectralRational::one();
        }
        self.gamma_untampered()
    }

    fn gamma_untampered(&self) -> SpectralRational {
        let num = SpectralRational::from_roots([q().mul(&dp(-1)), qp(-1).mul(&dp(-1))]);
        let den = SpectralRational::from_roots([dp(-1), dp(-1)]);
        num.div(&den).scale(&q().neg())
    }

    /// `prod_{j ~ i} W_j(q^{-1} z)`.
    fn neighbour_w(&self, i: usize) -> SpectralRational {
        let mut r = SpectralRational::one();
        for j in self.inst.neighbors(i) {
            r = r.mul(&self.w_full(j, None).scale_arg(&qp(-1)));
        }
        r
    }

    /// `𝔚_{i,k}(z)` for `Some(k)`; the full `𝔚_i(z)` (no Γ) for `None`.
    pub fn frak_w(&self, i: usize, k: Option<usize>) -> SpectralRational {
        let base = self.z_full(i).mul(&self.neighbour_w(i));
        let wi = self.w_full(i, k);
        let den = wi.mul(&wi.scale_arg(&qp(-2)));
        let r = base.div(&den);
        match k {
            Some(_) => self.gamma(i).mul(&r),
            None => r,
        }
    }

    pub fn frak_w_checked(&self, i: usize, k: Option<usize>) -> Result<SpectralRational, BuildError> {
        if let Some(k) = k {
            self.check_k(i, k)?;
        }
        Ok(self.frak_w(i, k))
    }

    /// `ϑ_i(z) = ρ'_i Γ(z) Z_i(z) prod_{j~i} W_j(q^{-1}z) / (z^{μ_i} W_i(z) W_i(q^{-2}z))`.
    pub fn theta_rational(&self, i: usize) -> SpectralRational {
        let rp = match self.tamper.rho_prime {
            Some(v) => Scalar::from_int(v),
            None => self.rho_prime(i),
        };
        let wi = self.w_full(i, None);
        let den = wi.mul(&wi.scale_arg(&qp(-2))).mul(&SpectralRational::z_pow(self.inst.mu(i) as i32));
        self.gamma(i).mul(&self.z_full(i)).mul(&self.neighbour_w(i)).div(&den).scale(&rp)
    }

    /// `(1 - C z^2)/(1 - q^{-2} C z^2)`.
    pub fn plain_factor() -> SpectralRational {
        let num = SpectralRational::from_roots([dp(-1), dp(-1).neg()]);
        let den = SpectralRational::from_roots([q().mul(&dp(-1)), q().mul(&dp(-1)).neg()]);
        num.div(&den).scale(&qp(2))
    }

    pub fn theta_function(&self, i: usize, flavor: Flavor) -> SpectralRational {
        match flavor {
            Flavor::Acute => self.theta_rational(i),
            Flavor::Plain => self.theta_rational(i).mul(&Model::plain_factor()),
        }
    }

    fn series_upto(&self, i: usize, flavor: Flavor, need: usize) -> Arc<Vec<Scalar>> {
        let key = (i, flavor);
        if let Some(s) = self.series.read().get(&key) {
            if s.len() >= need {
                return s.clone();
            }
        }
        let n = need.max(8).next_power_of_two();
        let f = self.theta_function(i, flavor);
        assert_eq!(f.z_power(), -(self.inst.mu(i) as i32));
        let c = f.prefactor().clone();
        let coeffs: Vec<Scalar> =
            f.series(n).iter().map(|p| if p.is_zero() { Scalar::zero() } else { c.mul(&Scalar::from_poly(p)) }).collect();
        let arc = Arc::new(coeffs);
        let mut w = self.series.write();
        let e = w.entry(key).or_insert_with(|| arc.clone());
        if e.len() < arc.len() {
            *e = arc.clone();
        }
        e.clone()
    }

    /// Precomputes Θ-modes up to `r_max` so parallel workers only read.
    pub fn prepare_theta(&self, i: usize, flavor: Flavor, r_max: i64) {
        let need = r_max + self.inst.mu(i) + 1;
        if need > 0 {
            self.series_upto(i, flavor, need as usize);
        }
    }

    /// Coefficient of `z^r` in the expansion at `z = 0`; zero below `-μ_i`.
    pub fn theta_mode(&self, i: usize, r: i64, flavor: Flavor) -> Scalar {
        let idx = r + self.inst.mu(i);
        if idx < 0 {
            return Scalar::zero();
        }
        let s = self.series_upto(i, flavor, idx as usize + 1);
        s[idx as usize].clone()
    }

    pub fn theta_modes(&self, i: usize, lo: i64, hi: i64, flavor: Flavor) -> Vec<(i64, Scalar)> {
        (lo..=hi).map(|r| (r, self.theta_mode(i, r, flavor))).collect()
    }

    /// Θ-mode as a multiplication operator.
    pub fn theta_op(&self, i: usize, r: i64, flavor: Flavor) -> TorusElement {
        TorusElement::scalar(self.theta_mode(i, r, flavor))
    }

    fn eval(&self, f: &SpectralRational, s: &Scalar) -> Scalar {
        f.eval(s).expect("generic point")
    }

    fn build_x(&self, i: usize, k: usize) -> Scalar {
        let inst = &self.inst;
        let vt = &self.vt;
        let w = vt.w(i, k);
        let mut r = q().mul(&rho()).div(&w);
        for l in 0..inst.m(i) {
            r = r.div(&vt.v(i, l));
        }
        for j in 0..inst.len() {
            if inst.arrow(j, i) {
                for l in 0..inst.m(j) {
                    r = r.mul(&vt.v(j, l));
                }
            }
        }
        if inst.theta(i) == 1 {
            r = r.mul(&w.sub(&q().mul(&dp(-1)))).div(&w.sub(&dp(-1)));
        }
        r = r.mul(&self.eval(&self.z_full(i), &w));
        let wq = qp(-1).mul(&w);
        for j in 0..inst.len() {
            if inst.arrow(i, j) {
                r = r.mul(&self.eval(&self.w_full(j, None), &wq));
            }
            if inst.arrow(j, i) {
                r = r.mul(&self.eval(&self.w_plus(j, None), &wq));
            }
        }
        let w2 = qp(-2).mul(&w);
        let den = w2.sub(&dp(-2).div(&w)).mul(&self.eval(&self.w_full(i, Some(k)), &w2));
        r.div(&den)
    }

    fn build_xp(&self, i: usize, k: usize) -> Scalar {
        let inst = &self.inst;
        let vt = &self.vt;
        let w = vt.w(i, k);
        // displayed sign is -qρ; the adopted convention flips it
        let mut r = q().mul(&rho()).div(&w);
        if self.tamper.printed_xprime_sign {
            r = r.neg();
        }
        for l in 0..inst.m(i) {
            r = r.mul(&vt.v(i, l));
        }
        for j in 0..inst.len() {
            if inst.arrow(j, i) {
                for l in 0..inst.m(j) {
                    r = r.div(&vt.v(j, l));
                }
            }
        }
        if inst.theta(i) == 1 {
            r = r.mul(&dp(-1).sub(&qp(-1).mul(&w))).div(&qp(-2).mul(&w).sub(&dp(-1)));
        }
        let wq3 = qp(-3).mul(&w);
        for j in 0..inst.len() {
            if inst.arrow(j, i) {
                r = r.mul(&self.eval(&self.w_minus(j, None), &wq3));
            }
        }
        let w2 = qp(-2).mul(&w);
        let den = w2.sub(&dp(-2).div(&w)).mul(&self.eval(&self.w_full(i, Some(k)), &w2));
        r.div(&den)
    }

    fn build_xpp(&self, i: usize) -> Scalar {
        let inst = &self.inst;
        let vt = &self.vt;
        let mut r = Scalar::one();
        for l in 0..inst.lambda(i) as usize {
            let y = vt.z_half(i, l);
            r = r.mul(&y.sub(&dp(-1).div(&y)));
        }
        for j in inst.neighbors(i) {
            for l in 0..inst.m(j) {
                let v = vt.v(j, l);
                r = r.mul(&v.sub(&q().mul(&dp(-1)).div(&v)));
            }
        }
        for l in 0..inst.m(i) {
            let v = vt.v(i, l);
            let a = v.sub(&dp(-1).div(&v));
            let b = v.sub(&qp(2).mul(&dp(-1)).div(&v));
            r = r.div(&a.mul(&b));
        }
        r
    }

    /// Coefficient of `u_{i,k}` in `X_{i,k}`.
    pub fn x_coef(&self, i: usize, k: usize) -> &Scalar {
        &self.x[i][k]
    }

    /// Coefficient of `u_{i,k}^{-1}` in `X'_{i,k}`.
    pub fn xp_coef(&self, i: usize, k: usize) -> &Scalar {
        &self.xp[i][k]
    }

    pub fn xpp_coef(&self, i: usize) -> Option<&Scalar> {
        self.xpp[i].as_ref()
    }

    pub fn x(&self, i: usize, k: usize) -> TorusElement {
        TorusElement::monomial(self.x[i][k].clone(), self.torus.u(i, k, 1))
    }

    pub fn xprime(&self, i: usize, k: usize) -> TorusElement {
        TorusElement::monomial(self.xp[i][k].clone(), self.torus.u(i, k, -1))
    }

    pub fn xsecond(&self, i: usize) -> Option<TorusElement> {
        self.xpp[i].as_ref().map(|c| TorusElement::scalar(c.clone()))
    }

    pub fn operator(&self, kind: OpKind, i: usize, k: Option<usize>) -> Result<TorusElement, BuildError> {
        match kind {
            OpKind::X | OpKind::Xprime => {
                let k = k.ok_or(BuildError::MissingIndex)?;
                self.check_k(i, k)?;
                Ok(if kind == OpKind::X { self.x(i, k) } else { self.xprime(i, k) })
            }
            OpKind::Xsecond => self.xsecond(i).ok_or_else(|| BuildError::NoXsecond(self.inst.id(i).to_string())),
        }
    }

    /// `Â_{i,r} = κ_iρ'_i Σ_k w_k^{-r-μ_i} X_k + Σ_k (q^{-2}C w_k)^r X'_k + θ_i t_i D^r X''_i`.
    pub fn a_mode(&self, i: usize, r: i64) -> Arc<TorusElement> {
        if let Some(a) = self.amodes.read().get(&(i, r)) {
            return a.clone();
        }
        let a = Arc::new(self.build_a_mode(i, r));
        self.amodes.write().entry((i, r)).or_insert(a).clone()
    }

    fn build_a_mode(&self, i: usize, r: i64) -> TorusElement {
        let inst = &self.inst;
        let vt = &self.vt;
        let kr = vt.kappa(i).mul(&self.rho_prime(i));
        let mu = inst.mu(i);
        let mut terms: Vec<(Scalar, UExp)> = Vec::new();
        for k in 0..inst.m(i) {
            let slot = vt.v_slot(i, k);
            let wpow = Scalar::from_mono(Mono::var(slot, (2 * (-r - mu)) as i32));
            terms.push((kr.mul(&wpow).mul(&self.x[i][k]), self.torus.u(i, k, 1)));
            let mut m = Mono::var(slot, 2 * r as i32);
            m.add_at(Q, -2 * r as i32);
            m.add_at(D, 2 * r as i32);
            terms.push((Scalar::from_mono(m).mul(&self.xp[i][k]), self.torus.u(i, k, -1)));
        }
        if let Some(c) = &self.xpp[i] {
            terms.push((vt.t(i).mul(&dp(r as i32)).mul(c), UExp::one()));
        }
        let mut acc = crate::qtorus::TorusSum::new();
        for (c, e) in terms {
            acc.push(c, e);
        }
        acc.finish()
    }
}
