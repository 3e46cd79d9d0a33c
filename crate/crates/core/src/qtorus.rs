//! Difference operators in normal form: `sum_e c_e u^e` with coefficients to
//! the left of the shift monomials, plus the polynomial-module action used
//! as an independent oracle.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rustc_hash::FxHashMap;

use crate::cartan::Instance;
use crate::scalars::{Int, Mono, Poly, Scalar, VariableTable, Q};

/// Exponent vector of `u`, indexed by pair number (vertex-major, then k).
/// Lexicographic order matches the `(vertex, k)` ordering of the normal form.
pub type UExp = Mono;

#[derive(Clone, Debug, Default)]
pub struct TorusElement {
    terms: BTreeMap<UExp, Scalar>,
}

impl TorusElement {
    pub fn zero() -> TorusElement {
        TorusElement::default()
    }

    pub fn scalar(c: Scalar) -> TorusElement {
        TorusElement::monomial(c, UExp::one())
    }

    pub fn monomial(c: Scalar, e: UExp) -> TorusElement {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        TorusElement { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&UExp, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, e: &UExp) -> Scalar {
        self.terms.get(e).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn support(&self) -> Vec<UExp> {
        self.terms.keys().cloned().collect()
    }

    pub fn scale(&self, s: &Scalar) -> TorusElement {
        if s.is_zero() {
            return TorusElement::zero();
        }
        TorusElement { terms: self.terms.iter().map(|(e, c)| (e.clone(), s.mul(c))).collect() }
    }

    pub fn neg(&self) -> TorusElement {
        TorusElement { terms: self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect() }
    }

    pub fn add(&self, o: &TorusElement) -> TorusElement {
        let mut acc = TorusSum::new();
        acc.add(Scalar::one(), self);
        acc.add(Scalar::one(), o);
        acc.finish()
    }

    pub fn sub(&self, o: &TorusElement) -> TorusElement {
        let mut acc = TorusSum::new();
        acc.add(Scalar::one(), self);
        acc.add(Scalar::from_int(-1), o);
        acc.finish()
    }

    pub fn equals(&self, o: &TorusElement) -> bool {
        self.sub(o).is_zero()
    }

    /// Applies `f` to every coefficient, dropping zeros.
    pub fn map_coefficients(&self, mut f: impl FnMut(&Scalar) -> Scalar) -> TorusElement {
        TorusElement {
            terms: self
                .terms
                .iter()
                .filter_map(|(e, c)| {
                    let v = f(c);
                    (!v.is_zero()).then(|| (e.clone(), v))
                })
                .collect(),
        }
    }

    pub fn t_reduce(&self) -> TorusElement {
        self.map_coefficients(Scalar::t_reduce)
    }
}

/// Collects terms per u-monomial and sums each bucket once at the end, so a
/// long linear combination costs one common-denominator pass per monomial.
#[derive(Default)]
pub struct TorusSum {
    parts: BTreeMap<UExp, Vec<Scalar>>,
}

impl TorusSum {
    pub fn new() -> TorusSum {
        TorusSum::default()
    }

    pub fn push(&mut self, c: Scalar, e: UExp) {
        if !c.is_zero() {
            self.parts.entry(e).or_default().push(c);
        }
    }

    pub fn add(&mut self, s: Scalar, a: &TorusElement) {
        if s.is_zero() {
            return;
        }
        for (e, c) in &a.terms {
            self.push(s.mul(c), e.clone());
        }
    }

    pub fn extend(&mut self, o: TorusSum) {
        for (e, v) in o.parts {
            self.parts.entry(e).or_default().extend(v);
        }
    }

    pub fn term_count(&self) -> usize {
        self.parts.values().map(Vec::len).sum()
    }

    pub fn finish(self) -> TorusElement {
        let mut terms = BTreeMap::new();
        for (e, v) in self.parts {
            let c = Scalar::sum(v);
            if !c.is_zero() {
                terms.insert(e, c);
            }
        }
        TorusElement { terms }
    }
}

/// Normal-ordering context: which v-symbol each u-generator shifts.
#[derive(Debug, Clone)]
pub struct Torus {
    slots: Vec<usize>,
    offsets: Vec<usize>,
    /// `(t slot, num, den)` with `t^2 = num / den`, both free of `t`.
    t_rules: Vec<(usize, Poly, Poly)>,
}

impl Torus {
    pub fn new(inst: &Instance, vt: &VariableTable) -> Torus {
        let mut slots = Vec::new();
        let mut offsets = Vec::new();
        for i in 0..inst.len() {
            offsets.push(slots.len());
            for k in 0..inst.m(i) {
                slots.push(vt.v_slot(i, k));
            }
        }
        let t_rules = vt
            .rules()
            .map(|r| {
                r.rules
                    .iter()
                    .map(|(slot, tau)| {
                        let (n, d) = tau.to_num_den();
                        (*slot, n, d)
                    })
                    .collect()
            })
            .unwrap_or_default();
        Torus { slots, offsets, t_rules }
    }

    pub fn pairs(&self) -> usize {
        self.slots.len()
    }

    pub fn pair(&self, i: usize, k: usize) -> usize {
        self.offsets[i] + k
    }

    pub fn v_slot(&self, pair: usize) -> usize {
        self.slots[pair]
    }

    /// `u_{i,k}^e` as a u-exponent.
    pub fn u(&self, i: usize, k: usize, e: i32) -> UExp {
        Mono::var(self.pair(i, k), e)
    }

    /// `u^e c u^{-e}`: every `v_p` becomes `q^{e_p} v_p`.
    pub fn shift(&self, c: &Scalar, e: &UExp) -> Scalar {
        let mut out = c.clone();
        for (p, &ex) in e.exps().iter().enumerate() {
            if ex != 0 {
                out = out.u_shift(self.slots[p], Q, ex);
            }
        }
        out
    }

    /// Accumulates `s * a_1 * a_2 * ... ` into `acc`, term by term.
    pub fn mul_into(&self, acc: &mut TorusSum, s: &Scalar, factors: &[&TorusElement]) {
        if s.is_zero() {
            return;
        }
        let mut cur: Vec<(Scalar, UExp)> = vec![(s.clone(), UExp::one())];
        for f in factors {
            let mut next = Vec::with_capacity(cur.len() * f.len());
            for (c, e) in &cur {
                for (fe, fc) in &f.terms {
                    let v = c.mul(&self.shift(fc, e));
                    if !v.is_zero() {
                        next.push((v, e.mul(fe)));
                    }
                }
            }
            cur = next;
        }
        for (c, e) in cur {
            acc.push(c, e);
        }
    }

    pub fn mul(&self, a: &TorusElement, b: &TorusElement) -> TorusElement {
        let mut acc = TorusSum::new();
        self.mul_into(&mut acc, &Scalar::one(), &[a, b]);
        acc.finish()
    }

    /// `[a, b]_s = a b - s b a`.
    pub fn q_bracket(&self, a: &TorusElement, b: &TorusElement, s: &Scalar) -> TorusElement {
        let mut acc = TorusSum::new();
        self.mul_into(&mut acc, &Scalar::one(), &[a, b]);
        self.mul_into(&mut acc, &s.neg(), &[b, a]);
        acc.finish()
    }

    /// Deterministic text: `[e] coefficient` lines sorted by u-exponent.
    pub fn render(&self, vt: &VariableTable, a: &TorusElement) -> String {
        if a.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (e, c) in &a.terms {
            let exps: Vec<String> = (0..self.pairs()).map(|p| e.get(p).to_string()).collect();
            let _ = write!(out, "{}u[{}]: {}", if out.is_empty() { "" } else { "; " }, exps.join(","), vt.render(c));
        }
        out
    }

    /// Acts on `f` in the polynomial module: coefficients multiply, `u^e`
    /// substitutes `v_p -> q^{e_p} v_p`. Works on expanded numerators and
    /// denominators only, independently of the factored arithmetic.
    pub fn apply(&self, a: &TorusElement, f: &RatFn) -> RatFn {
        let mut acc = RatSum::default();
        for (e, c) in &a.terms {
            let mut g = f.clone();
            for (p, &ex) in e.exps().iter().enumerate() {
                if ex != 0 {
                    g = g.shift(self.slots[p], ex);
                }
            }
            acc.push(self.reduce_t(RatFn::from_scalar(c).mul(&g)));
        }
        self.reduce_t(acc.finish())
    }

    /// Normal form modulo `t^2 = τ^2`: numerator of degree ≤ 1 in each `t`,
    /// denominator free of `t`. Cross-multiplied equality is exact on this
    /// form. A no-op when no vertex carries `θ = 1`.
    pub fn reduce_t(&self, f: RatFn) -> RatFn {
        let mut f = f;
        for (slot, tn, td) in &self.t_rules {
            let (num, kn) = reduce_poly(&f.num, *slot, tn, td);
            let (den, kd) = reduce_poly(&f.den, *slot, tn, td);
            f = RatFn { num: num.mul(&td.pow(kd)), den: den.mul(&td.pow(kn)) };
            if f.den.mentions(*slot) {
                // Rationalize d0 + d1 t with its conjugate d0 - d1 t.
                let parts = f.den.split_by(*slot);
                let d0 = parts.get(&0).cloned().unwrap_or_else(Poly::zero);
                let d1 = parts.get(&1).cloned().unwrap_or_else(Poly::zero);
                let conj = d0.sub(&d1.mul(&Poly::monomial(Mono::var(*slot, 1), Int::ONE)));
                let (num, kn) = reduce_poly(&f.num.mul(&conj), *slot, tn, td);
                let (den, kd) = reduce_poly(&f.den.mul(&conj), *slot, tn, td);
                debug_assert!(!den.mentions(*slot));
                f = RatFn { num: num.mul(&td.pow(kd)), den: den.mul(&td.pow(kn)) };
            }
        }
        f
    }
}

/// `p = out / td^k` with `out` of degree ≤ 1 in `slot`, using
/// `t^2 = tn / td`. Only nonnegative powers of `t` occur in expanded parts.
fn reduce_poly(p: &Poly, slot: usize, tn: &Poly, td: &Poly) -> (Poly, u32) {
    let parts = p.split_by(slot);
    let top = parts.keys().next_back().copied().unwrap_or(0);
    if top < 2 {
        return (p.clone(), 0);
    }
    debug_assert!(parts.keys().all(|&d| d >= 0));
    let k = (top / 2) as u32;
    let mut out = Poly::zero();
    for (d, c) in parts {
        let h = (d / 2) as u32;
        let mut term = c.mul(&tn.pow(h)).mul(&td.pow(k - h));
        if d % 2 == 1 {
            term = term.mul_mono(&Mono::var(slot, 1));
        }
        out = out.add(&term);
    }
    (out, k)
}

/// A rational function kept as an expanded numerator/denominator pair.
#[derive(Clone, Debug)]
pub struct RatFn {
    pub num: Poly,
    pub den: Poly,
}

impl RatFn {
    pub fn zero() -> RatFn {
        RatFn { num: Poly::zero(), den: Poly::constant(Int::ONE) }
    }

    pub fn monomial(m: Mono) -> RatFn {
        RatFn { num: Poly::monomial(m, Int::ONE), den: Poly::constant(Int::ONE) }
    }

    pub fn from_scalar(s: &Scalar) -> RatFn {
        let (num, den) = s.to_num_den();
        RatFn { num, den }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn mul(&self, o: &RatFn) -> RatFn {
        RatFn { num: self.num.mul(&o.num), den: self.den.mul(&o.den) }
    }

    pub fn neg(&self) -> RatFn {
        RatFn { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn shift(&self, slot: usize, e: i32) -> RatFn {
        RatFn { num: self.num.shift(slot, Q, e), den: self.den.shift(slot, Q, e) }
    }

    /// Cross-multiplied equality.
    pub fn equals(&self, o: &RatFn) -> bool {
        self.num.mul(&o.den) == o.num.mul(&self.den)
    }
}

/// Sums rational functions, merging equal denominators before
/// cross-multiplying.
#[derive(Default)]
pub struct RatSum {
    by_den: FxHashMap<Poly, Poly>,
}

impl RatSum {
    pub fn push(&mut self, f: RatFn) {
        if f.is_zero() {
            return;
        }
        let e = self.by_den.entry(f.den).or_insert_with(Poly::zero);
        *e = e.add(&f.num);
    }

    pub fn finish(self) -> RatFn {
        let mut groups: Vec<(Poly, Poly)> = self.by_den.into_iter().filter(|(_, n)| !n.is_zero()).collect();
        groups.sort_by(|a, b| a.0.terms().cmp(b.0.terms()));
        let mut out = RatFn::zero();
        for (den, num) in groups {
            if out.is_zero() {
                out = RatFn { num, den };
            } else if out.den == den {
                out.num = out.num.add(&num);
            } else {
                out = RatFn { num: out.num.mul(&den).add(&num.mul(&out.den)), den: out.den.mul(&den) };
            }
        }
        out
    }
}
