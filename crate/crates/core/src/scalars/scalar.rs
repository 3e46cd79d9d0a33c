//! Elements of the coefficient field in factored form.
//!
//! A [`Scalar`] is `c * m * prod f^e`: a rational constant, a Laurent monomial
//! and a product of interned polynomial factors with signed exponents.
//! Products only touch the exponent lists; sums bring everything over the
//! common denominator, expand, and then try to cancel each denominator factor
//! by exact division so intermediate results stay small.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rustc_hash::FxHashMap;

use super::int::{Int, Rat};
use super::intern::{factor_poly, factors_mul, factors_pow, normalize, shifted_factor, FactorId, Factors};
use super::mono::Mono;
use super::poly::{Poly, TermMap};

/// Reduction rules `t^2 -> value` for the square-root symbols `t_i`.
#[derive(Debug)]
pub struct TRules {
    pub rules: Vec<(usize, Scalar)>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArithError {
    #[error("inversion of zero")]
    DivisionByZero,
    #[error("substituted value makes a denominator vanish")]
    VanishingDenominator,
}

#[derive(Clone)]
pub struct Scalar {
    c: Rat,
    m: Mono,
    f: Factors,
    tr: Option<Arc<TRules>>,
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({} * {:?} * {:?})", self.c, self.m.exps(), self.f.as_slice())
    }
}

fn join_rules(a: &Option<Arc<TRules>>, b: &Option<Arc<TRules>>) -> Option<Arc<TRules>> {
    a.clone().or_else(|| b.clone())
}

impl Scalar {
    pub fn zero() -> Scalar {
        Scalar { c: Rat::zero(), m: Mono::one(), f: Factors::new(), tr: None }
    }

    pub fn one() -> Scalar {
        Scalar::from_rat(Rat::one())
    }

    pub fn from_int(v: i64) -> Scalar {
        Scalar::from_rat(Rat::int(Int::from(v)))
    }

    pub fn from_ratio(n: i64, d: i64) -> Scalar {
        Scalar::from_rat(Rat::new(Int::from(n), Int::from(d)))
    }

    pub fn from_rat(c: Rat) -> Scalar {
        if c.is_zero() {
            return Scalar::zero();
        }
        Scalar { c, m: Mono::one(), f: Factors::new(), tr: None }
    }

    pub fn from_mono(m: Mono) -> Scalar {
        Scalar { c: Rat::one(), m, f: Factors::new(), tr: None }
    }

    pub fn var(slot: usize, e: i32) -> Scalar {
        Scalar::from_mono(Mono::var(slot, e))
    }

    pub fn from_poly(p: &Poly) -> Scalar {
        if p.is_zero() {
            return Scalar::zero();
        }
        let n = normalize(p);
        Scalar { c: Rat::int(n.c), m: n.m, f: n.f, tr: None }
    }

    pub(crate) fn with_rules(mut self, tr: Option<Arc<TRules>>) -> Scalar {
        if tr.is_some() {
            self.tr = tr;
            self.reduce_t_mono();
        }
        self
    }

    pub fn rules(&self) -> Option<&Arc<TRules>> {
        self.tr.as_ref()
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.c.is_one() && self.m.is_one() && self.f.is_empty()
    }

    /// True when there are no polynomial factors (a constant times a monomial).
    pub fn is_monomial(&self) -> bool {
        self.f.is_empty()
    }

    pub fn constant(&self) -> &Rat {
        &self.c
    }

    pub fn mono(&self) -> &Mono {
        &self.m
    }

    pub fn factors(&self) -> &[(FactorId, i32)] {
        &self.f
    }

    pub fn neg(&self) -> Scalar {
        let mut s = self.clone();
        s.c = s.c.neg();
        s
    }

    pub fn scale(&self, r: &Rat) -> Scalar {
        if r.is_zero() || self.is_zero() {
            return Scalar::zero();
        }
        let mut s = self.clone();
        s.c = s.c.mul(r);
        s
    }

    pub fn mul(&self, o: &Scalar) -> Scalar {
        if self.is_zero() || o.is_zero() {
            return Scalar::zero();
        }
        let mut s = Scalar {
            c: self.c.mul(&o.c),
            m: self.m.mul(&o.m),
            f: factors_mul(&self.f, &o.f),
            tr: join_rules(&self.tr, &o.tr),
        };
        s.reduce_t_mono();
        s
    }

    pub fn try_inv(&self) -> Result<Scalar, ArithError> {
        if self.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        let mut s = Scalar { c: self.c.inv(), m: self.m.inv(), f: factors_pow(&self.f, -1), tr: self.tr.clone() };
        s.reduce_t_mono();
        Ok(s)
    }

    /// Inverse; panics on zero (use [`Scalar::try_inv`] for a checked version).
    pub fn inv(&self) -> Scalar {
        self.try_inv().expect("inversion of zero")
    }

    pub fn div(&self, o: &Scalar) -> Scalar {
        self.mul(&o.inv())
    }

    pub fn pow(&self, e: i32) -> Scalar {
        if e == 0 {
            return Scalar::one().with_rules(self.tr.clone());
        }
        if self.is_zero() {
            assert!(e > 0, "negative power of zero");
            return Scalar::zero();
        }
        let mut s = Scalar { c: self.c.pow(e), m: self.m.pow(e), f: factors_pow(&self.f, e), tr: self.tr.clone() };
        s.reduce_t_mono();
        s
    }

    pub fn add(&self, o: &Scalar) -> Scalar {
        Scalar::sum([self.clone(), o.clone()])
    }

    pub fn sub(&self, o: &Scalar) -> Scalar {
        Scalar::sum([self.clone(), o.neg()])
    }

    pub fn equals(&self, o: &Scalar) -> bool {
        if self.c == o.c && self.m == o.m && self.f == o.f {
            return true;
        }
        self.sub(o).is_zero()
    }

    fn reduce_t_mono(&mut self) {
        let Some(tr) = self.tr.clone() else { return };
        for (slot, val) in &tr.rules {
            let e = self.m.get(*slot);
            let r = e.rem_euclid(2);
            let k = (e - r) / 2;
            if k == 0 {
                continue;
            }
            self.m.set(*slot, r);
            self.c = self.c.mul(&val.c.pow(k));
            self.m = self.m.mul(&val.m.pow(k));
            self.f = factors_mul(&self.f, &factors_pow(&val.f, k));
        }
    }

    /// Rewrites every `t^2` (including those hidden in powers of factors)
    /// by its rule; the result is t-linear in each `t`.
    pub fn t_reduce(&self) -> Scalar {
        let Some(tr) = &self.tr else { return self.clone() };
        let t_slots: Vec<usize> = tr.rules.iter().map(|r| r.0).collect();
        let hidden = self.f.iter().any(|&(id, e)| {
            let p = factor_poly(id);
            e.abs() >= 2 && t_slots.iter().any(|&s| p.mentions(s))
        }) || {
            let with_t: Vec<_> = self
                .f
                .iter()
                .filter(|&&(id, _)| {
                    let p = factor_poly(id);
                    t_slots.iter().any(|&s| p.mentions(s))
                })
                .collect();
            with_t.len() >= 2 || (with_t.len() == 1 && t_slots.iter().any(|&s| self.m.get(s) != 0))
        };
        if !hidden {
            return self.clone();
        }
        let (num, den) = self.to_num_den();
        let (n2, extra) = reduce_t_poly(num, tr);
        Scalar::from_poly(&n2)
            .with_rules(self.tr.clone())
            .mul(&extra)
            .div(&Scalar::from_poly(&den))
    }

    /// `x_slot -> q^e x_slot` with `q` in `qslot`.
    pub fn u_shift(&self, slot: usize, qslot: usize, e: i32) -> Scalar {
        if self.is_zero() || e == 0 {
            return self.clone();
        }
        let mut s = Scalar { c: self.c.clone(), m: self.m.clone(), f: Factors::new(), tr: self.tr.clone() };
        let k = self.m.get(slot);
        if k != 0 {
            s.m.add_at(qslot, e * k);
        }
        for &(id, ex) in &self.f {
            let n = shifted_factor(id, slot, qslot, e);
            s.c = s.c.mul(&Rat::int(n.c.clone()).pow(ex));
            s.m = s.m.mul(&n.m.pow(ex));
            s.f = factors_mul(&s.f, &factors_pow(&n.f, ex));
        }
        s.reduce_t_mono();
        s
    }

    /// Substitutes the symbol in `slot` by `value` everywhere.
    pub fn substitute(&self, slot: usize, value: &Scalar) -> Result<Scalar, ArithError> {
        if self.is_zero() {
            return Ok(Scalar::zero());
        }
        let mut base = self.m.clone();
        let k = base.get(slot);
        base.set(slot, 0);
        let mut out = Scalar { c: self.c.clone(), m: base, f: Factors::new(), tr: join_rules(&self.tr, &value.tr) };
        if k != 0 {
            out = out.mul(&value.pow(k));
        }
        for &(id, ex) in &self.f {
            let p = factor_poly(id);
            let piece = if p.mentions(slot) {
                let parts: Vec<Scalar> = p
                    .split_by(slot)
                    .into_iter()
                    .map(|(d, coeff)| Scalar::from_poly(&coeff).mul(&value.pow(d)))
                    .collect();
                Scalar::sum(parts)
            } else {
                let mut f = Factors::new();
                f.push((id, 1));
                Scalar { c: Rat::one(), m: Mono::one(), f, tr: None }
            };
            if piece.is_zero() {
                if ex < 0 {
                    return Err(ArithError::VanishingDenominator);
                }
                return Ok(Scalar::zero());
            }
            out = out.mul(&piece.pow(ex));
        }
        Ok(out)
    }

    /// Expanded numerator and denominator (`self = num / den`).
    pub fn to_num_den(&self) -> (Poly, Poly) {
        if self.is_zero() {
            return (Poly::zero(), Poly::constant(Int::ONE));
        }
        let (mp, mn) = self.m.split_signs();
        let mut num = Poly::monomial(mp, self.c.num.clone());
        let mut den = Poly::monomial(mn, self.c.den.clone());
        for &(id, e) in &self.f {
            let p = factor_poly(id);
            if e > 0 {
                num = num.mul(&p.pow(e as u32));
            } else {
                den = den.mul(&p.pow((-e) as u32));
            }
        }
        (num, den)
    }

    /// Sum of many terms. Terms with equal denominators are combined first;
    /// the partial sums are then merged pairwise, closest denominators
    /// first, so poles that cancel do so before the next cross-multiplication.
    pub fn sum<I: IntoIterator<Item = Scalar>>(terms: I) -> Scalar {
        let nz: Vec<Scalar> = terms.into_iter().filter(|t| !t.is_zero()).collect();
        if nz.len() <= 2 {
            return Scalar::sum_direct(nz);
        }
        let mut classes: Vec<(Factors, Vec<Scalar>)> = Vec::new();
        let mut index: FxHashMap<Factors, usize> = FxHashMap::default();
        for t in nz {
            let den = denominator_of(&t.f);
            match index.get(&den) {
                Some(&k) => classes[k].1.push(t),
                None => {
                    index.insert(den.clone(), classes.len());
                    classes.push((den, vec![t]));
                }
            }
        }
        let mut parts: Vec<Scalar> =
            classes.into_iter().map(|(_, v)| Scalar::sum_direct(v)).filter(|s| !s.is_zero()).collect();
        while parts.len() > 1 {
            let dens: Vec<Factors> = parts.iter().map(|p| denominator_of(&p.f)).collect();
            let mut best = (usize::MAX, 0, 1);
            for a in 0..parts.len() {
                for b in a + 1..parts.len() {
                    let cost = merge_cost(&dens[a], &dens[b]);
                    if cost < best.0 {
                        best = (cost, a, b);
                    }
                }
            }
            let (_, a, b) = best;
            let y = parts.swap_remove(b);
            let x = parts.swap_remove(a);
            let s = Scalar::sum_direct(vec![x, y]);
            if !s.is_zero() {
                parts.push(s);
            }
        }
        parts.pop().unwrap_or_else(Scalar::zero)
    }

    /// Sum over one common denominator.
    fn sum_direct(nz: Vec<Scalar>) -> Scalar {
        match nz.len() {
            0 => return Scalar::zero(),
            1 => return nz.into_iter().next().unwrap(),
            _ => {}
        }
        let tr = nz.iter().find_map(|t| t.tr.clone());
        let n = nz.len();

        let mut mmin = nz[0].m.clone();
        for t in &nz[1..] {
            mmin = mmin.meet(&t.m);
        }
        let mut fstat: BTreeMap<FactorId, (i32, usize)> = BTreeMap::new();
        for t in &nz {
            for &(id, e) in &t.f {
                let ent = fstat.entry(id).or_insert((e, 0));
                ent.0 = ent.0.min(e);
                ent.1 += 1;
            }
        }
        let mut fmin: Factors = Factors::new();
        for (id, (e, cnt)) in fstat {
            let e = if cnt < n { e.min(0) } else { e };
            if e != 0 {
                fmin.push((id, e));
            }
        }
        let mut lden = Int::ONE;
        for t in &nz {
            lden = lden.lcm(&t.c.den);
        }
        let nums: Vec<Int> = nz.iter().map(|t| t.c.num.mul(&lden.div_exact(&t.c.den))).collect();
        let mut g = Int::ZERO;
        for a in &nums {
            g = g.gcd(a);
        }
        let neg_fmin = factors_pow(&fmin, -1);

        let mut groups: FxHashMap<Factors, TermMap> = FxHashMap::default();
        for (t, a) in nz.iter().zip(nums.iter()) {
            let rf = factors_mul(&t.f, &neg_fmin);
            let rm = t.m.div(&mmin);
            let coef = a.div_exact(&g);
            groups.entry(rf).or_default().entry(rm).or_insert(Int::ZERO).add_assign(&coef);
        }
        let mut keys: Vec<Factors> = groups.keys().cloned().collect();
        keys.sort();
        let mut total: TermMap = FxHashMap::default();
        for key in keys {
            let tm = groups.remove(&key).unwrap();
            let mut p = Poly::from_map(tm);
            if p.is_zero() {
                continue;
            }
            let mut fs: Vec<(Arc<Poly>, i32)> = key.iter().map(|&(id, e)| (factor_poly(id), e)).collect();
            fs.sort_by_key(|(p, _)| p.len());
            for (fp, e) in fs {
                debug_assert!(e > 0);
                for _ in 0..e {
                    p = p.mul(&fp);
                }
            }
            for (m, c) in p.into_terms() {
                total.entry(m).or_insert(Int::ZERO).add_assign(&c);
            }
        }
        let mut num = Poly::from_map(total);
        if num.is_zero() {
            return Scalar::zero();
        }
        let mut extra = Scalar::one();
        if let Some(tr) = &tr {
            let (n2, e2) = reduce_t_poly(num, tr);
            num = n2;
            extra = e2;
            if num.is_zero() {
                return Scalar::zero();
            }
        }
        // cancel denominator factors that divide the new numerator
        let mut common = fmin;
        for slot in 0..common.len() {
            let (id, mut e) = common[slot];
            if e >= 0 {
                continue;
            }
            let fp = factor_poly(id);
            while e < 0 {
                match num.div_exact(&fp) {
                    Some(qt) => {
                        num = qt;
                        e += 1;
                    }
                    None => break,
                }
            }
            common[slot].1 = e;
        }
        common.retain(|x| x.1 != 0);
        let nn = normalize(&num);
        let mut s = Scalar {
            c: Rat::new(g.mul(&nn.c), lden),
            m: mmin.mul(&nn.m),
            f: factors_mul(&common, &nn.f),
            tr: tr.clone(),
        };
        s.reduce_t_mono();
        if !extra.is_one() {
            s = s.mul(&extra);
        }
        s
    }
}

fn denominator_of(f: &Factors) -> Factors {
    f.iter().filter(|x| x.1 < 0).copied().collect()
}

/// Factor-degree count of the symmetric difference of two denominators,
/// weighted by factor size.
fn merge_cost(a: &Factors, b: &Factors) -> usize {
    let mut cost = 0;
    let (mut i, mut j) = (0, 0);
    let w = |id: FactorId, e: i32| factor_poly(id).len() * e.unsigned_abs() as usize;
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            cost += w(a[i].0, a[i].1);
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            cost += w(b[j].0, b[j].1);
            j += 1;
        } else {
            cost += w(a[i].0, a[i].1 - b[j].1);
            i += 1;
            j += 1;
        }
    }
    cost
}

/// Rewrites `t^2` inside an expanded polynomial. Returns the new numerator
/// and a scalar multiplier carrying the cleared denominators of the rule.
fn reduce_t_poly(mut num: Poly, tr: &TRules) -> (Poly, Scalar) {
    let mut extra = Scalar::one();
    loop {
        let mut changed = false;
        for (slot, val) in &tr.rules {
            if num.max_degree_in(*slot) < 2 {
                continue;
            }
            changed = true;
            let (vnum, vden) = val.to_num_den();
            let mut low = Vec::new();
            let mut high = Vec::new();
            for (m, c) in num.terms() {
                let e = m.get(*slot);
                if e >= 2 {
                    let mut m2 = m.clone();
                    m2.set(*slot, e - 2);
                    high.push((m2, c.clone()));
                } else {
                    low.push((m.clone(), c.clone()));
                }
            }
            let a = Poly::from_terms(low);
            let b = Poly::from_terms(high);
            num = a.mul(&vden).add(&b.mul(&vnum));
            extra = extra.div(&Scalar::from_poly(&vden));
            // vnum/vden may carry negative powers; keep num a polynomial
            let mm = num.min_mono();
            if !num.is_zero() && !mm.is_nonnegative() {
                let (_, neg) = mm.split_signs();
                num = num.mul_mono(&neg);
                extra = extra.mul(&Scalar::from_mono(neg.inv()));
            }
        }
        if !changed {
            return (num, extra);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Scalar {
        Scalar::var(0, 1)
    }

    #[test]
    fn rho_times_q_minus_qinv_is_one() {
        let d = q().sub(&q().inv());
        let rho = d.inv();
        assert!(d.mul(&rho).is_one());
    }

    #[test]
    fn cancellation_through_sum() {
        // (q^2 - 1)/(q - 1) == q + 1
        let a = q().pow(2).sub(&Scalar::one()).div(&q().sub(&Scalar::one()));
        let b = q().add(&Scalar::one());
        assert!(a.equals(&b));
        assert!(!q().equals(&q().inv()));
    }

    #[test]
    fn x_minus_x_is_zero() {
        let x = q().add(&Scalar::var(1, 3)).div(&q().sub(&Scalar::from_int(2)));
        assert!(x.sub(&x).is_zero());
    }

    #[test]
    fn shift_of_sum() {
        // (v + 1) with v -> q v
        let v = Scalar::var(1, 1);
        let s = v.add(&Scalar::one()).u_shift(1, 0, 1);
        assert!(s.equals(&q().mul(&v).add(&Scalar::one())));
    }
}
