//! Sparse multivariate Laurent polynomials with exact integer coefficients.

use std::collections::BTreeMap;

use rustc_hash::FxHashMap;

use super::int::Int;
use super::mono::Mono;

/// Terms sorted by descending monomial; no zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly {
    terms: Vec<(Mono, Int)>,
}

pub type TermMap = FxHashMap<Mono, Int>;

impl Poly {
    pub fn zero() -> Poly {
        Poly { terms: Vec::new() }
    }

    pub fn constant(c: Int) -> Poly {
        Poly::monomial(Mono::one(), c)
    }

    pub fn monomial(m: Mono, c: Int) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: vec![(m, c)] }
    }

    pub fn from_terms(mut terms: Vec<(Mono, Int)>) -> Poly {
        terms.retain(|(_, c)| !c.is_zero());
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        // merge duplicates
        let mut out: Vec<(Mono, Int)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            if let Some(last) = out.last_mut() {
                if last.0 == m {
                    last.1.add_assign(&c);
                    continue;
                }
            }
            out.push((m, c));
        }
        out.retain(|(_, c)| !c.is_zero());
        Poly { terms: out }
    }

    pub fn from_map(map: TermMap) -> Poly {
        let mut terms: Vec<(Mono, Int)> = map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        Poly { terms }
    }

    pub fn terms(&self) -> &[(Mono, Int)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Mono, Int)> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn leading(&self) -> Option<&(Mono, Int)> {
        self.terms.first()
    }

    pub fn neg(&self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect() }
    }

    pub fn scale(&self, c: &Int) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, x)| (m.clone(), x.mul(c))).collect() }
    }

    /// Multiplying by a monomial preserves the term order.
    pub fn mul_mono(&self, mono: &Mono) -> Poly {
        if mono.is_one() {
            return self.clone();
        }
        Poly { terms: self.terms.iter().map(|(m, c)| (m.mul(mono), c.clone())).collect() }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < o.terms.len() {
            let (a, b) = (&self.terms[i], &o.terms[j]);
            match a.0.cmp(&b.0) {
                std::cmp::Ordering::Greater => {
                    out.push(a.clone());
                    i += 1;
                }
                std::cmp::Ordering::Less => {
                    out.push(b.clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let s = a.1.add(&b.1);
                    if !s.is_zero() {
                        out.push((a.0.clone(), s));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&o.terms[j..]);
        Poly { terms: out }
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    /// Accumulates `coef * mono * self` into `acc`.
    pub fn accumulate_into(&self, acc: &mut TermMap, mono: &Mono, coef: &Int) {
        for (m, c) in &self.terms {
            let key = m.mul(mono);
            acc.entry(key).or_insert(Int::ZERO).add_mul(c, coef);
        }
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        if o.terms.len() == 1 {
            return self.mul_mono(&o.terms[0].0).scale(&o.terms[0].1);
        }
        if self.terms.len() == 1 {
            return o.mul_mono(&self.terms[0].0).scale(&self.terms[0].1);
        }
        let (big, small) = if self.len() >= o.len() { (self, o) } else { (o, self) };
        let mut acc: TermMap = FxHashMap::with_capacity_and_hasher(big.len() * 2, Default::default());
        for (m, c) in &small.terms {
            big.accumulate_into(&mut acc, m, c);
        }
        Poly::from_map(acc)
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::constant(Int::ONE);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Componentwise minimum exponent over all terms.
    pub fn min_mono(&self) -> Mono {
        let mut it = self.terms.iter();
        let Some((first, _)) = it.next() else { return Mono::one() };
        let mut m = first.clone();
        for (x, _) in it {
            m = m.meet(x);
        }
        m
    }

    pub fn content(&self) -> Int {
        let mut g = Int::ZERO;
        for (_, c) in &self.terms {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn max_degree_in(&self, slot: usize) -> i32 {
        self.terms.iter().map(|(m, _)| m.get(slot)).max().unwrap_or(0)
    }

    pub fn mentions(&self, slot: usize) -> bool {
        self.terms.iter().any(|(m, _)| m.get(slot) != 0)
    }

    /// Substitutes `x_slot -> q^e x_slot` (every power of `x_slot` picks up `q^{e*k}`).
    pub fn shift(&self, slot: usize, qslot: usize, e: i32) -> Poly {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let k = m.get(slot);
                let mut m2 = m.clone();
                if k != 0 {
                    m2.add_at(qslot, e * k);
                }
                (m2, c.clone())
            })
            .collect();
        Poly::from_terms(terms)
    }

    /// Groups terms by the exponent of `slot`: `self = sum_k P_k * x^k`
    /// with `P_k` free of `x`.
    pub fn split_by(&self, slot: usize) -> BTreeMap<i32, Poly> {
        let mut parts: BTreeMap<i32, Vec<(Mono, Int)>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let k = m.get(slot);
            let mut m2 = m.clone();
            m2.set(slot, 0);
            parts.entry(k).or_default().push((m2, c.clone()));
        }
        parts.into_iter().map(|(k, t)| (k, Poly::from_terms(t))).collect()
    }

    /// Exact division by `f` when both are genuine polynomials and `f` is
    /// free of monomial content; `None` if `f` does not divide `self`.
    ///
    /// A single polynomial is a Groebner basis of the ideal it generates, so
    /// the division algorithm leaves remainder zero exactly on multiples.
    pub fn div_exact(&self, f: &Poly) -> Option<Poly> {
        let (lm, lc) = f.leading()?.clone();
        if self.is_zero() {
            return Some(Poly::zero());
        }
        if f.len() == 1 {
            let mut out = Vec::with_capacity(self.len());
            for (m, c) in &self.terms {
                if !m.divisible_by(&lm) {
                    return None;
                }
                out.push((m.div(&lm), c.checked_div_exact(&lc)?));
            }
            return Some(Poly { terms: out });
        }
        // cheap degree screen
        for (slot, &e) in lm.exps().iter().enumerate() {
            if e > 0 && self.max_degree_in(slot) < e {
                return None;
            }
        }
        let mut rem: BTreeMap<Mono, Int> = self.terms.iter().cloned().collect();
        let mut quot: Vec<(Mono, Int)> = Vec::new();
        while let Some((m, c)) = rem.pop_last() {
            if !m.divisible_by(&lm) {
                return None;
            }
            let qc = c.checked_div_exact(&lc)?;
            let qm = m.div(&lm);
            for (fm, fc) in &f.terms[1..] {
                let key = fm.mul(&qm);
                let prod = fc.mul(&qc);
                match rem.get_mut(&key) {
                    Some(v) => {
                        *v = v.sub(&prod);
                        if v.is_zero() {
                            rem.remove(&key);
                        }
                    }
                    None => {
                        rem.insert(key, prod.neg());
                    }
                }
            }
            quot.push((qm, qc));
        }
        // quotient terms were produced in descending order
        Some(Poly { terms: quot })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(e: i32) -> Mono {
        Mono::var(0, e)
    }
    fn y(e: i32) -> Mono {
        Mono::var(1, e)
    }

    #[test]
    fn multiply_and_divide_back() {
        let a = Poly::from_terms(vec![(x(1), Int::ONE), (y(1), Int::from(-2))]);
        let b = Poly::from_terms(vec![(x(2), Int::from(3)), (Mono::one(), Int::ONE), (x(1).mul(&y(1)), Int::ONE)]);
        let p = a.mul(&b);
        assert_eq!(p.div_exact(&a), Some(b.clone()));
        assert_eq!(p.div_exact(&b), Some(a.clone()));
        let c = Poly::from_terms(vec![(x(1), Int::ONE), (Mono::one(), Int::ONE)]);
        assert_eq!(p.div_exact(&c), None);
    }

    #[test]
    fn shift_scales_powers() {
        // x^2 + x with x -> q^3 x, q in slot 1
        let p = Poly::from_terms(vec![(x(2), Int::ONE), (x(1), Int::ONE)]);
        let s = p.shift(0, 1, 3);
        let want = Poly::from_terms(vec![(x(2).mul(&y(6)), Int::ONE), (x(1).mul(&y(3)), Int::ONE)]);
        assert_eq!(s, want);
    }
}
