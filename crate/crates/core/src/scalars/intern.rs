//! Global interner for normalized polynomial factors.
//!
//! A factor is a polynomial with no monomial content, coprime integer
//! coefficients and a positive leading term. Binomials `X^g ± Y^g` are split
//! into cyclotomic pieces so that the common building blocks (linear forms in
//! the w-variables, `D v^2 ± q` and friends) get canonical ids and cancel
//! automatically when multiplied against their inverses.

use std::sync::Arc;

use once_cell::sync::Lazy;
use parking_lot::RwLock;
use rustc_hash::FxHashMap;
use smallvec::SmallVec;

use super::int::Int;
use super::mono::Mono;
use super::poly::Poly;

pub type FactorId = u32;
pub type Factors = SmallVec<[(FactorId, i32); 6]>;

#[derive(Default)]
struct Interner {
    polys: Vec<Arc<Poly>>,
    index: FxHashMap<Arc<Poly>, FactorId>,
}

static INTERNER: Lazy<RwLock<Interner>> = Lazy::new(|| RwLock::new(Interner::default()));

type ShiftKey = (FactorId, u32, u32, i32);
static SHIFTS: Lazy<RwLock<FxHashMap<ShiftKey, Arc<Normalized>>>> =
    Lazy::new(|| RwLock::new(FxHashMap::default()));

/// `c * m * prod f^e`.
#[derive(Clone, Debug)]
pub struct Normalized {
    pub c: Int,
    pub m: Mono,
    pub f: Factors,
}

pub fn factor_poly(id: FactorId) -> Arc<Poly> {
    INTERNER.read().polys[id as usize].clone()
}

pub fn interned_count() -> usize {
    INTERNER.read().polys.len()
}

fn intern(p: Poly) -> FactorId {
    if let Some(&id) = INTERNER.read().index.get(&p) {
        return id;
    }
    let mut w = INTERNER.write();
    if let Some(&id) = w.index.get(&p) {
        return id;
    }
    let id = w.polys.len() as FactorId;
    let arc = Arc::new(p);
    w.polys.push(arc.clone());
    w.index.insert(arc, id);
    id
}

/// Merges two sorted factor lists, adding exponents.
pub fn factors_mul(a: &Factors, b: &Factors) -> Factors {
    if a.is_empty() {
        return b.clone();
    }
    if b.is_empty() {
        return a.clone();
    }
    let mut out = Factors::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let e = a[i].1 + b[j].1;
                if e != 0 {
                    out.push((a[i].0, e));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

pub fn factors_pow(a: &Factors, k: i32) -> Factors {
    if k == 0 {
        return Factors::new();
    }
    a.iter().map(|&(id, e)| (id, e * k)).collect()
}

/// Writes a nonzero polynomial as `c * m * prod f^e` with interned factors.
pub fn normalize(p: &Poly) -> Normalized {
    assert!(!p.is_zero(), "normalize of zero polynomial");
    let m = p.min_mono();
    let p1 = if m.is_one() { p.clone() } else { p.mul_mono(&m.inv()) };
    let mut g = p1.content();
    if p1.leading().map(|t| t.1.is_negative()).unwrap_or(false) {
        g = g.neg();
    }
    let p2 = if g.is_one() {
        p1
    } else {
        Poly::from_terms(p1.terms().iter().map(|(mm, c)| (mm.clone(), c.div_exact(&g))).collect())
    };
    if p2.len() == 1 {
        let lm = p2.terms()[0].0.clone();
        return Normalized { c: g, m: m.mul(&lm), f: Factors::new() };
    }
    let (sign, f) = split_primitive(p2);
    Normalized { c: if sign < 0 { g.neg() } else { g }, m, f }
}

/// Splits a primitive, content-free polynomial with positive leading term.
/// Returns a sign and factor list with `p = sign * prod f^e`.
fn split_primitive(p: Poly) -> (i32, Factors) {
    if p.len() == 2 {
        let t = p.terms();
        let unit = |c: &Int| c.is_one() || c.neg().is_one();
        if unit(&t[0].1) && unit(&t[1].1) {
            let (m1, m2) = (t[0].0.clone(), t[1].0.clone());
            let g = crate::scalars::mono::gcd_u32(m1.gcd_exponent(), m2.gcd_exponent());
            if g > 1 {
                let x = Mono::from_slice(&m1.exps().iter().map(|e| e / g as i32).collect::<Vec<_>>());
                let y = Mono::from_slice(&m2.exps().iter().map(|e| e / g as i32).collect::<Vec<_>>());
                let plus = !t[1].1.is_negative();
                return split_binomial(&x, &y, g, plus);
            }
        }
    }
    let mut f = Factors::new();
    f.push((intern(p), 1));
    (1, f)
}

fn split_binomial(x: &Mono, y: &Mono, g: u32, plus: bool) -> (i32, Factors) {
    // x^g - y^g = prod_{d|g} Phi_d(x,y); x^g + y^g = prod_{d|2g, d∤g} Phi_d(x,y)
    let ds: Vec<u32> = if plus {
        (1..=2 * g).filter(|d| (2 * g).is_multiple_of(*d) && !g.is_multiple_of(*d)).collect()
    } else {
        (1..=g).filter(|d| g.is_multiple_of(*d)).collect()
    };
    let mut sign = 1;
    let mut out = Factors::new();
    for d in ds {
        let coeffs = cyclotomic(d);
        let deg = coeffs.len() as i32 - 1;
        let terms: Vec<(Mono, Int)> = coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0)
            .map(|(k, &c)| (x.pow(k as i32).mul(&y.pow(deg - k as i32)), Int::from(c)))
            .collect();
        let piece = Poly::from_terms(terms);
        let neg = piece.leading().map(|t| t.1.is_negative()).unwrap_or(false);
        let piece = if neg {
            sign = -sign;
            piece.neg()
        } else {
            piece
        };
        let id = intern(piece);
        out = factors_mul(&out, &Factors::from_slice(&[(id, 1)]));
    }
    (sign, out)
}

/// Coefficients of the d-th cyclotomic polynomial, constant term first.
fn cyclotomic(d: u32) -> Vec<i64> {
    // x^d - 1 divided by Phi_e for every proper divisor e
    let mut num = vec![0i64; d as usize + 1];
    num[0] = -1;
    num[d as usize] = 1;
    for e in 1..d {
        if d.is_multiple_of(e) {
            num = div_monic(&num, &cyclotomic(e));
        }
    }
    num
}

fn div_monic(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let dq = r.len() - 1 - db;
    let mut q = vec![0i64; dq + 1];
    for k in (0..=dq).rev() {
        let c = r[k + db];
        q[k] = c;
        for (i, &bi) in b.iter().enumerate() {
            r[k + i] -= c * bi;
        }
    }
    q
}

/// The image of factor `id` under `x_slot -> q^e x_slot`, memoized.
pub fn shifted_factor(id: FactorId, slot: usize, qslot: usize, e: i32) -> Arc<Normalized> {
    let key = (id, slot as u32, qslot as u32, e);
    if let Some(n) = SHIFTS.read().get(&key) {
        return n.clone();
    }
    let p = factor_poly(id);
    let n = if p.mentions(slot) {
        Arc::new(normalize(&p.shift(slot, qslot, e)))
    } else {
        let mut f = Factors::new();
        f.push((id, 1));
        Arc::new(Normalized { c: Int::ONE, m: Mono::one(), f })
    };
    SHIFTS.write().entry(key).or_insert(n).clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_small() {
        assert_eq!(cyclotomic(1), vec![-1, 1]);
        assert_eq!(cyclotomic(2), vec![1, 1]);
        assert_eq!(cyclotomic(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic(6), vec![1, -1, 1]);
    }

    #[test]
    fn difference_of_squares_splits() {
        // x^2 - y^2 in slots 0,1
        let p = Poly::from_terms(vec![(Mono::var(0, 2), Int::ONE), (Mono::var(1, 2), Int::from(-1))]);
        let n = normalize(&p);
        assert_eq!(n.f.len(), 2);
        let q = Poly::from_terms(vec![(Mono::var(0, 1), Int::ONE), (Mono::var(1, 1), Int::ONE)]);
        let nq = normalize(&q);
        assert!(n.f.iter().any(|&(id, _)| id == nq.f[0].0));
    }

    #[test]
    fn content_and_monomial_extracted() {
        // -6 x^3 y + 4 x y^2
        let p = Poly::from_terms(vec![
            (Mono::from_slice(&[3, 1]), Int::from(-6)),
            (Mono::from_slice(&[1, 2]), Int::from(4)),
        ]);
        let n = normalize(&p);
        assert_eq!(n.c, Int::from(-2));
        assert_eq!(n.m, Mono::from_slice(&[1, 1]));
        let f = factor_poly(n.f[0].0);
        assert_eq!(f.terms()[0].1, Int::from(3));
    }
}
