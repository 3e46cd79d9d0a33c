//! Laurent monomials as trimmed exponent vectors indexed by symbol slot.

use std::cmp::Ordering;

use smallvec::SmallVec;

/// Exponent vector with trailing zeros trimmed, so equal monomials have equal
/// representations. Ordering is lexicographic with implicit zero padding,
/// which is a term order on the polynomial part.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct Mono(SmallVec<[i32; 16]>);

impl Mono {
    pub fn one() -> Mono {
        Mono(SmallVec::new())
    }

    pub fn var(slot: usize, e: i32) -> Mono {
        let mut m = Mono::one();
        m.set(slot, e);
        m
    }

    pub fn from_slice(v: &[i32]) -> Mono {
        let mut m = Mono(SmallVec::from_slice(v));
        m.trim();
        m
    }

    fn trim(&mut self) {
        while let Some(&0) = self.0.last() {
            self.0.pop();
        }
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, slot: usize) -> i32 {
        self.0.get(slot).copied().unwrap_or(0)
    }

    pub fn set(&mut self, slot: usize, e: i32) {
        if slot >= self.0.len() {
            if e == 0 {
                return;
            }
            self.0.resize(slot + 1, 0);
        }
        self.0[slot] = e;
        self.trim();
    }

    pub fn add_at(&mut self, slot: usize, e: i32) {
        let cur = self.get(slot);
        self.set(slot, cur + e);
    }

    pub fn exps(&self) -> &[i32] {
        &self.0
    }

    pub fn mul(&self, o: &Mono) -> Mono {
        let (long, short) = if self.0.len() >= o.0.len() { (self, o) } else { (o, self) };
        let mut r = long.0.clone();
        for (a, b) in r.iter_mut().zip(short.0.iter()) {
            *a += *b;
        }
        let mut m = Mono(r);
        m.trim();
        m
    }

    pub fn div(&self, o: &Mono) -> Mono {
        self.mul(&o.inv())
    }

    pub fn inv(&self) -> Mono {
        Mono(self.0.iter().map(|e| -e).collect())
    }

    pub fn pow(&self, k: i32) -> Mono {
        let mut m = Mono(self.0.iter().map(|e| e * k).collect());
        m.trim();
        m
    }

    /// Componentwise minimum.
    pub fn meet(&self, o: &Mono) -> Mono {
        let n = self.0.len().max(o.0.len());
        let mut r: SmallVec<[i32; 16]> = SmallVec::with_capacity(n);
        for i in 0..n {
            r.push(self.get(i).min(o.get(i)));
        }
        let mut m = Mono(r);
        m.trim();
        m
    }

    /// `o` divides `self` as polynomial monomials (both nonnegative).
    pub fn divisible_by(&self, o: &Mono) -> bool {
        (0..o.0.len()).all(|i| self.get(i) >= o.0[i])
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&e| e >= 0)
    }

    /// Positive and negative parts: `self = pos / neg`.
    pub fn split_signs(&self) -> (Mono, Mono) {
        let mut p = Mono(self.0.iter().map(|&e| e.max(0)).collect());
        let mut n = Mono(self.0.iter().map(|&e| (-e).max(0)).collect());
        p.trim();
        n.trim();
        (p, n)
    }

    pub fn gcd_exponent(&self) -> u32 {
        let mut g = 0u32;
        for &e in &self.0 {
            g = gcd_u32(g, e.unsigned_abs());
        }
        g
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().map(|&e| e as i64).sum()
    }
}

pub(crate) fn gcd_u32(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Ord for Mono {
    fn cmp(&self, o: &Mono) -> Ordering {
        let n = self.0.len().max(o.0.len());
        for i in 0..n {
            match self.get(i).cmp(&o.get(i)) {
                Ordering::Equal => continue,
                other => return other,
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, o: &Mono) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trimmed_equality() {
        let a = Mono::from_slice(&[1, 0, 0]);
        let b = Mono::from_slice(&[1]);
        assert_eq!(a, b);
        assert_eq!(a.mul(&Mono::from_slice(&[0, 2])).div(&Mono::var(1, 2)), b);
    }

    #[test]
    fn ordering_pads_with_zero() {
        let a = Mono::from_slice(&[1]);
        let b = Mono::from_slice(&[1, -2]);
        assert!(a > b);
        assert!(Mono::from_slice(&[1, 2]) > a);
    }
}
