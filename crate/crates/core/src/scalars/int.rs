//! Integers with an `i64` fast path that spill into `BigInt` on overflow.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{Signed, ToPrimitive, Zero};

/// Invariant: the `Big` variant never holds a value that fits in an `i64`,
/// so derived equality and hashing are canonical.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Int {
    Small(i64),
    Big(Box<BigInt>),
}

impl Int {
    pub const ZERO: Int = Int::Small(0);
    pub const ONE: Int = Int::Small(1);

    fn from_big(b: BigInt) -> Int {
        match b.to_i64() {
            Some(v) => Int::Small(v),
            None => Int::Big(Box::new(b)),
        }
    }

    pub fn to_big(&self) -> BigInt {
        match self {
            Int::Small(v) => BigInt::from(*v),
            Int::Big(b) => (**b).clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Int::Small(0))
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Int::Small(1))
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Int::Small(v) => *v < 0,
            Int::Big(b) => b.is_negative(),
        }
    }

    pub fn as_i64(&self) -> Option<i64> {
        match self {
            Int::Small(v) => Some(*v),
            Int::Big(_) => None,
        }
    }

    pub fn abs(&self) -> Int {
        match self {
            Int::Small(v) => match v.checked_abs() {
                Some(a) => Int::Small(a),
                None => Int::from_big(BigInt::from(*v).abs()),
            },
            Int::Big(b) => Int::from_big(b.abs()),
        }
    }

    pub fn neg(&self) -> Int {
        match self {
            Int::Small(v) => match v.checked_neg() {
                Some(n) => Int::Small(n),
                None => Int::from_big(-BigInt::from(*v)),
            },
            Int::Big(b) => Int::from_big(-(**b).clone()),
        }
    }

    pub fn add(&self, o: &Int) -> Int {
        if let (Int::Small(a), Int::Small(b)) = (self, o) {
            if let Some(s) = a.checked_add(*b) {
                return Int::Small(s);
            }
        }
        Int::from_big(self.to_big() + o.to_big())
    }

    pub fn sub(&self, o: &Int) -> Int {
        if let (Int::Small(a), Int::Small(b)) = (self, o) {
            if let Some(s) = a.checked_sub(*b) {
                return Int::Small(s);
            }
        }
        Int::from_big(self.to_big() - o.to_big())
    }

    pub fn mul(&self, o: &Int) -> Int {
        if let (Int::Small(a), Int::Small(b)) = (self, o) {
            if let Some(s) = a.checked_mul(*b) {
                return Int::Small(s);
            }
        }
        Int::from_big(self.to_big() * o.to_big())
    }

    pub fn add_assign(&mut self, o: &Int) {
        if let (Int::Small(a), Int::Small(b)) = (&*self, o) {
            if let Some(s) = a.checked_add(*b) {
                *self = Int::Small(s);
                return;
            }
        }
        *self = Int::from_big(self.to_big() + o.to_big());
    }

    /// Adds `a*b` in place (the inner loop of polynomial multiplication).
    pub fn add_mul(&mut self, a: &Int, b: &Int) {
        if let (Int::Small(s), Int::Small(x), Int::Small(y)) = (&*self, a, b) {
            if let Some(p) = x.checked_mul(*y) {
                if let Some(t) = s.checked_add(p) {
                    *self = Int::Small(t);
                    return;
                }
            }
        }
        *self = Int::from_big(self.to_big() + a.to_big() * b.to_big());
    }

    pub fn gcd(&self, o: &Int) -> Int {
        if let (Int::Small(a), Int::Small(b)) = (self, o) {
            let (mut x, mut y) = (a.unsigned_abs(), b.unsigned_abs());
            while y != 0 {
                let t = x % y;
                x = y;
                y = t;
            }
            return match i64::try_from(x) {
                Ok(v) => Int::Small(v),
                Err(_) => Int::from_big(BigInt::from(x)),
            };
        }
        Int::from_big(self.to_big().gcd(&o.to_big()))
    }

    /// Exact quotient; caller guarantees divisibility.
    pub fn div_exact(&self, o: &Int) -> Int {
        if let (Int::Small(a), Int::Small(b)) = (self, o) {
            if let Some(q) = a.checked_div(*b) {
                debug_assert_eq!(a % b, 0);
                return Int::Small(q);
            }
        }
        Int::from_big(self.to_big() / o.to_big())
    }

    /// `Some(self / o)` when `o` divides `self`.
    pub fn checked_div_exact(&self, o: &Int) -> Option<Int> {
        if o.is_zero() {
            return None;
        }
        if let (Int::Small(a), Int::Small(b)) = (self, o) {
            if let Some(r) = a.checked_rem(*b) {
                return if r == 0 { Some(Int::Small(a / b)) } else { None };
            }
        }
        let (q, r) = self.to_big().div_rem(&o.to_big());
        if r.is_zero() {
            Some(Int::from_big(q))
        } else {
            None
        }
    }

    pub fn pow(&self, e: u32) -> Int {
        let mut acc = Int::ONE;
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn lcm(&self, o: &Int) -> Int {
        if self.is_zero() || o.is_zero() {
            return Int::ZERO;
        }
        self.div_exact(&self.gcd(o)).mul(o).abs()
    }
}

impl From<i64> for Int {
    fn from(v: i64) -> Int {
        Int::Small(v)
    }
}

impl From<BigInt> for Int {
    fn from(v: BigInt) -> Int {
        Int::from_big(v)
    }
}

impl Ord for Int {
    fn cmp(&self, o: &Int) -> Ordering {
        match (self, o) {
            (Int::Small(a), Int::Small(b)) => a.cmp(b),
            _ => self.to_big().cmp(&o.to_big()),
        }
    }
}

impl PartialOrd for Int {
    fn partial_cmp(&self, o: &Int) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for Int {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Int::Small(v) => write!(f, "{v}"),
            Int::Big(b) => write!(f, "{b}"),
        }
    }
}

impl fmt::Debug for Int {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Normalized rational: positive denominator, coprime parts.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Rat {
    pub num: Int,
    pub den: Int,
}

impl Rat {
    pub fn zero() -> Rat {
        Rat { num: Int::ZERO, den: Int::ONE }
    }

    pub fn one() -> Rat {
        Rat { num: Int::ONE, den: Int::ONE }
    }

    pub fn int(v: Int) -> Rat {
        Rat { num: v, den: Int::ONE }
    }

    pub fn new(num: Int, den: Int) -> Rat {
        assert!(!den.is_zero(), "zero denominator");
        let g = num.gcd(&den);
        let (mut n, mut d) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g), den.div_exact(&g))
        };
        if d.is_negative() {
            n = n.neg();
            d = d.neg();
        }
        Rat { num: n, den: d }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn mul(&self, o: &Rat) -> Rat {
        if self.den.is_one() && o.den.is_one() {
            return Rat::int(self.num.mul(&o.num));
        }
        Rat::new(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    pub fn inv(&self) -> Rat {
        Rat::new(self.den.clone(), self.num.clone())
    }

    pub fn neg(&self) -> Rat {
        Rat { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn add(&self, o: &Rat) -> Rat {
        Rat::new(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
    }

    pub fn pow(&self, e: i32) -> Rat {
        let base = if e < 0 { self.inv() } else { self.clone() };
        let mut acc = Rat::one();
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        acc
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overflow_promotes_and_demotes() {
        let a = Int::from(i64::MAX);
        let b = a.add(&Int::ONE);
        assert!(matches!(b, Int::Big(_)));
        assert_eq!(b.sub(&Int::ONE), a);
        assert!(matches!(b.sub(&Int::ONE), Int::Small(_)));
    }

    #[test]
    fn rat_normalizes_sign_and_gcd() {
        let r = Rat::new(Int::from(4), Int::from(-6));
        assert_eq!(r.num, Int::from(-2));
        assert_eq!(r.den, Int::from(3));
    }

    #[test]
    fn exact_division() {
        assert_eq!(Int::from(12).checked_div_exact(&Int::from(4)), Some(Int::from(3)));
        assert_eq!(Int::from(12).checked_div_exact(&Int::from(5)), None);
        assert_eq!(Int::from(i64::MIN).gcd(&Int::from(2)), Int::from(2));
    }
}
