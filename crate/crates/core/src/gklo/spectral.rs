//! Rational functions of one central spectral variable, kept as
//! `c * z^k * prod (z - a)^e` with [`Scalar`] roots.

use crate::scalars::{ArithError, Int, Poly, Scalar, D};

#[derive(Clone, Debug)]
pub struct SpectralRational {
    c: Scalar,
    zpow: i32,
    roots: Vec<(Scalar, i32)>,
}

impl SpectralRational {
    pub fn constant(c: Scalar) -> SpectralRational {
        SpectralRational { c, zpow: 0, roots: Vec::new() }
    }

    pub fn one() -> SpectralRational {
        SpectralRational::constant(Scalar::one())
    }

    /// `z^k`.
    pub fn z_pow(k: i32) -> SpectralRational {
        SpectralRational { c: Scalar::one(), zpow: k, roots: Vec::new() }
    }

    /// `z - a`.
    pub fn linear(a: Scalar) -> SpectralRational {
        let mut s = SpectralRational::one();
        s.push_root(a, 1);
        s
    }

    /// `prod (z - a)` over the given roots.
    pub fn from_roots(roots: impl IntoIterator<Item = Scalar>) -> SpectralRational {
        let mut s = SpectralRational::one();
        for a in roots {
            s.push_root(a, 1);
        }
        s
    }

    fn push_root(&mut self, a: Scalar, e: i32) {
        if e == 0 {
            return;
        }
        if a.is_zero() {
            self.zpow += e;
            return;
        }
        if let Some(pos) = self.roots.iter().position(|(r, _)| r.equals(&a)) {
            self.roots[pos].1 += e;
            if self.roots[pos].1 == 0 {
                self.roots.remove(pos);
            }
        } else {
            self.roots.push((a, e));
        }
    }

    pub fn prefactor(&self) -> &Scalar {
        &self.c
    }

    pub fn roots(&self) -> &[(Scalar, i32)] {
        &self.roots
    }

    pub fn z_power(&self) -> i32 {
        self.zpow
    }

    pub fn mul(&self, o: &SpectralRational) -> SpectralRational {
        let mut s = SpectralRational { c: self.c.mul(&o.c), zpow: self.zpow + o.zpow, roots: self.roots.clone() };
        for (a, e) in &o.roots {
            s.push_root(a.clone(), *e);
        }
        s
    }

    pub fn inv(&self) -> SpectralRational {
        SpectralRational {
            c: self.c.inv(),
            zpow: -self.zpow,
            roots: self.roots.iter().map(|(a, e)| (a.clone(), -e)).collect(),
        }
    }

    pub fn div(&self, o: &SpectralRational) -> SpectralRational {
        self.mul(&o.inv())
    }

    pub fn scale(&self, s: &Scalar) -> SpectralRational {
        SpectralRational { c: self.c.mul(s), ..self.clone() }
    }

    /// `f(alpha z)`.
    pub fn scale_arg(&self, alpha: &Scalar) -> SpectralRational {
        // (alpha z - a) = alpha (z - a/alpha)
        let deg: i32 = self.zpow + self.roots.iter().map(|r| r.1).sum::<i32>();
        SpectralRational {
            c: self.c.mul(&alpha.pow(deg)),
            zpow: self.zpow,
            roots: self.roots.iter().map(|(a, e)| (a.div(alpha), *e)).collect(),
        }
    }

    /// `f(C^{-1} z^{-1})`.
    pub fn invert_c(&self) -> SpectralRational {
        // (C^{-1}z^{-1} - a) = -a z^{-1} (z - C^{-1} a^{-1})
        let cinv = Scalar::var(D, -2);
        let mut c = self.c.mul(&cinv.pow(self.zpow));
        let mut zpow = -self.zpow;
        let mut roots = Vec::with_capacity(self.roots.len());
        for (a, e) in &self.roots {
            c = c.mul(&a.neg().pow(*e));
            zpow -= e;
            roots.push((cinv.div(a), *e));
        }
        let mut out = SpectralRational { c, zpow, roots: Vec::new() };
        for (a, e) in roots {
            out.push_root(a, e);
        }
        out
    }

    pub fn eval(&self, s: &Scalar) -> Result<Scalar, ArithError> {
        if s.is_zero() && self.zpow < 0 {
            return Err(ArithError::VanishingDenominator);
        }
        let mut out = self.c.mul(&s.pow(self.zpow));
        for (a, e) in &self.roots {
            let d = s.sub(a);
            if d.is_zero() {
                if *e < 0 {
                    return Err(ArithError::VanishingDenominator);
                }
                return Ok(Scalar::zero());
            }
            out = out.mul(&d.pow(*e));
        }
        Ok(out)
    }

    /// Evaluates at the symbol in `slot`, giving an honest field element
    /// for exact comparison.
    pub fn to_scalar(&self, slot: usize) -> Scalar {
        self.eval(&Scalar::var(slot, 1)).expect("a free symbol is never a root")
    }

    pub fn equals(&self, o: &SpectralRational, slot: usize) -> bool {
        self.to_scalar(slot).equals(&o.to_scalar(slot))
    }

    /// Laurent coefficients at `z = 0` for exponents `zpow .. zpow + n`
    /// (index 0 is the coefficient of `z^{zpow}`), as integer polynomials;
    /// multiply by [`SpectralRational::prefactor`] for the actual value.
    ///
    /// Each root must be a unit monomial (`±` a Laurent monomial), so
    /// `1/(z - a) = -a^{-1} sum (z/a)^n` has polynomial coefficients.
    pub fn series(&self, n: usize) -> Vec<Poly> {
        let mut s: Vec<Poly> = vec![Poly::zero(); n];
        if n == 0 {
            return s;
        }
        s[0] = Poly::constant(Int::ONE);
        for (a, e) in &self.roots {
            assert!(a.is_monomial(), "series root must be a monomial");
            let c = a.constant();
            assert!(c.den.is_one() && c.num.abs().is_one(), "series root must have unit coefficient");
            let sign = c.num.clone();
            let m = a.mono().clone();
            let minv = m.inv();
            for _ in 0..e.unsigned_abs() {
                if *e > 0 {
                    // t[k] = s[k-1] - a s[k]
                    let mut t = Vec::with_capacity(n);
                    for k in 0..n {
                        let mut v = s[k].mul_mono(&m).scale(&sign.neg());
                        if k > 0 {
                            v = v.add(&s[k - 1]);
                        }
                        t.push(v);
                    }
                    s = t;
                } else {
                    // t = s/(z - a):  t[k] = a^{-1} (t[k-1] - s[k])
                    let mut t: Vec<Poly> = Vec::with_capacity(n);
                    for k in 0..n {
                        let mut v = s[k].neg();
                        if k > 0 {
                            v = v.add(&t[k - 1]);
                        }
                        t.push(v.mul_mono(&minv).scale(&sign));
                    }
                    s = t;
                }
            }
        }
        s
    }
}
