mod common;

use igklo_core::cartan::instance;
use igklo_core::gklo::{BuildError, Flavor, Model, OpKind, RootPoly, SpectralRational};
use igklo_core::scalars::{Scalar, Spectral, D, Q};

fn q() -> Scalar {
    Scalar::var(Q, 1)
}

fn dp(e: i32) -> Scalar {
    Scalar::var(D, e)
}

fn z_of(m: &Model) -> usize {
    m.vars().spectral_slot(Spectral::Z)
}

/// Coefficients (constant term first) of `prod (z - a)^e` over the given roots.
fn expand(roots: &[(Scalar, i32)]) -> Vec<Scalar> {
    let mut p = vec![Scalar::one()];
    for (a, e) in roots {
        for _ in 0..*e {
            let mut next = vec![Scalar::zero(); p.len() + 1];
            for (k, c) in p.iter().enumerate() {
                next[k + 1] = next[k + 1].add(c);
                next[k] = next[k].sub(&c.mul(a));
            }
            p = next;
        }
    }
    p
}

#[test]
fn root_polynomials() {
    let m = Model::new(common::rank1(2, 0, 1, 0));
    let z = Scalar::var(z_of(&m), 1);
    let wm = m.root_poly(RootPoly::Wminus, 0, None).unwrap().to_scalar(z_of(&m));
    assert!(wm.equals(&z.sub(&q().pow(-2).mul(&m.vars().w(0, 0)))));
    let hat = m.root_poly(RootPoly::Wminus, 0, Some(0)).unwrap();
    assert!(hat.to_scalar(z_of(&m)).is_one());
    assert!(matches!(m.root_poly(RootPoly::W, 0, Some(1)), Err(BuildError::IndexOutOfRange { .. })));
    let empty = Model::new(instance(&[], &[(0, 0, 0, 0)]).unwrap());
    assert!(empty.root_poly(RootPoly::Wminus, 0, None).unwrap().to_scalar(z_of(&empty)).is_one());
    let zp = m.root_poly(RootPoly::Zplus, 0, None).unwrap().to_scalar(z_of(&m));
    let expect = (0..2).fold(Scalar::one(), |acc, l| acc.mul(&z.sub(&dp(-2).div(&m.vars().z(0, l)))));
    assert!(zp.equals(&expect));
}

#[test]
fn gamma_factor() {
    let m = Model::new(common::rank1(2, 0, 1, 0));
    assert!(m.gamma(0).to_scalar(z_of(&m)).is_one());
    let m = Model::new(common::rank1(2, 0, 1, 1));
    let zs = z_of(&m);
    let z = Scalar::var(zs, 1);
    let g = m.gamma(0);
    let s = dp(-1);
    let display = q().neg().mul(&z.sub(&q().mul(&s))).mul(&z.sub(&q().inv().mul(&s))).div(&z.sub(&s).pow(2));
    assert!(g.to_scalar(zs).equals(&display));
    assert!(g.invert_c().equals(&g, zs));
}

#[test]
fn frak_w_symmetry() {
    for (name, inst) in common::all() {
        let m = Model::new(inst);
        let zs = z_of(&m);
        for i in 0..m.instance().len() {
            let mu = m.instance().mu(i) as i32;
            let cz2 = SpectralRational::z_pow(2).scale(&dp(2));
            for k in 0..m.instance().m(i) {
                let f = m.frak_w(i, Some(k));
                let expect = f.mul(&spow(&cz2, -mu - 2));
                assert!(f.invert_c().equals(&expect, zs), "{name} vertex {i} k {k}");
            }
        }
    }
}

fn spow(f: &SpectralRational, e: i32) -> SpectralRational {
    let base = if e >= 0 { f.clone() } else { f.inv() };
    (0..e.abs()).fold(SpectralRational::one(), |acc, _| acc.mul(&base))
}

#[test]
fn frak_w_small_cases() {
    let m = Model::new(common::rank1(2, 0, 1, 0));
    let zs = z_of(&m);
    assert!(m.frak_w(0, Some(0)).equals(&m.z_full(0), zs));
    // m_0 = 0, lambda_0 = 0: only the neighbour factor survives.
    let m = Model::new(instance(&[(0, 1)], &[(1, 0, 0, 0), (0, 2, 1, 0)]).unwrap());
    let zs = z_of(&m);
    assert!(m.frak_w(0, None).equals(&m.w_full(1, None).scale_arg(&q().inv()), zs));
}

#[test]
fn x_operator_rank1_instantiation() {
    let m = Model::new(common::rank1(2, 0, 1, 0));
    let vt = m.vars();
    let (w, v) = (vt.w(0, 0), vt.v(0, 0));
    let rho = q().sub(&q().inv()).inv();
    let zw = m.z_full(0).eval(&w).unwrap();
    let expect = q().mul(&rho).div(&w).div(&v).mul(&zw).div(&q().pow(-2).mul(&w).sub(&dp(-2).div(&w)));
    assert!(m.x_coef(0, 0).equals(&expect));
    let x = m.operator(OpKind::X, 0, Some(0)).unwrap();
    assert_eq!(x.support(), vec![m.torus().u(0, 0, 1)]);
}

#[test]
fn operator_errors() {
    let m = Model::new(common::rank1(2, 0, 1, 0));
    assert!(matches!(m.operator(OpKind::Xsecond, 0, None), Err(BuildError::NoXsecond(_))));
    assert!(matches!(m.operator(OpKind::X, 0, Some(3)), Err(BuildError::IndexOutOfRange { .. })));
    assert!(matches!(m.operator(OpKind::Xprime, 0, None), Err(BuildError::MissingIndex)));
    let m = Model::new(common::rank1(2, 0, 1, 1));
    assert!(m.operator(OpKind::Xsecond, 0, None).unwrap().support() == vec![m.torus().u(0, 0, 0)]);
}

#[test]
fn constants() {
    let m = Model::new(instance(&[], &[(0, 0, 0, 0)]).unwrap());
    assert!(m.rho_prime(0).is_one());
    assert!(m.rho().mul(&q().sub(&q().inv())).is_one());
    let m = Model::new(common::rank1(2, -2, 2, 0));
    assert!(m.rho_prime(0).equals(&dp(-4).mul(&q().pow(-8))));
    let m = Model::new(common::rank1(2, 0, 1, 1));
    assert!(m.rho_prime(0).equals(&q().neg().inv().mul(&q().pow(-4))));
}

#[test]
fn theta_rational_is_invariant() {
    for (name, inst) in common::all() {
        let m = Model::new(inst);
        for i in 0..m.instance().len() {
            let f = m.theta_rational(i);
            assert!(f.invert_c().equals(&f, z_of(&m)), "{name} vertex {i}");
        }
    }
}

#[test]
fn leading_modes() {
    for (name, inst) in common::all() {
        let m = Model::new(inst);
        for i in 0..m.instance().len() {
            let mu = m.instance().mu(i);
            for flavor in [Flavor::Acute, Flavor::Plain] {
                assert!(m.theta_mode(i, -mu, flavor).is_one(), "{name} vertex {i} {flavor:?}");
                for r in (-mu - 4)..-mu {
                    assert!(m.theta_mode(i, r, flavor).is_zero(), "{name} vertex {i} r {r}");
                }
            }
        }
    }
}

#[test]
fn shifted_rank1_starts_at_z_squared() {
    let m = Model::new(common::rank1(0, -2, 1, 0));
    let modes = m.theta_modes(0, -1, 3, Flavor::Acute);
    assert!(modes[..3].iter().all(|(_, s)| s.is_zero()));
    assert_eq!(modes[3].0, 2);
    assert!(modes[3].1.is_one());
    assert!(!modes[4].1.is_zero());
}

/// Independent series oracle: `sum_r a_r z^r · Den(z) = c z^p Num(z)`,
/// with `Den`, `Num` expanded by hand from the root list.
#[test]
fn acute_modes_solve_the_defining_equation() {
    const N: usize = 7;
    for (name, inst) in common::all() {
        let m = Model::new(inst);
        for i in 0..m.instance().len() {
            let f = m.theta_function(i, Flavor::Acute);
            let p = f.z_power() as i64;
            let num: Vec<(Scalar, i32)> = f.roots().iter().filter(|r| r.1 > 0).cloned().collect();
            let den: Vec<(Scalar, i32)> = f.roots().iter().filter(|r| r.1 < 0).map(|(a, e)| (a.clone(), -e)).collect();
            let (num, den) = (expand(&num), expand(&den));
            let modes = m.theta_modes(i, p, p + N as i64, Flavor::Acute);
            for n in 0..N {
                let lhs = Scalar::sum((0..=n).filter(|&k| k < den.len()).map(|k| modes[n - k].1.mul(&den[k])));
                let rhs = num.get(n).map(|c| c.mul(f.prefactor())).unwrap_or_else(Scalar::zero);
                assert!(lhs.equals(&rhs), "{name} vertex {i} order {n}");
            }
        }
    }
}

/// `(1 - q^{-2}Cz^2) Θ(z) = (1 - Cz^2) Θ́(z)` coefficientwise.
#[test]
fn plain_and_acute_flavors_convert() {
    for (name, inst) in common::all() {
        let m = Model::new(inst);
        for i in 0..m.instance().len() {
            let mu = m.instance().mu(i);
            let c = dp(2);
            for r in -mu..(-mu + 8) {
                let p = |s| m.theta_mode(i, s, Flavor::Plain);
                let a = |s| m.theta_mode(i, s, Flavor::Acute);
                let lhs = p(r).sub(&q().pow(-2).mul(&c).mul(&p(r - 2)));
                let rhs = a(r).sub(&c.mul(&a(r - 2)));
                assert!(lhs.equals(&rhs), "{name} vertex {i} r {r}");
            }
        }
    }
}

#[test]
fn a_modes() {
    let m = Model::new(instance(&[], &[(0, 0, 0, 0)]).unwrap());
    assert!(m.a_mode(0, 3).is_zero());
    let m = Model::new(common::rank1(2, 0, 1, 0));
    let kr = m.vars().kappa(0).mul(&m.rho_prime(0));
    let expect = m.x(0, 0).scale(&kr).add(&m.xprime(0, 0));
    assert!(m.a_mode(0, 0).equals(&expect));
    for (name, inst) in common::all() {
        let m = Model::new(inst);
        let t = m.torus();
        for i in 0..m.instance().len() {
            for r in [-2, 0, 3] {
                for e in m.a_mode(i, r).support() {
                    let ok = e.is_one() || (0..m.instance().m(i)).any(|k| e == t.u(i, k, 1) || e == t.u(i, k, -1));
                    assert!(ok, "{name} vertex {i} r {r}");
                }
            }
        }
    }
}
