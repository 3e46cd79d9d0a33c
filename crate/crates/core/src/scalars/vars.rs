//! Symbol registry derived from an instance.
//!
//! Slots: `q`, `D` (= C^{1/2}), then per vertex `k_i`, `t_i` (only when
//! theta_i = 1), the half-symbols of `z_{i,l}` and `v_{i,k}` (= w_{i,k}^{1/2}),
//! then the central spectral symbols used by lemma checks.

use std::sync::Arc;

use crate::cartan::Instance;

use super::int::{Int, Rat};
use super::mono::Mono;
use super::poly::Poly;
use super::scalar::{Scalar, TRules};

pub const Q: usize = 0;
pub const D: usize = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spectral {
    Z,
    W,
    W1,
    W2,
}

impl Spectral {
    pub const ALL: [Spectral; 4] = [Spectral::Z, Spectral::W, Spectral::W1, Spectral::W2];

    fn name(self) -> &'static str {
        match self {
            Spectral::Z => "z",
            Spectral::W => "w",
            Spectral::W1 => "w1",
            Spectral::W2 => "w2",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SymKind {
    Plain,
    /// Stored as a square root; rendered with halved exponents.
    Half,
}

#[derive(Debug)]
struct VertexSlots {
    kappa: usize,
    t: Option<usize>,
    z: Vec<usize>,
    v: Vec<usize>,
}

#[derive(Debug)]
pub struct VariableTable {
    names: Vec<String>,
    kinds: Vec<SymKind>,
    vertex: Vec<VertexSlots>,
    spectral: usize,
    rules: Option<Arc<TRules>>,
}

impl VariableTable {
    /// Builds the registry. `tau_sq(i)` supplies the value `t_i^2` reduces to;
    /// it may only use `q`, `D`, `k_i` and the table's constructors.
    pub fn new(inst: &Instance, tau_sq: impl Fn(&VariableTable, usize) -> Scalar) -> VariableTable {
        let mut names = vec!["q".to_string(), "D".to_string()];
        let mut kinds = vec![SymKind::Plain, SymKind::Plain];
        let mut vertex = Vec::with_capacity(inst.len());
        for i in 0..inst.len() {
            let id = inst.id(i);
            let kappa = names.len();
            names.push(format!("k_{id}"));
            kinds.push(SymKind::Plain);
            let t = (inst.theta(i) == 1).then(|| {
                names.push(format!("t_{id}"));
                kinds.push(SymKind::Plain);
                names.len() - 1
            });
            let z = (1..=inst.lambda(i) as usize)
                .map(|l| {
                    names.push(format!("z_{id}_{l}"));
                    kinds.push(SymKind::Half);
                    names.len() - 1
                })
                .collect();
            let v = (1..=inst.m(i))
                .map(|k| {
                    names.push(format!("v_{id}_{k}"));
                    kinds.push(SymKind::Plain);
                    names.len() - 1
                })
                .collect();
            vertex.push(VertexSlots { kappa, t, z, v });
        }
        let spectral = names.len();
        for s in Spectral::ALL {
            names.push(s.name().to_string());
            kinds.push(SymKind::Plain);
        }
        let mut table = VariableTable { names, kinds, vertex, spectral, rules: None };
        let rules: Vec<(usize, Scalar)> =
            (0..inst.len()).filter_map(|i| table.vertex[i].t.map(|slot| (slot, tau_sq(&table, i)))).collect();
        if !rules.is_empty() {
            table.rules = Some(Arc::new(TRules { rules }));
        }
        table
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, slot: usize) -> &str {
        &self.names[slot]
    }

    pub fn rules(&self) -> Option<&Arc<TRules>> {
        self.rules.as_ref()
    }

    pub fn q(&self) -> Scalar {
        Scalar::var(Q, 1)
    }

    pub fn d(&self) -> Scalar {
        Scalar::var(D, 1)
    }

    /// `C = D^2`.
    pub fn c(&self) -> Scalar {
        Scalar::var(D, 2)
    }

    pub fn kappa(&self, i: usize) -> Scalar {
        Scalar::var(self.vertex[i].kappa, 1)
    }

    pub fn t_slot(&self, i: usize) -> Option<usize> {
        self.vertex[i].t
    }

    /// The square-root symbol `t_i`; panics if theta_i = 0.
    pub fn t(&self, i: usize) -> Scalar {
        let slot = self.vertex[i].t.expect("t_i exists only when theta_i = 1");
        Scalar::var(slot, 1).with_rules(self.rules.clone())
    }

    pub fn z_slot(&self, i: usize, l: usize) -> usize {
        self.vertex[i].z[l]
    }

    /// `z_{i,l}` (0-based `l`).
    pub fn z(&self, i: usize, l: usize) -> Scalar {
        Scalar::var(self.vertex[i].z[l], 2)
    }

    /// `z_{i,l}^{1/2}`.
    pub fn z_half(&self, i: usize, l: usize) -> Scalar {
        Scalar::var(self.vertex[i].z[l], 1)
    }

    pub fn v_slot(&self, i: usize, k: usize) -> usize {
        self.vertex[i].v[k]
    }

    /// `v_{i,k} = w_{i,k}^{1/2}` (0-based `k`).
    pub fn v(&self, i: usize, k: usize) -> Scalar {
        Scalar::var(self.vertex[i].v[k], 1)
    }

    pub fn w(&self, i: usize, k: usize) -> Scalar {
        Scalar::var(self.vertex[i].v[k], 2)
    }

    pub fn spectral_slot(&self, s: Spectral) -> usize {
        self.spectral + Spectral::ALL.iter().position(|&x| x == s).unwrap()
    }

    pub fn spectral(&self, s: Spectral) -> Scalar {
        Scalar::var(self.spectral_slot(s), 1)
    }

    /// Attaches the instance's t-rules to a scalar built elsewhere.
    pub fn attach(&self, s: Scalar) -> Scalar {
        s.with_rules(self.rules.clone())
    }

    fn render_mono(&self, m: &Mono) -> String {
        let mut parts = Vec::new();
        for (slot, &e) in m.exps().iter().enumerate() {
            if e == 0 {
                continue;
            }
            let name = self.names.get(slot).map(String::as_str).unwrap_or("?");
            let exp = match self.kinds.get(slot).copied().unwrap_or(SymKind::Plain) {
                SymKind::Plain => Rat::int(Int::from(e as i64)),
                SymKind::Half => Rat::new(Int::from(e as i64), Int::from(2)),
            };
            if exp.is_one() {
                parts.push(name.to_string());
            } else {
                parts.push(format!("{name}[{exp}]"));
            }
        }
        parts.join("*")
    }

    /// Sorted monomial list, e.g. `2*q[2]*v_0_1[-2] - D`.
    pub fn render_poly(&self, p: &Poly) -> String {
        if p.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (n, (m, c)) in p.terms().iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if n == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let ms = self.render_mono(m);
            if ms.is_empty() {
                out.push_str(&a.to_string());
            } else if a.is_one() {
                out.push_str(&ms);
            } else {
                out.push_str(&format!("{a}*{ms}"));
            }
        }
        out
    }

    /// Canonical text: `num` or `(num)/(den)` with expanded, sorted numerator
    /// and denominator. Deterministic for a fixed instance.
    pub fn render(&self, s: &Scalar) -> String {
        if s.is_zero() {
            return "0".into();
        }
        let (num, den) = s.to_num_den();
        // make the denominator's leading coefficient positive
        let (num, den) = if den.leading().map(|t| t.1.is_negative()).unwrap_or(false) {
            (num.neg(), den.neg())
        } else {
            (num, den)
        };
        let n = self.render_poly(&num);
        if den.terms().len() == 1 && den.terms()[0].0.is_one() && den.terms()[0].1.is_one() {
            return n;
        }
        format!("({n})/({})", self.render_poly(&den))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::instance;

    #[test]
    fn slots_follow_instance() {
        let inst = instance(&[(0, 1)], &[(0, 1, 1, 1), (0, 1, 1, 0)]).unwrap();
        let vt = VariableTable::new(&inst, |vt, i| vt.kappa(i));
        // q D | k_0 t_0 z_0_1 v_0_1 | k_1 z_1_1 v_1_1 | z w w1 w2
        assert_eq!(vt.len(), 2 + 4 + 3 + 4);
        assert_eq!(vt.name(vt.v_slot(1, 0)), "v_1_1");
        assert!(vt.t_slot(1).is_none());
    }

    #[test]
    fn t_squared_reduces() {
        let inst = instance(&[], &[(0, 2, 1, 1)]).unwrap();
        let vt = VariableTable::new(&inst, |vt, i| vt.kappa(i).mul(&vt.q()));
        let t = vt.t(0);
        assert!(t.mul(&t).equals(&vt.kappa(0).mul(&vt.q())));
        assert!(t.pow(3).equals(&vt.kappa(0).mul(&vt.q()).mul(&t)));
    }

    #[test]
    fn render_half_powers() {
        let inst = instance(&[], &[(0, 2, 1, 0)]).unwrap();
        let vt = VariableTable::new(&inst, |vt, i| vt.kappa(i));
        let s = vt.z_half(0, 0).mul(&vt.q().pow(2)).sub(&vt.d());
        assert_eq!(vt.render(&s), "q[2]*z_0_1[1/2] - D");
        let r = vt.q().div(&vt.v(0, 0).add(&Scalar::one()));
        assert_eq!(vt.render(&r), "(q)/(v_0_1 + 1)");
    }
}
