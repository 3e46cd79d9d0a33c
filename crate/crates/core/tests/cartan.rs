use igklo_core::cartan::{load_instance, load_instance_with, validate, Instance, InstanceError};
use proptest::prelude::*;
use serde_json::json;

#[derive(Debug, Clone)]
struct Doc {
    /// `parent[k]` for vertex k+1, with edge orientation.
    tree: Vec<(usize, bool)>,
    data: Vec<(i64, i64, i64, i64)>,
}

impl Doc {
    fn n(&self) -> usize {
        self.data.len()
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.tree.iter().enumerate().map(|(k, &(p, fwd))| if fwd { (p, k + 1) } else { (k + 1, p) }).collect()
    }

    fn json(&self) -> String {
        let name = |k: usize| format!("v{k}");
        let vertices: Vec<String> = (0..self.n()).map(name).collect();
        let edges: Vec<_> = self.edges().into_iter().map(|(a, b)| json!({"from": name(a), "to": name(b)})).collect();
        let data: serde_json::Map<String, serde_json::Value> = self
            .data
            .iter()
            .enumerate()
            .map(|(k, &(mu, lambda, m, theta))| (name(k), json!({"mu": mu, "lambda": lambda, "m": m, "theta": theta})))
            .collect();
        json!({"vertices": vertices, "edges": edges, "data": data}).to_string()
    }

    fn adjacent(&self, i: usize, j: usize) -> bool {
        self.edges().iter().any(|&(a, b)| (a, b) == (i, j) || (a, b) == (j, i))
    }

    /// Every type invariant, computed independently of the crate.
    fn invariants_hold(&self) -> bool {
        let n = self.n();
        let ranges = self.data.iter().all(|&(_, l, m, t)| l >= 0 && m >= 0 && (t == 0 || t == 1));
        let coweight = (0..n).all(|i| {
            let (mu, l, m, _) = self.data[i];
            let nb: i64 = (0..n).filter(|&j| self.adjacent(i, j)).map(|j| self.data[j].2).sum();
            l - mu == 2 * m - nb
        });
        let theta = self.edges().iter().all(|&(a, b)| self.data[a].3 * self.data[b].3 == 0);
        ranges && coweight && theta
    }
}

fn arb_doc() -> impl Strategy<Value = Doc> {
    (1usize..5).prop_flat_map(|n| {
        let tree = (1..n).map(|k| (0..k, any::<bool>())).collect::<Vec<_>>();
        let data = prop::collection::vec((-3i64..=3, -1i64..=4, -1i64..=3, 0i64..=2), n);
        (tree, data).prop_map(|(tree, data)| Doc { tree, data })
    })
}

/// Documents that satisfy the coweight identity by construction.
fn arb_valid_doc() -> impl Strategy<Value = Doc> {
    arb_doc().prop_map(|mut d| {
        let n = d.n();
        for i in 0..n {
            d.data[i].2 = d.data[i].2.max(0);
            d.data[i].3 = d.data[i].3.min(1);
        }
        for (a, b) in d.edges() {
            if d.data[a].3 == 1 && d.data[b].3 == 1 {
                d.data[b].3 = 0;
            }
        }
        for i in 0..n {
            let nb: i64 = (0..n).filter(|&j| d.adjacent(i, j)).map(|j| d.data[j].2).sum();
            let rhs = 2 * d.data[i].2 - nb;
            let lambda = d.data[i].1.max(0);
            d.data[i].1 = lambda;
            d.data[i].0 = lambda - rhs;
        }
        d
    })
}

#[test]
fn spec_examples() {
    let one = r#"{"vertices":["0"],"edges":[],"data":{"0":{"mu":0,"lambda":2,"m":1,"theta":0}}}"#;
    assert!(load_instance(one).is_ok());
    let both = r#"{"vertices":["0","1"],"edges":[{"from":"0","to":"1"}],
        "data":{"0":{"mu":0,"lambda":1,"m":1,"theta":1},"1":{"mu":0,"lambda":1,"m":1,"theta":1}}}"#;
    assert!(load_instance(both).unwrap_err().to_string().contains("theta adjacency violation"));
    let bad = r#"{"vertices":["0"],"edges":[],"data":{"0":{"mu":0,"lambda":3,"m":1,"theta":0}}}"#;
    assert!(load_instance(bad).unwrap_err().to_string().contains("coweight identity violation"));
    let shifted = r#"{"vertices":["0"],"edges":[],"data":{"0":{"mu":-2,"lambda":0,"m":1,"theta":0}}}"#;
    assert!(validate(&load_instance(shifted).unwrap(), true).is_empty());
    let a2 = r#"{"vertices":["0","1"],"edges":[{"from":"0","to":"1"}],
        "data":{"0":{"mu":0,"lambda":1,"m":1,"theta":1},"1":{"mu":0,"lambda":1,"m":1,"theta":0}}}"#;
    let inst = load_instance(a2).unwrap();
    assert!(validate(&inst, true).is_empty());
    assert_eq!(inst.cartan_entry("0", "0").unwrap(), 2);
    assert_eq!(inst.cartan_entry("0", "1").unwrap(), -1);
    assert!(matches!(inst.cartan_entry("0", "7"), Err(InstanceError::UnknownVertex(_))));
}

#[test]
fn non_strict_downgrades_coweight_only() {
    let bad = r#"{"vertices":["0"],"edges":[],"data":{"0":{"mu":0,"lambda":3,"m":1,"theta":0}}}"#;
    let inst = load_instance_with(bad, false).unwrap();
    let rep = validate(&inst, false);
    assert!(rep.errors.is_empty() && rep.warnings.len() == 1);
    let theta2 = r#"{"vertices":["0"],"edges":[],"data":{"0":{"mu":0,"lambda":2,"m":1,"theta":2}}}"#;
    assert!(load_instance_with(theta2, false).is_err());
}

#[test]
fn non_adjacent_entries_vanish() {
    let doc = r#"{"vertices":["a","b","c"],"edges":[{"from":"a","to":"b"},{"from":"c","to":"b"}],
        "data":{"a":{"mu":0,"lambda":1,"m":1,"theta":0},"b":{"mu":0,"lambda":0,"m":1,"theta":1},
                "c":{"mu":0,"lambda":1,"m":1,"theta":0}}}"#;
    let inst = load_instance(doc).unwrap();
    assert_eq!(inst.cartan_entry("a", "c").unwrap(), 0);
    assert_eq!(inst.cartan_entry("c", "b").unwrap(), -1);
}

proptest! {
    #[test]
    fn cartan_matrix_is_symmetric(d in arb_valid_doc()) {
        let inst = Instance::parse(&d.json()).unwrap();
        for i in 0..inst.len() {
            for j in 0..inst.len() {
                prop_assert_eq!(inst.a(i, j), inst.a(j, i));
                prop_assert_eq!(inst.a(i, j), inst.reversed().a(i, j));
            }
        }
    }

    #[test]
    fn validation_matches_invariants(d in arb_doc()) {
        let ok = d.invariants_hold();
        match load_instance(&d.json()) {
            Ok(inst) => {
                prop_assert!(ok);
                prop_assert!(validate(&inst, true).is_empty());
            }
            Err(_) => prop_assert!(!ok),
        }
    }

    #[test]
    fn valid_documents_load(d in arb_valid_doc()) {
        prop_assert!(d.invariants_hold());
        prop_assert!(load_instance(&d.json()).is_ok());
    }

    #[test]
    fn json_round_trip(d in arb_valid_doc()) {
        let inst = load_instance(&d.json()).unwrap();
        let back = Instance::parse(&inst.to_json()).unwrap();
        prop_assert_eq!(&back, &inst);
        prop_assert_eq!(back.digest(), inst.digest());
    }
}
