//! Instances shared by the integration tests.
#![allow(dead_code)]

use igklo_core::cartan::{instance, Instance};

/// Rank-1 data `(lambda, mu, m, theta)`.
pub const RANK1: [(i64, i64, i64, i64); 5] = [(2, 0, 1, 0), (4, 0, 2, 0), (2, 0, 1, 1), (2, -2, 2, 0), (0, -2, 1, 0)];

pub fn rank1(lambda: i64, mu: i64, m: i64, theta: i64) -> Instance {
    instance(&[], &[(mu, lambda, m, theta)]).unwrap()
}

pub fn rank1_all() -> Vec<(String, Instance)> {
    RANK1.iter().map(|&(l, mu, m, t)| (format!("rank1({l},{mu},{m},{t})"), rank1(l, mu, m, t))).collect()
}

/// A2 with `m = (1,1)`, `lambda = (1,1)`, `theta = (1,0)`; `forward` orients 0 -> 1.
pub fn a2_theta(forward: bool) -> Instance {
    let e = if forward { (0, 1) } else { (1, 0) };
    instance(&[e], &[(0, 1, 1, 1), (0, 1, 1, 0)]).unwrap()
}

/// A2 with `m = (2,1)`, `lambda = (3,0)`, `theta = 0`.
pub fn a2_wide(forward: bool) -> Instance {
    let e = if forward { (0, 1) } else { (1, 0) };
    instance(&[e], &[(0, 3, 2, 0), (0, 0, 1, 0)]).unwrap()
}

/// Path 0 - 1 - 2 with `m = (1,1,1)`, `lambda = (1,0,1)`, `theta = (0,1,0)`.
pub fn a3() -> Instance {
    instance(&[(0, 1), (1, 2)], &[(0, 1, 1, 0), (0, 0, 1, 1), (0, 1, 1, 0)]).unwrap()
}

pub fn a2_all() -> Vec<(String, Instance)> {
    vec![
        ("A2 theta=(1,0) 0->1".into(), a2_theta(true)),
        ("A2 theta=(1,0) 1->0".into(), a2_theta(false)),
        ("A2 m=(2,1) 0->1".into(), a2_wide(true)),
        ("A2 m=(2,1) 1->0".into(), a2_wide(false)),
    ]
}

pub fn all() -> Vec<(String, Instance)> {
    let mut v = rank1_all();
    v.extend(a2_all());
    v.push(("A3 path".into(), a3()));
    v
}
