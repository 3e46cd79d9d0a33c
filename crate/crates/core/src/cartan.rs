//! Instances: an oriented simply-laced graph with per-vertex integers
//! `(mu, lambda, m, theta)`, plus parsing, validation and Cartan queries.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexData {
    pub mu: i64,
    pub lambda: i64,
    pub m: i64,
    pub theta: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeDoc {
    from: String,
    to: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceDoc {
    vertices: Vec<String>,
    edges: Vec<EdgeDoc>,
    data: BTreeMap<String, VertexData>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InstanceError {
    #[error("malformed document: {0}")]
    Malformed(String),
    #[error("unknown vertex '{0}'")]
    UnknownVertex(String),
    #[error("duplicate vertex '{0}'")]
    DuplicateVertex(String),
    #[error("duplicate edge between '{0}' and '{1}'")]
    DuplicateEdge(String, String),
    #[error("self-loop at '{0}'")]
    SelfLoop(String),
    #[error("negative {field} at vertex '{vertex}'")]
    Negative { field: &'static str, vertex: String },
    #[error("missing data for vertex '{0}'")]
    MissingData(String),
    #[error("{0}")]
    Invalid(ValidationReport),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    ThetaAdjacency { i: String, j: String },
    CoweightIdentity { vertex: String, lhs: i64, rhs: i64 },
    NegativeM { vertex: String },
    NegativeLambda { vertex: String },
    ThetaRange { vertex: String, theta: i64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ThetaAdjacency { i, j } => {
                write!(f, "theta adjacency violation: theta_{i} * theta_{j} != 0 on edge {{{i},{j}}}")
            }
            Violation::CoweightIdentity { vertex, lhs, rhs } => write!(
                f,
                "coweight identity violation at '{vertex}': lambda - mu = {lhs}, 2m - sum of neighbour m = {rhs}"
            ),
            Violation::NegativeM { vertex } => write!(f, "negative m at '{vertex}'"),
            Violation::NegativeLambda { vertex } => write!(f, "negative lambda at '{vertex}'"),
            Violation::ThetaRange { vertex, theta } => write!(f, "theta at '{vertex}' is {theta}, expected 0 or 1"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct ValidationReport {
    pub errors: Vec<Violation>,
    pub warnings: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.errors.is_empty() && self.warnings.is_empty()
    }

    pub fn is_ok(&self) -> bool {
        self.errors.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .errors
            .iter()
            .map(|v| v.to_string())
            .chain(self.warnings.iter().map(|v| format!("warning: {v}")))
            .collect();
        write!(f, "{}", parts.join("; "))
    }
}

/// Vertex order is the order of `vertices` in the source document and fixes
/// the symbol order everywhere downstream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    vertices: Vec<String>,
    edges: Vec<(usize, usize)>,
    data: Vec<VertexData>,
}

impl Instance {
    /// Builds an instance from parts, checking only structural well-formedness.
    pub fn from_parts(
        vertices: Vec<String>,
        edges: Vec<(String, String)>,
        data: BTreeMap<String, VertexData>,
    ) -> Result<Instance, InstanceError> {
        let mut index = BTreeMap::new();
        for (k, v) in vertices.iter().enumerate() {
            if index.insert(v.clone(), k).is_some() {
                return Err(InstanceError::DuplicateVertex(v.clone()));
            }
        }
        for key in data.keys() {
            if !index.contains_key(key) {
                return Err(InstanceError::UnknownVertex(key.clone()));
            }
        }
        let mut seen = BTreeSet::new();
        let mut out_edges = Vec::new();
        for (a, b) in edges {
            let ia = *index.get(&a).ok_or_else(|| InstanceError::UnknownVertex(a.clone()))?;
            let ib = *index.get(&b).ok_or_else(|| InstanceError::UnknownVertex(b.clone()))?;
            if ia == ib {
                return Err(InstanceError::SelfLoop(a));
            }
            if !seen.insert((ia.min(ib), ia.max(ib))) {
                return Err(InstanceError::DuplicateEdge(a, b));
            }
            out_edges.push((ia, ib));
        }
        let mut vd = Vec::with_capacity(vertices.len());
        for v in &vertices {
            let d = data.get(v).cloned().ok_or_else(|| InstanceError::MissingData(v.clone()))?;
            if d.m < 0 {
                return Err(InstanceError::Negative { field: "m", vertex: v.clone() });
            }
            if d.lambda < 0 {
                return Err(InstanceError::Negative { field: "lambda", vertex: v.clone() });
            }
            vd.push(d);
        }
        Ok(Instance { vertices, edges: out_edges, data: vd })
    }

    /// Parses without the invariant checks of [`validate`].
    pub fn parse(doc: &str) -> Result<Instance, InstanceError> {
        let d: InstanceDoc = serde_json::from_str(doc).map_err(|e| InstanceError::Malformed(e.to_string()))?;
        Instance::from_parts(d.vertices, d.edges.into_iter().map(|e| (e.from, e.to)).collect(), d.data)
    }

    pub fn to_json(&self) -> String {
        let doc = InstanceDoc {
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .map(|&(a, b)| EdgeDoc { from: self.vertices[a].clone(), to: self.vertices[b].clone() })
                .collect(),
            data: self.vertices.iter().cloned().zip(self.data.iter().cloned()).collect(),
        };
        serde_json::to_string(&doc).expect("instance serializes")
    }

    /// Stable FNV-1a digest of the canonical JSON form.
    pub fn digest(&self) -> String {
        let mut h: u64 = 0xcbf29ce484222325;
        for b in self.to_json().bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
        format!("{h:016x}")
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn id(&self, i: usize) -> &str {
        &self.vertices[i]
    }

    pub fn index_of(&self, v: &str) -> Result<usize, InstanceError> {
        self.vertices.iter().position(|x| x == v).ok_or_else(|| InstanceError::UnknownVertex(v.to_string()))
    }

    pub fn data(&self, i: usize) -> &VertexData {
        &self.data[i]
    }

    pub fn mu(&self, i: usize) -> i64 {
        self.data[i].mu
    }

    pub fn lambda(&self, i: usize) -> i64 {
        self.data[i].lambda
    }

    pub fn m(&self, i: usize) -> usize {
        self.data[i].m as usize
    }

    pub fn theta(&self, i: usize) -> i64 {
        self.data[i].theta
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.edges.iter().any(|&(a, b)| (a == i && b == j) || (a == j && b == i))
    }

    /// Orientation `i -> j`.
    pub fn arrow(&self, i: usize, j: usize) -> bool {
        self.edges.contains(&(i, j))
    }

    pub fn neighbors(&self, i: usize) -> Vec<usize> {
        (0..self.len()).filter(|&j| self.adjacent(i, j)).collect()
    }

    pub fn a(&self, i: usize, j: usize) -> i32 {
        if i == j {
            2
        } else if self.adjacent(i, j) {
            -1
        } else {
            0
        }
    }

    /// Generalized Cartan matrix entry by vertex id.
    pub fn cartan_entry(&self, i: &str, j: &str) -> Result<i32, InstanceError> {
        Ok(self.a(self.index_of(i)?, self.index_of(j)?))
    }

    /// Same graph and data with every edge reversed.
    pub fn reversed(&self) -> Instance {
        Instance {
            vertices: self.vertices.clone(),
            edges: self.edges.iter().map(|&(a, b)| (b, a)).collect(),
            data: self.data.clone(),
        }
    }
}

/// Lists every violated invariant. With `strict` off, the coweight identity
/// is reported as a warning.
pub fn validate(inst: &Instance, strict: bool) -> ValidationReport {
    let mut rep = ValidationReport::default();
    for i in 0..inst.len() {
        let d = inst.data(i);
        let v = inst.id(i).to_string();
        if d.m < 0 {
            rep.errors.push(Violation::NegativeM { vertex: v.clone() });
        }
        if d.lambda < 0 {
            rep.errors.push(Violation::NegativeLambda { vertex: v.clone() });
        }
        if d.theta != 0 && d.theta != 1 {
            rep.errors.push(Violation::ThetaRange { vertex: v.clone(), theta: d.theta });
        }
        let rhs = 2 * d.m - inst.neighbors(i).iter().map(|&j| inst.data(j).m).sum::<i64>();
        let lhs = d.lambda - d.mu;
        if lhs != rhs {
            let viol = Violation::CoweightIdentity { vertex: v, lhs, rhs };
            if strict {
                rep.errors.push(viol);
            } else {
                rep.warnings.push(viol);
            }
        }
    }
    for &(a, b) in inst.edges() {
        if inst.theta(a) * inst.theta(b) != 0 {
            rep.errors.push(Violation::ThetaAdjacency { i: inst.id(a).to_string(), j: inst.id(b).to_string() });
        }
    }
    rep
}

/// Parses and validates strictly.
pub fn load_instance(doc: &str) -> Result<Instance, InstanceError> {
    load_instance_with(doc, true)
}

pub fn load_instance_with(doc: &str, strict: bool) -> Result<Instance, InstanceError> {
    let inst = Instance::parse(doc)?;
    let rep = validate(&inst, strict);
    if !rep.is_ok() {
        return Err(InstanceError::Invalid(rep));
    }
    Ok(inst)
}

/// Convenience constructor used by tests and examples: vertices `"0".."n-1"`,
/// edges given by index pairs, data as `(mu, lambda, m, theta)`.
pub fn instance(edges: &[(usize, usize)], data: &[(i64, i64, i64, i64)]) -> Result<Instance, InstanceError> {
    let vertices: Vec<String> = (0..data.len()).map(|k| k.to_string()).collect();
    let map = vertices
        .iter()
        .cloned()
        .zip(data.iter().map(|&(mu, lambda, m, theta)| VertexData { mu, lambda, m, theta }))
        .collect();
    let e = edges.iter().map(|&(a, b)| (a.to_string(), b.to_string())).collect();
    let inst = Instance::from_parts(vertices, e, map)?;
    let rep = validate(&inst, true);
    if !rep.is_ok() {
        return Err(InstanceError::Invalid(rep));
    }
    Ok(inst)
}
