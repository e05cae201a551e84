//! JSON graph documents.
//!
//! ```json
//! {"directed":true,"group":[5],"n":2,"vertex_weights":[[0],[0]],"edges":[[0,1,[1]],[1,0,[4]]]}
//! ```
//!
//! Vertices are 0-indexed, undirected edges are stored with `u < v`, and the
//! serializer emits fields in the order above with edges sorted.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{WeightedAdjacency, WeightedDigraph, WeightedGraph};
use crate::group::{GroupElem, GroupSpec};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CodecError {
    #[error("malformed JSON at line {line}, column {column}: {msg}")]
    Malformed { line: usize, column: usize, msg: String },
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("{what}: residue vector {residues:?} does not fit group {group:?}")]
    ResidueOutOfRange {
        what: String,
        residues: Vec<i64>,
        group: Vec<u32>,
    },
    #[error("vertex {vertex} out of range (n = {n}) in {what}")]
    VertexOutOfRange { what: String, vertex: i64, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0},{1})")]
    DuplicateEdge(usize, usize),
    #[error("expected {expected} vertex weights, found {found}")]
    VertexCountMismatch { expected: usize, found: usize },
}

impl CodecError {
    /// Stable short code for each failure kind.
    pub fn code(&self) -> &'static str {
        match self {
            CodecError::Malformed { .. } => "malformed-json",
            CodecError::InvalidGroup(_) => "invalid-group",
            CodecError::ResidueOutOfRange { .. } => "residue-out-of-range",
            CodecError::VertexOutOfRange { .. } => "vertex-out-of-range",
            CodecError::SelfLoop(_) => "self-loop",
            CodecError::DuplicateEdge(..) => "duplicate-edge",
            CodecError::VertexCountMismatch { .. } => "vertex-count-mismatch",
        }
    }
}

/// A parsed graph document of either orientation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnyGraph {
    Directed(WeightedDigraph),
    Undirected(WeightedGraph),
}

impl AnyGraph {
    pub fn group(&self) -> &GroupSpec {
        match self {
            AnyGraph::Directed(g) => g.group(),
            AnyGraph::Undirected(g) => g.group(),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    directed: bool,
    group: Vec<i64>,
    n: usize,
    vertex_weights: Vec<Vec<i64>>,
    edges: Vec<(i64, i64, Vec<i64>)>,
}

pub fn parse(text: &str) -> Result<AnyGraph, CodecError> {
    let doc: Document = serde_json::from_str(text).map_err(|e| CodecError::Malformed {
        line: e.line(),
        column: e.column(),
        msg: e.to_string(),
    })?;
    let factors = doc
        .group
        .iter()
        .map(|&f| u32::try_from(f).map_err(|_| CodecError::InvalidGroup(format!("factor {f}"))))
        .collect::<Result<Vec<_>, _>>()?;
    let group = GroupSpec::new(factors.clone()).map_err(|e| CodecError::InvalidGroup(e.to_string()))?;
    let n = doc.n;
    if doc.vertex_weights.len() != n {
        return Err(CodecError::VertexCountMismatch {
            expected: n,
            found: doc.vertex_weights.len(),
        });
    }
    let elem = |what: String, r: &[i64]| -> Result<GroupElem, CodecError> {
        group.from_residues(r).map_err(|_| CodecError::ResidueOutOfRange {
            what,
            residues: r.to_vec(),
            group: factors.clone(),
        })
    };
    let vertex = |what: &str, v: i64| -> Result<usize, CodecError> {
        if v < 0 || v as usize >= n {
            Err(CodecError::VertexOutOfRange {
                what: what.to_string(),
                vertex: v,
                n,
            })
        } else {
            Ok(v as usize)
        }
    };

    let mut weights = Vec::with_capacity(n);
    for (i, r) in doc.vertex_weights.iter().enumerate() {
        weights.push(elem(format!("vertex {i}"), r)?);
    }
    let mut seen = vec![false; n * n];
    let mut edges = Vec::with_capacity(doc.edges.len());
    for (idx, (u, v, r)) in doc.edges.iter().enumerate() {
        let what = format!("edge #{idx}");
        let (u, v) = (vertex(&what, *u)?, vertex(&what, *v)?);
        if u == v {
            return Err(CodecError::SelfLoop(u));
        }
        let key = if doc.directed { (u, v) } else { (u.min(v), u.max(v)) };
        if std::mem::replace(&mut seen[key.0 * n + key.1], true) {
            return Err(CodecError::DuplicateEdge(key.0, key.1));
        }
        edges.push((key.0, key.1, elem(what, r)?));
    }

    Ok(if doc.directed {
        let mut g = WeightedDigraph::empty(group, n);
        for (v, w) in weights.into_iter().enumerate() {
            g.set_vertex_weight(v, w).expect("in range");
        }
        for (u, v, w) in edges {
            g.set_edge(u, v, w).expect("validated");
        }
        AnyGraph::Directed(g)
    } else {
        let mut g = WeightedGraph::empty(group, n);
        for (v, w) in weights.into_iter().enumerate() {
            g.set_vertex_weight(v, w).expect("in range");
        }
        for (u, v, w) in edges {
            g.set_edge(u, v, w).expect("validated");
        }
        AnyGraph::Undirected(g)
    })
}

fn residues(g: &GroupSpec, e: GroupElem) -> Vec<i64> {
    g.residues(e).into_iter().map(i64::from).collect()
}

fn document<G: WeightedAdjacency>(g: &G, edges: Vec<(usize, usize, GroupElem)>) -> Document {
    let grp = g.group();
    Document {
        directed: g.is_directed(),
        group: grp.factors().iter().map(|&f| f as i64).collect(),
        n: g.order(),
        vertex_weights: (0..g.order()).map(|v| residues(grp, g.vertex_weight(v))).collect(),
        edges: edges
            .into_iter()
            .map(|(u, v, w)| (u as i64, v as i64, residues(grp, w)))
            .collect(),
    }
}

pub fn to_value(g: &AnyGraph) -> serde_json::Value {
    let doc = match g {
        AnyGraph::Directed(d) => document(d, d.edges().collect()),
        AnyGraph::Undirected(u) => document(u, u.edges().collect()),
    };
    serde_json::to_value(doc).expect("documents always serialize")
}

pub fn serialize(g: &AnyGraph) -> String {
    match g {
        AnyGraph::Directed(d) => serialize_digraph(d),
        AnyGraph::Undirected(u) => serialize_graph(u),
    }
}

pub fn serialize_digraph(g: &WeightedDigraph) -> String {
    serde_json::to_string(&document(g, g.edges().collect())).expect("documents always serialize")
}

pub fn serialize_graph(g: &WeightedGraph) -> String {
    serde_json::to_string(&document(g, g.edges().collect())).expect("documents always serialize")
}
