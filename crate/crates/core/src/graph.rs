//! Weighted graph model and the cycle-weight-preserving re-weightings used by
//! the directed solver.

use serde::Serialize;

use crate::error::{domain, precondition, Result};
use crate::group::{GroupElem, GroupSpec};

/// Read access shared by directed and undirected graphs. For undirected
/// graphs `edge(u, v) == edge(v, u)`.
pub trait WeightedAdjacency {
    fn group(&self) -> &GroupSpec;
    fn order(&self) -> usize;
    fn is_directed(&self) -> bool;
    fn edge(&self, u: usize, v: usize) -> Option<GroupElem>;
    fn vertex_weight(&self, v: usize) -> GroupElem;

    fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edge(u, v).is_some()
    }

    /// Weight of the walk `seq` (vertices plus consecutive edges), optionally
    /// closing it back to `seq[0]`. `None` if an edge is missing.
    fn walk_weight(&self, seq: &[usize], closed: bool) -> Option<GroupElem> {
        let g = self.group();
        let mut acc = g.zero();
        for &v in seq {
            acc = g.add(acc, self.vertex_weight(v));
        }
        for pair in seq.windows(2) {
            acc = g.add(acc, self.edge(pair[0], pair[1])?);
        }
        if closed && seq.len() >= 2 {
            acc = g.add(acc, self.edge(seq[seq.len() - 1], seq[0])?);
        }
        Some(acc)
    }
}

/// Directed simple graph with vertex and edge weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedDigraph {
    group: GroupSpec,
    n: usize,
    vertex_weight: Vec<GroupElem>,
    edges: Vec<Option<GroupElem>>,
    edge_count: usize,
}

impl WeightedDigraph {
    /// Graph on `n` vertices with no edges and zero vertex weights.
    pub fn empty(group: GroupSpec, n: usize) -> Self {
        WeightedDigraph {
            vertex_weight: vec![group.zero(); n],
            edges: vec![None; n * n],
            edge_count: 0,
            group,
            n,
        }
    }

    /// Complete digraph with every edge weight produced by `w(u, v)`.
    pub fn complete_with(group: GroupSpec, n: usize, mut w: impl FnMut(usize, usize) -> GroupElem) -> Self {
        let mut g = WeightedDigraph::empty(group, n);
        for u in 0..n {
            for v in 0..n {
                if u != v {
                    let x = w(u, v);
                    g.edges[u * n + v] = Some(x);
                }
            }
        }
        g.edge_count = n * n.saturating_sub(1);
        g
    }

    pub fn set_edge(&mut self, u: usize, v: usize, w: GroupElem) -> Result<()> {
        self.check_pair(u, v)?;
        let slot = &mut self.edges[u * self.n + v];
        if slot.is_none() {
            self.edge_count += 1;
        }
        *slot = Some(w);
        Ok(())
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        if u < self.n && v < self.n && self.edges[u * self.n + v].take().is_some() {
            self.edge_count -= 1;
        }
    }

    pub fn set_vertex_weight(&mut self, v: usize, w: GroupElem) -> Result<()> {
        if v >= self.n {
            return domain(format!("vertex {v} out of range"));
        }
        self.vertex_weight[v] = w;
        Ok(())
    }

    fn check_pair(&self, u: usize, v: usize) -> Result<()> {
        if u >= self.n || v >= self.n {
            return domain(format!("edge ({u},{v}) out of range for n={}", self.n));
        }
        if u == v {
            return domain(format!("self-loop at {u}"));
        }
        Ok(())
    }

    /// True when all `n(n-1)` ordered pairs carry an edge.
    pub fn is_complete(&self) -> bool {
        self.edge_count == self.n * self.n.saturating_sub(1)
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Edges `(u, v, w)` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, GroupElem)> + '_ {
        (0..self.n * self.n).filter_map(move |i| self.edges[i].map(|w| (i / self.n, i % self.n, w)))
    }

    pub fn vertex_weights(&self) -> &[GroupElem] {
        &self.vertex_weight
    }

    pub fn has_zero_vertex_weights(&self) -> bool {
        self.vertex_weight.iter().all(|&w| w == self.group.zero())
    }

    fn require_edge(&self, u: usize, v: usize) -> Result<GroupElem> {
        match self.edge(u, v) {
            Some(w) => Ok(w),
            None => domain(format!("missing edge {u}->{v}")),
        }
    }
}

impl WeightedAdjacency for WeightedDigraph {
    fn group(&self) -> &GroupSpec {
        &self.group
    }
    fn order(&self) -> usize {
        self.n
    }
    fn is_directed(&self) -> bool {
        true
    }
    #[inline]
    fn edge(&self, u: usize, v: usize) -> Option<GroupElem> {
        self.edges[u * self.n + v]
    }
    #[inline]
    fn vertex_weight(&self, v: usize) -> GroupElem {
        self.vertex_weight[v]
    }
}

/// Undirected simple graph with vertex and edge weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedGraph {
    group: GroupSpec,
    n: usize,
    vertex_weight: Vec<GroupElem>,
    edges: Vec<Option<GroupElem>>,
    edge_count: usize,
}

impl WeightedGraph {
    pub fn empty(group: GroupSpec, n: usize) -> Self {
        WeightedGraph {
            vertex_weight: vec![group.zero(); n],
            edges: vec![None; n * n],
            edge_count: 0,
            group,
            n,
        }
    }

    pub fn complete_with(group: GroupSpec, n: usize, mut w: impl FnMut(usize, usize) -> GroupElem) -> Self {
        let mut g = WeightedGraph::empty(group, n);
        for u in 0..n {
            for v in u + 1..n {
                let x = w(u, v);
                g.edges[u * n + v] = Some(x);
                g.edges[v * n + u] = Some(x);
            }
        }
        g.edge_count = n * n.saturating_sub(1) / 2;
        g
    }

    pub fn set_edge(&mut self, u: usize, v: usize, w: GroupElem) -> Result<()> {
        if u >= self.n || v >= self.n {
            return domain(format!("edge {{{u},{v}}} out of range for n={}", self.n));
        }
        if u == v {
            return domain(format!("self-loop at {u}"));
        }
        if self.edges[u * self.n + v].is_none() {
            self.edge_count += 1;
        }
        self.edges[u * self.n + v] = Some(w);
        self.edges[v * self.n + u] = Some(w);
        Ok(())
    }

    pub fn set_vertex_weight(&mut self, v: usize, w: GroupElem) -> Result<()> {
        if v >= self.n {
            return domain(format!("vertex {v} out of range"));
        }
        self.vertex_weight[v] = w;
        Ok(())
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Edges `(u, v, w)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, GroupElem)> + '_ {
        let n = self.n;
        (0..n).flat_map(move |u| (u + 1..n).filter_map(move |v| self.edges[u * n + v].map(|w| (u, v, w))))
    }

    pub fn vertex_weights(&self) -> &[GroupElem] {
        &self.vertex_weight
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&u| self.edges[v * self.n + u].is_some())
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors(v).count()
    }

    pub fn min_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    /// Copy of the graph with vertex `u` deleted. Returns the new graph and,
    /// for each new vertex index, its index in `self`.
    pub fn remove_vertex(&self, u: usize) -> (WeightedGraph, Vec<usize>) {
        let keep: Vec<usize> = (0..self.n).filter(|&v| v != u).collect();
        let mut g = WeightedGraph::empty(self.group.clone(), keep.len());
        for (i, &a) in keep.iter().enumerate() {
            g.vertex_weight[i] = self.vertex_weight[a];
            for (j, &b) in keep.iter().enumerate().skip(i + 1) {
                if let Some(w) = self.edge(a, b) {
                    g.set_edge(i, j, w).expect("indices in range");
                }
            }
        }
        (g, keep)
    }

    /// Symmetric orientation: each edge becomes two opposite arcs of the same
    /// weight, and each vertex weight is folded into its out-arcs. Directed
    /// cycles of length at least 3 keep their undirected weight.
    pub fn to_symmetric_digraph(&self) -> WeightedDigraph {
        let mut d = WeightedDigraph::empty(self.group.clone(), self.n);
        for (u, v, w) in self.edges() {
            d.set_edge(u, v, self.group.add(w, self.vertex_weight[u]))
                .expect("valid");
            d.set_edge(v, u, self.group.add(w, self.vertex_weight[v]))
                .expect("valid");
        }
        d
    }
}

impl WeightedAdjacency for WeightedGraph {
    fn group(&self) -> &GroupSpec {
        &self.group
    }
    fn order(&self) -> usize {
        self.n
    }
    fn is_directed(&self) -> bool {
        false
    }
    #[inline]
    fn edge(&self, u: usize, v: usize) -> Option<GroupElem> {
        self.edges[u * self.n + v]
    }
    #[inline]
    fn vertex_weight(&self, v: usize) -> GroupElem {
        self.vertex_weight[v]
    }
}

/// A simple cycle `vertices[0] -> ... -> vertices[l-1] -> vertices[0]` and its weight.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CycleWitness {
    pub vertices: Vec<usize>,
    pub directed: bool,
    #[serde(skip)]
    pub weight: GroupElem,
}

/// A simple path `vertices[0] -> ... -> vertices[last]` and its weight.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PathWitness {
    pub vertices: Vec<usize>,
    #[serde(skip)]
    pub weight: GroupElem,
}

impl PathWitness {
    pub fn source(&self) -> usize {
        self.vertices[0]
    }
    pub fn target(&self) -> usize {
        *self.vertices.last().expect("non-empty path")
    }
}

/// `r` paths sharing endpoints with pairwise-distinct weights.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PathFamily {
    pub source: usize,
    pub target: usize,
    pub paths: Vec<PathWitness>,
}

/// Fold every vertex weight into the arcs leaving the vertex. Directed cycle
/// weights are unchanged and the result has all vertex weights zero.
pub fn normalize_vertex_weights(g: &WeightedDigraph) -> WeightedDigraph {
    let grp = g.group().clone();
    let mut out = WeightedDigraph::empty(grp.clone(), g.order());
    for (u, v, w) in g.edges() {
        out.set_edge(u, v, grp.add(w, g.vertex_weight(u))).expect("valid");
    }
    out
}

/// `w'(xy) = w(xy) + w(yu) - w(xu)` on the arcs between vertices other than
/// the sink `u` and those listed in `avoid`. Other arcs are dropped. Cycles
/// avoiding `u` keep their weight.
pub fn derived_weighting(g: &WeightedDigraph, u: usize, avoid: &[usize]) -> Result<WeightedDigraph> {
    if !g.has_zero_vertex_weights() {
        return precondition("derived weighting needs zero vertex weights");
    }
    if u >= g.order() {
        return domain(format!("vertex {u} out of range"));
    }
    let grp = g.group();
    let kept: Vec<usize> = (0..g.order()).filter(|&x| x != u && !avoid.contains(&x)).collect();
    let mut out = WeightedDigraph::empty(grp.clone(), g.order());
    for &x in &kept {
        let xu = g.require_edge(x, u)?;
        for &y in &kept {
            if x == y {
                continue;
            }
            if let Some(xy) = g.edge(x, y) {
                let yu = g.require_edge(y, u)?;
                out.set_edge(x, y, grp.sub(grp.add(xy, yu), xu))?;
            }
        }
    }
    Ok(out)
}

/// Quotient of the derived weighting by a divisor `d` of `k`: a graph over
/// `Z_{k/d}` with `w'(xy) = (w(xy) + w(yu) - w(xu)) / d`. A zero cycle of the
/// quotient is a zero cycle of `g`.
pub fn quotient_weighting(g: &WeightedDigraph, u: usize, d: u32, avoid: &[usize]) -> Result<WeightedDigraph> {
    let Some(k) = g.group().cyclic_modulus() else {
        return domain("quotient weighting needs a cyclic group");
    };
    if d < 2 || d >= k || k % d != 0 {
        return domain(format!("{d} is not a proper divisor of {k}"));
    }
    let derived = derived_weighting(g, u, avoid)?;
    let q = GroupSpec::cyclic(k / d)?;
    let mut out = WeightedDigraph::empty(q.clone(), g.order());
    for (x, y, w) in derived.edges() {
        if w.index() % d != 0 {
            return precondition(format!(
                "derived weight {} of pair ({x},{y}) is not a multiple of {d}",
                w.index()
            ));
        }
        out.set_edge(x, y, q.elem((w.index() / d) as i64))?;
    }
    Ok(out)
}
