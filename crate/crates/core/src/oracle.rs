//! Brute-force ground truth: simple-cycle and path enumeration, zero-cycle
//! search, distinct-weight path families, heavy triples and single-weight
//! Hamiltonian paths.
//!
//! Every search is a depth-first enumeration in fixed vertex order, so equal
//! inputs give equal answers. Running out of budget is reported as
//! [`Search::BudgetExceeded`], never as a negative answer.

use std::collections::HashSet;
use std::ops::ControlFlow;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::error::{domain, Result};
use crate::graph::{CycleWitness, PathFamily, PathWitness, WeightedAdjacency, WeightedDigraph};
use crate::group::GroupElem;

/// Limits for a single enumeration. A node is one path extension.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_nodes: u64,
    pub deadline: Option<Instant>,
}

impl SearchBudget {
    pub fn unlimited() -> Self {
        SearchBudget {
            max_nodes: u64::MAX,
            deadline: None,
        }
    }

    pub fn nodes(max_nodes: u64) -> Self {
        SearchBudget {
            max_nodes: max_nodes.max(1),
            deadline: None,
        }
    }

    pub fn with_timeout(mut self, d: Duration) -> Self {
        self.deadline = Some(Instant::now() + d);
        self
    }
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget::unlimited()
    }
}

/// Three-way search result.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Search<T> {
    Found(T),
    /// The whole space was enumerated without a hit.
    Exhausted,
    /// Out of budget before the space was covered; nothing is known.
    BudgetExceeded,
}

impl<T> Search<T> {
    pub fn found(self) -> Option<T> {
        match self {
            Search::Found(t) => Some(t),
            _ => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, Search::Found(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            Search::Found(_) => "found",
            Search::Exhausted => "none",
            Search::BudgetExceeded => "unknown",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub cycles: u64,
}

struct Meter {
    budget: SearchBudget,
    nodes: u64,
}

impl Meter {
    fn new(budget: SearchBudget) -> Self {
        Meter { budget, nodes: 0 }
    }

    /// Count a node; `true` when the budget is spent.
    #[inline]
    fn tick(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes > self.budget.max_nodes {
            return true;
        }
        if self.nodes & 0xfff == 0 {
            if let Some(d) = self.budget.deadline {
                return Instant::now() >= d;
            }
        }
        false
    }
}

enum Stop {
    Budget,
    Visitor,
}

fn all_vertices<G: WeightedAdjacency>(g: &G) -> Vec<usize> {
    (0..g.order()).collect()
}

fn membership(n: usize, verts: &[usize]) -> Vec<bool> {
    let mut m = vec![false; n];
    for &v in verts {
        m[v] = true;
    }
    m
}

struct CycleDfs<'a, G, F> {
    g: &'a G,
    allowed: Vec<bool>,
    on_path: Vec<bool>,
    path: Vec<usize>,
    root: usize,
    min_len: usize,
    max_len: usize,
    meter: Meter,
    cycles: u64,
    visit: F,
}

impl<G: WeightedAdjacency, F: FnMut(&[usize], GroupElem) -> ControlFlow<()>> CycleDfs<'_, G, F> {
    fn extend(&mut self, cur: usize, acc: GroupElem) -> ControlFlow<Stop> {
        let grp = self.g.group();
        let len = self.path.len();
        if len >= self.min_len {
            if let Some(back) = self.g.edge(cur, self.root) {
                // An undirected cycle is reported in one orientation only.
                let canonical = self.g.is_directed() || self.path[1] < self.path[len - 1];
                if canonical {
                    self.cycles += 1;
                    let w = grp.add(acc, back);
                    if (self.visit)(&self.path, w).is_break() {
                        return ControlFlow::Break(Stop::Visitor);
                    }
                }
            }
        }
        if len >= self.max_len {
            return ControlFlow::Continue(());
        }
        for next in self.root + 1..self.g.order() {
            if !self.allowed[next] || self.on_path[next] {
                continue;
            }
            let Some(w) = self.g.edge(cur, next) else { continue };
            if self.meter.tick() {
                return ControlFlow::Break(Stop::Budget);
            }
            self.on_path[next] = true;
            self.path.push(next);
            let acc2 = grp.add(grp.add(acc, w), self.g.vertex_weight(next));
            let r = self.extend(next, acc2);
            self.path.pop();
            self.on_path[next] = false;
            r?;
        }
        ControlFlow::Continue(())
    }
}

/// Visit every simple cycle inside `verts` with `min_len <= length <= max_len`,
/// once each, rooted at its smallest vertex. Returns `Exhausted` when the
/// enumeration completed, `Found(())` when the visitor stopped it.
pub fn visit_cycles<G, F>(
    g: &G,
    verts: &[usize],
    min_len: usize,
    max_len: usize,
    budget: SearchBudget,
    visit: F,
) -> (Search<()>, SearchStats)
where
    G: WeightedAdjacency,
    F: FnMut(&[usize], GroupElem) -> ControlFlow<()>,
{
    let n = g.order();
    let mut sorted = verts.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut dfs = CycleDfs {
        g,
        allowed: membership(n, &sorted),
        on_path: vec![false; n],
        path: Vec::with_capacity(n),
        root: 0,
        min_len: min_len.max(2),
        max_len,
        meter: Meter::new(budget),
        cycles: 0,
        visit,
    };
    let mut result = Search::Exhausted;
    for &root in &sorted {
        dfs.root = root;
        dfs.path.clear();
        dfs.path.push(root);
        dfs.on_path[root] = true;
        let flow = dfs.extend(root, g.vertex_weight(root));
        dfs.on_path[root] = false;
        match flow {
            ControlFlow::Continue(()) => {}
            ControlFlow::Break(Stop::Visitor) => {
                result = Search::Found(());
                break;
            }
            ControlFlow::Break(Stop::Budget) => {
                result = Search::BudgetExceeded;
                break;
            }
        }
    }
    let stats = SearchStats {
        nodes: dfs.meter.nodes,
        cycles: dfs.cycles,
    };
    (result, stats)
}

fn check_min_len<G: WeightedAdjacency>(g: &G, min_len: usize) -> Result<()> {
    let floor = if g.is_directed() { 2 } else { 3 };
    if min_len < floor {
        return domain(format!(
            "min_len must be at least {floor} for {} graphs, got {min_len}",
            if g.is_directed() { "directed" } else { "undirected" }
        ));
    }
    Ok(())
}

/// Zero cycle of length at least `min_len`, with search statistics.
pub fn find_zero_cycle_with_stats<G: WeightedAdjacency>(
    g: &G,
    verts: &[usize],
    min_len: usize,
    max_len: usize,
    budget: SearchBudget,
) -> Result<(Search<CycleWitness>, SearchStats)> {
    check_min_len(g, min_len)?;
    let zero = g.group().zero();
    let mut hit: Option<Vec<usize>> = None;
    let (res, stats) = visit_cycles(g, verts, min_len, max_len, budget, |seq, w| {
        if w == zero {
            hit = Some(seq.to_vec());
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    let out = match res {
        Search::Found(()) => Search::Found(CycleWitness {
            vertices: hit.expect("visitor recorded the cycle"),
            directed: g.is_directed(),
            weight: zero,
        }),
        Search::Exhausted => Search::Exhausted,
        Search::BudgetExceeded => Search::BudgetExceeded,
    };
    Ok((out, stats))
}

/// A simple cycle of length at least `min_len` whose weight (edges plus
/// vertices) is the identity.
pub fn find_zero_cycle<G: WeightedAdjacency>(
    g: &G,
    min_len: usize,
    budget: SearchBudget,
) -> Result<Search<CycleWitness>> {
    let verts = all_vertices(g);
    Ok(find_zero_cycle_with_stats(g, &verts, min_len, usize::MAX, budget)?.0)
}

/// Like [`find_zero_cycle`] but restricted to the subgraph induced by `verts`.
pub fn find_zero_cycle_in<G: WeightedAdjacency>(
    g: &G,
    verts: &[usize],
    min_len: usize,
    budget: SearchBudget,
) -> Result<Search<CycleWitness>> {
    Ok(find_zero_cycle_with_stats(g, verts, min_len, usize::MAX, budget)?.0)
}

/// Number of simple cycles of length at least `min_len` (each counted once).
pub fn count_cycles<G: WeightedAdjacency>(g: &G, min_len: usize) -> u64 {
    let verts = all_vertices(g);
    visit_cycles(g, &verts, min_len, usize::MAX, SearchBudget::unlimited(), |_, _| {
        ControlFlow::Continue(())
    })
    .1
    .cycles
}

struct PathDfs<'a, G, F> {
    g: &'a G,
    allowed: Vec<bool>,
    on_path: Vec<bool>,
    path: Vec<usize>,
    target: usize,
    min_order: usize,
    meter: Meter,
    visit: F,
}

impl<G: WeightedAdjacency, F: FnMut(&[usize], GroupElem) -> ControlFlow<()>> PathDfs<'_, G, F> {
    fn extend(&mut self, cur: usize, acc: GroupElem) -> ControlFlow<Stop> {
        let grp = self.g.group();
        for next in 0..self.g.order() {
            if !self.allowed[next] || self.on_path[next] {
                continue;
            }
            let Some(w) = self.g.edge(cur, next) else { continue };
            if self.meter.tick() {
                return ControlFlow::Break(Stop::Budget);
            }
            let acc2 = grp.add(grp.add(acc, w), self.g.vertex_weight(next));
            self.path.push(next);
            let r = if next == self.target {
                if self.path.len() >= self.min_order && (self.visit)(&self.path, acc2).is_break() {
                    ControlFlow::Break(Stop::Visitor)
                } else {
                    ControlFlow::Continue(())
                }
            } else {
                self.on_path[next] = true;
                let r = self.extend(next, acc2);
                self.on_path[next] = false;
                r
            };
            self.path.pop();
            r?;
        }
        ControlFlow::Continue(())
    }
}

/// Visit every simple `from`-`to` path with at least `min_order` vertices,
/// all inside `verts` (which must contain both endpoints).
pub fn visit_paths<G, F>(
    g: &G,
    from: usize,
    to: usize,
    verts: &[usize],
    min_order: usize,
    budget: SearchBudget,
    visit: F,
) -> Search<()>
where
    G: WeightedAdjacency,
    F: FnMut(&[usize], GroupElem) -> ControlFlow<()>,
{
    let n = g.order();
    let mut dfs = PathDfs {
        g,
        allowed: membership(n, verts),
        on_path: vec![false; n],
        path: vec![from],
        target: to,
        min_order: min_order.max(2),
        meter: Meter::new(budget),
        visit,
    };
    if from == to || !dfs.allowed[from] || !dfs.allowed[to] {
        return Search::Exhausted;
    }
    dfs.on_path[from] = true;
    match dfs.extend(from, g.vertex_weight(from)) {
        ControlFlow::Continue(()) => Search::Exhausted,
        ControlFlow::Break(Stop::Visitor) => Search::Found(()),
        ControlFlow::Break(Stop::Budget) => Search::BudgetExceeded,
    }
}

/// Result of a distinct-weight path search.
#[derive(Clone, Debug)]
pub struct PathSearch {
    pub outcome: Search<PathFamily>,
    /// One path per achieved weight, in discovery order. When no family was
    /// found and the search was not cut short this is the full weight set.
    pub achieved: Vec<PathWitness>,
}

impl PathSearch {
    pub fn achieved_weights(&self) -> Vec<GroupElem> {
        self.achieved.iter().map(|p| p.weight).collect()
    }
}

/// `r` simple `v`-`u` paths of order at least `min_order` inside `verts` with
/// pairwise-distinct weights. Stops as soon as `r` weights are seen.
pub fn distinct_weight_paths_in<G: WeightedAdjacency>(
    g: &G,
    v: usize,
    u: usize,
    r: usize,
    verts: &[usize],
    min_order: usize,
    budget: SearchBudget,
) -> Result<PathSearch> {
    if v == u {
        return domain("path endpoints must differ");
    }
    if v >= g.order() || u >= g.order() {
        return domain("path endpoint out of range");
    }
    let mut seen = vec![false; g.group().order() as usize];
    let mut achieved: Vec<PathWitness> = Vec::new();
    let res = visit_paths(g, v, u, verts, min_order, budget, |seq, w| {
        if !std::mem::replace(&mut seen[w.index() as usize], true) {
            achieved.push(PathWitness {
                vertices: seq.to_vec(),
                weight: w,
            });
            if achieved.len() >= r {
                return ControlFlow::Break(());
            }
        }
        ControlFlow::Continue(())
    });
    let outcome = match res {
        _ if achieved.len() >= r => Search::Found(PathFamily {
            source: v,
            target: u,
            paths: achieved[..r].to_vec(),
        }),
        Search::BudgetExceeded => Search::BudgetExceeded,
        _ => Search::Exhausted,
    };
    Ok(PathSearch { outcome, achieved })
}

/// Directed form: paths of order at least 3 over the whole graph.
pub fn distinct_weight_paths(
    g: &WeightedDigraph,
    v: usize,
    u: usize,
    r: usize,
    budget: SearchBudget,
) -> Result<PathSearch> {
    if !g.has_zero_vertex_weights() {
        return crate::error::precondition("distinct_weight_paths needs zero vertex weights");
    }
    let verts = all_vertices(g);
    distinct_weight_paths_in(g, v, u, r, &verts, 3, budget)
}

/// `w'(xy) = w'(yz) = c`, `w'(xz) = -c` with `c` one of `a`, `-a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HeavyTriple {
    pub x: usize,
    pub y: usize,
    pub z: usize,
    #[serde(serialize_with = "ser_elem")]
    pub c: GroupElem,
}

fn ser_elem<S: serde::Serializer>(e: &GroupElem, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_u32(e.index())
}

/// Scan ordered triples of `verts` for a heavy triple. Every arc weight
/// among `verts` must lie in `{0, a, -a}`.
pub fn find_heavy_triple(w: &WeightedDigraph, verts: &[usize], a: GroupElem) -> Result<Option<HeavyTriple>> {
    let grp = w.group();
    let neg_a = grp.neg(a);
    let zero = grp.zero();
    for &x in verts {
        for &y in verts {
            if x == y {
                continue;
            }
            let Some(e) = w.edge(x, y) else {
                return domain(format!("missing arc {x}->{y}"));
            };
            if e != zero && e != a && e != neg_a {
                return domain(format!("arc {x}->{y} has weight {e} outside {{0, a, -a}}"));
            }
        }
    }
    for &x in verts {
        for &y in verts {
            for &z in verts {
                if x == y || y == z || x == z {
                    continue;
                }
                for c in [a, neg_a] {
                    if w.edge(x, y) == Some(c) && w.edge(y, z) == Some(c) && w.edge(x, z) == Some(grp.neg(c)) {
                        return Ok(Some(HeavyTriple { x, y, z, c }));
                    }
                }
            }
        }
    }
    Ok(None)
}

/// Hamiltonian path of the subgraph induced by `verts` using only arcs of
/// weight `c`. Backtracking with a memo of dead `(visited, last)` states.
pub fn mono_hamiltonian_path<G: WeightedAdjacency>(
    g: &G,
    verts: &[usize],
    c: GroupElem,
    budget: SearchBudget,
) -> Result<Search<PathWitness>> {
    if verts.len() > 63 {
        return domain("at most 63 vertices supported");
    }
    if verts.is_empty() {
        return Ok(Search::Exhausted);
    }
    let m = verts.len();
    let full: u64 = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
    let mut meter = Meter::new(budget);
    let mut dead: HashSet<(u64, usize)> = HashSet::new();
    let mut path: Vec<usize> = Vec::with_capacity(m);

    #[allow(clippy::too_many_arguments)]
    fn go<G: WeightedAdjacency>(
        g: &G,
        verts: &[usize],
        c: GroupElem,
        full: u64,
        mask: u64,
        last: usize,
        path: &mut Vec<usize>,
        dead: &mut HashSet<(u64, usize)>,
        meter: &mut Meter,
    ) -> ControlFlow<bool> {
        if mask == full {
            return ControlFlow::Break(true);
        }
        if dead.contains(&(mask, last)) {
            return ControlFlow::Continue(());
        }
        for (j, &next) in verts.iter().enumerate() {
            if mask >> j & 1 == 1 || g.edge(verts[last], next) != Some(c) {
                continue;
            }
            if meter.tick() {
                return ControlFlow::Break(false);
            }
            path.push(next);
            go(g, verts, c, full, mask | 1 << j, j, path, dead, meter)?;
            path.pop();
        }
        dead.insert((mask, last));
        ControlFlow::Continue(())
    }

    for start in 0..m {
        path.clear();
        path.push(verts[start]);
        match go(g, verts, c, full, 1 << start, start, &mut path, &mut dead, &mut meter) {
            ControlFlow::Break(true) => {
                let weight = g.walk_weight(&path, false).expect("arcs exist");
                return Ok(Search::Found(PathWitness { vertices: path, weight }));
            }
            ControlFlow::Break(false) => return Ok(Search::BudgetExceeded),
            ControlFlow::Continue(()) => {}
        }
    }
    Ok(Search::Exhausted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::WeightedGraph;
    use crate::group::GroupSpec;

    fn zk(k: u32) -> GroupSpec {
        GroupSpec::cyclic(k).unwrap()
    }

    #[test]
    fn inverse_two_cycle_is_zero() {
        let z = zk(5);
        let g = WeightedDigraph::complete_with(z.clone(), 2, |u, _| if u == 0 { z.elem(1) } else { z.elem(4) });
        let c = find_zero_cycle(&g, 2, SearchBudget::unlimited())
            .unwrap()
            .found()
            .unwrap();
        assert_eq!(c.vertices, vec![0, 1]);
    }

    #[test]
    fn cycle_counts_of_complete_graphs() {
        let z = zk(3);
        // sum_{l=2..5} C(5,l) (l-1)! = 10 + 20 + 30 + 24
        let g = WeightedDigraph::complete_with(z.clone(), 5, |_, _| z.elem(1));
        assert_eq!(count_cycles(&g, 2), 84);
        // undirected K_5: sum_{l=3..5} C(5,l) (l-1)!/2 = 10 + 15 + 12
        let h = WeightedGraph::complete_with(z.clone(), 5, |_, _| z.elem(1));
        assert_eq!(count_cycles(&h, 3), 37);
    }

    #[test]
    fn min_len_floor_is_enforced() {
        let z = zk(3);
        let h = WeightedGraph::complete_with(z.clone(), 3, |_, _| z.zero());
        assert!(find_zero_cycle(&h, 2, SearchBudget::unlimited()).is_err());
        let d = WeightedDigraph::complete_with(z.clone(), 3, |_, _| z.zero());
        assert!(find_zero_cycle(&d, 1, SearchBudget::unlimited()).is_err());
    }

    #[test]
    fn budget_exhaustion_is_not_a_negative() {
        let z = zk(7);
        let g = WeightedDigraph::complete_with(z.clone(), 7, |u, v| z.elem(if u < v { 0 } else { 1 }));
        let r = find_zero_cycle(&g, 2, SearchBudget::nodes(10)).unwrap();
        assert_eq!(r, Search::BudgetExceeded);
        let r = find_zero_cycle(&g, 2, SearchBudget::unlimited()).unwrap();
        assert_eq!(r, Search::Exhausted);
    }

    #[test]
    fn paths_base_case() {
        let z = zk(2);
        let g = WeightedDigraph::complete_with(z.clone(), 3, |_, _| z.zero());
        let s = distinct_weight_paths(&g, 0, 2, 1, SearchBudget::unlimited()).unwrap();
        let fam = s.outcome.found().unwrap();
        assert_eq!(fam.paths[0].vertices, vec![0, 1, 2]);
    }

    #[test]
    fn paths_two_distinct_when_xu_differs() {
        // v = 0, x = 1, y = 2, u = 3 with w(xu) != w(xy) + w(yu).
        let z = zk(5);
        let mut g = WeightedDigraph::complete_with(z.clone(), 4, |_, _| z.zero());
        g.set_edge(1, 3, z.elem(2)).unwrap();
        let s = distinct_weight_paths(&g, 0, 3, 2, SearchBudget::unlimited()).unwrap();
        let fam = s.outcome.found().unwrap();
        assert_eq!(fam.paths[0].vertices, vec![0, 1, 2, 3]);
        assert_eq!(fam.paths[1].vertices, vec![0, 1, 3]);
        assert_ne!(fam.paths[0].weight, fam.paths[1].weight);
    }

    #[test]
    fn heavy_triple_detection() {
        let z = zk(5);
        let zero = WeightedDigraph::complete_with(z.clone(), 4, |_, _| z.zero());
        assert_eq!(find_heavy_triple(&zero, &[0, 1, 2, 3], z.elem(1)).unwrap(), None);
        let mut g = zero.clone();
        g.set_edge(0, 1, z.elem(1)).unwrap();
        g.set_edge(1, 2, z.elem(1)).unwrap();
        g.set_edge(0, 2, z.elem(4)).unwrap();
        let t = find_heavy_triple(&g, &[0, 1, 2, 3], z.elem(1)).unwrap().unwrap();
        assert_eq!((t.x, t.y, t.z, t.c), (0, 1, 2, z.elem(1)));
        g.set_edge(3, 0, z.elem(2)).unwrap();
        assert!(find_heavy_triple(&g, &[0, 1, 2, 3], z.elem(1)).is_err());
    }

    #[test]
    fn mono_path_single_edge_and_dag_order() {
        let z = zk(5);
        let c = z.elem(2);
        let g = WeightedDigraph::complete_with(z.clone(), 2, |_, _| c);
        let p = mono_hamiltonian_path(&g, &[0, 1], c, SearchBudget::unlimited())
            .unwrap()
            .found()
            .unwrap();
        assert_eq!(p.vertices, vec![0, 1]);

        // 0-arcs go from higher to lower index, everything else weighs c.
        let g = WeightedDigraph::complete_with(z.clone(), 5, |u, v| if u > v { z.zero() } else { c });
        let p = mono_hamiltonian_path(&g, &[0, 1, 2, 3, 4], c, SearchBudget::unlimited())
            .unwrap()
            .found()
            .unwrap();
        assert_eq!(p.vertices, vec![0, 1, 2, 3, 4]);
        let none = mono_hamiltonian_path(&g, &[0, 1, 2, 3, 4], z.elem(1), SearchBudget::unlimited()).unwrap();
        assert_eq!(none, Search::Exhausted);
    }
}
